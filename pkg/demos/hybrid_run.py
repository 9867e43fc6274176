"""Consensus when one of two faulty nodes can equivocate.

K6 with f = 2 and t = 1: node 0 sends different values to different
neighbours, node 3 tampers with what it relays.
"""
# %%
from lbconsensus import check_hybrid, run_algorithm3
from lbconsensus.adversaries import parse_strategy
from lbconsensus.harness import complete

g = complete(6)
print(check_hybrid(g, 2, 1).summary())

# %%
strategy = parse_strategy("equivocate:1=0,2=1,4=0,5=1/tamper:all")
tr = run_algorithm3(g, 2, 1, [1, 0, 1, 1, 0, 0], strategy, {0, 3}, {0})
print(tr.decide_block(), end="")
print("rounds:", tr.round_count)
