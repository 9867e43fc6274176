"""Consensus on a five-node ring with one Byzantine node.

Runs the phase-enumerating protocol against a node that tampers with every
relayed value, and the identification-based protocol against the same
adversary, then sweeps every input and placement.
"""
# %%
from lbconsensus import run_algorithm1, run_algorithm2
from lbconsensus.adversaries import parse_strategy
from lbconsensus.harness import SweepSpec, cycle, run_sweep

ring = cycle(5)
inputs = [0, 1, 1, 0, 1]

# %% [markdown]
# Node 2 flips every bit it relays. Its neighbours overhear each relay, so
# the lie cannot be told to one side only.

# %%
tr = run_algorithm1(ring, 1, inputs, parse_strategy("tamper:all"), {2})
print(tr.decide_block(), end="")
print("rounds:", tr.round_count)

# %% [markdown]
# The second protocol finishes in at most three phases of n rounds.

# %%
tr = run_algorithm2(ring, 1, inputs, parse_strategy("tamper:all"), {2})
print(tr.decide_block(), end="")
print("rounds:", tr.round_count)

# %% [markdown]
# A full sweep: 32 input vectors, no fault or one fault at any node, and four
# behaviours.

# %%
rep = run_sweep(SweepSpec(graph=ring, protocol="alg1", f=1, strategies=["silent", "flip", "tamper:alternate", "garbage"]))
print(rep.summary())
