"""Which graphs admit Byzantine consensus?

Walks through the achievability checks for the three communication models
on a handful of small graphs, then shows how a single missing edge flips a
verdict.
"""
# %%
from lbconsensus import check, check_local_broadcast, vertex_connectivity
from lbconsensus.graph_core import Graph, min_degree
from lbconsensus.harness import complete, cycle, fig1b

# %% [markdown]
# A five-node ring has every node of degree 2 and connectivity 2. Under local
# broadcast, where each transmission reaches all neighbours identically, that
# is enough to tolerate one Byzantine node.

# %%
ring = cycle(5)
print(check_local_broadcast(ring, 1).summary())
print(check_local_broadcast(ring, 2).summary())

# %% [markdown]
# The same ring is hopeless under point-to-point links, where faulty nodes
# may tell different neighbours different things.

# %%
print(check(ring, "p2p", 1).summary())

# %% [markdown]
# An eight-node, 4-regular, 4-connected graph tolerates two faults. Deleting
# any one of its sixteen edges leaves some node with degree 3, and the check
# names it.

# %%
g = fig1b()
print("degree", min_degree(g), "connectivity", vertex_connectivity(g))
print(check_local_broadcast(g, 2).summary())
edges = g.sorted_edges()
thinner = Graph.from_edges(g.n, edges[1:])
print(f"without edge {edges[0]}:", check_local_broadcast(thinner, 2).summary())

# %% [markdown]
# The hybrid model caps how many of the f faulty nodes may equivocate. With
# f = 2 and one equivocator, K6 is the smallest complete graph that passes.

# %%
for n in (5, 6):
    print(f"K{n}:", check(complete(n), "hybrid", 2, 1).summary())
