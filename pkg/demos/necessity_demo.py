"""Why the conditions cannot be weakened.

On a three-node path with one fault, the degree condition fails. Splitting
the graph into a larger network with duplicated nodes yields three
executions of the original graph that a correct protocol would have to
handle, and they cannot all end well.
"""
# %%
import tempfile
from pathlib import Path

from lbconsensus import Algorithm1
from lbconsensus.harness import cycle, path_graph
from lbconsensus.indistinguishability import CONNECTIVITY, DEGREE, build_split_network, check_hearing, derive_executions, find_split_spec, write_demo

# %%
g = path_graph(3)
spec = find_split_spec(g, DEGREE, 1)
print(spec)
sn = build_split_network(g, spec)
check_hearing(sn)
print("split network edges:", [(sn.network.name(a), sn.network.name(b)) for a, b in sn.undirected_edges()])
print("one-way edges:", [(sn.network.name(a), sn.network.name(b)) for a, b in sn.directed_edges()])

# %% [markdown]
# Run the protocol on the split network, then project each of the three
# executions back onto the path. The middle one breaks agreement.

# %%
demo = derive_executions(sn, Algorithm1(g, 1, strict=False))
for ex in demo.executions:
    print(ex.name, "faulty", sorted(ex.faulty), "inputs", ex.inputs, "->", ex.trace.outputs(), ex.violations or "")
print(demo.verdict())

# %% [markdown]
# The connectivity construction on a ring with two faults works the same way.
# Scripts and traces are written so each execution can be replayed.

# %%
ring = cycle(5)
demo = derive_executions(build_split_network(ring, find_split_spec(ring, CONNECTIVITY, 2)), Algorithm1(ring, 2, strict=False))
out = Path(tempfile.mkdtemp())
write_demo(demo, out)
print(sorted(p.name for p in out.iterdir()))
print(demo.verdict())
