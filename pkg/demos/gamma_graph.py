"""Build the first two levels of minimal non-Eichler covers and write a DOT file."""
import sys

from eichlerkit.mnec import gamma_levels

graph = gamma_levels(depth=2, status=True)
for node in graph.nodes:
    print(node.ident, node.name, "mH =", node.mh, node.status)
path = sys.argv[1] if len(sys.argv) > 1 else "gamma.dot"
with open(path, "w") as fh:
    fh.write(graph.to_dot())
print("wrote", path)
