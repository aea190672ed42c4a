# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: light
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# # The parabola, step by step
#
# We decompose complex 2-space along `y^2 + x`, refine one path with a second
# polynomial, and then read off the real cells.

from inccad.ccd import Decomposer, cylindrical_decompose
from inccad.poly import VarOrder
from inccad.realcad import cad, render_cad
from inccad.tree import Kind

xy = VarOrder(["x", "y"])
x, y = xy.gens()


def show(tree):
    for path in tree.paths():
        print(" / ".join(tree[k].constraint.render(xy) for k in path[1:]))


# The initial tree has four paths.  Over `x = 0` the polynomial collapses to
# `y^2`, so the section is `y = 0`.

tree = cylindrical_decompose([y**2 + x], xy)
show(tree)

# Now intersect only the path `x = 0, y <> 0` with `y^2 + y`.  The rest of
# the tree is left alone.

(gamma,) = [p for p in tree.paths() if tree[p[1]].kind is Kind.EQ and tree[p[2]].kind is Kind.NEQ]
Decomposer(tree).intersect_path(y**2 + y, gamma, 2)
show(tree)

# Each leaf remembers the sign of every polynomial seen on its path.

for path in tree.paths():
    print(tree[path.leaf].signs)

# The real CAD has nine cells: five over `x < 0`, three over `x = 0` and one
# cylinder over `x > 0`.

c = cad([y**2 + x], xy)
print(len(c.cells))
print(render_cad(c))
