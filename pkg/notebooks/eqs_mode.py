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

# # Solving constraint systems
#
# With constraints, the decomposition drops every branch where an equation
# fails or an inequation vanishes.  The result is a tree whose paths cover
# exactly the solutions.

import random
from pathlib import Path

from inccad import checks
from inccad.ccd import cylindrical_decompose, solve_system
from inccad.parsing import read_system

systems = Path("systems") if Path("systems").is_dir() else Path("..") / "systems"
system = read_system(systems / "example1_eqs.sys")
tree = solve_system(system)
for path in tree.paths():
    print(" / ".join(tree[k].constraint.render(system.order) for k in path[1:]))

# The solver finds both rational solutions, (0, 0) and (-1, -1).

print(checks.enumerate_solutions(tree, random.Random(0)))

# An independent answer from Groebner bases agrees.

print(checks.oracle_solutions(system))

# Pruning pays off with more variables.  The quartic surface in 3-space has
# about a third of the plain paths in eqs mode.

for name in ("example1_eqs", "sphere_quartic"):
    s = read_system(systems / f"{name}.sys")
    plain = cylindrical_decompose([p for p in s.polys if not p.is_constant], s.order)
    print(name, len(solve_system(s).paths()), len(plain.paths()))
