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

# # Benchmarking the sample systems
#
# `run_dir` times the complex tree, the eqs tree where it applies and the
# real CAD for each `*.sys` file.

import csv
import io
from pathlib import Path

from inccad.bench import run_dir, to_csv

systems = Path("systems") if Path("systems").is_dir() else Path("..") / "systems"
text = to_csv(run_dir(systems, repeat=3))
print(text)

# Paths per system and mode, with the slowest phase.

for row in csv.DictReader(io.StringIO(text)):
    cad_s = float(row["cad_s"]) if row["cad_s"] else 0.0
    print(f"{row['system']:>16} {row['mode']:>4} paths={row['paths']:>3} ccd={float(row['ccd_s']):.4f}s cad={cad_s:.4f}s")
