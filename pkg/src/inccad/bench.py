"""
Benchmark runner: times every system file of a directory in each mode.
"""
from __future__ import annotations

import csv
import hashlib
import io
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Optional

from . import ccd
from .parsing import parse_system
from .realcad import make_semi_algebraic

COLUMNS = ["system", "digest", "mode", "vars", "polys", "paths", "cells", "ccd_s", "cad_s"]


@dataclass
class RunReport:
    system: str
    digest: str
    mode: str  # ccd | eqs
    vars: int
    polys: int
    paths: int
    cells: Optional[int]
    ccd_s: float
    cad_s: Optional[float]


def run_file(path: Path, repeat: int = 1, with_cad: bool = True) -> list[RunReport]:
    """Reports for one system file: plain CCD (+ CAD) and, for constraint files, eqs mode."""
    text = Path(path).read_text(encoding="utf-8")
    digest = hashlib.sha256(text.encode()).hexdigest()[:12]
    system = parse_system(text)
    polys = [p for p in system.polys if not p.is_constant]
    out = []

    best, tree = _timed(lambda: ccd.cylindrical_decompose(polys, system.order), repeat)
    cells = cad_s = None
    if with_cad:
        cad_s, c = _timed(lambda: make_semi_algebraic(tree, polys), repeat)
        cells = len(c.cells)
    out.append(RunReport(Path(path).stem, digest, "ccd", system.order.n, len(polys), len(tree.paths()), cells, best, cad_s))
    if not system.is_plain:
        best, tree = _timed(lambda: ccd.solve_system(system), repeat)
        out.append(RunReport(Path(path).stem, digest, "eqs", system.order.n, len(system.items), len(tree.paths()), None, best, None))
    return out


def _timed(fn, repeat: int):
    best, result = None, None
    for _ in range(max(1, repeat)):
        t0 = time.perf_counter()
        result = fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, result


def run_dir(directory: Path, repeat: int = 1, pattern: str = "*.sys", with_cad: bool = True) -> list[RunReport]:
    reports = []
    for f in sorted(Path(directory).glob(pattern)):
        reports.extend(run_file(f, repeat, with_cad))
    return reports


def to_csv(reports: Iterable[RunReport]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in reports:
        row = asdict(r)
        for k in ("ccd_s", "cad_s"):
            if row[k] is not None:
                row[k] = f"{row[k]:.6f}"
        w.writerow({k: "" if v is None else v for k, v in row.items()})
    return buf.getvalue()
