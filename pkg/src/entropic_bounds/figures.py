"""Tabulated data behind the comparison figures, plus CSV serialisation.

Each ``figure*`` function returns an :class:`OutputRecord`; nothing here
draws anything.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Optional, Sequence, TextIO

import numpy as np

from .analysis import DEFAULT_TOL, boundary_root, minimize_conditional_sum
from .bounds import bound_bccrr, bound_kpp_tsallis, bound_maj2, bound_mu, bound_state_dependent
from .errors import DomainError
from .scenario import HALF_PI, conditional_sum_value, overlap_c

LN2 = math.log(2.0)
THREADS_ENV = "ENTROPIC_BOUNDS_THREADS"
FIGURE_IDS = ("1", "2a", "2b", "3", "4")
FIG2_DEFAULTS = {"2a": (0.1, math.pi / 4.2), "2b": (0.1, math.pi / 6)}
FIG3_EPSILON = math.pi / 8
FIG4_Q_LIST = (0.5, 1.0, 1.5, 2.0)


@dataclass
class OutputRecord:
    """Named columns of reals. ``None`` marks a value that does not exist."""

    columns: List[str]
    rows: List[tuple] = field(default_factory=list)
    # columns holding entropies, rescaled when output is requested in bits
    entropic: frozenset = frozenset()

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError(f"expected {len(self.columns)} values, got {len(values)}")
        self.rows.append(tuple(values))

    def column(self, name: str) -> np.ndarray:
        k = self.columns.index(name)
        return np.array([np.nan if r[k] is None else r[k] for r in self.rows], dtype=float)

    def in_bits(self) -> "OutputRecord":
        idx = [i for i, c in enumerate(self.columns) if c in self.entropic]
        rows = []
        for row in self.rows:
            row = list(row)
            for i in idx:
                if row[i] is not None:
                    row[i] = row[i] / LN2
            rows.append(tuple(row))
        return OutputRecord(list(self.columns), rows, self.entropic)


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    return f"{float(value) + 0.0:.12g}"  # + 0.0 turns -0.0 into 0.0


def write_csv(record: OutputRecord, stream: TextIO, config: Optional[dict] = None):
    """Write ``record`` as CSV, preceded by a ``#`` line carrying ``config``."""
    if config is not None:
        stream.write("# " + " ".join(f"{k}={config[k]}" for k in sorted(config)) + "\n")
    stream.write(",".join(record.columns) + "\n")
    for row in record.rows:
        stream.write(",".join(format_value(v) for v in row) + "\n")


def read_csv(stream: TextIO) -> OutputRecord:
    """Inverse of :func:`write_csv`; comment lines are skipped."""
    lines = [ln.rstrip("\n") for ln in stream if ln.strip() and not ln.startswith("#")]
    record = OutputRecord(lines[0].split(","))
    for line in lines[1:]:
        record.add(*(None if v == "" else float(v) for v in line.split(",")))
    return record


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise DomainError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise DomainError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


def ordered_map(func: Callable, items: Sequence, threads: Optional[int] = None) -> list:
    """``map`` that may run on a thread pool but always returns results in input order."""
    threads = thread_count() if threads is None else threads
    if threads <= 1 or len(items) < 2:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


def _axis(lo: float, hi: float, points: int) -> np.ndarray:
    if points < 2:
        raise DomainError(f"resolution must be >= 2 points, got {points}")
    return np.linspace(lo, hi, points)


def figure1(points: int = 181, tol: float = DEFAULT_TOL, threads: Optional[int] = None) -> OutputRecord:
    """Product state (``lam = 0``, von Neumann): optimum and bounds against ``eps``."""
    eps_axis = _axis(0.0, HALF_PI, points)
    minima = ordered_map(lambda e: minimize_conditional_sum(0.0, e, 1.0, tol).min_value,
                         list(eps_axis), threads)
    record = OutputRecord(["epsilon", "optimal", "b_mu", "b_maj2", "b_kpp"],
                          entropic=frozenset({"optimal", "b_mu", "b_maj2", "b_kpp"}))
    for eps, best in zip(eps_axis, minima):
        c = overlap_c(eps)
        record.add(eps, best, bound_mu(c), bound_maj2(c), bound_kpp_tsallis(0.0, c, 1.0))
    return record


def figure2(lam: float, epsilon: float, points: int = 181) -> OutputRecord:
    """Exact sum, angle-resolved bound and the memory-assisted bound against ``theta``."""
    theta = _axis(0.0, HALF_PI, points)
    exact = np.asarray(conditional_sum_value(lam, theta, epsilon, 1.0))
    dependent = np.asarray(bound_state_dependent(lam, theta, epsilon, 1.0))
    bccrr = bound_bccrr(overlap_c(epsilon), lam)
    record = OutputRecord(["theta", "exact", "b_theta", "b_bccrr"],
                          entropic=frozenset({"exact", "b_theta", "b_bccrr"}))
    for row in zip(theta, exact, dependent):
        record.add(*row, bccrr)
    return record


def figure3(points: int = 101, epsilon: float = FIG3_EPSILON) -> OutputRecord:
    """Same quantities against ``lam`` at ``theta = pi/2 - eps/2``."""
    lam = _axis(0.0, 1.0, points)
    theta = HALF_PI - epsilon / 2
    c = overlap_c(epsilon)
    exact = np.asarray(conditional_sum_value(lam, theta, epsilon, 1.0))
    dependent = np.asarray(bound_state_dependent(lam, theta, epsilon, 1.0))
    record = OutputRecord(["lambda", "exact", "b_theta", "b_bccrr"],
                          entropic=frozenset({"exact", "b_theta", "b_bccrr"}))
    for lm, ex, dep in zip(lam, exact, dependent):
        record.add(lm, ex, dep, bound_bccrr(c, lm))
    return record


def figure4(points: int = 101, q_list: Iterable[float] = FIG4_Q_LIST) -> OutputRecord:
    """Critical overlap ``c*(lam)`` on ``lam in [0, 1/2]``, one column per order."""
    q_list = [float(q) for q in q_list]
    lam = _axis(0.0, 0.5, points)
    record = OutputRecord(["lambda"] + [f"c_star_q{q:g}" for q in q_list])
    for lm in lam:
        record.add(lm, *(boundary_root(lm, q) for q in q_list))
    return record


def build_figure(fig_id: str, points: int, tol: float = DEFAULT_TOL,
                 lam: Optional[float] = None, epsilon: Optional[float] = None,
                 q_list: Optional[Iterable[float]] = None) -> OutputRecord:
    if fig_id == "1":
        return figure1(points, tol)
    if fig_id in FIG2_DEFAULTS:
        lam0, eps0 = FIG2_DEFAULTS[fig_id]
        return figure2(lam0 if lam is None else lam, eps0 if epsilon is None else epsilon, points)
    if fig_id == "3":
        return figure3(points, FIG3_EPSILON if epsilon is None else epsilon)
    if fig_id == "4":
        return figure4(points, FIG4_Q_LIST if q_list is None else q_list)
    raise DomainError(f"unknown figure {fig_id!r}; choose from {', '.join(FIGURE_IDS)}")
