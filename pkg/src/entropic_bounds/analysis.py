"""Numerical checks that do not rely on the closed forms they verify.

* brute-force minimisation of the conditional entropy sum over ``theta``
  (periodic grid scan + golden-section refinement),
* bisection for the curve ``c*(lam)`` separating the single- and
  double-minimum regimes,
* grid evaluation of the gap function behind the binary-entropy inequality
  used to derive the bound, and a sweep checking the bounds themselves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import bisect

from .bounds import C_MIN, LN2, boundary_lhs, bound_state_dependent, kpp_coefficient
from .entropy import as_probability, binary_shannon, check_order, is_limit, tsallis_point
from .errors import DomainError, InvalidOrderError
from .scenario import HALF_PI, QUARTER_PI, check_angle, conditional_sum_value, overlap_c

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
DEFAULT_TOL = 1e-9
DEFAULT_GRID = 2000
FLAT_TOL = 1e-12
# minima whose values differ by less than this are treated as degenerate
VALUE_TOL = 1e-10
BISECT_XTOL = 1e-8
C_BRACKET = (C_MIN + 1e-9, 1.0 - 1e-9)
PROPOSITION_EQUALITY_ORDERS = (2.0, 3.0)
MAX_RECORDED = 100


class Regime(str, Enum):
    SINGLE = "SingleMinimum"
    DOUBLE = "DoubleMinimum"
    FLAT = "Flat"


@dataclass(frozen=True)
class MinimizationResult:
    theta_star: float
    min_value: float
    local_minima: List[Tuple[float, float]]
    regime: Regime


def golden_section(f: Callable[[float], float], lo: float, hi: float,
                   tol: float = DEFAULT_TOL, max_iter: int = 500) -> Tuple[float, float]:
    """Minimise a unimodal ``f`` on ``[lo, hi]`` until the bracket is below ``tol``.

    Returns ``(x, f(x))`` for the best point seen, endpoints included.
    """
    a, b = lo, hi
    x1 = b - GOLDEN * (b - a)
    x2 = a + GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - GOLDEN * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + GOLDEN * (b - a)
            f2 = f(x2)
    mid = 0.5 * (a + b)
    candidates = [(f(mid), mid), (f1, x1), (f2, x2), (f(lo), lo), (f(hi), hi)]
    fx, x = min(candidates)
    return x, fx


def guess_point(epsilon: float) -> float:
    """The symmetric extremum that the analytic minimum refers to.

    ``pi/2 - eps/2`` for ``eps <= pi/4`` and ``pi/4 - eps/2`` otherwise; both
    lie in ``[0, pi/2]``.
    """
    eps = float(epsilon)
    return HALF_PI - eps / 2 if eps <= QUARTER_PI else QUARTER_PI - eps / 2


def circular_distance(a: float, b: float, period: float = HALF_PI) -> float:
    d = abs(a - b) % period
    return min(d, period - d)


def minimize_conditional_sum(lam: float, epsilon: float, q: float,
                             tol: float = DEFAULT_TOL,
                             grid_points: int = DEFAULT_GRID) -> MinimizationResult:
    """Global minimum over ``theta`` of the conditional entropy sum.

    The objective has period ``pi/2`` in ``theta``, so the scan treats
    ``[0, pi/2)`` as a circle: every cyclic sign change of the discrete
    derivative from negative to non-negative brackets a minimum, which is
    then refined by golden section. Minimisers closer than ``10 * tol`` are
    merged. The regime counts the minimisers attaining the global value.
    """
    lam = float(as_probability(lam, "lambda"))
    eps = float(check_angle(epsilon, "epsilon"))
    q = check_order(q)
    if not 0 < tol <= 1e-3:
        raise DomainError(f"tol must lie in (0, 1e-3], got {tol}")
    if grid_points < 3:
        raise DomainError(f"grid_points must be >= 3, got {grid_points}")

    step = HALF_PI / grid_points
    grid = np.arange(grid_points) * step
    values = np.asarray(conditional_sum_value(lam, grid, eps, q))

    def objective(theta):
        return float(conditional_sum_value(lam, theta, eps, q))

    if np.abs(np.diff(np.append(values, values[0]))).sum() < FLAT_TOL:
        theta = guess_point(eps) % HALF_PI
        value = objective(theta)
        return MinimizationResult(theta, value, [(theta, value)], Regime.FLAT)

    forward = np.roll(values, -1) - values
    backward = values - np.roll(values, 1)
    candidates = np.flatnonzero((backward < 0) & (forward >= 0))

    minima: List[Tuple[float, float]] = []
    for i in candidates:
        centre = grid[i]
        theta, value = golden_section(objective, centre - step, centre + step, tol)
        theta %= HALF_PI
        for k, (t_old, v_old) in enumerate(minima):
            if circular_distance(theta, t_old) < 10 * tol:
                if value < v_old:
                    minima[k] = (theta, value)
                break
        else:
            minima.append((theta, value))
    minima.sort()

    theta_star, min_value = min(minima, key=lambda m: m[1])
    n_global = sum(1 for _, v in minima if v - min_value < VALUE_TOL)
    regime = Regime.SINGLE if n_global == 1 else Regime.DOUBLE
    return MinimizationResult(theta_star, min_value, minima, regime)


@dataclass(frozen=True)
class BoundaryCurve:
    q: float
    points: List[Tuple[float, float]]

    def as_dict(self) -> dict:
        return dict(self.points)


def boundary_root(lam: float, q: float) -> Optional[float]:
    """Critical overlap ``c*`` for one ``lam``, or None without a sign change."""
    lo, hi = C_BRACKET

    def g(c):
        return boundary_lhs(lam, c, q)

    g_lo, g_hi = g(lo), g(hi)
    if not (np.isfinite(g_lo) and np.isfinite(g_hi)) or g_lo * g_hi >= 0:
        return None
    return bisect(g, lo, hi, xtol=BISECT_XTOL)


def boundary_curve(q: float, lambda_grid: Iterable[float]) -> BoundaryCurve:
    """Bisect the regime boundary ``c*(lam)`` for each ``lam`` in ``[0, 1/2]``.

    Values of ``lam`` without a sign change on ``(sqrt(2)/2, 1)`` are left out.
    """
    q = check_order(q)
    points = []
    for lam in lambda_grid:
        lam = float(as_probability(lam, "lambda"))
        if lam > 0.5:
            raise DomainError(f"boundary curve is tabulated for lambda in [0, 1/2], got {lam}")
        root = boundary_root(lam, q)
        if root is not None:
            points.append((lam, root))
    return BoundaryCurve(q, points)


def _proposition_ratio(alpha: np.ndarray, q: float) -> np.ndarray:
    if is_limit(q):
        h = np.asarray(binary_shannon(alpha))
        return (LN2 - h) / (1.0 - h)
    s = np.power(alpha, q) + np.power(1.0 - alpha, q)
    num = np.where(alpha == 0.5, 0.0, s - 2.0 ** (1.0 - q))
    return num / (s + q - 2.0)


def proposition_gap(alpha, p, q: float):
    """Gap ``f(p)`` between the binary entropy of a mixed bias and its quadratic minorant.

    ``f(p) = t_q(alpha p + (1-alpha)(1-p)) - 4 K p(1-p) (1 - t_q(alpha)) - t_q(alpha)``
    with ``K = (alpha^q + (1-alpha)^q - 2^(1-q)) / (alpha^q + (1-alpha)^q + q - 2)``.
    Broadcasts over ``alpha`` and ``p``.
    """
    q = check_order(q)
    if q == 0.0:
        raise InvalidOrderError("the quadratic coefficient is 0/0 at q = 0")
    alpha = as_probability(alpha, "alpha")
    p = as_probability(p, "p")
    t_alpha = np.asarray(tsallis_point(alpha, q))
    mixed = np.clip(alpha * p + (1.0 - alpha) * (1.0 - p), 0.0, 1.0)
    gap = (np.asarray(tsallis_point(mixed, q))
           - 4.0 * _proposition_ratio(alpha, q) * p * (1.0 - p) * (1.0 - t_alpha)
           - t_alpha)
    return float(gap) if gap.ndim == 0 else gap


def proposition_slope_origin(alpha, q: float):
    """Closed-form ``f'(0)`` of :func:`proposition_gap`."""
    q = check_order(q)
    if is_limit(q):
        raise InvalidOrderError(f"closed-form slope needs q outside the q -> 1 band, got {q}")
    alpha = np.asarray(alpha, dtype=float)
    if np.any((alpha <= 0) | (alpha >= 1)):
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    value = (alpha ** (q - 1) * (2 * alpha * (q - 2) - q)
             + (4 * alpha - 2 * alpha * q + q - 4) * (1 - alpha) ** (q - 1)
             + 2.0 ** (3 - q)) / (q - 1)
    return float(value) if value.ndim == 0 else value


def in_proposition_range(q: float) -> bool:
    return 0.0 <= q <= 2.0 or q >= 3.0


@dataclass
class PropositionReport:
    q_values: List[float]
    grid_min_gap: float
    equality_max_abs: float
    violations: List[Tuple[float, float, float, float]] = field(default_factory=list)
    violation_count: int = 0
    warnings: List[Tuple[float, float, float, float]] = field(default_factory=list)
    warning_count: int = 0
    min_gap_by_q: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.violation_count == 0


def default_grid(n: int = 201) -> np.ndarray:
    return np.linspace(0.0, 1.0, n)


def _record(store: list, a: np.ndarray, p: np.ndarray, q: float, gap: np.ndarray,
            mask: np.ndarray) -> int:
    idx = np.argwhere(mask)
    for i, j in idx[: max(0, MAX_RECORDED - len(store))]:
        store.append((float(a[i]), float(p[j]), q, float(gap[i, j])))
    return len(idx)


def verify_proposition(alpha_grid: Sequence[float] = None, p_grid: Sequence[float] = None,
                       q_list: Sequence[float] = (0.5, 1, 1.5, 2, 3, 4, 10),
                       tol: float = 1e-10, strict_range: bool = False) -> PropositionReport:
    """Evaluate the gap function on a full ``alpha x p`` grid for each ``q``.

    Negative gaps below ``-tol`` are violations when ``q`` is in
    ``[0, 2] U [3, inf)``; outside that range they are only warnings unless
    ``strict_range`` is set.
    """
    a = np.asarray(default_grid() if alpha_grid is None else alpha_grid, dtype=float)
    p = np.asarray(default_grid() if p_grid is None else p_grid, dtype=float)
    report = PropositionReport(q_values=[float(q) for q in q_list],
                               grid_min_gap=math.inf, equality_max_abs=0.0)
    for q in report.q_values:
        gap = np.asarray(proposition_gap(a[:, None], p[None, :], q))
        report.min_gap_by_q[q] = float(gap.min())
        report.grid_min_gap = min(report.grid_min_gap, float(gap.min()))
        if any(abs(q - qe) < 1e-15 for qe in PROPOSITION_EQUALITY_ORDERS):
            report.equality_max_abs = max(report.equality_max_abs, float(np.abs(gap).max()))
        bad = gap < -tol
        if strict_range or in_proposition_range(q):
            report.violation_count += _record(report.violations, a, p, q, gap, bad)
        else:
            report.warning_count += _record(report.warnings, a, p, q, gap, bad)
    return report


@dataclass
class BoundSweepReport:
    q_values: List[float]
    checked: int
    kpp_min_margin: float
    theta_min_margin: float
    failures: List[Tuple[float, float, float, float, str, float]] = field(default_factory=list)
    failure_count: int = 0
    warnings: List[Tuple[float, float, float, float, str, float]] = field(default_factory=list)
    warning_count: int = 0

    @property
    def ok(self) -> bool:
        return self.failure_count == 0


def bound_margins(lam_grid, eps_grid, theta_grid, q: float):
    """Return ``(exact - B_kpp, exact - B(theta))`` on the full 3-D grid."""
    lam = np.asarray(lam_grid, dtype=float)[:, None, None]
    eps = np.asarray(eps_grid, dtype=float)[None, :, None]
    theta = np.asarray(theta_grid, dtype=float)[None, None, :]
    exact = np.asarray(conditional_sum_value(lam, theta, eps, q))
    c = np.asarray(overlap_c(eps))
    kpp = np.asarray(kpp_coefficient(lam, q)) * (1.0 - c * c)
    dependent = np.asarray(bound_state_dependent(lam, theta, eps, q))
    return exact - kpp, exact - dependent


def verify_bounds(lam_grid, eps_grid, theta_grid, q_list, tol: float = 1e-9,
                  strict_range: bool = False) -> BoundSweepReport:
    """Check ``exact >= B_kpp - tol`` and ``exact >= B(theta) - tol`` on a grid."""
    lam_grid = np.asarray(lam_grid, dtype=float)
    eps_grid = np.asarray(eps_grid, dtype=float)
    theta_grid = np.asarray(theta_grid, dtype=float)
    report = BoundSweepReport(q_values=[float(q) for q in q_list], checked=0,
                              kpp_min_margin=math.inf, theta_min_margin=math.inf)
    for q in report.q_values:
        m_kpp, m_theta = bound_margins(lam_grid, eps_grid, theta_grid, q)
        report.checked += m_kpp.size
        report.kpp_min_margin = min(report.kpp_min_margin, float(m_kpp.min()))
        report.theta_min_margin = min(report.theta_min_margin, float(m_theta.min()))
        flagged = strict_range or in_proposition_range(q)
        for name, margin in (("kpp", m_kpp), ("theta", m_theta)):
            idx = np.argwhere(margin < -tol)
            store = report.failures if flagged else report.warnings
            for i, j, k in idx[: max(0, MAX_RECORDED - len(store))]:
                store.append((float(lam_grid[i]), float(eps_grid[j]), float(theta_grid[k]),
                              q, name, float(margin[i, j, k])))
            if flagged:
                report.failure_count += len(idx)
            else:
                report.warning_count += len(idx)
    return report
