"""Closed-form lower bounds on ``T_q(X|B) + T_q(Y|B)`` and analytic minima.

Literature bounds (Deutsch, Maassen-Uffink, qubit majorization, Berta et al.)
act on the overlap ``c`` alone (plus ``S(A|B)`` for the memory-assisted one).
The entanglement-dependent bound is ``kpp_coefficient(lam, q) * (1 - c**2)``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np
from scipy.special import entr

from .entropy import as_probability, binary_shannon, check_order, is_limit, tsallis_point
from .errors import DomainError, InvalidOrderError
from .scenario import Scenario, conditional_sum

LN2 = math.log(2.0)
C_MIN = math.sqrt(0.5)
C_TOL = 1e-12


def _overlap(c, lower=0.0, strict=True):
    arr = np.asarray(c, dtype=float)
    bad = (arr <= lower) if strict else (arr < lower - C_TOL)
    if np.any(np.isnan(arr)) or np.any(bad) or np.any(arr > 1.0 + C_TOL):
        lo = "(" if strict else "["
        raise DomainError(f"overlap c must lie in {lo}{lower:.6g}, 1], got {c}")
    arr = np.clip(arr, lower, 1.0)
    return float(arr) if arr.ndim == 0 else arr


def _positive_order(q):
    q = check_order(q)
    if q == 0.0:
        raise InvalidOrderError("q = 0 makes the bound prefactor 0/0; use q > 0")
    return q


def bound_deutsch(c: float) -> float:
    """Deutsch bound ``-2 ln((1 + c) / 2)``."""
    c = _overlap(c)
    return 0.0 - 2.0 * math.log((1.0 + c) / 2.0)


def bound_mu(c: float) -> float:
    """Maassen-Uffink bound ``-2 ln c``."""
    c = _overlap(c)
    return 0.0 - 2.0 * math.log(c)


def bound_maj2(c: float) -> float:
    """Strong majorization bound for qubits, the binary entropy of ``c``."""
    return binary_shannon(_overlap(c))


def bound_bccrr(c: float, lam: float) -> float:
    """Memory-assisted bound ``-2 ln c + S(A|B)`` for the Schmidt state (nats)."""
    lam = float(as_probability(lam, "lambda"))
    return bound_mu(c) - binary_shannon(lam)


def kpp_coefficient(lam, q: float):
    """Prefactor of ``(1 - c**2)`` in the entanglement-dependent bound.

    ``2 (lam^q + (1-lam)^q - 2^(1-q)) / (lam^q + (1-lam)^q + q - 2) (1 - t_q(lam))``,
    with the removable ``0/0`` at ``q = 1`` replaced by ``2 (ln 2 - h(lam))``.
    Exactly zero at ``lam = 1/2``.
    """
    q = _positive_order(q)
    lam = as_probability(lam, "lambda")
    if is_limit(q):
        value = 2.0 * (LN2 - np.asarray(binary_shannon(lam)))
    else:
        s = np.power(lam, q) + np.power(1.0 - lam, q)
        num = np.where(lam == 0.5, 0.0, s - 2.0 ** (1.0 - q))
        value = 2.0 * num / (s + q - 2.0) * (1.0 - np.asarray(tsallis_point(lam, q)))
    value = np.where(lam == 0.5, 0.0, value)
    return float(value) if value.ndim == 0 else value


def bound_kpp_tsallis(lam, c: float, q: float):
    """State-independent bound ``kpp_coefficient(lam, q) * (1 - c**2)``."""
    c = _overlap(c, C_MIN, strict=False)
    value = np.asarray(kpp_coefficient(lam, q)) * (1.0 - c * c)
    return float(value) if value.ndim == 0 else value


def bound_state_dependent(lam, theta, epsilon, q: float):
    """Angle-resolved bound ``kpp/2 * (sin^2(2 theta + 2 eps) + sin^2(2 theta))``."""
    angles = np.sin(2.0 * np.add(theta, epsilon)) ** 2 + np.sin(2.0 * np.asarray(theta)) ** 2
    value = 0.5 * np.asarray(kpp_coefficient(lam, q)) * angles
    return float(value) if value.ndim == 0 else value


def bound_mixed_vn(s_b: float, c: float) -> float:
    """Mixed-state von Neumann bound ``2 (ln 2 - S(B)) (1 - c**2)``."""
    s_b = float(s_b)
    if math.isnan(s_b) or s_b < -C_TOL or s_b > LN2 + C_TOL:
        raise DomainError(f"S(B) of a qubit memory must lie in [0, ln 2], got {s_b}")
    c = _overlap(c, C_MIN, strict=False)
    return 2.0 * (LN2 - min(max(s_b, 0.0), LN2)) * (1.0 - c * c)


def analytic_min_vn(lam: float, c: float) -> float:
    """``ln 4 + eta(1 + c - 2 lam c) + eta(1 - c + 2 lam c) - 2 h(lam)``.

    This is the global minimum over ``theta`` only where
    :func:`boundary_condition` holds at ``q = 1``; checking that is up to
    the caller.
    """
    lam = float(as_probability(lam, "lambda"))
    c = _overlap(c, C_MIN, strict=False)
    shift = c * (1.0 - 2.0 * lam)
    # entr() is -x ln x and stays finite for the arguments in [0, 2] used here
    return float(math.log(4.0) + entr(1.0 + shift) + entr(1.0 - shift) - 2.0 * binary_shannon(lam))


def analytic_min_tsallis(lam: float, c: float, q: float) -> float:
    """Tsallis counterpart of :func:`analytic_min_vn`.

    ``2/(q-1) + 2^(1-q) (eta_q(1 + c - 2 lam c) + eta_q(1 - c + 2 lam c)) - 2 t_q(lam)``.
    """
    q = _positive_order(q)
    if is_limit(q):
        return analytic_min_vn(lam, c)
    lam = float(as_probability(lam, "lambda"))
    c = _overlap(c, C_MIN, strict=False)
    shift = c * (1.0 - 2.0 * lam)
    etas = -((1.0 + shift) ** q + (1.0 - shift) ** q) / (q - 1.0)
    return 2.0 / (q - 1.0) + 2.0 ** (1.0 - q) * etas - 2.0 * tsallis_point(lam, q)


def boundary_lhs(lam: float, c: float, q: float) -> float:
    """Left-hand side of the single-minimum inequality.

    ``lam`` is folded onto ``[0, 1/2]`` first: the expression is odd in
    ``1 - 2 lam`` and the published sign convention holds for ``lam <= 1/2``.
    For ``q`` in the limit band the minimum is single when the value is
    ``< 0``; for other ``q`` when it is ``> 0``.
    """
    q = _positive_order(q)
    lam = float(as_probability(lam, "lambda"))
    lam = min(lam, 1.0 - lam)
    c = float(c)
    a = 1.0 - 2.0 * lam
    if is_limit(q):
        return -c * math.atanh(a * c) + (2.0 * lam - 1.0) * (1.0 - c * c) / (c * c * a * a - 1.0)
    plus, minus = 1.0 + a * c, 1.0 - a * c
    return (
        plus ** (q - 2.0) * (2.0 * lam - 1.0 + (q * c * c * a + c) / (q - 1.0))
        + minus ** (q - 2.0) * (2.0 * lam - 1.0 + (q * c * c * a - c) / (q - 1.0))
    )


def boundary_condition(lam: float, c: float, q: float) -> bool:
    """Whether ``theta = pi/2 - eps/2`` (``pi/4 - eps/2`` when ``eps > pi/4``) is the global minimiser.

    ``c = 1`` and ``lam = 1/2`` return True by convention, as does exact
    equality in the inequality.
    """
    lam = float(as_probability(lam, "lambda"))
    c = _overlap(c, C_MIN, strict=False)
    _positive_order(q)
    if c >= 1.0 or lam == 0.5:
        return True
    lhs = boundary_lhs(lam, c, q)
    return lhs <= 0.0 if is_limit(q) else lhs >= 0.0


@dataclass(frozen=True)
class BoundSet:
    b_deutsch: float
    b_mu: float
    b_maj2: float
    b_kpp: float
    b_theta: float
    b_bccrr: Optional[float] = None
    analytic_min: Optional[float] = None

    def as_dict(self) -> dict:
        return asdict(self)


def all_bounds(s: Scenario) -> BoundSet:
    c = s.c
    vn = is_limit(s.q)
    analytic = None
    if boundary_condition(s.lam, c, s.q):
        analytic = analytic_min_tsallis(s.lam, c, s.q)
    return BoundSet(
        b_deutsch=bound_deutsch(c),
        b_mu=bound_mu(c),
        b_maj2=bound_maj2(c),
        b_kpp=bound_kpp_tsallis(s.lam, c, s.q),
        b_theta=bound_state_dependent(s.lam, s.theta, s.epsilon, s.q),
        b_bccrr=bound_bccrr(c, s.lam) if vn else None,
        analytic_min=analytic,
    )


def exact_and_bounds(s: Scenario):
    """Convenience pair ``(conditional_sum(s), all_bounds(s))``."""
    return conditional_sum(s), all_bounds(s)

