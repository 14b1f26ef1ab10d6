"""Two-qubit Schmidt-state model.

The state is ``sqrt(lam)|00> + sqrt(1 - lam)|11>``. Alice measures in the
bases ``O(theta)|i>`` and ``O(theta + eps)|i>``, with ``O`` a real rotation.
Bob's qubit acts as the quantum memory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entropy import as_probability, check_order, tsallis_pair, tsallis_point
from .errors import DomainError

HALF_PI = math.pi / 2
QUARTER_PI = math.pi / 4
ANGLE_TOL = 1e-12


def check_angle(value, name):
    arr = np.asarray(value, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < -ANGLE_TOL) or np.any(arr > HALF_PI + ANGLE_TOL):
        raise DomainError(f"{name} must lie in [0, pi/2], got {value!r}")
    return np.clip(arr, 0.0, HALF_PI)


@dataclass(frozen=True)
class Scenario:
    """State weight, measurement angles (radians) and entropy order."""

    lam: float
    theta: float
    epsilon: float
    q: float = 1.0

    def __post_init__(self):
        as_probability(self.lam, "lambda")
        check_angle(self.theta, "theta")
        check_angle(self.epsilon, "epsilon")
        check_order(self.q)

    @property
    def c(self) -> float:
        return overlap_c(self.epsilon)


@dataclass(frozen=True)
class EigenPair:
    mu1: float
    mu2: float


def overlap_c(epsilon):
    """Maximal overlap between the two measurement bases.

    ``cos(eps)`` for ``eps <= pi/4``, ``sin(eps)`` otherwise; always in
    ``[sqrt(2)/2, 1]``.
    """
    eps = check_angle(epsilon, "epsilon")
    c = np.where(eps <= QUARTER_PI, np.cos(eps), np.sin(eps))
    return float(c) if c.ndim == 0 else c


def rotation(theta: float) -> np.ndarray:
    ct, st = math.cos(theta), math.sin(theta)
    return np.array([[ct, -st], [st, ct]])


def mu1(lam, theta):
    """Unchecked ``lam sin^2(theta) + (1 - lam) cos^2(theta)``, any real theta."""
    return lam * np.sin(theta) ** 2 + (1.0 - lam) * np.cos(theta) ** 2


def post_measurement_eigs(lam: float, theta: float) -> EigenPair:
    """Non-zero eigenvalues of the post-measurement state ``rho_XB``.

    For the second observable pass ``theta + eps``.
    """
    lam = float(as_probability(lam, "lambda"))
    m = float(np.clip(mu1(lam, theta), 0.0, 1.0))
    return EigenPair(m, 1.0 - m)


def conditional_sum_value(lam, theta, epsilon, q: float):
    """``T_q(X|B) + T_q(Y|B)`` for arbitrary (broadcastable) angles.

    Angles are not range-checked; the value is periodic in ``theta`` with
    period ``pi/2``.
    """
    lam = as_probability(lam, "lambda")
    phi = np.add(theta, epsilon)
    # mu1(lam, t + pi/2) is the second eigenvalue, computed without 1 - mu1
    ex = tsallis_pair(np.clip(mu1(lam, theta), 0, 1), np.clip(mu1(lam, theta + HALF_PI), 0, 1), q)
    ey = tsallis_pair(np.clip(mu1(lam, phi), 0, 1), np.clip(mu1(lam, phi + HALF_PI), 0, 1), q)
    value = np.asarray(ex) + ey - 2.0 * np.asarray(tsallis_point(lam, q))
    return value


def conditional_sum(s: Scenario) -> float:
    """Exact conditional entropy sum for a validated :class:`Scenario`."""
    return float(conditional_sum_value(s.lam, s.theta, s.epsilon, s.q))


def schmidt_conditional_entropy(lam, q: float = 1.0):
    """``T_q(A|B)`` of the pure Schmidt state, i.e. ``-t_q(lam)``."""
    value = -np.asarray(tsallis_point(as_probability(lam, "lambda"), q))
    return float(value) if value.ndim == 0 else value


def memory_entropy(lam, q: float = 1.0):
    """Entropy of Bob's reduced state ``diag(lam, 1 - lam)``."""
    return tsallis_point(as_probability(lam, "lambda"), q)
