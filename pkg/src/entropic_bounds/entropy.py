"""Scalar and spectrum-level entropies (Shannon / von Neumann and Tsallis).

All entropies are in nats. Every function accepts scalars or numpy arrays and
broadcasts; scalar input gives a Python ``float`` back.

Orders with ``|q - 1| < Q_SWITCH`` are routed to the Shannon limit formulas,
since direct evaluation of ``(1 - sum p**q) / (q - 1)`` loses most of its
digits to cancellation there.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from scipy.special import entr

from .errors import DomainError, InvalidOrderError, SpectrumError

ArrayLike = Union[float, Sequence[float], np.ndarray]

Q_SWITCH = 1e-6
CLAMP_TOL = 1e-12
NORM_TOL = 1e-10


def is_limit(q: float) -> bool:
    """True when ``q`` lies in the band that uses the ``q -> 1`` formulas."""
    return abs(q - 1.0) < Q_SWITCH


def check_order(q: float) -> float:
    q = float(q)
    if not np.isfinite(q) or q < 0:
        raise InvalidOrderError(f"entropy order q must be finite and >= 0, got {q}")
    return q


def _out(value):
    value = np.asarray(value, dtype=float)
    return float(value) if value.ndim == 0 else value


def as_probability(x: ArrayLike, name: str = "x") -> np.ndarray:
    """Validate ``x`` as probabilities, clamping values within 1e-12 of [0, 1]."""
    arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < -CLAMP_TOL) or np.any(arr > 1 + CLAMP_TOL):
        raise DomainError(f"{name} must lie in [0, 1], got {x!r}")
    return np.clip(arr, 0.0, 1.0)


def _pow(x: np.ndarray, q: float) -> np.ndarray:
    # sums run over the support: 0**q == 0 for every q >= 0, including q == 0
    x = np.asarray(x, dtype=float)
    return np.where(x > 0, np.power(np.where(x > 0, x, 1.0), q), 0.0)


def eta(x: ArrayLike):
    """``-x ln x`` with the continuity value 0 at ``x = 0``."""
    return _out(entr(as_probability(x)))


def binary_shannon(x: ArrayLike):
    """Binary entropy ``h(x) = eta(x) + eta(1 - x)`` in nats."""
    x = as_probability(x)
    return _out(entr(x) + entr(1.0 - x))


def eta_q(x: ArrayLike, q: float):
    """Tsallis point term ``-x**q / (q - 1)``.

    There is no finite ``q -> 1`` limit, so orders inside the switch band
    raise :class:`InvalidOrderError`.
    """
    q = check_order(q)
    if is_limit(q):
        raise InvalidOrderError(f"eta_q is undefined in the q -> 1 band, got q={q}")
    x = as_probability(x)
    return _out(-_pow(x, q) / (q - 1.0))


def tsallis_point(x: ArrayLike, q: float):
    """Tsallis entropy ``t_q(x)`` of the two-outcome distribution ``(x, 1 - x)``.

    Falls back to :func:`binary_shannon` when ``q`` is in the limit band.

    >>> tsallis_point(0.5, 2)
    0.5
    """
    q = check_order(q)
    x = as_probability(x)
    if is_limit(q):
        return _out(entr(x) + entr(1.0 - x))
    return _pair_value(x, 1.0 - x, q)


def tsallis_pair(a: ArrayLike, b: ArrayLike, q: float):
    """``t_q`` of a two-outcome distribution given both probabilities.

    Equivalent to ``tsallis_point(a, q)`` when ``b == 1 - a``, but avoids the
    subtraction, which matters for ``q < 1`` where ``x**q`` is steep near 0.
    """
    q = check_order(q)
    a, b = as_probability(a, "a"), as_probability(b, "b")
    if is_limit(q):
        return _out(entr(a) + entr(b))
    return _pair_value(a, b, q)


def _pair_value(a, b, q):
    # fixed summation order keeps t_q(x) == t_q(1 - x) bit for bit
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    return _out((1.0 - (_pow(lo, q) + _pow(hi, q))) / (q - 1.0))


@dataclass(frozen=True)
class Spectrum:
    """A probability vector, typically the eigenvalues of a density matrix."""

    probs: tuple

    def __init__(self, probs: ArrayLike):
        arr = np.atleast_1d(np.asarray(probs, dtype=float))
        if arr.ndim != 1 or arr.size == 0:
            raise SpectrumError("a spectrum must be a non-empty 1-D list of probabilities")
        if np.any(np.isnan(arr)) or np.any(arr < -CLAMP_TOL) or np.any(arr > 1 + CLAMP_TOL):
            raise SpectrumError(f"spectrum entries must lie in [0, 1], got {arr.tolist()}")
        total = arr.sum()
        if abs(total - 1.0) > NORM_TOL:
            raise SpectrumError(f"spectrum must sum to 1 (within {NORM_TOL}), got {total!r}")
        object.__setattr__(self, "probs", tuple(np.clip(arr, 0.0, 1.0).tolist()))

    def __len__(self):
        return len(self.probs)

    def as_array(self) -> np.ndarray:
        return np.array(self.probs)


def _spectrum(s) -> np.ndarray:
    return (s if isinstance(s, Spectrum) else Spectrum(s)).as_array()


def tsallis_entropy(s, q: float) -> float:
    """Tsallis entropy ``(1 - sum nu_i**q) / (q - 1)`` of a spectrum.

    In the ``q -> 1`` band this is the Shannon / von Neumann entropy
    ``sum eta(nu_i)``.
    """
    q = check_order(q)
    nu = _spectrum(s)
    if is_limit(q):
        return float(entr(nu).sum())
    return float((1.0 - _pow(nu, q).sum()) / (q - 1.0))


def von_neumann_entropy(s) -> float:
    return tsallis_entropy(s, 1.0)


def conditional_tsallis(joint, marginal, q: float) -> float:
    """Conditional entropy by the chain rule, ``T_q(A,B) - T_q(B)``.

    Negative results are legitimate and signal entanglement.
    """
    return tsallis_entropy(joint, q) - tsallis_entropy(marginal, q)
