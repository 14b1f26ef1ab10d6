"""Lower bound on the extractable key per state.

``K >= 2 (1 - c^2)(ln 2 - S(B)) - S(A|B) - S(X|X') - S(Y|Y')``, all in nats.
The bound is returned unclamped; a negative value means no key is
guaranteed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .entropy import binary_shannon
from .errors import DomainError
from .scenario import overlap_c

LN2 = math.log(2.0)
ENTROPY_TOL = 1e-12
# half a unit in the 4th decimal, so 0.7071 is accepted as 1/sqrt(2)
C_SLACK = 5e-5
C_MIN = math.sqrt(0.5)


def _in_range(name, value, lo, hi, slack=ENTROPY_TOL):
    value = float(value)
    if math.isnan(value) or value < lo - slack or value > hi + slack:
        raise DomainError(f"{name} must lie in [{lo:.6g}, {hi:.6g}], got {value}")
    return value


@dataclass(frozen=True)
class KeyRateInputs:
    c: float
    s_b: float
    s_a_given_b: float
    s_x_given_xp: float
    s_y_given_yp: float

    def __post_init__(self):
        _in_range("c", self.c, C_MIN, 1.0, slack=C_SLACK)
        _in_range("S(B)", self.s_b, 0.0, LN2)
        _in_range("S(A|B)", self.s_a_given_b, -LN2, LN2)
        _in_range("S(X|X')", self.s_x_given_xp, 0.0, LN2)
        _in_range("S(Y|Y')", self.s_y_given_yp, 0.0, LN2)


def key_rate_lower_bound(inputs: KeyRateInputs) -> float:
    c = min(inputs.c, 1.0)
    return (2.0 * (1.0 - c * c) * (LN2 - inputs.s_b)
            - inputs.s_a_given_b - inputs.s_x_given_xp - inputs.s_y_given_yp)


def positive_key(inputs: KeyRateInputs) -> bool:
    return key_rate_lower_bound(inputs) > 0.0


def scenario_inputs(lam: float, epsilon: float, s_x_given_xp: float,
                    s_y_given_yp: float) -> KeyRateInputs:
    """Inputs for the pure Schmidt state: ``S(B) = h(lam)``, ``S(A|B) = -h(lam)``."""
    h = binary_shannon(lam)
    return KeyRateInputs(overlap_c(epsilon), h, -h, s_x_given_xp, s_y_given_yp)


def key_rate_for_scenario(lam: float, epsilon: float, s_x_given_xp: float,
                          s_y_given_yp: float) -> float:
    return key_rate_lower_bound(scenario_inputs(lam, epsilon, s_x_given_xp, s_y_given_yp))
