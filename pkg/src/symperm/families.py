"""Named permutation-invariant states and the one-parameter W/Wbar mixture,
including the cubic stationarity condition for its optimal angle."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SympermError, ValidationError
from .states import SymmetricState

TAN_LO = 1.0 / math.sqrt(2.0)
TAN_HI = math.sqrt(2.0)


def ghz(n: int) -> SymmetricState:
    """(|0...0> + |1...1>)/sqrt(2) on n qubits."""
    if n < 2:
        raise ValidationError("GHZ needs n >= 2")
    inv = 1.0 / math.sqrt(2.0)
    return SymmetricState(n, 2, {(n, 0): inv, (0, n): inv})


def w_state(n: int) -> SymmetricState:
    """Equal superposition of single-excitation strings; composition (n-1, 1)."""
    if n < 2:
        raise ValidationError("W needs n >= 2")
    return SymmetricState(n, 2, {(n - 1, 1): 1.0})


def w_bar_state(n: int) -> SymmetricState:
    """Bit-flip image of the W state; composition (1, n-1)."""
    if n < 2:
        raise ValidationError("Wbar needs n >= 2")
    return SymmetricState(n, 2, {(1, n - 1): 1.0})


def example_a() -> SymmetricState:
    """Three 4-level parties, two in the first level and one in the last."""
    return SymmetricState(3, 4, {(2, 0, 0, 1): 1.0})


def example_b() -> SymmetricState:
    """Three 4-level parties, one each in the first three levels."""
    return SymmetricState(3, 4, {(1, 1, 1, 0): 1.0})


def ww_bar(s: float) -> SymmetricState:
    """sqrt(s) W + sqrt(1-s) Wbar on three qubits, s in [0, 1]."""
    if not 0.0 <= s <= 1.0:
        raise ValidationError("s must lie in [0, 1]")
    terms = {}
    if s > 0:
        terms[(2, 1)] = math.sqrt(s)
    if s < 1:
        terms[(1, 2)] = math.sqrt(1.0 - s)
    return SymmetricState(3, 2, terms)


@dataclass(frozen=True)
class WWBarPoint:
    """Optimal symmetric-ansatz angle and overlap for one mixture parameter."""

    s: float
    theta: float
    tan_theta: float
    lambda_max: float


def _cubic(t: float, s: float) -> float:
    a = math.sqrt(1.0 - s)
    b = math.sqrt(s)
    return a * t**3 + 2.0 * b * t**2 - 2.0 * a * t - b


def overlap_at_theta(s: float, theta: float) -> float:
    """Direct expansion of the overlap between (cos t|0> + sin t|1>)^(x)3
    and the s-mixture: sqrt(3) sin(t) cos(t) (sqrt(s) cos(t) + sqrt(1-s) sin(t))."""
    return (
        math.sqrt(3.0)
        * math.sin(theta)
        * math.cos(theta)
        * (math.sqrt(s) * math.cos(theta) + math.sqrt(1.0 - s) * math.sin(theta))
    )


def ww_bar_theta(s: float) -> WWBarPoint:
    """Solve the stationarity cubic for tan(theta) in [1/sqrt2, sqrt2] by
    bisection and evaluate the overlap there.

    The overlap uses the direct expansion (prefactor sqrt(3)/2 in the
    sin/cos form), which reproduces 2/3 at the endpoints; the alternative
    1/2-prefactor variant is exposed by the CLI for comparison.
    """
    if not 0.0 <= s <= 1.0:
        raise ValidationError("s must lie in [0, 1]")
    lo, hi = TAN_LO, TAN_HI
    flo, fhi = _cubic(lo, s), _cubic(hi, s)
    if flo > 1e-12 or fhi < -1e-12:
        raise SympermError("cubic root not bracketed at s=%r" % s)
    for _ in range(200):
        if hi - lo <= 1e-13:
            break
        mid = 0.5 * (lo + hi)
        if _cubic(mid, s) <= 0.0:
            lo = mid
        else:
            hi = mid
    t = 0.5 * (lo + hi)
    if flo == 0.0:
        t = TAN_LO
    elif fhi == 0.0:
        t = TAN_HI
    theta = math.atan(t)
    return WWBarPoint(s=s, theta=theta, tan_theta=t, lambda_max=overlap_at_theta(s, theta))


def ww_bar_sweep(steps: int) -> list[WWBarPoint]:
    """Tabulate the family at s = i/(steps-1), i = 0..steps-1."""
    if steps < 2:
        raise ValidationError("steps must be >= 2")
    return [ww_bar_theta(i / (steps - 1)) for i in range(steps)]
