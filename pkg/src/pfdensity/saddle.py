"""Steepest-descent analysis of gamma(a) = s*f(a) - ln(a) for 1-D maps.

The critical points solve s*a*f'(a) - 1 = 0.  A complex critical point with
maximal Re(gamma) carries the asymptotic density of real zeros,
q(s) = |Im f(a_c)| / pi; when every critical point is real there is no
oscillatory contribution and q = 0.  The invariant density follows as
p(x) = -x dq/dx.  Closed forms for the logistic family serve as oracles.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional

import mpmath

from .bell import MapSpec1D
from .errors import DomainError, EndpointProximity
from .poly import MP_LOCK, Polynomial, RootConfig, poly_roots

__all__ = [
    "SaddleProblem",
    "SaddleResult",
    "critical_polynomial",
    "critical_points",
    "analyze",
    "zero_density_q",
    "logistic_closed_q",
    "logistic_closed_p",
    "logistic_p_mass",
    "invariant_density_p",
    "wigner_change_of_variables",
]

_IMAG_CUTOFF = 1e-10  # below this, a critical point counts as real


@dataclass(frozen=True)
class SaddleProblem:
    f: MapSpec1D
    s: float

    def __post_init__(self):
        if not (math.isfinite(self.s) and self.s > 0):
            raise ValueError("s must be finite and positive")


@dataclass(frozen=True)
class SaddleResult:
    critical_points: tuple
    residuals: tuple
    selected: Optional[int]
    gamma_real: Optional[float]
    q_value: float


def critical_polynomial(prob: SaddleProblem) -> Polynomial:
    """s*a*f'(a) - 1 as a dense polynomial in a."""
    fc = prob.f.coeffs
    # a*f'(a) has coefficient k*fc[k] on a^k
    coeffs = [k * c * prob.s for k, c in enumerate(fc)]
    coeffs[0] = -1.0
    return Polynomial(coeffs)


def critical_points(prob: SaddleProblem, cfg: RootConfig = RootConfig()) -> list:
    if prob.f.degree == 1:
        return [complex(1.0 / (prob.s * prob.f.lam))]
    return poly_roots(critical_polynomial(prob), cfg)


def _gamma(prob: SaddleProblem, a: complex) -> complex:
    return prob.s * _eval_map(prob.f, a) - cmath.log(a)


def _eval_map(f: MapSpec1D, a: complex) -> complex:
    acc = complex(f.coeffs[-1])
    for c in reversed(f.coeffs[:-1]):
        acc = acc * a + c
    return acc


def analyze(prob: SaddleProblem, cfg: RootConfig = RootConfig()) -> SaddleResult:
    """Locate critical points, select the dominant complex saddle, report q."""
    points = critical_points(prob, cfg)
    cp = critical_polynomial(prob)
    residuals = tuple(abs(cp(a)) for a in points)

    selected = None
    best_key = None
    for i, a in enumerate(points):
        if abs(a.imag) <= _IMAG_CUTOFF:
            continue
        key = (_gamma(prob, a).real, a.imag)  # conjugates tie on Re(gamma)
        if best_key is None or key > best_key:
            best_key = key
            selected = i

    if selected is None:
        return SaddleResult(tuple(points), residuals, None, None, 0.0)

    a_sel = points[selected]
    gamma_real = _gamma(prob, a_sel).real
    q = abs(_eval_map(prob.f, a_sel).imag) / math.pi
    return SaddleResult(tuple(points), residuals, selected, gamma_real, q)


def zero_density_q(prob: SaddleProblem, cfg: RootConfig = RootConfig()) -> float:
    return analyze(prob, cfg).q_value


def logistic_closed_q(lam: float, s: float) -> float:
    """(lam/2pi) sqrt(1/s - lam^2/4) on (0, 4/lam^2), 0 outside."""
    if s <= 0.0:
        return 0.0
    radicand = 1.0 / s - lam * lam / 4.0
    if radicand <= 0.0:
        return 0.0
    return lam / (2.0 * math.pi) * math.sqrt(radicand)


def logistic_closed_p(lam: float, s: float, normalized: bool = False) -> float:
    """Raw closed-form invariant density lam / (2 pi sqrt(4s - s^2 lam^2)).

    The raw formula integrates to 1/2 over its support (0, 4/lam^2);
    normalized=True doubles it to unit mass.
    """
    radicand = 4.0 * s - s * s * lam * lam
    if radicand <= 0.0:
        return 0.0
    value = lam / (2.0 * math.pi * math.sqrt(radicand))
    return 2.0 * value if normalized else value


def logistic_p_mass(lam: float) -> float:
    """Integral of the raw closed-form p over its support (tanh-sinh quadrature)."""
    hi = 4.0 / (lam * lam)
    with MP_LOCK, mpmath.workdps(30):
        val = mpmath.quad(
            lambda s: lam / (2 * mpmath.pi * mpmath.sqrt(4 * s - s**2 * lam**2)),
            [0, hi],
        )
    return float(val)


def invariant_density_p(q: Callable[[float], float], x: float,
                        support: tuple) -> float:
    """p(x) = -x q'(x) with a 5-point central stencil on the sampled q.

    The step is 1e-5 of the support width; x must keep a 1e-3-width margin
    from both endpoints because q carries square-root singularities there.
    """
    lo, hi = support
    width = hi - lo
    if width <= 0:
        raise DomainError("support must have positive width")
    margin = 1e-3 * width
    if x - lo < margin or hi - x < margin:
        raise EndpointProximity(
            f"x={x!r} closer than {margin!r} to the support boundary")
    h = 1e-5 * width
    # difference pairs first: the stencil is then exactly zero on constants
    deriv = ((q(x - 2 * h) - q(x + 2 * h))
             + 8.0 * (q(x + h) - q(x - h))) / (12.0 * h)
    return -x * deriv


def wigner_change_of_variables(lam: float, s: float) -> tuple:
    """Map s to the semicircle variable: t = lam*sqrt(s)/2, w = q(s)*ds/dt.

    Analytically w = (2/pi) sqrt(1 - t^2); the returned w is computed from
    the closed-form q so tests can check the identity independently.
    """
    if not (0.0 < s <= 4.0 / (lam * lam)):
        raise DomainError(f"s={s!r} outside (0, 4/lam^2]")
    t = lam * math.sqrt(s) / 2.0
    ds_dt = 8.0 * t / (lam * lam)
    w = logistic_closed_q(lam, s) * ds_dt
    return t, w
