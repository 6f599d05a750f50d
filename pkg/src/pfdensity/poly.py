"""Dense univariate polynomials and simultaneous-iteration root finding.

Coefficients are stored ascending (coeffs[k] multiplies x^k) and may be
ints, Fractions, floats or complex; exact coefficient types survive
arithmetic and evaluation, which lets callers generate polynomials in
exact rational arithmetic and only round when solving for roots.

Roots are found with the Aberth-Ehrlich simultaneous iteration, started
from points equally spaced on a circle bounding the root moduli (the
tighter of the Cauchy and Fujiwara bounds).  The iteration runs either in
double precision or, for cfg.precision_bits > 53, in mpmath arbitrary
precision (needed for high-degree polynomials whose monomial-basis
conditioning is poor).
"""

from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import DegreeZero, NonConvergence

# mpmath's working precision is process-global state; hold this lock around
# any block that changes it so batch callers can run in parallel safely.
MP_LOCK = threading.Lock()

__all__ = [
    "Polynomial",
    "RootConfig",
    "poly_eval",
    "poly_derivative",
    "poly_roots",
    "real_zeros",
]


def _is_zero(c) -> bool:
    return c == 0


def _trim(coeffs):
    coeffs = list(coeffs)
    while len(coeffs) > 1 and _is_zero(coeffs[-1]):
        coeffs.pop()
    if not coeffs:
        coeffs = [0]
    return tuple(coeffs)


@dataclass(frozen=True)
class Polynomial:
    """Dense polynomial; trailing zero coefficients are stripped on build."""

    coeffs: tuple

    def __init__(self, coeffs):
        object.__setattr__(self, "coeffs", _trim(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        return poly_eval(self, x)

    def derivative(self) -> "Polynomial":
        return poly_derivative(self)


@dataclass(frozen=True)
class RootConfig:
    max_iterations: int = 400
    tolerance: float = 1e-12
    precision_bits: int = 53
    real_axis_tol: float = 1e-8

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.precision_bits < 53:
            raise ValueError("precision_bits must be >= 53")


def poly_eval(p: Polynomial, x):
    """Horner evaluation; the result type follows the operand types."""
    acc = p.coeffs[-1]
    for c in reversed(p.coeffs[:-1]):
        acc = acc * x + c
    return acc


def poly_derivative(p: Polynomial) -> Polynomial:
    if p.degree == 0:
        return Polynomial([0])
    return Polynomial([k * c for k, c in enumerate(p.coeffs)][1:])


def _pow2_scale(maxmag: float) -> float:
    # Power-of-two normalisation keeps the iteration exactly scale-invariant.
    if maxmag == 0.0 or not math.isfinite(maxmag):
        return 1.0
    return 2.0 ** round(math.log2(maxmag))


def _horner(coeffs, x):
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc


def _start_radius(mags):
    """Initial circle radius: min of the Cauchy and Fujiwara root bounds.

    The Cauchy bound 1 + max|a_k/a_n| explodes when the leading coefficient
    is small against the rest (factorially-growing chains); Fujiwara's
    2 max_k |a_{n-k}/a_n|^(1/k) stays within a factor 2 of the largest root.
    """
    n = len(mags) - 1
    an = mags[-1]
    cauchy = 1.0 + max(mags[:-1]) / an
    fuji = 0.0
    for k in range(1, n + 1):
        m = mags[n - k] / (an if k < n else 2.0 * an)
        if m > 0.0:
            fuji = max(fuji, m ** (1.0 / k))
    fuji *= 2.0
    if fuji == 0.0:
        return min(cauchy, 1.0)
    return min(cauchy, fuji)


def _residual_ok(residual, maxc, r_abs, degree, tolerance):
    """|p(r)| <= tol * max|c| * max(1,|r|)^degree, compared in log space."""
    if residual == 0.0:
        return True, -math.inf
    log_bound = math.log(tolerance) + math.log(maxc) \
        + degree * math.log(max(1.0, r_abs))
    log_res = math.log(residual)
    return log_res <= log_bound, log_res - log_bound


def _aberth_complex(coeffs, max_iterations, tolerance):
    """Aberth-Ehrlich in double precision. coeffs: complex, leading nonzero."""
    n = len(coeffs) - 1
    maxmag = max(abs(c) for c in coeffs)
    scale = _pow2_scale(maxmag)
    c = [complex(x) / scale for x in coeffs]
    d = [k * c[k] for k in range(1, n + 1)]
    maxc = max(abs(x) for x in c)

    radius = _start_radius([abs(x) for x in c])
    offset = math.pi / (2 * n)
    z = [radius * cmath.exp(1j * (2 * math.pi * k / n + offset)) for k in range(n)]
    frozen = [False] * n

    for _ in range(max_iterations):
        moved = 0.0
        for i in range(n):
            if frozen[i]:
                continue
            zi = z[i]
            pv = _horner(c, zi)
            if pv == 0:
                frozen[i] = True
                continue
            dv = _horner(d, zi)
            if dv == 0:
                z[i] = zi * 1.000000001 + 1e-9  # deterministic nudge off the stationary point
                moved = max(moved, 1.0)
                continue
            ratio = pv / dv
            s = 0j
            for j in range(n):
                if j != i:
                    dz = zi - z[j]
                    if dz == 0:
                        dz = 1e-30
                    s += 1.0 / dz
            den = 1.0 - ratio * s
            w = ratio if den == 0 else ratio / den
            z[i] = zi - w
            rel = abs(w) / max(1.0, abs(z[i]))
            if rel < 1e-15:
                frozen[i] = True
            moved = max(moved, rel)
        if moved < 1e-15:
            break

    residuals = [abs(_horner(c, zi)) for zi in z]
    checks = [_residual_ok(r, maxc, abs(zi), n, tolerance)
              for r, zi in zip(residuals, z)]
    if not all(ok for ok, _ in checks):
        raise NonConvergence(
            f"Aberth iteration did not meet the residual bound "
            f"(worst residual {max(residuals):.3e})",
            worst_residual=max(residuals),
        )
    return z


def _to_mp(c):
    if isinstance(c, Fraction):
        return mpmath.mpf(c.numerator) / c.denominator
    if isinstance(c, complex):
        return mpmath.mpc(c.real, c.imag)
    return mpmath.mpf(c)


def _quadratic_complex(c0, c1, c2):
    """Stable closed form; a zero discriminant yields an exact double root."""
    disc = c1 * c1 - 4.0 * c2 * c0
    sq = cmath.sqrt(disc)
    if (c1.conjugate() * sq).real >= 0:
        q = -0.5 * (c1 + sq)
    else:
        q = -0.5 * (c1 - sq)
    if q == 0:
        r1 = r2 = 0j
    else:
        r1, r2 = q / c2, c0 / q
    return [r1, r2]


def _quadratic_mp(c0, c1, c2, precision_bits):
    with MP_LOCK, mpmath.workprec(precision_bits):
        c0, c1, c2 = _to_mp(c0), _to_mp(c1), _to_mp(c2)
        disc = c1 * c1 - 4 * c2 * c0
        sq = mpmath.sqrt(disc)
        if mpmath.re(mpmath.conj(c1) * sq) >= 0:
            q = -(c1 + sq) / 2
        else:
            q = -(c1 - sq) / 2
        if q == 0:
            return [0j, 0j]
        return [complex(q / c2), complex(c0 / q)]


def _start_radius_mp(mags):
    """_start_radius carried out in mp arithmetic (no float under/overflow)."""
    n = len(mags) - 1
    an = mags[-1]
    cauchy = 1 + max(mags[:-1]) / an
    fuji = mpmath.mpf(0)
    for k in range(1, n + 1):
        m = mags[n - k] / (an if k < n else 2 * an)
        if m > 0:
            fuji = max(fuji, m ** (mpmath.mpf(1) / k))
    fuji *= 2
    if fuji == 0:
        return min(cauchy, mpmath.mpf(1))
    return min(cauchy, fuji)


def _aberth_mp(coeffs, max_iterations, tolerance, precision_bits):
    """Same iteration carried out with mpmath at the requested precision."""
    with MP_LOCK, mpmath.workprec(precision_bits):
        n = len(coeffs) - 1
        c = [_to_mp(x) for x in coeffs]
        maxmag = max(abs(x) for x in c)
        scale = mpmath.mpf(2) ** int(mpmath.nint(mpmath.log(maxmag, 2)))
        c = [x / scale for x in c]
        d = [k * c[k] for k in range(1, n + 1)]
        maxc = max(abs(x) for x in c)

        radius = _start_radius_mp([abs(x) for x in c])
        offset = mpmath.pi / (2 * n)
        two_pi = 2 * mpmath.pi
        z = [radius * mpmath.exp(1j * (two_pi * k / n + offset)) for k in range(n)]
        frozen = [False] * n
        eps = mpmath.mpf(2) ** (4 - precision_bits)

        for _ in range(max_iterations):
            moved = mpmath.mpf(0)
            for i in range(n):
                if frozen[i]:
                    continue
                zi = z[i]
                pv = _horner(c, zi)
                if pv == 0:
                    frozen[i] = True
                    continue
                dv = _horner(d, zi)
                if dv == 0:
                    z[i] = zi * mpmath.mpf("1.000000001") + mpmath.mpf("1e-9")
                    moved = max(moved, mpmath.mpf(1))
                    continue
                ratio = pv / dv
                s = mpmath.mpc(0)
                for j in range(n):
                    if j != i:
                        dz = zi - z[j]
                        if dz == 0:
                            dz = mpmath.mpf("1e-60")
                        s += 1 / dz
                den = 1 - ratio * s
                w = ratio if den == 0 else ratio / den
                z[i] = zi - w
                rel = abs(w) / max(mpmath.mpf(1), abs(z[i]))
                if rel < eps:
                    frozen[i] = True
                moved = max(moved, rel)
            if moved < eps:
                break

        residuals = [float(abs(_horner(c, zi))) for zi in z]
        checks = [_residual_ok(r, float(maxc), float(abs(zi)), n, tolerance)
                  for r, zi in zip(residuals, z)]
        if not all(ok for ok, _ in checks):
            raise NonConvergence(
                f"Aberth iteration did not meet the residual bound "
                f"(worst residual {max(residuals):.3e})",
                worst_residual=max(residuals),
            )
        return [complex(zi) for zi in z]


def poly_roots(p: Polynomial, cfg: RootConfig = RootConfig()) -> list:
    """All `degree` roots of p, with multiplicity, deterministically ordered.

    Exact zero trailing coefficients are peeled off as roots at the origin
    before the simultaneous iteration runs on the deflated polynomial.
    """
    coeffs = list(p.coeffs)
    if len(coeffs) == 1:
        raise DegreeZero("constant polynomial has no roots to solve for")

    origin = []
    while len(coeffs) > 1 and _is_zero(coeffs[0]):
        origin.append(0j)
        coeffs.pop(0)

    if len(coeffs) == 1:
        roots = origin
    elif len(coeffs) == 2:
        if cfg.precision_bits > 53:
            with MP_LOCK, mpmath.workprec(cfg.precision_bits):
                r = -_to_mp(coeffs[0]) / _to_mp(coeffs[1])
                roots = origin + [complex(r)]
        else:
            roots = origin + [-complex(coeffs[0]) / complex(coeffs[1])]
    elif len(coeffs) == 3:
        if cfg.precision_bits > 53:
            roots = origin + _quadratic_mp(coeffs[0], coeffs[1], coeffs[2],
                                           cfg.precision_bits)
        else:
            roots = origin + _quadratic_complex(complex(coeffs[0]),
                                                complex(coeffs[1]),
                                                complex(coeffs[2]))
    else:
        if cfg.precision_bits > 53:
            found = _aberth_mp(coeffs, cfg.max_iterations, cfg.tolerance,
                               cfg.precision_bits)
        else:
            found = _aberth_complex([complex(c) for c in coeffs],
                                    cfg.max_iterations, cfg.tolerance)
        roots = origin + found

    roots.sort(key=lambda r: (r.real, r.imag))
    return roots


def real_zeros(roots, cfg: RootConfig = RootConfig()) -> list:
    """Roots that lie on the real axis up to cfg.real_axis_tol, sorted."""
    out = [r.real for r in roots
           if abs(r.imag) <= cfg.real_axis_tol * (1.0 + abs(r.real))]
    out.sort()
    return out
