"""Classical two-sided expansion with contour-integral coefficients.

For f analytic on a ring and theta analytic inside the outer circle
with a single simple zero at ``a`` there, f expands in positive and
negative powers of theta:

    f(x) = sum_{n>=0} A_n theta(x)^n + sum_{n>=1} B_n / theta(x)^n,

valid for x with |theta(x)| below the smallest |theta| on the outer
circle and above the largest on the inner one.  The coefficients are
contour integrals, computed here by uniform trapezoidal quadrature on
circles (spectrally accurate for analytic integrands):

    A_n = 1/(2 pi i n) * integral over c1 of f'(z) / theta(z)^n dz
    B_n = -1/(2 pi i n) * integral over c2 of f'(z) * theta(z)^n dz

The n = 0 coefficient falls outside those formulas; it is computed as
1/(2 pi i) * integral of f(z) theta'(z)/theta(z) over c1, which equals
f(a) when f is analytic at a and stays correct when f has poles inside
the inner circle.

This module is the classical cross-check for the expansion engine:
with theta(z) = z - z0 the A_n must match the engine's coefficients
for s = z.  Quadrature sums run in a fixed sequential order, so results
are bit-for-bit reproducible for a given node count.  Whether theta
really has exactly one simple zero inside the outer circle is the
caller's responsibility.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AnnulusViolation, QuadratureSingularity, SingularEvaluation
from .expr import Expr, differentiate, evaluate, sole_variable

#: boundary points sampled when recording the validity ring
VALIDITY_SAMPLES = 64

#: |B_n| below this counts as an absent negative-power term
NEGLIGIBLE_COEFFICIENT = 1e-9


@dataclass(frozen=True)
class ContourSpec:
    """Circle used for quadrature: center, radius, and node count."""

    center: complex
    radius: float
    points: int = 512

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        if self.points < 16:
            raise ValueError("need at least 16 quadrature points")
        if self.points & (self.points - 1):
            raise ValueError("point count must be a power of two")

    def nodes(self, count: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Quadrature nodes and the unit phases they sit at."""
        m = self.points if count is None else count
        phase = np.exp(2j * np.pi * np.arange(m) / m)
        return self.center + self.radius * phase, phase

    def as_dict(self) -> dict:
        return {
            "center": [self.center.real, self.center.imag],
            "radius": self.radius,
            "points": self.points,
        }


@dataclass(frozen=True)
class TeixeiraExpansion:
    """Two-sided expansion data plus the sampled validity ring."""

    zero_point: complex
    theta: Expr
    a_coefficients: tuple[complex, ...]
    b_coefficients: tuple[complex, ...]
    outer: ContourSpec
    inner: ContourSpec | None
    outer_theta_min: float
    inner_theta_max: float

    def as_dict(self) -> dict:
        return {
            "A": [[c.real, c.imag] for c in self.a_coefficients],
            "B": [[c.real, c.imag] for c in self.b_coefficients],
            "contours": {
                "outer": self.outer.as_dict(),
                "inner": self.inner.as_dict() if self.inner else None,
            },
        }


def _values_on(e: Expr, zs: np.ndarray) -> np.ndarray:
    out = np.empty(len(zs), dtype=np.complex128)
    for i, z in enumerate(zs):
        try:
            out[i] = evaluate(e, complex(z))
        except SingularEvaluation as exc:
            raise QuadratureSingularity(f"integrand at node {z}: {exc}") from exc
    return out


def _sequential_sum(values: np.ndarray) -> complex:
    # cumulative sum fixes the summation order across backends
    return complex(values.cumsum()[-1])


def positive_power_coefficient(f: Expr, theta: Expr, contour: ContourSpec,
                               n: int) -> complex:
    """A_n for n >= 1 by trapezoidal quadrature on the outer circle."""
    if n < 1:
        raise ValueError("defined for n >= 1; use constant_coefficient for n = 0")
    letter = sole_variable(f, theta)
    zs, phase = contour.nodes()
    fp = _values_on(differentiate(f, letter), zs)
    th = _values_on(theta, zs)
    if np.any(np.abs(th) < 1e-300):
        raise QuadratureSingularity("theta vanishes on the outer contour")
    integrand = fp * phase / th**n
    if not np.all(np.isfinite(integrand)):
        raise QuadratureSingularity("non-finite integrand on the outer contour")
    return contour.radius / (n * len(zs)) * _sequential_sum(integrand)


def negative_power_coefficient(f: Expr, theta: Expr, contour: ContourSpec,
                               n: int) -> complex:
    """B_n for n >= 1 by trapezoidal quadrature on the inner circle."""
    if n < 1:
        raise ValueError("defined for n >= 1")
    letter = sole_variable(f, theta)
    zs, phase = contour.nodes()
    fp = _values_on(differentiate(f, letter), zs)
    th = _values_on(theta, zs)
    integrand = fp * phase * th**n
    if not np.all(np.isfinite(integrand)):
        raise QuadratureSingularity("non-finite integrand on the inner contour")
    return -contour.radius / (n * len(zs)) * _sequential_sum(integrand)


def constant_coefficient(f: Expr, theta: Expr, contour: ContourSpec) -> complex:
    """The n = 0 coefficient via f * theta'/theta over the outer circle."""
    letter = sole_variable(f, theta)
    zs, phase = contour.nodes()
    fv = _values_on(f, zs)
    tp = _values_on(differentiate(theta, letter), zs)
    th = _values_on(theta, zs)
    if np.any(np.abs(th) < 1e-300):
        raise QuadratureSingularity("theta vanishes on the outer contour")
    integrand = fv * tp * phase / th
    if not np.all(np.isfinite(integrand)):
        raise QuadratureSingularity("non-finite integrand on the outer contour")
    return contour.radius / len(zs) * _sequential_sum(integrand)


def teixeira_expand(f: Expr, theta: Expr, zero_point: complex,
                    outer: ContourSpec, inner: ContourSpec | None,
                    order: int) -> TeixeiraExpansion:
    """Compute A_0..A_order and (with an inner contour) B_1..B_order."""
    if order < 0:
        raise ValueError("order must be >= 0")
    a = [constant_coefficient(f, theta, outer)]
    a += [positive_power_coefficient(f, theta, outer, n) for n in range(1, order + 1)]
    b = []
    if inner is not None:
        b = [negative_power_coefficient(f, theta, inner, n)
             for n in range(1, order + 1)]

    outer_min = min(abs(evaluate(theta, complex(z)))
                    for z in outer.nodes(VALIDITY_SAMPLES)[0])
    inner_max = 0.0
    if inner is not None:
        inner_max = max(abs(evaluate(theta, complex(z)))
                        for z in inner.nodes(VALIDITY_SAMPLES)[0])
    return TeixeiraExpansion(complex(zero_point), theta, tuple(a), tuple(b),
                             outer, inner, outer_min, inner_max)


def teixeira_partial_sum(tx: TeixeiraExpansion, x: complex, upto: int) -> complex:
    """Two-sided sum at x, after checking the sampled validity ring.

    Negative-power terms below the negligible-coefficient threshold are
    dropped, so purely positive expansions remain usable where theta
    vanishes.
    """
    x = complex(x)
    tv = evaluate(tx.theta, x)
    size = abs(tv)
    if size >= tx.outer_theta_min and upto >= 1 and len(tx.a_coefficients) > 1:
        raise AnnulusViolation(
            f"|theta(x)| = {size:.6g} >= {tx.outer_theta_min:.6g}, the smallest "
            f"|theta| sampled on the outer contour")

    total = 0j
    for c in reversed(tx.a_coefficients[: upto + 1]):
        total = total * tv + c

    significant = [(n, c) for n, c in enumerate(tx.b_coefficients[:upto], start=1)
                   if abs(c) > NEGLIGIBLE_COEFFICIENT]
    if significant:
        if size <= tx.inner_theta_max:
            raise AnnulusViolation(
                f"|theta(x)| = {size:.6g} <= {tx.inner_theta_max:.6g}, the largest "
                f"|theta| sampled on the inner contour")
        for n, c in significant:
            total += c / tv**n
    return total
