"""Expansion engine: power series of one function in terms of another.

Given analytic f and s and a point z0 with s'(z0) != 0 and s(z0)
finite, :func:`expand` produces coefficients c_n such that

    f(z) = sum_n c_n * (s(z) - s(z0))^n,

where c_n is the n'th composite derivative of f with respect to s,
evaluated at z0 and divided by n!.  With s = z this reduces to the
ordinary Taylor series.  Coefficients are stored numerically; the
symbolic ladder stays available on the result for remainder bounds.

Some pairs terminate: beyond some index every coefficient vanishes and
the truncated sum is an identity for f.  :func:`detect_termination`
scans for that, and :func:`power_expansion_coefficients` gives the
closed-form coefficients for expanding a function in a power of itself,
which terminate exactly when the power is 1/n.

:func:`inverse_composite_expand` is the alternative route for the rare
case where an explicit inverse g of s is available: it Taylor-expands
h = f(g(.)) at s(z0), which must agree with :func:`expand`.

Each expansion builds a private operator chain, so distinct requests
may run concurrently; a returned SeriesExpansion is treated as
immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .composite import OperatorChain
from .errors import (
    CompositeDerivativeZero,
    InverseMismatch,
    SingularAtExpansionPoint,
    SingularEvaluation,
)
from .expr import (
    Expr,
    differentiate,
    evaluate,
    format_expr,
    simplify,
    sole_variable,
    substitute,
)

#: |s'(z0)| at or below this is treated as a vanishing derivative
DERIVATIVE_ZERO_TOL = 1e-12

#: relative size under which trailing coefficients count as vanished
TERMINATION_TOL = 1e-10

#: how many consecutive negligible tail coefficients termination needs
TERMINATION_RUN = 3


@dataclass(frozen=True)
class ExpansionRequest:
    """Inputs for expand(): functions, point, order, and tolerances."""

    f: Expr
    s: Expr
    z0: complex
    order: int
    termination_tol: float = TERMINATION_TOL
    derivative_zero_tol: float = DERIVATIVE_ZERO_TOL

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("order must be >= 0")
        if self.termination_tol <= 0 or self.derivative_zero_tol <= 0:
            raise ValueError("tolerances must be positive")
        object.__setattr__(self, "z0", complex(self.z0))


@dataclass
class SeriesExpansion:
    """Result of an expansion; treat as immutable once returned.

    ``coefficients[n]`` multiplies (s(z) - s0)^n.  ``terminated_at`` is
    the last index with a non-negligible coefficient when the stored
    tail vanished, else None.  The private chain is reused by the
    remainder bounds; it appends lazily and must not be shared between
    threads.
    """

    f: Expr
    s: Expr
    z0: complex
    s0: complex
    coefficients: tuple[complex, ...]
    terminated_at: int | None = None
    _chain: OperatorChain | None = field(default=None, repr=False, compare=False)

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def chain(self) -> OperatorChain:
        if self._chain is None:
            self._chain = OperatorChain(self.f, self.s)
        return self._chain

    def as_dict(self) -> dict:
        return {
            "f": format_expr(self.f),
            "s": format_expr(self.s),
            "z0": [self.z0.real, self.z0.imag],
            "s0": [self.s0.real, self.s0.imag],
            "coefficients": [[c.real, c.imag] for c in self.coefficients],
            "terminated_at": self.terminated_at,
        }


def expand(req: ExpansionRequest) -> SeriesExpansion:
    """Compute the expansion of req.f in powers of (req.s - s(z0)).

    Raises CompositeDerivativeZero when |s'(z0)| is at or below the
    derivative-zero tolerance, and SingularAtExpansionPoint when f, s,
    or any ladder entry cannot be evaluated at z0.
    """
    letter = sole_variable(req.f, req.s)
    try:
        s0 = evaluate(req.s, req.z0)
        sp0 = evaluate(differentiate(req.s, letter), req.z0)
    except SingularEvaluation as exc:
        raise SingularAtExpansionPoint(f"inner function at z0={req.z0}: {exc}") from exc
    if abs(sp0) <= req.derivative_zero_tol:
        raise CompositeDerivativeZero(
            f"|s'(z0)| = {abs(sp0):.3g} at z0={req.z0} "
            f"(tolerance {req.derivative_zero_tol:g})")

    chain = OperatorChain(req.f, req.s, letter)
    coefficients = []
    for n in range(req.order + 1):
        entry = chain.entry(n)
        try:
            value = evaluate(entry, req.z0)
        except SingularEvaluation as exc:
            raise SingularAtExpansionPoint(
                f"derivative ladder entry {n} at z0={req.z0}: {exc}") from exc
        coefficients.append(value / math.factorial(n))

    terminated = detect_termination(coefficients, req.termination_tol)
    return SeriesExpansion(req.f, req.s, req.z0, s0, tuple(coefficients),
                           terminated, chain)


def partial_sum(exp: SeriesExpansion, z: complex, upto: int | None = None) -> complex:
    """Sum of c_n (s(z) - s0)^n for n = 0..upto (defaults to the full order)."""
    upto = exp.order if upto is None else upto
    if not 0 <= upto <= exp.order:
        raise ValueError(f"upto must be in [0, {exp.order}]")
    u = evaluate(exp.s, z) - exp.s0
    total = 0j
    for c in reversed(exp.coefficients[: upto + 1]):
        total = total * u + c
    return total


def detect_termination(coefficients, tol: float = TERMINATION_TOL,
                       run: int = TERMINATION_RUN) -> int | None:
    """Smallest index m with every later stored coefficient negligible.

    Negligible means |c_n| < tol * max(1, |c0|); at least ``run``
    consecutive negligible tail coefficients are required, so fewer
    than run + 1 stored coefficients can never report termination.
    """
    n = len(coefficients)
    if n < run + 1:
        return None
    ceiling = tol * max(1.0, abs(coefficients[0]))
    small = [abs(c) < ceiling for c in coefficients]
    for m in range(0, n - run):
        if all(small[m + 1:]):
            return m
    return None


def power_expansion_coefficients(beta, order: int) -> list[float]:
    """Coefficients for expanding a function in its own beta'th power.

    a0 = 1 and a_n = (1-beta)(1-2*beta)...(1-(n-1)*beta) / (n! beta^n).
    The product keeps the arithmetic type of beta, so passing a
    Fraction makes the terminating zeros (beta = 1/k) exact.
    """
    if beta == 0:
        raise ValueError("beta must be nonzero")
    coefficients = [1.0]
    product = Fraction(1) if isinstance(beta, (int, Fraction)) else 1.0
    factorial = 1
    for n in range(1, order + 1):
        if n >= 2:
            product = product * (1 - (n - 1) * beta)
        factorial *= n
        coefficients.append(float(product / (factorial * beta ** n)))
    return coefficients


def taylor_coefficients(e: Expr, letter: str, at: complex, order: int) -> list[complex]:
    """Plain Taylor coefficients of e at the point, by repeated derivative."""
    coefficients = []
    d = e
    factorial = 1
    for n in range(order + 1):
        if n:
            d = simplify(differentiate(d, letter))
            factorial *= n
        try:
            coefficients.append(evaluate(d, at) / factorial)
        except SingularEvaluation as exc:
            raise SingularAtExpansionPoint(
                f"derivative {n} of {format_expr(e)} at {at}: {exc}") from exc
    return coefficients


#: absolute tolerance (scaled by max(1, |z0|)) for the inverse round-trip check
INVERSE_ROUNDTRIP_TOL = 1e-8


def inverse_composite_expand(f: Expr, s: Expr, g: Expr, z0: complex,
                             order: int,
                             termination_tol: float = TERMINATION_TOL) -> SeriesExpansion:
    """Expansion via an explicit inverse: Taylor coefficients of f(g(.)).

    g must be written in its own letter and satisfy g(s(z0)) = z0 to
    within the round-trip tolerance; otherwise InverseMismatch is
    raised.  The result matches expand() field for field.
    """
    z0 = complex(z0)
    z_letter = sole_variable(f, s)
    g_letter = sole_variable(g, default="s")
    try:
        s0 = evaluate(s, z0)
        back = evaluate(g, s0)
    except SingularEvaluation as exc:
        raise SingularAtExpansionPoint(f"inverse route at z0={z0}: {exc}") from exc
    if abs(back - z0) > INVERSE_ROUNDTRIP_TOL * max(1.0, abs(z0)):
        raise InverseMismatch(
            f"g(s(z0)) = {back} does not return to z0 = {z0}")

    h = substitute(f, z_letter, g)
    coefficients = tuple(taylor_coefficients(h, g_letter, s0, order))
    terminated = detect_termination(coefficients, termination_tol)
    return SeriesExpansion(f, s, z0, s0, coefficients, terminated)
