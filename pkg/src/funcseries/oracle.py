"""Brute-force coefficient oracle via truncated power series.

This module is the independent cross-check for the expansion engine.
It never touches symbolic differentiation or the composite-derivative
ladder: Taylor data is produced by recursing over the expression tree
with truncated-series arithmetic (:class:`TruncatedSeries`) and jets of
the elementary functions, and expansion coefficients are recovered by
:func:`oracle_coefficients`, which matches coefficients in the sum

    F(t) = sum_n c_n * u(t)^n,        u = inner series minus its constant

by forward substitution.  Because u starts at the linear term, u^n has
leading power t^n with coefficient u1^n, so the system is lower
triangular and solvable term by term whenever u1 != 0 (the series-level
restatement of the nonvanishing-derivative requirement).

A TruncatedSeries holds the coefficients of e(z0 + t) in t up to a
fixed order; arithmetic never reads beyond the stored coefficients.
All values are complex128 and instances are immutable, so everything
here can run concurrently.

    >>> from funcseries.expr import parse
    >>> TruncatedSeries.from_expr(parse("exp(z)"), 0.0, 4).coefficients.real
    array([1.        , 1.        , 0.5       , 0.16666667, 0.04166667])
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from . import _kernels
from .errors import (
    CompositionOffsetNonzero,
    DivisionBySingularSeries,
    LeadingCoefficientZero,
    SingularAtExpansionPoint,
)
from .expr import (
    ADD,
    CALL,
    CONST,
    DIVIDE,
    MULTIPLY,
    NEGATE,
    POWER,
    VAR,
    Expr,
    _int_exponent,
    _on_principal_branch,
)

#: |constant term| below this makes a series unusable as a divisor
SERIES_DIVISION_FLOOR = 1e-300

#: fixed catalog of (label, f text, s text, z0) pairs used by the
#: engine/oracle agreement checks, the CLI `check` subcommand and the
#: remainder soundness sweeps
CATALOG: tuple[tuple[str, str, str, complex], ...] = (
    ("rational-in-sine", "1/(1+z)", "sin(z)", 0.0),
    ("binomial-family", "1/(1-2^(1-z))", "2^(-z)", 0.5),
    ("power-8-in-2", "8^(-z)", "2^(-z)", 0.0),
    ("power-9-in-3", "9^(-z)", "3^(-z)", 0.0),
    ("power-5-in-2", "5^(-z)", "2^(-z)", 0.0),
    ("degenerate-rational", "1/(z-2)^2", "1/(z-2)", 0.0),
    ("square-of-exponential", "exp(2*z)", "exp(z)", 0.0),
)


class TruncatedSeries:
    """Degree-N jet: coefficients a0..aN of a function of z0 + t."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients):
        arr = np.ascontiguousarray(coefficients, dtype=np.complex128)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("coefficients must be a non-empty 1-d sequence")
        arr.flags.writeable = False
        object.__setattr__(self, "coefficients", arr)

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedSeries is immutable")

    @property
    def order(self) -> int:
        return self.coefficients.size - 1

    def coefficient(self, i: int) -> complex:
        return complex(self.coefficients[i])

    @classmethod
    def constant(cls, value, order: int) -> "TruncatedSeries":
        c = np.zeros(order + 1, dtype=np.complex128)
        c[0] = value
        return cls(c)

    @classmethod
    def identity(cls, z0, order: int) -> "TruncatedSeries":
        c = np.zeros(order + 1, dtype=np.complex128)
        c[0] = z0
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @classmethod
    def from_expr(cls, e: Expr, z0: complex, order: int) -> "TruncatedSeries":
        """Jet of e(z0 + t), built by recursion on the tree.

        No symbolic differentiation is involved; elementary functions
        contribute closed-form jets at the inner constant term.  Raises
        SingularAtExpansionPoint when a division, log, sqrt, or
        non-integer power is taken at a singular inner value.
        """
        if order < 0:
            raise ValueError("order must be >= 0")
        try:
            return _jet(e, complex(z0), order)
        except (DivisionBySingularSeries, CompositionOffsetNonzero) as exc:
            raise SingularAtExpansionPoint(f"jet of {e} at {z0}: {exc}") from exc

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            if other.order != self.order:
                raise ValueError("order mismatch")
            return other
        return TruncatedSeries.constant(other, self.order)

    def __add__(self, other):
        other = self._coerce(other)
        return TruncatedSeries(self.coefficients + other.coefficients)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return TruncatedSeries(self.coefficients - other.coefficients)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return TruncatedSeries(-self.coefficients)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries(self.coefficients * complex(other))
        other = self._coerce(other)
        return TruncatedSeries(
            _kernels.series_mul(self.coefficients, other.coefficients, self.order))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if abs(other.coefficients[0]) < SERIES_DIVISION_FLOOR:
            raise DivisionBySingularSeries(
                "divisor series has (near-)zero constant term")
        return TruncatedSeries(
            _kernels.series_div(self.coefficients, other.coefficients, self.order))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("series power wants an integer exponent")
        if n < 0:
            return TruncatedSeries.constant(1.0, self.order) / self ** (-n)
        out = TruncatedSeries.constant(1.0, self.order)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """Jet of self(inner(t)); inner's constant term must be exactly 0."""
        inner = self._coerce(inner)
        if inner.coefficients[0] != 0:
            raise CompositionOffsetNonzero(
                f"inner constant term is {inner.coefficients[0]}, not 0")
        return TruncatedSeries(
            _kernels.series_compose(self.coefficients, inner.coefficients, self.order))

    def shift_to_zero(self) -> "TruncatedSeries":
        """Copy with the constant term replaced by an exact 0."""
        c = self.coefficients.copy()
        c[0] = 0.0
        return TruncatedSeries(c)

    def __repr__(self):
        return f"TruncatedSeries({self.coefficients.tolist()!r})"


# --------------------------------------------------------------------------
# elementary jets: coefficients of f(v + w) in w, given the point v
# --------------------------------------------------------------------------

def _cycle_jet(values: list[complex], order: int) -> np.ndarray:
    out = np.empty(order + 1, dtype=np.complex128)
    fact = 1.0
    for k in range(order + 1):
        if k:
            fact *= k
        out[k] = values[k % len(values)] / fact
    return out


def _elementary_jet(name: str, v: complex, order: int) -> np.ndarray:
    if name == "exp":
        return _cycle_jet([cmath.exp(v)], order)
    if name == "sin":
        s, c = cmath.sin(v), cmath.cos(v)
        return _cycle_jet([s, c, -s, -c], order)
    if name == "cos":
        s, c = cmath.sin(v), cmath.cos(v)
        return _cycle_jet([c, -s, -c, s], order)
    if name == "sinh":
        s, c = cmath.sinh(v), cmath.cosh(v)
        return _cycle_jet([s, c], order)
    if name == "cosh":
        s, c = cmath.sinh(v), cmath.cosh(v)
        return _cycle_jet([c, s], order)
    if name == "log":
        if abs(v) < SERIES_DIVISION_FLOOR:
            raise SingularAtExpansionPoint("log at 0")
        v = _on_principal_branch(v)
        out = np.empty(order + 1, dtype=np.complex128)
        out[0] = cmath.log(v)
        sign = 1.0
        vk = v
        for k in range(1, order + 1):
            out[k] = sign / (k * vk)
            sign = -sign
            vk *= v
        return out
    if name == "sqrt":
        if abs(v) < SERIES_DIVISION_FLOOR:
            raise SingularAtExpansionPoint("sqrt at 0")
        v = _on_principal_branch(v)
        out = np.empty(order + 1, dtype=np.complex128)
        out[0] = cmath.sqrt(v)
        for k in range(1, order + 1):
            out[k] = out[k - 1] * (1.5 - k) / (k * v)
        return out
    raise AssertionError(f"no jet rule for {name}")


def _apply_elementary(name: str, inner: TruncatedSeries) -> TruncatedSeries:
    v = complex(inner.coefficients[0])
    if name == "tan":
        return (_apply_elementary("sin", inner) / _apply_elementary("cos", inner))
    outer = TruncatedSeries(_elementary_jet(name, v, inner.order))
    return outer.compose(inner.shift_to_zero())


def _jet(e: Expr, z0: complex, order: int) -> TruncatedSeries:
    if e.kind == CONST:
        v = e.value
        return TruncatedSeries.constant(complex(float(v)) if hasattr(v, "denominator")
                                        else complex(v), order)
    if e.kind == VAR:
        return TruncatedSeries.identity(z0, order)
    if e.kind == ADD:
        out = _jet(e.args[0], z0, order)
        for a in e.args[1:]:
            out = out + _jet(a, z0, order)
        return out
    if e.kind == NEGATE:
        return -_jet(e.args[0], z0, order)
    if e.kind == MULTIPLY:
        out = _jet(e.args[0], z0, order)
        for a in e.args[1:]:
            out = out * _jet(a, z0, order)
        return out
    if e.kind == DIVIDE:
        return _jet(e.args[0], z0, order) / _jet(e.args[1], z0, order)
    if e.kind == POWER:
        base = _jet(e.args[0], z0, order)
        n = _int_exponent(e.args[1])
        if n is not None:
            return base ** n
        # general exponent through exp(c * log(base)), principal branch
        exponent = _jet(e.args[1], z0, order)
        return _apply_elementary("exp", exponent * _apply_elementary("log", base))
    if e.kind == CALL:
        return _apply_elementary(e.name, _jet(e.args[0], z0, order))
    raise AssertionError(f"unreachable node kind {e.kind}")


# --------------------------------------------------------------------------
# coefficient matching
# --------------------------------------------------------------------------

def oracle_coefficients(f: Expr, s: Expr, z0: complex, order: int) -> list[complex]:
    """Expansion coefficients of f in powers of (s - s(z0)), by matching.

    Independent of the differentiation-based engine: both sides become
    jets at z0 and the triangular system is solved by forward
    substitution.  Raises LeadingCoefficientZero when the shifted inner
    series has no linear term.
    """
    F = TruncatedSeries.from_expr(f, z0, order)
    S = TruncatedSeries.from_expr(s, z0, order)
    u = S.shift_to_zero()
    if order >= 1 and abs(u.coefficients[1]) < SERIES_DIVISION_FLOOR:
        raise LeadingCoefficientZero("inner series has zero linear coefficient")

    residual = F.coefficients.copy()
    power_of_u = np.zeros(order + 1, dtype=np.complex128)
    power_of_u[0] = 1.0
    coeffs: list[complex] = []
    for n in range(order + 1):
        c_n = residual[n] / power_of_u[n]
        coeffs.append(complex(c_n))
        residual -= c_n * power_of_u
        if n < order:
            power_of_u = _kernels.series_mul(power_of_u, u.coefficients, order)
    return coeffs


def reconstruct(coeffs: list[complex], s: Expr, z0: complex, order: int) -> TruncatedSeries:
    """Rebuild sum_n c_n * u^n as a jet; inverse of oracle_coefficients."""
    S = TruncatedSeries.from_expr(s, z0, order)
    u = S.shift_to_zero()
    out = TruncatedSeries.constant(0.0, order)
    for c_n in reversed(coeffs):
        out = out * u + c_n
    return out
