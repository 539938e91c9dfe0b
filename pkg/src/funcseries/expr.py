"""Immutable expression trees over one complex variable.

An :class:`Expr` is a finite tree whose nodes are constants, a single
variable, arithmetic operators (add, negate, multiply, divide, power),
or applications of the supported elementary functions.  The module
provides the five operations everything else is built on:

* :func:`parse` -- text to tree, under the grammar
  ``^ (right-assoc) > unary - > * / > + -`` with ``name(arg)`` calls,
  integer / decimal / ``p/q`` literals and one single-letter variable;
* :func:`differentiate` -- symbolic derivative by the standard rules;
* :func:`simplify` -- best-effort constant folding and identity
  elimination (idempotent, value-preserving);
* :func:`evaluate` -- complex-number evaluation on the principal branch
  of log / sqrt / non-integer powers;
* :func:`format_expr` -- minimal-parenthesis text such that
  ``parse(format_expr(e))`` is structurally equal to ``simplify(e)``.

Integer and ``p/q`` literals are kept as exact rationals; decimals are
IEEE doubles.  Expressions are immutable after construction and all
operations here are pure functions, so trees may be shared freely
between threads.
"""

from __future__ import annotations

import cmath
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

from .errors import (
    MultipleVariables,
    ParseError,
    SingularEvaluation,
    UnknownFunction,
)

Number = Union[int, float, complex, Fraction]

#: node kind tags
CONST = "const"
VAR = "var"
ADD = "add"
NEGATE = "negate"
MULTIPLY = "multiply"
DIVIDE = "divide"
POWER = "power"
CALL = "call"

#: |denominator| below this raises SingularEvaluation
DIVISION_FLOOR = 1e-300


@dataclass(frozen=True)
class Expr:
    """One node of an expression tree.

    ``kind`` selects the interpretation: constants carry ``value``
    (a Fraction, float, or complex), variables and function
    applications carry ``name``, and the remaining kinds carry child
    nodes in ``args`` (n-ary for add/multiply, binary for
    divide/power, unary for negate and calls).
    """

    kind: str
    args: tuple["Expr", ...] = ()
    name: str = ""
    value: Number | None = None

    def __add__(self, other):
        return Expr(ADD, (self, _coerce(other)))

    def __radd__(self, other):
        return Expr(ADD, (_coerce(other), self))

    def __sub__(self, other):
        return Expr(ADD, (self, negate(_coerce(other))))

    def __rsub__(self, other):
        return Expr(ADD, (_coerce(other), negate(self)))

    def __mul__(self, other):
        return Expr(MULTIPLY, (self, _coerce(other)))

    def __rmul__(self, other):
        return Expr(MULTIPLY, (_coerce(other), self))

    def __truediv__(self, other):
        return divide(self, _coerce(other))

    def __rtruediv__(self, other):
        return divide(_coerce(other), self)

    def __pow__(self, other):
        return Expr(POWER, (self, _coerce(other)))

    def __neg__(self):
        return negate(self)

    def __str__(self):
        return format_expr(self)


def _coerce(x) -> Expr:
    if isinstance(x, Expr):
        return x
    return const(x)


def const(value: Number) -> Expr:
    """Constant node; ints become exact Fractions, real complexes floats."""
    if isinstance(value, bool):
        raise TypeError("bool is not a numeric constant")
    if isinstance(value, int):
        value = Fraction(value)
    elif isinstance(value, complex) and value.imag == 0.0:
        value = value.real
    return Expr(CONST, value=value)


def var(letter: str) -> Expr:
    if len(letter) != 1 or not letter.isalpha():
        raise ValueError(f"variable must be a single letter, got {letter!r}")
    return Expr(VAR, name=letter)


def add(*terms: Expr) -> Expr:
    return Expr(ADD, tuple(terms))


def negate(e: Expr) -> Expr:
    # fold constants so "-2" and unary minus of 2 are one node
    if e.kind == CONST:
        return Expr(CONST, value=-e.value)
    return Expr(NEGATE, (e,))


def multiply(*factors: Expr) -> Expr:
    return Expr(MULTIPLY, tuple(factors))


def divide(num: Expr, den: Expr) -> Expr:
    # fold exact rational quotients so "7/6" is a single constant
    if (
        num.kind == CONST
        and den.kind == CONST
        and isinstance(num.value, Fraction)
        and isinstance(den.value, Fraction)
        and den.value != 0
    ):
        return Expr(CONST, value=num.value / den.value)
    return Expr(DIVIDE, (num, den))


def power(base: Expr, exponent: Expr) -> Expr:
    return Expr(POWER, (base, exponent))


def call(fname: str, arg: Expr) -> Expr:
    if fname not in FUNCTIONS:
        raise ValueError(f"unsupported function {fname!r}")
    return Expr(CALL, (arg,), name=fname)


# --------------------------------------------------------------------------
# supported elementary functions: name -> (numeric rule, derivative builder)
# The derivative builder returns d(f(u))/du as an expression in u.
# Extending the function set means adding one row here plus a jet rule in
# the oracle module.
# --------------------------------------------------------------------------

FUNCTIONS: dict[str, tuple[Callable[[complex], complex], Callable[[Expr], Expr]]] = {
    "exp": (cmath.exp, lambda u: call("exp", u)),
    "log": (cmath.log, lambda u: divide(const(1), u)),
    "sin": (cmath.sin, lambda u: call("cos", u)),
    "cos": (cmath.cos, lambda u: negate(call("sin", u))),
    "tan": (cmath.tan, lambda u: add(const(1), power(call("tan", u), const(2)))),
    "sinh": (cmath.sinh, lambda u: call("cosh", u)),
    "cosh": (cmath.cosh, lambda u: call("sinh", u)),
    "sqrt": (cmath.sqrt, lambda u: divide(const(1), multiply(const(2), call("sqrt", u)))),
}


def variables(e: Expr) -> set[str]:
    """Set of variable letters appearing in the tree."""
    out: set[str] = set()
    stack = [e]
    while stack:
        node = stack.pop()
        if node.kind == VAR:
            out.add(node.name)
        stack.extend(node.args)
    return out


def sole_variable(*exprs: Expr, default: str = "z") -> str:
    """The unique variable letter used by the given expressions.

    Constant-only expressions contribute nothing; if no expression names
    a variable the default is returned.
    """
    seen: set[str] = set()
    for e in exprs:
        seen |= variables(e)
    if len(seen) > 1:
        raise ValueError(f"expressions mix distinct variables {sorted(seen)}")
    return seen.pop() if seen else default


def substitute(e: Expr, letter: str, replacement: Expr) -> Expr:
    """Replace every occurrence of the variable ``letter`` by ``replacement``."""
    if e.kind == VAR:
        return replacement if e.name == letter else e
    if not e.args:
        return e
    return Expr(e.kind, tuple(substitute(a, letter, replacement) for a in e.args),
                e.name, e.value)


# --------------------------------------------------------------------------
# differentiation
# --------------------------------------------------------------------------

def differentiate(e: Expr, letter: str = "z") -> Expr:
    """Symbolic derivative d e / d letter (unsimplified)."""
    if e.kind == CONST:
        return const(0)
    if e.kind == VAR:
        return const(1) if e.name == letter else const(0)
    if e.kind == ADD:
        return add(*[differentiate(t, letter) for t in e.args])
    if e.kind == NEGATE:
        return negate(differentiate(e.args[0], letter))
    if e.kind == MULTIPLY:
        terms = []
        for i, a in enumerate(e.args):
            terms.append(multiply(*e.args[:i], differentiate(a, letter), *e.args[i + 1:]))
        return add(*terms)
    if e.kind == DIVIDE:
        a, b = e.args
        num = add(multiply(differentiate(a, letter), b),
                  negate(multiply(a, differentiate(b, letter))))
        return divide(num, power(b, const(2)))
    if e.kind == POWER:
        b, c = e.args
        if letter not in variables(c):
            # d(b^c) = c * b^(c-1) * b'
            if c.kind == CONST:
                cm1 = const(c.value - 1)
            else:
                cm1 = add(c, const(-1))
            return multiply(c, power(b, cm1), differentiate(b, letter))
        # exponent depends on the variable: b^c = exp(c*log b)
        inner = add(multiply(differentiate(c, letter), call("log", b)),
                    divide(multiply(c, differentiate(b, letter)), b))
        return multiply(power(b, c), inner)
    if e.kind == CALL:
        u = e.args[0]
        return multiply(FUNCTIONS[e.name][1](u), differentiate(u, letter))
    raise AssertionError(f"unreachable node kind {e.kind}")


# --------------------------------------------------------------------------
# simplification
#
# One bottom-up pass of local rewrites: constant folding, 0/1 identity
# elimination, flattening of nested add/multiply, merging of repeated
# integer-power factors, and x/x -> 1 by structural equality.  The rule
# set is closed under itself, which makes the pass idempotent without
# fixpoint iteration.
# --------------------------------------------------------------------------

_ZERO = const(0)
_ONE = const(1)


def _is_const(e: Expr, v=None) -> bool:
    return e.kind == CONST and (v is None or e.value == v)


def _int_exponent(e: Expr) -> int | None:
    """The exponent as a Python int when it is an integer-valued constant."""
    if e.kind != CONST:
        return None
    v = e.value
    if isinstance(v, Fraction) and v.denominator == 1:
        return int(v)
    if isinstance(v, float) and v.is_integer():
        return int(v)
    return None


def simplify(e: Expr) -> Expr:
    if e.kind in (CONST, VAR):
        return e
    args = tuple(simplify(a) for a in e.args)

    if e.kind == ADD:
        return _simplify_add(args)
    if e.kind == NEGATE:
        (child,) = args
        if child.kind == CONST:
            return const(-child.value)
        if child.kind == NEGATE:
            return child.args[0]
        return Expr(NEGATE, (child,))
    if e.kind == MULTIPLY:
        return _simplify_multiply(args)
    if e.kind == DIVIDE:
        return _simplify_divide(*args)
    if e.kind == POWER:
        return _simplify_power(*args)
    if e.kind == CALL:
        return _simplify_call(e.name, args[0])
    raise AssertionError(f"unreachable node kind {e.kind}")


def _coeff_and_factors(t: Expr) -> tuple[Number, list[Expr]]:
    """Split a simplified non-const term into (numeric coefficient, factors)."""
    coeff: Number = Fraction(1)
    if t.kind == NEGATE:
        coeff = -coeff
        t = t.args[0]
    factors: list[Expr] = []
    for f in (t.args if t.kind == MULTIPLY else (t,)):
        if f.kind == CONST:
            coeff = coeff * f.value
        else:
            factors.append(f)
    return coeff, factors


def _simplify_add(args: tuple[Expr, ...]) -> Expr:
    """Flatten a sum, fold constants, and combine like terms exactly."""
    order: list[frozenset] = []
    coeffs: dict[frozenset, Number] = {}
    parts_of: dict[frozenset, list[Expr]] = {}
    constant: Number = Fraction(0)
    for a in args:
        for t in (a.args if a.kind == ADD else (a,)):
            if t.kind == CONST:
                constant = constant + t.value
                continue
            coeff, factors = _coeff_and_factors(t)
            counted: dict[Expr, int] = {}
            for f in factors:
                counted[f] = counted.get(f, 0) + 1
            key = frozenset(counted.items())
            if key in coeffs:
                coeffs[key] = coeffs[key] + coeff
            else:
                coeffs[key] = coeff
                parts_of[key] = factors
                order.append(key)

    terms: list[Expr] = []
    for key in order:
        coeff = coeffs[key]
        if coeff == 0:
            continue
        factors = parts_of[key]
        if coeff == 1 and len(factors) == 1:
            terms.append(factors[0])
        else:
            terms.append(_simplify_multiply((const(coeff), *factors)))

    # bring sums of quotients over one denominator so like terms can meet
    def is_quotient(t: Expr) -> bool:
        return t.kind == DIVIDE or (t.kind == NEGATE and t.args[0].kind == DIVIDE)

    if any(is_quotient(t) for t in terms) and len(terms) + (constant != 0) > 1:
        combined = list(terms)
        if constant != 0:
            combined.append(const(constant))
        return _combine_quotients(combined)

    if constant != 0 or not terms:
        terms.append(const(constant))
    if len(terms) == 1:
        return terms[0]
    return Expr(ADD, tuple(terms))


def _tally_factors(parts) -> tuple[dict[Expr, int], list[Expr]]:
    """Split factors into (base -> positive int exponent, opaque leftovers)."""
    exps: dict[Expr, int] = {}
    opaque: list[Expr] = []
    for f in parts:
        base, exp = f, 1
        if f.kind == POWER:
            k = _int_exponent(f.args[1])
            if k is not None and k > 0:
                base, exp = f.args[0], k
        if base.kind == CONST or (base is f and f.kind == POWER):
            opaque.append(f)
        else:
            exps[base] = exps.get(base, 0) + exp
    return exps, opaque


def _combine_quotients(terms: list[Expr]) -> Expr:
    """Rewrite t1 + t2 + ... as one quotient over the least common denominator."""
    info = []
    lcd_exps: dict[Expr, int] = {}
    lcd_opaque: dict[Expr, int] = {}
    for t in terms:
        nums, dens, cst = _split_quotient(t)
        exps, opaque = _tally_factors(dens)
        opq: dict[Expr, int] = {}
        for o in opaque:
            opq[o] = opq.get(o, 0) + 1
        info.append((nums, cst, exps, opq))
        for b, k in exps.items():
            lcd_exps[b] = max(lcd_exps.get(b, 0), k)
        for o, k in opq.items():
            lcd_opaque[o] = max(lcd_opaque.get(o, 0), k)

    new_terms = []
    for nums, cst, exps, opq in info:
        extra: list[Expr] = []
        for b, k in lcd_exps.items():
            missing = k - exps.get(b, 0)
            if missing:
                extra.append(b if missing == 1 else Expr(POWER, (b, const(missing))))
        for o, k in lcd_opaque.items():
            extra.extend([o] * (k - opq.get(o, 0)))
        new_terms.append(_simplify_multiply((const(cst), *nums, *extra)))

    den_factors: list[Expr] = []
    for b, k in lcd_exps.items():
        den_factors.append(b if k == 1 else Expr(POWER, (b, const(k))))
    for o, k in lcd_opaque.items():
        den_factors.extend([o] * k)
    num_node = _simplify_add(tuple(new_terms))
    den_node = _simplify_multiply(tuple(den_factors)) if den_factors else const(1)
    return _simplify_divide(num_node, den_node)


def _simplify_multiply(args: tuple[Expr, ...]) -> Expr:
    """Flatten and fold a product of already-simplified factors.

    Quotient factors are lifted (a * (b/c) -> a*b / c) so a simplified
    multiply never directly contains a divide; repeated bases merge
    into integer powers.
    """
    factors: list[Expr] = []
    denominators: list[Expr] = []
    constant: Number = Fraction(1)
    stack = list(reversed(args))
    while stack:
        f = stack.pop()
        if f.kind == MULTIPLY:
            stack.extend(reversed(f.args))
        elif f.kind == NEGATE:
            constant = -constant
            stack.append(f.args[0])
        elif f.kind == CONST:
            constant = constant * f.value
        elif f.kind == DIVIDE:
            stack.append(f.args[0])
            denominators.append(f.args[1])
        else:
            factors.append(f)
    if constant == 0:
        return const(0)
    if denominators:
        num = _rebuild_product(constant, _merge_power_factors(factors))
        den = _simplify_multiply(tuple(denominators))
        return _simplify_divide(num, den)
    return _rebuild_product(constant, _merge_power_factors(factors))


def _merge_power_factors(factors: list[Expr]) -> list[Expr]:
    """Merge repeated bases with integer exponents: x * x^2 -> x^3."""
    merged: list[tuple[Expr, int] | Expr] = []
    index: dict[Expr, int] = {}
    for f in factors:
        base, exp = f, 1
        is_int_power = False
        if f.kind == POWER:
            n = _int_exponent(f.args[1])
            if n is not None:
                base, exp, is_int_power = f.args[0], n, True
        if base in index and isinstance(merged[index[base]], tuple):
            b, n = merged[index[base]]
            merged[index[base]] = (b, n + exp)
        elif is_int_power or f.kind != POWER:
            index[base] = len(merged)
            merged.append((base, exp))
        else:
            merged.append(f)

    rebuilt: list[Expr] = []
    for item in merged:
        if isinstance(item, tuple):
            base, n = item
            if n == 0:
                continue
            rebuilt.append(base if n == 1 else Expr(POWER, (base, const(n))))
        else:
            rebuilt.append(item)
    return rebuilt


def _rebuild_product(constant: Number, factors: list[Expr]) -> Expr:
    rest: list[Expr] = []
    for f in factors:
        if f.kind == CONST:
            constant = constant * f.value
        else:
            rest.append(f)
    if constant == 0:
        return const(0)
    factors = rest
    negated = False
    if constant == -1 and factors:
        negated = True
    elif constant != 1 or not factors:
        factors = [const(constant)] + factors
    if not factors:
        return const(1)
    out = factors[0] if len(factors) == 1 else Expr(MULTIPLY, tuple(factors))
    return Expr(NEGATE, (out,)) if negated else out


def _simplify_divide(num: Expr, den: Expr) -> Expr:
    negated = False
    if num.kind == NEGATE:
        negated = not negated
        num = num.args[0]
    if den.kind == NEGATE:
        negated = not negated
        den = den.args[0]
    out = _divide_core(num, den)
    if negated:
        if out.kind == CONST:
            out = const(-out.value)
        elif out.kind == NEGATE:
            out = out.args[0]
        else:
            out = Expr(NEGATE, (out,))
    return out


def _split_quotient(e: Expr) -> tuple[list[Expr], list[Expr], Number]:
    """Decompose into (numerator factors, denominator factors, constant)."""
    nums: list[Expr] = []
    dens: list[Expr] = []
    constant: Number = Fraction(1)
    sign = 1
    if e.kind == NEGATE:
        sign = -1
        e = e.args[0]
    if e.kind == DIVIDE:
        top, bottom = e.args
    else:
        top, bottom = e, None
    for part, sink in ((top, nums), (bottom, dens)):
        if part is None:
            continue
        for f in (part.args if part.kind == MULTIPLY else (part,)):
            if f.kind == CONST:
                if sink is nums:
                    constant = constant * f.value
                elif f.value != 0:
                    constant = constant / f.value
                else:
                    sink.append(f)
            else:
                sink.append(f)
    return nums, dens, sign * constant


def _factor_tally(parts) -> dict[Expr, int]:
    """Base -> positive integer exponent for the factorable parts."""
    exps: dict[Expr, int] = {}
    for f in parts:
        base, exp = f, 1
        if f.kind == POWER:
            k = _int_exponent(f.args[1])
            if k is None or k <= 0:
                continue
            base, exp = f.args[0], k
        if base.kind != CONST:
            exps[base] = exps.get(base, 0) + exp
    return exps


def _extract_common_factors(addnode: Expr, wanted: set[Expr]) -> tuple[list[Expr], Expr]:
    """Pull factors shared by every term of a sum, restricted to wanted bases.

    Returns (factor nodes, reduced sum); the product of both equals the
    input exactly.  Used so a sum-numerator can cancel against the
    denominator of the enclosing quotient.
    """
    term_info = []
    common: dict[Expr, int] | None = None
    for t in addnode.args:
        inner = t.args[0] if t.kind == NEGATE else t
        parts = inner.args if inner.kind == MULTIPLY else (inner,)
        tally = _factor_tally(parts)
        term_info.append((t, inner, tally))
        common = tally if common is None else {
            b: min(k, common[b]) for b, k in tally.items() if b in common}
        if not common:
            return [], addnode
    common = {b: k for b, k in common.items() if b in wanted}
    if not common:
        return [], addnode

    reduced_terms = []
    for t, inner, _ in term_info:
        remaining = dict(common)
        kept: list[Expr] = []
        constant: Number = Fraction(1)
        for f in (inner.args if inner.kind == MULTIPLY else (inner,)):
            base, exp = f, 1
            if f.kind == POWER:
                k = _int_exponent(f.args[1])
                if k is not None and k > 0:
                    base, exp = f.args[0], k
            if f.kind == CONST:
                constant = constant * f.value
                continue
            take = remaining.get(base, 0)
            if take:
                drop = min(take, exp)
                remaining[base] = take - drop
                if take - drop == 0:
                    del remaining[base]
                exp -= drop
                if exp == 0:
                    continue
                kept.append(base if exp == 1 else Expr(POWER, (base, const(exp))))
            else:
                kept.append(f)
        if t.kind == NEGATE:
            constant = -constant
        reduced_terms.append(_rebuild_product(constant, kept))
    factors = [b if k == 1 else Expr(POWER, (b, const(k))) for b, k in common.items()]
    return factors, _simplify_add(tuple(reduced_terms))


def _expand_terms(e: Expr) -> list[Expr]:
    """Distribute products over sums, returning flat monomial-like terms.

    Powers of sums stay atomic; only explicit sum factors multiply out.
    The returned terms add up to e exactly.
    """
    if e.kind == ADD:
        out: list[Expr] = []
        for t in e.args:
            out.extend(_expand_terms(t))
        return out
    if e.kind == NEGATE:
        return [_simplify_multiply((const(-1), t)) for t in _expand_terms(e.args[0])]
    if e.kind == MULTIPLY and any(f.kind == ADD for f in e.args):
        rest = [f for f in e.args if f.kind != ADD]
        combos: list[list[Expr]] = [[]]
        for f in e.args:
            if f.kind == ADD:
                combos = [c + [t] for c in combos for t in f.args]
        out = []
        for picks in combos:
            out.extend(_expand_terms(_simplify_multiply((*rest, *picks))))
        return out
    return [e]


def _divide_core(num: Expr, den: Expr) -> Expr:
    if _is_const(den, 1):
        return num
    if _is_const(num, 0) and not _is_const(den, 0):
        return const(0)
    if num.kind == CONST and den.kind == CONST and den.value != 0:
        if isinstance(num.value, Fraction) and isinstance(den.value, Fraction):
            return const(num.value / den.value)
        return const(_as_python_number(num.value) / _as_python_number(den.value))
    if num == den and not _is_const(num, 0):
        return const(1)

    # flatten nested quotients into one numerator/denominator factor list
    n_nums, n_dens, n_const = _split_quotient(num)
    d_nums, d_dens, d_const = _split_quotient(den)
    num_parts = n_nums + d_dens
    den_parts = n_dens + d_nums
    constant: Number = n_const
    divide_by: Number = d_const

    # normalize the numerator to a collected sum of monomial terms so the
    # cancellation below can see every factor
    num_product = _simplify_multiply((const(constant), *num_parts))
    expanded_terms = _expand_terms(num_product)
    if len(expanded_terms) > 1:
        num_product = _simplify_add(tuple(expanded_terms))
    else:
        num_product = expanded_terms[0]
    num_parts, stray_dens, constant = _split_quotient(num_product)
    den_parts = den_parts + stray_dens

    # a sum-numerator can still cancel if all its terms share denominator bases
    den_bases = set(_factor_tally(den_parts))
    if den_bases:
        expanded: list[Expr] = []
        for part in num_parts:
            if part.kind == ADD:
                got, reduced = _extract_common_factors(part, den_bases)
                expanded.extend(got)
                expanded.append(reduced)
            else:
                expanded.append(part)
        num_parts = expanded

    # cancel shared bases power-aware and multiset-wise: keys are bases,
    # values are accumulated integer exponents
    def tally(parts: list[Expr]) -> tuple[dict[Expr, int], list[Expr]]:
        exps: dict[Expr, int] = {}
        opaque: list[Expr] = []
        for f in parts:
            base, exp = f, 1
            if f.kind == POWER:
                k = _int_exponent(f.args[1])
                if k is not None and k > 0:
                    base, exp = f.args[0], k
                else:
                    opaque.append(f)
                    continue
            exps[base] = exps.get(base, 0) + exp
        return exps, opaque

    num_exps, num_opaque = tally(num_parts)
    den_exps, den_opaque = tally(den_parts)
    for base in list(den_exps):
        if base in num_exps:
            k = min(num_exps[base], den_exps[base])
            num_exps[base] -= k
            den_exps[base] -= k

    def rebuild(exps: dict[Expr, int], opaque: list[Expr]) -> list[Expr]:
        out = []
        for base, exp in exps.items():
            if exp == 0:
                continue
            out.append(base if exp == 1 else Expr(POWER, (base, const(exp))))
        return out + opaque

    new_num = _rebuild_product(constant, _merge_power_factors(rebuild(num_exps, num_opaque)))
    new_den = _rebuild_product(divide_by, _merge_power_factors(rebuild(den_exps, den_opaque)))

    if _is_const(new_den, 1):
        return new_num
    if new_num == num and new_den == den:
        return Expr(DIVIDE, (num, den))
    return _simplify_divide(new_num, new_den)


def _simplify_power(base: Expr, exponent: Expr) -> Expr:
    if _is_const(exponent, 0):
        return const(1)
    if _is_const(exponent, 1):
        return base
    if _is_const(base, 1):
        return const(1)
    n = _int_exponent(exponent)
    if _is_const(base, 0):
        ev = exponent.value if exponent.kind == CONST else None
        if ev is not None and not isinstance(ev, complex) and ev > 0:
            return const(0)
    if base.kind == CONST and n is not None:
        if isinstance(base.value, Fraction):
            if base.value != 0 or n >= 0:
                return const(base.value ** n)
        else:
            try:
                return const(_as_python_number(base.value) ** n)
            except ZeroDivisionError:
                pass
    if n is not None:
        # integer powers distribute exactly over signs, products, quotients
        if base.kind == NEGATE:
            inner = _simplify_power(base.args[0], const(n))
            if n % 2 == 0:
                return inner
            if inner.kind == CONST:
                return const(-inner.value)
            if inner.kind == NEGATE:
                return inner.args[0]
            return Expr(NEGATE, (inner,))
        if base.kind == MULTIPLY:
            return _simplify_multiply(
                tuple(_simplify_power(f, const(n)) for f in base.args))
        if base.kind == DIVIDE:
            top = _simplify_power(base.args[0], const(n))
            bottom = _simplify_power(base.args[1], const(n))
            return _simplify_divide(top, bottom)
        if base.kind == POWER:
            m = _int_exponent(base.args[1])
            if m is not None:
                return _simplify_power(base.args[0], const(m * n))
    return Expr(POWER, (base, exponent))


_EXACT_CALLS = {
    ("exp", Fraction(0)): const(1),
    ("log", Fraction(1)): const(0),
    ("sin", Fraction(0)): const(0),
    ("cos", Fraction(0)): const(1),
    ("tan", Fraction(0)): const(0),
    ("sinh", Fraction(0)): const(0),
    ("cosh", Fraction(0)): const(1),
    ("sqrt", Fraction(0)): const(0),
    ("sqrt", Fraction(1)): const(1),
}


def _simplify_call(name: str, arg: Expr) -> Expr:
    if arg.kind == CONST:
        folded = _EXACT_CALLS.get((name, arg.value))
        if folded is not None:
            return folded
    return Expr(CALL, (arg,), name=name)


def _as_python_number(v: Number):
    return float(v) if isinstance(v, Fraction) else v


# --------------------------------------------------------------------------
# evaluation
# --------------------------------------------------------------------------

def _finite(z: complex) -> bool:
    return cmath.isfinite(z)


def _on_principal_branch(u: complex) -> complex:
    # pin the branch cut to the limit from above: -0.0 imaginary parts
    # would otherwise flip log/sqrt/power across the cut depending on
    # how a real value was computed
    if u.imag == 0.0:
        return complex(u.real, 0.0)
    return u


def evaluate(e: Expr, at: complex) -> complex:
    """Evaluate the tree at a complex point.

    log, sqrt and non-integer powers use the principal branch.  A
    division with |denominator| < 1e-300, or any non-finite
    intermediate, raises SingularEvaluation.  Non-finite inputs are
    rejected outright.
    """
    z = complex(at)
    if not _finite(z):
        raise ValueError(f"evaluation point must be finite, got {at!r}")
    out = _eval(e, z)
    if not _finite(out):
        raise SingularEvaluation(f"non-finite value at z={z}")
    return out


def _eval(e: Expr, z: complex) -> complex:
    if e.kind == CONST:
        v = e.value
        return complex(float(v)) if isinstance(v, Fraction) else complex(v)
    if e.kind == VAR:
        return z
    if e.kind == ADD:
        return sum((_eval(a, z) for a in e.args), complex(0))
    if e.kind == NEGATE:
        return -_eval(e.args[0], z)
    if e.kind == MULTIPLY:
        out = complex(1)
        for a in e.args:
            out *= _eval(a, z)
        return out
    if e.kind == DIVIDE:
        den = _eval(e.args[1], z)
        if abs(den) < DIVISION_FLOOR:
            raise SingularEvaluation(f"division by ~0 at z={z}")
        return _eval(e.args[0], z) / den
    if e.kind == POWER:
        base = _eval(e.args[0], z)
        n = _int_exponent(e.args[1])
        try:
            if n is not None:
                return base ** n
            return _on_principal_branch(base) ** _eval(e.args[1], z)
        except (ZeroDivisionError, OverflowError, ValueError) as exc:
            raise SingularEvaluation(f"power undefined at z={z}: {exc}") from exc
    if e.kind == CALL:
        u = _eval(e.args[0], z)
        if e.name in ("log", "sqrt"):
            u = _on_principal_branch(u)
        try:
            out = FUNCTIONS[e.name][0](u)
        except (ValueError, OverflowError, ZeroDivisionError) as exc:
            raise SingularEvaluation(f"{e.name} undefined at z={z}: {exc}") from exc
        if not _finite(out):
            raise SingularEvaluation(f"{e.name} non-finite at z={z}")
        return out
    raise AssertionError(f"unreachable node kind {e.kind}")


# --------------------------------------------------------------------------
# formatting
#
# Precedence levels used for parenthesization; higher binds tighter.
# add=1, multiply/divide=2, unary minus=3, power=4, atom=5.  Constants
# printed as "p/q" act like level 2, negative ones like level 3.
# --------------------------------------------------------------------------

def format_expr(e: Expr) -> str:
    """Render the simplified tree as grammar text.

    The output re-parses to a tree structurally equal to
    ``simplify(e)``.  Constants with a nonzero imaginary part have no
    literal syntax and are rejected.
    """
    return _fmt(simplify(e), 0)


def _const_text(v: Number) -> tuple[str, int]:
    if isinstance(v, complex):
        if v.imag != 0.0:
            raise ValueError(f"complex constant {v!r} has no text form")
        v = v.real
    if isinstance(v, Fraction):
        text = str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    else:
        text = repr(float(v))
    level = 5
    if "/" in text:
        level = 2
    if text.startswith("-"):
        level = 3
    return text, level


def _fmt(e: Expr, need: int) -> str:
    text, level = _fmt_node(e)
    if level < need:
        return f"({text})"
    return text


def _fmt_node(e: Expr) -> tuple[str, int]:
    if e.kind == CONST:
        return _const_text(e.value)
    if e.kind == VAR:
        return e.name, 5
    if e.kind == CALL:
        return f"{e.name}({_fmt(e.args[0], 0)})", 5
    if e.kind == NEGATE:
        return f"-{_fmt(e.args[0], 4)}", 3
    if e.kind == POWER:
        base, exponent = e.args
        return f"{_fmt(base, 5)}^{_fmt(exponent, 4)}", 4
    if e.kind == DIVIDE:
        num, den = e.args
        return f"{_fmt(num, 2)}/{_fmt(den, 4)}", 2
    if e.kind == MULTIPLY:
        parts = [_fmt(e.args[0], 2)]
        parts += [_fmt(a, 4) for a in e.args[1:]]
        return "*".join(parts), 2
    if e.kind == ADD:
        out = _fmt(e.args[0], 2)
        for t in e.args[1:]:
            if t.kind == NEGATE:
                out += f" - {_fmt(t.args[0], 2)}"
            elif t.kind == CONST and _const_text(t.value)[0].startswith("-"):
                neg_text, _ = _const_text(-t.value)
                out += f" - {neg_text}" if "/" not in neg_text else f" - ({neg_text})"
            else:
                out += f" + {_fmt(t, 2)}"
        return out, 1
    raise AssertionError(f"unreachable node kind {e.kind}")


# --------------------------------------------------------------------------
# parsing
# --------------------------------------------------------------------------

_TOKEN = re.compile(r"(\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)|([A-Za-z_][A-Za-z0-9_]*)|([-+*/^()])")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        self.pos = 0
        self.seen_vars: set[str] = set()
        self._tokenize()

    def _tokenize(self):
        i = 0
        while i < len(self.text):
            if self.text[i].isspace():
                i += 1
                continue
            m = _TOKEN.match(self.text, i)
            if m is None:
                raise ParseError(f"unexpected character {self.text[i]!r}", i)
            number, ident, op = m.groups()
            if number:
                self.tokens.append(("num", number, i))
            elif ident:
                self.tokens.append(("name", ident, i))
            else:
                self.tokens.append(("op", op, i))
            i = m.end()
        self.tokens.append(("end", "", len(self.text)))

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, value, at = self.peek()
        if kind != "op" or value != op:
            raise ParseError(f"expected {op!r}", at)
        self.advance()

    def parse(self) -> Expr:
        e = self.parse_add()
        kind, value, at = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {value!r}", at)
        return e

    def parse_add(self) -> Expr:
        terms = [self.parse_mul()]
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                term = self.parse_mul()
                terms.append(term if value == "+" else negate(term))
            else:
                break
        return terms[0] if len(terms) == 1 else Expr(ADD, tuple(terms))

    def parse_mul(self) -> Expr:
        node = self.parse_unary()
        while True:
            kind, value, _ = self.peek()
            if kind != "op" or value not in "*/":
                break
            if value == "*":
                factors = [node]
                while self.peek()[:2] == ("op", "*"):
                    self.advance()
                    factors.append(self.parse_unary())
                node = Expr(MULTIPLY, tuple(factors))
            else:
                self.advance()
                node = divide(node, self.parse_unary())
        return node

    def parse_unary(self) -> Expr:
        kind, value, _ = self.peek()
        if kind == "op" and value == "-":
            self.advance()
            return negate(self.parse_unary())
        return self.parse_power()

    def parse_power(self) -> Expr:
        base = self.parse_atom()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            return Expr(POWER, (base, self.parse_unary()))
        return base

    def parse_atom(self) -> Expr:
        kind, value, at = self.advance()
        if kind == "num":
            if "." in value or "e" in value or "E" in value:
                return const(float(value))
            return const(int(value))
        if kind == "op" and value == "(":
            e = self.parse_add()
            self.expect_op(")")
            return e
        if kind == "name":
            if self.peek()[:2] == ("op", "("):
                if value not in FUNCTIONS:
                    raise UnknownFunction(f"unknown function {value!r}", at)
                self.advance()
                arg = self.parse_add()
                self.expect_op(")")
                return Expr(CALL, (arg,), name=value)
            if len(value) == 1:
                self.seen_vars.add(value)
                if len(self.seen_vars) > 1:
                    raise MultipleVariables(
                        f"multiple variables {sorted(self.seen_vars)}", at)
                return Expr(VAR, name=value)
            raise ParseError(f"unknown name {value!r}", at)
        raise ParseError(f"unexpected {value!r}" if value else "unexpected end of input", at)


def parse(text: str) -> Expr:
    """Parse grammar text into an expression tree.

    Raises ParseError (with position) on malformed input,
    UnknownFunction for calls outside the supported set, and
    MultipleVariables if two distinct variable letters appear.
    """
    return _Parser(text).parse()
