"""Expression tree: parsing, printing, differentiation, simplification, evaluation."""

import math

import numpy as np
import pytest

from funcseries.errors import (
    MultipleVariables,
    ParseError,
    SingularEvaluation,
    UnknownFunction,
)
from funcseries.expr import (
    ADD,
    CALL,
    CONST,
    DIVIDE,
    MULTIPLY,
    NEGATE,
    POWER,
    Expr,
    const,
    differentiate,
    evaluate,
    format_expr,
    parse,
    simplify,
    substitute,
    var,
    variables,
)

Z = var("z")

#: expressions exercised by the round-trip / derivative / simplify grids
CORPUS = [
    "1/(1+z)",
    "sin(z)^3",
    "2^(-z)",
    "exp(2*z)",
    "1/(1-2^(1-z))",
    "8^(-z)",
    "1/(z-2)^2",
    "1/(z-2)",
    "sin(z)",
    "cos(z)*exp(z) - z^3/6",
    "sqrt(1+z)",
    "log(1+z)",
    "tan(z/4)",
    "sinh(z)*cosh(z)",
    "z^2 - 3*z + 7/6",
    "exp(z)/(2 - sin(z))",
]

#: points where a given corpus expression is singular (kept off sample grids)
RNG = np.random.default_rng(20240817)


def sample_points(n=16, radius=0.9):
    pts = RNG.uniform(-radius, radius, size=(n, 2))
    return [complex(a, b) for a, b in pts]


def finite_difference(e, z, h=1e-6):
    """Central-difference derivative, the independent check for differentiate."""
    return (evaluate(e, z + h) - evaluate(e, z - h)) / (2 * h)


class TestParse:
    def test_rational_maps_to_divide(self):
        e = parse("1/(1+z)")
        assert e.kind == DIVIDE
        assert e.args[0] == const(1)
        assert e.args[1].kind == ADD
        assert e.args[1].args == (const(1), Z)

    def test_power_binds_tighter_than_call_argument(self):
        e = parse("sin(z)^3")
        assert e.kind == POWER
        assert e.args[0].kind == CALL and e.args[0].name == "sin"
        assert e.args[1] == const(3)

    def test_negated_exponent(self):
        e = parse("2^(-z)")
        assert e.kind == POWER
        assert e.args[0] == const(2)
        assert e.args[1].kind == NEGATE
        assert e.args[1].args[0] == Z

    def test_unary_minus_binds_tighter_than_multiply(self):
        e = parse("-2*z")
        assert e.kind == MULTIPLY
        assert e.args[0] == const(-2)

    def test_power_is_right_associative(self):
        e = parse("z^2^3")
        assert e.kind == POWER
        assert e.args[1].kind == POWER

    def test_fraction_literal_folds_exactly(self):
        e = parse("7/6")
        assert e.kind == CONST
        assert e.value.numerator == 7 and e.value.denominator == 6

    def test_syntax_error_reports_position(self):
        with pytest.raises(ParseError) as err:
            parse("1 + @")
        assert err.value.position == 4

    def test_unknown_function(self):
        with pytest.raises(UnknownFunction):
            parse("arcsin(z)")

    def test_multiple_variables_rejected(self):
        with pytest.raises(MultipleVariables):
            parse("z + w")

    def test_trailing_garbage_rejected(self):
        with pytest.raises(ParseError):
            parse("1 + 2)")

    def test_empty_input_rejected(self):
        with pytest.raises(ParseError):
            parse("   ")


class TestEvaluate:
    def test_rational_at_origin(self):
        assert evaluate(parse("1/(1+z)"), 0) == 1

    def test_exponential_decay(self):
        assert evaluate(parse("2^(-z)"), 1) == pytest.approx(0.5, abs=1e-15)

    def test_pole_raises(self):
        with pytest.raises(SingularEvaluation):
            evaluate(parse("1/(1+z)"), -1)

    def test_log_principal_branch(self):
        got = evaluate(parse("log(z)"), -1 + 1e-9j)
        assert got.imag == pytest.approx(math.pi, abs=1e-6)

    def test_nonfinite_input_rejected(self):
        with pytest.raises(ValueError):
            evaluate(Z, complex(float("nan"), 0))

    def test_integer_power_of_zero(self):
        assert evaluate(parse("z^3"), 0) == 0
        with pytest.raises(SingularEvaluation):
            evaluate(parse("z^(-1)"), 0)


class TestDifferentiate:
    def test_square(self):
        d = simplify(differentiate(parse("z^2")))
        assert d == simplify(parse("2*z"))

    def test_sin(self):
        assert simplify(differentiate(parse("sin(z)"))) == parse("cos(z)")

    def test_exponential_base_two(self):
        # d 2^(-z) / dz = -ln(2) * 2^(-z); checked by central differences
        d = differentiate(parse("2^(-z)"))
        z = 0.3
        got = evaluate(d, z)
        want = finite_difference(parse("2^(-z)"), z)
        assert abs(got - want) <= 1e-8 * abs(want)
        assert got == pytest.approx(-math.log(2) * 2 ** (-z), rel=1e-12)

    @pytest.mark.parametrize("text", CORPUS)
    def test_matches_finite_differences_on_corpus(self, text):
        e = parse(text)
        checked = 0
        for z in sample_points(24, radius=0.45):
            try:
                want = finite_difference(e, z)
                got = evaluate(differentiate(e), z)
            except SingularEvaluation:
                continue
            assert abs(got - want) <= 1e-6 * max(1.0, abs(want)), text
            checked += 1
            if checked == 8:
                break
        assert checked == 8


class TestSimplify:
    def test_additive_identity(self):
        assert simplify(Z + 0) == Z

    def test_multiplicative_identity(self):
        assert simplify(const(1) * (Z * 1)) == Z

    def test_structural_quotient(self):
        assert simplify(parse("sin(z)/sin(z)")) == const(1)

    def test_zero_factor(self):
        assert simplify(const(0) * parse("exp(z)")) == const(0)

    def test_repeated_factors_collect(self):
        assert simplify(Z * Z) == simplify(parse("z^2"))

    def test_idempotent_on_corpus(self):
        for text in CORPUS:
            once = simplify(parse(text))
            assert simplify(once) == once, text

    def test_idempotent_on_derivatives(self):
        for text in CORPUS:
            once = simplify(differentiate(parse(text)))
            assert simplify(once) == once, text

    @pytest.mark.parametrize("text", CORPUS)
    def test_value_preserving(self, text):
        e = parse(text)
        s = simplify(e)
        for z in sample_points(16, radius=0.4):
            try:
                want = evaluate(e, z)
            except SingularEvaluation:
                continue
            got = evaluate(s, z)
            assert abs(got - want) <= 1e-12 * max(1.0, abs(want)), text


class TestFormat:
    @pytest.mark.parametrize("text", ["1/(1+z)", "sin(z)^3", "2^(-z)"])
    def test_round_trip_is_simplified_tree(self, text):
        e = parse(text)
        assert parse(format_expr(e)) == simplify(e)

    @pytest.mark.parametrize("text", CORPUS)
    def test_round_trip_structural_on_corpus(self, text):
        e = parse(text)
        assert parse(format_expr(e)) == simplify(e)

    @pytest.mark.parametrize("text", CORPUS)
    def test_round_trip_values_on_corpus(self, text):
        e = parse(text)
        back = parse(format_expr(e))
        for z in sample_points(16, radius=0.4):
            try:
                want = evaluate(e, z)
            except SingularEvaluation:
                continue
            got = evaluate(back, z)
            assert abs(got - want) <= 1e-12 * max(1.0, abs(want)), text

    def test_round_trip_after_differentiation(self):
        for text in CORPUS:
            d = differentiate(parse(text))
            assert parse(format_expr(d)) == simplify(d), text


class TestSubstitute:
    def test_variable_replacement(self):
        k = parse("s^2")
        s_of_z = parse("exp(z)")
        composed = substitute(k, "s", s_of_z)
        assert variables(composed) == {"z"}
        assert evaluate(composed, 0.5) == pytest.approx(math.e, rel=1e-12)

    def test_untouched_when_letter_absent(self):
        e = parse("sin(z)")
        assert substitute(e, "w", const(3)) == e


class TestRandomizedTrees:
    """Seeded structural fuzzing of simplify / format / evaluate."""

    FUNCS = ["exp", "log", "sin", "cos", "tan", "sinh", "cosh", "sqrt"]

    @classmethod
    def random_tree(cls, rng, depth):
        if depth == 0:
            leaves = [Z, Z, const(int(rng.integers(-3, 4))),
                      const(float(rng.choice([0.5, 1.5, -0.25]))),
                      const(int(rng.integers(1, 5)))]
            return leaves[rng.integers(len(leaves))]
        kind = rng.integers(6)
        child = lambda: cls.random_tree(rng, depth - 1)
        if kind == 0:
            return Expr(ADD, tuple(child() for _ in range(int(rng.integers(2, 4)))))
        if kind == 1:
            return Expr(NEGATE, (child(),))
        if kind == 2:
            return Expr(MULTIPLY, tuple(child() for _ in range(int(rng.integers(2, 4)))))
        if kind == 3:
            return Expr(DIVIDE, (child(), child()))
        if kind == 4:
            return Expr(POWER, (child(), const(int(rng.integers(-3, 4)))))
        return Expr(CALL, (child(),), name=cls.FUNCS[rng.integers(len(cls.FUNCS))])

    def test_simplify_format_evaluate_hold_up(self):
        rng = np.random.default_rng(98765)
        points = [0.3 + 0.1j, -0.2 + 0.4j, 0.7 - 0.3j]
        for trial in range(300):
            e = self.random_tree(rng, int(rng.integers(2, 6)))
            s = simplify(e)
            assert simplify(s) == s, trial
            try:
                text = format_expr(e)
            except ValueError:
                continue  # complex constant with no literal form
            assert parse(text) == s, (trial, text)
            for z in points:
                try:
                    want = evaluate(e, z)
                    got = evaluate(s, z)
                except SingularEvaluation:
                    continue
                if abs(want) < 1e6:
                    assert abs(got - want) <= 1e-9 * max(1.0, abs(want)), (trial, text)
