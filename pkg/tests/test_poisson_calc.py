import random

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from relsym import _exact as ex
from relsym.poisson_calc import (
    BivectorFormatError,
    PolyBivector,
    PolyMultivector,
    algebroid_differential,
    anchor,
    apply_vector_field,
    bivector_from_json,
    const,
    constant_bivector,
    contract3,
    cyclic_jacobi,
    delta_squared_coordinate,
    exterior_derivative,
    function,
    is_poisson,
    jacobiator,
    jacobiator_tensor,
    koszul_bracket,
    non_poisson_witness,
    one_form,
    poisson_bracket,
    sharp,
    so3_dual,
    variables,
    zero_bivector,
)

import oracles
from strategies import bivectors, constant_bivector_from, polynomials, random_polynomial


def as_expr(p, n):
    return p.as_expr(*oracles.symbols(n))


def expr_equal(p, e, n) -> bool:
    return sp.expand(as_expr(p, n) - e) == 0


class TestBivector:
    def test_antisymmetric_lookup(self):
        pi = so3_dual()
        x1, x2, x3 = variables(3)
        assert pi[0, 1] == x3 and pi[1, 0] == -x3
        assert pi[0, 2] == -x2 and pi[2, 0] == x2
        assert pi[1, 1] == 0

    def test_only_upper_entries_accepted(self):
        x1, _ = variables(2)
        with pytest.raises(ValueError, match="i < j"):
            PolyBivector(2, {(1, 0): x1})

    def test_at_point(self):
        m = so3_dual().at([1, 2, 3])
        assert ex.to_strings(m) == [["0", "3", "-2"], ["-3", "0", "1"], ["2", "-1", "0"]]

    def test_constant(self):
        pi = constant_bivector([[0, "1/2"], ["-1/2", 0]])
        assert pi.is_constant() and not pi.is_zero()
        assert ex.to_strings(pi.constant_matrix()) == [["0", "1/2"], ["-1/2", "0"]]
        with pytest.raises(ValueError):
            constant_bivector([[0, 1], [1, 0]])

    def test_json_roundtrip(self):
        for pi in (so3_dual(), non_poisson_witness(), zero_bivector(2)):
            data = pi.to_json()
            assert PolyBivector.from_json(data) == pi

    def test_json_one_based(self):
        data = so3_dual().to_json()
        idx = {(e["i"], e["j"]) for e in data["entries"]}
        assert idx == {(1, 2), (2, 3), (1, 3)}

    @pytest.mark.parametrize("bad, field", [
        ([], "top level"),
        ({"entries": []}, "dim"),
        ({"dim": 2, "entries": {}}, "entries"),
        ({"dim": 2, "entries": [{"i": 1, "j": 1, "poly": []}]}, "entries[0]"),
        ({"dim": 2, "entries": [{"i": "a", "j": 2, "poly": []}]}, "entries[0]"),
        ({"dim": 2, "entries": [{"i": 1, "j": 2, "poly": [{"coef": "1/0", "exps": [0, 0]}]}]}, "entries[0]"),
        ({"dim": 2, "entries": [{"i": 1, "j": 2, "poly": [{"coef": "1", "exps": [0]}]}]}, "entries[0]"),
    ])
    def test_format_errors(self, bad, field):
        with pytest.raises(BivectorFormatError, match=field.replace("[", r"\[").replace("]", r"\]")):
            bivector_from_json(bad)


class TestJacobi:
    def test_standard_examples(self):
        assert is_poisson(zero_bivector(3))
        assert is_poisson(so3_dual())
        assert not is_poisson(non_poisson_witness())

    def test_witness_jacobiator_frozen(self):
        # J^123 computed independently with sympy and frozen here
        P = oracles.bivector_exprs(non_poisson_witness())
        xs = oracles.symbols(3)
        assert oracles.jacobiator_expr(P, 0, 1, 2, xs) == 2
        assert jacobiator(non_poisson_witness())[0, 1, 2] == 2

    @pytest.mark.parametrize("seed", range(5))
    def test_random_constant(self, seed):
        r = random.Random(seed)
        assert is_poisson(constant_bivector_from(r, r.randint(2, 4)))

    @given(bivectors(2, max_deg=3))
    def test_two_dimensional_always_poisson(self, pi):
        assert is_poisson(pi)

    @given(bivectors(3))
    def test_matches_symbolic_oracle(self, pi):
        xs = oracles.symbols(3)
        full = oracles.full_jacobiator(oracles.bivector_exprs(pi), xs)
        for (s, k, l), e in full.items():
            assert expr_equal(jacobiator_tensor(pi, s, k, l), e, 3)
        assert is_poisson(pi) == all(e == 0 for e in full.values())

    @given(bivectors(3), polynomials(3), polynomials(3), polynomials(3))
    def test_cyclic_jacobi_is_contracted_jacobiator(self, pi, f, g, h):
        assert cyclic_jacobi(pi, f, g, h) == -contract3(jacobiator(pi), f, g, h)

    @given(polynomials(3), polynomials(3), polynomials(3))
    def test_so3_cyclic_identity(self, f, g, h):
        assert cyclic_jacobi(so3_dual(), f, g, h) == 0


class TestBracket:
    def test_coordinates(self):
        x1, x2, x3 = variables(3)
        pi = so3_dual()
        assert poisson_bracket(pi, x1, x2) == x3
        assert poisson_bracket(pi, x2, x3) == x1
        assert poisson_bracket(pi, x3, x1) == x2

    def test_casimir(self):
        x1, x2, x3 = variables(3)
        c = x1**2 + x2**2 + x3**2
        for x in (x1, x2, x3):
            assert poisson_bracket(so3_dual(), c, x) == 0

    @given(bivectors(3), polynomials(3), polynomials(3))
    def test_matches_oracle(self, pi, f, g):
        xs = oracles.symbols(3)
        e = oracles.bracket_expr(oracles.bivector_exprs(pi), as_expr(f, 3), as_expr(g, 3), xs)
        assert expr_equal(poisson_bracket(pi, f, g), e, 3)

    @given(bivectors(3), polynomials(3), polynomials(3), polynomials(3))
    def test_leibniz(self, pi, f, g, h):
        assert poisson_bracket(pi, f, g * h) == poisson_bracket(pi, f, g) * h + g * poisson_bracket(pi, f, h)

    def test_sharp_and_anchor(self):
        pi = so3_dual()
        x1, x2, x3 = variables(3)
        df = exterior_derivative(x1)
        # sharp(df) applied to g equals {g, f}; the anchor is its negative
        assert apply_vector_field(sharp(pi, df), x2) == poisson_bracket(pi, x2, x1)
        assert apply_vector_field(anchor(pi, df), x2) == poisson_bracket(pi, x1, x2)


class TestKoszul:
    @pytest.mark.parametrize("seed", range(10))
    def test_exact_forms(self, seed):
        r = random.Random(seed)
        pi = so3_dual()
        f, g = random_polynomial(r, 3), random_polynomial(r, 3)
        lhs = koszul_bracket(pi, exterior_derivative(f), exterior_derivative(g))
        assert lhs == exterior_derivative(poisson_bracket(pi, f, g))

    @given(bivectors(3), polynomials(3), polynomials(3))
    def test_exact_forms_any_bivector(self, pi, f, g):
        lhs = koszul_bracket(pi, exterior_derivative(f), exterior_derivative(g))
        assert lhs == exterior_derivative(poisson_bracket(pi, f, g))

    @given(polynomials(3, max_terms=2), polynomials(3, max_terms=2), polynomials(3, max_terms=2))
    def test_leibniz_rule(self, f, a, b):
        pi = so3_dual()
        alpha = one_form([a, b, const(3, 1)])
        beta = one_form([b, const(3, 0), a])
        lhs = koszul_bracket(pi, alpha, beta.scale(f))
        rhs = koszul_bracket(pi, alpha, beta).scale(f) + beta.scale(apply_vector_field(anchor(pi, alpha), f))
        assert lhs == rhs

    def test_antisymmetric(self):
        x1, x2, x3 = variables(3)
        pi = so3_dual()
        a, b = one_form([x2, x1 * x3, const(3, 1)]), one_form([x3, const(3, 2), x1])
        assert koszul_bracket(pi, a, b) == koszul_bracket(pi, b, a).scale(const(3, -1))


class TestDifferential:
    def test_on_functions(self):
        x1, x2, x3 = variables(3)
        d = algebroid_differential(so3_dual(), function(x1))
        assert d.degree == 1
        # (delta f)^i = sum_j Pi^ij d_j f
        assert [d[i] for i in range(3)] == [0, -x3, x2]

    @pytest.mark.parametrize("i", range(3))
    def test_squares_to_zero_for_so3(self, i):
        assert delta_squared_coordinate(so3_dual(), i).is_zero()

    def test_witness_detected(self):
        pi = non_poisson_witness()
        assert any(not delta_squared_coordinate(pi, i).is_zero() for i in range(3))

    @given(bivectors(3))
    def test_square_is_minus_jacobiator(self, pi):
        J = jacobiator(pi)
        for i in range(3):
            d2 = delta_squared_coordinate(pi, i)
            for a in range(3):
                for b in range(a + 1, 3):
                    if i in (a, b):
                        continue
                    assert d2[a, b] == -J[i, a, b]

    @given(polynomials(3, max_terms=3))
    def test_square_zero_on_functions_for_poisson(self, f):
        pi = so3_dual()
        assert algebroid_differential(pi, algebroid_differential(pi, function(f))).is_zero()

    def test_top_degree(self):
        x1, x2, x3 = variables(3)
        top = PolyMultivector(3, 3, {(0, 1, 2): x1 * x2})
        d = algebroid_differential(so3_dual(), top)
        assert d.degree == 4 and d.is_zero()
        with pytest.raises(ValueError, match="degree"):
            algebroid_differential(so3_dual(), d)
