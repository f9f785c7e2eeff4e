import random

import pytest
from hypothesis import given, strategies as st

from relsym import _exact as ex
from relsym.poisson_calc import constant_bivector, non_poisson_witness, so3_dual, zero_bivector
from relsym.psm_boundary import (
    DiscretizedBoundaryField,
    apath_residual,
    class_compose,
    class_groupoid_check,
    class_invert,
    classify_path,
    compatible_poisson_tensors,
    concat,
    constraint_jacobian,
    integrate_apath,
    invert,
    linearized_constraint_space,
    phase_space,
    random_apath,
    refine,
    structure_kind,
    trivial_path,
)

from strategies import small

SYMPLECTIC2 = constant_bivector([[0, 1], [-1, 0]])


def rational_vectors(n, size):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=size, max_size=size)


class TestFields:
    def test_shapes_validated(self):
        with pytest.raises(ValueError, match="X must have shape"):
            DiscretizedBoundaryField(zero_bivector(2), 2, ex.zeros(2, 2), ex.zeros(2, 2))
        with pytest.raises(ValueError, match="eta must have shape"):
            integrate_apath(zero_bivector(2), [0, 0], [[1, 2, 3]])

    def test_constant_flow(self):
        f = integrate_apath(SYMPLECTIC2, [0, 0], [[0, 1]] * 4)
        # Pi(0, 1) = (1, 0): each step moves x1 by 1/4
        assert ex.to_strings(f.X[-1:, :]) == [["1", "0"]]
        assert apath_residual(f) == 0

    def test_residual_detects_perturbation(self):
        f = integrate_apath(so3_dual(), [1, 0, 2], [[1, 1, 0], [0, 2, 1]])
        X = f.X.copy()
        X[1, 0] += ex.q("1/7")
        bad = DiscretizedBoundaryField(f.pi, f.N, X, f.eta)
        assert apath_residual(bad) == ex.q("1/7")
        with pytest.raises(ValueError, match="residual"):
            linearized_constraint_space(bad)

    def test_json_roundtrip(self):
        f = random_apath(so3_dual(), 3, random.Random(1))
        assert DiscretizedBoundaryField.from_json(f.to_json()) == f

    @given(rational_vectors(3, 4), st.lists(small, min_size=3, max_size=3))
    def test_integration_is_exact(self, eta, x0):
        f = integrate_apath(so3_dual(), x0, eta)
        assert apath_residual(f) == 0


class TestOperations:
    def test_concat_endpoint_mismatch(self):
        f = trivial_path(zero_bivector(2), [0, 0], 2)
        g = trivial_path(zero_bivector(2), [1, 0], 2)
        with pytest.raises(ValueError, match="endpoint"):
            concat(f, g)

    def test_concat_doubles_density(self):
        r = random.Random(3)
        f1 = random_apath(SYMPLECTIC2, 2, r)
        f2 = random_apath(SYMPLECTIC2, 2, r, x0=f1.X[-1, :])
        c = concat(f1, f2)
        assert c.N == 4 and apath_residual(c) == 0
        assert ex.equal(c.eta[:2, :], f1.eta * ex.q(2))

    @pytest.mark.parametrize("pi", [zero_bivector(3), SYMPLECTIC2], ids=["zero", "constant"])
    def test_invert_exact_for_constant(self, pi):
        f = random_apath(pi, 4, random.Random(7))
        g = invert(f)
        assert apath_residual(g) == 0
        assert ex.equal(g.X[0, :], f.X[-1, :])

    def test_invert_not_exact_for_linear(self):
        f = random_apath(so3_dual(), 4, random.Random(2))
        assert apath_residual(invert(f)) != 0

    def test_refine_keeps_endpoints_for_constant(self):
        f = random_apath(SYMPLECTIC2, 3, random.Random(4))
        g = refine(f)
        assert g.N == 6 and ex.equal(g.X[-1, :], f.X[-1, :])


class TestCoisotropy:
    def test_phase_space_dimension(self):
        assert phase_space(3, 4).dim == 24

    def test_jacobian_shape(self):
        f = random_apath(so3_dual(), 4, random.Random(0))
        assert constraint_jacobian(f).shape == (9, 24)

    @pytest.mark.parametrize("n, N", [(2, 4), (3, 4), (2, 8)])
    def test_zero_bivector(self, n, N):
        r = random.Random(n * N)
        for _ in range(3):
            lin = linearized_constraint_space(random_apath(zero_bivector(n), N, r))
            assert lin.coisotropic, lin.classification

    @pytest.mark.parametrize("N", [4, 8])
    def test_constant_bivector(self, N):
        r = random.Random(N)
        for _ in range(3):
            assert linearized_constraint_space(random_apath(SYMPLECTIC2, N, r)).coisotropic

    def test_tangent_dimension(self):
        f = random_apath(SYMPLECTIC2, 4, random.Random(0))
        lin = linearized_constraint_space(f)
        # 2nN coordinates, n(N-1) independent constraints
        assert lin.tangent.dim == 2 * 2 * 4 - 2 * 3

    def test_witness_fails(self):
        r = random.Random(11)
        kinds = {linearized_constraint_space(random_apath(non_poisson_witness(), 4, r)).classification
                 for _ in range(3)}
        assert kinds - {"coisotropic", "lagrangian"}


class TestConstantPairingObstruction:
    """No constant pairing makes every linearized so(3)* constraint set coisotropic."""

    @staticmethod
    def _max_rank(basis, r, trials=4):
        best = 0
        for _ in range(trials):
            total = ex.zeros(*basis[0].shape)
            for b in basis:
                total = total + b * ex.q(r.randint(-5, 5))
            best = max(best, ex.rank(total))
        return best

    def test_zero_bivector_admits_full_rank(self):
        r = random.Random(0)
        fields = [random_apath(zero_bivector(3), 2, r) for _ in range(10)]
        basis = compatible_poisson_tensors(fields)
        assert self._max_rank(basis, r) == 12

    def test_so3_rank_bounded(self):
        r = random.Random(0)
        fields = [random_apath(so3_dual(), 2, r) for _ in range(20)]
        basis = compatible_poisson_tensors(fields)
        assert basis
        assert self._max_rank(basis, r) <= 6


class TestPathClasses:
    def test_structure_kind(self):
        assert structure_kind(zero_bivector(2)) == "zero"
        assert structure_kind(SYMPLECTIC2) == "constant_nondegenerate"
        with pytest.raises(ValueError):
            structure_kind(so3_dual())
        with pytest.raises(ValueError):
            structure_kind(constant_bivector([[0, 1, 0], [-1, 0, 0], [0, 0, 0]]))

    def test_zero_class(self):
        f = integrate_apath(zero_bivector(2), [1, 2], [[1, 0], [3, 4]])
        assert ex.to_strings(classify_path(f).element.reshape(1, -1)) == [["1", "2", "2", "2"]]

    def test_compose_requires_matching_ends(self):
        r = random.Random(5)
        c1 = classify_path(random_apath(SYMPLECTIC2, 2, r))
        c2 = classify_path(random_apath(SYMPLECTIC2, 2, r))
        with pytest.raises(ValueError, match="composable"):
            class_compose(c1, c2)

    def test_inverse_cancels(self):
        r = random.Random(6)
        f = random_apath(SYMPLECTIC2, 4, r)
        c = classify_path(f)
        loop = class_compose(c, class_invert(c))
        assert loop == classify_path(trivial_path(SYMPLECTIC2, f.X[0, :], 4))

    @pytest.mark.parametrize("pi", [zero_bivector(2), zero_bivector(3), SYMPLECTIC2,
                                    constant_bivector([[0, 2, 0, 1], [-2, 0, "1/2", 0],
                                                       [0, "-1/2", 0, 3], [-1, 0, -3, 0]])],
                             ids=["zero2", "zero3", "sympl2", "const4"])
    def test_groupoid_check(self, pi):
        rep = class_groupoid_check(pi, 5, 4, random.Random(1))
        assert rep.all_passed, rep.failures()
