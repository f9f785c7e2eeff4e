import pytest
from hypothesis import given, strategies as st

from relsym import _exact as ex
from relsym.groupoid_zoo import (
    by_name,
    cotangent_fiber_groupoid,
    pair_groupoid,
    power_analysis,
    power_projection,
    verify_groupoid_axioms,
)
from relsym.symplinalg import is_lagrangian

from strategies import small

ZOO = ["pair:1", "pair:2", "cotangent:1", "cotangent:2"]


def vec(draw, d):
    return ex.qarray([draw(small) for _ in range(d)])


@pytest.mark.parametrize("name", ZOO)
def test_axioms_hold(name):
    rep = verify_groupoid_axioms(by_name(name))
    assert rep.all_passed, rep.failures()
    assert {c.id for c in rep} >= {"A.1", "A.2", "A.3", "A.4", "A.5", "A.6", "symplectic"}


def test_pair_structure_maps():
    g = pair_groupoid(1)
    a = ex.qarray([1, 2, 3, 4])  # (x, y) with x = (1, 2), y = (3, 4)
    assert ex.equal(g.source(a), ex.qarray([3, 4]))
    assert ex.equal(g.target(a), ex.qarray([1, 2]))
    assert ex.equal(g.inverse(a), ex.qarray([3, 4, 1, 2]))
    assert ex.equal(g.multiply(a, ex.qarray([3, 4, 5, 6])), ex.qarray([1, 2, 5, 6]))


def test_cotangent_structure_maps():
    g = cotangent_fiber_groupoid(1)
    assert ex.equal(g.multiply([2, 1], [2, 5]), ex.qarray([2, 6]))
    assert ex.equal(g.inverse([2, 1]), ex.qarray([2, -1]))
    assert ex.equal(g.unit([7]), ex.qarray([7, 0]))


def test_not_composable():
    with pytest.raises(ValueError, match="composable"):
        pair_groupoid(1).multiply([1, 2, 3, 4], [0, 0, 5, 6])


def test_bad_names():
    with pytest.raises(ValueError):
        by_name("pair:x")
    with pytest.raises(ValueError):
        by_name("loop:1")
    with pytest.raises(ValueError):
        pair_groupoid(0)


def test_broken_multiplication_detected():
    g = pair_groupoid(1)
    bad = g.with_mu(g.mu * ex.q(2))
    rep = verify_groupoid_axioms(bad)
    assert not rep.all_passed
    assert not rep["A.3"].passed


def test_graph_of_mu_lagrangian():
    for name in ZOO:
        assert is_lagrangian(by_name(name).graph_mu())


@given(st.data())
def test_associativity_on_samples(data):
    g = pair_groupoid(1)
    pts = [vec(data.draw, 2) for _ in range(4)]
    a, b, c = (ex.hstack([pts[i].reshape(-1, 1).T, pts[i + 1].reshape(-1, 1).T])[0] for i in range(3))
    left = g.multiply(g.multiply(a, b), c)
    right = g.multiply(a, g.multiply(b, c))
    assert ex.equal(left, right)
    assert ex.equal(g.multiply(a, g.inverse(a)), g.unit(g.target(a)))


@given(st.data())
def test_cotangent_commutative(data):
    g = cotangent_fiber_groupoid(2)
    x = vec(data.draw, 2)
    a = ex.hstack([x.reshape(1, -1), vec(data.draw, 2).reshape(1, -1)])[0]
    b = ex.hstack([x.reshape(1, -1), vec(data.draw, 2).reshape(1, -1)])[0]
    assert ex.equal(g.multiply(a, b), g.multiply(b, a))


def test_product_matrix_matches_iterated_multiply():
    g = pair_groupoid(1)
    els = [ex.qarray([1, 2, 3, 4]), ex.qarray([3, 4, 0, 1]), ex.qarray([0, 1, -2, 5])]
    direct = g.multiply(els[0], g.multiply(els[1], els[2]))
    stacked = ex.vstack([e.reshape(-1, 1) for e in els])
    assert ex.equal(ex.matmul(g.product_matrix(3), stacked)[:, 0], direct)


def test_fiber_power_dims():
    g = pair_groupoid(1)
    # pair groupoid over V: G_(n) has dim (n + 1) dim V
    for n in (1, 2, 3):
        assert g.fiber_power(n).dim == 2 * (n + 1)
    c = cotangent_fiber_groupoid(2)
    assert c.fiber_power(3).dim == 2 + 3 * 2


@pytest.mark.parametrize("name", ["pair:1", "cotangent:1"])
@pytest.mark.parametrize("n", [2, 3])
def test_powers(name, n):
    rep = power_analysis(by_name(name), n)
    assert rep.all_passed, rep.failures()
    assert f"equivalence.P{n}_P1op" in rep


def test_power_projection_shape():
    g = pair_groupoid(1)
    p = power_projection(g, 2)
    assert p.source.dim == 4 and p.target.dim == 8
    assert p.graph.dim == 6  # graph of mu_2 restricted to G_(2)


def test_power_range():
    with pytest.raises(ValueError):
        power_analysis(pair_groupoid(1), 5)
