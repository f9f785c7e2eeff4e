"""Linear symplectic groupoids with explicit structure maps.

Composable pairs follow the fibre-product convention ``G x_(s,t) G``:
``(g, h)`` is composable when ``s(g) = t(h)``, and then
``s(mu(g, h)) = s(h)``, ``t(mu(g, h)) = t(g)``.  Under this convention the
unit laws read ``mu(eps(t g), g) = g = mu(g, eps(s g))`` and the inverse laws
``mu(g, inv g) = eps(t g)``, ``mu(inv g, g) = eps(s g)``.

Multiplication is stored as a matrix on ``G x G``; only its restriction to
the composable subspace is ever evaluated.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _exact as ex
from .report import Report
from .symplinalg import (
    CanonicalRelation,
    Subspace,
    SymplecticSpace,
    classify_subspace,
    direct_sum,
    is_lagrangian,
    reduce_coisotropic,
    relation,
    standard_space,
)


@dataclass(frozen=True, eq=False)
class LinearGroupoidInstance:
    name: str
    total: SymplecticSpace
    base_dim: int
    s: np.ndarray
    t: np.ndarray
    eps: np.ndarray
    inv: np.ndarray
    mu: np.ndarray

    @property
    def dim(self) -> int:
        return self.total.dim

    @cached_property
    def composable(self) -> Subspace:
        """G x_(s,t) G = {(g, h) : s(g) = t(h)} inside G x G."""
        return self.fiber_power(2)

    def fiber_power(self, n: int) -> Subspace:
        """G_(n) = {(g_1, ..., g_n) : s(g_k) = t(g_{k+1})} inside G^n."""
        d, m = self.dim, self.base_dim
        rows = ex.zeros(m * (n - 1), d * n)
        for k in range(n - 1):
            rows[k * m:(k + 1) * m, k * d:(k + 1) * d] = self.s
            rows[k * m:(k + 1) * m, (k + 1) * d:(k + 2) * d] = ex.neg(self.t)
        return Subspace(self.total.power(n), ex.nullspace(rows) if n > 1 else ex.eye(d))

    def product_matrix(self, n: int) -> np.ndarray:
        """mu_n(g_1, ..., g_n) = g_1 (g_2 (... g_n)) as a d x nd matrix."""
        d = self.dim
        out = ex.eye(d)
        for _ in range(n - 1):
            out = ex.matmul(self.mu, ex.block_diag(ex.eye(d), out))
        return out

    def multiply(self, g, h) -> np.ndarray:
        g, h = ex.qarray(g).reshape(-1, 1), ex.qarray(h).reshape(-1, 1)
        if not ex.equal(ex.matmul(self.s, g), ex.matmul(self.t, h)):
            raise ValueError("elements are not composable: s(g) != t(h)")
        return ex.matmul(self.mu, ex.vstack([g, h]))[:, 0]

    def inverse(self, g) -> np.ndarray:
        return ex.matmul(self.inv, ex.qarray(g).reshape(-1, 1))[:, 0]

    def unit(self, x) -> np.ndarray:
        return ex.matmul(self.eps, ex.qarray(x).reshape(-1, 1))[:, 0]

    def source(self, g) -> np.ndarray:
        return ex.matmul(self.s, ex.qarray(g).reshape(-1, 1))[:, 0]

    def target(self, g) -> np.ndarray:
        return ex.matmul(self.t, ex.qarray(g).reshape(-1, 1))[:, 0]

    def graph_mu(self) -> Subspace:
        """Gr_mu = {(a, b, mu(a, b))} inside G x G x bar(G)."""
        f = self.composable.basis
        ambient = direct_sum(self.total, self.total, self.total.bar())
        return Subspace(ambient, ex.vstack([f, ex.matmul(self.mu, f)]))

    def with_mu(self, mu, name: str | None = None) -> LinearGroupoidInstance:
        return LinearGroupoidInstance(name or self.name + "'", self.total, self.base_dim, self.s,
                                      self.t, self.eps, self.inv, ex.qarray(mu))


def pair_groupoid(n: int) -> LinearGroupoidInstance:
    """V x bar(V) over V = standard_space(n): s(x,y) = y, t(x,y) = x, (x,y)(y,z) = (x,z)."""
    if n < 1:
        raise ValueError("pair_groupoid needs n >= 1")
    v = standard_space(n)
    m = v.dim
    e, z = ex.eye(m), ex.zeros(m, m)
    return LinearGroupoidInstance(
        name=f"pair:{n}",
        total=v * v.bar(),
        base_dim=m,
        s=ex.hstack([z, e]),
        t=ex.hstack([e, z]),
        eps=ex.vstack([e, e]),
        inv=ex.vstack([ex.hstack([z, e]), ex.hstack([e, z])]),
        mu=ex.vstack([ex.hstack([e, z, z, z]), ex.hstack([z, z, z, e])]),
    )


def cotangent_fiber_groupoid(n: int) -> LinearGroupoidInstance:
    """T*R^n over R^n with fibrewise addition: the groupoid of the zero Poisson structure."""
    if n < 1:
        raise ValueError("cotangent_fiber_groupoid needs n >= 1")
    e, z = ex.eye(n), ex.zeros(n, n)
    return LinearGroupoidInstance(
        name=f"cotangent:{n}",
        total=standard_space(n),
        base_dim=n,
        s=ex.hstack([e, z]),
        t=ex.hstack([e, z]),
        eps=ex.vstack([e, z]),
        inv=ex.block_diag(e, ex.neg(e)),
        mu=ex.vstack([ex.hstack([e, z, z, z]), ex.hstack([z, e, z, e])]),
    )


def by_name(name: str) -> LinearGroupoidInstance:
    """Parse "pair:n" or "cotangent:n"."""
    kind, _, n = name.partition(":")
    try:
        size = int(n)
    except ValueError:
        raise ValueError(f"bad groupoid name {name!r}; expected pair:N or cotangent:N") from None
    if kind == "pair":
        return pair_groupoid(size)
    if kind == "cotangent":
        return cotangent_fiber_groupoid(size)
    raise ValueError(f"unknown groupoid family {kind!r}")


def _contained(sub: Subspace, vectors: np.ndarray) -> bool:
    return sub.contains(vectors)


def verify_groupoid_axioms(g: LinearGroupoidInstance) -> Report:
    """(A.1)-(A.6) as exact linear identities, plus Gr_mu Lagrangian and inv antisymplectic."""
    rep = Report()
    d, m = g.dim, g.base_dim
    e = ex.eye(d)
    rep.add("surjective", ex.rank(g.s) == m and ex.rank(g.t) == m, "groupoid",
            rank_s=ex.rank(g.s), rank_t=ex.rank(g.t), base_dim=m)

    se, te = ex.matmul(g.s, g.eps), ex.matmul(g.t, g.eps)
    rep.add("A.1", ex.equal(se, ex.eye(m)) and ex.equal(te, ex.eye(m)), "groupoid")

    f = g.composable.basis
    prod = ex.matmul(g.mu, f)
    s_ok = ex.equal(ex.matmul(g.s, prod), ex.matmul(g.s, f[d:, :]))
    t_ok = ex.equal(ex.matmul(g.t, prod), ex.matmul(g.t, f[:d, :]))
    rep.add("A.2", s_ok and t_ok, "groupoid", composable_dim=g.composable.dim)

    left = ex.vstack([ex.matmul(g.eps, g.t), e])
    right = ex.vstack([e, ex.matmul(g.eps, g.s)])
    unit_ok = (_contained(g.composable, left) and _contained(g.composable, right)
               and ex.equal(ex.matmul(g.mu, left), e) and ex.equal(ex.matmul(g.mu, right), e))
    rep.add("A.3", unit_ok, "groupoid")

    gi = ex.vstack([e, g.inv])
    rep.add("A.4", _contained(g.composable, gi)
            and ex.equal(ex.matmul(g.mu, gi), ex.matmul(g.eps, g.t)), "groupoid")
    ig = ex.vstack([g.inv, e])
    rep.add("A.5", _contained(g.composable, ig)
            and ex.equal(ex.matmul(g.mu, ig), ex.matmul(g.eps, g.s)), "groupoid")

    f3 = g.fiber_power(3).basis
    mu_left = ex.vstack([ex.matmul(g.mu, f3[:2 * d, :]), f3[2 * d:, :]])
    mu_right = ex.vstack([f3[:d, :], ex.matmul(g.mu, f3[d:, :])])
    assoc = (_contained(g.composable, mu_left) and _contained(g.composable, mu_right)
             and ex.equal(ex.matmul(g.mu, mu_left), ex.matmul(g.mu, mu_right)))
    rep.add("A.6", assoc, "groupoid")

    gr = g.graph_mu()
    rep.add("symplectic", is_lagrangian(gr), "groupoid", graph_dim=gr.dim, ambient_dim=gr.ambient.dim)
    pulled = g.total.omega(g.inv, g.inv)
    rep.add("inverse.antisymplectic", ex.equal(pulled, ex.neg(g.total.form)), "groupoid")
    return rep


def power_projection(g: LinearGroupoidInstance, n: int) -> CanonicalRelation:
    """P_n : G -/-> G^n, {(mu_n(a), a) : a in G_(n)}."""
    gn = g.fiber_power(n).basis
    graph = ex.vstack([ex.matmul(g.product_matrix(n), gn), gn])
    return CanonicalRelation(g.total, g.total.power(n), graph)


def power_analysis(g: LinearGroupoidInstance, n: int) -> Report:
    """Coisotropy of G_(n), its reduction, the P_n relations and the P_i o P_j^op equivalences."""
    from .relational import check_morphism, power_relational

    if not 2 <= n <= 4:
        raise ValueError("power_analysis supports 2 <= n <= 4")
    if not verify_groupoid_axioms(g).all_passed:
        raise ValueError(f"{g.name} does not satisfy the groupoid axioms")
    rep = Report()
    d = g.dim
    gn = g.fiber_power(n)
    kind = classify_subspace(gn)
    rep.add("coisotropic", kind in ("coisotropic", "lagrangian"), "powers",
            dim=gn.dim, ambient_dim=gn.ambient.dim, classification=kind)
    red = reduce_coisotropic(gn)
    nondeg = ex.rank(red.reduced.form) == red.reduced.dim
    rep.add("reduction.dim", red.reduced.dim == d and nondeg, "powers",
            reduced_dim=red.reduced.dim, group_dim=d)

    # the iterated product identifies G_(n)/char with G symplectically
    mun = g.product_matrix(n)
    kills = ex.is_zero(ex.matmul(mun, red.characteristic.basis))
    image = ex.matmul(mun, red.complement)
    congruent = ex.equal(g.total.omega(image, image), red.reduced.form) and ex.rank(image) == d
    rep.add("reduction.symplectomorphic", kills and congruent, "powers")

    p = power_projection(g, n)
    rep.add("P_op_P", p.then(p.T).same_relation(_identity_graph(g.total)), "powers")
    expected = ex.vstack([ex.hstack([gn.basis, ex.zeros(gn.ambient.dim, red.characteristic.dim)]),
                          ex.hstack([gn.basis, red.characteristic.basis])])
    same_class = relation(gn.ambient, gn.ambient, expected)
    rep.add("P_P_op", p.T.then(p).same_relation(same_class), "powers")

    hn = power_relational(g, n)
    for j in range(1, n):
        hj = power_relational(g, j)
        f = power_projection(g, j).T.then(p)
        level = check_morphism(f, hj, hn).level
        rep.add(f"equivalence.P{n}_P{j}op", level == "equivalence", "powers", level=level)
    return rep


def _identity_graph(space: SymplecticSpace):
    e = ex.eye(space.dim)
    return relation(space, space, ex.vstack([e, e]))
