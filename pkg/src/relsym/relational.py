"""Relational symplectic groupoids in the linear symplectic category.

A relational groupoid is a triple ``(G, L, I)``: a symplectic space ``G``, a
subspace ``L`` of ``G^3`` and a linear map ``I`` on ``G``.  ``L`` is stored as
a subspace that is Lagrangian for ``omega + omega + omega``, which is what
makes cyclic symmetry a meaningful condition.  Read as ``L_rel: G x G -/-> bar G``
its graph lives in ``bar(G x G) x bar G`` and is Lagrangian there as well.

For a groupoid this gives ``L = {(a, b, inv(a b))}``, i.e. triples whose
product is a unit, and ``L3 = I_rel o L_rel`` is the multiplication graph.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import _exact as ex
from .groupoid_zoo import (
    LinearGroupoidInstance,
    by_name as groupoid_by_name,
    power_projection,
    verify_groupoid_axioms,
)
from .report import Report
from .symplinalg import (
    POINT,
    LinearRelation,
    Subspace,
    SymplecticSpace,
    compose,
    compose_all,
    complement_basis,
    from_point,
    identity_relation,
    intersection,
    is_coisotropic,
    is_lagrangian,
    map_relation,
    relation,
    relation_product,
    standard_space,
    swap_relation,
    symplectic_orthogonal,
)


@dataclass(frozen=True, eq=False)
class RelationalGroupoidLinear:
    space: SymplecticSpace
    L: Subspace
    I: np.ndarray
    name: str = ""

    def __post_init__(self):
        d = self.space.dim
        if self.L.ambient.dim != 3 * d:
            raise ValueError("L must live in G x G x G")
        if self.I.shape != (d, d):
            raise ValueError("I must be a square map on G")

    # relations built from (L, I); names follow the bar/no-bar bookkeeping
    @property
    def g(self) -> SymplecticSpace:
        return self.space

    def L_rel(self) -> LinearRelation:
        """G x G -/-> bar G."""
        return relation(self.g * self.g, self.g.bar(), self.L.basis)

    def L_bar_rel(self) -> LinearRelation:
        """bar G x bar G -/-> G."""
        b = self.g.bar()
        return relation(b * b, self.g, self.L.basis)

    def I_rel(self) -> LinearRelation:
        """bar G -/-> G."""
        return relation(self.g.bar(), self.g, ex.vstack([ex.eye(self.g.dim), self.I]))

    def I_bar_rel(self) -> LinearRelation:
        """G -/-> bar G."""
        return relation(self.g, self.g.bar(), ex.vstack([ex.eye(self.g.dim), self.I]))

    def T_bar_rel(self) -> LinearRelation:
        b = self.g.bar()
        return swap_relation(b, b)

    def L_I(self) -> LinearRelation:
        """Graph of I as a relation * -/-> G x G."""
        return relation(POINT, self.g * self.g, ex.vstack([ex.eye(self.g.dim), self.I]))

    def G_rel(self) -> LinearRelation:
        """All of G as a (coisotropic) relation * -/-> G."""
        return LinearRelation(POINT, self.g, ex.eye(self.g.dim))

    def L_point(self) -> LinearRelation:
        """L as a relation * -/-> G^3."""
        return from_point(self.L.with_ambient(self.g.power(3)))


def _as_relation(r: LinearRelation, source: SymplecticSpace, target: SymplecticSpace) -> LinearRelation:
    return relation(source, target, r.graph.basis)


# ---------------------------------------------------------------- constructors

def build_from_groupoid(g: LinearGroupoidInstance) -> RelationalGroupoidLinear:
    """L = {(a, b, inv mu(a, b)) : s(a) = t(b)}, I = inv."""
    rep = verify_groupoid_axioms(g)
    if not rep.all_passed:
        raise ValueError(f"{g.name} fails groupoid axioms: {', '.join(rep.failures())}")
    f = g.composable.basis
    third = ex.matmul(g.inv, ex.matmul(g.mu, f))
    L = Subspace(g.total.power(3), ex.vstack([f, third]))
    return RelationalGroupoidLinear(g.total, L, g.inv, name=g.name)


def lagrangian_triple(space: SymplecticSpace, lag: Subspace, inv,
                      require_antisymplectic: bool = True,
                      name: str = "lagrangian-triple") -> RelationalGroupoidLinear:
    """(G, Lag x Lag x Lag, I) for a Lagrangian Lag preserved by I."""
    inv = ex.qarray(inv)
    if lag.ambient.dim != space.dim:
        raise ValueError("Lag does not live in the given space")
    lag = lag.with_ambient(space)
    if not is_lagrangian(lag):
        raise ValueError("Lag is not Lagrangian")
    if not lag.contains(ex.matmul(inv, lag.basis)):
        raise ValueError("I does not preserve Lag")
    if require_antisymplectic and not ex.equal(space.omega(inv, inv), ex.neg(space.form)):
        raise ValueError("I^T omega I = -omega fails: I is not antisymplectic")
    b = lag.basis
    L = Subspace(space.power(3), ex.block_diag(b, b, b))
    return RelationalGroupoidLinear(space, L, inv, name=name)


def standard_lagrangian_triple(n: int = 1, literal: bool = False) -> RelationalGroupoidLinear:
    """Zero section of standard_space(n) with I the momentum flip, or I = Id when literal."""
    space = standard_space(n)
    lag = Subspace(space, ex.vstack([ex.eye(n), ex.zeros(n, n)]))
    if literal:
        inv = ex.eye(2 * n)
    else:
        inv = ex.block_diag(ex.eye(n), ex.neg(ex.eye(n)))
    name = "lagrangian-triple:literal" if literal else "lagrangian-triple"
    return lagrangian_triple(space, lag, inv, require_antisymplectic=not literal, name=name)


def point_groupoid() -> RelationalGroupoidLinear:
    """The zero-dimensional relational groupoid."""
    return RelationalGroupoidLinear(POINT, POINT.power(3).zero(), ex.zeros(0, 0), name="point")


def power_relational(g: LinearGroupoidInstance, n: int) -> RelationalGroupoidLinear:
    """Relational structure on G^n transported through P_n: L_n = P_n^3(L), I_n reverses and inverts."""
    if n == 1:
        return build_from_groupoid(g)
    base = build_from_groupoid(g)
    p = power_projection(g, n)
    lifted = compose(base.L_point(), relation_product(p, p, p))
    space = g.total.power(n)
    d = g.dim
    inv = ex.zeros(n * d, n * d)
    for k in range(n):
        inv[k * d:(k + 1) * d, (n - 1 - k) * d:(n - k) * d] = g.inv
    L = Subspace(space.power(3), lifted.target_part)
    return RelationalGroupoidLinear(space, L, inv, name=f"{g.name}^{n}")


def by_name(name: str) -> RelationalGroupoidLinear:
    """pair:N, cotangent:N, lagrangian-triple[:N], lagrangian-triple:literal, point."""
    if name == "point":
        return point_groupoid()
    if name.startswith("lagrangian-triple"):
        rest = name[len("lagrangian-triple"):]
        if rest in ("", ":1"):
            return standard_lagrangian_triple(1)
        if rest == ":literal":
            return standard_lagrangian_triple(1, literal=True)
        try:
            return standard_lagrangian_triple(int(rest.lstrip(":")))
        except ValueError:
            raise ValueError(f"unknown example {name!r}") from None
    return build_from_groupoid(groupoid_by_name(name))


# ---------------------------------------------------------------- derived core

@dataclass(frozen=True, eq=False)
class DerivedCore:
    L3: LinearRelation
    L1: LinearRelation
    L2: LinearRelation
    L_I: LinearRelation
    C: Subspace
    K: Subspace
    M_kernel: Subspace
    M_basis: np.ndarray
    S: np.ndarray = field(repr=False)
    T: np.ndarray = field(repr=False)

    @property
    def dim_M(self) -> int:
        return self.M_basis.shape[1]

    def m_coordinates(self, vectors: np.ndarray) -> np.ndarray:
        """Coordinates in M = L1 / M_kernel of vectors lying in L1."""
        d = self.C.ambient.dim
        basis = ex.hstack([self.M_basis, self.M_kernel.basis], d)
        x = ex.solve(basis, vectors)
        if x is None:
            raise ValueError("vector does not lie in L1")
        return x[:self.dim_M, :]


def _annihilator(basis: np.ndarray) -> np.ndarray:
    """Rows spanning the linear forms vanishing on the columns of basis."""
    d = basis.shape[0]
    if basis.shape[1] == 0:
        return ex.eye(d)
    return ex.nullspace(basis.T).T.copy()


def _restricted_triples(L3: LinearRelation, first: Subspace, second: Subspace) -> np.ndarray:
    """Columns (a, b, c) of L3's graph with a in first and b in second."""
    d = first.ambient.dim
    rows = ex.block_diag(_annihilator(first.basis), _annihilator(second.basis))
    basis = L3.graph.basis
    k = ex.nullspace(ex.matmul(rows, basis[:2 * d, :])) if rows.shape[0] else ex.eye(basis.shape[1])
    return ex.matmul(basis, k)


def derive_core(rg: RelationalGroupoidLinear) -> DerivedCore:
    g = rg.g
    d = g.dim
    L3 = compose(rg.L_rel(), rg.I_rel())
    L_I = rg.L_I()
    L1 = compose(L_I, L3)
    L2 = compose(relation_product(L1, identity_relation(g)), L3)
    C = compose(rg.G_rel(), L2).image()
    K = L2.indeterminacy()

    l1 = L1.image()
    both = Subspace(L2.graph.ambient, ex.block_diag(l1.basis, l1.basis))
    restricted = LinearRelation(g, g, intersection(L2.graph, both))
    m_kernel = restricted.indeterminacy()
    m_basis = complement_basis(m_kernel, l1)

    core = DerivedCore(L3, L1, L2, L_I, C, K, m_kernel, m_basis, ex.zeros(0, 0), ex.zeros(0, 0))
    s_vecs = _restricted_triples(L3, l1, C)
    t_vecs = _restricted_triples(L3, C, l1)
    S = ex.column_echelon(ex.vstack([s_vecs[d:2 * d, :], core.m_coordinates(s_vecs[:d, :])]))
    T = ex.column_echelon(ex.vstack([t_vecs[:d, :], core.m_coordinates(t_vecs[d:2 * d, :])]))
    return DerivedCore(L3, L1, L2, L_I, C, K, m_kernel, m_basis, S, T)


# ---------------------------------------------------------------- verification

def _compare(rep: Report, id: str, lhs: LinearRelation, rhs: LinearRelation, section: str,
             require_lagrangian: bool = False) -> None:
    same = lhs.same_relation(rhs)
    ok = same and (lhs.is_lagrangian or not require_lagrangian)
    detail = {"lhs_dim": lhs.dim, "rhs_dim": rhs.dim}
    if require_lagrangian:
        detail["lagrangian"] = bool(lhs.is_lagrangian)
    if not ok:
        detail["lhs_basis"] = ex.to_strings(lhs.graph.basis.T)
        detail["rhs_basis"] = ex.to_strings(rhs.graph.basis.T)
    rep.add(id, ok, section, **detail)


def _lagrangian_entry(rep: Report, id: str, r: LinearRelation, section: str) -> None:
    ok = bool(r.is_lagrangian)
    detail = {"lhs_dim": r.dim, "rhs_dim": r.graph.ambient.dim // 2}
    if not ok:
        detail["lhs_basis"] = ex.to_strings(r.graph.basis.T)
    rep.add(id, ok, section, **detail)


def _cyclic_shift(d: int) -> np.ndarray:
    """(x, y, z) -> (y, z, x) on G^3."""
    z, e = ex.zeros(d, d), ex.eye(d)
    return ex.vstack([ex.hstack([z, e, z]), ex.hstack([z, z, e]), ex.hstack([e, z, z])])


def verify_axioms(rg: RelationalGroupoidLinear) -> Report:
    """Invariants of (G, L, I), axioms A.1-A.7 and the corollary identities, all evaluated."""
    rep = Report()
    g = rg.g
    d = g.dim
    Lsub = rg.L.with_ambient(g.power(3))
    rep.add("L.lagrangian", is_lagrangian(Lsub), "invariants", dim=Lsub.dim, ambient_dim=3 * d)
    anti = ex.equal(g.omega(rg.I, rg.I), ex.neg(g.form))
    rep.add("I.antisymplectic", anti, "invariants")

    shifted = Subspace(Lsub.ambient, ex.matmul(_cyclic_shift(d), Lsub.basis))
    rep.add("A.1", shifted.same_span(Lsub), "axioms", lhs_dim=shifted.dim, rhs_dim=Lsub.dim)
    rep.add("A.2", ex.equal(ex.matmul(rg.I, rg.I), ex.eye(d)), "axioms", lhs_dim=d, rhs_dim=d)

    Ib, Tb, Lb, Id = rg.I_bar_rel(), rg.T_bar_rel(), rg.L_bar_rel(), identity_relation(g)
    core = derive_core(rg)
    L3, L1, L2 = core.L3, core.L1, core.L2
    _compare(rep, "A.3", L3, compose_all(relation_product(Ib, Ib), Tb, Lb), "axioms")
    _compare(rep, "A.4", compose(relation_product(L3, Id), L3),
             compose(relation_product(Id, L3), L3), "axioms", require_lagrangian=True)
    _lagrangian_entry(rep, "A.5", L1, "axioms")
    _compare(rep, "A.6", compose(relation_product(L1, L1), L3), L1, "axioms")
    _lagrangian_entry(rep, "A.7", L2, "axioms")

    b = g.bar()
    L3_bar = _as_relation(L3, b * b, b)
    _compare(rep, "cor.I_L3", compose(L3, Ib), compose_all(relation_product(Ib, Ib), Tb, L3_bar),
             "corollaries")
    _compare(rep, "cor.I_L1", compose(L1, Ib), _as_relation(L1, POINT, b), "corollaries")
    _compare(rep, "cor.L2_right", compose(relation_product(Id, L1), L3), L2, "corollaries")
    inv_parts = {
        "L1": compose(L1, L2).same_relation(L1),
        "L2": compose(L2, L2).same_relation(L2),
        "L3": compose(L3, L2).same_relation(L3),
    }
    rep.add("cor.L2_invariant", all(inv_parts.values()), "corollaries", parts=inv_parts,
            lhs_dim=L2.dim, rhs_dim=L2.dim)
    _compare(rep, "cor.I_L2", compose(L2, Ib), compose(Ib, _as_relation(L2, b, b)), "corollaries")
    _compare(rep, "cor.L2_symmetric", L2.T, L2, "corollaries")
    return rep


def verify_regular(rg: RelationalGroupoidLinear, core: DerivedCore | None = None) -> Report:
    """A.8-A.10: C coisotropic, L2 an equivalence on C with characteristic classes, M, S, T."""
    core = core or derive_core(rg)
    rep = Report()
    g = rg.g
    C = core.C
    perp = symplectic_orthogonal(C)
    rep.add("A.8", is_coisotropic(C), "regular", dim_C=C.dim, dim_C_perp=perp.dim)

    box = Subspace(core.L2.graph.ambient, ex.block_diag(C.basis, C.basis))
    R = LinearRelation(g, g, intersection(core.L2.graph, box))
    diag = ex.vstack([C.basis, C.basis])
    rep.add("equivalence.reflexive", R.graph.contains(diag), "regular")
    rep.add("equivalence.symmetric", R.T.same_relation(R), "regular")
    rep.add("equivalence.transitive", R.graph.contains(compose(R, R).graph.basis), "regular")
    classes = R.indeterminacy()
    rep.add("equivalence.characteristic", classes.same_span(perp), "regular",
            class_dim=classes.dim, characteristic_dim=perp.dim)

    rep.add("A.9", True, "regular", dim_L1=core.L1.dim, dim_M=core.dim_M)
    s_in_c = C.contains(core.S[:g.dim, :])
    t_in_c = C.contains(core.T[:g.dim, :])
    rep.add("A.10", s_in_c and t_in_c, "regular", dim_S=core.S.shape[1], dim_T=core.T.shape[1])
    return rep


# ---------------------------------------------------------------- induced Poisson structure

@dataclass(frozen=True)
class PoissonSolution:
    matrix: np.ndarray | None
    solution_dim: int
    residual: list

    @property
    def consistent(self) -> bool:
        return self.matrix is not None

    @property
    def unique(self) -> bool:
        return self.consistent and self.solution_dim == 0


@dataclass(frozen=True)
class InducedPoisson:
    from_S: PoissonSolution
    from_T: PoissonSolution
    same_pi_makes_T_coisotropic: bool

    @property
    def matrix(self) -> np.ndarray | None:
        return self.from_S.matrix

    @property
    def unique(self) -> bool:
        return self.from_S.unique

    def to_dict(self) -> dict:
        def one(sol: PoissonSolution) -> dict:
            out = {"matrix": None if sol.matrix is None else ex.to_strings(sol.matrix),
                   "unique": sol.unique, "solution_dim": sol.solution_dim}
            if not sol.consistent:
                out["residual_system"] = sol.residual
            return out

        out = one(self.from_S)
        out["T"] = {**one(self.from_T), "same_pi_coisotropic": self.same_pi_makes_T_coisotropic}
        return out


def _poisson_tensor(space: SymplecticSpace) -> np.ndarray:
    """B with {x_i, x_j} = B_ij; for the standard form {q, p} = 1."""
    return ex.neg(ex.inverse(space.form))


def _coisotropy_system(w: np.ndarray, B: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Linear system E pi = rhs in the unknowns pi_ij (i < j) for coisotropy of span(w)."""
    d = B.shape[0]
    ann = _annihilator(w).T
    a_g, a_m = ann[:d, :], ann[d:, :]
    unknowns = list(combinations(range(m), 2))
    pairs = list(combinations(range(ann.shape[1]), 2))
    E = ex.zeros(len(pairs), len(unknowns))
    rhs = ex.zeros(len(pairs), 1)
    for row, (r, s) in enumerate(pairs):
        rhs[row, 0] = -ex.matmul(ex.matmul(a_g[:, r:r + 1].T, B), a_g[:, s:s + 1])[0, 0]
        for col, (i, j) in enumerate(unknowns):
            E[row, col] = a_m[i, r] * a_m[j, s] - a_m[j, r] * a_m[i, s]
    return E, rhs


def _solve_pi(E: np.ndarray, rhs: np.ndarray, m: int) -> PoissonSolution:
    x = ex.solve(E, rhs)
    free = ex.nullspace(E).shape[1] if E.shape[1] else 0
    if x is None:
        return PoissonSolution(None, free, ex.to_strings(ex.hstack([E, rhs])))
    pi = ex.zeros(m, m)
    for col, (i, j) in enumerate(combinations(range(m), 2)):
        pi[i, j] = x[col, 0]
        pi[j, i] = -x[col, 0]
    return PoissonSolution(pi, free, [])


def _satisfies(E: np.ndarray, rhs: np.ndarray, pi: np.ndarray | None) -> bool:
    if pi is None:
        return False
    m = pi.shape[0]
    vec = ex.qarray([[pi[i, j]] for i, j in combinations(range(m), 2)]) if m > 1 else ex.zeros(0, 1)
    return ex.equal(ex.matmul(E, vec), rhs)


def induced_poisson(rg: RelationalGroupoidLinear, core: DerivedCore | None = None) -> InducedPoisson:
    """Antisymmetric pi on M making S (and, separately, T) coisotropic in G x (M, pi).

    Coisotropy of W in a product with Poisson tensor B + pi means the tensor
    vanishes on pairs of covectors annihilating W.  Both solution spaces are
    reported; nothing is asserted about them.
    """
    core = core or derive_core(rg)
    B = _poisson_tensor(rg.g) if rg.g.dim else ex.zeros(0, 0)
    m = core.dim_M
    E_s, r_s = _coisotropy_system(core.S, B, m)
    E_t, r_t = _coisotropy_system(core.T, B, m)
    from_s = _solve_pi(E_s, r_s, m)
    from_t = _solve_pi(E_t, r_t, m)
    return InducedPoisson(from_s, from_t, _satisfies(E_t, r_t, from_s.matrix))


# ---------------------------------------------------------------- morphisms

@dataclass(frozen=True)
class MorphismResult:
    level: str
    forward: Report
    backward: Report


def _morphism_conditions(F: LinearRelation, g: RelationalGroupoidLinear,
                         h: RelationalGroupoidLinear) -> Report:
    rep = Report()
    rep.add("lagrangian", F.is_lagrangian, "morphism", dim=F.dim)
    lhs = compose(map_relation(g.I, g.g, g.g), F)
    rhs = compose(F, map_relation(h.I, h.g, h.g))
    rep.add("commutes_with_I", lhs.same_relation(rhs), "morphism")
    pushed = compose(g.L_point(), relation_product(F, F, F))
    rep.add("transports_L", pushed.same_relation(h.L_point()), "morphism",
            lhs_dim=pushed.dim, rhs_dim=h.L.dim)
    return rep


def check_morphism(F: LinearRelation, g: RelationalGroupoidLinear,
                   h: RelationalGroupoidLinear) -> MorphismResult:
    """'equivalence' if F and F^T are morphisms, 'morphism' if only F is, else 'not_morphism'."""
    if F.source.dim != g.g.dim or F.target.dim != h.g.dim:
        raise ValueError("F does not relate the spaces of the two groupoids")
    F = relation(g.g, h.g, F.graph.basis)
    fwd = _morphism_conditions(F, g, h)
    bwd = _morphism_conditions(F.T, h, g)
    if fwd.all_passed and bwd.all_passed:
        level = "equivalence"
    elif fwd.all_passed:
        level = "morphism"
    else:
        level = "not_morphism"
    return MorphismResult(level, fwd, bwd)


def full_report(rg: RelationalGroupoidLinear) -> dict:
    """Axioms, corollaries, regularity and the induced Poisson structure as one JSON-ready dict."""
    core = derive_core(rg)
    axioms = verify_axioms(rg)
    regular = verify_regular(rg, core)
    poisson = induced_poisson(rg, core)
    return {
        "example": rg.name,
        "invariants": [c.to_dict() for c in axioms.section("invariants")],
        "axioms": [c.to_dict() for c in axioms.section("axioms")],
        "corollaries": [c.to_dict() for c in axioms.section("corollaries")],
        "regular": {"pass": regular.all_passed, "dim_M": core.dim_M,
                    "checks": [c.to_dict() for c in regular]},
        "induced_poisson": poisson.to_dict(),
    }
