"""Exact linear symplectic algebra.

Symplectic vector spaces, subspaces in canonical (reduced column echelon)
form, linear and canonical relations with composition and transpose, and
linear coisotropic reduction.  Everything is exact over the rationals.

A relation ``R: M -/-> N`` is a subspace of ``M x N``; its graph is stored as
a :class:`Subspace` of ``bar(M) x N`` (sign-reversed source), so ``R`` is
canonical exactly when that subspace is Lagrangian.  ``L.then(K)`` composes
diagrammatically (first ``L``, then ``K``); ``K @ L`` is the same composite
in the usual right-to-left order.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from . import _exact as ex

Classification = Literal["isotropic", "coisotropic", "lagrangian", "symplectic", "generic"]


class SymplecticSpace:
    """A finite-dimensional symplectic vector space (R^d, omega).

    ``omega(u, v) = u^T @ form @ v``.  The zero-dimensional space is the
    one-point space ``*``.
    """

    __slots__ = ("form", "_key")

    def __init__(self, form):
        form = ex.qarray(form)
        if form.ndim != 2 or form.shape[0] != form.shape[1]:
            raise ValueError("symplectic form must be a square matrix")
        if not ex.equal(form.T, ex.neg(form)):
            raise ValueError("symplectic form is not antisymmetric")
        if ex.rank(form) != form.shape[0]:
            raise ValueError("symplectic form is degenerate")
        self.form = form
        self._key = tuple(str(v) for v in form.flat)

    @classmethod
    def _trusted(cls, form: np.ndarray) -> SymplecticSpace:
        # skips the rank check; only for forms nondegenerate by construction
        obj = cls.__new__(cls)
        obj.form = form
        obj._key = tuple(str(v) for v in form.flat)
        return obj

    @property
    def dim(self) -> int:
        return self.form.shape[0]

    def bar(self) -> SymplecticSpace:
        """The same space with the sign-reversed form."""
        return SymplecticSpace._trusted(ex.neg(self.form))

    def __mul__(self, other: SymplecticSpace) -> SymplecticSpace:
        return direct_sum(self, other)

    def power(self, n: int) -> SymplecticSpace:
        return direct_sum(*([self] * n))

    def omega(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return ex.matmul(ex.matmul(u.T, self.form), v)

    def full(self) -> Subspace:
        return Subspace(self, ex.eye(self.dim))

    def zero(self) -> Subspace:
        return Subspace(self, ex.zeros(self.dim, 0))

    def __eq__(self, other) -> bool:
        return isinstance(other, SymplecticSpace) and self.dim == other.dim and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"SymplecticSpace(dim={self.dim})"


POINT = SymplecticSpace(ex.zeros(0, 0))


def standard_space(n: int) -> SymplecticSpace:
    """R^{2n} with coordinates (q_1..q_n, p_1..p_n) and omega(q_i, p_j) = delta_ij."""
    if n < 1:
        raise ValueError("standard_space needs n >= 1")
    form = ex.zeros(2 * n, 2 * n)
    for i in range(n):
        form[i, n + i] = ex.ONE
        form[n + i, i] = -ex.ONE
    return SymplecticSpace(form)


def direct_sum(*spaces: SymplecticSpace) -> SymplecticSpace:
    if not spaces:
        return POINT
    if len(spaces) == 1:
        return spaces[0]
    return SymplecticSpace._trusted(ex.block_diag(*(s.form for s in spaces)))


class Subspace:
    """Column span of ``basis`` inside ``ambient``, kept in canonical form.

    Two subspaces of the same ambient space are equal iff their canonical
    bases are equal matrices.
    """

    __slots__ = ("ambient", "basis")

    def __init__(self, ambient: SymplecticSpace, vectors):
        vectors = ex.qarray(vectors) if not isinstance(vectors, np.ndarray) else vectors
        if vectors.ndim != 2 or vectors.shape[0] != ambient.dim:
            raise ValueError(f"vectors of shape {vectors.shape} do not live in a {ambient.dim}-dim space")
        self.ambient = ambient
        self.basis = ex.column_echelon(vectors)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def with_ambient(self, ambient: SymplecticSpace) -> Subspace:
        """Same vectors viewed in another space of equal dimension."""
        return Subspace(ambient, self.basis)

    def contains(self, other: Subspace | np.ndarray) -> bool:
        vecs = other.basis if isinstance(other, Subspace) else other
        if vecs.shape[1] == 0:
            return True
        return ex.rank(ex.hstack([self.basis, vecs])) == self.dim

    def __add__(self, other: Subspace) -> Subspace:
        return Subspace(self.ambient, ex.hstack([self.basis, other.basis], self.ambient.dim))

    def __and__(self, other: Subspace) -> Subspace:
        return intersection(self, other)

    def image(self, matrix: np.ndarray, ambient: SymplecticSpace) -> Subspace:
        return Subspace(ambient, ex.matmul(matrix, self.basis))

    def restricted_form(self) -> np.ndarray:
        return self.ambient.omega(self.basis, self.basis)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subspace) and self.ambient == other.ambient
                and ex.equal(self.basis, other.basis))

    def same_span(self, other: Subspace) -> bool:
        """Equality of the underlying vector sets, ignoring the forms."""
        return ex.equal(self.basis, other.basis)

    __hash__ = None

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient.dim})"


def span(ambient: SymplecticSpace, *vectors: Sequence) -> Subspace:
    if not vectors:
        return ambient.zero()
    return Subspace(ambient, ex.qarray([list(v) for v in vectors]).T)


def intersection(u: Subspace, v: Subspace) -> Subspace:
    if u.dim == 0 or v.dim == 0:
        return u.ambient.zero()
    k = ex.nullspace(ex.hstack([u.basis, ex.neg(v.basis)]))
    return Subspace(u.ambient, ex.matmul(u.basis, k[:u.dim, :]))


def product(*subspaces: Subspace) -> Subspace:
    ambient = direct_sum(*(w.ambient for w in subspaces))
    return Subspace(ambient, ex.block_diag(*(w.basis for w in subspaces)))


def symplectic_orthogonal(w: Subspace) -> Subspace:
    """W^omega = {v : omega(w, v) = 0 for all w in W}."""
    a = ex.matmul(w.basis.T, w.ambient.form)
    d = w.ambient.dim
    if w.dim == 0:
        return w.ambient.full()
    return Subspace(w.ambient, ex.nullspace(a) if d else ex.zeros(0, 0))


def is_isotropic(w: Subspace) -> bool:
    return ex.is_zero(w.restricted_form())


def is_lagrangian(w: Subspace) -> bool:
    return 2 * w.dim == w.ambient.dim and is_isotropic(w)


def is_coisotropic(w: Subspace) -> bool:
    return w.contains(symplectic_orthogonal(w))


def is_symplectic(w: Subspace) -> bool:
    return ex.rank(w.restricted_form()) == w.dim


def classify_subspace(w: Subspace) -> Classification:
    """lagrangian > isotropic > coisotropic > symplectic > generic.

    The first matching label wins, so the full space reports ``coisotropic``
    and the zero subspace ``isotropic`` (or ``lagrangian`` in the point).
    """
    perp = symplectic_orthogonal(w)
    if w == perp:
        return "lagrangian"
    if perp.contains(w):
        return "isotropic"
    if w.contains(perp):
        return "coisotropic"
    if intersection(w, perp).dim == 0:
        return "symplectic"
    return "generic"


# ---------------------------------------------------------------- relations

class LinearRelation:
    """A linear relation ``source -/-> target``; graph lives in bar(source) x target."""

    __slots__ = ("source", "target", "graph")

    def __init__(self, source: SymplecticSpace, target: SymplecticSpace, graph):
        ambient = direct_sum(source.bar(), target)
        if isinstance(graph, Subspace):
            if graph.ambient.dim != ambient.dim:
                raise ValueError("graph dimension does not match source x target")
            graph = graph.with_ambient(ambient) if graph.ambient != ambient else graph
        else:
            graph = Subspace(ambient, graph)
        self.source = source
        self.target = target
        self.graph = graph

    @property
    def dim(self) -> int:
        return self.graph.dim

    @property
    def is_lagrangian(self) -> bool:
        return is_lagrangian(self.graph)

    @property
    def source_part(self) -> np.ndarray:
        return self.graph.basis[:self.source.dim, :]

    @property
    def target_part(self) -> np.ndarray:
        return self.graph.basis[self.source.dim:, :]

    def then(self, other: LinearRelation) -> LinearRelation:
        return compose(self, other)

    def __matmul__(self, other: LinearRelation) -> LinearRelation:
        return compose(other, self)

    def transpose(self) -> LinearRelation:
        return transpose(self)

    @property
    def T(self) -> LinearRelation:
        return transpose(self)

    def domain(self) -> Subspace:
        """{m : exists n, (m, n) in R}."""
        return Subspace(self.source, self.source_part)

    def image(self) -> Subspace:
        """{n : exists m, (m, n) in R}."""
        return Subspace(self.target, self.target_part)

    def kernel(self) -> Subspace:
        """{m : (m, 0) in R}."""
        k = ex.nullspace(self.target_part)
        return Subspace(self.source, ex.matmul(self.source_part, k))

    def indeterminacy(self) -> Subspace:
        """{n : (0, n) in R}."""
        k = ex.nullspace(self.source_part)
        return Subspace(self.target, ex.matmul(self.target_part, k))

    def same_relation(self, other: LinearRelation) -> bool:
        """Equality as sets of pairs; the forms on source and target are ignored."""
        return (self.source.dim == other.source.dim and self.target.dim == other.target.dim
                and self.graph.same_span(other.graph))

    def __eq__(self, other) -> bool:
        return (isinstance(other, LinearRelation) and self.source == other.source
                and self.target == other.target and self.graph.same_span(other.graph))

    __hash__ = None

    def __repr__(self) -> str:
        kind = type(self).__name__
        return f"{kind}({self.source.dim} -/-> {self.target.dim}, dim={self.dim})"


class CanonicalRelation(LinearRelation):
    """A linear relation whose graph is Lagrangian in bar(source) x target."""

    __slots__ = ()

    def __init__(self, source: SymplecticSpace, target: SymplecticSpace, graph):
        super().__init__(source, target, graph)
        if not is_lagrangian(self.graph):
            raise ValueError(
                f"graph of dim {self.graph.dim} is not Lagrangian in bar(source) x target "
                f"(dim {self.graph.ambient.dim})")

    @property
    def is_lagrangian(self) -> bool:
        return True


def _relation(source, target, graph, canonical: bool) -> LinearRelation:
    if canonical:
        return CanonicalRelation(source, target, graph)
    return LinearRelation(source, target, graph)


def relation(source: SymplecticSpace, target: SymplecticSpace, graph) -> LinearRelation:
    """A relation that is canonical when its graph happens to be Lagrangian."""
    r = LinearRelation(source, target, graph)
    return CanonicalRelation(source, target, r.graph) if r.is_lagrangian else r


def compose(first: LinearRelation, second: LinearRelation) -> LinearRelation:
    """``second o first`` = {(m, p) : exists n, (m, n) in first, (n, p) in second}.

    Computed as intersection with the diagonal of the middle factor followed
    by projection; no transversality is needed.  Composites of canonical
    relations are canonical, and that is asserted.
    """
    if first.target != second.source:
        raise ValueError(
            f"cannot compose: target of first ({first.target!r}) differs from source of second "
            f"({second.source!r})")
    a_src, a_mid = first.source_part, first.target_part
    b_mid, b_tgt = second.source_part, second.target_part
    k = ex.nullspace(ex.hstack([a_mid, ex.neg(b_mid)], first.target.dim))
    coeff_a, coeff_b = k[:first.dim, :], k[first.dim:, :]
    vecs = ex.vstack([ex.matmul(a_src, coeff_a), ex.matmul(b_tgt, coeff_b)])
    both = isinstance(first, CanonicalRelation) and isinstance(second, CanonicalRelation)
    out = LinearRelation(first.source, second.target, vecs)
    if both:
        assert out.is_lagrangian, "composite of canonical relations is not Lagrangian"
        return CanonicalRelation(first.source, second.target, out.graph)
    return out


def compose_all(*relations: LinearRelation) -> LinearRelation:
    """Diagrammatic composite: first relation applied first."""
    out = relations[0]
    for r in relations[1:]:
        out = compose(out, r)
    return out


def _swap_blocks(basis: np.ndarray, first: int) -> np.ndarray:
    return ex.vstack([basis[first:, :], basis[:first, :]])


def transpose(r: LinearRelation) -> LinearRelation:
    """R^dagger = {(n, m) : (m, n) in R}."""
    vecs = _swap_blocks(r.graph.basis, r.source.dim)
    return _relation(r.target, r.source, vecs, isinstance(r, CanonicalRelation))


def relation_product(*relations: LinearRelation) -> LinearRelation:
    """R_1 x ... x R_k : (M_1 x ... x M_k) -/-> (N_1 x ... x N_k)."""
    source = direct_sum(*(r.source for r in relations))
    target = direct_sum(*(r.target for r in relations))
    src = ex.block_diag(*(r.source_part for r in relations))
    tgt = ex.block_diag(*(r.target_part for r in relations))
    canonical = all(isinstance(r, CanonicalRelation) for r in relations)
    return _relation(source, target, ex.vstack([src, tgt]), canonical)


def identity_relation(space: SymplecticSpace) -> CanonicalRelation:
    e = ex.eye(space.dim)
    return CanonicalRelation(space, space, ex.vstack([e, e]))


def swap_relation(a: SymplecticSpace, b: SymplecticSpace) -> CanonicalRelation:
    """(x, y) -> (y, x) as a relation a x b -/-> b x a."""
    da, db = a.dim, b.dim
    src = ex.eye(da + db)
    tgt = ex.vstack([src[da:, :], src[:da, :]])
    return CanonicalRelation(a * b, b * a, ex.vstack([src, tgt]))


def from_point(w: Subspace) -> LinearRelation:
    """The subspace w as a relation * -/-> ambient."""
    return _relation(POINT, w.ambient, w.basis, is_lagrangian(w))


def to_point(w: Subspace) -> LinearRelation:
    """The subspace w as a relation ambient -/-> *."""
    return transpose(from_point(w))


def graph_of_map(a, space: SymplecticSpace,
                 sign: Literal["symplectic", "antisymplectic"] = "symplectic") -> CanonicalRelation:
    """Graph {(v, A v)} of a linear (anti)symplectomorphism as a canonical relation.

    Symplectic maps give ``space -/-> space``; antisymplectic maps give
    ``bar(space) -/-> space``.
    """
    a = ex.qarray(a)
    if a.shape != (space.dim, space.dim):
        raise ValueError("map does not act on the given space")
    if ex.rank(a) != space.dim:
        raise ValueError("map is not invertible")
    pulled = ex.matmul(ex.matmul(a.T, space.form), a)
    if sign == "symplectic":
        if not ex.equal(pulled, space.form):
            raise ValueError("A^T omega A = omega fails: map is not symplectic")
        source = space
    elif sign == "antisymplectic":
        if not ex.equal(pulled, ex.neg(space.form)):
            raise ValueError("A^T omega A = -omega fails: map is not antisymplectic")
        source = space.bar()
    else:
        raise ValueError(f"unknown sign {sign!r}")
    return CanonicalRelation(source, space, ex.vstack([ex.eye(space.dim), a]))


def map_relation(a, source: SymplecticSpace, target: SymplecticSpace) -> LinearRelation:
    """Graph {(v, A v)} of any linear map, canonical when it happens to be Lagrangian."""
    a = ex.qarray(a)
    return relation(source, target, ex.vstack([ex.eye(source.dim), a]))


# ---------------------------------------------------------------- reduction

@dataclass(frozen=True, eq=False)
class Reduction:
    """C / C^omega with its induced form.

    ``complement`` holds representatives (columns in the ambient space) of a
    basis of the reduced space; ``projection`` is the canonical relation
    ambient -/-> reduced, {(c, [c]) : c in C}.
    """

    coisotropic: Subspace
    characteristic: Subspace
    complement: np.ndarray
    reduced: SymplecticSpace
    projection: CanonicalRelation

    def coordinates(self, vectors: np.ndarray) -> np.ndarray:
        """Reduced coordinates of vectors lying in C."""
        basis = ex.hstack([self.complement, self.characteristic.basis], self.coisotropic.ambient.dim)
        x = ex.solve(basis, vectors)
        if x is None:
            raise ValueError("vector does not lie in the coisotropic subspace")
        return x[:self.complement.shape[1], :]


def complement_basis(sub: Subspace, whole: Subspace) -> np.ndarray:
    """Columns of ``whole``'s canonical basis completing a basis of ``sub`` to one of ``whole``."""
    stacked = ex.hstack([sub.basis, whole.basis], whole.ambient.dim)
    _, piv = ex.rref(stacked)
    picks = [p - sub.dim for p in piv if p >= sub.dim]
    return whole.basis[:, picks]


def reduce_coisotropic(c: Subspace) -> Reduction:
    """Linear coisotropic reduction C -> C / C^omega."""
    perp = symplectic_orthogonal(c)
    if not c.contains(perp):
        raise ValueError(f"subspace is {classify_subspace(c)}, not coisotropic")
    e = complement_basis(perp, c)
    form = c.ambient.omega(e, e)
    reduced = SymplecticSpace(form)
    assert reduced.dim == 2 * c.dim - c.ambient.dim
    red = Reduction(c, perp, e, reduced, None)  # type: ignore[arg-type]
    coords = red.coordinates(c.basis)
    projection = CanonicalRelation(c.ambient, reduced, ex.vstack([c.basis, coords]))
    return Reduction(c, perp, e, reduced, projection)


# ---------------------------------------------------------------- json

def matrix_to_json(a: np.ndarray) -> list:
    return ex.to_strings(a)


def matrix_from_json(rows, ncols: int | None = None) -> np.ndarray:
    return ex.from_strings(rows, ncols)


def subspace_to_json(w: Subspace) -> dict:
    """{"ambient_dim": d, "basis": [v_1, ..., v_k]} with each v_i a list of strings."""
    return {"ambient_dim": w.ambient.dim, "basis": ex.to_strings(w.basis.T)}


def subspace_from_json(data: dict, ambient: SymplecticSpace | None = None) -> Subspace:
    d = int(data["ambient_dim"])
    if ambient is None:
        ambient = standard_space(d // 2) if d else POINT
    vecs = ex.from_strings(data["basis"], d)
    return Subspace(ambient, vecs.T if vecs.shape[0] else ex.zeros(d, 0))


def relation_to_json(r: LinearRelation) -> dict:
    return {"source_dim": r.source.dim, "target_dim": r.target.dim,
            "graph_basis": ex.to_strings(r.graph.basis.T)}


def relation_from_json(data: dict, source: SymplecticSpace | None = None,
                       target: SymplecticSpace | None = None) -> LinearRelation:
    """Rebuild a relation; spaces default to standard ones of the stated dims."""
    ds, dt = int(data["source_dim"]), int(data["target_dim"])
    source = source or (standard_space(ds // 2) if ds else POINT)
    target = target or (standard_space(dt // 2) if dt else POINT)
    vecs = ex.from_strings(data["graph_basis"], ds + dt)
    return relation(source, target, vecs.T if vecs.shape[0] else ex.zeros(ds + dt, 0))
