"""Discretized boundary fields of the Poisson sigma model.

A field on the grid ``t_k = k/N`` is a pair ``(X, eta)``: path samples
``X`` of shape ``(N+1, n)`` and one covector density ``eta_k`` per interval,
shape ``(N, n)``.  The discrete A-path constraint is the explicit scheme

    X_{k+1} = X_k + h * Pi#(X_k) eta_k,    h = 1/N.

For the linearized coisotropy check the phase space is
``(X_0..X_{N-1}, eta_0..eta_{N-1})``, with ``X_N`` eliminated through the
last step, and carries the constant form

    {X_j, eta_m} = N * P_jm,    P_mm = P_{m+1,m} = 1/2 (m < N-1),  P_{N-1,N-1} = 1,

so each density eta_m is paired with the average of the two samples bounding
its interval.  This averaging is what makes the constraint set exactly
coisotropic for constant Pi; pairing eta_m with X_m alone does not.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from . import _exact as ex
from . import sampling
from .groupoid_zoo import LinearGroupoidInstance, cotangent_fiber_groupoid, pair_groupoid
from .poisson_calc import PolyBivector, bivector_from_json, diff, evaluate
from .report import Report
from .symplinalg import Subspace, SymplecticSpace, classify_subspace


@dataclass(frozen=True, eq=False)
class DiscretizedBoundaryField:
    pi: PolyBivector
    N: int
    X: np.ndarray
    eta: np.ndarray

    def __post_init__(self):
        n = self.pi.dim
        if self.N < 1:
            raise ValueError("grid needs N >= 1")
        if self.X.shape != (self.N + 1, n):
            raise ValueError(f"X must have shape {(self.N + 1, n)}, got {self.X.shape}")
        if self.eta.shape != (self.N, n):
            raise ValueError(f"eta must have shape {(self.N, n)}, got {self.eta.shape}")

    @property
    def n(self) -> int:
        return self.pi.dim

    @property
    def h(self):
        return ex.q(f"1/{self.N}")

    def __eq__(self, other) -> bool:
        return (isinstance(other, DiscretizedBoundaryField) and self.N == other.N
                and self.pi.to_json() == other.pi.to_json()
                and ex.equal(self.X, other.X) and ex.equal(self.eta, other.eta))

    def to_json(self) -> dict:
        return {"bivector": self.pi.to_json(), "N": self.N,
                "X": ex.to_strings(self.X), "eta": ex.to_strings(self.eta)}

    @classmethod
    def from_json(cls, data: dict) -> DiscretizedBoundaryField:
        pi = bivector_from_json(data["bivector"])
        N = int(data["N"])
        X = ex.from_strings(data["X"], pi.dim)
        eta = ex.from_strings(data["eta"], pi.dim)
        return cls(pi, N, X, eta)


def _step(pi: PolyBivector, x: np.ndarray, eta_k: np.ndarray, h) -> np.ndarray:
    """h * Pi(x) eta_k."""
    return ex.matmul(pi.at(list(x)), eta_k.reshape(-1, 1))[:, 0] * h


def integrate_apath(pi: PolyBivector, x0: Sequence, eta) -> DiscretizedBoundaryField:
    eta = ex.qarray(eta)
    if eta.ndim != 2 or eta.shape[1] != pi.dim:
        raise ValueError(f"eta must have shape (N, {pi.dim})")
    N = eta.shape[0]
    h = ex.q(f"1/{N}")
    X = ex.zeros(N + 1, pi.dim)
    X[0, :] = ex.qarray(list(x0))
    for k in range(N):
        X[k + 1, :] = X[k, :] + _step(pi, X[k, :], eta[k, :], h)
    return DiscretizedBoundaryField(pi, N, X, eta)


def step_residuals(field: DiscretizedBoundaryField) -> np.ndarray:
    out = ex.zeros(field.N, field.n)
    for k in range(field.N):
        out[k, :] = field.X[k + 1, :] - field.X[k, :] - _step(field.pi, field.X[k, :], field.eta[k, :], field.h)
    return out


def apath_residual(field: DiscretizedBoundaryField):
    """max_k |X_{k+1} - X_k - h Pi#(X_k) eta_k|_inf, exactly."""
    return max((abs(v) for v in step_residuals(field).flat), default=ex.ZERO)


def concat(f1: DiscretizedBoundaryField, f2: DiscretizedBoundaryField) -> DiscretizedBoundaryField:
    """f1 followed by f2 on 2N intervals; densities double because each interval halves."""
    if f1.N != f2.N or f1.pi.to_json() != f2.pi.to_json():
        raise ValueError("concat needs the same bivector and grid size")
    if not ex.equal(f1.X[-1, :], f2.X[0, :]):
        raise ValueError("endpoint mismatch: X1(1) != X2(0)")
    X = ex.vstack([f1.X, f2.X[1:, :]])
    eta = ex.vstack([f1.eta, f2.eta]) * ex.q(2)
    return DiscretizedBoundaryField(f1.pi, 2 * f1.N, X, ex.qarray(eta))


def invert(f: DiscretizedBoundaryField) -> DiscretizedBoundaryField:
    """Pullback along t -> 1 - t: X reversed, eta reversed and negated.

    Under the explicit scheme the result is again an exact A-path when Pi is
    constant; in general its residual is of order h.
    """
    return DiscretizedBoundaryField(f.pi, f.N, f.X[::-1, :].copy(), ex.neg(f.eta[::-1, :].copy()))


def refine(f: DiscretizedBoundaryField) -> DiscretizedBoundaryField:
    """Re-integrate on 2N intervals with each density repeated on both halves."""
    return integrate_apath(f.pi, f.X[0, :], np.repeat(f.eta, 2, axis=0))


def trivial_path(pi: PolyBivector, x, N: int) -> DiscretizedBoundaryField:
    return integrate_apath(pi, x, ex.zeros(N, pi.dim))


def random_apath(pi: PolyBivector, N: int, r: random.Random, x0=None) -> DiscretizedBoundaryField:
    x0 = sampling.vector(r, pi.dim) if x0 is None else x0
    return integrate_apath(pi, x0, sampling.matrix(r, N, pi.dim))


# ---------------------------------------------------------------- linearized coisotropy

@dataclass(frozen=True, eq=False)
class ConstraintLinearization:
    tangent: Subspace
    classification: str
    jacobian: np.ndarray

    @property
    def coisotropic(self) -> bool:
        return self.classification in ("coisotropic", "lagrangian")


def phase_space(n: int, N: int) -> SymplecticSpace:
    """R^{2nN} in (X_0..X_{N-1}, eta_0..eta_{N-1}) with the averaged pairing.

    The Poisson tensor is {X_j, eta_m} = N * P_jm with P_mm = P_{m+1,m} = 1/2
    for m < N-1 and P_{N-1,N-1} = 1; the form is minus its inverse.
    """
    half = ex.q("1/2")
    P = ex.zeros(n * N, n * N)
    for m in range(N):
        for i in range(n):
            if m < N - 1:
                P[m * n + i, m * n + i] = half
                P[(m + 1) * n + i, m * n + i] = half
            else:
                P[m * n + i, m * n + i] = ex.ONE
    P = P * ex.q(N)
    z = ex.zeros(n * N, n * N)
    poisson = ex.vstack([ex.hstack([z, P]), ex.hstack([ex.neg(P.T), z])])
    return SymplecticSpace(ex.neg(ex.inverse(ex.qarray(poisson))))


def constraint_jacobian(field: DiscretizedBoundaryField) -> np.ndarray:
    """Derivative of phi_k = X_{k+1} - X_k - h Pi(X_k) eta_k, k = 0..N-2."""
    n, N, h = field.n, field.N, field.h
    J = ex.zeros(n * (N - 1), 2 * n * N)
    for k in range(N - 1):
        rows = slice(k * n, (k + 1) * n)
        xk, ek = list(field.X[k, :]), field.eta[k, :]
        J[rows, (k + 1) * n:(k + 2) * n] = ex.eye(n)
        dx = ex.zeros(n, n)
        for i in range(n):
            for m in range(n):
                s = ex.ZERO
                for j in range(n):
                    s += evaluate(diff(field.pi[i, j], m), xk) * ek[j]
                dx[i, m] = -h * s
        J[rows, k * n:(k + 1) * n] = dx - ex.eye(n)
        J[rows, n * N + k * n:n * N + (k + 1) * n] = field.pi.at(xk) * (-h)
    return ex.qarray(J)


def linearized_constraint_space(field: DiscretizedBoundaryField) -> ConstraintLinearization:
    """Tangent space of the discrete constraint set at an exact A-path, and its type."""
    if apath_residual(field) != 0:
        raise ValueError("field is not an exact discrete A-path (nonzero residual)")
    J = constraint_jacobian(field)
    space = phase_space(field.n, field.N)
    tangent = Subspace(space, ex.nullspace(J) if J.shape[0] else ex.eye(space.dim))
    return ConstraintLinearization(tangent, classify_subspace(tangent), J)


# ---------------------------------------------------------------- path classes

Kind = Literal["zero", "constant_nondegenerate"]


@dataclass(frozen=True, eq=False)
class PathClass:
    """Complete invariant of a path up to homotopy, as an element of the matching groupoid.

    zero Pi: (X_0, h * sum eta) in T*R^n.  Constant nondegenerate Pi: (X_N, X_0),
    target first, in the pair groupoid.
    """

    kind: Kind
    n: int
    element: np.ndarray

    def __eq__(self, other) -> bool:
        return (isinstance(other, PathClass) and self.kind == other.kind and self.n == other.n
                and ex.equal(self.element, other.element))

    def to_json(self) -> dict:
        return {"kind": self.kind, "element": ex.to_strings(self.element)}


def structure_kind(pi: PolyBivector) -> Kind:
    if pi.is_zero():
        return "zero"
    if pi.is_constant() and ex.rank(pi.constant_matrix()) == pi.dim:
        return "constant_nondegenerate"
    raise ValueError("path classes are supported only for zero or constant nondegenerate bivectors")


def class_groupoid(kind: Kind, n: int) -> LinearGroupoidInstance:
    """cotangent_fiber_groupoid(n) for zero Pi, pair groupoid over R^n for constant nondegenerate Pi."""
    if kind == "zero":
        return cotangent_fiber_groupoid(n)
    if n % 2:
        raise ValueError("a nondegenerate bivector needs even dimension")
    return pair_groupoid(n // 2)


def classify_path(field: DiscretizedBoundaryField) -> PathClass:
    kind = structure_kind(field.pi)
    if kind == "zero":
        total = ex.qarray(field.eta.sum(axis=0) * field.h)
        return PathClass(kind, field.n, ex.qarray(list(field.X[0, :]) + list(total)))
    return PathClass(kind, field.n, ex.qarray(list(field.X[-1, :]) + list(field.X[0, :])))


def class_compose(c1: PathClass, c2: PathClass) -> PathClass:
    """Class of (path in c1) followed by (path in c2): the groupoid product c2 * c1."""
    if (c1.kind, c1.n) != (c2.kind, c2.n):
        raise ValueError("classes of different structures")
    g = class_groupoid(c1.kind, c1.n)
    try:
        prod = g.multiply(c2.element, c1.element)
    except ValueError:
        raise ValueError("classes are not composable: end of the first is not the start of the second") from None
    return PathClass(c1.kind, c1.n, prod)


def class_invert(c: PathClass) -> PathClass:
    return PathClass(c.kind, c.n, class_groupoid(c.kind, c.n).inverse(c.element))


def class_groupoid_check(pi: PolyBivector, samples: int, N: int, r: random.Random) -> Report:
    """Compare path-class operations with the groupoid structure maps on random composable pairs."""
    kind = structure_kind(pi)
    n = pi.dim
    g = class_groupoid(kind, n)
    rep = Report()
    counts = dict.fromkeys(["compose", "invert", "source_target", "unit", "refine", "trivial"], 0)
    for _ in range(samples):
        f1 = random_apath(pi, N, r)
        f2 = random_apath(pi, N, r, x0=f1.X[-1, :])
        c1, c2 = classify_path(f1), classify_path(f2)
        cc = classify_path(concat(f1, f2))
        counts["compose"] += cc == class_compose(c1, c2) and ex.equal(cc.element, g.multiply(c2.element, c1.element))
        inv = classify_path(invert(f1))
        counts["invert"] += inv == class_invert(c1) and ex.equal(inv.element, g.inverse(c1.element))
        start, end = f1.X[0, :], f1.X[-1, :]
        base_s, base_t = (start, start) if kind == "zero" else (start, end)
        counts["source_target"] += (ex.equal(g.source(c1.element), base_s)
                                    and ex.equal(g.target(c1.element), base_t))
        unit = classify_path(trivial_path(pi, start, N))
        counts["unit"] += ex.equal(unit.element, g.unit(start))
        counts["refine"] += classify_path(refine(f1)) == c1
        counts["trivial"] += classify_path(concat(f1, trivial_path(pi, end, N))) == c1
    for name, hits in counts.items():
        rep.add(name, hits == samples, "class_groupoid", matched=int(hits), samples=samples)
    return rep


def compatible_poisson_tensors(fields: Sequence[DiscretizedBoundaryField]) -> list[np.ndarray]:
    """Basis of the constant antisymmetric B with J B J^T = 0 at every given field.

    Each such B is a constant Poisson tensor on the discretized phase space for
    which all the given constraint tangent spaces are coisotropic.  The largest
    rank in the span bounds how far a constant pairing can go.
    """
    if not fields:
        raise ValueError("need at least one field")
    D = 2 * fields[0].n * fields[0].N
    slots = [(i, j) for i in range(D) for j in range(i + 1, D)]
    rows = []
    for f in fields:
        J = constraint_jacobian(f)
        for a in range(J.shape[0]):
            for b in range(a + 1, J.shape[0]):
                rows.append([J[a, i] * J[b, j] - J[a, j] * J[b, i] for i, j in slots])
    ns = ex.nullspace(ex.qarray(rows)) if rows else ex.eye(len(slots))
    out = []
    for c in range(ns.shape[1]):
        B = ex.zeros(D, D)
        for k, (i, j) in enumerate(slots):
            B[i, j], B[j, i] = ns[k, c], -ns[k, c]
        out.append(B)
    return out
