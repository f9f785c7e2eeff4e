"""Exact polynomial Poisson calculus on R^n.

Polynomials are elements of sympy's sparse ring ``QQ[x1..xn]``.  Alternating
tensors (multivector fields and differential forms alike) are stored by their
components on strictly increasing index tuples.

Conventions, fixed once:

* ``{f, g} = sum_ij Pi^ij d_i f d_j g``.
* ``sharp(Pi, a)^i = sum_j Pi^ij a_j``.
* The algebroid anchor of ``T*M`` is ``rho(a) = Pi(a, .)``, i.e.
  ``rho(a)^j = sum_i a_i Pi^ij = -sharp(Pi, a)^j``.  With this anchor the
  Koszul bracket satisfies ``[df, dg] = d{f, g}`` and ``rho(df)(g) = {f, g}``.
* The algebroid differential is the Chevalley-Eilenberg differential of
  ``(T*M, [,], rho)`` acting on multivector fields; on functions
  ``(delta f)^i = sum_j Pi^ij d_j f``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np
from sympy import QQ
from sympy.polys.rings import PolyElement, PolyRing, ring

from . import _exact as ex

Polynomial = PolyElement


@lru_cache(maxsize=None)
def poly_ring(n: int) -> PolyRing:
    """QQ[x1, ..., xn]."""
    if n < 1:
        raise ValueError("need at least one variable")
    return ring(",".join(f"x{i + 1}" for i in range(n)), QQ)[0]


def variables(n: int) -> tuple[Polynomial, ...]:
    return poly_ring(n).gens


def const(n: int, c) -> Polynomial:
    return poly_ring(n)(ex.q(c))


def poly_from_terms(n: int, terms: Iterable[tuple[object, Sequence[int]]]) -> Polynomial:
    """Sum of c * x^e over (c, e); duplicate exponents are merged, zeros dropped."""
    R = poly_ring(n)
    out = R.zero
    for coef, exps in terms:
        exps = tuple(int(e) for e in exps)
        if len(exps) != n or any(e < 0 for e in exps):
            raise ValueError(f"exponent tuple {exps} does not fit {n} variables")
        out += R({exps: ex.q(coef)})
    return out


def poly_terms(p: Polynomial) -> list[tuple[str, list[int]]]:
    """Canonically ordered (coefficient string, exponents) pairs."""
    return [(str(c), list(m)) for m, c in sorted(p.terms())]


def diff(p: Polynomial, i: int) -> Polynomial:
    return p.diff(p.ring.gens[i])


def evaluate(p: Polynomial, point: Sequence) -> object:
    return p(*[ex.q(v) for v in point]) if p.ring.ngens > 1 else p(ex.q(point[0]))


# ---------------------------------------------------------------- alternating tensors

def _sort_sign(idx: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the sorting permutation and the sorted tuple; sign 0 on repeats."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, ()
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return sign, tuple(idx)


@dataclass(frozen=True, eq=False)
class PolyMultivector:
    """Alternating tensor field of a given degree with polynomial components.

    Components are keyed by strictly increasing index tuples; other orderings
    are read through ``self[idx]`` with the permutation sign.  The same
    container holds k-forms (``PolyForm``); only the interpretation differs.
    """

    dim: int
    degree: int
    comps: Mapping[tuple[int, ...], Polynomial]

    def __post_init__(self):
        clean = {}
        for k, v in self.comps.items():
            k = tuple(k)
            if len(k) != self.degree or list(k) != sorted(set(k)) or any(not 0 <= i < self.dim for i in k):
                raise ValueError(f"bad component index {k}")
            if v:
                clean[k] = v
        object.__setattr__(self, "comps", dict(sorted(clean.items())))

    def __getitem__(self, idx) -> Polynomial:
        if isinstance(idx, int):
            idx = (idx,)
        sign, key = _sort_sign(idx)
        R = poly_ring(self.dim)
        if sign == 0:
            return R.zero
        return sign * self.comps.get(key, R.zero)

    def is_zero(self) -> bool:
        return not self.comps

    def __eq__(self, other) -> bool:
        return (isinstance(other, PolyMultivector) and self.dim == other.dim
                and self.degree == other.degree and self.comps == other.comps)

    def __add__(self, other: PolyMultivector) -> PolyMultivector:
        _check_same(self, other)
        keys = set(self.comps) | set(other.comps)
        return PolyMultivector(self.dim, self.degree, {k: self[k] + other[k] for k in keys})

    def __sub__(self, other: PolyMultivector) -> PolyMultivector:
        return self + other.scale(const(self.dim, -1))

    def scale(self, f: Polynomial) -> PolyMultivector:
        return PolyMultivector(self.dim, self.degree, {k: f * v for k, v in self.comps.items()})

    def components(self) -> list[Polynomial]:
        """Degree-1 convenience: the full component list."""
        if self.degree != 1:
            raise ValueError("components() is for degree one")
        return [self[i] for i in range(self.dim)]

    def to_json(self) -> dict:
        return {"dim": self.dim, "degree": self.degree,
                "components": [{"index": [i + 1 for i in k], "poly": _poly_json(v)}
                               for k, v in self.comps.items()]}


PolyForm = PolyMultivector


def _check_same(a: PolyMultivector, b: PolyMultivector) -> None:
    if a.dim != b.dim or a.degree != b.degree:
        raise ValueError("dimension or degree mismatch")


def one_form(components: Sequence[Polynomial], n: int | None = None) -> PolyForm:
    n = n if n is not None else len(components)
    if len(components) != n:
        raise ValueError("wrong number of components")
    R = poly_ring(n)
    return PolyMultivector(n, 1, {(i,): R(c) for i, c in enumerate(components)})


def vector_field(components: Sequence[Polynomial], n: int | None = None) -> PolyMultivector:
    return one_form(components, n)


def exterior_derivative(f: Polynomial) -> PolyForm:
    """df as a 1-form."""
    n = f.ring.ngens
    return one_form([diff(f, i) for i in range(n)], n)


def function(f: Polynomial) -> PolyMultivector:
    """A polynomial as a degree-0 tensor."""
    return PolyMultivector(f.ring.ngens, 0, {(): f})


# ---------------------------------------------------------------- bivectors

@dataclass(frozen=True, eq=False)
class PolyBivector:
    """Pi on R^n with only Pi^ij, i < j, stored; indices are 0-based here."""

    dim: int
    entries: Mapping[tuple[int, int], Polynomial]

    def __post_init__(self):
        R = poly_ring(self.dim)
        clean = {}
        for (i, j), p in self.entries.items():
            if not (0 <= i < j < self.dim):
                raise ValueError(f"bivector entries need 0 <= i < j < {self.dim}, got {(i, j)}")
            p = R(p)
            if p:
                clean[(i, j)] = p
        object.__setattr__(self, "entries", dict(sorted(clean.items())))

    def __getitem__(self, ij: tuple[int, int]) -> Polynomial:
        i, j = ij
        R = poly_ring(self.dim)
        if i == j:
            return R.zero
        if i < j:
            return self.entries.get((i, j), R.zero)
        return -self.entries.get((j, i), R.zero)

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyBivector) and self.dim == other.dim and self.entries == other.entries

    def matrix(self) -> list[list[Polynomial]]:
        return [[self[i, j] for j in range(self.dim)] for i in range(self.dim)]

    def at(self, point: Sequence) -> np.ndarray:
        """Exact value Pi(x) as an n x n rational matrix."""
        out = ex.zeros(self.dim, self.dim)
        for (i, j), p in self.entries.items():
            v = evaluate(p, point)
            out[i, j], out[j, i] = v, -v
        return out

    def is_zero(self) -> bool:
        return not self.entries

    def is_constant(self) -> bool:
        return all(p.is_ground for p in self.entries.values())

    def constant_matrix(self) -> np.ndarray:
        if not self.is_constant():
            raise ValueError("bivector is not constant")
        return self.at([0] * self.dim)

    def to_json(self) -> dict:
        """{"dim", "entries": [{"i", "j", "poly": [{"coef", "exps"}]}]}; i, j are 1-based."""
        return {"dim": self.dim,
                "entries": [{"i": i + 1, "j": j + 1, "poly": _poly_json(p)}
                            for (i, j), p in self.entries.items()]}

    @classmethod
    def from_json(cls, data: dict) -> PolyBivector:
        return bivector_from_json(data)


def _poly_json(p: Polynomial) -> list[dict]:
    return [{"coef": c, "exps": e} for c, e in poly_terms(p)]


class BivectorFormatError(ValueError):
    """Malformed bivector input; the message names the offending field."""


def bivector_from_json(data) -> PolyBivector:
    if not isinstance(data, dict):
        raise BivectorFormatError("top level: expected an object with 'dim' and 'entries'")
    if "dim" not in data or not isinstance(data["dim"], int) or data["dim"] < 1:
        raise BivectorFormatError("field 'dim': expected a positive integer")
    n = data["dim"]
    raw = data.get("entries", [])
    if not isinstance(raw, list):
        raise BivectorFormatError("field 'entries': expected a list")
    entries: dict[tuple[int, int], Polynomial] = {}
    for k, e in enumerate(raw):
        where = f"entries[{k}]"
        if not isinstance(e, dict):
            raise BivectorFormatError(f"{where}: expected an object")
        try:
            i, j = int(e["i"]) - 1, int(e["j"]) - 1
        except (KeyError, TypeError, ValueError):
            raise BivectorFormatError(f"{where}: fields 'i' and 'j' must be integers") from None
        if not (0 <= i < n and 0 <= j < n) or i == j:
            raise BivectorFormatError(f"{where}: indices must be distinct and in 1..{n}")
        terms = []
        for t, term in enumerate(e.get("poly", [])):
            try:
                terms.append((ex.q(str(term["coef"])), term["exps"]))
            except (KeyError, TypeError, ValueError, ZeroDivisionError):
                raise BivectorFormatError(f"{where}.poly[{t}]: need 'coef' as 'p/q' and 'exps'") from None
        try:
            p = poly_from_terms(n, terms)
        except ValueError as err:
            raise BivectorFormatError(f"{where}.poly: {err}") from None
        if i > j:
            i, j, p = j, i, -p
        entries[(i, j)] = entries.get((i, j), poly_ring(n).zero) + p
    return PolyBivector(n, entries)


def zero_bivector(n: int) -> PolyBivector:
    return PolyBivector(n, {})


def constant_bivector(matrix) -> PolyBivector:
    """Constant Pi from an antisymmetric rational matrix."""
    m = ex.qarray(matrix)
    n = m.shape[0]
    if not ex.equal(m.T, ex.neg(m)):
        raise ValueError("matrix is not antisymmetric")
    return PolyBivector(n, {(i, j): const(n, m[i, j]) for i in range(n) for j in range(i + 1, n)})


def so3_dual() -> PolyBivector:
    """Lie-Poisson structure of so(3)*: Pi^12 = x3, Pi^23 = x1, Pi^31 = x2."""
    x1, x2, x3 = variables(3)
    return PolyBivector(3, {(0, 1): x3, (1, 2): x1, (0, 2): -x2})


def non_poisson_witness() -> PolyBivector:
    """Pi^12 = x2, Pi^13 = x3, Pi^23 = 1 on R^3; its jacobiator is the constant 2."""
    x1, x2, x3 = variables(3)
    return PolyBivector(3, {(0, 1): x2, (0, 2): x3, (1, 2): const(3, 1)})


# ---------------------------------------------------------------- Jacobi condition

def jacobiator(pi: PolyBivector) -> PolyMultivector:
    """J^skl = sum_r Pi^sr d_r Pi^lk + Pi^kr d_r Pi^sl + Pi^lr d_r Pi^ks."""
    n = pi.dim
    R = poly_ring(n)
    comps = {}
    for s, k, l in combinations(range(n), 3):
        total = R.zero
        for r in range(n):
            total += (pi[s, r] * diff(pi[l, k], r) + pi[k, r] * diff(pi[s, l], r)
                      + pi[l, r] * diff(pi[k, s], r))
        comps[(s, k, l)] = total
    return PolyMultivector(n, 3, comps)


def jacobiator_tensor(pi: PolyBivector, s: int, k: int, l: int) -> Polynomial:
    """The defining sum evaluated at an arbitrary (not necessarily sorted) index triple."""
    R = poly_ring(pi.dim)
    total = R.zero
    for r in range(pi.dim):
        total += (pi[s, r] * diff(pi[l, k], r) + pi[k, r] * diff(pi[s, l], r)
                  + pi[l, r] * diff(pi[k, s], r))
    return total


def is_poisson(pi: PolyBivector) -> bool:
    return jacobiator(pi).is_zero()


# ---------------------------------------------------------------- brackets and anchors

def _check_dim(pi: PolyBivector, n: int) -> None:
    if pi.dim != n:
        raise ValueError(f"dimension mismatch: bivector on R^{pi.dim}, argument on R^{n}")


def sharp(pi: PolyBivector, alpha: PolyForm) -> PolyMultivector:
    """(Pi# a)^i = sum_j Pi^ij a_j."""
    _check_dim(pi, alpha.dim)
    R = poly_ring(pi.dim)
    comps = []
    for i in range(pi.dim):
        comps.append(sum((pi[i, j] * alpha[j] for j in range(pi.dim)), R.zero))
    return vector_field(comps, pi.dim)


def anchor(pi: PolyBivector, alpha: PolyForm) -> PolyMultivector:
    """rho(a) = Pi(a, .), rho(a)^j = sum_i a_i Pi^ij."""
    _check_dim(pi, alpha.dim)
    R = poly_ring(pi.dim)
    comps = [sum((alpha[i] * pi[i, j] for i in range(pi.dim)), R.zero) for j in range(pi.dim)]
    return vector_field(comps, pi.dim)


def apply_vector_field(v: PolyMultivector, f: Polynomial) -> Polynomial:
    """v(f) = sum_j v^j d_j f."""
    return sum((v[j] * diff(f, j) for j in range(v.dim)), f.ring.zero)


def pair(pi: PolyBivector, alpha: PolyForm, beta: PolyForm) -> Polynomial:
    """Pi(a, b) = sum_ij a_i Pi^ij b_j."""
    R = poly_ring(pi.dim)
    return sum((alpha[i] * pi[i, j] * beta[j] for i in range(pi.dim) for j in range(pi.dim)), R.zero)


def poisson_bracket(pi: PolyBivector, f: Polynomial, g: Polynomial) -> Polynomial:
    _check_dim(pi, f.ring.ngens)
    R = poly_ring(pi.dim)
    total = R.zero
    for (i, j), p in pi.entries.items():
        total += p * (diff(f, i) * diff(g, j) - diff(f, j) * diff(g, i))
    return total


def cyclic_jacobi(pi: PolyBivector, f: Polynomial, g: Polynomial, h: Polynomial) -> Polynomial:
    """{f,{g,h}} + {g,{h,f}} + {h,{f,g}}."""
    b = lambda u, v: poisson_bracket(pi, u, v)  # noqa: E731
    return b(f, b(g, h)) + b(g, b(h, f)) + b(h, b(f, g))


def contract3(t: PolyMultivector, f: Polynomial, g: Polynomial, h: Polynomial) -> Polynomial:
    """sum_abc t^abc d_a f d_b g d_c h over all index orderings."""
    R = poly_ring(t.dim)
    total = R.zero
    for (a, b, c), v in t.comps.items():
        for (x, y, z) in ((a, b, c), (b, c, a), (c, a, b), (b, a, c), (a, c, b), (c, b, a)):
            sign, _ = _sort_sign((x, y, z))
            total += sign * v * diff(f, x) * diff(g, y) * diff(h, z)
    return total


def lie_derivative_form(v: PolyMultivector, beta: PolyForm) -> PolyForm:
    """L_v b for a 1-form b: (v^j d_j b_k + b_j d_k v^j) dx_k, via Cartan's formula."""
    n = v.dim
    R = poly_ring(n)
    comps = []
    for k in range(n):
        c = R.zero
        for j in range(n):
            c += v[j] * diff(beta[k], j) + beta[j] * diff(v[j], k)
        comps.append(c)
    return one_form(comps, n)


def koszul_bracket(pi: PolyBivector, alpha: PolyForm, beta: PolyForm) -> PolyForm:
    """[a, b] = L_rho(a) b - L_rho(b) a - d Pi(a, b)."""
    _check_dim(pi, alpha.dim)
    _check_dim(pi, beta.dim)
    return (lie_derivative_form(anchor(pi, alpha), beta)
            - lie_derivative_form(anchor(pi, beta), alpha)
            - exterior_derivative(pair(pi, alpha, beta)))


# ---------------------------------------------------------------- algebroid differential

def algebroid_differential(pi: PolyBivector, v: PolyMultivector) -> PolyMultivector:
    """Chevalley-Eilenberg differential of (T*M, Koszul bracket, rho) on a k-multivector field.

    Evaluated on coordinate covectors ``dx_a0 .. dx_ak``::

        (dV)(a0..ak) = sum_i (-1)^i rho(dx_ai) V(.. no ai ..)
                     + sum_{i<j} (-1)^(i+j) V([dx_ai, dx_aj], .. no ai, aj ..)

    with ``[dx_a, dx_b] = d Pi^ab``.  For k = 0 this is ``(delta f)^i = sum_j Pi^ij d_j f``.
    """
    n = pi.dim
    _check_dim(pi, v.dim)
    k = v.degree
    if not 0 <= k <= n:
        raise ValueError(f"unsupported degree {k}; need 0 <= degree <= {n}")
    R = poly_ring(n)
    rho = [anchor(pi, one_form([R.one if c == a else R.zero for c in range(n)], n)) for a in range(n)]
    comps = {}
    if k == n:
        return PolyMultivector(n, k + 1, {})
    for idx in combinations(range(n), k + 1):
        total = R.zero
        for i, a in enumerate(idx):
            rest = idx[:i] + idx[i + 1:]
            total += (-1) ** i * apply_vector_field(rho[a], v[rest])
        for i, j in combinations(range(k + 1), 2):
            rest = tuple(x for m, x in enumerate(idx) if m not in (i, j))
            dpi = pi[idx[i], idx[j]]
            for c in range(n):
                coeff = diff(dpi, c)
                if coeff:
                    total += (-1) ** (i + j) * coeff * v[(c,) + rest]
        comps[idx] = total
    return PolyMultivector(n, k + 1, comps)


def delta_squared_coordinate(pi: PolyBivector, i: int) -> PolyMultivector:
    """delta(delta x_i) as a bivector field."""
    x = variables(pi.dim)[i]
    return algebroid_differential(pi, algebroid_differential(pi, function(x)))
