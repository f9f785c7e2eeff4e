"""Seeded small-denominator rational samples, so exact kernels stay cheap."""
from __future__ import annotations

import random

import numpy as np

from . import _exact as ex


def rng(seed: int | None) -> random.Random:
    return random.Random(seed)


def rational(r: random.Random, bound: int = 3, max_den: int = 4):
    return ex.q(f"{r.randint(-bound, bound)}/{r.randint(1, max_den)}")


def vector(r: random.Random, n: int, **kw) -> np.ndarray:
    return ex.qarray([rational(r, **kw) for _ in range(n)])


def matrix(r: random.Random, m: int, n: int, **kw) -> np.ndarray:
    return ex.qarray([[rational(r, **kw) for _ in range(n)] for _ in range(m)])


def antisymmetric(r: random.Random, n: int, **kw) -> np.ndarray:
    out = ex.zeros(n, n)
    for i in range(n):
        for j in range(i + 1, n):
            v = rational(r, **kw)
            out[i, j], out[j, i] = v, -v
    return out


def nondegenerate_antisymmetric(r: random.Random, n: int, **kw) -> np.ndarray:
    if n % 2:
        raise ValueError("nondegenerate antisymmetric matrices need even size")
    while True:
        m = antisymmetric(r, n, **kw)
        if ex.rank(m) == n:
            return m
