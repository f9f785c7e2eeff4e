"""Discretized boundary fields: exact A-paths, coisotropy of the constraints, path classes.

The last section shows where the discrete model stops: for so(3)* no constant
pairing on the discretized phase space makes every constraint set coisotropic.

Run: python3 demos/psm_boundary.py
"""
import random

from relsym import _exact as ex
from relsym.poisson_calc import constant_bivector, non_poisson_witness, so3_dual, zero_bivector
from relsym.psm_boundary import (
    class_groupoid_check,
    classify_path,
    compatible_poisson_tensors,
    concat,
    linearized_constraint_space,
    random_apath,
)


def main():
    r = random.Random(0)
    symplectic = constant_bivector([[0, 1], [-1, 0]])

    print("Coisotropy of the linearized constraint set (N = 4)")
    for label, pi in [("zero", zero_bivector(2)), ("constant", symplectic),
                      ("so(3)*", so3_dual()), ("witness", non_poisson_witness())]:
        kinds = [linearized_constraint_space(random_apath(pi, 4, r)).classification for _ in range(3)]
        print(f"  {label:9}", kinds)

    print("\nPath classes for constant Pi land in the pair groupoid")
    f1 = random_apath(symplectic, 4, r)
    f2 = random_apath(symplectic, 4, r, x0=f1.X[-1, :])
    print("  class of f1        ", classify_path(f1).to_json()["element"])
    print("  class of f2        ", classify_path(f2).to_json()["element"])
    print("  class of f1 then f2", classify_path(concat(f1, f2)).to_json()["element"])
    rep = class_groupoid_check(symplectic, 10, 4, r)
    print("  structure-map check:", "ok" if rep.all_passed else rep.failures())

    print("\nRank of compatible constant pairings (N = 2, n = 3, 12-dim phase space)")
    for label, pi in [("zero", zero_bivector(3)), ("so(3)*", so3_dual())]:
        basis = compatible_poisson_tensors([random_apath(pi, 2, r) for _ in range(20)])
        total = ex.zeros(12, 12)
        for b in basis:
            total = total + b * ex.q(r.randint(-5, 5))
        print(f"  {label:7} {len(basis):3} admissible directions, generic rank {ex.rank(total)}")


if __name__ == "__main__":
    main()
