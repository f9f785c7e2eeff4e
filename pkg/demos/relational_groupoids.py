"""Relational symplectic groupoids built from linear symplectic groupoids.

Checks every axiom, derives the reduced space M and solves for the Poisson
structure that makes the source relation coisotropic.

Run: python3 demos/relational_groupoids.py
"""
from relsym import _exact as ex
from relsym.groupoid_zoo import by_name as groupoid, power_analysis, verify_groupoid_axioms
from relsym.relational import (
    by_name,
    check_morphism,
    derive_core,
    induced_poisson,
    point_groupoid,
    standard_lagrangian_triple,
    verify_axioms,
    verify_regular,
)
from relsym.symplinalg import POINT, relation


def main():
    for name in ("pair:1", "cotangent:1", "pair:2", "cotangent:2"):
        g = groupoid(name)
        assert verify_groupoid_axioms(g).all_passed
        rg = by_name(name)
        axioms = verify_axioms(rg)
        core = derive_core(rg)
        regular = verify_regular(rg, core)
        ip = induced_poisson(rg, core)
        print(f"{name:12} axioms {'ok' if axioms.all_passed else axioms.failures()}, "
              f"regular {'ok' if regular.all_passed else regular.failures()}, dim M = {core.dim_M}")
        print(f"{'':12} induced pi = {ex.to_strings(ip.matrix)} (unique: {ip.unique})")

    print("\nTransposed source relation for the pair groupoid needs -pi:",
          not induced_poisson(by_name("pair:1")).same_pi_makes_T_coisotropic)

    print("\nPowers of the pair groupoid over R^2")
    for n in (2, 3):
        rep = power_analysis(groupoid("pair:1"), n)
        print(f"  n={n}:", ", ".join(f"{c.id}={'ok' if c.passed else 'FAIL'}" for c in rep))

    print("\nA Lagrangian triple is equivalent to the point")
    triple = standard_lagrangian_triple(1)
    F = relation(POINT, triple.g, ex.qarray([[1], [0]]))
    print("  axioms:", "ok" if verify_axioms(triple).all_passed else "fail")
    print("  comparison with the point:", check_morphism(F, point_groupoid(), triple).level)
    literal = verify_axioms(standard_lagrangian_triple(1, literal=True))
    print("  with I = Id the report flags:", literal.failures())


if __name__ == "__main__":
    main()
