"""Linear symplectic category: Lagrangians, canonical relations and reduction, all exact.

Run: python3 demos/symplectic_category.py
"""
from relsym import _exact as ex
from relsym.symplinalg import (
    classify_subspace,
    compose,
    graph_of_map,
    identity_relation,
    reduce_coisotropic,
    span,
    standard_space,
    symplectic_orthogonal,
)


def show(title, value):
    print(f"{title:<44} {value}")


def main():
    v = standard_space(2)  # coordinates (q1, q2, p1, p2)
    print("standard form on R^4:", ex.to_strings(v.form))

    zero_section = span(v, [1, 0, 0, 0], [0, 1, 0, 0])
    show("span{q1, q2}", classify_subspace(zero_section))
    w = span(v, [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0])
    show("span{q1, q2, p1}", classify_subspace(w))
    show("its symplectic orthogonal", ex.to_strings(symplectic_orthogonal(w).basis.T))

    red = reduce_coisotropic(w)
    show("reduced space dimension", red.reduced.dim)
    show("reduced form", ex.to_strings(red.reduced.form))

    # a shear and a rotation by 90 degrees in the (q1, p1) plane, composed as relations
    shear = ex.qarray([[1, 0, 0, 0], [0, 1, 0, 0], [2, 0, 1, 0], [0, 0, 0, 1]])
    rot = ex.qarray([[0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1]])
    a, b = graph_of_map(shear, v), graph_of_map(rot, v)
    ab = compose(a, b)
    show("graph(shear) then graph(rot) == graph(rot.shear)", ab == graph_of_map(ex.matmul(rot, shear), v))
    show("a^T a == identity", compose(a, a.T) == identity_relation(v))

    try:
        graph_of_map(ex.eye(4) * ex.q(2), v)
    except ValueError as err:
        show("scaling by 2 rejected", err)


if __name__ == "__main__":
    main()
