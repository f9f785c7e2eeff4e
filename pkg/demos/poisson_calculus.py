"""Polynomial Poisson calculus: Jacobi condition, Koszul bracket, algebroid differential.

Run: python3 demos/poisson_calculus.py
"""
from relsym.poisson_calc import (
    delta_squared_coordinate,
    exterior_derivative,
    is_poisson,
    jacobiator,
    koszul_bracket,
    non_poisson_witness,
    poisson_bracket,
    so3_dual,
    variables,
)


def main():
    x1, x2, x3 = variables(3)
    pi = so3_dual()
    print("so(3)* brackets: {x1,x2} =", poisson_bracket(pi, x1, x2),
          " {x2,x3} =", poisson_bracket(pi, x2, x3), " {x3,x1} =", poisson_bracket(pi, x3, x1))
    print("is Poisson:", is_poisson(pi))
    casimir = x1**2 + x2**2 + x3**2
    print("Casimir x1^2+x2^2+x3^2 commutes with x1:", poisson_bracket(pi, casimir, x1) == 0)

    f, g = x1 * x2, x3**2 + x1
    lhs = koszul_bracket(pi, exterior_derivative(f), exterior_derivative(g))
    print("[df, dg] == d{f, g}:", lhs == exterior_derivative(poisson_bracket(pi, f, g)))
    print("delta^2 x_i == 0:", [delta_squared_coordinate(pi, i).is_zero() for i in range(3)])

    w = non_poisson_witness()
    print("\nwitness Pi^12 = x2, Pi^13 = x3, Pi^23 = 1")
    print("is Poisson:", is_poisson(w), " jacobiator:", jacobiator(w).to_json()["components"])
    for i in range(3):
        print(f"  delta^2 x{i + 1} =", delta_squared_coordinate(w, i).to_json()["components"])


if __name__ == "__main__":
    main()
