"""Star products and the Arveson kernel with its shift operators.

    python3 demos/kernels_and_products.py
"""
import numpy as np

from vqfueter import (CoefficientFamily, FueterSeries, PointH, arveson_closed_form, backward_shift,
                      gram_matrix, kernel_eval, kernel_tail, min_eigenvalue, shift, star_mul,
                      structural_defect)
from vqfueter.quat import E1, E2
from vqfueter.sampling import random_ball_point
from vqfueter.series import evaluate

# mu_1 E1 star mu_2 E2 and the reversed order differ by sign
f = FueterSeries.monomial((1, 0, 0), E1)
g = FueterSeries.monomial((0, 1, 0), E2)
print("f*g:", star_mul(f, g).to_json()["terms"])
print("g*f:", star_mul(g, f).to_json()["terms"])

# on x0 = 0 the star product is just the pointwise product
y = PointH(0.0, 0.4, -0.1, 0.7)
print("slice gap:", (evaluate(star_mul(f, g), y) - evaluate(f, y) @ evaluate(g, y)).max_abs())

A = CoefficientFamily.arveson()
x = PointH(0.2, 0.3, 0.1, -0.4)
for trunc in (5, 10, 20, 40):
    k = kernel_eval(A, x, x, trunc)
    print(f"K(x,x) trunc {trunc:2d}: {k.w:.15f}  tail <= {kernel_tail(A, x, x, trunc):.1e}")
print("closed form      :", f"{arveson_closed_form(x, x).w:.15f}")

rng = np.random.default_rng(7)
pts = [random_ball_point(rng, 0.7) for _ in range(6)]
print("min eigenvalue of a 6-point Gram:", min_eigenvalue(gram_matrix(A, pts, 30)))

print("defect at (2,1,1):", structural_defect(A, (2, 1, 1)))
print("defect with c = 1:", structural_defect(CoefficientFamily.custom(lambda a: 1), (2, 1, 1)))

# sum_u M_u B_u removes only the constant term
h = FueterSeries.from_scalars({(0, 0, 0): 1.0, (1, 0, 2): 2.0, (0, 3, 0): -1.0})
back = sum((shift(u, backward_shift(u, h)) for u in (1, 2, 3)), FueterSeries.zero())
print("sum M_u B_u h:", [t["alpha"] for t in back.to_json()["terms"]])
