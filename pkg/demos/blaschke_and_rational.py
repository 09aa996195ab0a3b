"""Blaschke factor at a point and a random state-space rational function.

    python3 demos/blaschke_and_rational.py
"""
import numpy as np

from vqfueter import (PointH, QMatrix, blaschke_realization, blaschke_restriction,
                      blaschke_series, blaschke_tail, halmos, multiplier_kernel_gram,
                      min_eigenvalue, rational_restrict, rational_series, rational_tail, signature)
from vqfueter.checks import random_realization
from vqfueter.sampling import random_ball_point
from vqfueter.series import evaluate

a = PointH(0.0, 0.3, -0.2, 0.4)
H, J = halmos(a), signature()
print("|H J H* - J|    ", (H @ J @ H.H - J).max_abs())

T = blaschke_realization(a).system_matrix()
print("|T* T - I|      ", (T.H @ T - QMatrix.identity(4)).max_abs())
print("B_a(a) on slice ", blaschke_restriction(a, a.xvec).max_abs())

S = blaschke_series(a, 14)
for xvec in [(0.1, 0.2, 0.0), (-0.5, 0.1, 0.3)]:
    x = PointH(0.0, *xvec)
    gap = (evaluate(S, x) - blaschke_restriction(a, xvec)).max_abs()
    print(f"series vs closed form at {xvec}: {gap:.1e} (tail {blaschke_tail(a, x, 14):.1e})")

rng = np.random.default_rng(3)
pts = [random_ball_point(rng, 0.6) for _ in range(4)]
print("multiplier Gram min eigenvalue", min_eigenvalue(multiplier_kernel_gram(S.truncate(10), pts, 10)))

R = random_realization(rng, N=2, n=1, m=2)
series = rational_series(R, 20)
xvec = (0.2, -0.3, 0.1)
gap = (evaluate(series, PointH(0.0, *xvec)) - rational_restrict(R, xvec)).max_abs()
print(f"rational: series vs restriction {gap:.1e}, tail bound {rational_tail(R, xvec, 20):.1e}")
