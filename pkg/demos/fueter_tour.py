"""Walk through the Fueter variables and the operator V_q at one point.

Run with ``python3 demos/fueter_tour.py``.
"""
from vqfueter import (MonomialField, PointH, apply_Vq, apply_Vq_bar, euler_exponential,
                      expand_qn, gleason_residual, mu_alpha, mu_row)
from vqfueter.series import evaluate



def show(q):
    return "(" + ", ".join(f"{float(v):+.6f}" for v in q) + ")"


x = PointH(0.3, 0.5, -0.4, 0.2)
print("point            ", tuple(x))
for u, q in enumerate(mu_row(x).data[0], start=1):
    print(f"mu_{u}(x)          ", show(q))

# each monomial is annihilated by V_q, up to finite-difference error
for alpha in [(1, 0, 0), (2, 1, 0), (1, 1, 3)]:
    field = MonomialField(alpha)
    print(f"|V_q mu^{alpha}|    {abs(apply_Vq(field, x)):.2e}")

# the symbolic exponential of x0 qvec^-1 E rebuilds the same monomial
alpha = (2, 0, 1)
print("exp-series gap   ", f"{abs(euler_exponential(alpha, x) - mu_alpha(x, alpha)):.2e}")

# the conjugate operator (x_u form) acts on mu^alpha as |alpha| q^-1
half = apply_Vq_bar(MonomialField(alpha), x, form="euler") * 0.5
print("(1/2) Vbar mu^a  ", show(half))
print("3 q^-1 mu^a      ", show(x.q.inv() * mu_alpha(x, alpha) * 3))

# q^3 from its expansion in the monomials
print("q^3 direct       ", show(x.q ** 3))
print("q^3 via series   ", show(evaluate(expand_qn(3), x).data[0, 0]))

# the Gleason remainder identity only closes on special segments
ray = gleason_residual(MonomialField((1, 1, 0)), PointH(0.1, 0.2, 0.1, 0.0), PointH(0.3, 0.6, 0.3, 0.0))
generic = gleason_residual(MonomialField((1, 1, 0)), PointH(0.1, 0.2, 0.1, 0.0), x)
print(f"Gleason residual on a ray {abs(ray):.1e}, on a generic segment {abs(generic):.1e}")
