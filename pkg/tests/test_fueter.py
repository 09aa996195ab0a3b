import math

import numpy as np
import pytest

from vqfueter.errors import BadBounds, DegreeCap, DegreeMismatch, SingularVectorPart
from vqfueter.fueter import (MultiIndex, PointH, arveson_diag, arveson_diag_tail, c_alpha_n,
                             expand_qn, in_omega_1, in_omega_rRrho, mu_alpha, mu_alpha_many,
                             mu_row, mu_row_norm2, mu_table, mu_u, multi_indices,
                             multi_indices_upto, omega_rRrho_bound, zeta_alpha, zeta_u)
from vqfueter.quat import E1, E2, E3, ONE, Quaternion, symmetric_product
from vqfueter.sampling import random_ball_point, random_point
from vqfueter.series import evaluate


def close(p, q, tol=1e-12):
    return abs(Quaternion.coerce(p) - Quaternion.coerce(q)) <= tol


def test_multi_index_basics():
    a = MultiIndex(2, 1, 3)
    assert a.order == 6
    assert a.factorial == 2 * 1 * 6
    assert a.multinomial() == 60
    assert a + (1, 0, 0) == MultiIndex(3, 1, 3)
    assert a.shift(2, -2) is None
    assert a.to_json() == [2, 1, 3]
    with pytest.raises(ValueError):
        MultiIndex.coerce((1, -1, 0))


def test_index_enumeration_counts_and_order():
    assert len(multi_indices(4)) == 15
    assert len(multi_indices_upto(10)) == 286
    idx = multi_indices_upto(3)
    assert idx == sorted(idx, key=MultiIndex.sort_key)
    assert idx[0] == MultiIndex(0, 0, 0)


def test_point_checks():
    with pytest.raises(SingularVectorPart):
        PointH.coerce((1.0, 0, 0, 0), strict=True)
    assert PointH.coerce((1.0, 0, 0, 0)).x0 == 1.0
    with pytest.raises(ValueError):
        PointH.coerce((1, 2, 3))


def test_mu_on_the_slice_is_the_coordinate():
    x = PointH(0.0, 0.7, -1.2, 2.0)
    for u in (1, 2, 3):
        assert mu_u(x, u) == Quaternion(x[u])


def test_mu_example_by_hand():
    assert close(mu_u(PointH(1, 1, 0, 0), 1), ONE - E1)


def test_mu_modulus_formula_and_zeta_bound(rng):
    for _ in range(100):
        x = random_point(rng)
        v2 = x.x1 ** 2 + x.x2 ** 2 + x.x3 ** 2
        for u in (1, 2, 3):
            m = abs(mu_u(x, u)) ** 2
            assert math.isclose(m, x[u] ** 2 * (1 + x.x0 ** 2 / v2), rel_tol=1e-12, abs_tol=1e-15)
            assert m <= abs(zeta_u(x, u)) ** 2 + 1e-12


def test_mu_variables_commute(rng):
    for _ in range(100):
        x = random_point(rng)
        for u, v in ((1, 2), (1, 3), (2, 3)):
            a, b = mu_u(x, u), mu_u(x, v)
            assert close(a * b, b * a, 1e-12 * max(1.0, abs(a) * abs(b)))


def test_product_and_closed_form_agree(rng):
    for _ in range(50):
        x = random_point(rng)
        for alpha in multi_indices_upto(6):
            closed = mu_alpha(x, alpha)
            prod = mu_alpha(x, alpha, method="product")
            assert close(closed, prod, 1e-12 * max(1.0, abs(closed)))


def test_mu_alpha_examples(rng):
    x = random_point(rng)
    assert mu_alpha(x, (0, 0, 0)) == ONE
    s = PointH(0.0, 0.3, -0.4, 1.1)
    assert mu_alpha(s, (2, 1, 3)) == Quaternion(MultiIndex(2, 1, 3).monomial(s.xvec))


def test_mu_alpha_modulus(rng):
    for _ in range(20):
        x = random_point(rng)
        for alpha in multi_indices_upto(4):
            alpha = MultiIndex(*alpha)
            v2 = x.x1 ** 2 + x.x2 ** 2 + x.x3 ** 2
            expect = alpha.monomial(x.xvec) ** 2 * (1 + x.x0 ** 2 / v2) ** alpha.order
            assert math.isclose(abs(mu_alpha(x, alpha)) ** 2, expect, rel_tol=1e-10, abs_tol=1e-300)


def test_vectorized_tables_agree(rng):
    pts = np.array([tuple(random_point(rng)) for _ in range(7)])
    for alpha in multi_indices_upto(3):
        many = mu_alpha_many(pts, alpha)
        for p, m in zip(pts, many):
            assert close(m, mu_alpha(PointH(*p), alpha), 1e-12)
    table = mu_table(PointH(*pts[0]), multi_indices_upto(3))
    assert table.shape == (20, 4)


def test_singular_set_rejected():
    with pytest.raises(SingularVectorPart):
        mu_u(PointH(1.0, 0, 0, 0), 1)
    with pytest.raises(SingularVectorPart):
        mu_alpha_many(np.array([[0.5, 0, 0, 0]]), (1, 0, 0))


def test_zeta_examples():
    x = PointH(0.0, 0.5, -1.0, 2.0)
    assert zeta_alpha(x, (1, 2, 1)) == Quaternion(MultiIndex(1, 2, 1).monomial(x.xvec))
    assert zeta_alpha(PointH(1, 2, 0, 0), (1, 0, 0)) == Quaternion(2, -1, 0, 0)
    y = PointH(1, 1, 1, 0)
    assert zeta_alpha(y, (1, 1, 0)) == symmetric_product([ONE - E1, ONE - E2])
    with pytest.raises(DegreeCap):
        zeta_alpha(y, (5, 4, 0))


def test_c_alpha_n_examples():
    assert c_alpha_n((1, 0, 0), 1) == E1
    assert c_alpha_n((2, 0, 0), 2) == -ONE
    assert c_alpha_n((1, 1, 0), 2) == Quaternion(0.0)
    with pytest.raises(DegreeMismatch):
        c_alpha_n((1, 0, 0), 2)
    with pytest.raises(DegreeCap):
        c_alpha_n((9, 0, 0), 9)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_c_alpha_n_even_single_letter_is_real(k):
    for u in range(3):
        a = [0, 0, 0]
        a[u] = 2 * k
        c = c_alpha_n(a, 2 * k)
        assert c == Quaternion((-1.0) ** k)


def test_expand_qn_examples():
    assert expand_qn(0).terms == {MultiIndex(0, 0, 0): expand_qn(0).coeff((0, 0, 0))}
    assert expand_qn(0).coeff((0, 0, 0)).data[0, 0].tolist() == [1.0, 0, 0, 0]
    two = evaluate(expand_qn(2), PointH(0, 1, 1, 0)).data[0, 0]
    assert np.allclose(two, [-2, 0, 0, 0], atol=1e-14)
    three = evaluate(expand_qn(3), PointH(1, 1, 0, 0)).data[0, 0]
    assert np.allclose(three, [-2, 2, 0, 0], atol=1e-13)
    assert all(a.order == 4 for a in expand_qn(4).support())


def test_expand_qn_matches_powers(rng):
    pts = [random_point(rng) for _ in range(50)]
    for n in range(7):
        series = expand_qn(n)
        for x in pts:
            got = Quaternion.coerce(evaluate(series, x).data[0, 0])
            want = x.q ** n
            assert abs(got - want) <= 1e-10 * abs(want)


def test_omega_box():
    assert in_omega_rRrho(PointH(0, 1, 1, 1), 0.5, 2, 1)
    assert not in_omega_rRrho(PointH(0, 0.1, 1, 1), 0.5, 2, 1)
    with pytest.raises(BadBounds):
        in_omega_rRrho(PointH(0, 1, 1, 1), 2, 1, 1)


def test_omega_box_growth_bound(rng):
    r, R, rho = 0.5, 2.0, 1.0
    L = omega_rRrho_bound(r, R, rho)
    assert L == pytest.approx(R * (1 + rho / (math.sqrt(3) * r)))
    hits = 0
    while hits < 100:
        x = PointH(rng.uniform(-rho, rho), *(rng.choice([-1, 1]) * rng.uniform(r, R, 3)))
        if not in_omega_rRrho(x, r, R, rho):
            continue
        hits += 1
        for alpha in multi_indices_upto(5):
            assert abs(mu_alpha(x, alpha)) <= L ** alpha.order * (1 + 1e-12)


def test_omega_1_examples(rng):
    assert in_omega_1(PointH(0, 0.5, 0, 0.1))
    assert not in_omega_1(PointH(0, 1, 1, 0))
    n = 0
    while n < 100:
        p = rng.uniform(-1, 1, 4)
        if 3 * p[0] ** 2 + np.sum(p[1:] ** 2) >= 1 or np.linalg.norm(p[1:]) < 1e-3:
            continue
        n += 1
        assert in_omega_1(PointH(*p))


def test_row_norm_is_the_squared_modulus(rng):
    for _ in range(50):
        x = random_point(rng)
        assert mu_row_norm2(x) == pytest.approx(abs(x.q) ** 2, rel=1e-12)
        assert mu_row(x).shape == (1, 3)


def test_arveson_diag_examples():
    x = PointH(0, 0.5, 0, 0)
    assert arveson_diag(x, 40) == pytest.approx(4 / 3, abs=1e-9)
    assert arveson_diag(x, 0) == 1.0
    assert arveson_diag_tail(PointH(0.5, 1, 0, 0), 10) == math.inf


def test_arveson_diag_levels(rng):
    for _ in range(20):
        x = random_ball_point(rng, 0.9)
        prev = 0.0
        for n in range(8):
            cur = arveson_diag(x, n)
            assert cur - prev == pytest.approx(abs(x.q) ** (2 * n), rel=1e-10)
            prev = cur


def test_arveson_diag_diverges_outside_ball():
    x = PointH(0.3, 1.0, 0.2, 0.0)
    sums = [arveson_diag(x, t) for t in range(0, 30, 5)]
    assert all(b > a for a, b in zip(sums, sums[1:]))
    assert sums[-1] > 30
