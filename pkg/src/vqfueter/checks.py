"""Seeded identity checks, grouped into suites.

Each check samples its own inputs from a generator seeded by the caller, so
a run is reproducible bit for bit.  Checks return :class:`CheckResult`
records rather than raising; the CLI ``verify`` verb and the acceptance
tests both consume them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .fueter import (PointH, arveson_diag, arveson_diag_tail, dmu1_dx2, expand_qn, mu_alpha,
                     multi_indices_upto)
from .operators import (FDScheme, MonomialField, apply_Vq, apply_Vq_bar, check_segment,
                        euler_exponential, gleason_residual)
from .errors import SegmentLeavesDomain
from .quat import QMatrix, Quaternion, min_eigenvalue
from .rational import (BlaschkePoint, Realization, blaschke_realization, blaschke_restriction,
                       blaschke_series, halmos, rational_restrict, rational_series,
                       rational_tail, signature)
from .rkhs import CoefficientFamily, gram_matrix, multiplier_kernel_gram, structural_defect
from .sampling import random_ball_point, random_point, random_qmatrix, random_quaternion
from .series import FueterSeries, evaluate, star_mul

KERNEL_MIN_VEC = 0.1
CONVERGENCE_STEPS = (1e-2, 5e-3, 2.5e-3)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    bound: float
    detail: str = ""
    extra: dict = field(default_factory=dict)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        text = f"{tag} {self.name}: {self.value:.3e} vs {self.bound:.3e}"
        return f"{text} ({self.detail})" if self.detail else text

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "value": self.value,
                "bound": self.bound, "detail": self.detail, **self.extra}


def _below(name, value, bound, detail="", **extra) -> CheckResult:
    value = float(value)
    return CheckResult(name, bool(value <= bound), value, float(bound), detail, extra)


def _rng(seed, salt: int) -> np.random.Generator:
    # independent stream per check so suites can run in any order
    return np.random.default_rng([int(seed), salt])


def _kernel_points(seed, count=50):
    rng = _rng(seed, 1)
    return [random_point(rng, min_vec=KERNEL_MIN_VEC) for _ in range(count)]


def _max_vq_residual(points, degree, scheme) -> float:
    worst = 0.0
    for alpha in multi_indices_upto(degree):
        f = MonomialField(alpha)
        for p in points:
            worst = max(worst, abs(apply_Vq(f, p, scheme)))
    return worst


# fueter --------------------------------------------------------------------

def check_euler_exponential(seed=0) -> CheckResult:
    rng = _rng(seed, 2)
    worst = 0.0
    for _ in range(50):
        p = random_point(rng)
        for alpha in multi_indices_upto(8):
            worst = max(worst, abs(euler_exponential(alpha, p) - mu_alpha(p, alpha)))
    return _below("euler exponential equals mu^alpha", worst, 1e-12, "|alpha| <= 8, 50 points")


def check_power_expansion(seed=0) -> CheckResult:
    rng = _rng(seed, 3)
    pts = [random_point(rng) for _ in range(50)]
    worst = 0.0
    for n in range(7):
        series = expand_qn(n)
        for p in pts:
            direct = p.q ** n
            value = Quaternion.coerce(evaluate(series, p).data[0, 0])
            worst = max(worst, abs(value - direct) / max(abs(direct), 1e-300))
    return _below("q^n from its Fueter expansion", worst, 1e-10, "relative, n <= 6, 50 points")


# operators -----------------------------------------------------------------

def check_vq_kernel(seed=0) -> CheckResult:
    worst = _max_vq_residual(_kernel_points(seed), 6, FDScheme(h=1e-5))
    return _below("V_q annihilates mu^alpha", worst, 1e-6, "|alpha| <= 6, 50 points, h = 1e-5")


def check_vq_convergence(seed=0) -> CheckResult:
    pts = _kernel_points(seed)
    res = [_max_vq_residual(pts, 6, FDScheme(h=h)) for h in CONVERGENCE_STEPS]
    ratios = [res[i] / res[i + 1] for i in range(len(res) - 1)]
    off = max(abs(r - 4.0) for r in ratios)
    return _below("V_q residual falls 4x per halving of h", off, 0.5,
                  "ratios " + ", ".join(f"{r:.3f}" for r in ratios),
                  residuals=res, steps=list(CONVERGENCE_STEPS))


def gleason_segments(seed, count=20):
    """Seeded pairs (a, b) whose segment stays clear of qvec = 0."""
    rng = _rng(seed, 4)
    out = []
    while len(out) < count:
        a, b = random_point(rng), random_point(rng)
        try:
            check_segment(a, b)
        except SegmentLeavesDomain:
            continue
        out.append((a, b))
    return out


def check_gleason(seed=0, segments=None) -> CheckResult:
    segments = segments if segments is not None else gleason_segments(seed)
    worst = 0.0
    for gamma in multi_indices_upto(4):
        f = MonomialField(gamma)
        for a, b in segments:
            worst = max(worst, abs(gleason_residual(f, a, b)))
    return _below("Gleason decomposition of mu^gamma", worst, 1e-7,
                  f"|gamma| <= 4, {len(segments)} segments, 1001 nodes")


def check_appell(seed=0) -> CheckResult:
    pts = _kernel_points(seed)
    worst = 0.0
    for alpha in multi_indices_upto(5):
        f = MonomialField(alpha)
        for p in pts:
            lhs = apply_Vq_bar(f, p, form="euler") * 0.5
            rhs = p.q.inv() * mu_alpha(p, alpha) * alpha.order
            worst = max(worst, abs(lhs - rhs))
    return _below("Appell property of the conjugate operator", worst, 1e-6,
                  "x_u form, |alpha| <= 5")


def check_negative_control(seed=0) -> CheckResult:
    value = abs(apply_Vq(dmu1_dx2, PointH(0.5, 1.0, 1.0, 1.0)))
    return CheckResult("d mu_1 / d x_2 is not V_q-regular", value > 1e-3, value, 1e-3,
                       "must exceed the bound")


# ck ------------------------------------------------------------------------

def check_star_monomials(seed=0) -> CheckResult:
    rng = _rng(seed, 5)
    alphas = multi_indices_upto(4)
    bad = 0
    for _ in range(50):
        a = alphas[rng.integers(len(alphas))]
        b = alphas[rng.integers(len(alphas))]
        c, d = random_quaternion(rng), random_quaternion(rng)
        lhs = star_mul(FueterSeries.monomial(a, c), FueterSeries.monomial(b, d))
        bad += lhs != FueterSeries.monomial(a + b, c * d)
    return CheckResult("star product of monomials", bad == 0, float(bad), 0.0,
                       "mismatches out of 50, exact comparison")


def _random_series(rng, shape, degree) -> FueterSeries:
    terms = {a: random_qmatrix(rng, *shape) for a in multi_indices_upto(degree)}
    return FueterSeries(shape, terms)


def check_star_slice(seed=0) -> CheckResult:
    rng = _rng(seed, 6)
    worst = 0.0
    for _ in range(20):
        f = _random_series(rng, (2, 3), 4)
        g = _random_series(rng, (3, 2), 4)
        x = PointH(0.0, *rng.uniform(-1, 1, 3))
        diff = evaluate(star_mul(f, g), x) - evaluate(f, x) @ evaluate(g, x)
        worst = max(worst, diff.max_abs())
    return _below("star product factors on x0 = 0", worst, 1e-12, "20 random pairs")


def check_star_noncommutative(seed=0) -> CheckResult:
    f = FueterSeries.monomial((1, 0, 0), Quaternion.unit(1))
    g = FueterSeries.monomial((0, 1, 0), Quaternion.unit(2))
    gap = star_mul(f, g).max_abs_diff(star_mul(g, f))
    return CheckResult("star product is not commutative", gap > 0, gap, 0.0,
                       "|f*g - g*f| must be positive")


# kernel --------------------------------------------------------------------

def check_structural(seed=0) -> CheckResult:
    c = CoefficientFamily.arveson()
    alphas = multi_indices_upto(10)[1:]
    nonzero = sum(structural_defect(c, a) != 0 for a in alphas)
    return CheckResult("structural identity of the Arveson weights", nonzero == 0, float(nonzero),
                       0.0, f"nonzero exact defects among {len(alphas)} indices")


def check_arveson_diagonal(seed=0) -> CheckResult:
    rng = _rng(seed, 7)
    worst = -math.inf
    for _ in range(20):
        p = random_ball_point(rng, 0.8)
        exact = 1.0 / (1.0 - abs(p.q) ** 2)
        gap = abs(exact - arveson_diag(p, 40))
        # the tail bound is attained, so allow rounding in the partial sum
        worst = max(worst, gap - arveson_diag_tail(p, 40) - 1e-12 * exact)
    return _below("Arveson diagonal within its tail bound", worst, 0.0,
                  "excess over bound, 20 points, trunc 40")


def check_gram_psd(seed=0) -> CheckResult:
    rng = _rng(seed, 8)
    c = CoefficientFamily.arveson()
    lowest = math.inf
    for _ in range(20):
        k = int(rng.integers(1, 7))
        pts = [random_ball_point(rng, 0.7) for _ in range(k)]
        lowest = min(lowest, min_eigenvalue(gram_matrix(c, pts, 30)))
    return CheckResult("Arveson Gram matrices are PSD", lowest >= -1e-8, lowest, -1e-8,
                       "min eigenvalue over 20 sets, must not fall below the bound")


# blaschke ------------------------------------------------------------------

def _omega1_points(seed, salt, count, radius=0.95):
    rng = _rng(seed, salt)
    return [random_ball_point(rng, radius) for _ in range(count)]


def check_halmos(seed=0) -> CheckResult:
    J = signature()
    worst = 0.0
    for a in _omega1_points(seed, 9, 20):
        H = halmos(a)
        worst = max(worst, (H @ J @ H.H - J).max_abs(), (H.H @ J @ H - J).max_abs())
    return _below("Halmos extension is J-unitary", worst, 1e-10, "20 points")


def check_blaschke_unitary(seed=0) -> CheckResult:
    worst = 0.0
    eye = QMatrix.identity(4)
    for a in _omega1_points(seed, 10, 20):
        T = blaschke_realization(a).system_matrix()
        worst = max(worst, (T @ T.H - eye).max_abs(), (T.H @ T - eye).max_abs())
    return _below("Blaschke system matrix is unitary", worst, 1e-12, "20 points")


def check_blaschke_series(seed=0) -> CheckResult:
    worst = 0.0
    for a in _omega1_points(seed, 11, 20):
        bp = BlaschkePoint.at(a)
        direct = blaschke_series(bp, 12)
        worst = max(worst, direct.max_abs_diff(rational_series(blaschke_realization(bp), 12), 12))
    return _below("Blaschke series matches its realization", worst, 1e-10, "degree <= 12")


def check_blaschke_zero(seed=0) -> CheckResult:
    rng = _rng(seed, 12)
    worst = 0.0
    for _ in range(20):
        p = random_ball_point(rng, 0.95)
        a = PointH(0.0, p.x1, p.x2, p.x3)
        worst = max(worst, rational_restrict(blaschke_realization(a), a.xvec).max_abs(),
                    blaschke_restriction(a, a.xvec).max_abs())
    return _below("Blaschke factor vanishes at its point", worst, 1e-10, "a0 = 0, 20 points")


def check_blaschke_multiplier(seed=0) -> CheckResult:
    rng = _rng(seed, 13)
    lowest = math.inf
    for _ in range(4):
        S = blaschke_series(random_ball_point(rng, 0.95), 16)
        pts = [random_ball_point(rng, 0.6) for _ in range(5)]
        lowest = min(lowest, min_eigenvalue(multiplier_kernel_gram(S, pts, 16)))
    return CheckResult("Blaschke multiplier kernel is PSD", lowest >= -1e-6, lowest, -1e-6,
                       "min eigenvalue, 4 factors, 5 points each")


# rational ------------------------------------------------------------------

def random_realization(rng, N=None, n=None, m=None, contraction=0.9) -> Realization:
    """Random data whose A blocks have operator norm ``contraction``."""
    N = N or int(rng.integers(1, 4))
    n = n or int(rng.integers(1, 3))
    m = m or int(rng.integers(1, 3))
    blocks = []
    for _ in range(3):
        blk = random_qmatrix(rng, N, N)
        blocks.append(blk * (contraction / blk.opnorm()))
    return Realization(QMatrix.vstack(blocks), random_qmatrix(rng, 3 * N, m),
                       random_qmatrix(rng, n, N), random_qmatrix(rng, n, m))


def check_rational(seed=0, trunc=20) -> CheckResult:
    rng = _rng(seed, 14)
    worst = -math.inf
    for _ in range(20):
        R = random_realization(rng)
        series = rational_series(R, trunc)
        x = random_ball_point(rng, 0.5)
        xvec = (x.x1, x.x2, x.x3)
        gap = (rational_restrict(R, xvec) - evaluate(series, PointH(0.0, *xvec))).max_abs()
        worst = max(worst, gap - rational_tail(R, xvec, trunc) - 1e-12)
    return _below("rational restriction matches its series", worst, 0.0,
                  f"excess over tail bound, 20 realizations, trunc {trunc}")


SUITES: dict[str, list[Callable[..., CheckResult]]] = {
    "fueter": [check_euler_exponential, check_power_expansion],
    "operators": [check_vq_kernel, check_vq_convergence, check_gleason, check_appell,
                  check_negative_control],
    "ck": [check_star_monomials, check_star_slice, check_star_noncommutative],
    "kernel": [check_structural, check_arveson_diagonal, check_gram_psd],
    "blaschke": [check_halmos, check_blaschke_unitary, check_blaschke_series,
                 check_blaschke_zero, check_blaschke_multiplier],
    "rational": [check_rational],
}


def run_suite(name: str, seed: int = 0) -> list[CheckResult]:
    if name == "all":
        return [r for key in SUITES for r in run_suite(key, seed)]
    if name not in SUITES:
        raise KeyError(name)
    return [check(seed) for check in SUITES[name]]
