"""Finite-difference harness for V_q, its conjugates, G_q and the Euler operator.

A *field* is any reentrant callable taking a :class:`~vqfueter.fueter.PointH`
and returning a Quaternion or a QMatrix.  Fields that also define
``batch(points)`` (points as a ``(k, 4)`` array, result ``(k, ..., 4)``) are
evaluated in one vectorized call per stencil.

The coefficient ``1/qvec`` always multiplies from the left.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import simpson

from .errors import SegmentLeavesDomain, SingularVectorPart, StencilOutOfDomain
from .fueter import MultiIndex, PointH, mu_alpha, mu_alpha_many, mu_u
from .quat import QMatrix, Quaternion, qmul, quat_inv
from .series import FueterSeries, evaluate

DEFAULT_STEP = 1e-5
SEGMENT_SAMPLES = 64
SEGMENT_MIN_VEC = 0.01

# central-difference weights keyed by order: offsets k, weights w_k, divisor
_STENCILS = {
    2: ((-1, 1), (-0.5, 0.5)),
    4: ((-2, -1, 1, 2), (1 / 12, -2 / 3, 2 / 3, -1 / 12)),
}


@dataclass(frozen=True)
class FDScheme:
    h: float = DEFAULT_STEP
    order: int = 2

    def __post_init__(self):
        if self.order not in _STENCILS:
            raise ValueError(f"order must be 2 or 4, got {self.order}")
        if not self.h > 10 * np.finfo(float).eps:
            raise ValueError(f"step {self.h} is too small")

    @property
    def radius(self) -> float:
        return self.h * max(abs(k) for k in _STENCILS[self.order][0])


def default_scheme() -> FDScheme:
    """Order-2 scheme; the step can be overridden through ``VQ_FD_STEP``."""
    step = os.environ.get("VQ_FD_STEP")
    return FDScheme(h=float(step)) if step else FDScheme()


def _as_array(value) -> np.ndarray:
    if isinstance(value, QMatrix):
        return value.data
    return np.asarray(value, dtype=float)


def _wrap(arr: np.ndarray):
    if arr.shape == (4,):
        return Quaternion.coerce(arr)
    return QMatrix(arr)


def field_values(f: Callable, points: np.ndarray) -> np.ndarray:
    """Evaluate a field at each row of ``points``; result shape (k, ..., 4)."""
    batch = getattr(f, "batch", None)
    if batch is not None:
        return np.asarray(batch(points), dtype=float)
    return np.stack([_as_array(f(PointH(*p))) for p in points])


def _check_center(x: PointH, scheme: FDScheme) -> None:
    if x.vec_norm() <= scheme.radius:
        raise StencilOutOfDomain(
            f"|qvec| = {x.vec_norm():.3e} is within the stencil radius {scheme.radius:.3e}")


def partials(f: Callable, x, scheme: FDScheme | None = None, coords=(0, 1, 2, 3)) -> dict[int, np.ndarray]:
    """Central-difference partial derivatives of ``f`` at ``x``, keyed by coordinate."""
    scheme = scheme or default_scheme()
    x = PointH.coerce(x)
    x.require_hstar()
    _check_center(x, scheme)
    offsets, weights = _STENCILS[scheme.order]
    base = np.asarray(x, dtype=float)
    pts = []
    for c in coords:
        for k in offsets:
            p = base.copy()
            p[c] += k * scheme.h
            pts.append(p)
    try:
        vals = field_values(f, np.array(pts))
    except SingularVectorPart as exc:
        raise StencilOutOfDomain(str(exc)) from exc
    vals = vals.reshape((len(coords), len(offsets)) + vals.shape[1:])
    w = np.asarray(weights)
    out = {}
    for i, c in enumerate(coords):
        out[c] = np.tensordot(w, vals[i], axes=(0, 0)) / scheme.h
    return out


def _left(q: Quaternion, arr: np.ndarray) -> np.ndarray:
    return qmul(np.asarray(q), arr)


def _euler_array(d: dict, x: PointH) -> np.ndarray:
    return x.x1 * d[1] + x.x2 * d[2] + x.x3 * d[3]


def apply_Vq(f: Callable, x, scheme: FDScheme | None = None):
    """``df/dx0 - qvec^-1 sum_u x_u df/dx_u`` by central differences."""
    x = PointH.coerce(x, strict=True)
    d = partials(f, x, scheme)
    return _wrap(d[0] - _left(quat_inv(x.qvec), _euler_array(d, x)))


def apply_Vq_bar(f: Callable, x, scheme: FDScheme | None = None, form: str = "printed"):
    """Conjugate operator.

    ``form="printed"``: ``df/dx0 + qvec^-1 sum_u e_u df/dx_u``.
    ``form="euler"``:   ``df/dx0 + qvec^-1 sum_u x_u df/dx_u``, the variant
    satisfying ``(V_q + Vbar_q) f = 2 df/dx0``.
    """
    x = PointH.coerce(x, strict=True)
    d = partials(f, x, scheme)
    if form == "printed":
        s = sum(_left(Quaternion.unit(u), d[u]) for u in (1, 2, 3))
    elif form == "euler":
        s = _euler_array(d, x)
    else:
        raise ValueError(f"unknown form {form!r}")
    return _wrap(d[0] + _left(quat_inv(x.qvec), s))


def apply_Gq(f: Callable, x, scheme: FDScheme | None = None):
    """Unnormalized global operator ``|qvec|^2 df/dx0 + qvec sum_u x_u df/dx_u``."""
    x = PointH.coerce(x, strict=True)
    d = partials(f, x, scheme)
    v2 = x.vec_norm() ** 2
    return _wrap(v2 * d[0] + _left(x.qvec, _euler_array(d, x)))


def euler(f: Callable, x, scheme: FDScheme | None = None):
    """Euler operator ``sum_u x_u df/dx_u``."""
    x = PointH.coerce(x, strict=True)
    d = partials(f, x, scheme, coords=(1, 2, 3))
    return _wrap(_euler_array(d, x))


def d_dx(f: Callable, x, coord: int, scheme: FDScheme | None = None):
    """Single partial derivative as a Quaternion or QMatrix."""
    return _wrap(partials(f, x, scheme, coords=(coord,))[coord])


def euler_exponential(alpha, x) -> Quaternion:
    """``exp(x0 qvec^-1 E)`` applied to ``x^alpha``, as its finite sum.

    On ``x^alpha`` the series stops after degree |alpha|, leaving
    ``x^alpha sum_{n<=|alpha|} C(|alpha|, n) (x0 / qvec)^n``.
    """
    alpha = MultiIndex.coerce(alpha)
    x = PointH.coerce(x, strict=True)
    t = x.x0 * quat_inv(x.qvec)
    total = Quaternion(0.0)
    power = Quaternion(1.0)
    for n in range(alpha.order + 1):
        total = total + power * math.comb(alpha.order, n)
        power = power * t
    return total * alpha.monomial(x.xvec)


def check_segment(a: PointH, b: PointH, samples: int = SEGMENT_SAMPLES,
                  min_vec: float = SEGMENT_MIN_VEC) -> None:
    """Reject segments that come within ``min_vec`` of the axis qvec = 0.

    Besides the uniform samples, the exact closest approach of the vector
    part is checked, so a crossing between two samples is not missed.
    """
    av = np.asarray(a, dtype=float)[1:]
    dv = np.asarray(b, dtype=float)[1:] - av
    ts = np.linspace(0.0, 1.0, samples)
    dd = float(dv @ dv)
    if dd > 0.0:
        ts = np.append(ts, min(max(-float(av @ dv) / dd, 0.0), 1.0))
    worst = float(np.min(np.linalg.norm(av[None, :] + ts[:, None] * dv[None, :], axis=1)))
    if worst <= min_vec:
        raise SegmentLeavesDomain(f"segment comes within {worst:.3e} of qvec = 0")


def gleason_remainder(f: Callable, a, b, u: int, quad_points: int = 1001,
                      scheme: FDScheme | None = None):
    """``int_0^1 df/dx_u(a + t(b - a)) dt`` by composite Simpson."""
    if u not in (1, 2, 3):
        raise ValueError("u must be 1, 2 or 3")
    if quad_points < 3 or quad_points % 2 == 0:
        raise ValueError("quad_points must be odd and at least 3")
    scheme = scheme or default_scheme()
    a = PointH.coerce(a, strict=True)
    b = PointH.coerce(b, strict=True)
    check_segment(a, b)
    ts = np.linspace(0.0, 1.0, quad_points)
    base = np.asarray(a)[None, :] + ts[:, None] * (np.asarray(b) - np.asarray(a))[None, :]
    offsets, weights = _STENCILS[scheme.order]
    deriv = 0.0
    for k, w in zip(offsets, weights):
        pts = base.copy()
        pts[:, u] += k * scheme.h
        deriv = deriv + w * field_values(f, pts)
    deriv = deriv / scheme.h
    return _wrap(simpson(deriv, x=ts, axis=0))


def gleason_residual(f: Callable, a, b, quad_points: int = 1001,
                     scheme: FDScheme | None = None):
    """``f(b) - f(a) - sum_u mu_u(b - a) R_u f``; returns the residual value."""
    a = PointH.coerce(a, strict=True)
    b = PointH.coerce(b, strict=True)
    diff = PointH.coerce(b - a, strict=True)
    total = _as_array(f(b)) - _as_array(f(a))
    for u in (1, 2, 3):
        r = _as_array(gleason_remainder(f, a, b, u, quad_points, scheme))
        total = total - _left(mu_u(diff, u), r)
    return _wrap(total)


class MonomialField:
    """The Fueter monomial ``x -> mu^alpha(x) c`` with a quaternion coefficient c."""

    def __init__(self, alpha, coeff=1.0):
        self.alpha = MultiIndex.coerce(alpha)
        self.coeff = Quaternion.coerce(coeff)

    def __call__(self, x) -> Quaternion:
        return mu_alpha(x, self.alpha) * self.coeff

    def batch(self, points) -> np.ndarray:
        return qmul(mu_alpha_many(points, self.alpha), np.asarray(self.coeff))


class SeriesField:
    """Pointwise evaluation of a FueterSeries as a field (QMatrix-valued)."""

    def __init__(self, series: FueterSeries):
        self.series = series
        self._alphas, self._stack = series.stacked()

    def __call__(self, x) -> QMatrix:
        return evaluate(self.series, x)

    def batch(self, points) -> np.ndarray:
        p = np.asarray(points, dtype=float)
        out = np.zeros((p.shape[0], self.series.rows, self.series.cols, 4))
        for alpha, c in zip(self._alphas, self._stack):
            mu = mu_alpha_many(p, alpha)
            out += qmul(mu[:, None, None, :], c[None])
        return out


class PowerField:
    """``x -> q^n b``."""

    def __init__(self, n: int, b=1.0):
        self.n = int(n)
        self.b = Quaternion.coerce(b)

    def __call__(self, x) -> Quaternion:
        return PointH.coerce(x).q ** self.n * self.b

    def batch(self, points) -> np.ndarray:
        p = np.asarray(points, dtype=float)
        out = np.zeros_like(p)
        out[:, 0] = 1.0
        for _ in range(self.n):
            out = qmul(out, p)
        return qmul(out, np.asarray(self.b))
