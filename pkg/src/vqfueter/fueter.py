"""Multi-indices and points of H*, with the V_q-Fueter variables built on them.

The three variables ``mu_u(x) = x_u (1 + x0 / qvec)`` commute at any fixed
point, so the monomial ``mu^alpha`` has the closed form
``x^alpha (1 + x0 / qvec)^|alpha|``.  Everything in this module evaluates
pointwise in float64; the only exact arithmetic lives in :mod:`vqfueter.rkhs`.
"""
from __future__ import annotations

import math
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from .errors import BadBounds, DegreeCap, DegreeMismatch, SingularVectorPart
from .quat import MAX_SYMMETRIC_ARITY, ONE, QMatrix, Quaternion, qabs2, qmul, quat_inv, symmetric_product

#: |qvec| below this is treated as the excluded set qvec = 0
VEC_EPS = 1e-14


class MultiIndex(NamedTuple):
    a1: int = 0
    a2: int = 0
    a3: int = 0

    @classmethod
    def coerce(cls, value) -> "MultiIndex":
        if isinstance(value, MultiIndex):
            return value
        a = tuple(int(v) for v in value)
        if len(a) != 3 or min(a) < 0:
            raise ValueError(f"multi-index must be three non-negative integers, got {value!r}")
        return cls(*a)

    @classmethod
    def unit(cls, u: int) -> "MultiIndex":
        a = [0, 0, 0]
        a[u - 1] = 1
        return cls(*a)

    @property
    def order(self) -> int:
        """|alpha| = a1 + a2 + a3."""
        return self.a1 + self.a2 + self.a3

    @property
    def factorial(self) -> int:
        """alpha! = a1! a2! a3!."""
        return math.factorial(self.a1) * math.factorial(self.a2) * math.factorial(self.a3)

    def multinomial(self) -> int:
        """|alpha|! / alpha!, the number of words with these letter counts."""
        return math.factorial(self.order) // self.factorial

    def __add__(self, other):
        o = MultiIndex.coerce(other)
        return MultiIndex(self.a1 + o.a1, self.a2 + o.a2, self.a3 + o.a3)

    def __sub__(self, other):
        o = MultiIndex.coerce(other)
        return MultiIndex(self.a1 - o.a1, self.a2 - o.a2, self.a3 - o.a3)

    def shift(self, u: int, k: int = 1) -> "MultiIndex | None":
        """alpha + k e_u, or None when the result would have a negative entry."""
        a = list(self)
        a[u - 1] += k
        return None if a[u - 1] < 0 else MultiIndex(*a)

    def sort_key(self) -> tuple[int, int, int, int]:
        return (self.order, self.a1, self.a2, self.a3)

    def monomial(self, xvec) -> float:
        """x^alpha for real (x1, x2, x3)."""
        x1, x2, x3 = xvec
        return float(x1) ** self.a1 * float(x2) ** self.a2 * float(x3) ** self.a3

    def to_json(self) -> list:
        return [self.a1, self.a2, self.a3]


def multi_indices(n: int) -> list[MultiIndex]:
    """All alpha with |alpha| = n in graded lexicographic order."""
    out = [MultiIndex(a1, a2, n - a1 - a2)
           for a1 in range(n + 1) for a2 in range(n - a1 + 1)]
    return sorted(out, key=MultiIndex.sort_key)


def multi_indices_upto(d: int) -> list[MultiIndex]:
    return [a for n in range(d + 1) for a in multi_indices(n)]


class PointH(NamedTuple):
    """A point x = (x0, x1, x2, x3), read as the quaternion x0 + qvec."""

    x0: float
    x1: float
    x2: float
    x3: float

    @classmethod
    def coerce(cls, value, strict: bool = False) -> "PointH":
        if isinstance(value, PointH):
            p = value
        elif isinstance(value, Quaternion):
            p = cls(*value)
        else:
            c = [float(v) for v in value]
            if len(c) != 4:
                raise ValueError(f"a point needs four coordinates, got {value!r}")
            p = cls(*c)
        if strict:
            p.require_hstar()
        return p

    @property
    def q(self) -> Quaternion:
        return Quaternion(*self)

    @property
    def qvec(self) -> Quaternion:
        return Quaternion(0.0, self.x1, self.x2, self.x3)

    @property
    def xvec(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3])

    def vec_norm(self) -> float:
        return math.sqrt(self.x1 ** 2 + self.x2 ** 2 + self.x3 ** 2)

    def require_hstar(self) -> None:
        if self.vec_norm() <= VEC_EPS:
            raise SingularVectorPart(f"point {tuple(self)} has zero vector part")

    def __add__(self, other):
        o = PointH.coerce(other)
        return PointH(*(a + b for a, b in zip(self, o)))

    def __sub__(self, other):
        o = PointH.coerce(other)
        return PointH(*(a - b for a, b in zip(self, o)))

    def __mul__(self, t):
        return PointH(*(a * float(t) for a in self))

    __rmul__ = __mul__

    def to_json(self) -> list:
        return list(self)


def fueter_base(x) -> Quaternion:
    """The common factor ``1 + x0 / qvec`` shared by all mu_u at x."""
    x = PointH.coerce(x, strict=True)
    return ONE + x.x0 * quat_inv(x.qvec)


def mu_u(x, u: int) -> Quaternion:
    """The V_q-Fueter variable ``mu_u(x) = x_u (1 + x0 qvec^-1)``."""
    if u not in (1, 2, 3):
        raise ValueError("u must be 1, 2 or 3")
    x = PointH.coerce(x, strict=True)
    return x[u] * fueter_base(x)


def mu_row(x) -> QMatrix:
    """The 1x3 row (mu_1(x), mu_2(x), mu_3(x))."""
    return QMatrix([[tuple(mu_u(x, u)) for u in (1, 2, 3)]])


def mu_alpha(x, alpha, method: str = "closed") -> Quaternion:
    """Fueter monomial mu^alpha(x).

    ``method="closed"`` uses ``x^alpha (1 + x0/qvec)^|alpha|``;
    ``method="product"`` multiplies ``mu_1^a1 mu_2^a2 mu_3^a3`` in order.
    """
    x = PointH.coerce(x, strict=True)
    alpha = MultiIndex.coerce(alpha)
    if method == "closed":
        return fueter_base(x) ** alpha.order * alpha.monomial(x.xvec)
    if method == "product":
        out = ONE
        for u, k in zip((1, 2, 3), alpha):
            m = mu_u(x, u)
            for _ in range(k):
                out = out * m
        return out
    raise ValueError(f"unknown method {method!r}")


def base_powers(x, degree: int) -> np.ndarray:
    """Array of ``(1 + x0/qvec)^n`` for n = 0..degree, shape (degree+1, 4)."""
    w = np.asarray(fueter_base(x))
    out = np.empty((degree + 1, 4))
    out[0] = (1.0, 0.0, 0.0, 0.0)
    for n in range(1, degree + 1):
        out[n] = qmul(out[n - 1], w)
    return out


def mu_table(x, alphas: Sequence[MultiIndex]) -> np.ndarray:
    """mu^alpha(x) for every alpha in ``alphas`` as an array of shape (len, 4)."""
    x = PointH.coerce(x, strict=True)
    if not alphas:
        return np.zeros((0, 4))
    arr = np.asarray(alphas, dtype=int).reshape(-1, 3)
    orders = arr.sum(axis=1)
    powers = base_powers(x, int(orders.max()))
    mono = np.prod(x.xvec[None, :] ** arr, axis=1)
    return powers[orders] * mono[:, None]


def zeta_u(x, u: int) -> Quaternion:
    """Classical Fueter variable ``zeta_u = x_u - x0 e_u``."""
    x = PointH.coerce(x)
    return x[u] - x.x0 * Quaternion.unit(u)


def zeta_alpha(x, alpha) -> Quaternion:
    """Classical Fueter monomial as the symmetric product of the zeta_u."""
    x = PointH.coerce(x)
    alpha = MultiIndex.coerce(alpha)
    if alpha.order == 0:
        return ONE
    if alpha.order > MAX_SYMMETRIC_ARITY:
        raise DegreeCap(f"|alpha| = {alpha.order} exceeds {MAX_SYMMETRIC_ARITY}")
    factors = [zeta_u(x, u) for u, k in zip((1, 2, 3), alpha) for _ in range(k)]
    return symmetric_product(factors)


@lru_cache(maxsize=None)
def _c_alpha_n(alpha: MultiIndex) -> Quaternion:
    n = alpha.order
    if n == 0:
        return ONE
    units = [Quaternion.unit(u) for u, k in zip((1, 2, 3), alpha) for _ in range(k)]
    return symmetric_product(units) * (math.factorial(n) / alpha.factorial)


def c_alpha_n(alpha, n: int) -> Quaternion:
    """Coefficient of mu^alpha in the expansion of q^n: (n!/alpha!) times the
    symmetric product of the units e_u, each repeated alpha_u times."""
    alpha = MultiIndex.coerce(alpha)
    if alpha.order != n:
        raise DegreeMismatch(f"|alpha| = {alpha.order} but n = {n}")
    if n > MAX_SYMMETRIC_ARITY:
        raise DegreeCap(f"n = {n} exceeds {MAX_SYMMETRIC_ARITY}")
    return _c_alpha_n(alpha)


def expand_qn(n: int):
    """q^n as a Fueter series supported on |alpha| = n."""
    from .series import FueterSeries

    if n < 0:
        raise ValueError("n must be non-negative")
    if n > MAX_SYMMETRIC_ARITY:
        raise DegreeCap(f"n = {n} exceeds {MAX_SYMMETRIC_ARITY}")
    return FueterSeries.from_scalars({a: c_alpha_n(a, n) for a in multi_indices(n)})


def in_omega_rRrho(x, r: float, R: float, rho: float) -> bool:
    """Membership in the box-like domain ``r < |x_u| < R``, ``|x0| < rho``."""
    if not (0 < r < R) or rho <= 0:
        raise BadBounds(f"need 0 < r < R and rho > 0, got r={r}, R={R}, rho={rho}")
    x = PointH.coerce(x)
    return all(r < abs(x[u]) < R for u in (1, 2, 3)) and abs(x.x0) < rho


def omega_rRrho_bound(r: float, R: float, rho: float) -> float:
    """L = R (1 + rho / (sqrt(3) r)); |mu^alpha| <= L^|alpha| on the domain."""
    if not (0 < r < R) or rho <= 0:
        raise BadBounds(f"need 0 < r < R and rho > 0, got r={r}, R={R}, rho={rho}")
    return R * (1.0 + rho / (math.sqrt(3.0) * r))


def mu_row_norm2(x) -> float:
    """sum_u |mu_u(x)|^2."""
    return sum(abs(mu_u(x, u)) ** 2 for u in (1, 2, 3))


def in_omega_1(x) -> bool:
    return mu_row_norm2(x) < 1.0


def arveson_diag(x, trunc: int) -> float:
    """Partial sum over |alpha| <= trunc of |mu^alpha(x)|^2 |alpha|!/alpha!."""
    if trunc < 0:
        raise ValueError("trunc must be non-negative")
    alphas = multi_indices_upto(trunc)
    vals = qabs2(mu_table(x, alphas))
    weights = np.array([float(a.multinomial()) for a in alphas])
    return float(np.sum(vals * weights))


def arveson_diag_tail(x, trunc: int) -> float:
    """Bound on the neglected part of :func:`arveson_diag`.

    The level-n block sums to ``s^n`` with ``s = sum_u |mu_u|^2``, so the tail
    is ``s^(trunc+1) / (1 - s)``; infinite when ``s >= 1``.
    """
    s = mu_row_norm2(x)
    if s >= 1.0:
        return math.inf
    return s ** (trunc + 1) / (1.0 - s)



def fueter_base_many(points) -> np.ndarray:
    """``1 + x0 / qvec`` for an array of points of shape (k, 4)."""
    p = np.asarray(points, dtype=float)
    v2 = np.sum(p[:, 1:] ** 2, axis=1)
    if np.any(np.sqrt(v2) <= VEC_EPS):
        raise SingularVectorPart("a point has zero vector part")
    # qvec^-1 = -qvec / |qvec|^2
    out = np.empty_like(p)
    out[:, 0] = 1.0
    out[:, 1:] = -p[:, 0:1] * p[:, 1:] / v2[:, None]
    return out


def mu_alpha_many(points, alpha) -> np.ndarray:
    """mu^alpha at each row of a (k, 4) point array; returns shape (k, 4)."""
    alpha = MultiIndex.coerce(alpha)
    p = np.asarray(points, dtype=float)
    w = fueter_base_many(p)
    out = np.zeros_like(p)
    out[:, 0] = 1.0
    for _ in range(alpha.order):
        out = qmul(out, w)
    mono = p[:, 1] ** alpha.a1 * p[:, 2] ** alpha.a2 * p[:, 3] ** alpha.a3
    return out * mono[:, None]


def dmu1_dx2(x) -> Quaternion:
    """Closed form of the x2-derivative of mu_1:
    ``x1 x0 (e2 / qvec^2 + 2 x2 / qvec^3)``."""
    x = PointH.coerce(x, strict=True)
    v = x.qvec
    v2 = v * v
    v3 = v2 * v
    return (x.x1 * x.x0) * (Quaternion.unit(2) * quat_inv(v2) + 2.0 * x.x2 * quat_inv(v3))
