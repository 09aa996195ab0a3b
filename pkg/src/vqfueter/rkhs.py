"""Reproducing kernels built on the Fueter monomials.

For a family of positive weights ``c_alpha`` the kernel is
``K_c(x, y) = sum_alpha mu^alpha(x) conj(mu^alpha(y)) / c_alpha``.  The
Arveson family ``c_alpha = alpha! / |alpha|!`` is the one for which
``1 = sum_u c_alpha / c_{alpha - e_u}``; the weights are kept as exact
fractions so that identity can be checked without rounding.

Shift operators act on coefficient data of FueterSeries, not on abstract
Hilbert-space elements.
"""
from __future__ import annotations

import math
import warnings
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import DomainError, PointOutsideOmegaA
from .fueter import MultiIndex, PointH, fueter_base, mu_table, multi_indices_upto
from .quat import QMatrix, Quaternion, matmul_array, qconj, qmul
from .series import FueterSeries


class CoefficientFamily:
    """Positive exact weights ``c_alpha``.

    Use :meth:`arveson` for ``alpha!/|alpha|!`` or :meth:`custom` with a mapping
    or a callable.  Custom families are not checked for the summability
    condition that makes the kernel converge; only positivity is enforced.
    """

    def __init__(self, kind: str, values: Mapping | Callable | None = None):
        if kind not in ("arveson", "custom"):
            raise ValueError(f"unknown family kind {kind!r}")
        if kind == "custom" and values is None:
            raise ValueError("a custom family needs values")
        self.kind = kind
        self._values = values

    @classmethod
    def arveson(cls) -> "CoefficientFamily":
        return cls("arveson")

    @classmethod
    def custom(cls, values: Mapping | Callable) -> "CoefficientFamily":
        return cls("custom", values)

    def __call__(self, alpha) -> Fraction:
        alpha = MultiIndex.coerce(alpha)
        if self.kind == "arveson":
            return Fraction(alpha.factorial, math.factorial(alpha.order))
        if callable(self._values):
            c = self._values(alpha)
        else:
            c = self._values[alpha] if alpha in self._values else self._values[tuple(alpha)]
        c = Fraction(c)
        if c <= 0:
            raise DomainError(f"c_{tuple(alpha)} = {c} is not positive")
        return c

    def inverse_weights(self, alphas: Sequence[MultiIndex]) -> np.ndarray:
        """``1 / c_alpha`` as floats, converted only here."""
        if self.kind == "arveson":
            return _arveson_weights(tuple(alphas))
        return np.array([float(1 / self(a)) for a in alphas])

    def __repr__(self):
        return f"CoefficientFamily({self.kind!r})"


@lru_cache(maxsize=64)
def _arveson_weights(alphas: tuple) -> np.ndarray:
    w = np.array([float(a.multinomial()) for a in alphas])
    w.setflags(write=False)
    return w


def kernel_eval(c: CoefficientFamily, x, y, trunc: int) -> Quaternion:
    """Truncated kernel ``sum_{|alpha| <= trunc} mu^alpha(x) conj(mu^alpha(y)) / c_alpha``."""
    if trunc < 0:
        raise ValueError("trunc must be non-negative")
    alphas = multi_indices_upto(trunc)
    mx = mu_table(x, alphas)
    my = mu_table(y, alphas)
    w = c.inverse_weights(alphas)
    return Quaternion.coerce(np.tensordot(w, qmul(mx, qconj(my)), axes=(0, 0)))


def kernel_tail(c: CoefficientFamily, x, y, trunc: int) -> float:
    """Bound on the part of the Arveson kernel beyond degree ``trunc``.

    By Cauchy-Schwarz, level n contributes at most ``(|x||y|)^n``, so the tail
    is below ``t^(trunc+1) / (1 - t)`` with ``t = |x| |y|``.  Infinite when
    ``t >= 1`` or for custom families.
    """
    if c.kind != "arveson":
        return math.inf
    t = abs(PointH.coerce(x).q) * abs(PointH.coerce(y).q)
    if t >= 1.0:
        return math.inf
    return t ** (trunc + 1) / (1.0 - t)


def arveson_closed_form(x, y) -> Quaternion:
    """Sum of the full Arveson kernel, ``sum_n w_x^n (xvec . yvec)^n conj(w_y^n)``,
    where ``w = 1 + x0/qvec``; this is ``1 / (1 - |q|^2)`` on the diagonal."""
    x = PointH.coerce(x, strict=True)
    y = PointH.coerce(y, strict=True)
    t = float(np.dot(x.xvec, y.xvec))
    wx, wy = fueter_base(x), fueter_base(y)
    if abs(wx) * abs(wy) * abs(t) >= 1.0:
        raise DomainError("kernel series diverges at this pair of points")
    # wx and conj(wy) need not commute, so powers are tracked separately
    total = Quaternion(1.0)
    px, py = Quaternion(1.0), Quaternion(1.0)
    for n in range(1, 100000):
        px, py = px * wx, py * wy
        term = px * py.conj() * (t ** n)
        total = total + term
        if abs(term) < 1e-17 * abs(total):
            break
    return total


def gram_matrix(c: CoefficientFamily, points: Sequence, trunc: int) -> QMatrix:
    """Matrix of kernel values ``G_ij = K_c(x_i, x_j)`` (Hermitian)."""
    pts = [PointH.coerce(p, strict=True) for p in points]
    alphas = multi_indices_upto(trunc)
    w = c.inverse_weights(alphas)
    tables = np.stack([mu_table(p, alphas) for p in pts])  # (k, T, 4)
    g = qmul(tables[:, None, :, :], qconj(tables)[None, :, :, :])  # (k, k, T, 4)
    return QMatrix(np.tensordot(g, w, axes=(2, 0)))


def shift(u: int, f: FueterSeries) -> FueterSeries:
    """Multiplication operator ``M_u``: ``mu^alpha -> mu^{alpha + e_u}``."""
    _check_u(u)
    return FueterSeries(f.shape, {a.shift(u): cf for a, cf in f}, None if f.trunc is None else f.trunc + 1)


def backward_shift_factor(u: int, alpha) -> Fraction:
    alpha = MultiIndex.coerce(alpha)
    if alpha[u - 1] == 0:
        return Fraction(0)
    return Fraction(alpha[u - 1], alpha.order)


def backward_shift(u: int, f: FueterSeries) -> FueterSeries:
    """``B_u mu^alpha = (alpha_u / |alpha|) mu^{alpha - e_u}``, zero when alpha_u = 0."""
    _check_u(u)
    terms = {}
    for a, cf in f:
        r = backward_shift_factor(u, a)
        if r:
            terms[a.shift(u, -1)] = cf * float(r)
    return FueterSeries(f.shape, terms, _lowered(f.trunc))


def shift_adjoint_factor(u: int, c: CoefficientFamily, alpha) -> Fraction:
    """Exact ratio ``c_alpha / c_{alpha - e_u}`` (zero when alpha_u = 0)."""
    alpha = MultiIndex.coerce(alpha)
    if alpha[u - 1] == 0:
        return Fraction(0)
    return c(alpha) / c(alpha.shift(u, -1))


def shift_adjoint(u: int, c: CoefficientFamily, f: FueterSeries) -> FueterSeries:
    """Adjoint of ``M_u`` in the space with weights c: coefficient maps
    ``mu^alpha -> (c_alpha / c_{alpha - e_u}) mu^{alpha - e_u}``."""
    _check_u(u)
    terms = {}
    for a, cf in f:
        r = shift_adjoint_factor(u, c, a)
        if r:
            terms[a.shift(u, -1)] = cf * float(r)
    return FueterSeries(f.shape, terms, _lowered(f.trunc))


def structural_defect(c: CoefficientFamily, alpha) -> Fraction:
    """``1 - sum_{u: alpha_u > 0} c_alpha / c_{alpha - e_u}``, exactly."""
    alpha = MultiIndex.coerce(alpha)
    if alpha.order < 1:
        raise ValueError("structural defect needs |alpha| >= 1")
    return 1 - sum((shift_adjoint_factor(u, c, alpha) for u in (1, 2, 3)), Fraction(0))


def multiplier_kernel_gram(S: FueterSeries, points: Sequence, trunc: int) -> QMatrix:
    """Block Gram matrix of the Schur-multiplier kernel for ``S``.

    Cell (i, j) is the n x n block
    ``sum_{|alpha| <= trunc} |alpha|!/alpha! (mu^alpha(x_i) conj(mu^alpha(x_j)) I_n
    - P_alpha(x_i) P_alpha(x_j)^*)`` with ``P_alpha = mu^alpha star S``.
    Points outside the ball |q| < 1 trigger a PointOutsideOmegaA warning.
    """
    pts = [PointH.coerce(p, strict=True) for p in points]
    for p in pts:
        if abs(p.q) >= 1.0:
            warnings.warn(f"point {tuple(p)} lies outside |q| < 1", PointOutsideOmegaA, stacklevel=2)
    n, m = S.shape
    k = len(pts)
    alphas = multi_indices_upto(trunc)
    weights = CoefficientFamily.arveson().inverse_weights(alphas)
    # P_alpha(x) = sum_beta mu^{alpha+beta}(x) S_beta, kept while |alpha+beta| fits S.trunc
    top = trunc + S.degree
    if S.trunc is not None:
        top = min(top, S.trunc)
    gammas = multi_indices_upto(max(top, trunc))
    where = {g: i for i, g in enumerate(gammas)}
    mu = np.stack([mu_table(p, gammas) for p in pts], axis=1)  # (G, k, 4)
    P = np.zeros((len(alphas), k, n, m, 4))
    for beta, coeff in S:
        rows = [i for i, a in enumerate(alphas) if a.order + beta.order <= top]
        if not rows:
            continue
        idx = [where[alphas[i] + beta] for i in rows]
        P[rows] += qmul(mu[idx][:, :, None, None, :], coeff.data[None, None])
    mu_a = mu[:len(alphas)]
    scal = np.einsum("t,tijq->ijq", weights,
                     qmul(mu_a[:, :, None, :], qconj(mu_a)[:, None, :, :]))  # (k, k, 4)
    first = np.zeros((k, k, n, n, 4))
    first[:, :, np.arange(n), np.arange(n), :] = scal[:, :, None, :]
    adj = qconj(np.swapaxes(P, 2, 3))  # (T, k, m, n, 4)
    second = matmul_array(P[:, :, None], adj[:, None, :])  # (T, k, k, n, n, 4)
    second = np.tensordot(weights, second, axes=(0, 0))
    return QMatrix((first - second).transpose(0, 2, 1, 3, 4).reshape(k * n, k * n, 4))


def _lowered(trunc: int | None) -> int | None:
    # dropped terms above trunc land one degree lower after a backward shift
    return None if trunc is None else trunc - 1


def _check_u(u: int) -> None:
    if u not in (1, 2, 3):
        raise ValueError("u must be 1, 2 or 3")
