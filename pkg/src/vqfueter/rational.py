"""Blaschke factors with their Halmos extension; V_q-rational functions.

A rational function is given by a realization (A, B, C, D) with
``A = [A1; A2; A3]`` and ``B = [B1; B2; B3]``.  On the slice ``x0 = 0`` it
reads ``D + C (I - sum x_u A_u)^-1 (sum x_u B_u)``; its V_q-regular extension
is the series ``D + C (I - mu A)^{-star} star mu B``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import OutsideOmega1, ShapeMismatch
from .fueter import PointH, mu_row
from .quat import QMatrix, qsolve, rank1_spectral
from .series import (FueterSeries, linear_pencil, split_blocks, star_inverse, star_mul,
                     star_resolvent, variable_row)

DEFAULT_TRUNC = 12


@dataclass(frozen=True)
class BlaschkePoint:
    """A point a with ``s = sum_u |mu_u(a)|^2 < 1`` and its cached row mu(a)."""

    a: PointH
    mu_row: QMatrix
    s: float

    @classmethod
    def at(cls, a) -> "BlaschkePoint":
        a = PointH.coerce(a, strict=True)
        row = mu_row(a)
        s = float(np.sum(row.data ** 2))
        if s >= 1.0:
            raise OutsideOmega1(f"sum |mu_u(a)|^2 = {s:.6g} is not below 1")
        return cls(a, row, s)


def _coerce_point(a) -> BlaschkePoint:
    return a if isinstance(a, BlaschkePoint) else BlaschkePoint.at(a)


def defect_sqrt(bp: BlaschkePoint) -> QMatrix:
    """``(I_3 - mu(a)^* mu(a))^{1/2}``."""
    return rank1_spectral(bp.mu_row, math.sqrt)


def defect_inv_sqrt(bp: BlaschkePoint) -> QMatrix:
    """``(I_3 - mu(a)^* mu(a))^{-1/2}``."""
    return rank1_spectral(bp.mu_row, lambda t: t ** -0.5)


def blaschke_series(a, trunc: int = DEFAULT_TRUNC) -> FueterSeries:
    """The 1x3 series
    ``(1 - s)^{1/2} (1 - mu(x) mu(a)^*)^{-star} star (mu(x) - mu(a)) (I_3 - mu(a)^* mu(a))^{-1/2}``,
    exact through total degree ``trunc``.
    """
    if trunc < 1:
        raise ValueError("trunc must be at least 1")
    bp = _coerce_point(a)
    conj_mu = bp.mu_row.adjoint()  # 3x1 column of conj(mu_u(a))
    pencil = linear_pencil(split_blocks(conj_mu))
    inv = star_inverse(FueterSeries.identity(1) - pencil, trunc)
    diff = variable_row() - FueterSeries.constant(bp.mu_row)
    return (star_mul(inv, diff) * defect_inv_sqrt(bp)) * math.sqrt(1.0 - bp.s)


def blaschke_tail(a, x, trunc: int = DEFAULT_TRUNC) -> float:
    """Geometric bound on ``|B_a(x) - series(x)|`` from the dropped degrees.

    The degree-n part of the star inverse is at most ``rho^n`` at x with
    ``rho = |x| sqrt(s)``.  The outer factors have norms ``(1-s)^{1/2}`` and
    ``(1-s)^{-1/2}``, which cancel, and ``|mu(x) - mu(a)| <= |x| + sqrt(s)``.
    Infinite when rho >= 1.
    """
    bp = _coerce_point(a)
    x = PointH.coerce(x, strict=True)
    rho = abs(x.q) * math.sqrt(bp.s)
    if rho >= 1.0:
        return math.inf
    return (abs(x.q) + math.sqrt(bp.s)) * rho ** trunc / (1.0 - rho)


def signature() -> QMatrix:
    """J = diag(1, -1, -1, -1)."""
    return QMatrix.diag([1.0, -1.0, -1.0, -1.0])


def halmos(a) -> QMatrix:
    """4x4 Halmos extension of the strict contraction mu(a)."""
    bp = _coerce_point(a)
    k = bp.mu_row
    r = 1.0 / math.sqrt(1.0 - bp.s)
    d = defect_inv_sqrt(bp)
    return QMatrix.block([
        [QMatrix.identity(1) * r, -(k @ d)],
        [-(k.adjoint() * r), d],
    ])


@dataclass(frozen=True)
class Realization:
    """State-space data: A is 3N x N, B is 3N x m, C is n x N, D is n x m."""

    A: QMatrix
    B: QMatrix
    C: QMatrix
    D: QMatrix

    def __post_init__(self):
        if self.A.rows != 3 * self.A.cols:
            raise ShapeMismatch(f"A must be 3N x N, got {self.A.shape}")
        N = self.A.cols
        if self.B.rows != 3 * N:
            raise ShapeMismatch(f"B must have {3 * N} rows, got {self.B.shape}")
        if self.C.cols != N:
            raise ShapeMismatch(f"C must have {N} columns, got {self.C.shape}")
        if self.D.shape != (self.C.rows, self.B.cols):
            raise ShapeMismatch(f"D must be {(self.C.rows, self.B.cols)}, got {self.D.shape}")

    @property
    def N(self) -> int:
        return self.A.cols

    @property
    def n(self) -> int:
        return self.D.rows

    @property
    def m(self) -> int:
        return self.D.cols

    def A_blocks(self) -> list[QMatrix]:
        return split_blocks(self.A)

    def B_blocks(self) -> list[QMatrix]:
        return split_blocks(self.B)

    def system_matrix(self) -> QMatrix:
        """T = [[A, B], [C, D]], of size (3N + n) x (N + m)."""
        return QMatrix.block([[self.A, self.B], [self.C, self.D]])

    def to_json(self) -> dict:
        return {"N": self.N, "n": self.n, "m": self.m,
                "A": self.A.to_json(), "B": self.B.to_json(),
                "C": self.C.to_json(), "D": self.D.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "Realization":
        r = cls(*(QMatrix.from_json(obj[k]) for k in ("A", "B", "C", "D")))
        declared = tuple(int(obj[k]) for k in ("N", "n", "m") if k in obj)
        if declared and declared != (r.N, r.n, r.m)[:len(declared)]:
            raise ShapeMismatch(f"declared sizes {declared} disagree with the matrices")
        return r


def _pencils(R: Realization, xvec) -> tuple[QMatrix, QMatrix]:
    x = [float(v) for v in xvec]
    if len(x) != 3:
        raise ValueError("xvec must hold three reals")
    X = sum((Au * xu for Au, xu in zip(R.A_blocks(), x)), QMatrix.zeros(R.N, R.N))
    Y = sum((Bu * xu for Bu, xu in zip(R.B_blocks(), x)), QMatrix.zeros(R.N, R.m))
    return X, Y


def rational_restrict(R: Realization, xvec) -> QMatrix:
    """``D + C (I_N - sum x_u A_u)^-1 (sum x_u B_u)`` by quaternionic elimination."""
    X, Y = _pencils(R, xvec)
    return R.D + R.C @ qsolve(QMatrix.identity(R.N) - X, Y)


def rational_series(R: Realization, trunc: int = DEFAULT_TRUNC) -> FueterSeries:
    """``D + C (I - mu A)^{-star} star mu B`` exact through degree ``trunc``."""
    if trunc < 0:
        raise ValueError("trunc must be non-negative")
    resolvent = star_resolvent(R.A, trunc)
    c_res = star_mul(FueterSeries.constant(R.C), resolvent)
    return FueterSeries.constant(R.D) + star_mul(c_res, linear_pencil(R.B_blocks()))


def rational_tail(R: Realization, xvec, trunc: int = DEFAULT_TRUNC) -> float:
    """Bound on ``|R(0, x) - series(0, x)|`` (operator norm), from the geometric tail
    ``C X^trunc (I - X)^-1 Y`` with ``X = sum x_u A_u``."""
    X, Y = _pencils(R, xvec)
    rho = X.opnorm()
    if rho >= 1.0:
        return math.inf
    return R.C.opnorm() * Y.opnorm() * rho ** trunc / (1.0 - rho)


def blaschke_realization(a) -> Realization:
    """Realization read off the unitary system matrix of the Blaschke factor:
    A = mu(a)^*, B = (I_3 - mu(a)^* mu(a))^{1/2}, C = (1 - s)^{1/2}, D = -mu(a)."""
    bp = _coerce_point(a)
    return Realization(
        A=bp.mu_row.adjoint(),
        B=defect_sqrt(bp),
        C=QMatrix.identity(1) * math.sqrt(1.0 - bp.s),
        D=-bp.mu_row,
    )


def blaschke_restriction(a, xvec) -> QMatrix:
    """Closed form on the slice x0 = 0:
    ``-mu(a) + (1-s)^{1/2} (1 - x mu(a)^*)^-1 x (I_3 - mu(a)^* mu(a))^{1/2}``
    with x the real row (x1, x2, x3)."""
    bp = _coerce_point(a)
    x = QMatrix.real([list(map(float, xvec))])
    denom = QMatrix.identity(1) - x @ bp.mu_row.adjoint()
    inner = qsolve(denom, x @ defect_sqrt(bp))
    return -bp.mu_row + inner * math.sqrt(1.0 - bp.s)
