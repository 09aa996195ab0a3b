"""Finitely supported Fueter series and the CK (star) product.

A series ``f = sum_alpha mu^alpha f_alpha`` stores its coefficients
``f_alpha`` as quaternionic matrices of a common shape, with ``mu^alpha``
acting from the left.  On the slice ``x0 = 0`` every ``mu^alpha`` is the real
monomial ``x^alpha``, so the CK-extension of polynomial data is the identity on
coefficients and the star product is coefficient convolution.
"""
from __future__ import annotations

from typing import Mapping

import numpy as np

from .errors import ShapeMismatch, SingularConstantTerm, SingularPencil
from .fueter import MultiIndex, PointH, multi_indices_upto, mu_table
from .quat import QMatrix, Quaternion, matmul_array, qinv, qmul

ZERO_INDEX = MultiIndex(0, 0, 0)


def _as_matrix(c) -> QMatrix:
    if isinstance(c, QMatrix):
        return c
    return QMatrix.scalar(Quaternion.coerce(c))


class FueterSeries:
    """Immutable map ``MultiIndex -> QMatrix`` with a shared coefficient shape.

    ``trunc`` records that every term of total degree above it was discarded
    (``None`` means the series is exact as stored).  Exact zero coefficients
    are never stored.
    """

    __slots__ = ("rows", "cols", "trunc", "_terms")

    def __init__(self, shape: tuple[int, int], terms: Mapping | None = None,
                 trunc: int | None = None):
        rows, cols = shape
        clean: dict[MultiIndex, QMatrix] = {}
        for alpha, coeff in (terms or {}).items():
            alpha = MultiIndex.coerce(alpha)
            coeff = _as_matrix(coeff)
            if coeff.shape != (rows, cols):
                raise ShapeMismatch(f"coefficient at {tuple(alpha)} has shape {coeff.shape}, "
                                    f"series shape is {(rows, cols)}")
            if trunc is not None and alpha.order > trunc:
                continue
            if not coeff.data.any():
                continue
            clean[alpha] = coeff
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "trunc", trunc)
        object.__setattr__(self, "_terms", dict(sorted(clean.items(), key=lambda kv: kv[0].sort_key())))

    def __setattr__(self, name, value):
        raise AttributeError("FueterSeries is immutable")

    # construction -------------------------------------------------------
    @classmethod
    def zero(cls, shape=(1, 1), trunc: int | None = None) -> "FueterSeries":
        return cls(shape, {}, trunc)

    @classmethod
    def constant(cls, c) -> "FueterSeries":
        c = _as_matrix(c)
        return cls(c.shape, {ZERO_INDEX: c})

    @classmethod
    def identity(cls, n: int = 1) -> "FueterSeries":
        return cls.constant(QMatrix.identity(n))

    @classmethod
    def monomial(cls, alpha, coeff=1.0) -> "FueterSeries":
        c = _as_matrix(coeff)
        return cls(c.shape, {MultiIndex.coerce(alpha): c})

    @classmethod
    def from_scalars(cls, terms: Mapping, trunc: int | None = None) -> "FueterSeries":
        return cls((1, 1), {a: QMatrix.scalar(c) for a, c in terms.items()}, trunc)

    # access -------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def terms(self) -> dict[MultiIndex, QMatrix]:
        return dict(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def __getitem__(self, alpha) -> QMatrix:
        return self.coeff(alpha)

    def coeff(self, alpha) -> QMatrix:
        return self._terms.get(MultiIndex.coerce(alpha), QMatrix.zeros(self.rows, self.cols))

    def support(self) -> list[MultiIndex]:
        return list(self._terms)

    @property
    def degree(self) -> int:
        """Largest |alpha| with a nonzero coefficient (-1 for the zero series)."""
        return max((a.order for a in self._terms), default=-1)

    def is_zero(self) -> bool:
        return not self._terms

    def __repr__(self):
        return f"FueterSeries(shape={self.shape}, terms={len(self)}, trunc={self.trunc})"

    def __eq__(self, other):
        if not isinstance(other, FueterSeries):
            return NotImplemented
        return (self.shape == other.shape and self.trunc == other.trunc
                and self._terms.keys() == other._terms.keys()
                and all(self._terms[a] == other._terms[a] for a in self._terms))

    __hash__ = None

    # linear structure ---------------------------------------------------
    def _combine(self, other: "FueterSeries", sign: float) -> "FueterSeries":
        if self.shape != other.shape:
            raise ShapeMismatch(f"series shapes {self.shape} and {other.shape} differ")
        out = {a: c.data for a, c in self._terms.items()}
        for a, c in other._terms.items():
            out[a] = out[a] + sign * c.data if a in out else sign * c.data
        return FueterSeries(self.shape, {a: QMatrix(d) for a, d in out.items()},
                            _min_trunc(self.trunc, other.trunc))

    def __add__(self, other):
        return self._combine(other, 1.0)

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __neg__(self):
        return FueterSeries(self.shape, {a: -c for a, c in self._terms.items()}, self.trunc)

    def __mul__(self, s):
        """Right multiplication of every coefficient by a scalar or a matrix."""
        if isinstance(s, QMatrix):
            if s.rows != self.cols:
                raise ShapeMismatch(f"cannot right-multiply {self.shape} series by {s.shape}")
            return FueterSeries((self.rows, s.cols), {a: c @ s for a, c in self._terms.items()},
                                self.trunc)
        return FueterSeries(self.shape, {a: c * s for a, c in self._terms.items()}, self.trunc)

    def __rmul__(self, s):
        if isinstance(s, QMatrix):
            if s.cols != self.rows:
                raise ShapeMismatch(f"cannot left-multiply {self.shape} series by {s.shape}")
            return FueterSeries((s.rows, self.cols), {a: s @ c for a, c in self._terms.items()},
                                self.trunc)
        return FueterSeries(self.shape, {a: s * c for a, c in self._terms.items()}, self.trunc)

    def truncate(self, d: int) -> "FueterSeries":
        return FueterSeries(self.shape, self._terms, _min_trunc(self.trunc, d))

    def max_abs_diff(self, other: "FueterSeries", upto: int | None = None) -> float:
        """Largest entrywise coefficient difference, over |alpha| <= upto if given."""
        if self.shape != other.shape:
            raise ShapeMismatch(f"series shapes {self.shape} and {other.shape} differ")
        keys = set(self._terms) | set(other._terms)
        if upto is not None:
            keys = {a for a in keys if a.order <= upto}
        return max(((self.coeff(a) - other.coeff(a)).max_abs() for a in keys), default=0.0)

    # evaluation ---------------------------------------------------------
    def stacked(self) -> tuple[list[MultiIndex], np.ndarray]:
        alphas = list(self._terms)
        if not alphas:
            return alphas, np.zeros((0, self.rows, self.cols, 4))
        return alphas, np.stack([c.data for c in self._terms.values()])

    def __call__(self, x) -> QMatrix:
        return evaluate(self, x)

    # serialization ------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "trunc": self.trunc,
            "terms": [{"alpha": a.to_json(), "coeff": c.to_json()} for a, c in self._terms.items()],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FueterSeries":
        terms = {}
        for t in obj["terms"]:
            a = MultiIndex.coerce(t["alpha"])
            if a in terms:
                raise ValueError(f"duplicate multi-index {t['alpha']}")
            terms[a] = QMatrix.from_json(t["coeff"])
        trunc = obj.get("trunc")
        return cls((int(obj["rows"]), int(obj["cols"])), terms,
                   None if trunc is None else int(trunc))


def _min_trunc(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def ck_extend(poly: Mapping) -> FueterSeries:
    """CK-extension of polynomial boundary data ``sum_alpha x^alpha p_alpha``.

    Each ``x^alpha`` is replaced by ``mu^alpha``; the coefficients are kept.
    Values may be scalars (real or quaternion) or QMatrix objects of one common shape.
    """
    mats = {MultiIndex.coerce(a): _as_matrix(c) for a, c in poly.items()}
    if not mats:
        return FueterSeries.zero()
    shapes = {m.shape for m in mats.values()}
    if len(shapes) != 1:
        raise ShapeMismatch(f"polynomial coefficients have mixed shapes {sorted(shapes)}")
    return FueterSeries(shapes.pop(), mats)


PAIR_CHUNK = 4096


def _convolve(f_alphas, f_stack, g_alphas, g_stack, top):
    """All products ``f_i g_j`` with ``|alpha_i + beta_j| <= top``, summed per
    output index.  Returns (indices, coefficient stack)."""
    fa = np.asarray(f_alphas, dtype=int).reshape(-1, 3)
    ga = np.asarray(g_alphas, dtype=int).reshape(-1, 3)
    gam = fa[:, None, :] + ga[None, :, :]
    keep = np.ones(gam.shape[:2], dtype=bool) if top is None else gam.sum(axis=2) <= top
    i, j = np.nonzero(keep)
    shape = (f_stack.shape[1], g_stack.shape[2], 4)
    if i.size == 0:
        return np.zeros((0, 3), dtype=int), np.zeros((0,) + shape)
    keys, slot = np.unique(gam[i, j], axis=0, return_inverse=True)
    slot = slot.reshape(-1)
    out = np.zeros((len(keys),) + shape)
    for lo in range(0, i.size, PAIR_CHUNK):
        sl = slice(lo, lo + PAIR_CHUNK)
        np.add.at(out, slot[sl], matmul_array(f_stack[i[sl]], g_stack[j[sl]]))
    return keys, out


def star_mul(f: FueterSeries, g: FueterSeries) -> FueterSeries:
    """CK product: ``(f * g)_gamma = sum_{alpha+beta=gamma} f_alpha g_beta``."""
    if f.cols != g.rows:
        raise ShapeMismatch(f"cannot star-multiply {f.shape} by {g.shape}")
    trunc = _min_trunc(f.trunc, g.trunc)
    f_alphas, f_stack = f.stacked()
    g_alphas, g_stack = g.stacked()
    keys, coeffs = _convolve(f_alphas, f_stack, g_alphas, g_stack, trunc)
    terms = {MultiIndex(*map(int, k)): QMatrix(c) for k, c in zip(keys, coeffs)}
    return FueterSeries((f.rows, g.cols), terms, trunc)


def star_inverse(f: FueterSeries, trunc: int) -> FueterSeries:
    """Two-sided star inverse of a square series, exact through degree ``trunc``.

    Solves ``f * g = I`` degree by degree:
    ``g_0 = f_0^-1`` and ``g_gamma = -f_0^-1 sum_{alpha != 0} f_alpha g_{gamma-alpha}``.
    Each degree only needs lower ones, so a whole level is filled at once.
    """
    if f.rows != f.cols:
        raise ShapeMismatch("star_inverse needs a square series")
    if trunc < 0:
        raise ValueError("trunc must be non-negative")
    trunc = _min_trunc(f.trunc, trunc)
    try:
        f0_inv = qinv(f.coeff(ZERO_INDEX))
    except SingularPencil as exc:
        raise SingularConstantTerm("constant term of the series is not invertible") from exc
    higher = [(a, c.data) for a, c in f if a.order > 0]
    g: dict[MultiIndex, np.ndarray] = {ZERO_INDEX: f0_inv.data}
    if higher:
        h_alphas = [a for a, _ in higher]
        h_stack = np.stack([c for _, c in higher])
        neg_f0_inv = -f0_inv.data
        reach = max(a.order for a in h_alphas)
        for level in range(1, trunc + 1):
            g_alphas = [a for a in g if level - reach <= a.order < level]
            if not g_alphas:
                continue
            g_stack = np.stack([g[a] for a in g_alphas])
            keys, acc = _convolve(h_alphas, h_stack, g_alphas, g_stack, level)
            on_level = keys.sum(axis=1) == level
            vals = matmul_array(neg_f0_inv[None], acc[on_level])
            for k, v in zip(keys[on_level], vals):
                if v.any():
                    g[MultiIndex(*map(int, k))] = v
    return FueterSeries(f.shape, {a: QMatrix(d) for a, d in g.items()}, trunc)


def evaluate(f: FueterSeries, x) -> QMatrix:
    """Pointwise value ``sum_alpha mu^alpha(x) f_alpha`` (scalar factor on the left)."""
    x = PointH.coerce(x, strict=True)
    alphas, stack = f.stacked()
    if not alphas:
        return QMatrix.zeros(f.rows, f.cols)
    mu = mu_table(x, alphas)
    return QMatrix(qmul(mu[:, None, None, :], stack).sum(axis=0))


def variable_row() -> FueterSeries:
    """The 1x3 series ``mu(x) = (mu_1, mu_2, mu_3)``."""
    terms = {}
    for u in (1, 2, 3):
        row = np.zeros((1, 3, 4))
        row[0, u - 1, 0] = 1.0
        terms[MultiIndex.unit(u)] = QMatrix(row)
    return FueterSeries((1, 3), terms)


def split_blocks(m: QMatrix, nblocks: int = 3) -> list[QMatrix]:
    """Split a vertically stacked (k*N) x c matrix into k blocks of N rows."""
    if m.rows % nblocks:
        raise ShapeMismatch(f"{m.rows} rows do not split into {nblocks} equal blocks")
    n = m.rows // nblocks
    return [QMatrix(m.data[i * n:(i + 1) * n]) for i in range(nblocks)]


def linear_pencil(blocks: list[QMatrix]) -> FueterSeries:
    """The series ``sum_u mu^{e_u} M_u`` for blocks M_1, M_2, M_3 of equal shape."""
    shape = blocks[0].shape
    return FueterSeries(shape, {MultiIndex.unit(u): b for u, b in zip((1, 2, 3), blocks)})


def star_resolvent(A: QMatrix, trunc: int) -> FueterSeries:
    """``(I_N - mu(x) A)^{-star}`` for A stacked as three N x N blocks."""
    blocks = split_blocks(A)
    n = blocks[0].rows
    if blocks[0].cols != n:
        raise ShapeMismatch(f"A must be 3N x N, got {A.shape}")
    return star_inverse(FueterSeries.identity(n) - linear_pencil(blocks), trunc)
