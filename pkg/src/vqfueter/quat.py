"""Quaternion scalars and small dense quaternionic matrices.

Scalars are immutable ``Quaternion`` named tuples ``(w, x, y, z)`` standing for
``w + x e1 + y e2 + z e3``.  Matrices wrap a read-only float array of shape
``(rows, cols, 4)``; the trailing axis holds quaternion components, so all
matrix products vectorize through :func:`qmul`.
"""
from __future__ import annotations

import math
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np

from .errors import DegreeCap, DomainError, NotHermitian, ShapeMismatch, SingularPencil, ZeroDivisor

#: relative guard used by :func:`quat_inv`; the threshold is ``ZERO_EPS * (1 + |q|)``
ZERO_EPS = 1e-14
#: symmetric products enumerate permutations, so the arity is capped
MAX_SYMMETRIC_ARITY = 8
JACOBI_THRESHOLD = 1e-13
JACOBI_MAX_SWEEPS = 100


def qmul(a, b):
    """Hamilton product of quaternion arrays broadcasting over leading axes."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a0, a1, a2, a3 = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    b0, b1, b2, b3 = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    out = np.empty(np.broadcast_shapes(a.shape, b.shape))
    out[..., 0] = a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3
    out[..., 1] = a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2
    out[..., 2] = a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1
    out[..., 3] = a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0
    return out


def qconj(a):
    return np.asarray(a, dtype=float) * np.array([1.0, -1.0, -1.0, -1.0])


def qabs2(a):
    a = np.asarray(a, dtype=float)
    return np.sum(a * a, axis=-1)


class Quaternion(NamedTuple):
    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def coerce(cls, value) -> "Quaternion":
        """Accept a Quaternion or anything coercible to one (a real number, a length-4 sequence)."""
        if isinstance(value, Quaternion):
            return value
        if isinstance(value, (int, float, np.floating, np.integer)):
            return cls(float(value), 0.0, 0.0, 0.0)
        w, x, y, z = (float(c) for c in value)
        return cls(w, x, y, z)

    @classmethod
    def unit(cls, u: int) -> "Quaternion":
        """The imaginary unit e_u (u = 1, 2, 3); u = 0 gives 1."""
        c = [0.0, 0.0, 0.0, 0.0]
        c[u] = 1.0
        return cls(*c)

    @property
    def real(self) -> float:
        return self.w

    @property
    def vec(self) -> "Quaternion":
        return Quaternion(0.0, self.x, self.y, self.z)

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm2(self) -> float:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def __abs__(self) -> float:
        return math.sqrt(self.norm2())

    def inv(self, eps: float | None = None) -> "Quaternion":
        return quat_inv(self, eps)

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __pos__(self):
        return self

    def __add__(self, other):
        o = Quaternion.coerce(other)
        return Quaternion(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)

    __radd__ = __add__

    def __sub__(self, other):
        o = Quaternion.coerce(other)
        return Quaternion(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)

    def __rsub__(self, other):
        return Quaternion.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, QMatrix):
            return NotImplemented
        if isinstance(other, (int, float, np.floating, np.integer)):
            s = float(other)
            return Quaternion(self.w * s, self.x * s, self.y * s, self.z * s)
        return quat_mul(self, Quaternion.coerce(other))

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self * other
        return quat_mul(Quaternion.coerce(other), self)

    def __truediv__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self * (1.0 / float(other))
        # right division p / q = p q^-1
        return self * quat_inv(Quaternion.coerce(other))

    def __pow__(self, n: int):
        if n < 0:
            return quat_inv(self) ** (-n)
        out = Quaternion(1.0)
        for _ in range(n):
            out = out * self
        return out

    def __array__(self, dtype=None, copy=None):
        return np.array(tuple(self), dtype=dtype or float)

    # keep numpy scalars from broadcasting over the components: 2.0 * q
    # with a np.float64 on the left must reach __rmul__
    __array_ufunc__ = None

    def to_json(self) -> list:
        return [self.w, self.x, self.y, self.z]

    @classmethod
    def from_json(cls, data) -> "Quaternion":
        if len(data) != 4:
            raise ValueError("quaternion JSON must be [w, x, y, z]")
        return cls.coerce(data)


ONE = Quaternion(1.0)
ZERO = Quaternion()
E1, E2, E3 = Quaternion.unit(1), Quaternion.unit(2), Quaternion.unit(3)


def quat_mul(p: Quaternion, q: Quaternion) -> Quaternion:
    a0, a1, a2, a3 = p
    b0, b1, b2, b3 = q
    return Quaternion(
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    )


def quat_inv(q, eps: float | None = None) -> Quaternion:
    """Return ``conj(q) / |q|^2``.

    Raises ZeroDivisor when ``|q| < eps * (1 + |q|)``; ``eps`` defaults to
    :data:`ZERO_EPS`.
    """
    q = Quaternion.coerce(q)
    eps = ZERO_EPS if eps is None else eps
    n2 = q.norm2()
    n = math.sqrt(n2)
    if n < eps * (1.0 + n):
        raise ZeroDivisor(f"quaternion {tuple(q)} is not invertible")
    return Quaternion(q.w / n2, -q.x / n2, -q.y / n2, -q.z / n2)


def vec_part(q) -> Quaternion:
    return Quaternion.coerce(q).vec


def symmetric_product(qs: Sequence) -> Quaternion:
    """Average of the ordered products over all permutations of ``qs``.

    Repeated factors are grouped, so only distinct orderings are multiplied;
    every distinct ordering occurs equally often among the n! permutations,
    hence the plain average over distinct orderings is the same value.
    """
    qs = [Quaternion.coerce(q) for q in qs]
    n = len(qs)
    if n == 0:
        raise ValueError("symmetric product needs at least one factor")
    if n > MAX_SYMMETRIC_ARITY:
        raise DegreeCap(f"symmetric product of {n} > {MAX_SYMMETRIC_ARITY} factors refused")
    distinct: list[Quaternion] = []
    counts: list[int] = []
    for q in qs:
        if q in distinct:
            counts[distinct.index(q)] += 1
        else:
            distinct.append(q)
            counts.append(1)

    total = np.zeros(4)
    leaves = 0

    def walk(prefix: Quaternion, remaining: int) -> None:
        nonlocal total, leaves
        if remaining == 0:
            total += np.asarray(prefix)
            leaves += 1
            return
        for i, c in enumerate(counts):
            if c:
                counts[i] -= 1
                walk(prefix * distinct[i], remaining - 1)
                counts[i] += 1

    walk(ONE, n)
    return Quaternion.coerce(total / leaves)


class QMatrix:
    """Dense quaternionic matrix backed by a read-only ``(rows, cols, 4)`` array."""

    __slots__ = ("data",)

    def __init__(self, data):
        arr = np.array(data, dtype=float)
        if arr.ndim != 3 or arr.shape[2] != 4:
            raise ShapeMismatch(f"expected an array of shape (rows, cols, 4), got {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    def __setattr__(self, name, value):
        raise AttributeError("QMatrix is immutable")

    # construction -------------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls(np.zeros((rows, cols, 4)))

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        d = np.zeros((n, n, 4))
        d[np.arange(n), np.arange(n), 0] = 1.0
        return cls(d)

    @classmethod
    def scalar(cls, q) -> "QMatrix":
        return cls(np.asarray(Quaternion.coerce(q), dtype=float).reshape(1, 1, 4))

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> "QMatrix":
        """Build from nested rows of quaternion-like entries."""
        return cls([[tuple(Quaternion.coerce(e)) for e in row] for row in rows])

    @classmethod
    def real(cls, m) -> "QMatrix":
        m = np.atleast_2d(np.asarray(m, dtype=float))
        d = np.zeros(m.shape + (4,))
        d[..., 0] = m
        return cls(d)

    @classmethod
    def diag(cls, entries: Sequence) -> "QMatrix":
        n = len(entries)
        d = np.zeros((n, n, 4))
        for i, e in enumerate(entries):
            d[i, i] = Quaternion.coerce(e)
        return cls(d)

    @classmethod
    def vstack(cls, blocks: Sequence["QMatrix"]) -> "QMatrix":
        return cls(np.concatenate([b.data for b in blocks], axis=0))

    @classmethod
    def hstack(cls, blocks: Sequence["QMatrix"]) -> "QMatrix":
        return cls(np.concatenate([b.data for b in blocks], axis=1))

    @classmethod
    def block(cls, grid: Sequence[Sequence["QMatrix"]]) -> "QMatrix":
        return cls.vstack([cls.hstack(row) for row in grid])

    # basic properties ---------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape[0], self.data.shape[1]

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def __getitem__(self, idx):
        i, j = idx
        if isinstance(i, slice) or isinstance(j, slice):
            i = i if isinstance(i, slice) else slice(i, i + 1)
            j = j if isinstance(j, slice) else slice(j, j + 1)
            return QMatrix(self.data[i, j])
        return Quaternion.coerce(self.data[i, j])

    def __repr__(self):
        return f"QMatrix(rows={self.rows}, cols={self.cols})"

    def __eq__(self, other):
        return isinstance(other, QMatrix) and np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash((self.shape, self.data.tobytes()))

    # arithmetic ---------------------------------------------------------
    def _check_same(self, other: "QMatrix") -> None:
        if self.shape != other.shape:
            raise ShapeMismatch(f"shapes {self.shape} and {other.shape} differ")

    def __add__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        self._check_same(other)
        return QMatrix(self.data + other.data)

    def __sub__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        self._check_same(other)
        return QMatrix(self.data - other.data)

    def __neg__(self):
        return QMatrix(-self.data)

    def __mul__(self, other):
        """Scalar multiplication from the right: ``M * q`` multiplies each entry by q."""
        if isinstance(other, (int, float, np.floating, np.integer)):
            return QMatrix(self.data * float(other))
        if isinstance(other, Quaternion):
            return QMatrix(qmul(self.data, np.asarray(other)))
        return NotImplemented

    def __rmul__(self, other):
        """Scalar multiplication from the left: ``q * M``."""
        if isinstance(other, (int, float, np.floating, np.integer)):
            return QMatrix(self.data * float(other))
        if isinstance(other, Quaternion):
            return QMatrix(qmul(np.asarray(other), self.data))
        return NotImplemented

    def __matmul__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        return QMatrix(matmul_array(self.data, other.data))

    def adjoint(self) -> "QMatrix":
        return QMatrix(qconj(np.swapaxes(self.data, 0, 1)))

    @property
    def H(self) -> "QMatrix":
        return self.adjoint()

    def abs(self) -> np.ndarray:
        """Entrywise modulus as a real array."""
        return np.sqrt(qabs2(self.data))

    def max_abs(self) -> float:
        return float(self.abs().max()) if self.data.size else 0.0

    def fro(self) -> float:
        return float(np.sqrt(np.sum(self.data ** 2)))

    def opnorm(self) -> float:
        """Spectral norm, via the complex adjoint representation."""
        return float(np.linalg.norm(complexify(self), 2)) if self.data.size else 0.0

    def is_real(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.data[..., 1:]) <= tol))

    # serialization ------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "data": self.data.reshape(-1, 4).tolist(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "QMatrix":
        rows, cols = int(obj["rows"]), int(obj["cols"])
        flat = np.asarray(obj["data"], dtype=float).reshape(-1, 4)
        if flat.shape[0] != rows * cols:
            raise ShapeMismatch(f"{flat.shape[0]} entries do not fill a {rows}x{cols} matrix")
        return cls(flat.reshape(rows, cols, 4))


def matmul_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Quaternionic matrix product on raw ``(..., n, k, 4) x (..., k, m, 4)`` arrays."""
    # sum over the shared index of the entrywise Hamilton products
    return qmul(a[..., :, :, None, :], b[..., None, :, :, :]).sum(axis=-3)


def complexify(m: QMatrix) -> np.ndarray:
    """Complex 2n x 2m adjoint representation, using the e1-slice.

    Each entry ``q = a + b e2`` with ``a = w + x i`` and ``b = y + z i`` becomes
    the block ``[[a, b], [-conj(b), conj(a)]]``.
    """
    d = m.data
    a = d[..., 0] + 1j * d[..., 1]
    b = d[..., 2] + 1j * d[..., 3]
    r, c = m.shape
    out = np.empty((2 * r, 2 * c), dtype=complex)
    out[0::2, 0::2] = a
    out[0::2, 1::2] = b
    out[1::2, 0::2] = -np.conj(b)
    out[1::2, 1::2] = np.conj(a)
    return out


def decomplexify(z: np.ndarray) -> QMatrix:
    """Inverse of :func:`complexify` (reads the even-row blocks only)."""
    a = z[0::2, 0::2]
    b = z[0::2, 1::2]
    return QMatrix(np.stack([a.real, a.imag, b.real, b.imag], axis=-1))


def rank1_spectral(v: QMatrix, f: Callable[[float], float], tol: float = 1e-12) -> QMatrix:
    """Closed form of ``f(I - v* v)`` for a row ``v`` with ``s = v v* < 1``.

    ``v* v`` is rank one with eigenvalue ``s`` on its range, so
    ``f(I - v*v) = f(1) I + (f(1 - s) - f(1)) / s * v*v``.
    """
    if v.rows != 1:
        raise ShapeMismatch("rank1_spectral expects a single-row matrix")
    n = v.cols
    s = float(np.sum(v.data ** 2))
    if s < -tol or s >= 1.0:
        raise DomainError(f"v v* = {s} must lie in [0, 1)")
    f1 = float(f(1.0))
    if s == 0.0:
        return QMatrix.identity(n) * f1
    coef = (float(f(1.0 - s)) - f1) / s
    return QMatrix.identity(n) * f1 + (v.adjoint() @ v) * coef


def real_embedding(m: QMatrix) -> np.ndarray:
    """Real symmetric 4n x 4n matrix sharing the spectrum of ``complexify(m)``."""
    z = complexify(m)
    return np.block([[z.real, -z.imag], [z.imag, z.real]])


def jacobi_eigvalsh(a: np.ndarray, threshold: float = JACOBI_THRESHOLD,
                    max_sweeps: int = JACOBI_MAX_SWEEPS) -> np.ndarray:
    """Eigenvalues of a real symmetric matrix by the cyclic Jacobi method.

    Sweeps stop once the off-diagonal Frobenius norm falls below
    ``threshold * ||a||_F``.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ShapeMismatch("jacobi_eigvalsh expects a square matrix")
    scale = np.linalg.norm(a)
    if n < 2 or scale == 0.0:
        return np.sort(np.diag(a))
    for _ in range(max_sweeps):
        off = np.sqrt(max(np.sum(a * a) - np.sum(np.diag(a) ** 2), 0.0))
        if off <= threshold * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta  # theta^2 would overflow; this is the limit
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
    return np.sort(np.diag(a))


def hermitian_defect(m: QMatrix) -> float:
    return (m - m.adjoint()).max_abs()


def quat_eigvalsh(m: QMatrix) -> np.ndarray:
    """Right eigenvalues of a Hermitian quaternionic matrix, with multiplicity.

    Each eigenvalue appears four times in the real embedding; one copy per
    group is returned.
    """
    ev = jacobi_eigvalsh(real_embedding(m))
    return ev[::4]


def is_psd(m: QMatrix, tol: float = 1e-10) -> bool:
    if m.rows != m.cols:
        raise ShapeMismatch("is_psd expects a square matrix")
    scale = max(1.0, m.max_abs())
    if hermitian_defect(m) > tol * scale:
        raise NotHermitian(f"matrix deviates from Hermitian by {hermitian_defect(m):.3e}")
    return bool(quat_eigvalsh(m).min() >= -tol)


def min_eigenvalue(m: QMatrix) -> float:
    return float(quat_eigvalsh(m).min())


def qsolve(a: QMatrix, b: QMatrix, pivot_tol: float = 1e-12) -> QMatrix:
    """Solve ``a X = b`` by Gauss-Jordan elimination with partial pivoting.

    Row operations multiply from the left, which is what keeps the solution
    correct over the non-commutative entries.  A pivot whose modulus is below
    ``pivot_tol`` times the largest modulus in its row raises SingularPencil.
    """
    n = a.rows
    if a.cols != n:
        raise ShapeMismatch("qsolve expects a square system")
    if b.rows != n:
        raise ShapeMismatch(f"right-hand side has {b.rows} rows, expected {n}")
    A = np.array(a.data)
    B = np.array(b.data)
    for k in range(n):
        mods = np.sqrt(qabs2(A[k:, k]))
        p = k + int(np.argmax(mods))
        row_scale = float(np.sqrt(qabs2(A[p])).max())
        if mods[p - k] <= pivot_tol * max(row_scale, 1e-300):
            raise SingularPencil(f"no usable pivot in column {k}")
        if p != k:
            A[[k, p]] = A[[p, k]]
            B[[k, p]] = B[[p, k]]
        piv_inv = np.asarray(quat_inv(A[k, k], eps=0.0))
        A[k] = qmul(piv_inv, A[k])
        B[k] = qmul(piv_inv, B[k])
        for i in range(n):
            if i == k:
                continue
            factor = A[i, k].copy()
            if not factor.any():
                continue
            A[i] -= qmul(factor, A[k])
            B[i] -= qmul(factor, B[k])
    return QMatrix(B)


def qinv(a: QMatrix, pivot_tol: float = 1e-12) -> QMatrix:
    return qsolve(a, QMatrix.identity(a.rows), pivot_tol)
