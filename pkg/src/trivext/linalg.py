"""Exact dense linear algebra over a prime field F_p.

Matrices are plain ``numpy`` int64 arrays holding residues in ``[0, p)``.
Vectors are columns; a matrix acts on the left.  Tensor products use the
Kronecker convention where the left factor is the slow index, i.e. the
basis vector ``e_i (x) e_j`` of ``F^a (x) F^b`` sits at position
``i * b + j``.  This is exactly ``numpy.kron``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

Mat = np.ndarray

_INT64_MAX = (1 << 63) - 1


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    q = 3
    while q * q <= p:
        if p % q == 0:
            return False
        q += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field F_p for a prime ``p < 2**31``."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or isinstance(self.p, bool):
            raise TypeError(f"modulus must be an integer, got {self.p!r}")
        if not 2 <= self.p < 2**31:
            raise ValueError(f"modulus {self.p} outside [2, 2**31)")
        if not _is_prime(int(self.p)):
            raise ValueError(f"modulus {self.p} is not prime")
        object.__setattr__(self, "p", int(self.p))

    # -- construction -----------------------------------------------------

    def mat(self, data, shape=None) -> Mat:
        a = np.asarray(data, dtype=np.int64)
        if shape is not None:
            a = a.reshape(shape)
        return np.mod(a, self.p)

    def zeros(self, rows: int, cols: int) -> Mat:
        return np.zeros((rows, cols), dtype=np.int64)

    def eye(self, n: int) -> Mat:
        return np.eye(n, dtype=np.int64)

    def inv_scalar(self, a: int) -> int:
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, -1, self.p)

    # -- arithmetic -------------------------------------------------------

    def matmul(self, a: Mat, b: Mat) -> Mat:
        """Product ``a @ b`` reduced mod p, without int64 overflow."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        inner = a.shape[-1]
        step = max(1, _INT64_MAX // ((self.p - 1) ** 2 or 1))
        if inner <= step:
            return np.mod(a @ b, self.p)
        out = np.zeros(a.shape[:-1] + b.shape[1:], dtype=np.int64)
        for start in range(0, inner, step):
            stop = start + step
            out = np.mod(out + np.mod(a[..., start:stop] @ b[start:stop], self.p), self.p)
        return out

    def mm(self, *mats: Mat) -> Mat:
        out = mats[0]
        for m in mats[1:]:
            out = self.matmul(out, m)
        return np.mod(out, self.p)

    def kron(self, a: Mat, b: Mat) -> Mat:
        # entries < p each, so products < 2**62
        return np.mod(np.kron(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)), self.p)

    # -- elimination ------------------------------------------------------

    def rref(self, m: Mat, pivot_cols: int | None = None) -> tuple[Mat, int, tuple[int, ...]]:
        """Reduced row-echelon form of ``m``.

        Pivots are taken at the first row with a nonzero entry in each column,
        so the result is deterministic.  ``pivot_cols`` limits the columns
        that may carry pivots (used for augmented systems).

        Returns ``(R, rank, pivots)``.
        """
        p = self.p
        a = np.mod(np.array(m, dtype=np.int64), p)
        if a.ndim != 2:
            raise ValueError("rref expects a 2-d matrix")
        rows, cols = a.shape
        limit = cols if pivot_cols is None else pivot_cols
        pivots: list[int] = []
        r = 0
        for c in range(limit):
            if r == rows:
                break
            nz = np.flatnonzero(a[r:, c])
            if nz.size == 0:
                continue
            k = r + int(nz[0])
            if k != r:
                a[[r, k]] = a[[k, r]]
            lead = int(a[r, c])
            if lead != 1:
                a[r] = (a[r] * pow(lead, -1, p)) % p
            colv = a[:, c].copy()
            colv[r] = 0
            others = np.flatnonzero(colv)
            if others.size:
                a[others] = (a[others] - np.outer(colv[others], a[r])) % p
            pivots.append(c)
            r += 1
        return a, r, tuple(pivots)

    def rank(self, m: Mat) -> int:
        m = np.asarray(m)
        if m.size == 0:
            return 0
        # eliminate along the shorter side
        if m.shape[0] > m.shape[1]:
            m = m.T
        return self.rref(m)[1]

    def kernel(self, m: Mat) -> "Subspace":
        """The subspace ``{v : m v = 0}``."""
        m = np.asarray(m, dtype=np.int64)
        cols = m.shape[1]
        if m.shape[0] == 0:
            return Subspace.full(self, cols)
        r, rank, pivots = self.rref(m)
        free = [c for c in range(cols) if c not in set(pivots)]
        if not free:
            return Subspace.zero(self, cols)
        basis = np.zeros((len(free), cols), dtype=np.int64)
        for k, fcol in enumerate(free):
            basis[k, fcol] = 1
            for i, pc in enumerate(pivots):
                basis[k, pc] = (-r[i, fcol]) % self.p
        return Subspace.span(self, basis, cols)

    def solve(self, m: Mat, b: Mat) -> Mat | None:
        """Some ``X`` with ``m X = b``, or ``None`` if the system is inconsistent.

        Free variables are set to zero.
        """
        m = np.asarray(m, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        vector = b.ndim == 1
        if vector:
            b = b.reshape(-1, 1)
        if m.shape[0] != b.shape[0]:
            raise ValueError(f"row mismatch: {m.shape} vs {b.shape}")
        cols = m.shape[1]
        aug = np.hstack([m, b]) if m.shape[0] else np.zeros((0, cols + b.shape[1]), dtype=np.int64)
        r, rank, pivots = self.rref(aug, pivot_cols=cols)
        if rank < r.shape[0] and np.any(r[rank:, cols:]):
            return None
        x = np.zeros((cols, b.shape[1]), dtype=np.int64)
        for i, pc in enumerate(pivots):
            x[pc] = r[i, cols:]
        return x[:, 0] if vector else x

    def inverse(self, m: Mat) -> Mat | None:
        m = np.asarray(m, dtype=np.int64)
        n = m.shape[0]
        if m.shape != (n, n):
            return None
        r, rank, _ = self.rref(np.hstack([m, self.eye(n)]), pivot_cols=n)
        if rank < n:
            return None
        return r[:, n:]

    def is_invertible(self, m: Mat) -> bool:
        m = np.asarray(m)
        return m.ndim == 2 and m.shape[0] == m.shape[1] and self.rank(m) == m.shape[0]

    def quotient_map(self, ambient_dim: int, sub: "Subspace") -> tuple[Mat, Mat]:
        """A surjection ``proj`` with kernel ``sub`` and a section of it.

        The quotient is coordinatised by the non-pivot coordinates of ``sub``'s
        echelon basis; ``section`` is the corresponding coordinate inclusion.
        """
        if sub.ambient_dim != ambient_dim:
            raise ValueError("ambient dimension mismatch")
        piv = sub.pivots
        keep = [c for c in range(ambient_dim) if c not in set(piv)]
        proj = np.zeros((len(keep), ambient_dim), dtype=np.int64)
        section = np.zeros((ambient_dim, len(keep)), dtype=np.int64)
        for k, c in enumerate(keep):
            proj[k, c] = 1
            section[c, k] = 1
        if keep:
            for i, pc in enumerate(piv):
                proj[:, pc] = (-sub.basis[i, keep]) % self.p
        return proj, section

    # -- search -----------------------------------------------------------

    def combinations(self, basis: list[Mat], budget: int, rng: np.random.Generator):
        """Yield linear combinations of ``basis`` for witness searches.

        Every nonzero combination is produced when ``p**len(basis) <= budget``;
        otherwise ``budget`` pseudo-random combinations from ``rng``.  The
        generator's ``exhaustive`` flag is reported by :meth:`search_space`.
        """
        d = len(basis)
        if d == 0:
            return
        stack = np.stack([np.asarray(b, dtype=np.int64) for b in basis])
        if self.p**d <= budget:
            for coeffs in itertools.product(range(self.p), repeat=d):
                if any(coeffs):
                    yield np.mod(np.tensordot(np.array(coeffs, dtype=np.int64), stack, axes=1), self.p)
        else:
            for _ in range(budget):
                coeffs = rng.integers(0, self.p, size=d)
                yield np.mod(np.tensordot(coeffs, stack, axes=1), self.p)

    def search_space(self, dim: int, budget: int) -> bool:
        """True when a search over a ``dim``-dimensional space is exhaustive."""
        return self.p**dim <= budget


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of ``F_p^ambient_dim`` held by a reduced echelon basis (rows)."""

    field: PrimeField
    ambient_dim: int
    basis: Mat
    pivots: tuple[int, ...] = field(default=())

    @classmethod
    def span(cls, fld: PrimeField, vectors, ambient_dim: int) -> "Subspace":
        v = np.asarray(vectors, dtype=np.int64)
        if v.size == 0 or ambient_dim == 0:
            return cls.zero(fld, ambient_dim)
        v = v.reshape(-1, ambient_dim)
        r, rank, piv = fld.rref(v)
        return cls(fld, ambient_dim, r[:rank], piv)

    @classmethod
    def column_span(cls, fld: PrimeField, m: Mat) -> "Subspace":
        m = np.asarray(m, dtype=np.int64)
        return cls.span(fld, m.T, m.shape[0])

    @classmethod
    def zero(cls, fld: PrimeField, ambient_dim: int) -> "Subspace":
        return cls(fld, ambient_dim, np.zeros((0, ambient_dim), dtype=np.int64), ())

    @classmethod
    def full(cls, fld: PrimeField, ambient_dim: int) -> "Subspace":
        return cls(fld, ambient_dim, np.eye(ambient_dim, dtype=np.int64), tuple(range(ambient_dim)))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def coords(self, v: Mat) -> Mat:
        """Coordinates of vectors (columns of ``v``) lying in this subspace."""
        v = np.asarray(v, dtype=np.int64)
        return v[list(self.pivots)] if v.ndim == 1 else v[list(self.pivots), :]

    def contains(self, v: Mat) -> bool:
        v = np.mod(np.asarray(v, dtype=np.int64), self.field.p)
        cols = v.reshape(self.ambient_dim, -1)
        back = self.field.matmul(self.basis.T, self.coords(cols))
        return bool(np.array_equal(back, cols))

    def inclusion(self) -> Mat:
        """``ambient_dim x dim`` matrix whose columns are the basis."""
        return self.basis.T.copy()

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.field, np.vstack([self.basis, other.basis]), self.ambient_dim)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.ambient_dim == other.ambient_dim
            and self.pivots == other.pivots
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.pivots, self.basis.tobytes()))


def block_diag(*mats: Mat) -> Mat:
    rows = sum(m.shape[0] for m in mats)
    cols = sum(m.shape[1] for m in mats)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for m in mats:
        out[r : r + m.shape[0], c : c + m.shape[1]] = m
        r += m.shape[0]
        c += m.shape[1]
    return out


def operator_matrix(fld: PrimeField, fn, in_shape: tuple[int, int]) -> Mat:
    """Matrix of a linear map on ``in_shape`` matrices, in row-major vec coordinates.

    ``fn`` must be linear; it is evaluated on each matrix unit.
    """
    rows, cols = in_shape
    columns = []
    for idx in range(rows * cols):
        e = np.zeros(rows * cols, dtype=np.int64)
        e[idx] = 1
        columns.append(np.mod(np.asarray(fn(e.reshape(rows, cols)), dtype=np.int64), fld.p).ravel())
    if not columns:
        return np.zeros((0, 0), dtype=np.int64)
    return np.stack(columns, axis=1)


def solution_basis(fld: PrimeField, equations: Mat, shape: tuple[int, int]) -> list[Mat]:
    """Basis of ``shape`` matrices whose row-major vec lies in ``ker(equations)``."""
    ker = fld.kernel(equations)
    return [row.reshape(shape) for row in ker.basis]
