"""Exact arithmetic over the prime field F_p.

Scalars are plain Python ints reduced into [0, p).  Matrices are stored
sparse (scipy CSR, canonical: sorted indices, no stored zeros) and switch to
a dense int64 array once the fill ratio passes ``DENSE_FILL``.  Row reduction
always runs dense.
"""

from __future__ import annotations

from functools import lru_cache

import numba
import numpy as np
import scipy.sparse as sp

DENSE_FILL = 0.25


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def check_modulus(p: int) -> int:
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)) or p <= 3:
        raise FieldError("p must be prime > 3")
    return int(p)


@lru_cache(maxsize=None)
def inverse_table(p: int) -> np.ndarray:
    """inv[a] = a^{-1} mod p, with inv[0] = 0."""
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, -1, p)
    return inv


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("0 has no inverse mod %d" % p)
    return pow(a, -1, p)


def binom_mod_p(n: int, k: int, p: int) -> int:
    """C(n, k) mod p by Lucas' theorem (product of digit binomials)."""
    if k < 0 or n < 0 or k > n:
        return 0
    result = 1
    while n or k:
        ni, ki = n % p, k % p
        if ki > ni:
            return 0
        # small binomial on digits < p, exact then reduced
        num = den = 1
        for i in range(ki):
            num = num * (ni - i) % p
            den = den * (i + 1) % p
        result = result * num * pow(den, -1, p) % p
        n //= p
        k //= p
    return result


# ---------------------------------------------------------------------------
# matrices


class MatrixGF:
    """Immutable matrix over F_p, sparse by default."""

    __slots__ = ("p", "shape", "_sp", "_dn")

    def __init__(self, data, p: int):
        self.p = int(p)
        if sp.issparse(data):
            m = sp.csr_matrix(data, dtype=np.int64)
            m.data %= self.p
            m.eliminate_zeros()
            m.sort_indices()
            m.sum_duplicates()
            self.shape = m.shape
            if _fill(m) > DENSE_FILL:
                self._sp, self._dn = None, m.toarray()
            else:
                self._sp, self._dn = m, None
        else:
            a = np.asarray(data, dtype=np.int64) % self.p
            if a.ndim != 2:
                raise ValueError("matrix data must be 2-dimensional")
            self.shape = a.shape
            if _fill_dense(a) > DENSE_FILL:
                self._sp, self._dn = None, a
            else:
                self._sp, self._dn = sp.csr_matrix(a), None

    # constructors ---------------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> "MatrixGF":
        return cls(sp.csr_matrix((rows, cols), dtype=np.int64), p)

    @classmethod
    def identity(cls, n: int, p: int) -> "MatrixGF":
        return cls(sp.identity(n, dtype=np.int64, format="csr"), p)

    @classmethod
    def from_triplets(cls, rows: int, cols: int, triplets, p: int) -> "MatrixGF":
        """Duplicate (row, col) entries are summed."""
        triplets = list(triplets)
        if not triplets:
            return cls.zeros(rows, cols, p)
        r, c, v = zip(*triplets)
        m = sp.coo_matrix(
            (np.asarray(v, dtype=np.int64) % p, (np.asarray(r), np.asarray(c))),
            shape=(rows, cols),
        )
        return cls(m.tocsr(), p)

    # views ------------------------------------------------------------------

    @property
    def is_dense(self) -> bool:
        return self._dn is not None

    @property
    def nnz(self) -> int:
        if self._dn is not None:
            return int(np.count_nonzero(self._dn))
        return int(self._sp.nnz)

    def to_dense(self) -> np.ndarray:
        if self._dn is not None:
            return self._dn.copy()
        return self._sp.toarray()

    def to_csr(self) -> sp.csr_matrix:
        if self._sp is not None:
            return self._sp.copy()
        return sp.csr_matrix(self._dn)

    def triplets(self) -> list[tuple[int, int, int]]:
        """Nonzero entries as (row, col, value), sorted row-major."""
        m = self._sp if self._sp is not None else sp.csr_matrix(self._dn)
        coo = m.tocoo()
        order = np.lexsort((coo.col, coo.row))
        return [
            (int(coo.row[i]), int(coo.col[i]), int(coo.data[i])) for i in order
        ]

    def __getitem__(self, rc):
        r, c = rc
        if self._dn is not None:
            return int(self._dn[r, c])
        return int(self._sp[r, c])

    # arithmetic -------------------------------------------------------------

    def _raw(self):
        return self._dn if self._dn is not None else self._sp

    def _check(self, other: "MatrixGF"):
        if other.p != self.p:
            raise FieldError("moduli differ: %d vs %d" % (self.p, other.p))

    def __matmul__(self, other):
        if isinstance(other, MatrixGF):
            self._check(other)
            if self.shape[1] != other.shape[0]:
                raise ValueError(
                    "dimension mismatch %s @ %s" % (self.shape, other.shape)
                )
            a, b = self._raw(), other._raw()
            if self._dn is not None and other._dn is not None:
                return MatrixGF(a @ b % self.p, self.p)
            out = a @ b
            if sp.issparse(out):
                return MatrixGF(out, self.p)
            return MatrixGF(np.asarray(out) % self.p, self.p)
        v = np.asarray(other, dtype=np.int64)
        return np.asarray(self._raw() @ v).astype(np.int64) % self.p

    def __add__(self, other: "MatrixGF") -> "MatrixGF":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError("dimension mismatch")
        if self._dn is None and other._dn is None:
            return MatrixGF(self._sp + other._sp, self.p)
        return MatrixGF(self.to_dense() + other.to_dense(), self.p)

    def __neg__(self) -> "MatrixGF":
        return self.scale(-1)

    def __sub__(self, other: "MatrixGF") -> "MatrixGF":
        return self + (-other)

    def scale(self, c: int) -> "MatrixGF":
        c %= self.p
        if self._dn is not None:
            return MatrixGF(self._dn * c, self.p)
        return MatrixGF(self._sp * c, self.p)

    @property
    def T(self) -> "MatrixGF":
        if self._dn is not None:
            return MatrixGF(self._dn.T.copy(), self.p)
        return MatrixGF(self._sp.T.tocsr(), self.p)

    def is_zero(self) -> bool:
        return self.nnz == 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatrixGF):
            return NotImplemented
        return (
            self.p == other.p
            and self.shape == other.shape
            and (self - other).is_zero()
        )

    __hash__ = None

    def __repr__(self):
        kind = "dense" if self.is_dense else "sparse"
        return "MatrixGF(%dx%d over F_%d, nnz=%d, %s)" % (
            self.shape[0], self.shape[1], self.p, self.nnz, kind)


def _fill(m) -> float:
    n = m.shape[0] * m.shape[1]
    return m.nnz / n if n else 0.0


def _fill_dense(a: np.ndarray) -> float:
    return np.count_nonzero(a) / a.size if a.size else 0.0


def as_array(M, p: int | None = None) -> np.ndarray:
    if isinstance(M, MatrixGF):
        return M.to_dense()
    a = np.asarray(M, dtype=np.int64)
    return a % p if p is not None else a


# ---------------------------------------------------------------------------
# row reduction


@numba.njit(cache=True)
def _rref_inplace(R, p, inv):
    rows, cols = R.shape
    pivots = np.empty(min(rows, cols), dtype=np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        i = r
        while i < rows and R[i, c] == 0:
            i += 1
        if i == rows:
            continue
        if i != r:
            for j in range(c, cols):
                R[r, j], R[i, j] = R[i, j], R[r, j]
        s = inv[R[r, c]]
        for j in range(c, cols):
            R[r, j] = R[r, j] * s % p
        for k in range(rows):
            f = R[k, c]
            if k != r and f != 0:
                for j in range(c, cols):
                    R[k, j] = (R[k, j] - f * R[r, j]) % p
        pivots[r] = c
        r += 1
    return pivots[:r]


def rref_array(A: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of a dense array; returns (R, pivot_cols)."""
    R = np.ascontiguousarray(np.array(A, dtype=np.int64) % p)
    if R.size == 0:
        return R, []
    piv = _rref_inplace(R, p, inverse_table(p))
    return R, [int(c) for c in piv]


def rref(M: MatrixGF) -> tuple[MatrixGF, int, list[int]]:
    R, piv = rref_array(M.to_dense(), M.p)
    return MatrixGF(R, M.p), len(piv), piv


def rank(M, p: int | None = None) -> int:
    if isinstance(M, MatrixGF):
        p = M.p
    return len(rref_array(as_array(M), p)[1])


def kernel_array(A: np.ndarray, p: int) -> np.ndarray:
    """Right null space of A; rows of the result form a basis."""
    A = np.asarray(A, dtype=np.int64)
    cols = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    R, piv = rref_array(A, p)
    free = [c for c in range(cols) if c not in set(piv)]
    K = np.zeros((len(free), cols), dtype=np.int64)
    if free:
        K[np.arange(len(free)), free] = 1
        if piv:
            K[:, piv] = (-R[: len(piv)][:, free].T) % p
    return K


def kernel_basis(M: MatrixGF) -> list[np.ndarray]:
    return list(kernel_array(M.to_dense(), M.p))


def matpow(A: MatrixGF, e: int) -> MatrixGF:
    """A**e by repeated squaring."""
    if A.shape[0] != A.shape[1]:
        raise ValueError("matpow needs a square matrix, got %s" % (A.shape,))
    if e < 0:
        raise ValueError("negative exponent")
    result = MatrixGF.identity(A.shape[0], A.p)
    base = A
    while e:
        if e & 1:
            result = result @ base
        e >>= 1
        if e:
            base = base @ base
    return result


def scalar_pow(c: int, e: int, p: int) -> int:
    return pow(c % p, e, p)


class Echelon:
    """Incrementally maintained subspace of F_p^n in reduced echelon form.

    Rows are kept fully reduced, so the coordinates of a vector ``v`` lying in
    the span are just ``v[pivots]``.
    """

    def __init__(self, n: int, p: int):
        self.n, self.p = n, p
        self._rows = np.zeros((min(n, 16), n), dtype=np.int64)
        self.pivots: list[int] = []
        self._inv = inverse_table(p)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    @property
    def rows(self) -> np.ndarray:
        return self._rows[: self.dim]

    def reduce(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64) % self.p
        if not self.pivots:
            return v
        if v.ndim == 1:
            return (v - mulmod(v[None, self.pivots], self.rows, self.p)[0]) % self.p
        return (v - mulmod(v[:, self.pivots], self.rows, self.p)) % self.p

    def contains(self, v) -> bool:
        return not self.reduce(v).any()

    def insert(self, v) -> bool:
        """Add ``v``; returns False if it was already in the span."""
        w = self.reduce(v)
        nz = np.flatnonzero(w)
        if nz.size == 0:
            return False
        j = int(nz[0])
        w = w * self._inv[w[j]] % self.p
        r = self.dim
        if r:
            col = self._rows[:r, j].copy()
            hit = np.flatnonzero(col)
            if hit.size:
                self._rows[hit] = (self._rows[hit] - np.outer(col[hit], w)) % self.p
        if r == self._rows.shape[0]:
            grow = np.zeros((min(self.n, 2 * r) - r, self.n), dtype=np.int64)
            self._rows = np.vstack([self._rows, grow])
        self._rows[r] = w
        self.pivots.append(j)
        return True

    def insert_many(self, V) -> np.ndarray:
        """Add the rows of V; returns the new echelon rows (possibly none)."""
        V = np.atleast_2d(np.asarray(V, dtype=np.int64))
        R = self.reduce(V) if self.pivots else V % self.p
        R = R[R.any(axis=1)]
        if R.shape[0] == 0:
            return R
        Rr, piv = rref_array(R, self.p)
        new = Rr[: len(piv)]
        r = self.dim
        if r:
            C = self._rows[:r][:, piv]
            if C.any():
                self._rows[:r] = (self._rows[:r] - mulmod(C, new, self.p)) % self.p
        need = r + len(piv)
        if need > self._rows.shape[0]:
            grow = np.zeros((min(self.n, max(need, 2 * r)) - self._rows.shape[0], self.n), dtype=np.int64)
            self._rows = np.vstack([self._rows, grow])
        self._rows[r:need] = new
        self.pivots.extend(int(c) for c in piv)
        return new

    def basis(self) -> np.ndarray:
        """Canonical basis: rows sorted by pivot column."""
        order = np.argsort(self.pivots, kind="stable")
        return self.rows[order].copy()


def mulmod(A, B, p: int) -> np.ndarray:
    """Dense product A @ B mod p.

    Uses float64 BLAS when every partial sum stays below 2^52 (exact), int64
    otherwise.  Sparse operands are accepted on the left.
    """
    if isinstance(A, MatrixGF):
        A = A._raw()
    if isinstance(B, MatrixGF):
        B = B.to_dense()
    if sp.issparse(A):
        return np.asarray(A @ B).astype(np.int64) % p
    inner = A.shape[-1]
    if inner * (p - 1) ** 2 < 2 ** 52:
        out = np.asarray(A, dtype=np.float64) @ np.asarray(B, dtype=np.float64)
        return np.fmod(out, p).astype(np.int64)
    return (np.asarray(A, dtype=np.int64) @ np.asarray(B, dtype=np.int64)) % p


class TrackedEchelon(Echelon):
    """Echelon that also expresses each row through the inserted vectors.

    ``coords(v)`` returns c with v = sum_j c[j] * inserted[j] for v in the span.
    """

    def __init__(self, n: int, p: int):
        super().__init__(n, p)
        self._T = np.zeros((min(n, 16), min(n, 16)), dtype=np.int64)
        self.count = 0

    def coords(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64) % self.p
        r = self.dim
        if r == 0:
            return np.zeros(0, dtype=np.int64)
        return mulmod(v[self.pivots][None, :], self._T[:r, : self.count], self.p)[0]

    def insert(self, v) -> bool:
        v = np.asarray(v, dtype=np.int64) % self.p
        r, m = self.dim, self.count
        coef = v[self.pivots] if r else np.zeros(0, dtype=np.int64)
        w = self.reduce(v)
        nz = np.flatnonzero(w)
        if nz.size == 0:
            return False
        j = int(nz[0])
        inv = self._inv[w[j]]
        w = w * inv % self.p
        if m + 1 > self._T.shape[1] or r + 1 > self._T.shape[0]:
            cap = min(self.n, max(2 * self._T.shape[0], r + 1))
            T = np.zeros((cap, cap), dtype=np.int64)
            T[: self._T.shape[0], : self._T.shape[1]] = self._T
            self._T = T
        trow = np.zeros(self._T.shape[1], dtype=np.int64)
        trow[m] = 1
        if r:
            trow[:m] = (trow[:m] - mulmod(coef[None, :], self._T[:r, :m], self.p)[0]) % self.p
        trow = trow * inv % self.p
        if r:
            col = self._rows[:r, j].copy()
            hit = np.flatnonzero(col)
            if hit.size:
                self._rows[hit] = (self._rows[hit] - np.outer(col[hit], w)) % self.p
                self._T[hit] = (self._T[hit] - np.outer(col[hit], trow)) % self.p
        if r == self._rows.shape[0]:
            grow = np.zeros((min(self.n, 2 * r) - r, self.n), dtype=np.int64)
            self._rows = np.vstack([self._rows, grow])
        self._rows[r] = w
        self._T[r] = trow
        self.pivots.append(j)
        self.count += 1
        return True
