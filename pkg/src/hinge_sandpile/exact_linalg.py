"""Exact integer / rational linear algebra on small dense matrices.

Everything here works on Python ints and ``fractions.Fraction``; there is no
floating point anywhere. Sizes of interest are a few dozen rows, so the
algorithms are the plain cubic ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class IntegerMatrix:
    """Immutable dense matrix of Python ints."""

    __slots__ = ("_rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable[int]], ncols: int | None = None):
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(data[0]) if data else 0
        if any(len(r) != ncols for r in data):
            raise ValueError("ragged matrix")
        self._rows = data
        self.nrows = len(data)
        self.ncols = ncols

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def diagonal(cls, diag: Sequence[int]) -> "IntegerMatrix":
        n = len(diag)
        return cls([[diag[i] if i == j else 0 for j in range(n)] for i in range(n)], n)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, idx):
        i, j = idx
        return self._rows[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self._rows[i]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._rows]

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(zip(*self._rows), self.nrows) if self.nrows else IntegerMatrix([], 0)

    def __eq__(self, other):
        if not isinstance(other, IntegerMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self.shape, self._rows))

    def __neg__(self):
        return IntegerMatrix([[-x for x in r] for r in self._rows], self.ncols)

    def __matmul__(self, other):
        if isinstance(other, IntegerMatrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            cols = list(zip(*other._rows)) if other.nrows else [()] * other.ncols
            return IntegerMatrix(
                [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self._rows], other.ncols
            )
        vec = list(other)
        if len(vec) != self.ncols:
            raise ValueError(f"shape mismatch {self.shape} @ vector of length {len(vec)}")
        return tuple(sum(a * b for a, b in zip(r, vec)) for r in self._rows)

    def __repr__(self):
        return f"IntegerMatrix({self.tolist()!r})"


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ M @ V == S`` with ``U``, ``V`` unimodular and ``S`` diagonal."""

    U: IntegerMatrix
    S: IntegerMatrix
    V: IntegerMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.S[i, i] for i in range(min(self.S.shape)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def _as_matrix(M) -> IntegerMatrix:
    return M if isinstance(M, IntegerMatrix) else IntegerMatrix(M)


def smith_normal_form(M) -> SmithDecomposition:
    """Smith normal form with transforms.

    Pivoting always picks the nonzero entry of least absolute value in the
    active block, ties broken by row then column, so output is a deterministic
    function of the input.
    """
    M = _as_matrix(M)
    m, n = M.shape
    A = M.tolist()
    U = IntegerMatrix.identity(m).tolist()
    V = IntegerMatrix.identity(n).tolist()

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        if q:
            A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
            U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst += q * col_src
        if q:
            for r in A:
                r[dst] += q * r[src]
            for r in V:
                r[dst] += q * r[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                row = A[i]
                for j in range(t, n):
                    x = row[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            _, pi, pj = best
            swap_rows(t, pi)
            swap_cols(t, pj)
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    clean = clean and A[t][j] == 0
            if not clean:
                continue
            # pivot isolated; enforce divisibility of the remaining block
            bad = next(
                (i for i in range(t + 1, m) if any(A[i][j] % p for j in range(t + 1, n))),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return SmithDecomposition(IntegerMatrix(U, m), IntegerMatrix(A, n), IntegerMatrix(V, n))


def invariant_factors_of(M) -> tuple[int, ...]:
    """Diagonal of the Smith form (units and zeros included)."""
    return smith_normal_form(M).diagonal


def determinant(M) -> int:
    """Bareiss fraction-free elimination."""
    M = _as_matrix(M)
    n, c = M.shape
    if n != c:
        raise ValueError(f"determinant of non-square {M.shape} matrix")
    if n == 0:
        return 1
    A = M.tolist()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return sign * A[n - 1][n - 1]


def delete_row_col(M, i: int) -> IntegerMatrix:
    M = _as_matrix(M)
    n, c = M.shape
    if n != c:
        raise ValueError("delete_row_col needs a square matrix")
    if not 0 <= i < n:
        raise IndexError(f"index {i} out of range for {n}x{n} matrix")
    return IntegerMatrix(
        [[x for j, x in enumerate(M.row(r)) if j != i] for r in range(n) if r != i], n - 1
    )


def solve_integral(M, b: Sequence[int], smith: SmithDecomposition | None = None):
    """Some integer ``x`` with ``M @ x == b``, or ``None`` if there is none.

    A precomputed decomposition of ``M`` can be passed to skip the Smith form.
    """
    M = _as_matrix(M)
    b = [int(x) for x in b]
    if len(b) != M.nrows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {M.nrows}")
    D = smith if smith is not None else smith_normal_form(M)
    c = D.U @ b
    diag = D.diagonal
    y = [0] * M.ncols
    for i, ci in enumerate(c):
        s = diag[i] if i < len(diag) else 0
        if s == 0:
            if ci != 0:
                return None
        else:
            q, r = divmod(ci, s)
            if r:
                return None
            y[i] = q
    return D.V @ y


def _echelon(A: list[list[int]], ncols: int) -> list[int]:
    """Fraction-free forward elimination in place; returns pivot columns."""
    pivots = []
    r = 0
    prev = 1
    m = len(A)
    for col in range(ncols):
        piv = next((i for i in range(r, m) if A[i][col]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        p = A[r][col]
        for i in range(r + 1, m):
            a = A[i][col]
            A[i] = [(x * p - a * y) // prev for x, y in zip(A[i], A[r])]
        prev = p
        pivots.append(col)
        r += 1
        if r == m:
            break
    return pivots


def solve_rational_affine(M, b: Sequence[int]):
    """Rational solution set of ``M @ x == b``.

    Returns ``(particular, kernel_basis)`` with free variables set to zero in
    the particular solution, or ``None`` when the system is inconsistent.
    """
    M = _as_matrix(M)
    b = [int(x) for x in b]
    m, n = M.shape
    if len(b) != m:
        raise ValueError(f"right-hand side has length {len(b)}, expected {m}")
    A = [list(M.row(i)) + [b[i]] for i in range(m)]
    pivots = _echelon(A, n)
    rank = len(pivots)
    if any(A[i][n] for i in range(rank, m)):
        return None
    free = [j for j in range(n) if j not in set(pivots)]

    def back_substitute(rhs_col: list[int], fixed: dict[int, int]) -> tuple[Fraction, ...]:
        x = [Fraction(0)] * n
        for j, val in fixed.items():
            x[j] = Fraction(val)
        for r in range(rank - 1, -1, -1):
            pc = pivots[r]
            s = Fraction(rhs_col[r]) - sum(A[r][j] * x[j] for j in range(pc + 1, n) if A[r][j])
            x[pc] = s / A[r][pc]
        return tuple(x)

    particular = back_substitute([A[r][n] for r in range(rank)], {})
    kernel = [back_substitute([0] * rank, {f: 1}) for f in free]
    return particular, kernel
