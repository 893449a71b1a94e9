"""
Bit-packed linear algebra over GF(2).

Each matrix row is a Python int whose bit ``j`` holds the entry in column
``j``.  Matrices are capped at 64 columns so that a row fits one machine
word; the elimination loops are written against plain lists of ints so
that hot paths (rank inside search loops) never touch the wrapper class.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionError, LemmaViolation, NotSymmetricError

MAX_COLS = 64


def parity(x: int) -> int:
    return x.bit_count() & 1


@dataclass(frozen=True)
class Gf2Matrix:
    """Immutable 0/1 matrix with one int per row."""

    nrows: int
    ncols: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.ncols > MAX_COLS:
            raise DimensionError(f"at most {MAX_COLS} columns supported, got {self.ncols}")
        if len(self.rows) != self.nrows:
            raise DimensionError(f"expected {self.nrows} rows, got {len(self.rows)}")
        limit = 1 << self.ncols
        for r in self.rows:
            if r < 0 or r >= limit:
                raise DimensionError("row has bits beyond the last column")

    # construction -------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Iterable[int], ncols: int) -> Gf2Matrix:
        rows = tuple(rows)
        return cls(len(rows), ncols, rows)

    @classmethod
    def from_lists(cls, data: Sequence[Sequence[int]]) -> Gf2Matrix:
        nrows = len(data)
        ncols = len(data[0]) if nrows else 0
        rows = []
        for line in data:
            if len(line) != ncols:
                raise DimensionError("ragged matrix")
            r = 0
            for j, x in enumerate(line):
                if x & 1:
                    r |= 1 << j
            rows.append(r)
        return cls(nrows, ncols, tuple(rows))

    @classmethod
    def zeros(cls, nrows: int, ncols: int | None = None) -> Gf2Matrix:
        ncols = nrows if ncols is None else ncols
        return cls(nrows, ncols, (0,) * nrows)

    @classmethod
    def identity(cls, n: int) -> Gf2Matrix:
        return cls(n, n, tuple(1 << i for i in range(n)))

    # access -------------------------------------------------------------

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return (self.rows[i] >> j) & 1

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.ncols)] for r in self.rows]

    def column(self, j: int) -> int:
        """Column ``j`` packed as an int (bit ``i`` = row ``i``)."""
        c = 0
        for i, r in enumerate(self.rows):
            if (r >> j) & 1:
                c |= 1 << i
        return c

    def diagonal(self) -> int:
        """Diagonal packed as an int (bit ``i`` = entry (i, i))."""
        d = 0
        for i in range(min(self.nrows, self.ncols)):
            if (self.rows[i] >> i) & 1:
                d |= 1 << i
        return d

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_symmetric(self) -> bool:
        return self.is_square() and self.rows == transpose_rows(self.rows, self.ncols)

    def is_zero(self) -> bool:
        return not any(self.rows)

    # algebra ------------------------------------------------------------

    @property
    def T(self) -> Gf2Matrix:
        return Gf2Matrix(self.ncols, self.nrows, transpose_rows(self.rows, self.ncols))

    def __add__(self, other: Gf2Matrix) -> Gf2Matrix:
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise DimensionError("shape mismatch in addition")
        return Gf2Matrix(self.nrows, self.ncols, tuple(a ^ b for a, b in zip(self.rows, other.rows)))

    def __matmul__(self, other: Gf2Matrix) -> Gf2Matrix:
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}")
        out = []
        for r in self.rows:
            acc = 0
            k = 0
            while r:
                if r & 1:
                    acc ^= other.rows[k]
                r >>= 1
                k += 1
            out.append(acc)
        return Gf2Matrix(self.nrows, other.ncols, tuple(out))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> Gf2Matrix:
        out = []
        for i in rows:
            r = self.rows[i]
            packed = 0
            for k, j in enumerate(cols):
                if (r >> j) & 1:
                    packed |= 1 << k
            out.append(packed)
        return Gf2Matrix(len(rows), len(cols), tuple(out))

    def permuted(self, perm: Sequence[int]) -> Gf2Matrix:
        """Simultaneous row/column permutation: new index ``k`` is old ``perm[k]``."""
        return self.submatrix(perm, perm)

    def with_diagonal(self, diag: int) -> Gf2Matrix:
        """Copy of a square matrix whose diagonal is replaced by the bits of ``diag``."""
        rows = tuple((r & ~(1 << i)) | (((diag >> i) & 1) << i) for i, r in enumerate(self.rows))
        return Gf2Matrix(self.nrows, self.ncols, rows)

    # text format --------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"m {self.nrows} {self.ncols}"]
        for r in self.rows:
            lines.append("".join("1" if (r >> j) & 1 else "0" for j in range(self.ncols)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Gf2Matrix:
        from .errors import FormatError

        lines = [ln.strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln and not ln.startswith("#")]
        if not lines:
            raise FormatError("empty matrix text", 1)
        head = lines[0].split()
        if len(head) != 3 or head[0] != "m":
            raise FormatError("expected header 'm <nrows> <ncols>'", 1)
        try:
            nrows, ncols = int(head[1]), int(head[2])
        except ValueError:
            raise FormatError("non-integer matrix dimensions", 1) from None
        body = lines[1:]
        if len(body) != nrows:
            raise FormatError(f"expected {nrows} rows, found {len(body)}")
        rows = []
        for k, ln in enumerate(body, start=2):
            if len(ln) != ncols or set(ln) - {"0", "1"}:
                raise FormatError(f"row must be {ncols} characters of 0/1", k)
            rows.append(sum(1 << j for j, ch in enumerate(ln) if ch == "1"))
        return cls(nrows, ncols, tuple(rows))

    def __str__(self):
        return "\n".join("".join("1" if (r >> j) & 1 else "0" for j in range(self.ncols)) for r in self.rows)


def transpose_rows(rows: Sequence[int], ncols: int) -> tuple[int, ...]:
    out = [0] * ncols
    for i, r in enumerate(rows):
        bit = 1 << i
        while r:
            low = r & -r
            out[low.bit_length() - 1] |= bit
            r ^= low
    return tuple(out)


# ---------------------------------------------------------------------------
# elimination kernels on raw row lists


def rank_rows(rows: Iterable[int]) -> int:
    """GF(2) rank of a sequence of packed rows."""
    basis: dict[int, int] = {}
    for r in rows:
        while r:
            low = r & -r
            b = basis.get(low)
            if b is None:
                basis[low] = r
                break
            r ^= b
    return len(basis)


def rank_rows_bounded(rows: Iterable[int], bound: int) -> int | None:
    """Like :func:`rank_rows` but gives up (returns ``None``) once the rank exceeds ``bound``."""
    basis: dict[int, int] = {}
    for r in rows:
        while r:
            low = r & -r
            b = basis.get(low)
            if b is None:
                if len(basis) == bound:
                    return None
                basis[low] = r
                break
            r ^= b
    return len(basis)


def reduce_against(r: int, basis: Sequence[int]) -> int:
    """Reduce ``r`` against a basis in reduced echelon form keyed on lowest set bits."""
    for b in basis:
        if r & b & -b:
            r ^= b
    return r


def insert_reduced(basis: tuple[int, ...], r: int) -> tuple[int, ...]:
    """Add an already-reduced nonzero vector to a reduced echelon basis.

    The result is again fully reduced, so its sorted tuple is a canonical
    name for the span.
    """
    p = r & -r
    return tuple(sorted([b ^ r if b & p else b for b in basis] + [r]))


def rank(M: Gf2Matrix) -> int:
    return rank_rows(M.rows)


def rank_bounded(M: Gf2Matrix, bound: int) -> int | None:
    """Exact rank if it is at most ``bound``, else ``None``."""
    if bound < 0:
        raise ValueError("bound must be non-negative")
    return rank_rows_bounded(M.rows, bound)


def inverse(M: Gf2Matrix) -> Gf2Matrix:
    """Inverse of a square matrix; raises ``ValueError`` if singular."""
    if not M.is_square():
        raise DimensionError("inverse needs a square matrix")
    n = M.nrows
    # augment: low n bits = M, high n bits = identity
    work = [r | (1 << (n + i)) for i, r in enumerate(M.rows)]
    for col in range(n):
        piv = next((i for i in range(col, n) if (work[i] >> col) & 1), None)
        if piv is None:
            raise ValueError("matrix is singular over GF(2)")
        work[col], work[piv] = work[piv], work[col]
        pr = work[col]
        for i in range(n):
            if i != col and (work[i] >> col) & 1:
                work[i] ^= pr
    return Gf2Matrix(n, n, tuple(r >> n for r in work))


def block_compose(A: Gf2Matrix, B: Gf2Matrix, C: Gf2Matrix) -> Gf2Matrix:
    """Assemble the symmetric matrix ``[[A, C], [C^T, B]]``."""
    n, m = A.nrows, B.nrows
    if not A.is_symmetric() or not B.is_symmetric():
        raise NotSymmetricError("diagonal blocks must be symmetric")
    if (C.nrows, C.ncols) != (n, m):
        raise DimensionError(f"off-diagonal block must be {n}x{m}, got {C.nrows}x{C.ncols}")
    if n + m > MAX_COLS:
        raise DimensionError("composed matrix exceeds the column cap")
    Ct = transpose_rows(C.rows, m)
    rows = [A.rows[i] | (C.rows[i] << n) for i in range(n)]
    rows += [Ct[j] | (B.rows[j] << n) for j in range(m)]
    return Gf2Matrix(n + m, n + m, tuple(rows))


def is_staircase(C: Gf2Matrix) -> bool:
    """Columns non-decreasing downward and rows non-increasing rightward."""
    rows = C.rows
    for i in range(1, len(rows)):
        # every 1 in the row above must persist below
        if rows[i - 1] & ~rows[i]:
            return False
    for r in rows:
        # a row must look like 1..10..0: a contiguous block of low bits
        if r & (r + 1):
            return False
    return True


class Conclusion(enum.Enum):
    RANK_UP = "RANK_UP"
    TWIN_COLS = "TWIN_COLS"
    ZERO_LAST_COL = "ZERO_LAST_COL"


def staircase_conclusion(M: Gf2Matrix, n: int, m: int) -> frozenset[Conclusion]:
    """Which disjuncts of the staircase block lemma hold for ``M``.

    ``M`` must be symmetric of size ``n + m`` with a staircase upper-right
    ``n x m`` block and ``m >= rank(A) + 1`` where ``A`` is the leading
    ``n x n`` block.  All disjuncts that hold are reported.
    """
    if (M.nrows, M.ncols) != (n + m, n + m):
        raise DimensionError(f"expected a {n + m}x{n + m} matrix")
    if not M.is_symmetric():
        raise NotSymmetricError("staircase_conclusion needs a symmetric matrix")
    first, second = list(range(n)), list(range(n, n + m))
    A = M.submatrix(first, first)
    B = M.submatrix(second, second)
    C = M.submatrix(first, second)
    if not is_staircase(C):
        raise ValueError("upper-right block is not a staircase matrix")
    rank_a = rank(A)
    if m < rank_a + 1:
        raise ValueError(f"need m >= rank(A) + 1 = {rank_a + 1}, got m = {m}")

    tags = set()
    if rank(M) >= rank_a + 1:
        tags.add(Conclusion.RANK_UP)
    cols = [B.column(j) for j in range(m)]
    if any(cols[j] == cols[j + 1] for j in range(m - 1)):
        tags.add(Conclusion.TWIN_COLS)
    if cols[-1] == 0:
        tags.add(Conclusion.ZERO_LAST_COL)
    if not tags:
        raise LemmaViolation(f"no disjunct holds for\n{M}")
    return frozenset(tags)


# ---------------------------------------------------------------------------
# symmetric congruence


@dataclass(frozen=True)
class CongruenceResult:
    """``transform @ M @ transform.T == I_rank (+) 0`` unless ``alternating``."""

    transform: Gf2Matrix
    rank: int
    alternating: bool


def _form(rows: Sequence[int], x: int, y: int) -> int:
    """Bilinear form x^T M y for packed vectors."""
    acc = 0
    i = 0
    while x:
        if x & 1:
            acc ^= rows[i] & y
        x >>= 1
        i += 1
    return parity(acc)


def congruence_diagonalize(M: Gf2Matrix) -> CongruenceResult:
    """Find an invertible ``P`` with ``P M P^T = I_r (+) 0``.

    Works as Gram-Schmidt over the bilinear form defined by ``M``: vectors
    with ``Q(v) = 1`` are split off one at a time.  When only an
    alternating residual remains, each hyperbolic pair ``(v, w)`` is merged
    with an already split-off unit vector ``p`` into the orthonormal triple
    ``p+v+w, p+v, p+w``.  If there is no unit vector to merge with, the
    whole form is alternating and no diagonal form exists.
    """
    if not M.is_symmetric():
        raise NotSymmetricError("congruence_diagonalize needs a symmetric matrix")
    n = M.nrows
    rows = M.rows
    remaining = [1 << i for i in range(n)]
    done: list[int] = []

    while True:
        unit = next((v for v in remaining if _form(rows, v, v)), None)
        if unit is not None:
            remaining.remove(unit)
            remaining = [w ^ unit if _form(rows, w, unit) else w for w in remaining]
            done.append(unit)
            continue
        pair = next(
            ((v, w) for a, v in enumerate(remaining) for w in remaining[a + 1:] if _form(rows, v, w)),
            None,
        )
        if pair is None:
            break
        if not done:
            return CongruenceResult(Gf2Matrix.identity(n), rank(M), True)
        v, w = pair
        remaining.remove(v)
        remaining.remove(w)
        remaining = [u ^ (v if _form(rows, u, w) else 0) ^ (w if _form(rows, u, v) else 0) for u in remaining]
        p = done.pop()
        done.extend((p ^ v ^ w, p ^ v, p ^ w))

    transform = Gf2Matrix(n, n, tuple(done + remaining))
    return CongruenceResult(transform, len(done), False)


def gram_factorize(M: Gf2Matrix) -> Gf2Matrix:
    """Return ``Phi`` (n x d) whose Gram matrix ``Phi Phi^T`` is ``M``.

    For a non-alternating ``M`` (or zero), ``d = rank(M)``.  An alternating
    ``M`` has no such factor; then the diagonal entry of the first nonzero
    row is set to one and that matrix is factored instead, so ``Phi Phi^T``
    agrees with ``M`` off the diagonal and ``d <= rank(M) + 1``.
    """
    if not M.is_symmetric():
        raise NotSymmetricError("gram_factorize needs a symmetric matrix")
    res = congruence_diagonalize(M)
    if res.alternating:
        i = next(k for k, r in enumerate(M.rows) if r)
        M = M + Gf2Matrix(M.nrows, M.ncols, tuple((1 << i) if k == i else 0 for k in range(M.nrows)))
        res = congruence_diagonalize(M)
    # M = P^-1 (I_r + 0) P^-T, so Phi is the first r columns of P^-1
    Pinv = inverse(res.transform)
    r = res.rank
    keep = (1 << r) - 1
    return Gf2Matrix(M.nrows, r, tuple(row & keep for row in Pinv.rows))
