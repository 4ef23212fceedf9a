"""Exact dense linear algebra over the rationals or a prime field.

Matrices are small (a few hundred rows at most), so everything is plain
Python lists of field elements.  Rational entries are ``fractions.Fraction``;
prime-field entries are :class:`ModP` residues.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence


class ModP:
    """Residue class modulo a prime."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, ModP):
            return other.v
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return int(other)

    def __add__(self, other):
        return ModP(self.v + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return ModP(self.v - self._coerce(other), self.p)

    def __rsub__(self, other):
        return ModP(self._coerce(other) - self.v, self.p)

    def __mul__(self, other):
        return ModP(self.v * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        d = self._coerce(other) % self.p
        if d == 0:
            raise ZeroDivisionError("division by zero in GF(%d)" % self.p)
        return ModP(self.v * pow(d, -1, self.p), self.p)

    def __rtruediv__(self, other):
        return ModP(self._coerce(other), self.p) / self

    def __neg__(self):
        return ModP(-self.v, self.p)

    def __eq__(self, other):
        if isinstance(other, ModP):
            return self.v == other.v
        if isinstance(other, (int, Fraction)):
            return self.v == self._coerce(other) % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"{self.v} mod {self.p}"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


class Field:
    """A ground field: ``Field()`` is QQ, ``Field(p)`` is GF(p)."""

    def __init__(self, p: int | None = None):
        if p is not None and not _is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        self.p = p

    @property
    def characteristic(self) -> int:
        return self.p or 0

    def __call__(self, x):
        if self.p is None:
            if isinstance(x, ModP):
                raise TypeError("cannot coerce a residue into QQ")
            return Fraction(x)
        if isinstance(x, ModP):
            return ModP(x.v, self.p)
        if isinstance(x, Fraction):
            return ModP(x.numerator, self.p) / x.denominator
        return ModP(int(x), self.p)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "QQ" if self.p is None else f"GF({self.p})"


QQ = Field()


class Mat:
    """Immutable dense matrix over a :class:`Field`."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, rows: Iterable[Sequence], ncols: int | None = None, field: Field = QQ):
        self.field = field
        rows = [[field(x) for x in r] for r in rows]
        self.rows = rows
        self.nrows = len(rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for a matrix with no rows")
            ncols = len(rows[0])
        self.ncols = ncols
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")

    @classmethod
    def _raw(cls, rows, nrows, ncols, field):
        m = cls.__new__(cls)
        m.field = field
        m.rows = rows
        m.nrows = nrows
        m.ncols = ncols
        return m

    @classmethod
    def zeros(cls, nrows: int, ncols: int, field: Field = QQ) -> "Mat":
        z = field.zero
        return cls._raw([[z] * ncols for _ in range(nrows)], nrows, ncols, field)

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> "Mat":
        m = cls.zeros(n, n, field)
        for i in range(n):
            m.rows[i][i] = field.one
        return m

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int, field: Field = QQ) -> "Mat":
        rows = [[field(c[i]) for c in cols] for i in range(nrows)]
        return cls._raw(rows, nrows, len(cols), field)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> list:
        return [r[j] for r in self.rows]

    def columns(self) -> list[list]:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "Mat":
        rows = [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)]
        return Mat._raw(rows, self.ncols, self.nrows, self.field)

    T = property(transpose)

    def __matmul__(self, other):
        if isinstance(other, Mat):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            zero = self.field.zero
            ocols = other.columns()
            out = []
            for r in self.rows:
                nz = [(k, a) for k, a in enumerate(r) if a]
                out.append([sum((a * c[k] for k, a in nz), zero) for c in ocols])
            return Mat._raw(out, self.nrows, other.ncols, self.field)
        # vector
        if len(other) != self.ncols:
            raise ValueError("vector length mismatch")
        zero = self.field.zero
        return [sum((a * other[k] for k, a in enumerate(r) if a), zero) for r in self.rows]

    def __add__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise ValueError("shape mismatch in addition")
        rows = [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)]
        return Mat._raw(rows, self.nrows, self.ncols, self.field)

    def __sub__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise ValueError("shape mismatch in subtraction")
        rows = [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)]
        return Mat._raw(rows, self.nrows, self.ncols, self.field)

    def __neg__(self) -> "Mat":
        return Mat._raw([[-a for a in r] for r in self.rows], self.nrows, self.ncols, self.field)

    def scale(self, c) -> "Mat":
        c = self.field(c)
        return Mat._raw([[c * a for a in r] for r in self.rows], self.nrows, self.ncols, self.field)

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        return isinstance(other, Mat) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, tuple(tuple(r) for r in self.rows)))

    def is_zero(self) -> bool:
        return not any(a for r in self.rows for a in r)

    def flat(self) -> list:
        return [a for r in self.rows for a in r]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Mat":
        return Mat._raw([[self.rows[i][j] for j in cols] for i in rows], len(rows), len(cols), self.field)

    def __repr__(self):
        body = "; ".join(" ".join(str(a) for a in r) for r in self.rows)
        return f"Mat{self.shape}[{body}]"

    # convenience wrappers
    def rank(self) -> int:
        return rank(self)

    def rref(self):
        return rref(self)


def hstack(mats: Sequence[Mat], nrows: int | None = None, field: Field = QQ) -> Mat:
    mats = list(mats)
    if not mats:
        return Mat.zeros(nrows or 0, 0, field)
    field = mats[0].field
    n = mats[0].nrows
    for m in mats:
        if m.nrows != n:
            raise ValueError("hstack row mismatch")
    rows = [sum((m.rows[i] for m in mats), []) for i in range(n)]
    return Mat._raw(rows, n, sum(m.ncols for m in mats), field)


def vstack(mats: Sequence[Mat], ncols: int | None = None, field: Field = QQ) -> Mat:
    mats = list(mats)
    if not mats:
        return Mat.zeros(0, ncols or 0, field)
    field = mats[0].field
    n = mats[0].ncols
    for m in mats:
        if m.ncols != n:
            raise ValueError("vstack column mismatch")
    rows = [list(r) for m in mats for r in m.rows]
    return Mat._raw(rows, len(rows), n, field)


def block_diag(mats: Sequence[Mat], field: Field = QQ) -> Mat:
    mats = list(mats)
    if mats:
        field = mats[0].field
    nr = sum(m.nrows for m in mats)
    nc = sum(m.ncols for m in mats)
    out = Mat.zeros(nr, nc, field)
    r0 = c0 = 0
    for m in mats:
        for i in range(m.nrows):
            out.rows[r0 + i][c0:c0 + m.ncols] = list(m.rows[i])
        r0 += m.nrows
        c0 += m.ncols
    return out


def _rref_rows(rows: list[list], ncols: int, zero, extra: list[list] | None = None):
    """In-place Gauss-Jordan on ``rows``; ``extra`` rows receive the same row ops."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r >= nrows:
            break
        piv = None
        for i in range(r, nrows):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            if extra is not None:
                extra[r], extra[piv] = extra[piv], extra[r]
        pv = rows[r][c]
        if pv != 1:
            inv = 1 / pv
            rows[r] = [a * inv for a in rows[r]]
            if extra is not None:
                extra[r] = [a * inv for a in extra[r]]
        prow = rows[r]
        nzcols = [j for j in range(c, ncols) if prow[j]]
        erow = extra[r] if extra is not None else None
        enz = [j for j, a in enumerate(erow) if a] if erow is not None else None
        for i in range(nrows):
            if i == r:
                continue
            f = rows[i][c]
            if not f:
                continue
            row_i = rows[i]
            for j in nzcols:
                row_i[j] = row_i[j] - f * prow[j]
            if erow is not None:
                ex_i = extra[i]
                for j in enz:
                    ex_i[j] = ex_i[j] - f * erow[j]
        pivots.append(c)
        r += 1
    return pivots


def rref(A: Mat) -> tuple[Mat, list[int]]:
    """Reduced row-echelon form and the pivot columns (increasing)."""
    rows = [list(r) for r in A.rows]
    pivots = _rref_rows(rows, A.ncols, A.field.zero)
    return Mat._raw(rows, A.nrows, A.ncols, A.field), pivots


def rank(A: Mat) -> int:
    if A.nrows == 0 or A.ncols == 0:
        return 0
    # eliminate on the smaller side
    if A.nrows > A.ncols:
        A = A.transpose()
    return len(rref(A)[1])


def kernel_basis(A: Mat) -> Mat:
    """Matrix whose columns form a basis of ker A."""
    R, pivots = rref(A)
    n = A.ncols
    free = [j for j in range(n) if j not in set(pivots)]
    zero, one = A.field.zero, A.field.one
    cols = []
    for f in free:
        v = [zero] * n
        v[f] = one
        for i, pc in enumerate(pivots):
            v[pc] = -R.rows[i][f]
        cols.append(v)
    K = Mat.from_columns(cols, n, A.field) if cols else Mat.zeros(n, 0, A.field)
    assert len(cols) + len(pivots) == n
    return K


def solve(A: Mat, b: Sequence) -> list | None:
    """Some x with A x = b, or ``None`` when the system is inconsistent."""
    if len(b) != A.nrows:
        raise ValueError(f"rhs length {len(b)} does not match {A.nrows} rows")
    field = A.field
    rows = [list(r) + [field(bi)] for r, bi in zip(A.rows, b)]
    pivots = _rref_rows(rows, A.ncols + 1, field.zero)
    if pivots and pivots[-1] == A.ncols:
        return None
    x = [field.zero] * A.ncols
    for i, pc in enumerate(pivots):
        x[pc] = rows[i][A.ncols]
    return x


def inverse(A: Mat) -> Mat | None:
    if A.nrows != A.ncols:
        return None
    n = A.nrows
    rows = [list(r) for r in A.rows]
    extra = [list(r) for r in Mat.identity(n, A.field).rows]
    pivots = _rref_rows(rows, n, A.field.zero, extra)
    if len(pivots) != n:
        return None
    return Mat._raw(extra, n, n, A.field)


class LeftInverse:
    """Precomputed coordinates w.r.t. a full-column-rank matrix.

    ``coords(v)`` returns the unique x with ``M x = v`` and ``contains(v)``
    decides whether ``v`` is in the column space.
    """

    def __init__(self, M: Mat):
        self.M = M
        n, k = M.nrows, M.ncols
        rows = [list(r) for r in M.rows]
        extra = [list(r) for r in Mat.identity(n, M.field).rows]
        pivots = _rref_rows(rows, k, M.field.zero, extra)
        if len(pivots) != k:
            raise ValueError("columns are linearly dependent")
        self.k = k
        self.solver = Mat._raw(extra[:k], k, n, M.field)
        self.checker = Mat._raw(extra[k:], n - k, n, M.field)

    def coords(self, v: Sequence) -> list:
        return self.solver @ list(v)

    def contains(self, v: Sequence) -> bool:
        return not any(self.checker @ list(v))


def independent_columns(A: Mat) -> list[int]:
    """Indices of a maximal independent subset of columns (greedy, left to right)."""
    return rref(A)[1]


def quotient_space(ambient_dim: int, sub_basis: Mat, field: Field = QQ):
    """Quotient of ``field**ambient_dim`` by the span of ``sub_basis`` columns.

    Returns ``(proj, section, qdim)`` with ``proj @ sub_basis == 0`` and
    ``proj @ section == identity``.  The section picks standard basis vectors
    at the non-pivot positions, so quotient coordinates are "normal forms".
    """
    if sub_basis.ncols:
        field = sub_basis.field
    if sub_basis.nrows != ambient_dim:
        raise ValueError("sub_basis rows must equal the ambient dimension")
    # row-reduce the generators (as rows) to find pivots of the subspace
    if sub_basis.ncols:
        R, pivots = rref(sub_basis.transpose())
        R = R.submatrix(range(len(pivots)), range(ambient_dim))
    else:
        R, pivots = Mat.zeros(0, ambient_dim, field), []
    pivset = set(pivots)
    free = [j for j in range(ambient_dim) if j not in pivset]
    qdim = len(free)
    zero, one = field.zero, field.one
    # v ≡ v - sum_i v[p_i] R_i ; the result is supported on free coordinates
    proj_rows = []
    for f in free:
        row = [zero] * ambient_dim
        row[f] = one
        for i, pc in enumerate(pivots):
            row[pc] = -R.rows[i][f]
        proj_rows.append(row)
    proj = Mat._raw(proj_rows, qdim, ambient_dim, field)
    section = Mat.zeros(ambient_dim, qdim, field)
    for k, f in enumerate(free):
        section.rows[f][k] = one
    return proj, section, qdim


def span_basis(vectors: Sequence[Sequence], dim: int, field: Field = QQ) -> list[list]:
    """A basis (as row vectors in reduced form) of the span of ``vectors``."""
    if not vectors:
        return []
    R, piv = rref(Mat(vectors, dim, field))
    return [list(R.rows[i]) for i in range(len(piv))]
