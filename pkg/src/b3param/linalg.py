"""Dense exact matrices over the scalar backends.

Prime-field matrices are backed by ``flint.nmod_mat``; every other backend
(Q, Q(rho), dual numbers) goes through the generic elimination code below.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

import flint

from .errors import FieldError, ShapeMismatch, Singular
from .scalars import DualField, EisensteinField, Field, RationalField, parse_field


class Matrix:
    """Immutable ``rows x cols`` matrix with entries in ``field``."""

    __slots__ = ("rows", "cols", "field", "_entries", "_nmod")

    def __init__(self, rows: int, cols: int, field: Field, entries=None, *, _nmod=None):
        self.rows = rows
        self.cols = cols
        self.field = field
        self._nmod = _nmod
        if _nmod is not None:
            self._entries = None
            return
        if entries is None:
            entries = [field.zero] * (rows * cols)
        else:
            entries = [field(x) for x in entries]
        if len(entries) != rows * cols:
            raise ShapeMismatch(f"{len(entries)} entries for a {rows}x{cols} matrix")
        self._entries = tuple(entries)

    # -- construction -------------------------------------------------------

    @classmethod
    def from_rows(cls, field: Field, rows):
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ShapeMismatch("ragged row list")
        return cls(len(rows), ncols, field, [x for r in rows for x in r])

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int):
        if field.is_prime:
            return cls(rows, cols, field, _nmod=flint.nmod_mat(rows, cols, field.p))
        return cls(rows, cols, field)

    @classmethod
    def identity(cls, field: Field, n: int):
        return cls.diag(field, [1] * n)

    @classmethod
    def diag(cls, field: Field, values):
        values = list(values)
        n = len(values)
        m = cls.zeros(field, n, n)
        if field.is_prime:
            mat = m._nmod
            for i, v in enumerate(values):
                mat[i, i] = int(field(v))
            return m
        entries = [field.zero] * (n * n)
        for i, v in enumerate(values):
            entries[i * n + i] = v
        return cls(n, n, field, entries)

    @classmethod
    def column(cls, field: Field, values):
        values = list(values)
        return cls(len(values), 1, field, values)

    # -- representation -----------------------------------------------------

    @property
    def entries(self) -> tuple:
        if self._entries is None:
            self._entries = tuple(self._nmod.entries())
        return self._entries

    def flint(self):
        """The backing ``nmod_mat`` (prime fields only)."""
        if not self.field.is_prime:
            raise FieldError("flint backing exists only for prime fields")
        if self._nmod is None:
            self._nmod = flint.nmod_mat(
                self.rows, self.cols, [int(x) for x in self._entries], self.field.p
            )
        return self._nmod

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, idx):
        i, j = idx
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(idx)
        if self._entries is None:
            return self.field(int(self._nmod[i, j]))
        return self._entries[i * self.cols + j]

    def row(self, i):
        e = self.entries
        return list(e[i * self.cols : (i + 1) * self.cols])

    def to_lists(self):
        return [self.row(i) for i in range(self.rows)]

    def __repr__(self):
        body = "; ".join(
            ", ".join(str(x) for x in self.row(i)) for i in range(min(self.rows, 8))
        )
        return f"Matrix<{self.rows}x{self.cols} {self.field.spec}>[{body}]"

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape != other.shape or self.field != other.field:
            return False
        if self.field.is_prime:
            return self.flint() == other.flint()
        return self.entries == other.entries

    __hash__ = None

    # -- arithmetic ---------------------------------------------------------

    def _check_same(self, other):
        if not isinstance(other, Matrix):
            raise TypeError(f"expected Matrix, got {type(other).__name__}")
        if self.shape != other.shape:
            raise ShapeMismatch(f"shape {self.shape} vs {other.shape}")
        if self.field != other.field:
            raise FieldError(f"field {self.field.spec} vs {other.field.spec}")

    def __add__(self, other):
        self._check_same(other)
        if self.field.is_prime:
            return _wrap(self.field, self.flint() + other.flint())
        return Matrix(self.rows, self.cols, self.field,
                      [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other):
        self._check_same(other)
        if self.field.is_prime:
            return _wrap(self.field, self.flint() - other.flint())
        return Matrix(self.rows, self.cols, self.field,
                      [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self):
        if self.field.is_prime:
            return _wrap(self.field, -self.flint())
        return Matrix(self.rows, self.cols, self.field, [-a for a in self.entries])

    def scale(self, c):
        c = self.field(c)
        if self.field.is_prime:
            return _wrap(self.field, self.flint() * c)
        return Matrix(self.rows, self.cols, self.field, [c * a for a in self.entries])

    def __rmul__(self, c):
        return self.scale(c)

    def __matmul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        if self.field != other.field:
            raise FieldError(f"field {self.field.spec} vs {other.field.spec}")
        field = self.field
        if field.is_prime:
            if self.cols == 0:
                return Matrix.zeros(field, self.rows, other.cols)
            return _wrap(field, self.flint() * other.flint())
        a, b = self.entries, other.entries
        n, k, m = self.rows, self.cols, other.cols
        zero = field.zero
        out = []
        for i in range(n):
            arow = a[i * k : (i + 1) * k]
            for j in range(m):
                acc = zero
                for t in range(k):
                    x = arow[t]
                    if x:
                        acc = acc + x * b[t * m + j]
                out.append(acc)
        return Matrix(n, m, field, out)

    def __pow__(self, k: int):
        if self.rows != self.cols:
            raise ShapeMismatch("power of a non-square matrix")
        if k < 0:
            return invert(self) ** (-k)
        result = Matrix.identity(self.field, self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    @property
    def T(self):
        if self.field.is_prime:
            return _wrap(self.field, self.flint().transpose())
        e = self.entries
        r, c = self.rows, self.cols
        return Matrix(c, r, self.field, [e[i * c + j] for j in range(c) for i in range(r)])

    def trace(self):
        if self.rows != self.cols:
            raise ShapeMismatch("trace of a non-square matrix")
        if self.field.is_prime:
            mat = self._nmod if self._nmod is not None else self.flint()
            p = self.field.p
            return self.field(sum(int(mat[i, i]) for i in range(self.rows)) % p)
        acc = self.field.zero
        for i in range(self.rows):
            acc = acc + self[i, i]
        return acc

    def submatrix(self, r0, r1, c0, c1):
        if not (0 <= r0 <= r1 <= self.rows and 0 <= c0 <= c1 <= self.cols):
            raise ShapeMismatch(f"slice [{r0}:{r1}, {c0}:{c1}] out of {self.shape}")
        e = self.entries
        c = self.cols
        return Matrix(r1 - r0, c1 - c0, self.field,
                      [e[i * c + j] for i in range(r0, r1) for j in range(c0, c1)])

    def is_zero(self) -> bool:
        return all(not x for x in self.entries)

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == Matrix.identity(self.field, self.rows)

    def flatten(self) -> "Matrix":
        """Row-major flattening into a ``1 x (rows*cols)`` matrix."""
        return Matrix(1, self.rows * self.cols, self.field, self.entries)

    def map(self, fn, field=None):
        field = field or self.field
        return Matrix(self.rows, self.cols, field, [fn(x) for x in self.entries])


def _wrap(field, nmod_mat):
    return Matrix(nmod_mat.nrows(), nmod_mat.ncols(), field, _nmod=nmod_mat)


# --------------------------------------------------------------------------
# elimination


def invert(m: Matrix) -> Matrix:
    """Exact inverse; raises :class:`Singular` when none exists."""
    if m.rows != m.cols:
        raise ShapeMismatch(f"cannot invert a {m.rows}x{m.cols} matrix")
    field = m.field
    n = m.rows
    if n == 0:
        return m
    if field.is_prime:
        try:
            return _wrap(field, m.flint().inv())
        except ZeroDivisionError:
            raise Singular("matrix is singular") from None

    # Gauss-Jordan on [m | I]; over dual numbers the pivot must have a
    # nonzero value part, which is exactly invertibility in F[eps]/(eps^2).
    a = [list(m.row(i)) for i in range(n)]
    inv = [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if field.is_unit(a[r][col])), None)
        if piv is None:
            raise Singular(f"no invertible pivot in column {col}")
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            inv[col], inv[piv] = inv[piv], inv[col]
        p_inv = field.inv(a[col][col])
        a[col] = [x * p_inv for x in a[col]]
        inv[col] = [x * p_inv for x in inv[col]]
        for r in range(n):
            if r == col:
                continue
            f = a[r][col]
            if not f:
                continue
            a[r] = [x - f * y for x, y in zip(a[r], a[col])]
            inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    return Matrix.from_rows(field, inv)


def _integral_rows(m: Matrix):
    """Scale each row to clear denominators (Q or Q(rho) entries)."""
    rows = []
    for i in range(m.rows):
        row = m.row(i)
        if isinstance(m.field, EisensteinField):
            dens = [x.re.denominator for x in row] + [x.rho_coeff.denominator for x in row]
        else:
            dens = [Fraction(x).denominator for x in row]
        scale = lcm(*dens) if dens else 1
        rows.append([x * scale for x in row])
    return rows


def _bareiss_rank(rows, ncols) -> int:
    """Fraction-free elimination; divisions are exact so entries stay integral."""
    a = [list(r) for r in rows]
    nrows = len(a)
    rank = 0
    prev = 1
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if a[r][col]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        for r in range(rank + 1, nrows):
            f = a[r][col]
            a[r] = [(p * x - f * y) / prev for x, y in zip(a[r], a[rank])]
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def _echelon(m: Matrix):
    """Reduced row echelon form over a field: (rows, pivot columns)."""
    field = m.field
    a = [list(m.row(i)) for i in range(m.rows)]
    pivots = []
    r = 0
    for col in range(m.cols):
        piv = next((i for i in range(r, m.rows) if a[i][col]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p_inv = field.inv(a[r][col])
        a[r] = [x * p_inv for x in a[r]]
        for i in range(m.rows):
            if i != r and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == m.rows:
            break
    return a[:r], pivots


def rank(m: Matrix) -> int:
    field = m.field
    if isinstance(field, DualField):
        raise FieldError("rank is not defined over dual numbers")
    if m.rows == 0 or m.cols == 0:
        return 0
    if field.is_prime:
        return m.flint().rank()
    if isinstance(field, (EisensteinField, RationalField)):
        return _bareiss_rank(_integral_rows(m), m.cols)
    return len(_echelon(m)[0])


def det(m: Matrix):
    if m.rows != m.cols:
        raise ShapeMismatch("determinant of a non-square matrix")
    field = m.field
    if m.rows == 0:
        return field.one
    if field.is_prime:
        return field(int(m.flint().det()))
    a = [list(m.row(i)) for i in range(m.rows)]
    n = m.rows
    result = field.one
    for col in range(n):
        piv = next((r for r in range(col, n) if field.is_unit(a[r][col])), None)
        if piv is None:
            if isinstance(field, DualField):
                raise FieldError("determinant with non-unit pivots over dual numbers")
            return field.zero
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            result = -result
        p = a[col][col]
        result = result * p
        p_inv = field.inv(p)
        for r in range(col + 1, n):
            f = a[r][col] * p_inv
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return result


def row_space(m: Matrix) -> Matrix:
    """Basis of the row space, in reduced echelon form."""
    field = m.field
    if field.is_prime:
        if m.rows == 0 or m.cols == 0:
            return Matrix.zeros(field, 0, m.cols)
        r, rk = m.flint().rref()
        if rk == r.nrows():
            return _wrap(field, r)
        return _wrap(field, flint.nmod_mat(r.tolist()[:rk], field.p)) if rk else Matrix.zeros(field, 0, m.cols)
    rows, _ = _echelon(m)
    return Matrix(len(rows), m.cols, field, [x for r in rows for x in r])


def nullspace(m: Matrix) -> Matrix:
    """Columns form a basis of ``{v : m v = 0}``."""
    field = m.field
    if field.is_prime and m.rows and m.cols:
        x, nullity = m.flint().nullspace()
        cols = [[int(x[i, j]) for j in range(nullity)] for i in range(m.cols)]
        return Matrix(m.cols, nullity, field, [v for r in cols for v in r])
    rows, pivots = _echelon(m)
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [field.zero] * m.cols
        v[f] = field.one
        for r, pc in zip(rows, pivots):
            v[pc] = -r[f]
        basis.append(v)
    return Matrix(m.cols, len(basis), field,
                  [basis[j][i] for i in range(m.cols) for j in range(len(basis))])


# --------------------------------------------------------------------------
# structured builders


def block_assemble(grid, row_heights, col_widths, field: Field | None = None) -> Matrix:
    """Concatenate a grid of blocks; ``None`` (or 0) is a zero block.

    Zero-height rows and zero-width columns are allowed and simply vanish.
    """
    row_heights = list(row_heights)
    col_widths = list(col_widths)
    if len(grid) != len(row_heights):
        raise ShapeMismatch(f"{len(grid)} block rows but {len(row_heights)} heights")
    if field is None:
        field = next((b.field for row in grid for b in row if isinstance(b, Matrix)), None)
        if field is None:
            raise FieldError("cannot infer the field of an all-zero grid")
    nrows, ncols = sum(row_heights), sum(col_widths)
    if field.is_prime and nrows and ncols:
        return _assemble_prime(grid, row_heights, col_widths, field)
    out = [[field.zero] * ncols for _ in range(nrows)]
    r0 = 0
    for bi, (row, h) in enumerate(zip(grid, row_heights)):
        if len(row) != len(col_widths):
            raise ShapeMismatch(f"block row {bi} has {len(row)} blocks, expected {len(col_widths)}",
                                coords=(bi, None))
        c0 = 0
        for bj, (block, w) in enumerate(zip(row, col_widths)):
            if isinstance(block, Matrix):
                if block.shape != (h, w):
                    raise ShapeMismatch(
                        f"block ({bi},{bj}) is {block.rows}x{block.cols}, slot is {h}x{w}",
                        coords=(bi, bj))
                if block.field != field:
                    raise FieldError(f"block ({bi},{bj}) over {block.field.spec}")
                for i in range(h):
                    src = block.row(i)
                    out[r0 + i][c0 : c0 + w] = src
            elif block not in (None, 0):
                raise TypeError(f"block ({bi},{bj}) is neither a Matrix nor a zero placeholder")
            c0 += w
        r0 += h
    return Matrix(nrows, ncols, field, [x for r in out for x in r])


def _assemble_prime(grid, row_heights, col_widths, field):
    ncols = sum(col_widths)
    zero = field.zero
    out = []
    for bi, (row, h) in enumerate(zip(grid, row_heights)):
        if len(row) != len(col_widths):
            raise ShapeMismatch(f"block row {bi} has {len(row)} blocks, expected {len(col_widths)}",
                                coords=(bi, None))
        if h == 0:
            continue
        band = [[] for _ in range(h)]
        for bj, (block, w) in enumerate(zip(row, col_widths)):
            if isinstance(block, Matrix):
                if block.shape != (h, w):
                    raise ShapeMismatch(
                        f"block ({bi},{bj}) is {block.rows}x{block.cols}, slot is {h}x{w}",
                        coords=(bi, bj))
                if block.field != field:
                    raise FieldError(f"block ({bi},{bj}) over {block.field.spec}")
                if w:
                    flat = block.entries
                    for i in range(h):
                        band[i].extend(flat[i * w:(i + 1) * w])
            elif block in (None, 0):
                for i in range(h):
                    band[i].extend([zero] * w)
            else:
                raise TypeError(f"block ({bi},{bj}) is neither a Matrix nor a zero placeholder")
        out.extend(band)
    return _wrap(field, flint.nmod_mat(out, field.p)) if ncols else Matrix.zeros(field, len(out), 0)


def hstack(*blocks: Matrix) -> Matrix:
    return block_assemble([list(blocks)], [blocks[0].rows], [b.cols for b in blocks])


def vstack(*blocks: Matrix) -> Matrix:
    return block_assemble([[b] for b in blocks], [b.rows for b in blocks], [blocks[0].cols])


def krylov_matrix(a: Matrix, v: Matrix) -> Matrix:
    """Columns ``v, Av, ..., A^(n-1) v``."""
    n = a.rows
    if a.cols != n or v.shape != (n, 1):
        raise ShapeMismatch(f"krylov_matrix needs n x n and n x 1, got {a.shape}, {v.shape}")
    cols = []
    w = v
    for _ in range(n):
        cols.append(w)
        w = a @ w
    if not cols:
        return Matrix.zeros(a.field, 0, 0)
    return hstack(*cols)


def kron(a: Matrix, b: Matrix) -> Matrix:
    field = a.field
    out = []
    for i in range(a.rows):
        arow = a.row(i)
        for k in range(b.rows):
            brow = b.row(k)
            for x in arow:
                out.extend(x * y for y in brow)
    return Matrix(a.rows * b.rows, a.cols * b.cols, field, out)


# --------------------------------------------------------------------------
# first-order jets: a value plus one tangent per epsilon direction


class DualMatrix:
    """Matrix over ``F[eps_1..eps_k] / (eps_i eps_j)``.

    Equivalent to a matrix of multi-dual numbers, stored as the value part and
    one tangent matrix per direction so the products stay on the fast path.
    """

    __slots__ = ("value", "tangents")

    def __init__(self, value: Matrix, tangents):
        self.value = value
        self.tangents = tuple(tangents)

    @classmethod
    def constant(cls, value: Matrix, ndirs: int):
        zero = Matrix.zeros(value.field, value.rows, value.cols)
        return cls(value, [zero] * ndirs)

    @property
    def ndirs(self):
        return len(self.tangents)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            return DualMatrix(self.value @ other, [t @ other for t in self.tangents])
        v1, v2 = self.value, other.value
        return DualMatrix(v1 @ v2, [v1 @ t2 + t1 @ v2 for t1, t2 in zip(self.tangents, other.tangents)])

    def __rmatmul__(self, other):
        if isinstance(other, Matrix):
            return DualMatrix(other @ self.value, [other @ t for t in self.tangents])
        return NotImplemented

    def __add__(self, other):
        return DualMatrix(self.value + other.value,
                          [a + b for a, b in zip(self.tangents, other.tangents)])

    def __sub__(self, other):
        return DualMatrix(self.value - other.value,
                          [a - b for a, b in zip(self.tangents, other.tangents)])

    def scale(self, c, dc=None):
        """Multiply by the scalar jet ``c + sum_i dc[i] eps_i``."""
        tangents = [t.scale(c) for t in self.tangents]
        if dc is not None:
            tangents = [t + self.value.scale(d) if d else t for t, d in zip(tangents, dc)]
        return DualMatrix(self.value.scale(c), tangents)

    def inverse(self):
        vinv = invert(self.value)
        return DualMatrix(vinv, [-(vinv @ t @ vinv) for t in self.tangents])

    def trace(self):
        return self.value.trace(), [t.trace() for t in self.tangents]


# --------------------------------------------------------------------------
# JSON


def matrix_to_json(m: Matrix) -> dict:
    return {
        "rows": m.rows,
        "cols": m.cols,
        "field": m.field.spec,
        "entries": [m.field.encode(x) for x in m.entries],
    }


def matrix_from_json(obj: dict, field: Field | None = None) -> Matrix:
    field = field or parse_field(obj["field"])
    entries = [field.decode(s) for s in obj["entries"]]
    return Matrix(obj["rows"], obj["cols"], field, entries)
