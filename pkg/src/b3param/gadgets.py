"""Symbolic building blocks whose entries are affine in named parameters.

Every block used by the parametrizations (companion matrices, reduced
companion matrices, the basis column ``|``, the padded identity, generic
``*`` blocks) has entries of the form ``c + sum_i k_i p_i``.  Parameters live
in a :class:`ParameterRegistry` shared by all blocks of one layout.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import ShapeMismatch
from .linalg import Matrix


class ParameterRegistry:
    """Ordered, duplicate-free list of parameter names; ids are 0..count-1."""

    def __init__(self):
        self.names: list[str] = []
        self._ids: dict[str, int] = {}

    def add(self, name: str) -> int:
        if name in self._ids:
            raise ValueError(f"parameter {name!r} already registered")
        pid = len(self.names)
        self.names.append(name)
        self._ids[name] = pid
        return pid

    def id_of(self, name: str) -> int:
        return self._ids[name]

    def name_of(self, pid: int) -> str:
        return self.names[pid]

    def __contains__(self, name):
        return name in self._ids

    def __len__(self):
        return len(self.names)

    @property
    def count(self):
        return len(self.names)


@dataclass(frozen=True)
class AffineEntry:
    constant: int | Fraction = 0
    terms: tuple = ()  # sorted ((pid, coeff), ...), one term per pid

    @classmethod
    def const(cls, c):
        return cls(c, ())

    @classmethod
    def param(cls, pid, coeff=1):
        return cls(0, ((pid, coeff),))

    def __add__(self, other):
        merged = dict(self.terms)
        for pid, k in other.terms:
            merged[pid] = merged.get(pid, 0) + k
        terms = tuple(sorted((p, k) for p, k in merged.items() if k))
        return AffineEntry(self.constant + other.constant, terms)

    def is_zero(self):
        return not self.constant and not self.terms

    def params(self):
        return [p for p, _ in self.terms]

    def coefficient(self, pid):
        for p, k in self.terms:
            if p == pid:
                return k
        return 0

    def evaluate(self, field, values):
        acc = field(self.constant)
        for pid, k in self.terms:
            acc = acc + field(k) * values[pid]
        return acc


ZERO = AffineEntry.const(0)
ONE = AffineEntry.const(1)


@dataclass(frozen=True)
class SymbolicMatrix:
    rows: int
    cols: int
    entries: tuple  # row-major AffineEntry
    kind: str = "matrix"
    params: tuple = ()  # pids introduced by this block, in registration order

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ShapeMismatch(f"{len(self.entries)} entries for {self.rows}x{self.cols}")

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i * self.cols + j]

    def __add__(self, other):
        if self.shape != other.shape:
            raise ShapeMismatch(f"cannot add {self.shape} and {other.shape}")
        return SymbolicMatrix(
            self.rows, self.cols,
            tuple(a + b for a, b in zip(self.entries, other.entries)),
            kind=f"{self.kind}+{other.kind}",
            params=self.params + other.params,
        )

    def evaluate(self, field, values) -> Matrix:
        return Matrix(self.rows, self.cols, field,
                      [e.evaluate(field, values) for e in self.entries])

    def constant_part(self, field) -> Matrix:
        return Matrix(self.rows, self.cols, field, [e.constant for e in self.entries])

    def derivative(self, pid, field) -> Matrix:
        """The constant matrix of coefficients of parameter ``pid``."""
        return Matrix(self.rows, self.cols, field, [e.coefficient(pid) for e in self.entries])

    def used_params(self) -> set:
        return {p for e in self.entries for p in e.params()}

    def to_lists(self):
        return [[self[i, j] for j in range(self.cols)] for i in range(self.rows)]


def _from_rows(rows, nrows, ncols, kind, params=()):
    return SymbolicMatrix(nrows, ncols, tuple(x for r in rows for x in r), kind, tuple(params))


# --------------------------------------------------------------------------
# gadgets


def zero(rows: int, cols: int) -> SymbolicMatrix:
    return SymbolicMatrix(rows, cols, (ZERO,) * (rows * cols), "zero")


def identity(n: int) -> SymbolicMatrix:
    rows = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    return _from_rows(rows, n, n, "identity")


def scaled_identity(n: int, pid: int) -> SymbolicMatrix:
    """``q * 1_n`` for a registered parameter ``q``."""
    p = AffineEntry.param(pid)
    rows = [[p if i == j else ZERO for j in range(n)] for i in range(n)]
    return _from_rows(rows, n, n, "q*identity")


def basis_column(d: int) -> SymbolicMatrix:
    """``d x 1`` column ``(1, 0, ..., 0)^T``."""
    return SymbolicMatrix(d, 1, tuple(ONE if i == 0 else ZERO for i in range(d)), "basis_column")


def padded_identity(n: int) -> SymbolicMatrix:
    """``(n+1) x n``: a zero row on top of ``1_n``."""
    rows = [[ZERO] * n] + [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    return _from_rows(rows, n + 1, n, "padded_identity")


def generic(rows: int, cols: int, registry: ParameterRegistry, name: str = "G") -> SymbolicMatrix:
    pids = []
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            pid = registry.add(f"{name}[{i},{j}]")
            pids.append(pid)
            row.append(AffineEntry.param(pid))
        out.append(row)
    return _from_rows(out, rows, cols, "generic", pids)


def companion(k: int, registry: ParameterRegistry, name: str = "A") -> SymbolicMatrix:
    """Ones on the subdiagonal, last column ``(x_k, ..., x_1)`` top to bottom.

    At ``x_i = c_i`` the characteristic polynomial is
    ``t^k - c_1 t^(k-1) - ... - c_k``.
    """
    pids = [registry.add(f"{name}.x{k - i}") for i in range(k)]
    rows = []
    for i in range(k):
        row = []
        for j in range(k):
            if j == k - 1:
                row.append(AffineEntry.param(pids[i]))
            elif i == j + 1:
                row.append(ONE)
            else:
                row.append(ZERO)
        rows.append(row)
    return _from_rows(rows, k, k, "companion", pids)


def reduced_companion(k: int, registry: ParameterRegistry, name: str = "Ar") -> SymbolicMatrix:
    """``(k-1) x k``: ``1_(k-1)`` then the column ``(x_(k-1), ..., x_1)``."""
    if k < 1:
        raise ShapeMismatch("reduced companion needs k >= 1")
    m = k - 1
    pids = [registry.add(f"{name}.x{m - i}") for i in range(m)]
    rows = []
    for i in range(m):
        row = [ONE if i == j else ZERO for j in range(m)]
        row.append(AffineEntry.param(pids[i]))
        rows.append(row)
    return _from_rows(rows, m, k, "reduced_companion", pids)


def column_then_generic(rows: int, cols: int, registry: ParameterRegistry,
                        name: str = "G") -> SymbolicMatrix:
    """The ``| *`` block: basis column juxtaposed with a generic ``rows x (cols-1)``."""
    if cols == 0:
        return zero(rows, 0)
    g = generic(rows, cols - 1, registry, name)
    out = []
    for i in range(rows):
        out.append([ONE if i == 0 else ZERO] + [g[i, j] for j in range(cols - 1)])
    return _from_rows(out, rows, cols, "basis_column|generic", g.params)


def structured_block(kind: str, *shape: int, registry: ParameterRegistry | None = None,
                     name: str = "G") -> SymbolicMatrix:
    """Dispatch by kind name: basis_column(d), padded_identity(n), identity(n),
    zero(r, c), generic(r, c)."""
    if any(s < 0 for s in shape):
        raise ShapeMismatch(f"negative shape {shape}")
    if kind == "basis_column":
        return basis_column(*shape)
    if kind == "padded_identity":
        return padded_identity(*shape)
    if kind == "identity":
        return identity(*shape)
    if kind == "zero":
        return zero(*shape)
    if kind == "generic":
        if registry is None:
            raise ValueError("generic blocks need a registry")
        return generic(*shape, registry, name)
    raise ValueError(f"unknown block kind {kind!r}")


# --------------------------------------------------------------------------
# block layouts


@dataclass
class SymbolicBlockMatrix:
    row_heights: list
    col_widths: list
    blocks: dict  # (i, j) -> SymbolicMatrix; missing means zero
    registry: ParameterRegistry
    row_labels: list = dc_field(default_factory=list)
    col_labels: list = dc_field(default_factory=list)

    def __post_init__(self):
        for (i, j), blk in self.blocks.items():
            want = (self.row_heights[i], self.col_widths[j])
            if blk.shape != want:
                raise ShapeMismatch(
                    f"block ({i},{j}) of kind {blk.kind} is {blk.rows}x{blk.cols}, slot is "
                    f"{want[0]}x{want[1]}", coords=(i, j))

    @property
    def shape(self):
        return (sum(self.row_heights), sum(self.col_widths))

    def flatten(self) -> SymbolicMatrix:
        nrows, ncols = self.shape
        out = [[ZERO] * ncols for _ in range(nrows)]
        r0 = 0
        for i, h in enumerate(self.row_heights):
            c0 = 0
            for j, w in enumerate(self.col_widths):
                blk = self.blocks.get((i, j))
                if blk is not None:
                    for a in range(h):
                        out[r0 + a][c0 : c0 + w] = [blk[a, b] for b in range(w)]
                c0 += w
            r0 += h
        return _from_rows(out, nrows, ncols, "layout")

    def block_offsets(self):
        rows = [sum(self.row_heights[:i]) for i in range(len(self.row_heights))]
        cols = [sum(self.col_widths[:j]) for j in range(len(self.col_widths))]
        return rows, cols

    def to_json(self) -> dict:
        blocks = []
        for (i, j), blk in sorted(self.blocks.items()):
            if blk.rows == 0 or blk.cols == 0:
                continue
            blocks.append({
                "r": i,
                "c": j,
                "kind": blk.kind,
                "params": [self.registry.name_of(p) for p in sorted(blk.used_params())],
            })
        return {"row_heights": list(self.row_heights), "col_widths": list(self.col_widths),
                "blocks": blocks}
