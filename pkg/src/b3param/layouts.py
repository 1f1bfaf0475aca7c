"""Block layouts of the base change matrices, as token grids, and their assemblers.

Each layout is a grid of tokens:

    0          zero block
    1_X, 1     identity (size X; a bare ``1`` sits in a one-dimensional group)
    q1_X       q times the identity
    1_X+Y      identity plus the block Y (an arrow label or a companion gadget)
    q1_X+Y     q times the identity plus Y
    *          generic block
    |          basis column (1, 0, ..., 0)^T
    |*         basis column juxtaposed with a generic block
    1bar_X     (X+1) x X padded identity
    A_X        X x X companion matrix
    Ar_X       (X-1) x X reduced companion matrix
    other      an arrow label of the local quiver

Identity sizes are forced by the block grid.  When an identity
subscript disagrees with a square slot whose row and column groups carry the
same label, the grid wins and the rewrite is logged as a correction.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import gadgets
from .errors import ShapeMismatch
from .linalg import Matrix

# -- the 12 x 12 grid shared by M0's base change and the general assembly ----

VERTEX_SHORT = {"a1": "a1", "a2": "a2", "a3": "a3", "a4": "a4", "a5": "a5", "a6": "a6",
                "ba": "b_alpha", "bb": "b_beta", "bg": "b_gamma"}

# rows: t-eigenspaces x, y, z; columns: s-eigenspaces a, b
ROW_GROUPS = [("x", "a1"), ("x", "a4"), ("x", "ba"), ("x", "bb"),
              ("y", "a2"), ("y", "a5"), ("y", "ba"), ("y", "bg"),
              ("z", "a3"), ("z", "a6"), ("z", "bb"), ("z", "bg")]
COL_GROUPS = [("a", "a1"), ("a", "a3"), ("a", "a5"), ("a", "ba"), ("a", "bb"), ("a", "bg"),
              ("b", "a2"), ("b", "a4"), ("b", "a6"), ("b", "ba"), ("b", "bb"), ("b", "bg")]

BASE_GRID = """
1_a1      0         0         0         0         0         || 0       0       0       0       0       0
0         0         0         0         0         0         || 0       1_a4    0       0       0       0
0         0         0         q1_ba     0         0         || 0       0       0       1_ba    0       0
0         0         0         0         q1_bb     0         || 0       0       0       0       1_bb    0
0         0         0         0         0         0         || 1_a2    0       0       0       0       0
0         0         1_a5      0         0         0         || 0       0       0       0       0       0
0         0         0         1_ba      0         0         || 0       0       0       1_ba    0       0
0         0         0         0         0         q1_bg     || 0       0       0       0       0       1_bg
0         1_a3      0         0         0         0         || 0       0       0       0       0       0
0         0         0         0         0         0         || 0       0       1_a6    0       0       0
0         0         0         0         1_bb      0         || 0       0       0       0       1_bb    0
0         0         0         0         0         1_bg      || 0       0       0       0       0       1_bb
"""

GENERAL_GRID = """
1_a1      0         0         0         0         0         || C21     0       C61     0       0       Dg1
0         C34       C54       0         0         Dg4       || 0       1_a4    0       0       0       0
0         D3a       0         q1_ba+Ea  0         0         || 0       0       D6a     1_ba    0       Fga
0         0         0         0         q1_bb     Fgb       || 0       0       0       0       1_bb    0
C12       C32       0         0         Db2       0         || 1_a2    0       0       0       0       0
0         0         1_a5      0         0         0         || 0       C45     C65     0       Db5     0
0         0         0         1_ba      0         0         || 0       0       0       1_ba    Fba     0
D1g       0         0         0         Fbg       q1_bg+Eg  || 0       D4g     0       0       0       1_bg
0         1_a3      0         0         0         0         || C23     C43     0       Da3     0       0
C16       0         C56       Da6       0         0         || 0       0       1_a6    0       0       0
0         0         D5b       0         1_bb+Eb   0         || D2b     0       0       Fab     1_bb    0
0         0         0         Fag       0         1_bg      || 0       0       0       0       0       1_bg
"""

# -- the a > b layout; groups named by the symbols d, e, f, g, h and "1" -----

GREATER_ROWS = ["d", "f", "g", "e", "1", "f", "h", "e", "1", "g", "h"]
GREATER_COLS = ["d", "e", "1", "f", "g", "h", "e", "1", "f", "g", "h"]
GREATER_GRID = """
1_d       0         0         0         0         0         || 1bar_e  |       0       0       *
0         *         0         q1_f+A_f  0         0         || 0       |       1_f     0       *
0         0         0         0         q1_g      *         || 0       0       0       1_g     0
Ar_d      *         0         0         *         0         || 1_e     0       0       0       0
0         0         1         0         0         0         || 0       *       0       *       0
0         0         0         1_f       0         0         || 0       0       1_f     *       0
|*        0         0         0         *         q1_h+A_h  || 0       0       0       0       1_h
0         1_e       0         0         0         0         || 1_e     0       *       0       0
*         0         1         *         0         0         || 0       1       0       0       0
0         0         |         0         1_g+A_g   0         || *       0       *       1_g     0
0         0         0         *         0         1_h       || 0       0       0       0       1_g
"""
# the same groups as vertices of the 12 x 12 grid (a4 is empty when a > b)
GREATER_VERTICES_ROWS = ["a1", "ba", "bb", "a2", "a5", "ba", "bg", "a3", "a6", "bb", "bg"]
GREATER_VERTICES_COLS = ["a1", "a3", "a5", "ba", "bb", "bg", "a2", "a6", "ba", "bb", "bg"]

# -- the a = b layout; for c even every d is read as e ------------------------

EQUAL_ROWS = ["e", "d", "g", "e", "f", "h", "1", "g", "h"]
EQUAL_COLS = ["e", "1", "f", "g", "h", "e", "d", "g", "h"]
EQUAL_GRID = """
1_e       0         0         0         0         || A_e     0       0       *
0         |         1bar_f    0         *         || 0       1_d     0       0
0         0         0         q1_g      *         || 0       0       1_g     0
1_e       |         0         *         0         || 1_e     0       0       0
0         0         1_f       0         0         || 0       Ar_d    *       0
|*        0         0         *         q1_h+A_h  || 0       *       0       1_h
0         1         0         0         0         || *       *       0       0
0         0         *         1_g+A_g   0         || |*      0       1_g     0
0         0         0         0         1_h       || 0       0       0       1_h
"""
EQUAL_VERTICES_ROWS = ["a1", "a4", "bb", "a2", "a5", "bg", "a3", "bb", "bg"]
EQUAL_VERTICES_COLS = ["a1", "a3", "a5", "bb", "bg", "a2", "a4", "bb", "bg"]


@dataclass(frozen=True)
class Token:
    kind: str  # zero, identity, qidentity, generic, column, column_generic,
    # padded, companion, reduced, arrow
    sub: str | None = None
    extra: "Token | None" = None

    def __str__(self):
        return self.text

    @property
    def text(self):
        base = {
            "zero": "0",
            "identity": f"1_{self.sub}",
            "qidentity": f"q1_{self.sub}",
            "generic": "*",
            "column": "|",
            "column_generic": "|*",
            "padded": f"1bar_{self.sub}",
            "companion": f"A_{self.sub}",
            "reduced": f"Ar_{self.sub}",
            "arrow": self.sub,
        }[self.kind]
        return base + (f"+{self.extra.text}" if self.extra else "")


def parse_token(tok: str) -> Token:
    if "+" in tok:
        base, extra = tok.split("+", 1)
        b = parse_token(base)
        return Token(b.kind, b.sub, parse_token(extra))
    if tok == "0":
        return Token("zero")
    if tok == "1":
        return Token("identity", "1")
    if tok == "*":
        return Token("generic")
    if tok == "|":
        return Token("column")
    if tok == "|*":
        return Token("column_generic")
    for prefix, kind in (("q1_", "qidentity"), ("1bar_", "padded"), ("1_", "identity"),
                         ("Ar_", "reduced"), ("A_", "companion")):
        if tok.startswith(prefix):
            return Token(kind, tok[len(prefix):])
    return Token("arrow", tok)


def read_grid(text: str, ncols: int) -> list[list[Token]]:
    """Parse a layout; ``||`` separates the a-columns from the b-columns."""
    grid = []
    for line in text.strip().splitlines():
        left, right = line.split(" || ")
        toks = left.split() + right.split()
        if len(toks) != ncols:
            raise ShapeMismatch(f"layout row {line!r} has {len(toks)} tokens, expected {ncols}")
        grid.append([parse_token(t) for t in toks])
    return grid


@dataclass(frozen=True)
class Correction:
    row: int  # 1-based block coordinates, as in the layout
    col: int
    written: str
    used: str
    rule: str

    def __str__(self):
        return f"({self.row},{self.col}): {self.written} -> {self.used} [{self.rule}]"

    def to_json(self):
        return {"block": [self.row, self.col], "written": self.written, "used": self.used,
                "rule": self.rule}


def resolve_identity(token: Token, i: int, j: int, row_name: str, col_name: str,
                     alias=None) -> tuple[Token, Correction | None]:
    """Force the subscript of identity-type tokens to the slot's group name."""
    alias = alias or {}
    if token.kind not in ("identity", "qidentity"):
        return token, None
    sub = alias.get(token.sub, token.sub)
    row_name = alias.get(row_name, row_name)
    col_name = alias.get(col_name, col_name)
    if row_name != col_name or sub == row_name:
        return token, None
    extra = token.extra
    if extra is not None and extra.kind == "companion" and alias.get(extra.sub, extra.sub) == sub:
        extra = Token("companion", row_name)
    fixed = Token(token.kind, row_name, extra)
    return fixed, Correction(i + 1, j + 1, token.text, fixed.text, "identity size forced by grid")


# --------------------------------------------------------------------------
# symbolic assembly


class SymbolicAssembler:
    """Builds gadget blocks for a token grid against one parameter registry."""

    def __init__(self, registry, arrow_builder=None):
        self.registry = registry
        self.q_pid = None
        self.arrow_builder = arrow_builder

    def q(self):
        if self.q_pid is None:
            self.q_pid = self.registry.add("q")
        return self.q_pid

    def block(self, token: Token, h: int, w: int, size_of, coords):
        i, j = coords
        tag = f"{i + 1}.{j + 1}"

        def need(shape):
            if shape != (h, w):
                raise ShapeMismatch(
                    f"block ({i + 1},{j + 1}) token {token.text} is {shape[0]}x{shape[1]}, "
                    f"slot is {h}x{w}", coords=(i + 1, j + 1))

        kind = token.kind
        if kind == "zero":
            return None
        if kind in ("identity", "qidentity"):
            need((size_of(token.sub), size_of(token.sub)))
            blk = gadgets.identity(h) if kind == "identity" else gadgets.scaled_identity(h, self.q())
            if token.extra is not None:
                blk = blk + self.block(token.extra, h, w, size_of, coords)
            return blk
        if kind == "generic":
            return gadgets.generic(h, w, self.registry, f"G{tag}")
        if kind == "column":
            need((h, 1))
            return gadgets.basis_column(h)
        if kind == "column_generic":
            return gadgets.column_then_generic(h, w, self.registry, f"G{tag}")
        if kind == "padded":
            k = size_of(token.sub)
            need((k + 1, k))
            return gadgets.padded_identity(k)
        if kind == "companion":
            k = size_of(token.sub)
            need((k, k))
            return gadgets.companion(k, self.registry, f"A_{token.sub}@{tag}")
        if kind == "reduced":
            k = size_of(token.sub)
            need((k - 1, k))
            return gadgets.reduced_companion(k, self.registry, f"Ar_{token.sub}@{tag}")
        if kind == "arrow":
            if self.arrow_builder is None:
                raise ShapeMismatch(f"arrow {token.sub} has no builder", coords=(i + 1, j + 1))
            blk = self.arrow_builder(token.sub, h, w, self.registry)
            if blk is None:
                return None
            need(blk.shape)
            return blk
        raise AssertionError(kind)


def assemble_symbolic(grid, row_names, col_names, size_of, registry, arrow_builder=None,
                      alias=None):
    """Returns ``(SymbolicBlockMatrix, corrections, q_pid)``."""
    row_heights = [size_of(r) for r in row_names]
    col_widths = [size_of(c) for c in col_names]
    asm = SymbolicAssembler(registry, arrow_builder)
    blocks = {}
    corrections = []
    for i, row in enumerate(grid):
        for j, token in enumerate(row):
            token, corr = resolve_identity(token, i, j, row_names[i], col_names[j], alias)
            if corr:
                corrections.append(corr)
            h, w = row_heights[i], col_widths[j]
            if h == 0 or w == 0:
                continue
            blk = asm.block(token, h, w, lambda s: size_of(alias.get(s, s) if alias else s),
                            (i, j))
            if blk is not None:
                blocks[(i, j)] = blk
    layout = gadgets.SymbolicBlockMatrix(row_heights, col_widths, blocks, registry,
                                         list(row_names), list(col_names))
    return layout, corrections, asm.q_pid


# --------------------------------------------------------------------------
# numeric assembly on the 12 x 12 grid


def group_sizes(tau_dict):
    """Row heights and column widths of the 12 x 12 grid for a tau (short labels)."""
    rows = [tau_dict[VERTEX_SHORT[v]] for _, v in ROW_GROUPS]
    cols = [tau_dict[VERTEX_SHORT[v]] for _, v in COL_GROUPS]
    return rows, cols


def assemble_numeric(grid, tau_dict, q, field, arrows=None):
    """Numeric 12 x 12 block assembly.  ``arrows`` maps arrow labels to matrices."""
    from .linalg import block_assemble

    arrows = arrows or {}
    rows, cols = group_sizes(tau_dict)
    q = field(q)
    blocks = []
    corrections = []
    for i, row in enumerate(grid):
        out_row = []
        for j, token in enumerate(row):
            token, corr = resolve_identity(token, i, j, ROW_GROUPS[i][1], COL_GROUPS[j][1])
            if corr:
                corrections.append(corr)
            h, w = rows[i], cols[j]
            out_row.append(None if h == 0 or w == 0 else
                           _numeric_block(token, h, w, q, field, arrows, (i, j)))
        blocks.append(out_row)
    return block_assemble(blocks, rows, cols, field), corrections


def _numeric_block(token, h, w, q, field, arrows, coords):
    i, j = coords
    if token.kind == "zero":
        return None
    if token.kind in ("identity", "qidentity"):
        if h != w:
            raise ShapeMismatch(f"identity token {token.text} in a {h}x{w} slot",
                                coords=(i + 1, j + 1))
        blk = Matrix.identity(field, h)
        if token.kind == "qidentity":
            blk = blk.scale(q)
        if token.extra is not None:
            extra = _numeric_block(token.extra, h, w, q, field, arrows, coords)
            if extra is not None:
                blk = blk + extra
        return blk
    if token.kind == "arrow":
        m = arrows.get(token.sub)
        if m is None:
            return None
        if m.shape != (h, w):
            raise ShapeMismatch(f"arrow {token.sub} is {m.rows}x{m.cols}, slot ({i + 1},{j + 1}) "
                                f"is {h}x{w}", coords=(i + 1, j + 1))
        return m
    raise ShapeMismatch(f"token {token.text} has no numeric meaning on the 12x12 grid",
                        coords=(i + 1, j + 1))
