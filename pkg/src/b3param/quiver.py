"""Quivers, their representations, and the linear-system dictionary.

A representation is stored as one matrix per arrow, of shape
``dim(target) x dim(source)``.  Matrices may be numeric (:class:`Matrix`) or
symbolic (:class:`SymbolicMatrix`, from the gadget builders); symbolic
representations are turned into numeric ones with :meth:`QuiverRep.evaluate`.

Simplicity is decided by viewing a representation as a module over the
algebra generated by the vertex idempotents and the arrow maps, all acting on
the direct sum of the vertex spaces.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

import flint


from . import gadgets, layouts
from .dimvectors import TauVector
from .errors import BadQ, FieldError, MeatAxeInconclusive, NotCyclic, ShapeMismatch
from .gadgets import SymbolicMatrix
from .linalg import (Matrix, hstack, invert, krylov_matrix, matrix_from_json,
                     matrix_to_json, rank, vstack, DualMatrix)
from .rng import SplitMix64
from .scalars import Field, default_field, parse_field


@dataclass(frozen=True)
class Quiver:
    vertices: tuple
    arrows: tuple  # ((src, dst, label), ...)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "arrows", tuple(tuple(a) for a in self.arrows))
        if len(set(self.vertices)) != len(self.vertices):
            raise ShapeMismatch("duplicate vertex labels")
        labels = [a[2] for a in self.arrows]
        if len(set(labels)) != len(labels):
            raise ShapeMismatch("duplicate arrow labels")
        known = set(self.vertices)
        for src, dst, label in self.arrows:
            if src not in known or dst not in known:
                raise ShapeMismatch(f"arrow {label} joins undeclared vertices {src!r}, {dst!r}")

    def arrow(self, label):
        for a in self.arrows:
            if a[2] == label:
                return a
        raise KeyError(label)

    def incoming(self, v):
        return [a for a in self.arrows if a[1] == v and a[0] != v]

    def outgoing(self, v):
        return [a for a in self.arrows if a[0] == v and a[1] != v]

    def loops(self, v):
        return [a for a in self.arrows if a[0] == v == a[1]]


def euler_form(quiver: Quiver, alpha: dict, beta: dict) -> int:
    """``<alpha, beta> = sum_v alpha_v beta_v - sum_(arrows u->v) alpha_u beta_v``."""
    total = sum(alpha.get(v, 0) * beta.get(v, 0) for v in quiver.vertices)
    total -= sum(alpha.get(s, 0) * beta.get(t, 0) for s, t, _ in quiver.arrows)
    return total


def bipartite_quiver() -> Quiver:
    """The quiver with s-eigenspaces ``a, b`` each mapping to the t-eigenspaces ``x, y, z``."""
    arrows = [(u, v, f"{u}{v}") for u in "ab" for v in "xyz"]
    return Quiver(("a", "b", "x", "y", "z"), arrows)


class QuiverRep:
    def __init__(self, quiver: Quiver, dims: dict, matrices: dict, field: Field | None = None):
        self.quiver = quiver
        self.dims = {v: int(dims.get(v, 0)) for v in quiver.vertices}
        if any(d < 0 for d in self.dims.values()):
            raise ShapeMismatch("negative vertex dimension")
        self.matrices = dict(matrices)
        for src, dst, label in quiver.arrows:
            m = self.matrices.get(label)
            if m is None:
                raise ShapeMismatch(f"arrow {label} has no matrix")
            if m.shape != (self.dims[dst], self.dims[src]):
                raise ShapeMismatch(
                    f"arrow {label}: matrix is {m.shape[0]}x{m.shape[1]}, endpoints need "
                    f"{self.dims[dst]}x{self.dims[src]}", coords=label)
        extra = set(self.matrices) - {a[2] for a in quiver.arrows}
        if extra:
            raise ShapeMismatch(f"matrices for unknown arrows {sorted(extra)}")
        if field is None:
            field = next((m.field for m in self.matrices.values() if isinstance(m, Matrix)), None)
        self.field = field

    @property
    def is_symbolic(self):
        return any(isinstance(m, SymbolicMatrix) for m in self.matrices.values())

    @property
    def total_dim(self):
        return sum(self.dims.values())

    def __getitem__(self, label):
        return self.matrices[label]

    def evaluate(self, field: Field, values) -> "QuiverRep":
        mats = {k: (m.evaluate(field, values) if isinstance(m, SymbolicMatrix) else m)
                for k, m in self.matrices.items()}
        return QuiverRep(self.quiver, self.dims, mats, field)

    def offsets(self):
        out, acc = {}, 0
        for v in self.quiver.vertices:
            out[v] = acc
            acc += self.dims[v]
        return out

    def generators(self) -> list[Matrix]:
        """Vertex idempotents and arrow maps embedded in the total space."""
        if self.is_symbolic:
            raise FieldError("evaluate a symbolic representation before using it as a module")
        field = self.field
        N = self.total_dim
        off = self.offsets()
        gens = []
        for v in self.quiver.vertices:
            if self.dims[v]:
                diag = [0] * N
                for i in range(self.dims[v]):
                    diag[off[v] + i] = 1
                gens.append(Matrix.diag(field, diag))
        for src, dst, label in self.quiver.arrows:
            m = self.matrices[label]
            if m.rows == 0 or m.cols == 0:
                continue
            rows = [[field.zero] * N for _ in range(N)]
            for i in range(m.rows):
                rows[off[dst] + i][off[src]: off[src] + m.cols] = m.row(i)
            gens.append(Matrix.from_rows(field, rows))
        return gens

    def to_json(self) -> dict:
        if self.is_symbolic:
            raise FieldError("only numeric representations serialize to JSON")
        return {
            "vertices": [{"label": v, "dim": self.dims[v]} for v in self.quiver.vertices],
            "arrows": [{"src": s, "dst": t, "label": lab, "matrix": matrix_to_json(self.matrices[lab])}
                       for s, t, lab in self.quiver.arrows],
        }

    @classmethod
    def from_json(cls, obj: dict, field: Field | None = None) -> "QuiverRep":
        vertices = [v["label"] for v in obj["vertices"]]
        dims = {v["label"]: v["dim"] for v in obj["vertices"]}
        arrows = [(a["src"], a["dst"], a["label"]) for a in obj["arrows"]]
        mats = {a["label"]: matrix_from_json(a["matrix"], field) for a in obj["arrows"]}
        if field is None and mats:
            field = next(iter(mats.values())).field
        if field is None:
            field = default_field()
        return cls(Quiver(vertices, arrows), dims, mats, field)


def cycle_trace(rep: QuiverRep, labels) -> object:
    """Trace of the composite along a closed path, arrows listed in travel order."""
    q = rep.quiver
    path = [q.arrow(lab) for lab in labels]
    for (s1, t1, _), (s2, _, _) in zip(path, path[1:]):
        if t1 != s2:
            raise ShapeMismatch(f"path breaks between {t1!r} and {s2!r}")
    if path[-1][1] != path[0][0]:
        raise ShapeMismatch("path is not closed")
    m = rep.matrices[labels[0]]
    for lab in labels[1:]:
        m = rep.matrices[lab] @ m
    return m.trace()


# --------------------------------------------------------------------------
# linear systems


@dataclass(frozen=True)
class LinearSystem:
    A: Matrix
    B: Matrix
    C: Matrix

    def __post_init__(self):
        n = self.A.rows
        if self.A.cols != n or self.B.rows != n or self.C.cols != n:
            raise ShapeMismatch(f"inconsistent shapes A{self.A.shape} B{self.B.shape} C{self.C.shape}")

    @property
    def n(self):
        return self.A.rows

    @property
    def m(self):
        return self.B.cols

    @property
    def p(self):
        return self.C.rows

    @property
    def field(self):
        return self.A.field

    def transform(self, g: Matrix) -> "LinearSystem":
        """``(g A g^-1, g B, C g^-1)``."""
        gi = invert(g)
        return LinearSystem(g @ self.A @ gi, g @ self.B, self.C @ gi)

    def to_json(self):
        return {"A": matrix_to_json(self.A), "B": matrix_to_json(self.B), "C": matrix_to_json(self.C)}

    @classmethod
    def from_json(cls, obj, field=None):
        field = field or parse_field(obj["A"]["field"])
        return cls(*(matrix_from_json(obj[k], field) for k in "ABC"))


def sys_to_rep(sys: LinearSystem) -> QuiverRep:
    n, m, p = sys.n, sys.m, sys.p
    f = sys.field
    arrows = [("1", "n", f"b{i + 1}") for i in range(m)]
    arrows += [("n", "1", f"c{j + 1}") for j in range(p)]
    arrows.append(("n", "n", "A"))
    mats = {f"b{i + 1}": sys.B.submatrix(0, n, i, i + 1) for i in range(m)}
    mats.update({f"c{j + 1}": sys.C.submatrix(j, j + 1, 0, n) for j in range(p)})
    mats["A"] = sys.A
    return QuiverRep(Quiver(("1", "n"), arrows), {"1": 1, "n": n}, mats, f)


def rep_to_sys(rep: QuiverRep) -> LinearSystem:
    q = rep.quiver
    bs = sorted((a for a in q.arrows if a[2].startswith("b")), key=lambda a: int(a[2][1:]))
    cs = sorted((a for a in q.arrows if a[2].startswith("c")), key=lambda a: int(a[2][1:]))
    n = rep.dims["n"]
    f = rep.field
    B = hstack(*[rep[a[2]] for a in bs]) if bs else Matrix.zeros(f, n, 0)
    C = vstack(*[rep[a[2]] for a in cs]) if cs else Matrix.zeros(f, 0, n)
    return LinearSystem(rep["A"], B, C)


def controllability_matrix(sys: LinearSystem) -> Matrix:
    blocks, w = [], sys.B
    for _ in range(sys.n):
        blocks.append(w)
        w = sys.A @ w
    return hstack(*blocks) if blocks and sys.m else Matrix.zeros(sys.field, sys.n, 0)


def observability_matrix(sys: LinearSystem) -> Matrix:
    blocks, w = [], sys.C
    for _ in range(sys.n):
        blocks.append(w)
        w = w @ sys.A
    return vstack(*blocks) if blocks and sys.p else Matrix.zeros(sys.field, 0, sys.n)


def is_canonical(sys: LinearSystem) -> bool:
    n = sys.n
    return rank(controllability_matrix(sys)) == n and rank(observability_matrix(sys)) == n


def canonical_form(sys: LinearSystem) -> LinearSystem:
    """Move ``A`` to companion form using the Krylov basis of the first input column."""
    n = sys.n
    if sys.m == 0:
        raise NotCyclic("no input columns")
    K = krylov_matrix(sys.A, sys.B.submatrix(0, n, 0, 1))
    if rank(K) < n:
        raise NotCyclic("the first column of B is not a cyclic vector for A")
    g = invert(K)
    return LinearSystem(g @ sys.A @ K, g @ sys.B, sys.C @ K)


def markov_parameters(sys: LinearSystem, count: int | None = None) -> list[Matrix]:
    count = 2 * sys.n if count is None else count
    out, w = [], sys.B
    for _ in range(count):
        out.append(sys.C @ w)
        w = sys.A @ w
    return out


def normal_form_layout(n, m, p, registry=None):
    """Symbolic ``(A_n, B., C)``: companion ``A``, ``B`` with first column ``e_1``, generic ``C``."""
    registry = registry or gadgets.ParameterRegistry()
    A = gadgets.companion(n, registry, "A")
    B = gadgets.column_then_generic(n, m, registry, "B")
    C = gadgets.generic(p, n, registry, "C")
    return A, B, C, registry


def markov_jacobian_rank(n: int, m: int, p: int, field: Field, seed: int = 0) -> int:
    """Rank of d(C A^k B, k < 2n) over the free entries of the companion normal form."""
    A, B, C, reg = normal_form_layout(n, m, p)
    rng = SplitMix64(seed)
    values = [field.random(rng) for _ in range(reg.count)]
    k = reg.count

    def jet(sm):
        return DualMatrix(sm.evaluate(field, values), [sm.derivative(i, field) for i in range(k)])

    jA, jB, jC = jet(A), jet(B), jet(C)
    rows = []
    w = jB
    for _ in range(2 * n):
        mk = jC @ w
        for i in range(p):
            for j in range(m):
                rows.append([t[i, j] for t in mk.tangents])
        w = jA @ w
    if not rows:
        return 0
    return rank(Matrix.from_rows(field, rows))


# --------------------------------------------------------------------------
# the small parametrized representations


def build_gadget_rep(kind: str, k: int, registry=None) -> QuiverRep:
    """``R_k``, ``S_k`` or ``chain_k`` with gadget blocks.

    R_k:      u(1) -v-> m(k) -X-> r(k) -Y-> m,  m -w-> u   (X companion, Y identity)
    S_k:      u(1) -v-> m(k) -X-> r(k-1) -Y-> m,  m -w-> u (X reduced companion, Y padded)
    chain_k: e1(1) <-> e2(1) <-> m(k) <-> r(k-1) <-> e3(k-1)
    """
    registry = registry if registry is not None else gadgets.ParameterRegistry()
    if kind == "R_k":
        if k < 1:
            raise ShapeMismatch("R_k needs k >= 1")
        dims = {"u": 1, "m": k, "r": k}
        mats = {"v": gadgets.basis_column(k), "X": gadgets.companion(k, registry, "A"),
                "Y": gadgets.identity(k), "w": gadgets.generic(1, k, registry, "y")}
        arrows = [("u", "m", "v"), ("m", "r", "X"), ("r", "m", "Y"), ("m", "u", "w")]
        return QuiverRep(Quiver(("u", "m", "r"), arrows), dims, mats)
    if k < 2:
        raise ShapeMismatch(f"{kind} needs k >= 2")
    if kind == "S_k":
        dims = {"u": 1, "m": k, "r": k - 1}
        mats = {"v": gadgets.basis_column(k), "X": gadgets.reduced_companion(k, registry, "A"),
                "Y": gadgets.padded_identity(k - 1), "w": gadgets.generic(1, k, registry, "y")}
        arrows = [("u", "m", "v"), ("m", "r", "X"), ("r", "m", "Y"), ("m", "u", "w")]
        return QuiverRep(Quiver(("u", "m", "r"), arrows), dims, mats)
    if kind == "chain_k":
        dims = {"e1": 1, "e2": 1, "m": k, "r": k - 1, "e3": k - 1}
        mats = {
            "one": gadgets.identity(1),
            "z": gadgets.generic(1, 1, registry, "z"),
            "v": gadgets.basis_column(k),
            "w": gadgets.generic(1, k, registry, "y"),
            "X": gadgets.reduced_companion(k, registry, "A"),
            "Y": gadgets.padded_identity(k - 1),
            "I": gadgets.identity(k - 1),
            "B": gadgets.generic(k - 1, k - 1, registry, "B"),
        }
        arrows = [("e1", "e2", "one"), ("e2", "e1", "z"), ("e2", "m", "v"), ("m", "e2", "w"),
                  ("m", "r", "X"), ("r", "m", "Y"), ("r", "e3", "I"), ("e3", "r", "B")]
        return QuiverRep(Quiver(("e1", "e2", "m", "r", "e3"), arrows), dims, mats)
    raise ValueError(f"unknown kind {kind!r}")


def contract_pair(rep: QuiverRep, vertex) -> QuiverRep:
    """Remove ``vertex``, replacing each pair (in-arrow a, out-arrow b) by ``b.a``.

    Traces of oriented cycles are unchanged, since every cycle through the
    vertex enters and leaves it once per visit.
    """
    q = rep.quiver
    if vertex not in q.vertices:
        raise ShapeMismatch(f"no vertex {vertex!r}")
    if q.loops(vertex):
        raise ShapeMismatch(f"vertex {vertex!r} carries a loop and cannot be contracted")
    if rep.is_symbolic:
        raise FieldError("contract a numeric representation (evaluate first)")
    ins, outs = q.incoming(vertex), q.outgoing(vertex)
    if not ins or not outs:
        raise ShapeMismatch(f"vertex {vertex!r} needs incoming and outgoing arrows")
    arrows = [a for a in q.arrows if vertex not in (a[0], a[1])]
    mats = {a[2]: rep[a[2]] for a in arrows}
    for s, _, a in ins:
        for _, t, b in outs:
            label = f"{b}.{a}"
            arrows.append((s, t, label))
            mats[label] = rep[b] @ rep[a]
    vertices = tuple(v for v in q.vertices if v != vertex)
    dims = {v: rep.dims[v] for v in vertices}
    return QuiverRep(Quiver(vertices, arrows), dims, mats, rep.field)


# --------------------------------------------------------------------------
# simplicity


def _ints(m: Matrix):
    return [[int(x) for x in m.row(i)] for i in range(m.rows)]


def spin(vectors, gens, p: int) -> list[list[int]]:
    """Echelon basis of the smallest subspace containing ``vectors`` and stable under ``gens``.

    Vectors and generators are plain integer lists reduced mod ``p``.
    """
    basis: dict[int, list[int]] = {}  # pivot -> row with 1 at pivot
    queue = [list(v) for v in vectors]
    N = len(gens[0]) if gens else (len(queue[0]) if queue else 0)
    while queue:
        v = [x % p for x in queue.pop()]
        for piv, row in basis.items():
            c = v[piv]
            if c:
                v = [(x - c * y) % p for x, y in zip(v, row)]
        lead = next((i for i, x in enumerate(v) if x), None)
        if lead is None:
            continue
        inv = pow(v[lead], -1, p)
        v = [x * inv % p for x in v]
        for piv, row in basis.items():
            c = row[lead]
            if c:
                basis[piv] = [(x - c * y) % p for x, y in zip(row, v)]
        basis[lead] = v
        if len(basis) == N:
            break
        for g in gens:
            queue.append([sum(a * b for a, b in zip(grow, v)) % p for grow in g])
    return [basis[k] for k in sorted(basis)]


def _poly_at(coeffs, a: Matrix) -> Matrix:
    """Horner evaluation of a polynomial (low degree first) at a square matrix."""
    n = a.rows
    out = Matrix.zeros(a.field, n, n)
    ident = Matrix.identity(a.field, n)
    for c in reversed(coeffs):
        out = out @ a + ident.scale(c)
    return out


def _kernel_vectors(m: Matrix) -> list[list[int]]:
    from .linalg import nullspace

    ns = nullspace(m)
    return [[int(ns[i, j]) for i in range(ns.rows)] for j in range(ns.cols)]


def endomorphism_dimension(rep: QuiverRep) -> int:
    """Dimension of the space of endomorphisms of ``rep`` over its prime field.

    An endomorphism is one matrix ``X_v`` per vertex with ``X_dst M = M X_src``
    for every arrow ``M``.  For a simple module this is the degree of its
    endomorphism field, so a value of 1 means the module stays simple over
    every extension.
    """
    field = rep.field
    if not getattr(field, "is_prime", False):
        raise FieldError("endomorphism_dimension needs a prime-field representation")
    p = field.p
    start, acc = {}, 0
    for v in rep.quiver.vertices:
        start[v] = acc
        acc += rep.dims[v] ** 2
    if acc == 0:
        return 0
    rows = []
    for src, dst, label in rep.quiver.arrows:
        du, dv = rep.dims[src], rep.dims[dst]
        if not du or not dv:
            continue
        m = _ints(rep[label])
        # entry (i, j) of X_dst M - M X_src, unknowns stored row-major per vertex
        for i in range(dv):
            for j in range(du):
                row = [0] * acc
                for k in range(dv):
                    if m[k][j]:
                        row[start[dst] + i * dv + k] += m[k][j]
                for k in range(du):
                    if m[i][k]:
                        row[start[src] + k * du + j] -= m[i][k]
                rows.append(row)
    if not rows:
        return acc
    return acc - flint.nmod_mat(rows, p).rank()


def meataxe_is_simple(rep: QuiverRep, seed: int = 0, trials: int = 12,
                      exhaust_limit: int = 20000, absolute: bool = False) -> bool:
    """Certified simplicity test (Norton's criterion with an exhaustive fallback).

    With ``absolute=True`` the module must also have only scalar
    endomorphisms, i.e. stay simple over the algebraic closure.
    """
    simple = _meataxe(rep, seed, trials, exhaust_limit)
    if simple and absolute:
        return endomorphism_dimension(rep) == 1
    return simple


def _meataxe(rep, seed, trials, exhaust_limit):
    field = rep.field
    if not getattr(field, "is_prime", False):
        raise FieldError("meataxe_is_simple needs a prime-field representation")
    N = rep.total_dim
    if N == 0:
        raise ShapeMismatch("the zero representation is not a module to test")
    if N == 1:
        return True
    p = field.p
    gens = rep.generators()
    igens = [_ints(g) for g in gens]
    tgens = [_ints(g.T) for g in gens]
    rng = SplitMix64(seed)

    def combo():
        acc = Matrix.zeros(field, N, N)
        for g in gens:
            acc = acc + g.scale(field.random(rng))
        return acc

    fallback = None
    for _ in range(trials):
        X, Y = combo(), combo()
        A = X + X @ Y + Y @ X @ Y
        _, factors = A.flint().charpoly().factor()
        for fpoly, _mult in sorted(factors, key=lambda fm: fm[0].degree()):
            coeffs = [int(c) for c in fpoly.coeffs()]
            fA = _poly_at(coeffs, A)
            kern = _kernel_vectors(fA)
            deg = fpoly.degree()
            if len(kern) == deg:
                if len(spin([kern[0]], igens, p)) < N:
                    return False
                dual = _kernel_vectors(fA.T)
                return len(spin([dual[0]], tgens, p)) == N
            if fallback is None or len(kern) < len(fallback[0]):
                fallback = (kern, fA)
    kern, fA = fallback
    count = (p ** len(kern) - 1) // (p - 1)
    if count > exhaust_limit:
        raise MeatAxeInconclusive(
            f"no good algebra element in {trials} trials and {count} kernel lines to exhaust")
    # every kernel vector must generate the module, and one dual vector must too
    for v in _projective_points(kern, p):
        if len(spin([v], igens, p)) < N:
            return False
    dual = _kernel_vectors(fA.T)
    return len(spin([dual[0]], tgens, p)) == N


def _projective_points(basis, p):
    """One representative per line in the span of ``basis`` (leading coefficient 1)."""
    k = len(basis)
    N = len(basis[0])
    for lead in range(k):
        for tail in iproduct(range(p), repeat=k - lead - 1):
            coeffs = [0] * lead + [1] + list(tail)
            yield [sum(c * b[i] for c, b in zip(coeffs, basis)) % p for i in range(N)]


def subrep_exists_exhaustive(rep: QuiverRep) -> bool:
    """Oracle: spin every nonzero vector of every vertex space (small reps only)."""
    p = rep.field.p
    N = rep.total_dim
    gens = [_ints(g) for g in rep.generators()]
    off = rep.offsets()
    for v in rep.quiver.vertices:
        d = rep.dims[v]
        if not d:
            continue
        unit = [[1 if i == off[v] + j else 0 for i in range(N)] for j in range(d)]
        for vec in _projective_points(unit, p):
            if len(spin([vec], gens, p)) < N:
                return True
    return False


# --------------------------------------------------------------------------
# the local quiver and the base change at the semisimple point

_GREEK = {"a": "b_alpha", "b": "b_beta", "g": "b_gamma"}


def _vertex(code: str) -> str:
    return _GREEK[code] if code in _GREEK else f"a{code}"


def local_quiver_Q() -> Quiver:
    vertices = ("a1", "a2", "a3", "a4", "a5", "a6", "b_alpha", "b_beta", "b_gamma")
    arrows = []
    for i in range(1, 7):
        j = i % 6 + 1
        arrows.append((f"a{i}", f"a{j}", f"C{i}{j}"))
        arrows.append((f"a{j}", f"a{i}", f"C{j}{i}"))
    for b, (i, j) in (("a", (3, 6)), ("b", (2, 5)), ("g", (1, 4))):
        for k in (i, j):
            arrows.append((f"a{k}", _vertex(b), f"D{k}{b}"))
            arrows.append((_vertex(b), f"a{k}", f"D{b}{k}"))
    for b in "abg":
        arrows.append((_vertex(b), _vertex(b), f"E{b}"))
    for u in "abg":
        for v in "abg":
            if u != v:
                arrows.append((_vertex(u), _vertex(v), f"F{u}{v}"))
    return Quiver(vertices, arrows)


def zero_rep(quiver: Quiver, dims: dict, field: Field) -> QuiverRep:
    mats = {lab: Matrix.zeros(field, dims.get(t, 0), dims.get(s, 0)) for s, t, lab in quiver.arrows}
    return QuiverRep(quiver, dims, mats, field)


def _tau(tau) -> TauVector:
    return tau if isinstance(tau, TauVector) else TauVector(*tau)


def check_q(q, field: Field):
    qv = field(q)
    if field.is_zero(qv) or field.is_zero(qv - field.one):
        raise BadQ(f"q = {q} is excluded (q must avoid 0 and 1)")
    return qv


def build_B0(tau, q, field: Field | None = None) -> Matrix:
    field = field or default_field()
    qv = check_q(q, field)
    tau = _tau(tau)
    if any(v < 0 for v in tau.as_tuple()):
        raise ShapeMismatch(f"negative entry in tau {tau}")
    grid = layouts.read_grid(layouts.BASE_GRID, 12)
    m, _ = layouts.assemble_numeric(grid, tau.as_dict(), qv, field)
    return m


def base_corrections() -> list:
    """Subscript corrections applied when reading the base layout."""
    grid = layouts.read_grid(layouts.BASE_GRID, 12)
    out = []
    for i, row in enumerate(grid):
        for j, tok in enumerate(row):
            _, corr = layouts.resolve_identity(tok, i, j, layouts.ROW_GROUPS[i][1],
                                               layouts.COL_GROUPS[j][1])
            if corr:
                out.append(corr)
    return out


# --------------------------------------------------------------------------
# base change matrices as quiver representations


def base_change_quiver() -> Quiver:
    """s-eigenspaces ``a, b`` and t-eigenspaces ``x, y, z`` with arrows both ways."""
    arrows = [(u, v, f"{u}{v}") for u in "ab" for v in "xyz"]
    arrows += [(v, u, f"{v}{u}") for u in "ab" for v in "xyz"]
    return Quiver(("a", "b", "x", "y", "z"), arrows)


def base_change_rep(B: Matrix, sigma) -> QuiverRep:
    """Blocks of ``B`` (columns a, b -> rows x, y, z) together with the blocks of ``B^-1``.

    Subrepresentations are exactly the subspaces stable under both ``s`` and
    ``t``, so this is simple iff the lifted braid representation is
    irreducible.  The one-way bipartite representation alone is never simple
    once both sides are nonzero (the t-side spans a subrepresentation).
    """
    a, b, x, y, z = sigma.as_tuple()
    if B.shape != (a + b, a + b):
        raise ShapeMismatch(f"B is {B.rows}x{B.cols}, sigma needs n = {a + b}")
    Bi = invert(B)
    cols = {"a": (0, a), "b": (a, a + b)}
    rows = {"x": (0, x), "y": (x, x + y), "z": (x + y, x + y + z)}
    mats = {}
    for u, (c0, c1) in cols.items():
        for v, (r0, r1) in rows.items():
            mats[f"{u}{v}"] = B.submatrix(r0, r1, c0, c1)
            mats[f"{v}{u}"] = Bi.submatrix(c0, c1, r0, r1)
    dims = dict(a=a, b=b, x=x, y=y, z=z)
    return QuiverRep(base_change_quiver(), dims, mats, B.field)
