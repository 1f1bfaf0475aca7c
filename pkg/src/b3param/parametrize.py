"""Symbolic base-change matrices for each component, and their instantiation.

``plan_component`` reads the block layout matching the component's case
(a > b, or a = b) and turns every block into a gadget over one shared
parameter registry.  The scale ``mu`` is registered first; it never appears in
``B`` and only enters when the matrix is lifted to a braid representation.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property

from . import gadgets, layouts
from .dimvectors import (CaseEqualEven, CaseGreater, SigmaVector, TauVector, sigma_of_tau,
                         tau_for)
from .errors import PersistentlySingular, ShapeMismatch, Singular
from .linalg import Matrix, invert
from .quiver import QuiverRep, check_q, local_quiver_Q
from .rng import SplitMix64
from .scalars import Field

MAX_DRAWS = 5


@dataclass(frozen=True)
class GroupInfo:
    eigen: str  # x, y, z for rows; a, b for columns
    name: str  # group symbol (d, e, ..., or a vertex label)
    size: int

    def to_json(self):
        return [self.eigen, self.name, self.size]


@dataclass
class ComponentPlan:
    sigma: SigmaVector
    tau: TauVector
    case: object
    layout: gadgets.SymbolicBlockMatrix
    registry: gadgets.ParameterRegistry
    mu_param: int
    q_param: int | None
    row_groups: list
    col_groups: list
    corrections: list = dc_field(default_factory=list)

    @property
    def n(self):
        return self.sigma.n

    @property
    def case_name(self):
        return getattr(self.case, "name", str(self.case))

    @cached_property
    def symbolic(self) -> gadgets.SymbolicMatrix:
        return self.layout.flatten()

    def parameter_names(self):
        return list(self.registry.names)

    def b_params(self):
        """Parameter ids that occur in ``B`` (everything except ``mu``)."""
        return [p for p in range(self.registry.count) if p != self.mu_param]

    def evaluate(self, field: Field, values) -> Matrix:
        return self.symbolic.evaluate(field, values)

    def to_json(self) -> dict:
        return {
            "sigma": str(self.sigma),
            "tau": list(self.tau.as_tuple()),
            "case": self.case_name,
            "row_groups": [g.to_json() for g in self.row_groups],
            "col_groups": [g.to_json() for g in self.col_groups],
            "parameters": self.parameter_names(),
            "corrections": [c.to_json() for c in self.corrections],
            "layout": self.layout.to_json(),
        }


def _case_sizes(case) -> dict:
    sizes = {"1": 1, "e": case.e, "f": case.f, "g": case.g, "h": case.h}
    sizes["d"] = getattr(case, "d", case.e)
    return sizes


def plan_component(sigma: SigmaVector) -> ComponentPlan:
    tau, case = tau_for(sigma)
    sizes = _case_sizes(case)
    if isinstance(case, CaseGreater):
        grid = layouts.read_grid(layouts.GREATER_GRID, 11)
        rows, cols = layouts.GREATER_ROWS, layouts.GREATER_COLS
        row_eigen = "xxx" + "yyyy" + "zzzz"
        col_eigen = "a" * 6 + "b" * 5
    else:
        grid = layouts.read_grid(layouts.EQUAL_GRID, 9)
        rows, cols = layouts.EQUAL_ROWS, layouts.EQUAL_COLS
        row_eigen = "xxx" + "yyy" + "zzz"
        col_eigen = "a" * 5 + "b" * 4
    alias = {"d": "e"} if isinstance(case, CaseEqualEven) else None

    registry = gadgets.ParameterRegistry()
    mu = registry.add("mu")
    layout, corrections, q_pid = layouts.assemble_symbolic(
        grid, rows, cols, lambda s: sizes[s], registry, alias=alias)

    def groups(names, eigen):
        return [GroupInfo(ev, alias.get(nm, nm) if alias else nm, sizes[nm])
                for nm, ev in zip(names, eigen)]

    plan = ComponentPlan(sigma, tau, case, layout, registry, mu, q_pid,
                         groups(rows, row_eigen), groups(cols, col_eigen), corrections)
    _check_groups(plan)
    return plan


def _check_groups(plan: ComponentPlan):
    s = plan.sigma
    for eig, want in zip("xyz", (s.x, s.y, s.z)):
        got = sum(g.size for g in plan.row_groups if g.eigen == eig)
        if got != want:
            raise ShapeMismatch(f"row groups of {eig} sum to {got}, expected {want}")
    for eig, want in zip("ab", (s.a, s.b)):
        got = sum(g.size for g in plan.col_groups if g.eigen == eig)
        if got != want:
            raise ShapeMismatch(f"column groups of {eig} sum to {got}, expected {want}")


def count_parameters(plan: ComponentPlan) -> int:
    return plan.registry.count - 1


# --------------------------------------------------------------------------
# the general assembly from a representation of the local quiver


def _generic_arrow(label, h, w, registry):
    return gadgets.generic(h, w, registry, label)


def plan_general(tau, arrow_builder=None) -> ComponentPlan:
    """Symbolic assembly over the 12 x 12 grid with one block per local-quiver arrow.

    By default every arrow carries a generic matrix; ``arrow_builder(label, h,
    w, registry)`` may return another gadget, or ``None`` for a zero arrow.
    """
    tau = tau if isinstance(tau, TauVector) else TauVector(*tau)
    sizes = {short: tau.as_dict()[full] for short, full in layouts.VERTEX_SHORT.items()}
    grid = layouts.read_grid(layouts.GENERAL_GRID, 12)
    rows = [v for _, v in layouts.ROW_GROUPS]
    cols = [v for _, v in layouts.COL_GROUPS]
    registry = gadgets.ParameterRegistry()
    mu = registry.add("mu")
    layout, corrections, q_pid = layouts.assemble_symbolic(
        grid, rows, cols, lambda s: sizes[s], registry, arrow_builder or _generic_arrow)
    row_groups = [GroupInfo(e, layouts.VERTEX_SHORT[v], sizes[v]) for e, v in layouts.ROW_GROUPS]
    col_groups = [GroupInfo(e, layouts.VERTEX_SHORT[v], sizes[v]) for e, v in layouts.COL_GROUPS]
    sigma = sigma_of_tau(tau)
    return ComponentPlan(sigma, tau, "general", layout, registry, mu, q_pid,
                         row_groups, col_groups, corrections)


def assemble_from_local_rep(tau, qrep: QuiverRep, q, field: Field) -> Matrix:
    """The 12 x 12 assembly with the arrow matrices of ``qrep`` inserted."""
    tau = tau if isinstance(tau, TauVector) else TauVector(*tau)
    qv = check_q(q, field)
    want = tau.as_dict()
    if qrep.quiver.vertices != local_quiver_Q().vertices:
        raise ShapeMismatch("representation is not on the local quiver")
    for v, d in want.items():
        if qrep.dims[v] != d:
            raise ShapeMismatch(f"vertex {v} has dimension {qrep.dims[v]}, tau says {d}", coords=v)
    grid = layouts.read_grid(layouts.GENERAL_GRID, 12)
    m, _ = layouts.assemble_numeric(grid, want, qv, field, qrep.matrices)
    return m


# --------------------------------------------------------------------------
# points


@dataclass(frozen=True)
class PointAssignment:
    values: tuple  # indexed by parameter id
    field: Field
    seed: int
    draws: int = 1  # how many samples were needed for det(B) != 0

    def as_dict(self):
        return dict(enumerate(self.values))

    def to_json(self, registry=None):
        names = registry.names if registry is not None else [str(i) for i in range(len(self.values))]
        return {"field": self.field.spec, "seed": self.seed, "draws": self.draws,
                "values": {nm: self.field.encode(v) for nm, v in zip(names, self.values)}}


def draw_values(plan: ComponentPlan, field: Field, rng: SplitMix64) -> list:
    values = []
    for pid in range(plan.registry.count):
        if pid == plan.mu_param:
            values.append(field.random_nonzero(rng))
        elif pid == plan.q_param:
            while True:
                v = field.random(rng)
                if not (field.is_zero(v) or field.is_zero(v - field.one)):
                    break
            values.append(v)
        else:
            values.append(field.random(rng))
    return values


def instantiate(plan: ComponentPlan, field: Field, seed: int = 0):
    """Random point with ``det B != 0``; returns ``(B, PointAssignment)``."""
    rng = SplitMix64(seed)
    for draw in range(1, MAX_DRAWS + 1):
        values = draw_values(plan, field, rng)
        B = plan.evaluate(field, values)
        try:
            invert(B)
        except Singular:
            continue
        return B, PointAssignment(tuple(values), field, seed, draw)
    raise PersistentlySingular(f"B singular on {MAX_DRAWS} draws for sigma {plan.sigma}")
