import pytest

from b3param.dimvectors import (CaseEqualEven, SigmaVector, TauVector, enumerate_components,
                                n_sigma)
from b3param.errors import BadQ, PersistentlySingular, ShapeMismatch, UnsupportedComponent
from b3param.linalg import Matrix, det
from b3param.parametrize import (MAX_DRAWS, assemble_from_local_rep, count_parameters,
                                 instantiate, plan_component, plan_general)
from b3param.quiver import QuiverRep, build_B0, local_quiver_Q, zero_rep
from b3param.rng import SplitMix64
from b3param.scalars import RationalField, make_prime_field

Q = RationalField()
F7 = make_prime_field(7)


def _supported(n):
    for s in enumerate_components(n):
        try:
            yield plan_component(s)
        except UnsupportedComponent:
            pass


def _shape(plan):
    """Entry pattern of the symbolic layout: constants, or parameter names."""
    out = []
    for row in plan.symbolic.to_lists():
        line = []
        for e in row:
            if e.terms:
                (pid, _), = e.terms
                line.append(plan.registry.name_of(pid))
            else:
                line.append(int(e.constant))
        out.append(line)
    return out


def test_plan_211():
    plan = plan_component(SigmaVector(2, 1, 1, 1, 1))
    assert plan.layout.shape == (3, 3)
    shape = _shape(plan)
    p1, p2 = shape[1][2], shape[2][0]
    assert shape == [[1, 0, 1], [0, 1, p1], [p2, 1, 1]]
    assert {p1, p2} | {"mu"} == set(plan.parameter_names())
    assert count_parameters(plan) == 2 == n_sigma(plan.sigma)
    assert plan.q_param is None


def test_plan_32221():
    plan = plan_component(SigmaVector(3, 2, 2, 2, 1))
    assert plan.layout.shape == (5, 5)
    names = plan.parameter_names()
    assert "q" in names and "mu" in names
    assert sum(nm.startswith("A_f") for nm in names) == 1
    assert sum(nm.startswith("G") for nm in names) == 3
    assert count_parameters(plan) == 5
    nonempty = [(g.eigen, g.size) for g in plan.row_groups if g.size]
    assert nonempty == [("x", 1), ("x", 1), ("y", 1), ("y", 1), ("z", 1)]


def test_plan_33222():
    plan = plan_component(SigmaVector(3, 3, 2, 2, 2))
    assert plan.layout.shape == (6, 6)
    assert isinstance(plan.case, CaseEqualEven)
    c = plan.case
    assert (c.e, c.f, c.g, c.h) == (1, 0, 0, 1)
    # the d -> e substitution leaves no group named d
    assert all(g.name != "d" for g in plan.row_groups + plan.col_groups)


def test_group_sums_exhaustive():
    for n in range(2, 31):
        for plan in _supported(n):
            s = plan.sigma
            for eig, want in zip("xyz", (s.x, s.y, s.z)):
                assert sum(g.size for g in plan.row_groups if g.eigen == eig) == want
            for eig, want in zip("ab", (s.a, s.b)):
                assert sum(g.size for g in plan.col_groups if g.eigen == eig) == want
            assert plan.layout.shape == (n, n)


def test_parameters_occur_in_layout():
    for n in range(2, 13):
        for plan in _supported(n):
            used = set()
            for row in plan.symbolic.to_lists():
                for e in row:
                    used.update(pid for pid, _ in e.terms)
            assert used | {plan.mu_param} == set(range(plan.registry.count))


def test_count_bound():
    for n in range(2, 21):
        for plan in _supported(n):
            assert count_parameters(plan) <= n_sigma(plan.sigma) + 1


def test_q_absent_without_fgh_blocks():
    plan = plan_component(SigmaVector(2, 1, 1, 1, 1))
    assert "q" not in plan.parameter_names()


def test_zero_point_211():
    plan = plan_component(SigmaVector(2, 1, 1, 1, 1))
    B = plan.evaluate(Q, [0] * plan.registry.count)
    assert B.to_lists() == [[1, 0, 1], [0, 1, 0], [0, 1, 1]]
    assert det(B) == 1


def test_instantiate_deterministic(big):
    plan = plan_component(SigmaVector(4, 3, 3, 2, 2))
    B1, pt1 = instantiate(plan, big, seed=11)
    B2, pt2 = instantiate(plan, big, seed=11)
    assert B1 == B2 and pt1.values == pt2.values
    B3, _ = instantiate(plan, big, seed=12)
    assert B3 != B1
    assert not big.is_zero(pt1.values[plan.mu_param])
    if plan.q_param is not None:
        q = pt1.values[plan.q_param]
        assert not big.is_zero(q) and not big.is_zero(q - big.one)
    js = pt1.to_json(plan.registry)
    assert set(js["values"]) == set(plan.parameter_names())


def test_instantiate_mod7():
    plan = next(_supported(5))
    B, _ = instantiate(plan, F7, seed=0)
    assert B.field is F7
    assert all(0 <= int(x) < 7 for x in B.entries)


def test_persistently_singular():
    plan = plan_component(SigmaVector(2, 1, 1, 1, 1))
    # force singular evaluations by patching evaluate on this plan instance
    plan.evaluate = lambda field, values: Matrix.zeros(field, 3, 3)
    with pytest.raises(PersistentlySingular):
        instantiate(plan, F7, seed=0)
    assert MAX_DRAWS == 5


# general assembly ----------------------------------------------------------------

def _qrep(tau, values, field):
    lq = local_quiver_Q()
    d = tau.as_dict()
    mats = {lab: (Matrix.from_rows(field, values[lab]) if lab in values
                  else Matrix.zeros(field, d[t], d[s])) for s, t, lab in lq.arrows}
    return QuiverRep(lq, d, mats, field)


def test_assembly_hexagon_example():
    tau = TauVector(1, 0, 0, 0, 1, 1, 0, 0, 0)
    vals = {"C61": [[11]], "C65": [[12]], "C16": [[13]], "C56": [[14]]}
    B = assemble_from_local_rep(tau, _qrep(tau, vals, Q), 2, Q)
    assert B.to_lists() == [[1, 0, 11], [0, 1, 12], [13, 14, 1]]


def test_assembly_loop_example():
    tau = TauVector(0, 0, 0, 0, 0, 0, 1, 0, 0)
    for q, e in ((2, 7), (5, -3)):
        B = assemble_from_local_rep(tau, _qrep(tau, {"Ea": [[e]]}, Q), q, Q)
        assert B.to_lists() == [[q + e, 1], [1, 1]]


def test_assembly_zero_is_base(big):
    rng = SplitMix64(99)
    lq = local_quiver_Q()
    for _ in range(50):
        tau = TauVector(*(rng.randint(0, 3) for _ in range(9)))
        if not any(tau.as_tuple()):
            continue
        q = rng.randint(2, 1000)
        rep = zero_rep(lq, tau.as_dict(), big)
        assert assemble_from_local_rep(tau, rep, q, big) == build_B0(tau, q, big)


def test_plan_general_at_zero_is_base(big):
    rng = SplitMix64(5)
    for _ in range(10):
        tau = TauVector(*(rng.randint(0, 2) for _ in range(9)))
        if not any(tau.as_tuple()):
            continue
        plan = plan_general(tau)
        values = [big(0)] * plan.registry.count
        if plan.q_param is not None:
            values[plan.q_param] = big(3)
        assert plan.evaluate(big, values) == build_B0(tau, 3, big)


def test_assembly_errors():
    tau = TauVector(0, 0, 0, 0, 0, 0, 1, 0, 0)
    rep = _qrep(tau, {}, Q)
    with pytest.raises(BadQ):
        assemble_from_local_rep(tau, rep, 1, Q)
    with pytest.raises(ShapeMismatch):
        assemble_from_local_rep(TauVector(0, 0, 0, 0, 0, 0, 0, 1, 0), rep, 2, Q)


def test_plan_json():
    js = plan_component(SigmaVector(3, 2, 2, 2, 1)).to_json()
    assert js["sigma"] == "3,2:2,2,1"
    assert js["corrections"] and js["corrections"][0]["used"] == "1_h"
    assert js["parameters"][0] == "mu"
