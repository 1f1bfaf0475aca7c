from itertools import product

import pytest

from b3param import gadgets
from b3param.dimvectors import TauVector, sigma_of_tau
from b3param.errors import BadQ, FieldError, NotCyclic, ShapeMismatch
from b3param.linalg import Matrix, rank
from b3param.quiver import (LinearSystem, Quiver, QuiverRep, base_change_rep, build_B0,
                            build_gadget_rep, canonical_form, contract_pair, cycle_trace,
                            euler_form, is_canonical, local_quiver_Q, markov_jacobian_rank,
                            markov_parameters, meataxe_is_simple, rep_to_sys,
                            subrep_exists_exhaustive, sys_to_rep, zero_rep)
from b3param.rng import SplitMix64
from b3param.scalars import RationalField, make_prime_field

from conftest import random_invertible, random_matrix

F7 = make_prime_field(7)
Q = RationalField()


def M(field, rows):
    return Matrix.from_rows(field, rows)


def test_sys_to_rep_scalar():
    rep = sys_to_rep(LinearSystem(M(Q, [[2]]), M(Q, [[3]]), M(Q, [[5]])))
    assert rep.dims == {"1": 1, "n": 1}
    assert [rep[k].to_lists() for k in ("b1", "c1", "A")] == [[[3]], [[5]], [[2]]]


def test_sys_to_rep_columns_and_round_trip(rng):
    A = random_matrix(F7, 3, 3, rng)
    B = random_matrix(F7, 3, 2, rng)
    C = random_matrix(F7, 2, 3, rng)
    sys = LinearSystem(A, B, C)
    rep = sys_to_rep(sys)
    assert rep["b2"] == B.submatrix(0, 3, 1, 2)
    assert rep["c1"] == C.submatrix(0, 1, 0, 3)
    back = rep_to_sys(rep)
    assert (back.A, back.B, back.C) == (A, B, C)
    again = sys_to_rep(back)
    assert again.matrices == rep.matrices and again.quiver == rep.quiver


def test_is_canonical_examples():
    N = M(Q, [[0, 1], [0, 0]])
    assert not is_canonical(LinearSystem(N, M(Q, [[1], [0]]), M(Q, [[1, 1]])))
    assert is_canonical(LinearSystem(N, M(Q, [[0], [1]]), M(Q, [[1, 0]])))
    assert not is_canonical(LinearSystem(N, M(Q, [[0], [0]]), M(Q, [[1, 0]])))


def test_canonical_form_example():
    sys = LinearSystem(M(Q, [[1, 0], [0, 2]]), M(Q, [[1], [1]]), M(Q, [[1, 0]]))
    out = canonical_form(sys)
    assert out.A.to_lists() == [[0, -2], [1, 3]]
    assert out.B.to_lists() == [[1], [0]]
    assert markov_parameters(out) == markov_parameters(sys)


def test_canonical_form_fixed_point():
    sys = LinearSystem(M(Q, [[0, -2], [1, 3]]), M(Q, [[1, 4], [0, 5]]), M(Q, [[1, 7]]))
    out = canonical_form(sys)
    assert (out.A, out.B, out.C) == (sys.A, sys.B, sys.C)


def test_canonical_form_not_cyclic():
    with pytest.raises(NotCyclic):
        canonical_form(LinearSystem(Matrix.identity(Q, 2), M(Q, [[1], [0]]), M(Q, [[1, 1]])))


def test_canonical_form_properties(big, rng):
    for _ in range(30):
        n, m, p = rng.randint(1, 4), rng.randint(1, 3), rng.randint(1, 3)
        sys = LinearSystem(random_matrix(big, n, n, rng), random_matrix(big, n, m, rng),
                           random_matrix(big, p, n, rng))
        out = canonical_form(sys)
        assert markov_parameters(out) == markov_parameters(sys)
        assert out.B.submatrix(0, n, 0, 1).to_lists() == [[1]] + [[0]] * (n - 1)
        assert [out.A[i, j] for i in range(n) for j in range(n - 1)] == \
            [1 if i == j + 1 else 0 for i in range(n) for j in range(n - 1)]
        assert is_canonical(out) == is_canonical(sys)


def test_equivalence_invariance(rng):
    for _ in range(40):
        n, m, p = rng.randint(1, 4), rng.randint(1, 3), rng.randint(1, 3)
        sys = LinearSystem(random_matrix(F7, n, n, rng), random_matrix(F7, n, m, rng),
                           random_matrix(F7, p, n, rng))
        other = sys.transform(random_invertible(F7, n, rng))
        assert markov_parameters(other) == markov_parameters(sys)
        assert is_canonical(other) == is_canonical(sys)


@pytest.mark.parametrize("n,m,p", list(product(range(1, 4), repeat=3)))
def test_markov_dimension(big, n, m, p):
    assert markov_jacobian_rank(n, m, p, big, seed=n * 9 + m * 3 + p) == (m + p) * n


def test_linear_system_json(rng):
    sys = LinearSystem(random_matrix(F7, 2, 2, rng), random_matrix(F7, 2, 1, rng),
                       random_matrix(F7, 3, 2, rng))
    back = LinearSystem.from_json(sys.to_json())
    assert (back.A, back.B, back.C) == (sys.A, sys.B, sys.C)


def test_shape_checks():
    q = Quiver(("u", "v"), [("u", "v", "f")])
    with pytest.raises(ShapeMismatch):
        QuiverRep(q, {"u": 1, "v": 2}, {"f": Matrix.zeros(Q, 1, 1)})
    with pytest.raises(ShapeMismatch):
        Quiver(("u",), [("u", "w", "f")])
    with pytest.raises(ShapeMismatch):
        Quiver(("u", "v"), [("u", "v", "f"), ("v", "u", "f")])


# gadget representations -----------------------------------------------------

def _labels(m, reg):
    out = []
    for row in m.to_lists():
        line = []
        for e in row:
            if e.terms:
                (pid, _), = e.terms
                line.append(reg.name_of(pid))
            else:
                line.append(e.constant)
        out.append(line)
    return out


def test_gadget_R1():
    reg = gadgets.ParameterRegistry()
    rep = build_gadget_rep("R_k", 1, reg)
    assert rep.dims == {"u": 1, "m": 1, "r": 1}
    assert _labels(rep["v"], reg) == [[1]]
    assert _labels(rep["X"], reg) == [["A.x1"]]
    assert _labels(rep["Y"], reg) == [[1]]
    assert _labels(rep["w"], reg) == [["y[0,0]"]]


def test_gadget_S2():
    reg = gadgets.ParameterRegistry()
    rep = build_gadget_rep("S_k", 2, reg)
    assert rep.dims == {"u": 1, "m": 2, "r": 1}
    assert _labels(rep["X"], reg) == [[1, "A.x1"]]
    assert _labels(rep["Y"], reg) == [[0], [1]]


def test_gadget_chain2():
    reg = gadgets.ParameterRegistry()
    rep = build_gadget_rep("chain_k", 2, reg)
    assert [rep.dims[v] for v in ("e1", "e2", "m", "r", "e3")] == [1, 1, 2, 1, 1]
    assert _labels(rep["z"], reg) == [["z[0,0]"]]
    assert rep["B"].shape == (1, 1)
    with pytest.raises(ShapeMismatch):
        build_gadget_rep("S_k", 1)


def _random_point(rep, field, seed):
    rng = SplitMix64(seed)
    count = max((pid + 1 for m in rep.matrices.values() if hasattr(m, "params")
                 for pid in m.params), default=0)
    return rep.evaluate(field, [field.random(rng) for _ in range(count)])


@pytest.mark.parametrize("kind,k", [("R_k", k) for k in range(1, 5)] + [("S_k", k) for k in range(2, 6)])
def test_gadget_reps_simple(big, kind, k):
    rep = _random_point(build_gadget_rep(kind, k), big, seed=k)
    assert meataxe_is_simple(rep)


def test_contract_R_shape_traces(big):
    for k in range(1, 5):
        rep = _random_point(build_gadget_rep("R_k", k), big, seed=100 + k)
        small = contract_pair(rep, "r")
        assert "r" not in small.quiver.vertices
        assert small["Y.X"] == rep["Y"] @ rep["X"]
        for j in range(1, 5):
            before = cycle_trace(rep, ["X", "Y"] * j)
            after = cycle_trace(small, ["Y.X"] * j)
            assert before == after
        assert cycle_trace(rep, ["v", "X", "Y", "w"]) == cycle_trace(small, ["v", "Y.X", "w"])


def test_contract_S_shape(big):
    rep = _random_point(build_gadget_rep("S_k", 3), big, seed=7)
    small = contract_pair(rep, "m")
    assert small.quiver.vertices == ("u", "r")
    loops = {a[2] for a in small.quiver.arrows if a[0] == a[1]}
    assert loops == {"w.v", "X.Y"}
    for j in range(1, 5):
        assert cycle_trace(rep, ["Y", "X"] * j) == cycle_trace(small, ["X.Y"] * j)
    assert cycle_trace(rep, ["v", "w"]) == cycle_trace(small, ["w.v"])


def test_contract_errors(big):
    sym = build_gadget_rep("R_k", 2)
    with pytest.raises(FieldError):
        contract_pair(sym, "r")
    rep = _random_point(sym, big, 1)
    with pytest.raises(ShapeMismatch):
        contract_pair(rep, "nowhere")
    sysrep = sys_to_rep(LinearSystem(Matrix.identity(big, 2), Matrix.zeros(big, 2, 1),
                                     Matrix.zeros(big, 1, 2)))
    with pytest.raises(ShapeMismatch):
        contract_pair(sysrep, "n")


# simplicity --------------------------------------------------------------------

def test_meataxe_trivial_cases():
    one = QuiverRep(Quiver(("u",), []), {"u": 1}, {}, F7)
    assert meataxe_is_simple(one)
    two = QuiverRep(Quiver(("u", "v"), []), {"u": 1, "v": 1}, {}, F7)
    assert not meataxe_is_simple(two)


def test_T1_simple():
    tau = TauVector(0, 0, 0, 0, 0, 0, 1, 0, 0)
    B = build_B0(tau, 2, F7)
    assert meataxe_is_simple(base_change_rep(B, sigma_of_tau(tau)))


def _oracle_has_subrep(rep):
    """Independent brute force: spin each projective point of each vertex space."""
    p = rep.field.p
    dims = rep.dims
    arrows = [(s, t, [[int(x) for x in rep[lab].row(i)] for i in range(rep[lab].rows)])
              for s, t, lab in rep.quiver.arrows]
    total = sum(dims.values())

    def reduce(basis, v):
        for piv, row in basis:
            if v[piv]:
                c = v[piv]
                v = [(x - c * y) % p for x, y in zip(v, row)]
        return v

    def closure(vertex, vec):
        # graded subspace: basis per vertex
        bases = {v: [] for v in dims}
        stack = [(vertex, vec)]
        while stack:
            v, x = stack.pop()
            r = reduce(bases[v], x)
            nz = next((i for i, c in enumerate(r) if c), None)
            if nz is None:
                continue
            inv = pow(r[nz], p - 2, p)
            r = [c * inv % p for c in r]
            bases[v] = [(piv, reduce([(nz, r)], row)) for piv, row in bases[v]] + [(nz, r)]
            for s, t, mat in arrows:
                if s == v:
                    stack.append((t, [sum(a * b for a, b in zip(row, r)) % p for row in mat]))
        return sum(len(b) for b in bases.values())

    for v, d in dims.items():
        for vec in product(range(p), repeat=d):
            nz = next((i for i, c in enumerate(vec) if c), None)
            if nz is None or vec[nz] != 1:
                continue
            if closure(v, list(vec)) < total:
                return True
    return False


def _random_rep(quiver, dims, rng, density):
    mats = {}
    for s, t, lab in quiver.arrows:
        vals = [rng.randint(0, 6) if rng.randint(0, 99) < density else 0
                for _ in range(dims[s] * dims[t])]
        mats[lab] = Matrix(dims[t], dims[s], F7, [F7(v) for v in vals])
    return QuiverRep(quiver, dims, mats, F7)


def test_meataxe_matches_oracle():
    rng = SplitMix64(42)
    shapes = [
        (Quiver(("u",), [("u", "u", "L1"), ("u", "u", "L2")]), 1),
        (Quiver(("u", "v"), [("u", "v", "f"), ("v", "u", "g"), ("v", "v", "h")]), 2),
        (Quiver(("u", "v", "w"), [("u", "v", "f"), ("v", "w", "g"), ("w", "u", "h"),
                                  ("v", "u", "k")]), 3),
    ]
    seen = {True: 0, False: 0}
    for trial in range(120):
        quiver, nv = shapes[trial % len(shapes)]
        total = rng.randint(1, 6)
        cuts = sorted(rng.randint(0, total) for _ in range(nv - 1))
        sizes = [b - a for a, b in zip([0] + cuts, cuts + [total])]
        dims = dict(zip(quiver.vertices, sizes))
        rep = _random_rep(quiver, dims, rng, density=[30, 60, 100][rng.randint(0, 2)])
        expected = not _oracle_has_subrep(rep)
        assert meataxe_is_simple(rep, seed=trial) == expected
        assert subrep_exists_exhaustive(rep) == (not expected)
        seen[expected] += 1
    assert seen[True] > 10 and seen[False] > 10


def test_sys_rep_simple_iff_canonical():
    rng = SplitMix64(7)
    seen = {True: 0, False: 0}
    for trial in range(100):
        n, m, p = (rng.randint(1, 4) for _ in range(3))
        dens = [25, 50, 100][rng.randint(0, 2)]

        def rnd(r, c):
            return Matrix(r, c, F7, [F7(rng.randint(1, 6)) if rng.randint(0, 99) < dens else F7(0)
                                     for _ in range(r * c)])
        sys = LinearSystem(rnd(n, n), rnd(n, m), rnd(p, n))
        verdict = is_canonical(sys)
        assert meataxe_is_simple(sys_to_rep(sys), seed=trial) == verdict
        seen[verdict] += 1
    assert min(seen.values()) > 10


# the local quiver and the base matrix -----------------------------------------

def test_local_quiver_counts():
    lq = local_quiver_Q()
    assert len(lq.vertices) == 9
    assert len(lq.arrows) == 33
    kinds = {}
    for _, _, lab in lq.arrows:
        kinds[lab[0]] = kinds.get(lab[0], 0) + 1
    assert kinds == {"C": 12, "D": 12, "E": 3, "F": 6}


def test_local_quiver_D_pairing():
    lq = local_quiver_Q()
    partner = {}
    for s, t, lab in lq.arrows:
        if lab.startswith("D"):
            a, b = (s, t) if s.startswith("a") else (t, s)
            partner.setdefault(a, set()).add(b)
    assert partner == {"a3": {"b_alpha"}, "a6": {"b_alpha"}, "a2": {"b_beta"}, "a5": {"b_beta"},
                       "a1": {"b_gamma"}, "a4": {"b_gamma"}}


def test_build_B0_examples(big):
    assert build_B0(TauVector(1, 0, 0, 0, 1, 1, 0, 0, 0), 2, big).is_identity()
    assert build_B0(TauVector(0, 0, 0, 0, 0, 0, 1, 0, 0), 2, Q).to_lists() == [[2, 1], [1, 1]]
    with pytest.raises(BadQ):
        build_B0(TauVector(0, 0, 0, 0, 0, 0, 1, 0, 0), 1, Q)
    with pytest.raises(BadQ):
        build_B0(TauVector(0, 0, 0, 0, 0, 0, 1, 0, 0), 0, Q)


def test_build_B0_invertible(big):
    rng = SplitMix64(3)
    for _ in range(30):
        tau = TauVector(*(rng.randint(0, 3) for _ in range(9)))
        B = build_B0(tau, 5, big)
        t = tau.as_tuple()
        n = sum(t[:6]) + 2 * sum(t[6:])
        assert B.shape == (n, n)
        assert rank(B) == B.rows


def test_euler_form_bipartite():
    from b3param.quiver import bipartite_quiver
    d = dict(a=2, b=1, x=1, y=1, z=1)
    # 4 + 1 + 1 + 1 + 1 on vertices, (2 + 1) * (1 + 1 + 1) on arrows
    assert euler_form(bipartite_quiver(), d, d) == -1


def test_quiver_rep_json(rng):
    lq = local_quiver_Q()
    dims = dict(zip(lq.vertices, (1, 0, 2, 0, 1, 1, 1, 0, 2)))
    rep = zero_rep(lq, dims, F7)
    mats = {lab: random_matrix(F7, dims[t], dims[s], rng) for s, t, lab in lq.arrows}
    rep = QuiverRep(lq, dims, mats, F7)
    back = QuiverRep.from_json(rep.to_json())
    assert back.quiver == rep.quiver and back.dims == rep.dims and back.matrices == rep.matrices
    js = rep.to_json()
    assert set(js) == {"vertices", "arrows"}
    assert set(js["arrows"][0]) == {"src", "dst", "label", "matrix"}


def test_endomorphism_dimension():
    from b3param.quiver import endomorphism_dimension
    two = QuiverRep(Quiver(("u", "v"), []), {"u": 1, "v": 1}, {}, F7)
    assert endomorphism_dimension(two) == 2
    tau = TauVector(0, 0, 0, 0, 0, 0, 1, 0, 0)
    T1 = base_change_rep(build_B0(tau, 2, F7), sigma_of_tau(tau))
    assert endomorphism_dimension(T1) == 1
    assert meataxe_is_simple(T1, absolute=True)


def test_simple_but_not_absolutely_simple():
    # t^2 + 1 is irreducible over F7, so its companion matrix has no invariant line,
    # yet it commutes with itself: the endomorphism field is F49
    loop = QuiverRep(Quiver(("u",), [("u", "u", "L")]), {"u": 2},
                     {"L": M(F7, [[0, 6], [1, 0]])}, F7)
    from b3param.quiver import endomorphism_dimension
    assert meataxe_is_simple(loop)
    assert not _oracle_has_subrep(loop)
    assert endomorphism_dimension(loop) == 2
    assert not meataxe_is_simple(loop, absolute=True)
