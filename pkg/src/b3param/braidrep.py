"""Braid group representations lifted from base-change matrices.

For a base change ``B`` the two generators are

    sigma1 = mu * B^-1 D_t B * D_s,     sigma2 = mu * D_s * B^-1 D_t B

with ``D_t = diag(1_x, rho^2 1_y, rho 1_z)`` and ``D_s = diag(1_a, -1_b)``.
Then ``sigma1 sigma2 sigma1 = mu^3 D_s`` and ``(sigma1 sigma2)^3 = mu^6``, so
the braid and central relations hold for every invertible ``B``.

The modular-group generators used for trace coordinates are
``s = mu^-3 sigma1 sigma2 sigma1 = D_s`` and ``t = mu^-4 (sigma1 sigma2)^2 =
B^-1 D_t B``, whose eigenvalue multiplicities are ``(a, b)`` and ``(x, y, z)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dimvectors import SigmaVector, n_sigma, tau_for
from .errors import FieldError, RankUnstable, UnsupportedComponent, ZeroMu
from .linalg import DualMatrix, Matrix, invert, kron, matrix_to_json, rank, row_space, vstack
from .parametrize import ComponentPlan, count_parameters, instantiate, plan_component
from .scalars import Field

DEFAULT_CAP = 12


def t_diagonal(sigma: SigmaVector, field: Field) -> Matrix:
    if not field.has_rho:
        raise FieldError(f"field {field.spec} has no primitive cube root of unity")
    r = field.rho
    return Matrix.diag(field, [field.one] * sigma.x + [r * r] * sigma.y + [r] * sigma.z)


def s_diagonal(sigma: SigmaVector, field: Field) -> Matrix:
    return Matrix.diag(field, [1] * sigma.a + [-1] * sigma.b)


@dataclass(frozen=True)
class BraidRep:
    sigma1: Matrix
    sigma2: Matrix
    mu: object
    sigma: SigmaVector
    field: Field

    @property
    def n(self):
        return self.sigma1.rows

    def s(self):
        mi = self.field.inv(self.mu)
        return (self.sigma1 @ self.sigma2 @ self.sigma1).scale(mi * mi * mi)

    def t(self):
        mi = self.field.inv(self.mu)
        p = self.sigma1 @ self.sigma2
        return (p @ p).scale(mi ** 4)

    def to_json(self):
        return {"sigma": str(self.sigma), "field": self.field.spec, "mu": self.field.encode(self.mu),
                "sigma1": matrix_to_json(self.sigma1), "sigma2": matrix_to_json(self.sigma2)}


def lift(B: Matrix, mu, sigma: SigmaVector) -> BraidRep:
    field = B.field
    mu = field(mu)
    if field.is_zero(mu):
        raise ZeroMu("mu must be nonzero")
    if B.shape != (sigma.n, sigma.n):
        raise FieldError(f"B is {B.rows}x{B.cols} but sigma has n = {sigma.n}")
    T = invert(B) @ t_diagonal(sigma, field) @ B
    Ds = s_diagonal(sigma, field)
    return BraidRep((T @ Ds).scale(mu), (Ds @ T).scale(mu), mu, sigma, field)


def verify_relations(rep: BraidRep) -> dict:
    s1, s2 = rep.sigma1, rep.sigma2
    braid = s1 @ s2 @ s1 == s2 @ s1 @ s2
    p = s1 @ s2
    central = p @ p @ p == Matrix.identity(rep.field, rep.n).scale(rep.mu ** 6)
    return {"braid": braid, "central": central}


def burnside_dimension(rep: BraidRep) -> int:
    """Dimension of the algebra generated by sigma1 and sigma2.

    Starts from the identity and closes the span under left multiplication by
    both generators, working with matrices flattened row-major: left
    multiplication by g acts on a flattened row vector as ``kron(g^T, I)``.
    """
    n = rep.n
    field = rep.field
    ident = Matrix.identity(field, n)
    ops = [kron(g.T, ident) for g in (rep.sigma1, rep.sigma2)]
    span = row_space(ident.flatten())
    while True:
        grown = row_space(vstack(span, *(span @ m for m in ops)))
        if grown.rows == span.rows or grown.rows == n * n:
            return grown.rows
        span = grown


# --------------------------------------------------------------------------
# words and trace coordinates


@dataclass(frozen=True)
class WordList:
    """Words as strings.

    c2c3: letters ``s`` and ``t``; ``"st2st"`` is ``s t^2 s t``.
    b3:   letters ``1`` and ``2`` for sigma1 and sigma2.
    """
    mode: str
    words: tuple
    max_syllables: int

    def __len__(self):
        return len(self.words)


def necklaces(length: int):
    """Exponent sequences over {1, 2}, one per rotation class (lexicographically least)."""
    out = []
    for bits in range(2 ** length):
        seq = tuple(1 + ((bits >> (length - 1 - i)) & 1) for i in range(length))
        if all(seq <= seq[i:] + seq[:i] for i in range(1, length)):
            out.append(seq)
    return out


def syllable_word(exps, mode="c2c3") -> str:
    if mode == "c2c3":
        return "".join("s" + ("t" if e == 1 else "t2") for e in exps)
    return "".join("121" + "12" * e for e in exps)


BASE_WORDS = {"c2c3": ("s", "t", "t2"), "b3": ("1", "2", "12")}


def word_list(mode: str, max_syllables: int) -> WordList:
    words = list(BASE_WORDS[mode])
    for length in range(1, max_syllables + 1):
        words.extend(syllable_word(e, mode) for e in necklaces(length))
    return WordList(mode, tuple(words), max_syllables)


def _parse_c2c3(word: str):
    letters, i = [], 0
    while i < len(word):
        if word[i] == "t" and word[i + 1: i + 2] == "2":
            letters.append("t2")
            i += 2
        else:
            letters.append(word[i])
            i += 1
    return letters


def evaluate_word(word: str, mode: str, gens: dict):
    """Product of the letters of ``word`` (left to right) from ``gens``."""
    letters = _parse_c2c3(word) if mode == "c2c3" else list(word)
    out = gens[letters[0]]
    for letter in letters[1:]:
        out = out @ gens[letter]
    return out


def trace_coordinates(rep: BraidRep, words: WordList) -> list:
    if words.mode == "c2c3":
        s, t = rep.s(), rep.t()
        gens = {"s": s, "t": t, "t2": t @ t}
    else:
        gens = {"1": rep.sigma1, "2": rep.sigma2}
    return [evaluate_word(w, words.mode, gens).trace() for w in words.words]


# --------------------------------------------------------------------------
# Jacobian rank of the trace coordinates


@dataclass
class RankResult:
    rank: int
    directions: int
    history: list  # rank after each syllable length (index 0: the base words)
    words: int

    def to_json(self):
        return {"rank": self.rank, "directions": self.directions, "history": self.history,
                "words": self.words}


def _jets(plan: ComponentPlan, field: Field, values, mode: str):
    """Dual-number generators for the chosen mode, one direction per parameter."""
    sym = plan.symbolic
    if mode == "c2c3":
        dirs = plan.b_params()
    else:
        dirs = list(range(plan.registry.count))
    B = sym.evaluate(field, values)
    dB = DualMatrix(B, [sym.derivative(p, field) for p in dirs])
    T = dB.inverse() @ t_diagonal(plan.sigma, field) @ dB
    Ds = s_diagonal(plan.sigma, field)
    if mode == "c2c3":
        s = DualMatrix.constant(Ds, len(dirs))
        return {"s": s, "t": T, "t2": T @ T}, len(dirs)
    mu = values[plan.mu_param]
    dmu = [field.one if p == plan.mu_param else field.zero for p in dirs]
    s1 = (T @ Ds).scale(mu, dmu)
    s2 = (Ds @ T).scale(mu, dmu)
    return {"1": s1, "2": s2}, len(dirs)


def _tangent_row(dm: DualMatrix):
    return [t.trace() for t in dm.tangents]


def jacobian_rank_details(plan: ComponentPlan, field: Field, seed: int = 0, mode: str = "c2c3",
                          words: WordList | None = None, cap: int = DEFAULT_CAP,
                          values=None) -> RankResult:
    """Exact rank of ``d tr(w) / d p`` at the point drawn from ``seed``.

    Without an explicit word list, syllable lengths are added one at a time
    until the rank reaches the number of directions or two consecutive lengths
    add nothing.  Reaching ``cap`` while the rank still moves raises
    :class:`RankUnstable`.
    """
    mode = mode.lower()
    if mode not in ("c2c3", "b3"):
        raise ValueError(f"unknown mode {mode!r}")
    if not getattr(field, "is_prime", False):
        raise FieldError("jacobian_rank needs a prime field")
    if values is None:
        _, point = instantiate(plan, field, seed)
        values = list(point.values)
    gens, ndirs = _jets(plan, field, values, mode)
    if ndirs == 0:
        return RankResult(0, 0, [0], 0)

    if words is not None:
        rows = [_tangent_row(evaluate_word(w, mode, gens)) for w in words.words]
        r = rank(Matrix.from_rows(field, rows)) if rows else 0
        return RankResult(r, ndirs, [r], len(rows))

    if mode == "c2c3":
        syllables = {1: gens["s"] @ gens["t"], 2: gens["s"] @ gens["t2"]}
    else:
        s_word = gens["1"] @ gens["2"] @ gens["1"]
        t_word = gens["1"] @ gens["2"]
        syllables = {1: s_word @ t_word, 2: s_word @ t_word @ t_word}

    rows = [_tangent_row(evaluate_word(w, mode, gens)) for w in BASE_WORDS[mode]]
    basis = row_space(Matrix.from_rows(field, rows))
    history = [basis.rows]
    nwords = len(rows)
    prefixes = {(): None}
    stable = 0
    for length in range(1, cap + 1):
        new_prefixes = {}
        for pre, prod in prefixes.items():
            for e in (1, 2):
                new_prefixes[pre + (e,)] = syllables[e] if prod is None else prod @ syllables[e]
        prefixes = new_prefixes
        rows = [_tangent_row(prefixes[seq]) for seq in necklaces(length)]
        nwords += len(rows)
        basis = row_space(vstack(basis, Matrix.from_rows(field, rows)))
        grew = basis.rows > history[-1]
        history.append(basis.rows)
        if basis.rows == ndirs:
            return RankResult(basis.rows, ndirs, history, nwords)
        stable = 0 if grew else stable + 1
        if stable == 2:
            return RankResult(basis.rows, ndirs, history, nwords)
    raise RankUnstable(f"rank still moving at {cap} syllables: {history}", history)


def jacobian_rank(plan: ComponentPlan, field: Field, seed: int = 0, mode: str = "c2c3",
                  words: WordList | None = None, cap: int = DEFAULT_CAP) -> int:
    return jacobian_rank_details(plan, field, seed, mode, words, cap).rank


# --------------------------------------------------------------------------
# reports


def run_trial(plan: ComponentPlan, field: Field, seed: int, cap: int = DEFAULT_CAP) -> dict:
    B, point = instantiate(plan, field, seed)
    values = list(point.values)
    rep = lift(B, values[plan.mu_param], plan.sigma)
    rel = verify_relations(rep)
    burn = burnside_dimension(rep)
    out = {"seed": seed, "detB": True, "braid": rel["braid"], "central": rel["central"],
           "burnside": burn, "draws": point.draws}
    for mode in ("c2c3", "b3"):
        try:
            out[f"rank_{mode}"] = jacobian_rank_details(plan, field, seed, mode, cap=cap,
                                                        values=values).rank
        except RankUnstable as exc:
            out[f"rank_{mode}"] = None
            out[f"rank_{mode}_history"] = exc.history
    return out


def trial_passes(trial: dict, n: int) -> bool:
    return trial["detB"] and trial["braid"] and trial["central"] and trial["burnside"] == n * n


def dominance_report(sigma: SigmaVector, field: Field, trials: int = 3, seed: int = 0,
                     cap: int = DEFAULT_CAP) -> dict:
    """Per-trial checks and a verdict; unsupported components are reported, not raised."""
    report = {"sigma": str(sigma), "n": sigma.n, "n_sigma": n_sigma(sigma)}
    try:
        tau, case = tau_for(sigma)
    except UnsupportedComponent as exc:
        report.update({"tau": None, "case": None, "params": None, "trials": [],
                       "corrections": [], "verdict": "unsupported", "reason": exc.reason})
        return report
    plan = plan_component(sigma)
    rows = [run_trial(plan, field, seed + i, cap) for i in range(trials)]
    ranks = [t["rank_c2c3"] for t in rows if t["rank_c2c3"] is not None]
    best = max(ranks) if ranks else None
    ok = all(trial_passes(t, sigma.n) for t in rows) and best == n_sigma(sigma)
    report.update({
        "tau": list(tau.as_tuple()),
        "case": case.name,
        "params": count_parameters(plan),
        "trials": rows,
        "rank_c2c3": best,
        "rank_b3": max((t["rank_b3"] for t in rows if t["rank_b3"] is not None), default=None),
        "corrections": [str(c) for c in plan.corrections],
        "verdict": "pass" if ok else "fail",
    })
    return report
