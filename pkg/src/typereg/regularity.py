"""Type-regularity: vertex witness search, barycentric extension, grid checks,
prior-independence audits and the double-game condition tables."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .games import (
    FiniteBayesianGame,
    GameInputError,
    MixedStrategy,
    MultiGame,
    NormalFormGame,
    Prior,
    SimplexPoint,
    StrategyMapProfile,
    _bne_violations_from_table,
    _deviation_table,
    as_mixed,
    as_simplex,
)
from .nash import is_nash, nash_violations, support_enumeration_2p

CERTIFIED = "certified"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive"

DEFAULT_GRID = 10


def simplex_grid(m: int, d: int) -> list[SimplexPoint]:
    """All points of the (m-1)-simplex with coordinates in ``{0, 1/d, ..., 1}``."""
    if d < 1:
        raise GameInputError("grid resolution must be at least 1")
    points = []
    for cuts in itertools.combinations_with_replacement(range(d + 1), m - 1):
        parts = [b - a for a, b in zip((0,) + cuts, cuts + (d,))]
        points.append(SimplexPoint(Fraction(p, d) for p in reversed(parts)))
    return sorted(points, key=lambda p: p.probs, reverse=True)


@dataclass(frozen=True)
class Witness:
    """``strategies[i][j]`` is agent i's strategy at simplex vertex ``v_j``."""

    strategies: tuple[tuple[MixedStrategy, ...], ...]

    @classmethod
    def from_actions(cls, table: Sequence[Sequence], actions: Sequence[int]) -> "Witness":
        """Build from per-agent rows of action indices or probability vectors."""
        return cls(tuple(
            tuple(as_mixed(x, k) for x in row) for row, k in zip(table, actions)
        ))

    @property
    def n(self) -> int:
        return len(self.strategies)

    @property
    def m(self) -> int:
        return len(self.strategies[0])

    def at_vertices(self, js: Sequence[int]) -> tuple[MixedStrategy, ...]:
        return tuple(self.strategies[i][j] for i, j in enumerate(js))

    def check(self, mg: MultiGame) -> "Witness":
        if self.n != mg.n or any(len(row) != mg.m for row in self.strategies):
            raise GameInputError("witness shape does not match the multi-game")
        for i, row in enumerate(self.strategies):
            for s in row:
                if len(s) != mg.actions[i]:
                    raise GameInputError(f"witness strategy for agent {i} has wrong length")
        return self


def extend_witness(w: Witness, i: int, theta_i) -> MixedStrategy:
    """Barycentric extension ``sum_j theta_ij * sigma_i(v_j)``."""
    theta_i = as_simplex(theta_i, w.m)
    row = w.strategies[i]
    size = len(row[0])
    return MixedStrategy(
        sum((theta_i[j] * row[j][x] for j in range(w.m) if theta_i[j]), Fraction(0))
        for x in range(size)
    )


@dataclass(frozen=True)
class Violation:
    """Agent ``agent`` gains ``gain`` by switching to ``action`` at ``types``."""

    types: tuple[SimplexPoint, ...]
    agent: int
    action: int
    gain: Fraction
    profile: tuple[MixedStrategy, ...]


@dataclass
class RegularityReport:
    status: str
    witness: Witness | None = None
    violations: list[Violation] = field(default_factory=list)
    checked: int = 0
    region: str = "vertices"
    grid: int | None = None
    complete_search: bool = True
    notes: list[str] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.status == CERTIFIED

    def violating_profiles(self) -> list[tuple[SimplexPoint, ...]]:
        seen = []
        for v in self.violations:
            if not seen or seen[-1] != v.types:
                seen.append(v.types)
        return seen


def _violations_at(mg: MultiGame, types, profile) -> list[Violation]:
    g = mg.local_game(types)
    return [Violation(tuple(types), i, x, gain, tuple(profile))
            for i, x, gain in nash_violations(g, profile)]


def _vertex_profiles(n: int, m: int):
    return itertools.product(range(m), repeat=n)


def _region_profiles(mg: MultiGame, region: str, d: int):
    n, m = mg.n, mg.m
    vertices = [SimplexPoint.vertex(j, m) for j in range(m)]
    if region == "vertices":
        yield from itertools.product(vertices, repeat=n)
    elif region == "boundary":
        grid = simplex_grid(m, d)
        seen = set()
        for i in range(n):
            axes = [vertices] * n
            axes[i] = grid
            for theta in itertools.product(*axes):
                if theta not in seen:
                    seen.add(theta)
                    yield theta
    elif region == "grid":
        yield from itertools.product(simplex_grid(m, d), repeat=n)
    else:
        raise GameInputError(f"unknown region {region!r}")


def check_witness(mg: MultiGame, w: Witness, region: str = "grid",
                  d: int = DEFAULT_GRID) -> RegularityReport:
    """Check the extended witness is a NE of the local game at every profile
    of ``region`` ("vertices", "boundary" or "grid" at resolution ``d``)."""
    w.check(mg)
    cache: dict[tuple[int, SimplexPoint], MixedStrategy] = {}

    def strategy(i, theta_i):
        key = (i, theta_i)
        if key not in cache:
            cache[key] = extend_witness(w, i, theta_i)
        return cache[key]

    report = RegularityReport(CERTIFIED, w, region=region,
                              grid=None if region == "vertices" else d)
    for theta in _region_profiles(mg, region, d):
        profile = tuple(strategy(i, t) for i, t in enumerate(theta))
        report.violations.extend(_violations_at(mg, theta, profile))
        report.checked += 1
    if report.violations:
        report.status = REFUTED
    return report


def verify_type_regularity(mg: MultiGame, w: Witness, d: int = DEFAULT_GRID) -> RegularityReport:
    """Exhaustive NE check of the extended witness on the barycentric grid."""
    return check_witness(mg, w, "grid", d)


def _vertex_candidates(mg: MultiGame):
    """Candidate strategies per (agent, vertex) and whether they are exhaustive."""
    n, m = mg.n, mg.m
    cands = [[[MixedStrategy.pure(x, mg.actions[i]) for x in range(mg.actions[i])]
              for _ in range(m)] for i in range(n)]
    complete = n == 1
    if n == 2:
        complete = True
        for js in _vertex_profiles(n, m):
            result = support_enumeration_2p(mg.vertex_game(js))
            if result.is_degenerate:
                complete = False
            for eq in result:
                for i in range(n):
                    if not eq[i].is_pure and eq[i] not in cands[i][js[i]]:
                        cands[i][js[i]].append(eq[i])
    return cands, complete


def vertex_regularity_search(mg: MultiGame) -> RegularityReport:
    """Backtracking search for a witness that is a NE at every vertex profile.

    Pure actions are always candidates; for two agents the mixed components of
    the support-enumerated vertex equilibria are added. The search is exhaustive
    when every vertex game is nondegenerate (two agents) or there is one agent;
    otherwise a failed search is reported as inconclusive.
    """
    n, m = mg.n, mg.m
    cands, complete = _vertex_candidates(mg)
    variables = [(i, j) for j in range(m) for i in range(n)]
    position = {v: k for k, v in enumerate(variables)}
    closes: list[list[tuple[int, ...]]] = [[] for _ in variables]
    for js in _vertex_profiles(n, m):
        last = max(position[i, j] for i, j in enumerate(js))
        closes[last].append(js)
    games = {js: mg.vertex_game(js) for js in _vertex_profiles(n, m)}

    assignment: dict[tuple[int, int], MixedStrategy] = {}
    deepest: dict[tuple[int, int], MixedStrategy] = {}

    def solve(k: int) -> bool:
        nonlocal deepest
        if len(assignment) > len(deepest):
            deepest = dict(assignment)
        if k == len(variables):
            return True
        var = variables[k]
        for s in cands[var[0]][var[1]]:
            assignment[var] = s
            if all(is_nash(games[js], [assignment[i, j] for i, j in enumerate(js)])
                   for js in closes[k]):
                if solve(k + 1):
                    return True
            del assignment[var]
        return False

    def as_witness(values) -> Witness:
        return Witness(tuple(tuple(values[i, j] for j in range(m)) for i in range(n)))

    if solve(0):
        report = RegularityReport(CERTIFIED, as_witness(assignment), complete_search=complete)
        report.checked = m ** n
        return report

    # Complete the deepest partial assignment with first candidates so the
    # report carries concrete failing vertex profiles.
    attempt = {v: deepest.get(v, cands[v[0]][v[1]][0]) for v in variables}
    witness = as_witness(attempt)
    failed = check_witness(mg, witness, "vertices")
    status = REFUTED if complete else INCONCLUSIVE
    report = RegularityReport(status, None, failed.violations, failed.checked,
                              complete_search=complete)
    report.notes.append("violations refer to the closest candidate witness found")
    if not complete:
        report.notes.append("mixed witnesses outside the candidate set were not searched")
    return report


# ---------------------------------------------------------------------------
# Prior independence on finite Bayesian games


@dataclass
class Theorem1Report:
    local_ne_everywhere: bool
    local_violations: list[tuple] = field(default_factory=list)
    prior_verdicts: list[tuple[str, bool]] = field(default_factory=list)
    falsifying_prior: tuple | None = None
    seed: int = 0

    @property
    def bne_under_all_priors(self) -> bool:
        return all(ok for _, ok in self.prior_verdicts)

    @property
    def agreement(self) -> bool:
        if self.local_ne_everywhere:
            return self.bne_under_all_priors
        return self.falsifying_prior is not None and not self.bne_under_all_priors


def theorem1_audit(game: FiniteBayesianGame, sigma: StrategyMapProfile,
                   prior_samples: int = 64, seed: int = 0,
                   denominator: int = 12) -> Theorem1Report:
    """Compare "NE in every local game" against "BNE under every tested prior".

    Tested priors are the point mass on each type profile plus
    ``prior_samples`` seeded random rational priors.
    """
    sigma = sigma.validate_for(game)
    local_violations = []
    for theta in game.type_profiles():
        for i, x, gain in nash_violations(game.local[theta], sigma.at(theta)):
            local_violations.append((theta, i, x, gain))
    report = Theorem1Report(not local_violations, local_violations, seed=seed)

    table = _deviation_table(game, sigma)
    for theta in game.type_profiles():
        ok = not _bne_violations_from_table(game, table, Prior.point_mass(theta))
        report.prior_verdicts.append((f"point-mass {theta}", ok))
        if not ok and report.falsifying_prior is None:
            report.falsifying_prior = theta
    rng = random.Random(seed)
    for k in range(prior_samples):
        prior = Prior.random(game.types, rng, denominator)
        ok = not _bne_violations_from_table(game, table, prior)
        report.prior_verdicts.append((f"random #{k}", ok))
    return report


# ---------------------------------------------------------------------------
# 2x2 double games


def _cell(g: NormalFormGame, r: int, c: int, agent: int) -> Fraction:
    return g.payoffs[r, c][agent]


@dataclass(frozen=True, eq=False)
class DoubleGameSpec:
    """Two 2x2 two-agent basic games with shared actions."""

    g1: NormalFormGame
    g2: NormalFormGame
    symmetric: bool = False

    def __post_init__(self):
        for g in (self.g1, self.g2):
            if g.actions != (2, 2):
                raise GameInputError("double-game specs need 2x2 two-agent games")
        if self.symmetric:
            for g in (self.g1, self.g2):
                if any(g.payoffs[r, c][0] != g.payoffs[c, r][1]
                       for r in range(2) for c in range(2)):
                    raise GameInputError("game flagged symmetric but u_1(a,b) != u_2(b,a)")

    @classmethod
    def from_symmetric(cls, a, b, c, d, e, f, g, h) -> "DoubleGameSpec":
        """G1 = [[(a,a),(b,c)],[(c,b),(d,d)]], G2 = [[(e,e),(f,g)],[(g,f),(h,h)]]."""
        g1 = NormalFormGame.bimatrix([[(a, a), (b, c)], [(c, b), (d, d)]])
        g2 = NormalFormGame.bimatrix([[(e, e), (f, g)], [(g, f), (h, h)]])
        return cls(g1, g2, symmetric=True)

    @classmethod
    def from_general(cls, p) -> "DoubleGameSpec":
        """``p`` maps a1..h2; cells a, b, c, d of G1 and e, f, g, h of G2 in
        row-major order, suffix 1/2 for the agent."""
        def table(w, x, y, z):
            return [[(p[w + "1"], p[w + "2"]), (p[x + "1"], p[x + "2"])],
                    [(p[y + "1"], p[y + "2"]), (p[z + "1"], p[z + "2"])]]
        return cls(NormalFormGame.bimatrix(table("a", "b", "c", "d")),
                   NormalFormGame.bimatrix(table("e", "f", "g", "h")))

    def multigame(self) -> MultiGame:
        return MultiGame((self.g1, self.g2))

    def symmetric_params(self) -> dict[str, Fraction]:
        g1, g2 = self.g1, self.g2
        return {"a": _cell(g1, 0, 0, 0), "b": _cell(g1, 0, 1, 0), "c": _cell(g1, 0, 1, 1),
                "d": _cell(g1, 1, 1, 0), "e": _cell(g2, 0, 0, 0), "f": _cell(g2, 0, 1, 0),
                "g": _cell(g2, 0, 1, 1), "h": _cell(g2, 1, 1, 0)}


def _witness_from_nes(ne1, ne2) -> Witness:
    return Witness.from_actions([[ne1[0], ne2[0]], [ne1[1], ne2[1]]], (2, 2))


def _require_ne(g: NormalFormGame, ne, name: str):
    ne = tuple(ne)
    if len(ne) != 2 or any(x not in (0, 1) for x in ne):
        raise GameInputError(f"{name} must be a pure profile of a 2x2 game: {ne}")
    profile = [MixedStrategy.pure(x, 2) for x in ne]
    if not is_nash(g, profile):
        raise GameInputError(f"{name} {ne} is not a NE of its game")
    return ne


PROP1_ROWS = {(0, 0): 1, (0, 1): 2, (1, 0): 3, (1, 1): 4}


def prop1_conditions(spec: DoubleGameSpec, ne1, ne2, weak: bool = False) -> int | None:
    """Row (1-4) of the symmetric double-game table whose inequalities hold.

    The table only covers ``ne1 = (a1, a1)``. ``weak=True`` replaces each
    strict inequality by its non-strict version.
    """
    if tuple(ne1) != (0, 0):
        return None
    row = PROP1_ROWS[tuple(ne2)]
    p = spec.symmetric_params()
    gt = (lambda x, y: x >= y) if weak else (lambda x, y: x > y)
    a, b, c, d, e, f, g, h = (p[k] for k in "abcdefgh")
    holds = {
        1: gt(a, c) and gt(e, g),
        2: gt(a, c) and gt(b, d) and e == g and gt(f, h),
        3: gt(a, c) and gt(b, d) and e == g and gt(f, h),
        4: gt(a, c) and gt(b, d) and gt(g, e) and gt(h, f),
    }[row]
    return row if holds else None


def vertex_regular_with(spec: DoubleGameSpec, ne1, ne2) -> bool:
    """Brute force: is the NE-based witness a NE at all four vertex profiles?"""
    return check_witness(spec.multigame(), _witness_from_nes(ne1, ne2), "vertices").certified


def check_prop1(spec: DoubleGameSpec, ne1, ne2, validate: bool = True,
                weak: bool = False) -> tuple[int | None, bool]:
    """(matching table row or None, brute-force vertex regularity)."""
    if not spec.symmetric:
        raise GameInputError("check_prop1 needs a symmetric double game")
    if validate:
        ne1 = _require_ne(spec.g1, ne1, "neG1")
        ne2 = _require_ne(spec.g2, ne2, "neG2")
    return prop1_conditions(spec, ne1, ne2, weak), vertex_regular_with(spec, ne1, ne2)


def prop2_conditions(spec: DoubleGameSpec, ne1=(0, 0), ne2=(1, 1)) -> bool:
    """The eight inequalities, with cells named relative to ``ne1 = (s, u)``
    and ``ne2 = (t, v)``."""
    (s, u), (t, v) = ne1, ne2
    if s == t or u == v:
        raise GameInputError("the two equilibria must differ in both agents' actions")
    g1, g2 = spec.g1, spec.g2
    a1, a2 = g1.payoffs[s, u]
    b1, b2 = g1.payoffs[s, v]
    c1, c2 = g1.payoffs[t, u]
    d1, d2 = g1.payoffs[t, v]
    e1, e2 = g2.payoffs[s, u]
    f1, f2 = g2.payoffs[s, v]
    g1_, g2_ = g2.payoffs[t, u]
    h1, h2 = g2.payoffs[t, v]
    return (a1 >= c1 and h1 >= f1 and b1 >= d1 and g1_ >= e1
            and a2 >= b2 and h2 >= g2_ and f2 >= e2 and c2 >= d2)


def check_prop2(spec: DoubleGameSpec, ne1=(0, 0), ne2=(1, 1),
                validate: bool = True) -> tuple[bool, bool]:
    """(eight inequalities hold, brute-force vertex regularity)."""
    if validate:
        ne1 = _require_ne(spec.g1, ne1, "neG1")
        ne2 = _require_ne(spec.g2, ne2, "neG2")
    return prop2_conditions(spec, ne1, ne2), vertex_regular_with(spec, ne1, ne2)
