"""Type normalization and the linear-game to (generalized) multi-game transforms."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .games import (
    FiniteBayesianGame,
    GameInputError,
    GeneralizedMultiGame,
    MultiGame,
    NormalFormGame,
    Profile,
    SimplexPoint,
    _check_actions,
    as_rational,
)


def normalize_type(theta: Sequence) -> SimplexPoint:
    """Project a nonzero nonnegative type vector onto the simplex."""
    values = [as_rational(x) for x in theta]
    if not values:
        raise GameInputError("empty type vector")
    if any(x < 0 for x in values):
        raise GameInputError(f"type vector has a negative component: {values}")
    total = sum(values)
    if total == 0:
        raise GameInputError("type vector is zero")
    return SimplexPoint(x / total for x in values)


def _dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(u, v)), Fraction(0))


@dataclass(frozen=True, eq=False)
class TypeLinearGame:
    """Bayesian game with ``u_i(a, theta) = sum_k L_ik(a) . theta_k``.

    ``coeff[(i, k, a)]`` is the length-m vector ``L_ik(a)``; missing keys are
    read as zero vectors. ``raw_type_spaces`` keeps the unnormalized types.
    """

    actions: tuple[int, ...]
    m: int
    coeff: Mapping[tuple[int, int, Profile], tuple[Fraction, ...]]
    raw_type_spaces: tuple[tuple[tuple[Fraction, ...], ...], ...] | None = None

    def __post_init__(self):
        actions = _check_actions(self.actions)
        object.__setattr__(self, "actions", actions)
        n = len(actions)
        coeff = {}
        for (i, k, a), vec in self.coeff.items():
            if not (0 <= i < n and 0 <= k < n):
                raise GameInputError(f"coefficient agent index out of range: {(i, k)}")
            a = tuple(a)
            if len(a) != n or any(not 0 <= x < c for x, c in zip(a, actions)):
                raise GameInputError(f"coefficient profile out of range: {a}")
            vec = tuple(as_rational(x) for x in vec)
            if len(vec) != self.m:
                raise GameInputError(f"L_{i}{k}{a} has length {len(vec)}, expected {self.m}")
            coeff[i, k, a] = vec
        object.__setattr__(self, "coeff", coeff)
        if self.raw_type_spaces is not None:
            spaces = []
            for ts in self.raw_type_spaces:
                vecs = tuple(tuple(as_rational(x) for x in t) for t in ts)
                for t in vecs:
                    if len(t) != self.m or any(x < 0 for x in t) or not any(t):
                        raise GameInputError(f"raw type {t} must be nonnegative, nonzero, length {self.m}")
                spaces.append(vecs)
            if len(spaces) != n:
                raise GameInputError("one raw type space per agent is required")
            object.__setattr__(self, "raw_type_spaces", tuple(spaces))

    @property
    def n(self) -> int:
        return len(self.actions)

    def profiles(self):
        return itertools.product(*(range(k) for k in self.actions))

    def L(self, i: int, k: int, a: Profile) -> tuple[Fraction, ...]:
        return self.coeff.get((i, k, tuple(a)), (Fraction(0),) * self.m)

    def utility(self, i: int, a: Profile, theta: Sequence[Sequence]) -> Fraction:
        """Utility read straight off the coefficient form (no basic games)."""
        return sum(
            (_dot(self.L(i, k, a), [as_rational(x) for x in theta[k]]) for k in range(self.n)),
            Fraction(0),
        )

    def normalized_type_spaces(self):
        if self.raw_type_spaces is None:
            return None
        return tuple(tuple(normalize_type(t) for t in ts) for ts in self.raw_type_spaces)


class OwnTypeLinearGame(TypeLinearGame):
    """Type-linear game where only ``L_ii`` may be nonzero."""

    def __post_init__(self):
        super().__post_init__()
        cross = [key for key in self.coeff if key[0] != key[1]]
        if cross:
            raise GameInputError(f"own-type-linear game has cross-agent coefficients: {cross[0]}")

    @classmethod
    def from_utilities(cls, actions, m, own_coeff, raw_type_spaces=None):
        """``own_coeff[(i, a)]`` is ``L_ii(a)``."""
        return cls(actions, m, {(i, i, a): v for (i, a), v in own_coeff.items()},
                   raw_type_spaces)


def to_generalized_mg(game: TypeLinearGame) -> GeneralizedMultiGame:
    """Basic game ``(k, j)`` pays agent i the j-th entry of ``L_ik(a)``."""
    basic = {}
    for k in range(game.n):
        for j in range(game.m):
            basic[k, j] = NormalFormGame.from_function(
                game.actions,
                lambda a, k=k, j=j: tuple(game.L(i, k, a)[j] for i in range(game.n)),
            )
    return GeneralizedMultiGame(basic, game.n, game.m, game.normalized_type_spaces())


def to_mg(game: OwnTypeLinearGame) -> MultiGame:
    """Basic game j pays agent i the j-th entry of ``L_ii(a)``."""
    if any(i != k for i, k, _ in game.coeff):
        raise GameInputError("to_mg needs an own-type-linear game")
    basic = tuple(
        NormalFormGame.from_function(
            game.actions,
            lambda a, j=j: tuple(game.L(i, i, a)[j] for i in range(game.n)),
        )
        for j in range(game.m)
    )
    return MultiGame(basic, game.normalized_type_spaces())


def mg_to_coefficients(mg: MultiGame) -> OwnTypeLinearGame:
    """Expand a multi-game back into its own-type coefficient form."""
    own = {}
    for i in range(mg.n):
        for a in mg.basic[0].profiles():
            own[i, a] = tuple(g.payoffs[a][i] for g in mg.basic)
    return OwnTypeLinearGame.from_utilities(mg.actions, mg.m, own)


def multigame_to_bayesian(mg: MultiGame, types: Sequence[Sequence] | None = None,
                          labels: Sequence[Sequence] | None = None) -> FiniteBayesianGame:
    """Finite Bayesian game on listed simplex types; labels default to ``str(point)``.

    ``types`` defaults to the multi-game's own (finite) type spaces.
    """
    if types is None:
        types = mg.type_spaces
        if any(ts is None for ts in types):
            raise GameInputError("multi-game has a continuous type space; list types explicitly")
    points = [[t if isinstance(t, SimplexPoint) else SimplexPoint(t) for t in ts] for ts in types]
    if labels is None:
        labels = [[str(p) for p in ts] for ts in points]
    lookup = [dict(zip(ls, ts)) for ls, ts in zip(labels, points)]
    local = {}
    for theta in itertools.product(*labels):
        local[theta] = mg.local_game([lookup[i][t] for i, t in enumerate(theta)])
    return FiniteBayesianGame(mg.actions, tuple(tuple(ls) for ls in labels), local)


# ---------------------------------------------------------------------------
# Equivalence audit


@dataclass
class AuditReport:
    checked: int = 0
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def equivalence_audit(original: TypeLinearGame, transformed, samples: Iterable) -> AuditReport:
    """Compare utilities of both representations on ``(profile, types)`` samples.

    ``samples`` yields pairs ``(a, theta)`` with ``theta`` a profile of simplex
    points. Each mismatching ``(a, theta, agent)`` cell becomes one violation.
    """
    if tuple(original.actions) != tuple(transformed.actions):
        raise GameInputError("games do not share an action space")
    report = AuditReport()
    local_cache = {}
    for a, theta in samples:
        a = tuple(a)
        key = tuple(tuple(t) for t in theta)
        if key not in local_cache:
            local_cache[key] = transformed.local_game(theta)
        local = local_cache[key]
        for i in range(original.n):
            want = original.utility(i, a, theta)
            got = local.payoffs[a][i]
            report.checked += 1
            if want != got:
                report.violations.append(
                    {"profile": a, "types": key, "agent": i, "original": want,
                     "transformed": got}
                )
    return report


def vertex_samples(game: TypeLinearGame):
    """Every (profile, vertex type profile) pair."""
    vertices = [SimplexPoint.vertex(j, game.m) for j in range(game.m)]
    for a in game.profiles():
        for theta in itertools.product(vertices, repeat=game.n):
            yield a, theta


def random_simplex_point(m: int, rng: random.Random, denominator: int = 24) -> SimplexPoint:
    """Uniformly drawn composition of ``denominator`` into m parts."""
    cuts = sorted(rng.randint(0, denominator) for _ in range(m - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [denominator])]
    return SimplexPoint(Fraction(p, denominator) for p in parts)


def random_samples(game: TypeLinearGame, count: int, seed: int = 0, denominator: int = 24):
    """``count`` random type profiles, each paired with every action profile."""
    rng = random.Random(seed)
    profiles = list(game.profiles())
    for _ in range(count):
        theta = tuple(random_simplex_point(game.m, rng, denominator) for _ in range(game.n))
        for a in profiles:
            yield a, theta
