"""Exact data model for normal-form games, Bayesian games and multi-games.

Every payoff, probability and type coordinate is a :class:`fractions.Fraction`,
so equilibrium inequalities are decided exactly with no tolerance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Iterator, Mapping, Sequence, Union

Rational = Fraction
Profile = tuple[int, ...]


class GameInputError(ValueError):
    """Raised for malformed games, strategies, types or priors."""


def as_rational(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are rejected: they would silently make equilibrium checks inexact.
    """
    if isinstance(value, bool):
        raise GameInputError(f"not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise GameInputError(f"not a rational literal: {value!r}") from exc
    raise GameInputError(f"not an exact rational: {value!r} ({type(value).__name__})")


def format_rational(q: Fraction) -> str:
    return str(q)


@dataclass(frozen=True)
class _ProbabilityVector:
    probs: tuple[Fraction, ...]

    def __init__(self, probs: Iterable):
        values = tuple(as_rational(p) for p in probs)
        if not values:
            raise GameInputError(f"{type(self).__name__} must be non-empty")
        if any(p < 0 for p in values):
            raise GameInputError(f"negative entry in {type(self).__name__}: {values}")
        if sum(values) != 1:
            raise GameInputError(
                f"{type(self).__name__} entries sum to {sum(values)}, not 1"
            )
        object.__setattr__(self, "probs", values)

    def __len__(self) -> int:
        return len(self.probs)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.probs)

    def __getitem__(self, k: int) -> Fraction:
        return self.probs[k]

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(k for k, p in enumerate(self.probs) if p > 0)

    def __str__(self) -> str:
        return "(" + ", ".join(str(p) for p in self.probs) + ")"


class MixedStrategy(_ProbabilityVector):
    """Probability vector over one agent's pure actions."""

    @classmethod
    def pure(cls, action: int, size: int) -> "MixedStrategy":
        if not 0 <= action < size:
            raise GameInputError(f"action {action} out of range 0..{size - 1}")
        return cls(Fraction(int(k == action)) for k in range(size))

    @classmethod
    def uniform(cls, size: int) -> "MixedStrategy":
        return cls(Fraction(1, size) for _ in range(size))

    @property
    def is_pure(self) -> bool:
        return len(self.support) == 1

    @property
    def pure_action(self) -> int | None:
        return self.support[0] if self.is_pure else None


class SimplexPoint(_ProbabilityVector):
    """A point of the (m-1)-simplex; vertex ``v_j`` is the j-th unit vector."""

    @classmethod
    def vertex(cls, j: int, m: int) -> "SimplexPoint":
        if not 0 <= j < m:
            raise GameInputError(f"vertex {j} out of range 0..{m - 1}")
        return cls(Fraction(int(k == j)) for k in range(m))

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return self.probs

    @property
    def vertex_index(self) -> int | None:
        s = self.support
        return s[0] if len(s) == 1 else None


def as_mixed(value, size: int) -> MixedStrategy:
    """Accept a MixedStrategy, a pure action index, or a probability sequence."""
    if isinstance(value, MixedStrategy):
        strategy = value
    elif isinstance(value, int) and not isinstance(value, bool):
        return MixedStrategy.pure(value, size)
    else:
        strategy = MixedStrategy(value)
    if len(strategy) != size:
        raise GameInputError(f"strategy has {len(strategy)} entries, expected {size}")
    return strategy


def as_simplex(value, m: int) -> SimplexPoint:
    point = value if isinstance(value, SimplexPoint) else SimplexPoint(value)
    if len(point) != m:
        raise GameInputError(f"type point has dimension {len(point)}, expected {m}")
    return point


def _check_actions(actions: Sequence[int]) -> tuple[int, ...]:
    actions = tuple(int(a) for a in actions)
    if not actions:
        raise GameInputError("a game needs at least one agent")
    if any(a < 1 for a in actions):
        raise GameInputError(f"every agent needs at least one action: {actions}")
    return actions


@dataclass(frozen=True, eq=False)
class NormalFormGame:
    """Finite n-agent game with an exact payoff vector for every joint profile.

    ``payoffs[a]`` is the tuple ``(u_1(a), ..., u_n(a))``.
    """

    actions: tuple[int, ...]
    payoffs: Mapping[Profile, tuple[Fraction, ...]]
    action_labels: tuple[tuple[str, ...], ...] | None = None

    def __post_init__(self):
        actions = _check_actions(self.actions)
        object.__setattr__(self, "actions", actions)
        table = {}
        for a in itertools.product(*(range(k) for k in actions)):
            if a not in self.payoffs:
                raise GameInputError(f"payoff missing for profile {a}")
            vec = tuple(as_rational(x) for x in self.payoffs[a])
            if len(vec) != len(actions):
                raise GameInputError(
                    f"profile {a} has {len(vec)} payoffs, expected {len(actions)}"
                )
            table[a] = vec
        extra = set(self.payoffs) - set(table)
        if extra:
            raise GameInputError(f"payoffs given for invalid profiles: {sorted(extra)}")
        object.__setattr__(self, "payoffs", table)
        if self.action_labels is not None:
            labels = tuple(tuple(str(x) for x in row) for row in self.action_labels)
            if tuple(len(row) for row in labels) != actions:
                raise GameInputError("action labels do not match the action counts")
            object.__setattr__(self, "action_labels", labels)

    @classmethod
    def from_function(cls, actions: Sequence[int], fn, action_labels=None) -> "NormalFormGame":
        actions = _check_actions(actions)
        table = {a: tuple(fn(a)) for a in itertools.product(*(range(k) for k in actions))}
        return cls(actions, table, action_labels)

    @classmethod
    def bimatrix(cls, rows: Sequence[Sequence[Sequence]], action_labels=None) -> "NormalFormGame":
        """Two-agent game from a table of ``(u_1, u_2)`` cells, rows for agent 1."""
        n_rows, n_cols = len(rows), len(rows[0])
        if any(len(r) != n_cols for r in rows):
            raise GameInputError("ragged payoff table")
        table = {(r, c): tuple(rows[r][c]) for r in range(n_rows) for c in range(n_cols)}
        return cls((n_rows, n_cols), table, action_labels)

    @property
    def n(self) -> int:
        return len(self.actions)

    def profiles(self) -> Iterator[Profile]:
        return itertools.product(*(range(k) for k in self.actions))

    def payoff(self, i: int, a: Profile) -> Fraction:
        return self.payoffs[tuple(a)][i]

    def label(self, i: int, k: int) -> str:
        if self.action_labels is None:
            return f"a{k + 1}"
        return self.action_labels[i][k]

    def scaled(self, agent: int, factor) -> "NormalFormGame":
        """Copy with one agent's payoffs multiplied by ``factor``."""
        factor = as_rational(factor)
        return NormalFormGame(
            self.actions,
            {a: tuple(u * factor if k == agent else u for k, u in enumerate(v))
             for a, v in self.payoffs.items()},
            self.action_labels,
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, NormalFormGame)
            and self.actions == other.actions
            and self.payoffs == other.payoffs
        )

    __hash__ = None


def pure_payoff(g: NormalFormGame, a: Sequence[int]) -> tuple[Fraction, ...]:
    a = tuple(a)
    if len(a) != g.n or any(not 0 <= x < k for x, k in zip(a, g.actions)):
        raise GameInputError(f"profile {a} is outside action space {g.actions}")
    return g.payoffs[a]


def _as_profile(g: NormalFormGame, sigma: Sequence) -> tuple[MixedStrategy, ...]:
    if len(sigma) != g.n:
        raise GameInputError(f"profile has {len(sigma)} strategies, game has {g.n} agents")
    return tuple(as_mixed(s, k) for s, k in zip(sigma, g.actions))


def mixed_payoff(g: NormalFormGame, sigma: Sequence) -> tuple[Fraction, ...]:
    """Expected payoff vector of a mixed profile (multilinear extension)."""
    sigma = _as_profile(g, sigma)
    totals = [Fraction(0)] * g.n
    for a in itertools.product(*(s.support for s in sigma)):
        weight = Fraction(1)
        for s, x in zip(sigma, a):
            weight *= s[x]
        for i, u in enumerate(g.payoffs[a]):
            totals[i] += weight * u
    return tuple(totals)


def action_values(g: NormalFormGame, i: int, sigma: Sequence) -> list[Fraction]:
    """Agent i's expected payoff for each pure action against ``sigma[-i]``.

    ``sigma[i]`` is ignored.
    """
    others = [
        (k, as_mixed(s, g.actions[k])) for k, s in enumerate(sigma) if k != i
    ]
    if len(others) != g.n - 1:
        raise GameInputError("profile length does not match the game")
    values = [Fraction(0)] * g.actions[i]
    for rest in itertools.product(*(s.support for _, s in others)):
        weight = Fraction(1)
        for (_, s), x in zip(others, rest):
            weight *= s[x]
        a = list(rest)
        a.insert(i, 0)
        for x in range(g.actions[i]):
            a[i] = x
            values[x] += weight * g.payoffs[tuple(a)][i]
    return values


# ---------------------------------------------------------------------------
# Bayesian games


TypeProfile = tuple


@dataclass(frozen=True, eq=False)
class FiniteBayesianGame:
    """Finite Bayesian game with opaque type labels.

    ``local[theta]`` is the complete-information game at type profile ``theta``;
    together they define ``u_i(a, theta)`` for every agent, profile and type.
    """

    actions: tuple[int, ...]
    types: tuple[tuple[Hashable, ...], ...]
    local: Mapping[TypeProfile, NormalFormGame]

    def __post_init__(self):
        actions = _check_actions(self.actions)
        types = tuple(tuple(ts) for ts in self.types)
        if len(types) != len(actions):
            raise GameInputError("one type list per agent is required")
        for i, ts in enumerate(types):
            if not ts:
                raise GameInputError(f"agent {i} has an empty type space")
            if len(set(ts)) != len(ts):
                raise GameInputError(f"agent {i} has duplicate type labels")
        for theta in itertools.product(*types):
            g = self.local.get(theta)
            if g is None:
                raise GameInputError(f"utility missing for type profile {theta}")
            if g.actions != actions:
                raise GameInputError(f"local game at {theta} has actions {g.actions}")
        object.__setattr__(self, "actions", actions)
        object.__setattr__(self, "types", types)
        object.__setattr__(self, "local", dict(self.local))

    @property
    def n(self) -> int:
        return len(self.actions)

    def type_profiles(self) -> Iterator[TypeProfile]:
        return itertools.product(*self.types)

    def utility(self, i: int, a: Profile, theta: TypeProfile) -> Fraction:
        return self.local[tuple(theta)].payoffs[tuple(a)][i]

    def local_game(self, theta: Sequence) -> NormalFormGame:
        theta = tuple(theta)
        if theta not in self.local:
            raise GameInputError(f"{theta} is not a type profile of this game")
        return self.local[theta]


@dataclass(frozen=True, eq=False)
class Prior:
    """Joint distribution over type profiles; missing profiles have mass 0."""

    joint: Mapping[TypeProfile, Fraction]

    def __post_init__(self):
        joint = {tuple(k): as_rational(v) for k, v in self.joint.items()}
        if any(v < 0 for v in joint.values()):
            raise GameInputError("prior has negative mass")
        if sum(joint.values()) != 1:
            raise GameInputError(f"prior mass sums to {sum(joint.values())}, not 1")
        object.__setattr__(self, "joint", joint)

    @classmethod
    def uniform(cls, types: Sequence[Sequence]) -> "Prior":
        profiles = list(itertools.product(*types))
        return cls({t: Fraction(1, len(profiles)) for t in profiles})

    @classmethod
    def point_mass(cls, theta: Sequence) -> "Prior":
        return cls({tuple(theta): Fraction(1)})

    @classmethod
    def random(cls, types: Sequence[Sequence], rng, denominator: int = 12) -> "Prior":
        """Rationalized random prior: integer weights in ``0..denominator``."""
        profiles = list(itertools.product(*types))
        while True:
            weights = [rng.randint(0, denominator) for _ in profiles]
            total = sum(weights)
            if total:
                return cls({t: Fraction(w, total) for t, w in zip(profiles, weights) if w})

    def mass(self, theta: Sequence) -> Fraction:
        return self.joint.get(tuple(theta), Fraction(0))

    def marginal(self, i: int, theta_i) -> Fraction:
        return sum((v for t, v in self.joint.items() if t[i] == theta_i), Fraction(0))

    def conditional(self, i: int, theta_i) -> dict[TypeProfile, Fraction]:
        """``p(theta_-i | theta_i)`` keyed by the full type profile."""
        marginal = self.marginal(i, theta_i)
        if marginal == 0:
            raise GameInputError(
                f"conditional undefined: agent {i} type {theta_i!r} has zero marginal"
            )
        return {t: v / marginal for t, v in self.joint.items() if t[i] == theta_i and v}


@dataclass(frozen=True, eq=False)
class StrategyMapProfile:
    """One map ``type -> MixedStrategy`` per agent."""

    maps: tuple[Mapping[Hashable, MixedStrategy], ...]

    def __post_init__(self):
        object.__setattr__(self, "maps", tuple(dict(m) for m in self.maps))

    @classmethod
    def constant(cls, types: Sequence[Sequence], strategies: Sequence) -> "StrategyMapProfile":
        return cls(tuple({t: s for t in ts} for ts, s in zip(types, strategies)))

    def validate_for(self, game: FiniteBayesianGame) -> "StrategyMapProfile":
        if len(self.maps) != game.n:
            raise GameInputError("strategy map count does not match agent count")
        maps = []
        for i, (m, ts) in enumerate(zip(self.maps, game.types)):
            fixed = {}
            for t in ts:
                if t not in m:
                    raise GameInputError(f"strategy map of agent {i} missing type {t!r}")
                fixed[t] = as_mixed(m[t], game.actions[i])
            maps.append(fixed)
        return StrategyMapProfile(tuple(maps))

    def at(self, theta: Sequence) -> tuple[MixedStrategy, ...]:
        return tuple(m[t] for m, t in zip(self.maps, theta))


def _deviation_table(game: FiniteBayesianGame, sigma: StrategyMapProfile):
    """For every (agent, type profile): (value of sigma_i, value of each pure action)
    in the local game against ``sigma_-i(theta_-i)``. Independent of the prior."""
    table = {}
    for theta in game.type_profiles():
        g = game.local[theta]
        profile = sigma.at(theta)
        for i in range(game.n):
            values = action_values(g, i, profile)
            own = sum((p * values[x] for x, p in enumerate(profile[i]) if p), Fraction(0))
            table[i, theta] = (own, values)
    return table


def _bne_violations_from_table(game: FiniteBayesianGame, table, prior: Prior):
    violations = []
    for i in range(game.n):
        for theta_i in game.types[i]:
            weights = {
                t: v for t, v in prior.joint.items() if t[i] == theta_i and v
            }
            marginal = sum(weights.values(), Fraction(0))
            if marginal == 0:
                continue
            own = Fraction(0)
            dev = [Fraction(0)] * game.actions[i]
            for t, w in weights.items():
                o, vals = table[i, t]
                own += w * o
                for x, v in enumerate(vals):
                    dev[x] += w * v
            best = max(dev)
            if best > own:
                action = dev.index(best)
                violations.append((i, theta_i, action, (best - own) / marginal))
    return violations


def bayesian_expected_utility(
    game: FiniteBayesianGame,
    sigma: StrategyMapProfile,
    prior: Prior,
    i: int,
    theta_i,
    deviation=None,
) -> Fraction:
    """Conditional expected utility of agent i at its own type ``theta_i``.

    ``deviation`` (action index or mixed strategy) replaces ``sigma_i(theta_i)``.
    """
    sigma = sigma.validate_for(game)
    conditional = prior.conditional(i, theta_i)
    total = Fraction(0)
    for theta, p in conditional.items():
        profile = list(sigma.at(theta))
        if deviation is not None:
            profile[i] = as_mixed(deviation, game.actions[i])
        total += p * mixed_payoff(game.local[theta], profile)[i]
    return total


def bne_violations(game: FiniteBayesianGame, sigma: StrategyMapProfile, prior: Prior):
    """List of ``(agent, own type, better action, conditional gain)``; empty iff BNE."""
    sigma = sigma.validate_for(game)
    return _bne_violations_from_table(game, _deviation_table(game, sigma), prior)


def is_bne(game: FiniteBayesianGame, sigma: StrategyMapProfile, prior: Prior) -> bool:
    return not bne_violations(game, sigma, prior)


# ---------------------------------------------------------------------------
# Multi-games


def _shared_actions(games: Sequence[NormalFormGame]) -> tuple[int, ...]:
    if not games:
        raise GameInputError("at least one basic game is required")
    actions = games[0].actions
    for g in games[1:]:
        if g.actions != actions:
            raise GameInputError(
                f"basic games must share one action space: {actions} vs {g.actions}"
            )
    return actions


def _check_type_spaces(type_spaces, n: int, m: int):
    if type_spaces is None:
        return (None,) * n
    if len(type_spaces) != n:
        raise GameInputError("one type space per agent is required")
    out = []
    for ts in type_spaces:
        out.append(None if ts is None else tuple(as_simplex(t, m) for t in ts))
    return tuple(out)


@dataclass(frozen=True, eq=False)
class MultiGame:
    """m basic games played at once; agent i earns ``sum_j theta_ij * u_ij(a)``.

    ``type_spaces[i]`` is a finite tuple of SimplexPoints, or None for the
    whole simplex.
    """

    basic: tuple[NormalFormGame, ...]
    type_spaces: tuple[tuple[SimplexPoint, ...] | None, ...] | None = None
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        basic = tuple(self.basic)
        _shared_actions(basic)
        object.__setattr__(self, "basic", basic)
        object.__setattr__(
            self, "type_spaces", _check_type_spaces(self.type_spaces, basic[0].n, len(basic))
        )

    @property
    def n(self) -> int:
        return self.basic[0].n

    @property
    def m(self) -> int:
        return len(self.basic)

    @property
    def actions(self) -> tuple[int, ...]:
        return self.basic[0].actions

    def local_game(self, theta: Sequence) -> NormalFormGame:
        if len(theta) != self.n:
            raise GameInputError(f"type profile needs {self.n} entries")
        theta = [as_simplex(t, self.m) for t in theta]
        table = {}
        for a in self.basic[0].profiles():
            table[a] = tuple(
                sum((theta[i][j] * self.basic[j].payoffs[a][i]
                     for j in range(self.m) if theta[i][j]), Fraction(0))
                for i in range(self.n)
            )
        return NormalFormGame(self.actions, table, self.basic[0].action_labels)

    def vertex_game(self, js: Sequence[int]) -> NormalFormGame:
        """Local game at the vertex profile ``(v_{j_1}, ..., v_{j_n})``."""
        return NormalFormGame(
            self.actions,
            {a: tuple(self.basic[j].payoffs[a][i] for i, j in enumerate(js))
             for a in self.basic[0].profiles()},
            self.basic[0].action_labels,
        )

    def scaled(self, agent: int, factor) -> "MultiGame":
        return MultiGame(tuple(g.scaled(agent, factor) for g in self.basic),
                         self.type_spaces, self.names)


@dataclass(frozen=True, eq=False)
class GeneralizedMultiGame:
    """Agent i earns ``sum_{k,j} theta_kj * u_ikj(a)``.

    ``basic[(k, j)]`` is a NormalFormGame whose agent-i payoff is ``u_ikj``.
    """

    basic: Mapping[tuple[int, int], NormalFormGame]
    n: int
    m: int
    type_spaces: tuple[tuple[SimplexPoint, ...] | None, ...] | None = None

    def __post_init__(self):
        keys = [(k, j) for k in range(self.n) for j in range(self.m)]
        missing = [key for key in keys if key not in self.basic]
        if missing:
            raise GameInputError(f"basic games missing for (agent, dimension) {missing}")
        games = [self.basic[key] for key in keys]
        _shared_actions(games)
        if games[0].n != self.n:
            raise GameInputError("basic games have the wrong number of agents")
        object.__setattr__(self, "basic", {key: self.basic[key] for key in keys})
        object.__setattr__(
            self, "type_spaces", _check_type_spaces(self.type_spaces, self.n, self.m)
        )

    @property
    def actions(self) -> tuple[int, ...]:
        return self.basic[0, 0].actions

    def local_game(self, theta: Sequence) -> NormalFormGame:
        if len(theta) != self.n:
            raise GameInputError(f"type profile needs {self.n} entries")
        theta = [as_simplex(t, self.m) for t in theta]
        weights = [((k, j), theta[k][j]) for k in range(self.n) for j in range(self.m)
                   if theta[k][j]]
        table = {}
        for a in self.basic[0, 0].profiles():
            table[a] = tuple(
                sum((w * self.basic[key].payoffs[a][i] for key, w in weights), Fraction(0))
                for i in range(self.n)
            )
        return NormalFormGame(self.actions, table)


AnyGame = Union[FiniteBayesianGame, MultiGame, GeneralizedMultiGame]


def local_game(game: AnyGame, theta: Sequence) -> NormalFormGame:
    """Complete-information game obtained by fixing the type profile ``theta``."""
    return game.local_game(theta)


def double_game_type(theta) -> SimplexPoint:
    """Scalar prosocial type ``theta`` as the 1-simplex point ``(1 - theta, theta)``."""
    theta = as_rational(theta)
    return SimplexPoint((1 - theta, theta))
