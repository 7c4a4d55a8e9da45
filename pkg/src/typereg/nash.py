"""Nash equilibrium enumeration and verification for small finite games."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .games import (
    GameInputError,
    MixedStrategy,
    NormalFormGame,
    _as_profile,
    action_values,
)


@dataclass
class NEResult:
    """Equilibria of one game, in deterministic order.

    ``degenerate`` lists support pairs whose indifference system was singular;
    equilibria on those supports (possibly a continuum) are not enumerated.
    ``tied`` indexes equilibria where some agent has more pure best responses
    than the opponent's support size, another sign of a degenerate game.
    """

    equilibria: list[tuple[MixedStrategy, ...]] = field(default_factory=list)
    degenerate: list[tuple[tuple[int, ...], ...]] = field(default_factory=list)
    tied: list[int] = field(default_factory=list)

    @property
    def is_degenerate(self) -> bool:
        return bool(self.degenerate or self.tied)

    def __iter__(self):
        return iter(self.equilibria)

    def __len__(self) -> int:
        return len(self.equilibria)

    def __contains__(self, profile) -> bool:
        return tuple(profile) in self.equilibria

    def is_pure(self, k: int) -> bool:
        return all(s.is_pure for s in self.equilibria[k])

    def pure_profiles(self) -> list[tuple[int, ...]]:
        return [tuple(s.pure_action for s in eq) for eq in self.equilibria
                if all(s.is_pure for s in eq)]


def best_response_set(g: NormalFormGame, i: int, opponents: Sequence) -> frozenset[int]:
    """Pure best responses of agent ``i`` to the other agents' strategies.

    ``opponents`` lists one strategy per agent other than ``i``, in agent order.
    """
    if len(opponents) != g.n - 1:
        raise GameInputError(f"expected {g.n - 1} opponent strategies")
    profile = list(opponents)
    profile.insert(i, MixedStrategy.pure(0, g.actions[i]))
    values = action_values(g, i, profile)
    best = max(values)
    return frozenset(x for x, v in enumerate(values) if v == best)


def nash_violations(g: NormalFormGame, sigma: Sequence) -> list[tuple[int, int, Fraction]]:
    """Profitable pure deviations ``(agent, action, gain)``; best one per agent."""
    sigma = _as_profile(g, sigma)
    found = []
    for i in range(g.n):
        values = action_values(g, i, sigma)
        own = sum((p * values[x] for x, p in enumerate(sigma[i]) if p), Fraction(0))
        best = max(values)
        if best > own:
            found.append((i, values.index(best), best - own))
    return found


def is_nash(g: NormalFormGame, sigma: Sequence) -> bool:
    """Exact NE test: no pure deviation raises any agent's expected payoff."""
    return not nash_violations(g, sigma)


def _sort_key(profile: tuple[MixedStrategy, ...]):
    supports = tuple(s.support for s in profile)
    return (sum(len(s) for s in supports), supports, tuple(s.probs for s in profile))


def pure_ne_enumerate(g: NormalFormGame) -> NEResult:
    """All pure NE by a full deviation scan."""
    found = []
    for a in g.profiles():
        stable = True
        for i in range(g.n):
            current = g.payoffs[a][i]
            b = list(a)
            for x in range(g.actions[i]):
                b[i] = x
                if g.payoffs[tuple(b)][i] > current:
                    stable = False
                    break
            if not stable:
                break
        if stable:
            found.append(tuple(MixedStrategy.pure(x, k) for x, k in zip(a, g.actions)))
    return NEResult(sorted(found, key=_sort_key))


def solve_exact(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]):
    """Solve a square system exactly by Gauss-Jordan elimination over Fractions.

    Returns None if the matrix is singular.
    """
    size = len(matrix)
    rows = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if rows[r][col] != 0), None)
        if pivot is None:
            return None
        rows[col], rows[pivot] = rows[pivot], rows[col]
        p = rows[col][col]
        rows[col] = [x / p for x in rows[col]]
        for r in range(size):
            if r != col and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[col])]
    return [row[size] for row in rows]


def _indifference(payoff, own_support, other_support, other_size):
    """Mix over ``other_support`` making every action in ``own_support`` earn the
    same value ``payoff(own, other)``. Returns the full-length mix or None."""
    k = len(other_support)
    matrix = []
    for s in own_support:
        matrix.append([payoff(s, t) for t in other_support] + [Fraction(-1)])
    matrix.append([Fraction(1)] * k + [Fraction(0)])
    solution = solve_exact(matrix, [Fraction(0)] * k + [Fraction(1)])
    if solution is None:
        return None
    mix = [Fraction(0)] * other_size
    for t, p in zip(other_support, solution[:k]):
        mix[t] = p
    return mix


def support_enumeration_2p(g: NormalFormGame) -> NEResult:
    """All NE of a two-agent game on equal-size supports.

    Exhaustive for nondegenerate games. Singular indifference systems are
    recorded in ``NEResult.degenerate`` instead of being guessed at.
    """
    if g.n != 2:
        raise GameInputError("support enumeration needs exactly two agents")
    rows, cols = g.actions
    found: set[tuple[MixedStrategy, ...]] = set()
    degenerate = []
    u1 = lambda r, c: g.payoffs[r, c][0]
    u2 = lambda c, r: g.payoffs[r, c][1]
    for size in range(1, min(rows, cols) + 1):
        for I in itertools.combinations(range(rows), size):
            for J in itertools.combinations(range(cols), size):
                y = _indifference(u1, I, J, cols)
                x = _indifference(u2, J, I, rows)
                if x is None or y is None:
                    degenerate.append((I, J))
                    continue
                if any(p < 0 for p in x) or any(p < 0 for p in y):
                    continue
                profile = (MixedStrategy(x), MixedStrategy(y))
                if is_nash(g, profile):
                    found.add(profile)
    equilibria = sorted(found, key=_sort_key)
    tied = [k for k, (x, y) in enumerate(equilibria)
            if len(best_response_set(g, 0, [y])) > len(y.support)
            or len(best_response_set(g, 1, [x])) > len(x.support)]
    return NEResult(equilibria, degenerate, tied)
