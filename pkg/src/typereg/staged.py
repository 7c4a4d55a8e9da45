"""Two-stage Trust double game and the Prisoner's Dilemma double game.

Scalar types ``theta`` in [0, 1] weight the social game against the material
one: combined utility is ``(1 - theta) * material + theta * social``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .games import GameInputError, MultiGame, NormalFormGame, as_rational


def material_utilities(y: Fraction, x: Fraction) -> tuple[Fraction, Fraction]:
    return x - y, 3 * y - x


def social_utilities(y: Fraction, x: Fraction) -> tuple[Fraction, Fraction]:
    return y, x - 2 * y


@dataclass(frozen=True)
class TrustStageGame:
    """Sender picks ``y`` from ``sender_grid``; receiver returns ``x`` in
    ``{k * 3y / receiver_steps : k = 0..receiver_steps}``."""

    sender_grid: tuple[Fraction, ...]
    theta1: Fraction
    theta2: tuple[Fraction, ...]
    receiver_steps: int = 3

    def receiver_actions(self, y) -> tuple[Fraction, ...]:
        y = as_rational(y)
        if y == 0:
            return (Fraction(0),)
        return tuple(3 * y * Fraction(k, self.receiver_steps)
                     for k in range(self.receiver_steps + 1))

    def utility(self, agent: int, y, x, theta) -> Fraction:
        """Combined utility of ``agent`` (0 sender, 1 receiver) at own type ``theta``."""
        y, x, theta = as_rational(y), as_rational(x), as_rational(theta)
        return ((1 - theta) * material_utilities(y, x)[agent]
                + theta * social_utilities(y, x)[agent])

    def sender_utility(self, y, x) -> Fraction:
        return self.utility(0, y, x, self.theta1)

    def receiver_utility(self, y, x, theta2) -> Fraction:
        return self.utility(1, y, x, theta2)


def _unit_interval(value, name: str) -> Fraction:
    q = as_rational(value)
    if not 0 <= q <= 1:
        raise GameInputError(f"{name} must lie in [0, 1], got {q}")
    return q


def build_trust_dg(sender_grid: Sequence = (0, 1), theta1=Fraction(1, 4),
                   theta2: Sequence = (0, Fraction(2, 3)),
                   receiver_steps: int = 3) -> TrustStageGame:
    grid = tuple(sorted({_unit_interval(y, "sender action") for y in sender_grid}))
    if not grid:
        raise GameInputError("sender grid is empty")
    types = tuple(sorted({_unit_interval(t, "receiver type") for t in theta2}))
    if not types:
        raise GameInputError("receiver type space is empty")
    if receiver_steps < 1:
        raise GameInputError("receiver_steps must be at least 1")
    return TrustStageGame(grid, _unit_interval(theta1, "sender type"), types, receiver_steps)


def receiver_best_reply(g: TrustStageGame, y, theta2) -> frozenset[Fraction]:
    y = as_rational(y)
    if y not in g.sender_grid:
        raise GameInputError(f"{y} is not a sender action")
    values = {x: g.receiver_utility(y, x, theta2) for x in g.receiver_actions(y)}
    best = max(values.values())
    return frozenset(x for x, v in values.items() if v == best)


@dataclass
class SPEResult:
    """Receiver replies per ``(y, theta2)``; sender's optimal set of ``y``.

    When the receiver is indifferent, ``receiver_policy`` keeps the whole tie
    set and the sender evaluates the smallest reply.
    """

    receiver_policy: dict[tuple[Fraction, Fraction], frozenset[Fraction]]
    sender_values: dict[Fraction, Fraction]
    sender_policy: frozenset[Fraction]
    belief: dict[Fraction, Fraction]
    threshold: Fraction | None = None
    receiver_ties: list[tuple[Fraction, Fraction]] = field(default_factory=list)

    def reply(self, y, theta2) -> Fraction:
        return min(self.receiver_policy[as_rational(y), as_rational(theta2)])


def solve_spe(g: TrustStageGame, belief: Mapping) -> SPEResult:
    """Backward induction with the sender's belief over receiver types."""
    belief = {as_rational(t): as_rational(p) for t, p in belief.items()}
    if set(belief) - set(g.theta2):
        raise GameInputError("belief puts mass on an unknown receiver type")
    if any(p < 0 for p in belief.values()) or sum(belief.values()) != 1:
        raise GameInputError("belief must be a probability distribution")
    policy = {}
    ties = []
    for y in g.sender_grid:
        for t in g.theta2:
            replies = receiver_best_reply(g, y, t)
            policy[y, t] = replies
            if len(replies) > 1:
                ties.append((y, t))
    values = {
        y: sum((p * g.sender_utility(y, min(policy[y, t])) for t, p in belief.items()),
               Fraction(0))
        for y in g.sender_grid
    }
    best = max(values.values())
    chosen = frozenset(y for y, v in values.items() if v == best)
    return SPEResult(policy, values, chosen, belief, receiver_ties=ties)


def backward_induction(g: TrustStageGame) -> SPEResult:
    """Complete-information solution; needs a single receiver type."""
    if len(g.theta2) != 1:
        raise GameInputError("backward_induction needs one receiver type; use spe_with_belief")
    return solve_spe(g, {g.theta2[0]: Fraction(1)})


def spe_with_belief(g: TrustStageGame, p0) -> SPEResult:
    """SPE when the sender believes the receiver is selfish with probability ``p0``.

    The selfish type is the lower of the two receiver types; ``1 - p0`` goes
    on the prosocial (higher) type.
    """
    if len(g.theta2) != 2:
        raise GameInputError("spe_with_belief needs exactly two receiver types")
    p0 = _unit_interval(p0, "belief p0")
    low, high = g.theta2
    result = solve_spe(g, {low: p0, high: 1 - p0})
    try:
        result.threshold = sender_threshold(g)
    except GameInputError:
        result.threshold = None
    return result


def _receiver_slope(theta2: Fraction) -> Fraction:
    # d/dx of the receiver's combined utility
    return 2 * theta2 - 1


def sender_threshold(g: TrustStageGame) -> Fraction | None:
    """Belief ``p0`` in the selfish receiver at which the sender is indifferent
    between every sending amount.

    Requires one receiver type that returns 0 and one that returns ``3y``.
    Returns None when the sender's expected utility never changes sign.
    """
    if len(g.theta2) != 2:
        raise GameInputError("threshold needs exactly two receiver types")
    low, high = g.theta2
    if not (_receiver_slope(low) < 0 < _receiver_slope(high)):
        raise GameInputError(
            "threshold needs a selfish receiver type (< 1/2) and a prosocial one (> 1/2)"
        )
    # Sender utility is linear in y along each branch: reply 0 or reply 3y.
    selfish = g.sender_utility(1, 0) - g.sender_utility(0, 0)
    prosocial = g.sender_utility(1, 3) - g.sender_utility(0, 0)
    if not (selfish < 0 < prosocial):
        return None
    # p0 * selfish + (1 - p0) * prosocial == 0
    return prosocial / (prosocial - selfish)


# ---------------------------------------------------------------------------
# Prisoner's Dilemma double game

PD_LABELS = (("C", "D"), ("C", "D"))
COOPERATE, DEFECT = 0, 1


def pd_game(t, r, p, s) -> NormalFormGame:
    return NormalFormGame.bimatrix([[(r, r), (s, t)], [(t, s), (p, p)]], PD_LABELS)


def social_game(y, z) -> NormalFormGame:
    return NormalFormGame.bimatrix([[(y, y), (y, z)], [(z, y), (z, z)]], PD_LABELS)


def build_pd_dg(t, r, p, s, y, z) -> MultiGame:
    """Double game of the PD (first basic game) and the cooperation-rewarding
    social game (second). Actions are C=0, D=1."""
    t, r, p, s, y, z = (as_rational(v) for v in (t, r, p, s, y, z))
    checks = [
        (t > r, "t>r"), (r > p, "r>p"), (p > s, "p>s"),
        (2 * r > t + s, "r>(t+s)/2"), (y > z, "y>z"), (z == s, "z=s"),
    ]
    for ok, name in checks:
        if not ok:
            raise GameInputError(f"{name} violated")
    return MultiGame((pd_game(t, r, p, s), social_game(y, z)), names=("PD", "SG"))
