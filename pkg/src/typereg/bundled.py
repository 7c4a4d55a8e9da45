"""Worked instances shipped with the package, plus loaders for their data files."""

from __future__ import annotations

from fractions import Fraction
from importlib import resources

from .games import MultiGame, NormalFormGame, double_game_type
from .linear import multigame_to_bayesian
from .staged import build_pd_dg, build_trust_dg

MARKET_LABELS = (("s1", "s2", "s3"), ("s1", "s2", "s3"))

MARKET_TABLES = (
    [[(3, 4), (6, 3), (7, 1)], [(2, 5), (3, 2), (5, 3)], [(1, 3), (0, 2), (3, 0)]],
    [[(0, 4), (0, 8), (1, 1)], [(6, 1), (4, 5), (7, 3)], [(0, 1), (1, 6), (1, 3)]],
    [[(1, 0), (1, 2), (4, 5)], [(0, 1), (3, 2), (3, 4)], [(2, 4), (5, 3), (6, 7)]],
)

PD_DEFAULT = (5, 3, 1, 0, 2, 0)
COORDINATION_DEFAULT = (2, 3, 1, 4)
COORD_LABELS = (("a1", "a2"), ("a1", "a2"))


def market(j: int) -> NormalFormGame:
    """Market ``M_{j+1}`` as a bimatrix game."""
    return NormalFormGame.bimatrix(MARKET_TABLES[j], MARKET_LABELS)


def markets_multigame() -> MultiGame:
    """Two firms in three markets; both type spaces are the full 2-simplex."""
    return MultiGame(tuple(market(j) for j in range(3)), names=("M1", "M2", "M3"))


def pd_double_game(params=PD_DEFAULT) -> MultiGame:
    return build_pd_dg(*params)


def trust_double_game():
    return build_trust_dg((0, 1), Fraction(1, 4), (0, Fraction(2, 3)))


def coordination_game(x, y) -> NormalFormGame:
    return NormalFormGame.bimatrix([[(x, x), (x, 0)], [(0, x), (y, y)]], COORD_LABELS)


def coordination_double_game(x=2, y=3, z=1, w=4) -> MultiGame:
    return MultiGame((coordination_game(x, y), coordination_game(z, w)), names=("G1", "G2"))


def coordination_bayesian(params=COORDINATION_DEFAULT, types=(0, 1)):
    """The coordination double game on scalar types, as a finite Bayesian game
    whose type labels are the scalars themselves."""
    mg = coordination_double_game(*params)
    points = [double_game_type(t) for t in types]
    labels = [str(Fraction(t)) for t in types]
    return multigame_to_bayesian(mg, [points, points], [labels, labels])


def data_path(name: str):
    """Path of a bundled JSON file (e.g. ``"markets.json"``)."""
    return resources.files("typereg") / "data" / name


def data_files() -> list[str]:
    return sorted(p.name for p in (resources.files("typereg") / "data").iterdir()
                  if p.name.endswith(".json"))
