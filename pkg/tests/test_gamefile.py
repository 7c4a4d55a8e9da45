import json
from fractions import Fraction as F

import pytest

from typereg import bundled, gamefile
from typereg.gamefile import GameFileError
from typereg.games import GameInputError, MultiGame, NormalFormGame, Prior
from typereg.linear import OwnTypeLinearGame, TypeLinearGame


GAME_FILES = [n for n in bundled.data_files() if "strategy" not in n]


@pytest.mark.parametrize("name", GAME_FILES)
def test_bundled_files_round_trip(name):
    text = bundled.data_path(name).read_text()
    doc = gamefile.loads(text)
    assert gamefile.dumps(doc.game, kind=doc.kind, prior=doc.prior, params=doc.params) == text


def test_bundled_strategy_map_loads():
    game = bundled.coordination_bayesian()
    sigma = gamefile.load_strategy_map(bundled.data_path("coordination_strategy.json"), game,
                                       bundled.COORD_LABELS)
    assert all(s.pure_action == 0 for m in sigma.maps for s in m.values())


def test_normal_form_round_trip_keeps_values():
    g = NormalFormGame.bimatrix([[(F(1, 3), -2), (0, 5)], [(7, F(-4, 9)), (1, 1)]],
                                (("u", "d"), ("l", "r")))
    back = gamefile.loads(gamefile.dumps(g)).game
    assert back == g and back.action_labels == g.action_labels


def test_multi_game_round_trip(markets):
    back = gamefile.loads(gamefile.dumps(markets)).game
    assert isinstance(back, MultiGame)
    assert all(a == b for a, b in zip(back.basic, markets.basic))


def test_type_linear_round_trip():
    g = TypeLinearGame((2, 1), 2, {(0, 1, (1, 0)): (F(1, 2), 3), (1, 0, (0, 0)): (-1, 0)},
                       (((1, 2),), ((0, 4), (3, 3))))
    back = gamefile.loads(gamefile.dumps(g)).game
    keys = [(i, k, a) for i in range(2) for k in range(2) for a in g.profiles()]
    assert all(back.L(*key) == g.L(*key) for key in keys)
    assert back.raw_type_spaces == g.raw_type_spaces
    own = OwnTypeLinearGame((2,), 1, {(0, 0, (1,)): (4,)})
    assert isinstance(gamefile.loads(gamefile.dumps(own)).game, OwnTypeLinearGame)


def test_bayesian_prior_round_trip():
    game = bundled.coordination_bayesian()
    prior = Prior({("0", "0"): F(1, 2), ("1", "1"): F(1, 2)})
    doc = gamefile.loads(gamefile.dumps(game, prior=prior))
    assert doc.prior.joint == prior.joint


def test_missing_cell_is_named():
    text = json.dumps({"kind": "normal_form", "actions": [["a", "b"], ["c", "d"]],
                       "payoffs": [[["1", "2"], ["1", "2"]], [["1", "2"]]]})
    with pytest.raises(GameFileError, match=r"payoffs\[1\]\[1\] \(d\)"):
        gamefile.loads(text)


def test_float_payoff_is_rejected():
    text = '{"kind": "normal_form", "actions": [["a"], ["b"]], "payoffs": [[[0.5, "1"]]]}'
    with pytest.raises(GameFileError, match=r"payoffs\[0\]\[0\]\[0\].*not exact"):
        gamefile.loads(text)


def test_syntax_error_has_line_and_column():
    with pytest.raises(GameFileError, match="line 2 column"):
        gamefile.loads('{"kind": "normal_form",\n "actions": [}')


@pytest.mark.parametrize("text,fragment", [
    ('{"kind": "nope"}', "unknown kind"),
    ("[]", "top level"),
    ('{"actions": []}', "kind"),
])
def test_bad_documents(text, fragment):
    with pytest.raises(GameInputError, match=fragment):
        gamefile.loads(text)


def test_strategy_map_unknown_action():
    game = bundled.coordination_bayesian()
    doc = {"kind": "strategy_map", "maps": [{"0": "a1", "1": "a3"}, {"0": "a1", "1": "a1"}]}
    with pytest.raises(GameInputError):
        gamefile.parse_strategy_map(doc, game, bundled.COORD_LABELS)
