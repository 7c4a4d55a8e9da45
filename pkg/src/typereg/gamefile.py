"""JSON game files with exact ``"p/q"`` rational literals.

Every document is an object with a ``"kind"`` field; see README for the
per-kind layout. Payoff tables are nested arrays indexed by each agent's
action in turn, with a list of per-agent payoffs at the leaves.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

from .games import (
    FiniteBayesianGame,
    GameInputError,
    GeneralizedMultiGame,
    MixedStrategy,
    MultiGame,
    NormalFormGame,
    Prior,
    SimplexPoint,
    StrategyMapProfile,
    as_rational,
)
from .linear import OwnTypeLinearGame, TypeLinearGame
from .staged import TrustStageGame, build_pd_dg, build_trust_dg

KINDS = (
    "normal_form", "multi_game", "generalized_multi_game", "bayesian_finite",
    "type_linear", "trust_dg", "pd_dg", "strategy_map",
)


class GameFileError(GameInputError):
    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


@dataclass
class GameDocument:
    kind: str
    game: Any
    prior: Prior | None = None
    params: dict | None = None


def _rational(value, where: str) -> Fraction:
    if isinstance(value, float):
        raise GameFileError(where, f"float {value!r} is not exact; write it as \"p/q\"")
    try:
        return as_rational(value)
    except GameInputError as exc:
        raise GameFileError(where, str(exc)) from None


def _field(doc: dict, key: str, where: str, default=...):
    if key not in doc:
        if default is not ...:
            return default
        raise GameFileError(where, f"missing field {key!r}")
    return doc[key]


def _list(value, where: str) -> list:
    if not isinstance(value, list):
        raise GameFileError(where, f"expected a list, got {type(value).__name__}")
    return value


def _actions(doc: dict) -> tuple[tuple[str, ...], ...]:
    rows = _list(_field(doc, "actions", "actions"), "actions")
    labels = []
    for i, row in enumerate(rows):
        row = _list(row, f"actions[{i}]")
        if not row:
            raise GameFileError(f"actions[{i}]", "agent needs at least one action")
        labels.append(tuple(str(x) for x in row))
    if not labels:
        raise GameFileError("actions", "at least one agent is required")
    return tuple(labels)


def _table(value, actions: tuple[int, ...], where: str, leaf_len: int, labels=None):
    """Nested array -> {profile: tuple of rationals}."""
    out = {}

    def walk(node, prefix, path):
        depth = len(prefix)
        if depth == len(actions):
            leaf = _list(node, path)
            if len(leaf) != leaf_len:
                raise GameFileError(path, f"expected {leaf_len} entries, got {len(leaf)}")
            out[tuple(prefix)] = tuple(_rational(x, f"{path}[{k}]") for k, x in enumerate(leaf))
            return
        node = _list(node, path)
        if len(node) < actions[depth]:
            names = labels[depth] if labels else [str(k) for k in range(actions[depth])]
            missing = ", ".join(f"{path}[{k}] ({names[k]})"
                                for k in range(len(node), actions[depth]))
            raise GameFileError(path, f"missing payoff cell {missing} for agent {depth}")
        if len(node) > actions[depth]:
            raise GameFileError(
                path, f"expected {actions[depth]} entries for agent {depth}, got {len(node)}"
            )
        for k, child in enumerate(node):
            walk(child, prefix + [k], f"{path}[{k}]")

    walk(value, [], where)
    return out


def _dump_table(table: dict, actions: tuple[int, ...], leaf) -> list:
    def build(prefix):
        if len(prefix) == len(actions):
            return [str(x) for x in leaf(table[tuple(prefix)])]
        return [build(prefix + [k]) for k in range(actions[len(prefix)])]
    return build([])


def _nfg(payoffs, labels, where) -> NormalFormGame:
    actions = tuple(len(r) for r in labels)
    return NormalFormGame(actions, _table(payoffs, actions, where, len(actions), labels), labels)


def _simplex_list(value, where: str, m: int | None = None):
    if value is None:
        return None
    points = []
    for k, t in enumerate(_list(value, where)):
        coords = [_rational(x, f"{where}[{k}][{c}]") for c, x in enumerate(_list(t, f"{where}[{k}]"))]
        if m is not None and len(coords) != m:
            raise GameFileError(f"{where}[{k}]", f"type point needs {m} coordinates")
        try:
            points.append(SimplexPoint(coords))
        except GameInputError as exc:
            raise GameFileError(f"{where}[{k}]", str(exc)) from None
    return tuple(points)


def _type_spaces(doc, n: int, m: int):
    value = doc.get("type_spaces")
    if value is None:
        return None
    value = _list(value, "type_spaces")
    if len(value) != n:
        raise GameFileError("type_spaces", f"expected {n} type spaces")
    return tuple(_simplex_list(ts, f"type_spaces[{i}]", m) for i, ts in enumerate(value))


def _parse_normal_form(doc):
    return _nfg(_field(doc, "payoffs", "normal_form"), _actions(doc), "payoffs")


def _parse_multi_game(doc):
    labels = _actions(doc)
    games, names = [], []
    entries = _list(_field(doc, "basic_games", "multi_game"), "basic_games")
    if not entries:
        raise GameFileError("basic_games", "at least one basic game is required")
    for j, entry in enumerate(entries):
        where = f"basic_games[{j}]"
        games.append(_nfg(_field(entry, "payoffs", where), labels, f"{where}.payoffs"))
        names.append(str(entry.get("name", f"G{j + 1}")))
    return MultiGame(tuple(games), _type_spaces(doc, len(labels), len(games)), tuple(names))


def _parse_generalized(doc):
    labels = _actions(doc)
    n = len(labels)
    m = int(_field(doc, "m", "generalized_multi_game"))
    basic = {}
    for idx, entry in enumerate(_list(_field(doc, "basic_games", "generalized_multi_game"),
                                      "basic_games")):
        where = f"basic_games[{idx}]"
        key = (int(_field(entry, "agent", where)), int(_field(entry, "dimension", where)))
        if key in basic:
            raise GameFileError(where, f"duplicate basic game {key}")
        basic[key] = _nfg(_field(entry, "payoffs", where), labels, f"{where}.payoffs")
    return GeneralizedMultiGame(basic, n, m, _type_spaces(doc, n, m))


def _parse_prior(value, types) -> Prior | None:
    if value is None:
        return None
    joint = {}
    for k, entry in enumerate(_list(value, "prior")):
        where = f"prior[{k}]"
        theta = tuple(str(t) for t in _list(_field(entry, "types", where), f"{where}.types"))
        if len(theta) != len(types) or any(t not in ts for t, ts in zip(theta, types)):
            raise GameFileError(where, f"unknown type profile {theta}")
        joint[theta] = _rational(_field(entry, "mass", where), f"{where}.mass")
    try:
        return Prior(joint)
    except GameInputError as exc:
        raise GameFileError("prior", str(exc)) from None


def _parse_bayesian(doc):
    labels = _actions(doc)
    types = tuple(tuple(str(t) for t in _list(ts, f"types[{i}]"))
                  for i, ts in enumerate(_list(_field(doc, "types", "bayesian_finite"), "types")))
    local = {}
    for k, entry in enumerate(_list(_field(doc, "local_games", "bayesian_finite"),
                                    "local_games")):
        where = f"local_games[{k}]"
        theta = tuple(str(t) for t in _list(_field(entry, "types", where), f"{where}.types"))
        local[theta] = _nfg(_field(entry, "payoffs", where), labels, f"{where}.payoffs")
    for theta in itertools.product(*types):
        if theta not in local:
            raise GameFileError("local_games", f"missing local game for type profile {list(theta)}")
    game = FiniteBayesianGame(tuple(len(r) for r in labels), types, local)
    return game, _parse_prior(doc.get("prior"), types)


def _parse_type_linear(doc):
    labels = _actions(doc)
    actions = tuple(len(r) for r in labels)
    m = int(_field(doc, "m", "type_linear"))
    coeff = {}
    for k, entry in enumerate(_list(_field(doc, "coefficients", "type_linear"), "coefficients")):
        where = f"coefficients[{k}]"
        i = int(_field(entry, "agent", where))
        j = int(entry.get("type_of", i))
        for a, vec in _table(_field(entry, "payoffs", where), actions, f"{where}.payoffs", m).items():
            coeff[i, j, a] = vec
    raw = doc.get("raw_type_spaces")
    if raw is not None:
        raw = tuple(
            tuple(tuple(_rational(x, f"raw_type_spaces[{i}][{k}]") for x in _list(t, f"raw_type_spaces[{i}][{k}]"))
                  for k, t in enumerate(_list(ts, f"raw_type_spaces[{i}]")))
            for i, ts in enumerate(_list(raw, "raw_type_spaces")))
    cls = OwnTypeLinearGame if doc.get("own_type", False) else TypeLinearGame
    return cls(actions, m, coeff, raw)


def _parse_trust(doc):
    return build_trust_dg(
        [_rational(y, f"sender_grid[{k}]") for k, y in enumerate(_list(doc.get("sender_grid", ["0", "1"]), "sender_grid"))],
        _rational(doc.get("theta1", "1/4"), "theta1"),
        [_rational(t, f"theta2[{k}]") for k, t in enumerate(_list(doc.get("theta2", ["0", "2/3"]), "theta2"))],
        int(doc.get("receiver_steps", 3)),
    )


PD_PARAMS = ("t", "r", "p", "s", "y", "z")


def _parse_pd(doc):
    params = {k: _rational(_field(doc, k, "pd_dg"), k) for k in PD_PARAMS}
    return build_pd_dg(*(params[k] for k in PD_PARAMS)), params


def parse_document(doc: Any) -> GameDocument:
    if not isinstance(doc, dict):
        raise GameFileError("document", "top level must be an object")
    kind = _field(doc, "kind", "document")
    try:
        if kind == "normal_form":
            return GameDocument(kind, _parse_normal_form(doc))
        if kind == "multi_game":
            return GameDocument(kind, _parse_multi_game(doc))
        if kind == "generalized_multi_game":
            return GameDocument(kind, _parse_generalized(doc))
        if kind == "bayesian_finite":
            game, prior = _parse_bayesian(doc)
            return GameDocument(kind, game, prior)
        if kind == "type_linear":
            return GameDocument(kind, _parse_type_linear(doc))
        if kind == "trust_dg":
            return GameDocument(kind, _parse_trust(doc))
        if kind == "pd_dg":
            game, params = _parse_pd(doc)
            return GameDocument(kind, game, params=params)
    except GameFileError:
        raise
    except GameInputError as exc:
        raise GameFileError(kind, str(exc)) from None
    except (TypeError, ValueError, KeyError, AttributeError) as exc:
        raise GameFileError(kind, f"malformed document ({exc})") from None
    raise GameFileError("kind", f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")


def loads(text: str) -> GameDocument:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GameFileError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    return parse_document(doc)


def load(path) -> GameDocument:
    return loads(Path(path).read_text())


def parse_strategy_map(doc: Any, game: FiniteBayesianGame,
                       labels: tuple[tuple[str, ...], ...] | None = None) -> StrategyMapProfile:
    """``maps[i][type]`` is an action label, action index, or probability list."""
    if not isinstance(doc, dict) or doc.get("kind") != "strategy_map":
        raise GameFileError("document", "expected kind 'strategy_map'")
    maps = _list(_field(doc, "maps", "strategy_map"), "maps")
    if len(maps) != game.n:
        raise GameFileError("maps", f"expected {game.n} agent maps, got {len(maps)}")
    out = []
    for i, m in enumerate(maps):
        if not isinstance(m, dict):
            raise GameFileError(f"maps[{i}]", "expected an object keyed by type label")
        fixed = {}
        for t in game.types[i]:
            where = f"maps[{i}][{t!r}]"
            if t not in m:
                raise GameFileError(where, "strategy map missing this type")
            value = m[t]
            if isinstance(value, str):
                row = labels[i] if labels else tuple(f"a{k + 1}" for k in range(game.actions[i]))
                if value not in row:
                    raise GameFileError(where, f"unknown action {value!r}")
                fixed[t] = MixedStrategy.pure(row.index(value), game.actions[i])
            elif isinstance(value, int) and not isinstance(value, bool):
                fixed[t] = MixedStrategy.pure(value, game.actions[i])
            else:
                probs = [_rational(x, f"{where}[{k}]") for k, x in enumerate(_list(value, where))]
                if len(probs) != game.actions[i]:
                    raise GameFileError(where, f"expected {game.actions[i]} probabilities")
                try:
                    fixed[t] = MixedStrategy(probs)
                except GameInputError as exc:
                    raise GameFileError(where, str(exc)) from None
        out.append(fixed)
    return StrategyMapProfile(tuple(out))


def load_strategy_map(path, game, labels=None) -> StrategyMapProfile:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GameFileError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    return parse_strategy_map(doc, game, labels)


# ---------------------------------------------------------------------------
# Serialization


def _labels_of(g: NormalFormGame):
    if g.action_labels is not None:
        return [list(r) for r in g.action_labels]
    return [[f"a{k + 1}" for k in range(c)] for c in g.actions]


def _pay(g: NormalFormGame):
    return _dump_table(g.payoffs, g.actions, lambda v: v)


def _dump_spaces(spaces):
    if spaces is None or all(ts is None for ts in spaces):
        return None
    return [None if ts is None else [[str(x) for x in t] for t in ts] for ts in spaces]


def dump_document(obj, kind: str | None = None, labels=None, prior: Prior | None = None,
                  params: dict | None = None) -> dict:
    if isinstance(obj, GameDocument):
        return dump_document(obj.game, obj.kind, labels, obj.prior, obj.params)
    if kind == "pd_dg" and params is not None:
        return {"kind": "pd_dg", **{k: str(params[k]) for k in PD_PARAMS}}
    if isinstance(obj, NormalFormGame):
        return {"kind": "normal_form", "actions": _labels_of(obj), "payoffs": _pay(obj)}
    if isinstance(obj, MultiGame):
        names = obj.names or tuple(f"G{j + 1}" for j in range(obj.m))
        doc = {"kind": "multi_game", "actions": _labels_of(obj.basic[0]),
               "basic_games": [{"name": nm, "payoffs": _pay(g)} for nm, g in zip(names, obj.basic)]}
        spaces = _dump_spaces(obj.type_spaces)
        if spaces is not None:
            doc["type_spaces"] = spaces
        return doc
    if isinstance(obj, GeneralizedMultiGame):
        doc = {"kind": "generalized_multi_game", "m": obj.m,
               "actions": _labels_of(obj.basic[0, 0]),
               "basic_games": [{"agent": k, "dimension": j, "payoffs": _pay(g)}
                               for (k, j), g in obj.basic.items()]}
        spaces = _dump_spaces(obj.type_spaces)
        if spaces is not None:
            doc["type_spaces"] = spaces
        return doc
    if isinstance(obj, FiniteBayesianGame):
        first = obj.local[next(obj.type_profiles())]
        doc = {"kind": "bayesian_finite",
               "actions": labels or _labels_of(first),
               "types": [[str(t) for t in ts] for ts in obj.types],
               "local_games": [{"types": [str(t) for t in theta], "payoffs": _pay(obj.local[theta])}
                               for theta in obj.type_profiles()]}
        if prior is not None:
            doc["prior"] = [{"types": [str(t) for t in theta], "mass": str(v)}
                            for theta, v in prior.joint.items()]
        return doc
    if isinstance(obj, TypeLinearGame):
        doc = {"kind": "type_linear", "m": obj.m,
               "own_type": isinstance(obj, OwnTypeLinearGame),
               "actions": labels or [[f"a{k + 1}" for k in range(c)] for c in obj.actions],
               "coefficients": []}
        pairs = sorted({(i, k) for i, k, _ in obj.coeff})
        for i, k in pairs:
            table = {a: obj.L(i, k, a) for a in obj.profiles()}
            doc["coefficients"].append({"agent": i, "type_of": k,
                                        "payoffs": _dump_table(table, obj.actions, lambda v: v)})
        if obj.raw_type_spaces is not None:
            doc["raw_type_spaces"] = [[[str(x) for x in t] for t in ts] for ts in obj.raw_type_spaces]
        return doc
    if isinstance(obj, TrustStageGame):
        return {"kind": "trust_dg", "sender_grid": [str(y) for y in obj.sender_grid],
                "receiver_steps": obj.receiver_steps, "theta1": str(obj.theta1),
                "theta2": [str(t) for t in obj.theta2]}
    raise GameInputError(f"cannot serialize {type(obj).__name__}")


def _scalar(x) -> bool:
    return x is None or isinstance(x, (str, int, float, bool))


def _flat(x) -> bool:
    return _scalar(x) or (isinstance(x, list) and all(_scalar(y) for y in x))


def pretty_json(value, indent: int = 0) -> str:
    """JSON with payoff-table rows kept on one line."""
    pad = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {pretty_json(v, indent + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(value, list) and value and not all(_flat(x) for x in value):
        items = [pad + pretty_json(v, indent + 1) for v in value]
        return "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"
    return json.dumps(value)


def dumps(obj, **kwargs) -> str:
    return pretty_json(dump_document(obj, **kwargs)) + "\n"
