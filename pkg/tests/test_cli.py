import json
import random
from fractions import Fraction as F

import pytest
from click.testing import CliRunner

import oracles
from typereg import bundled, gamefile
from typereg.cli import main
from typereg.games import NormalFormGame, double_game_type
from typereg.linear import mg_to_coefficients


def run(*args):
    return CliRunner().invoke(main, [str(a) for a in args])


def structured(*args):
    result = run("--format", "structured", *args)
    return result.exit_code, json.loads(result.stdout)


def data(name):
    return str(bundled.data_path(name))


def test_solve_market_m3():
    code, report = structured("solve", data("market_m3.json"))
    assert code == 0
    pure = report["result"]["pure"]["equilibria"]
    expect = oracles.brute_pure_ne(*oracles.table(bundled.market(2)))
    assert [[d["text"] for d in eq["profile"]] for eq in pure] == \
        [[f"s{x + 1}" for x in a] for a in expect]
    s3 = [eq for eq in pure if [d["text"] for d in eq["profile"]] == ["s3", "s3"]][0]
    assert s3["payoffs"] == ["6", "7"]


def test_solve_random_bimatrix_matches_formula(tmp_path):
    rows = [[(F(4), F(-1)), (F(0), F(2))], [(F(1), F(3)), (F(2), F(0))]]
    path = tmp_path / "g.json"
    path.write_text(gamefile.dumps(NormalFormGame.bimatrix(rows)))
    code, report = structured("solve", path)
    p, q = oracles.mixed_2x2(rows)
    mixed = [eq for eq in report["result"]["support_enumeration"]["equilibria"] if not eq["pure"]]
    assert [[x["probs"] for x in eq["profile"]] for eq in mixed] == \
        [[[str(v) for v in p], [str(v) for v in q]]]


def test_empty_payoff_table_exits_2(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"kind": "normal_form", "actions": [["a", "b"], ["c"]],
                                "payoffs": []}))
    result = run("solve", path)
    assert result.exit_code == 2
    assert "payoffs[0] (a)" in result.output


def test_missing_file_exits_2(tmp_path):
    assert run("solve", tmp_path / "absent.json").exit_code == 2


def test_check_regularity_markets():
    code, report = structured("check-regularity", data("markets.json"), "--grid", 2)
    vertex = report["result"]["vertex_search"]
    assert vertex["status"] == "certified"
    assert [v["text"] for v in vertex["witness"][0]["vertices"]] == ["s1", "s2", "s3"]
    grid = report["result"]["grid_check"]
    w = [[oracles.pure_vec(j, 3) for j in range(3)]] * 2
    expect = oracles.grid_violating_profiles(bundled.markets_multigame().basic, w, 2)
    assert grid["violating_profiles"] == len(expect)
    assert code == (0 if not expect else 1)
    assert report["status"] == ("certified" if not expect else "refuted")


def test_check_regularity_refuted_instance(tmp_path):
    from typereg.games import MultiGame
    from typereg.regularity import vertex_regularity_search
    for seed in range(400):
        r = random.Random(seed)
        mg = MultiGame(tuple(NormalFormGame((2, 2), oracles.random_payoffs(r, (2, 2), -9, 9))
                             for _ in range(2)))
        if vertex_regularity_search(mg).status == "refuted":
            break
    path = tmp_path / "mg.json"
    path.write_text(gamefile.dumps(mg))
    code, report = structured("check-regularity", path)
    assert code == 1 and report["status"] == "refuted"
    assert report["result"]["vertex_search"]["violations"]


def test_check_regularity_rejects_normal_form():
    assert run("check-regularity", data("market_m3.json")).exit_code == 2


def test_verify_bne_coordination():
    code, report = structured("verify-bne", data("coordination.json"),
                              data("coordination_strategy.json"))
    assert code == 0
    assert report["result"]["agreement"] is True
    assert report["result"]["priors_checked"] == 4 + 64


def test_verify_bne_corrupted_map(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"kind": "strategy_map",
                                "maps": [{"0": "a1", "1": "a1"}, {"0": "a2", "1": "a1"}]}))
    code, report = structured("verify-bne", data("coordination.json"), path)
    assert code == 1
    assert report["result"]["local_ne_everywhere"] is False
    assert report["result"]["local_violations"][0]["types"][1] == "0"
    assert report["result"]["agreement"] is True


def test_verify_bne_single_type(tmp_path):
    g = NormalFormGame.bimatrix([[(3, 3), (0, 5)], [(5, 0), (1, 1)]], (("C", "D"), ("C", "D")))
    from typereg.games import FiniteBayesianGame
    game = FiniteBayesianGame((2, 2), [["t"], ["u"]], {("t", "u"): g})
    gpath, spath = tmp_path / "g.json", tmp_path / "s.json"
    gpath.write_text(gamefile.dumps(game))
    for a, ok in ((("D", "D"), True), (("C", "D"), False)):
        spath.write_text(json.dumps({"kind": "strategy_map",
                                     "maps": [{"t": a[0]}, {"u": a[1]}]}))
        code, report = structured("verify-bne", gpath, spath)
        assert report["result"]["local_ne_everywhere"] is ok
        assert code == (0 if ok else 1)


def test_convert_own_type_linear(tmp_path):
    src, out = tmp_path / "l.json", tmp_path / "mg.json"
    src.write_text(gamefile.dumps(mg_to_coefficients(bundled.pd_double_game())))
    code, report = structured("convert", src, "-o", out)
    assert code == 0
    assert report["result"]["vertex_audit_mismatches"] == 0
    back = gamefile.load(out).game
    assert back.basic[0] == bundled.pd_double_game().basic[0]


def test_example_trust_default_beliefs():
    code, report = structured("example", "trust")
    assert code == 0
    assert report["result"]["threshold"] == "7/9"
    optimal = {p["p0"]: p["sender_optimal"] for p in report["result"]["policies"]}
    assert optimal == {"7/18": ["1"], "7/9": ["0", "1"], "8/9": ["0"]}


def test_example_trust_with_belief():
    code, report = structured("example", "trust", "--belief", "1/2")
    assert report["result"]["policies"][0]["sender_optimal"] == ["1"]


def test_example_markets_grid_size():
    code, report = structured("example", "markets", "--grid", 4)
    assert report["result"]["grid_check"]["checked_profiles"] == 225


def test_example_pd_local_check_matches_oracle():
    code, report = structured("example", "pd", "--theta1", "1/3", "--theta2", "2/3", "--grid", 3)
    local = report["result"]["local_check"]
    t1, t2 = double_game_type(F(1, 3)), double_game_type(F(2, 3))
    pd = bundled.pd_double_game()
    actions, pay = oracles.local_mg(pd.basic, [tuple(t1), tuple(t2)])
    # Witness: D at the material vertex, C at the social one.
    mix = [[t[1], t[0]] for t in (t1, t2)]
    gains = oracles.gains(actions, pay, mix)
    assert local["is_nash"] is (not gains)
    assert [(v["agent"], v["deviation"], v["gain"]) for v in local["violations"]] == \
        [(i, "CD"[x], str(g)) for i, x, g in gains]
    assert code == 1


def test_example_pd_rejects_bad_params():
    result = run("example", "pd", "--params", "3,3,1,0,2,0")
    assert result.exit_code == 2 and "t>r" in result.output


def test_unknown_example_exits_2():
    assert run("example", "chess").exit_code == 2


def test_bad_rational_option_exits_2():
    assert run("example", "trust", "--belief", "half").exit_code == 2


def test_decimal_string_is_read_exactly():
    _, report = structured("example", "trust", "--belief", "0.5")
    assert report["result"]["policies"][0]["p0"] == "1/2"


@pytest.mark.parametrize("args", [
    ("solve", "market_m3.json"),
    ("check-regularity", "pd_dg.json", "--grid", "4"),
    ("verify-bne", "coordination.json", "coordination_strategy.json", "--seed", "3"),
])
def test_reports_are_byte_identical(args):
    argv = [data(a) if a.endswith(".json") else a for a in args]
    first = run("--format", "structured", *argv)
    second = run("--format", "structured", *argv)
    assert first.stdout == second.stdout
    assert "elapsed" not in first.stdout


def test_timing_flag_adds_elapsed():
    result = run("--format", "structured", "--timing", "solve", data("market_m3.json"))
    assert "elapsed_seconds" in json.loads(result.stdout)


def test_human_format():
    result = run("example", "trust")
    assert result.stdout.startswith("example trust: valid")
