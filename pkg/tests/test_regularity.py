import itertools
import random
from fractions import Fraction as F
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from typereg import bundled
from typereg.games import (
    FiniteBayesianGame,
    GameInputError,
    MixedStrategy,
    MultiGame,
    NormalFormGame,
    SimplexPoint,
    StrategyMapProfile,
    double_game_type,
)
from typereg.linear import multigame_to_bayesian
from typereg.regularity import (
    CERTIFIED,
    INCONCLUSIVE,
    REFUTED,
    DoubleGameSpec,
    Witness,
    check_prop1,
    check_prop2,
    check_witness,
    extend_witness,
    simplex_grid,
    theorem1_audit,
    verify_type_regularity,
    vertex_regularity_search,
)

C, D = 0, 1


def probs(w: Witness):
    return [[list(s) for s in row] for row in w.strategies]


def random_game(rng, actions, lo=-6, hi=6, denominator=1):
    return NormalFormGame(actions, oracles.random_payoffs(rng, actions, lo, hi, denominator))


# -- grid ---------------------------------------------------------------------------

@pytest.mark.parametrize("m,d", [(1, 3), (2, 1), (2, 10), (3, 4), (3, 6), (4, 3)])
def test_simplex_grid_matches_filtered_cube(m, d):
    pts = simplex_grid(m, d)
    assert len(pts) == comb(d + m - 1, m - 1)
    assert {tuple(p) for p in pts} == set(oracles.grid(m, d))


def test_simplex_grid_rejects_zero_resolution():
    with pytest.raises(GameInputError):
        simplex_grid(3, 0)


# -- vertex search ------------------------------------------------------------------

def test_markets_witness_plays_market_equilibrium(markets):
    report = vertex_regularity_search(markets)
    assert report.status == CERTIFIED
    for i in range(2):
        for j in range(3):
            assert report.witness.strategies[i][j] == MixedStrategy.pure(j, 3)
    assert oracles.vertex_regular(markets.basic, probs(report.witness))


def test_pd_witness_defects_materially_cooperates_socially(pd_dg):
    report = vertex_regularity_search(pd_dg)
    assert report.certified
    for i in range(2):
        assert [s.pure_action for s in report.witness.strategies[i]] == [D, C]


def test_single_basic_game_reduces_to_nash(prisoners):
    report = vertex_regularity_search(MultiGame((prisoners,)))
    assert report.certified
    assert [row[0].pure_action for row in report.witness.strategies] == [1, 1]


def test_incompatible_vertex_games_are_refuted():
    # Scan random double games for one whose vertex games share no witness.
    for seed in range(400):
        r = random.Random(seed)
        mg = MultiGame((random_game(r, (2, 2), -9, 9), random_game(r, (2, 2), -9, 9)))
        report = vertex_regularity_search(mg)
        if report.status == REFUTED:
            break
    else:
        pytest.fail("no refuted instance among random games")
    assert report.violations
    assert report.complete_search
    assert oracles.exists_vertex_witness_2x2(list(mg.basic)) is None


def generic(mg):
    for js in itertools.product(range(mg.m), repeat=2):
        g = mg.vertex_game(js)
        for other in range(2):
            col = [g.payoffs[x, other][0] for x in range(2)]
            row = [g.payoffs[other, x][1] for x in range(2)]
            if len(set(col)) < 2 or len(set(row)) < 2:
                return False
    return True


def test_vertex_search_agrees_with_exhaustive_oracle():
    checked = 0
    for seed in range(150):
        r = random.Random(seed)
        mg = MultiGame(tuple(random_game(r, (2, 2), -20, 20) for _ in range(2)))
        if not generic(mg):
            continue
        report = vertex_regularity_search(mg)
        expect = oracles.exists_vertex_witness_2x2(list(mg.basic))
        assert report.certified == (expect is not None)
        if report.certified:
            assert oracles.vertex_regular(mg.basic, probs(report.witness))
        checked += 1
    assert checked > 50


def test_three_agents_pure_search():
    g = NormalFormGame.from_function((2, 2, 2), lambda a: tuple(F(int(len(set(a)) == 1))
                                                             for _ in range(3)))
    report = vertex_regularity_search(MultiGame((g, g)))
    assert report.certified
    assert not report.complete_search


def test_three_agents_without_pure_witness_is_inconclusive():
    # Odd-one-out game: agent 0 wants to match agent 1, agent 1 to mismatch agent 2 ...
    def pay(a):
        return (F(int(a[0] == a[1])), F(int(a[1] != a[2])), F(int(a[2] == a[0])))
    g = NormalFormGame.from_function((2, 2, 2), pay)
    if oracles.brute_pure_ne(*oracles.table(g)):
        pytest.skip("game has a pure NE")
    report = vertex_regularity_search(MultiGame((g,)))
    assert report.status == INCONCLUSIVE


# -- barycentric extension ----------------------------------------------------------

def test_extend_witness_examples():
    w = Witness.from_actions([[0, 1, 2], [2, 2, 2]], (3, 3))
    p = extend_witness(w, 0, [F(1, 2), F(1, 4), F(1, 4)])
    assert tuple(p) == (F(1, 2), F(1, 4), F(1, 4))
    assert tuple(extend_witness(w, 1, [F(1, 3)] * 3)) == (0, 0, 1)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_extension_is_a_distribution_and_matches_at_vertices(seed):
    r = random.Random(seed)
    table = [[oracles.random_probs(r, 3) for _ in range(4)] for _ in range(2)]
    w = Witness.from_actions(table, (3, 3))
    theta = oracles.random_probs(r, 4)
    for i in range(2):
        s = extend_witness(w, i, theta)
        assert sum(s) == 1 and min(s) >= 0
        assert list(s) == oracles.extend(table[i], theta)
        for j in range(4):
            assert extend_witness(w, i, SimplexPoint.vertex(j, 4)) == w.strategies[i][j]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 3))
def test_constant_vertex_witness_extends_to_whole_grid(seed, m):
    # When each agent's certified strategy is the same at every vertex, its
    # payoff against any opponent profile is a convex combination of vertex
    # payoffs, so best responses survive blending.
    r = random.Random(seed)
    mg = MultiGame(tuple(random_game(r, (2, 2), -4, 4) for _ in range(m)))
    for a in itertools.product(range(2), repeat=2):
        w = Witness.from_actions([[a[0]] * m, [a[1]] * m], (2, 2))
        if check_witness(mg, w, "vertices").certified:
            assert verify_type_regularity(mg, w, 4).certified


def test_pd_extension_fails_between_vertices(pd_dg):
    w = vertex_regularity_search(pd_dg).witness
    half = double_game_type(F(1, 2))
    report = check_witness(pd_dg, w, "grid", 2)
    bad = {v.types for v in report.violations}
    assert (half, half) in bad
    # Oracle: the blended strategy 1/2 C + 1/2 D is beaten by C.
    actions, pay = oracles.local_mg(pd_dg.basic, [tuple(half), tuple(half)])
    mix = [F(1, 2), F(1, 2)]
    g = oracles.gains(actions, pay, [mix, mix])
    assert (0, C, F(1, 8)) in g and (1, C, F(1, 8)) in g


def test_markets_grid_violations_match_oracle(markets):
    w = vertex_regularity_search(markets).witness
    report = verify_type_regularity(markets, w, 4)
    expect = oracles.grid_violating_profiles(markets.basic, probs(w), 4)
    assert report.checked == 15 * 15
    assert [tuple(tuple(t) for t in p) for p in report.violating_profiles()] == \
        sorted(expect, key=lambda th: [tuple(-x for x in t) for t in th])


def test_grid_resolution_one_is_the_vertex_check(markets):
    w = vertex_regularity_search(markets).witness
    report = verify_type_regularity(markets, w, 1)
    assert report.certified and report.checked == 9


def test_corrupted_pd_witness_is_caught(pd_dg):
    w = Witness.from_actions([[D, D], [D, D]], (2, 2))
    report = verify_type_regularity(pd_dg, w, 10)
    assert not report.certified
    social = double_game_type(1)
    at_social = [v for v in report.violations if v.types == (social, social)]
    assert {(v.agent, v.action) for v in at_social} == {(0, C), (1, C)}
    assert len(report.violating_profiles()) == len(
        oracles.grid_violating_profiles(pd_dg.basic, probs(w), 10))


def test_boundary_region_counts(markets):
    w = vertex_regularity_search(markets).witness
    report = check_witness(markets, w, "boundary", 4)
    # 15 * 3 profiles per free agent, minus the 9 shared vertex profiles.
    assert report.checked == 2 * 15 * 3 - 9


@settings(max_examples=10, deadline=None)
@given(st.sampled_from([F(1, 3), F(2), F(7, 2)]), st.integers(0, 1))
def test_regularity_invariant_under_rescaling(factor, agent):
    mg = bundled.pd_double_game()
    scaled = mg.scaled(agent, factor)
    a, b = vertex_regularity_search(mg), vertex_regularity_search(scaled)
    assert a.witness == b.witness
    ga, gb = verify_type_regularity(mg, a.witness, 6), verify_type_regularity(scaled, b.witness, 6)
    assert ga.violating_profiles() == gb.violating_profiles()


# -- prior independence -------------------------------------------------------------

def pd_bayesian(pd_dg):
    pts = [double_game_type(0), double_game_type(1)]
    return multigame_to_bayesian(pd_dg, [pts, pts], [["0", "1"], ["0", "1"]])


def test_theorem1_coordination_constant():
    game = bundled.coordination_bayesian()
    report = theorem1_audit(game, StrategyMapProfile.constant(game.types, [0, 0]))
    assert report.local_ne_everywhere and report.bne_under_all_priors and report.agreement
    assert len(report.prior_verdicts) == 4 + 64


def test_theorem1_pd_witness_maps(pd_dg):
    game = pd_bayesian(pd_dg)
    sigma = StrategyMapProfile(({"0": D, "1": C}, {"0": D, "1": C}))
    report = theorem1_audit(game, sigma)
    assert report.local_ne_everywhere and report.bne_under_all_priors


def test_theorem1_corrupted_map_is_falsified(pd_dg):
    game = pd_bayesian(pd_dg)
    sigma = StrategyMapProfile(({"0": D, "1": C}, {"0": C, "1": C}))
    report = theorem1_audit(game, sigma)
    assert not report.local_ne_everywhere
    assert not report.bne_under_all_priors
    assert report.falsifying_prior[1] == "0"
    assert report.agreement


def test_theorem1_single_type_equals_nash(prisoners):
    game = FiniteBayesianGame((2, 2), [["t"], ["u"]], {("t", "u"): prisoners})
    for a in itertools.product(range(2), repeat=2):
        sigma = StrategyMapProfile.constant(game.types, list(a))
        report = theorem1_audit(game, sigma, prior_samples=0)
        assert report.local_ne_everywhere == (a == (1, 1))
        assert report.agreement


def test_theorem1_agreement_on_random_games():
    r = random.Random(9)
    for _ in range(60):
        types = [[f"t{k}" for k in range(r.randint(1, 3))] for _ in range(2)]
        local = {th: random_game(r, (2, 2), -2, 2) for th in itertools.product(*types)}
        game = FiniteBayesianGame((2, 2), types, local)
        sigma = StrategyMapProfile(tuple({t: r.randint(0, 1) for t in ts} for ts in types))
        report = theorem1_audit(game, sigma, prior_samples=16, seed=r.randint(0, 99))
        assert report.agreement


def test_theorem1_is_seed_deterministic():
    game = bundled.coordination_bayesian()
    sigma = StrategyMapProfile.constant(game.types, [0, 1])
    a = theorem1_audit(game, sigma, seed=5)
    b = theorem1_audit(game, sigma, seed=5)
    assert a.prior_verdicts == b.prior_verdicts


# -- double-game tables -------------------------------------------------------------

def pd_as_symmetric(t=5, r=3, p=1, s=0, y=2, z=0):
    # First action D, second C: neG1 = (D, D) becomes (a1, a1).
    return DoubleGameSpec.from_symmetric(p, t, s, r, z, z, y, y)


def test_pd_social_matches_row_four():
    spec = pd_as_symmetric()
    assert check_prop1(spec, (0, 0), (1, 1)) == (4, True)


def test_pd_spec_reproduces_builder_games(pd_dg):
    spec = pd_as_symmetric()
    swap = lambda a: (1 - a[0], 1 - a[1])
    for a in itertools.product(range(2), repeat=2):
        assert spec.g1.payoffs[a] == pd_dg.basic[0].payoffs[swap(a)]
        assert spec.g2.payoffs[a] == pd_dg.basic[1].payoffs[swap(a)]


def test_prop1_row_one_coordination():
    spec = DoubleGameSpec.from_symmetric(2, 0, 0, 1, 3, 0, 0, 1)
    assert check_prop1(spec, (0, 0), (0, 0)) == (1, True)


def test_prop1_rejects_non_equilibrium():
    spec = DoubleGameSpec.from_symmetric(0, 0, 1, 1, 3, 0, 0, 1)
    with pytest.raises(GameInputError, match="not a NE"):
        check_prop1(spec, (0, 0), (0, 0))
    row, regular = check_prop1(spec, (0, 0), (0, 0), validate=False)
    assert row is None and regular is False


def test_prop1_rows_against_brute_force():
    r = random.Random(1)
    checked = 0
    while checked < 300:
        vals = [r.randint(-6, 6) for _ in range(8)]
        if r.random() < 0.5:
            vals[6] = vals[4]   # the rows 2 and 3 need e == g
        spec = DoubleGameSpec.from_symmetric(*vals)
        for ne2 in itertools.product(range(2), repeat=2):
            try:
                row, regular = check_prop1(spec, (0, 0), ne2)
            except GameInputError:
                continue
            mixed_row = ne2 in ((0, 1), (1, 0))
            if len(set(vals)) < 8 - (mixed_row and vals[6] == vals[4]):
                continue   # ties are covered by the weak-inequality test below
            assert (row is not None) == regular
            assert regular == oracles.vertex_regular(
                [spec.g1, spec.g2],
                [[oracles.pure_vec(0, 2), oracles.pure_vec(ne2[0], 2)],
                 [oracles.pure_vec(0, 2), oracles.pure_vec(ne2[1], 2)]])
            checked += 1


def test_weak_prop1_table_on_tied_payoffs():
    r = random.Random(2)
    for _ in range(400):
        spec = DoubleGameSpec.from_symmetric(*(r.randint(-1, 1) for _ in range(8)))
        for ne2 in itertools.product(range(2), repeat=2):
            try:
                row, regular = check_prop1(spec, (0, 0), ne2, weak=True)
            except GameInputError:
                continue
            assert (row is not None) == regular


def prop2_example():
    g1 = NormalFormGame.bimatrix([[(2, 2), (1, 0)], [(0, 1), (0, 0)]])
    g2 = NormalFormGame.bimatrix([[(0, 0), (0, 1)], [(1, 0), (2, 2)]])
    return g1, g2


def test_prop2_all_inequalities_hold():
    g1, g2 = prop2_example()
    assert check_prop2(DoubleGameSpec(g1, g2)) == (True, True)
    w = [[oracles.pure_vec(0, 2), oracles.pure_vec(1, 2)]] * 2
    assert oracles.vertex_regular([g1, g2], w)


def test_prop2_single_violation():
    g1, g2 = prop2_example()
    bad = dict(g1.payoffs)
    bad[1, 1] = (0, 5)   # c2 = 1 < d2 = 5
    spec = DoubleGameSpec(NormalFormGame((2, 2), bad), g2)
    assert check_prop2(spec) == (False, False)


def test_prop2_all_equal_payoffs():
    z = NormalFormGame.from_function((2, 2), lambda a: (0, 0))
    assert check_prop2(DoubleGameSpec(z, z)) == (True, True)


def test_prop2_needs_distinct_actions():
    g1, g2 = prop2_example()
    with pytest.raises(GameInputError):
        check_prop2(DoubleGameSpec(g1, g1), (0, 0), (0, 0))
