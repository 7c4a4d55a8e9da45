"""Command-line interface.

Exit status: 0 when the verdict is certified/valid, 1 when refuted or
inconclusive, 2 on input or usage errors.
"""

from __future__ import annotations

import sys
import time
from fractions import Fraction
from pathlib import Path

import click

from . import bundled, gamefile
from .games import GameInputError, MultiGame, as_rational, double_game_type
from .linear import (
    OwnTypeLinearGame,
    equivalence_audit,
    random_samples,
    to_generalized_mg,
    to_mg,
    vertex_samples,
)
from .nash import nash_violations, pure_ne_enumerate, support_enumeration_2p
from .regularity import (
    DEFAULT_GRID,
    REFUTED,
    Witness,
    extend_witness,
    theorem1_audit,
    verify_type_regularity,
    vertex_regularity_search,
)
from .report import (
    OK_STATUSES,
    SCHEMA_VERSION,
    digest,
    ne_doc,
    point_text,
    profile_doc,
    q,
    regularity_doc,
    strategy_text,
    theorem1_doc,
    to_human,
    to_json,
)
from .staged import receiver_best_reply, sender_threshold, spe_with_belief

EXIT_OK, EXIT_REFUTED, EXIT_INPUT = 0, 1, 2
VIOLATION_LIMIT = 50


class InputError(click.ClickException):
    exit_code = EXIT_INPUT


def _rational_option(ctx, param, value):
    if value is None:
        return None
    try:
        return as_rational(value)
    except GameInputError as exc:
        raise click.BadParameter(str(exc))


def _rational_list(ctx, param, value):
    if value is None:
        return None
    try:
        return [as_rational(x) for x in value.split(",") if x.strip()]
    except GameInputError as exc:
        raise click.BadParameter(str(exc))


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}")


def _load(path: str):
    data = _read(path)
    try:
        return gamefile.loads(data.decode()), digest(data)
    except GameInputError as exc:
        raise InputError(f"{path}: {exc}")


def _labels(game):
    if isinstance(game, MultiGame):
        return game.basic[0].action_labels
    return getattr(game, "action_labels", None)


def _emit(ctx, report: dict, started: float) -> None:
    if ctx.obj.get("timing"):
        report["elapsed_seconds"] = round(time.perf_counter() - started, 6)
    fmt = ctx.obj.get("format", "human")
    click.echo(to_json(report) if fmt == "structured" else to_human(report), nl=False)
    ctx.exit(EXIT_OK if report["status"] in OK_STATUSES else EXIT_REFUTED)


def _report(command: str, input_digest: str | None, status: str, summary, result, **extra):
    doc = {"schema": SCHEMA_VERSION, "command": command, "input_digest": input_digest,
           "status": status}
    doc.update(extra)
    doc["summary"] = summary
    doc["result"] = result
    return doc


@click.group()
@click.option("--format", "fmt", type=click.Choice(["human", "structured"]), default="human",
              show_default=True, help="Plain text or the JSON report schema.")
@click.option("--timing", is_flag=True, help="Add wall-clock time to the report.")
@click.pass_context
def main(ctx, fmt, timing):
    """Exact Bayesian-game and multi-game equilibrium toolkit."""
    ctx.ensure_object(dict)
    ctx.obj["format"] = fmt
    ctx.obj["timing"] = timing


# ---------------------------------------------------------------------------


def solve_report(g, input_digest=None) -> dict:
    labels = g.action_labels
    pure = pure_ne_enumerate(g)
    result = {"pure": ne_doc(pure, labels)}
    summary = [f"pure NE: {len(pure)}"]
    for eq in pure:
        payoffs = g.payoffs[tuple(s.pure_action for s in eq)]
        summary.append("  (" + ", ".join(strategy_text(s, labels[i] if labels else
                                                       [f"a{k + 1}" for k in range(len(s))])
                                         for i, s in enumerate(eq))
                       + ") payoffs (" + ", ".join(q(x) for x in payoffs) + ")")
        result["pure"]["equilibria"][pure.equilibria.index(eq)]["payoffs"] = [q(x) for x in payoffs]
    if g.n == 2:
        mixed = support_enumeration_2p(g)
        result["support_enumeration"] = ne_doc(mixed, labels)
        summary.append(f"support enumeration NE: {len(mixed)}")
        for eq in mixed:
            summary.append("  " + " ; ".join(d["text"] for d in profile_doc(eq, labels)))
        if mixed.is_degenerate:
            summary.append("degenerate game: equilibria may form a continuum; "
                           f"{len(mixed.degenerate)} singular support pairs")
    return _report("solve", input_digest, "valid", summary, result)


@main.command()
@click.argument("game_file")
@click.pass_context
def solve(ctx, game_file):
    """Pure NE and (two agents) support-enumeration NE of a normal_form file."""
    started = time.perf_counter()
    doc, dig = _load(game_file)
    if doc.kind != "normal_form":
        raise InputError(f"{game_file}: solve needs a normal_form file, got {doc.kind}")
    _emit(ctx, solve_report(doc.game, dig), started)


# ---------------------------------------------------------------------------


def regularity_report(mg: MultiGame, grid: int, input_digest=None, command="check-regularity",
                      extra_summary=(), seed=None) -> dict:
    labels = _labels(mg)
    search = vertex_regularity_search(mg)
    result = {"vertex_search": regularity_doc(search, labels, VIOLATION_LIMIT)}
    summary = [f"vertex search: {search.status} ({search.checked} vertex profiles)"]
    status = search.status
    if search.certified:
        for i, row in enumerate(search.witness.strategies):
            names = labels[i] if labels else [f"a{k + 1}" for k in range(mg.actions[i])]
            summary.append(f"  agent {i + 1}: " + ", ".join(
                f"v{j + 1} -> {strategy_text(s, names)}" for j, s in enumerate(row)))
        check = verify_type_regularity(mg, search.witness, grid)
        result["grid_check"] = regularity_doc(check, labels, VIOLATION_LIMIT)
        summary.append(f"grid d={grid}: {check.checked} profiles, "
                       f"{len(check.violating_profiles())} with a profitable deviation "
                       f"from the extended witness")
        if check.violations:
            status = REFUTED
            v = check.violations[0]
            names = labels[v.agent] if labels else None
            summary.append(
                "  first: types " + " ".join(point_text(t) for t in v.types)
                + f", agent {v.agent + 1} gains {v.gain} by "
                + (names[v.action] if names else f"a{v.action + 1}"))
    else:
        for v in search.violations[:5]:
            summary.append(f"  vertex profile {' '.join(point_text(t) for t in v.types)}: "
                           f"agent {v.agent + 1} deviates to action {v.action + 1}, gain {v.gain}")
    summary.extend(extra_summary)
    return _report(command, input_digest, status, summary, result,
                   **({"seed": seed} if seed is not None else {}))


@main.command("check-regularity")
@click.argument("game_file")
@click.option("--grid", default=DEFAULT_GRID, show_default=True, type=click.IntRange(min=1),
              help="Barycentric grid resolution d.")
@click.option("--seed", default=0, show_default=True, type=int,
              help="Recorded in the report; the check itself is deterministic.")
@click.pass_context
def check_regularity(ctx, game_file, grid, seed):
    """Vertex witness search and grid verification for a multi_game or pd_dg file."""
    started = time.perf_counter()
    doc, dig = _load(game_file)
    if not isinstance(doc.game, MultiGame):
        raise InputError(f"{game_file}: check-regularity needs a multi-game, got {doc.kind}")
    _emit(ctx, regularity_report(doc.game, grid, dig, seed=seed), started)


# ---------------------------------------------------------------------------


def bne_report(game, sigma, priors: int, seed: int, input_digest=None, labels=None,
               file_prior=None, command="verify-bne") -> dict:
    audit = theorem1_audit(game, sigma, priors, seed)
    result = theorem1_doc(audit, labels)
    summary = [
        f"(A) NE in every local game: {audit.local_ne_everywhere}",
        f"(B) BNE under all {len(audit.prior_verdicts)} tested priors: {audit.bne_under_all_priors}",
        f"agreement: {audit.agreement}",
    ]
    for theta, i, x, gain in audit.local_violations[:5]:
        summary.append(f"  local game {list(theta)}: agent {i + 1} gains {gain} "
                       f"by action {labels[i][x] if labels else x + 1}")
    if file_prior is not None:
        from .games import bne_violations
        ok = not bne_violations(game, sigma, file_prior)
        result["file_prior_bne"] = ok
        summary.append(f"BNE under the file's prior: {ok}")
    ok = audit.local_ne_everywhere and audit.bne_under_all_priors and audit.agreement
    return _report(command, input_digest, "valid" if ok else REFUTED, summary, result, seed=seed)


@main.command("verify-bne")
@click.argument("game_file")
@click.argument("strategy_file")
@click.option("--priors", default=64, show_default=True, type=click.IntRange(min=0))
@click.option("--seed", default=0, show_default=True, type=int)
@click.pass_context
def verify_bne(ctx, game_file, strategy_file, priors, seed):
    """Prior-independence audit of a strategy map on a bayesian_finite file."""
    started = time.perf_counter()
    doc, dig = _load(game_file)
    if doc.kind != "bayesian_finite":
        raise InputError(f"{game_file}: verify-bne needs a bayesian_finite file")
    game = doc.game
    labels = game.local[next(game.type_profiles())].action_labels
    try:
        sigma = gamefile.load_strategy_map(strategy_file, game, labels)
    except GameInputError as exc:
        raise InputError(f"{strategy_file}: {exc}")
    except OSError as exc:
        raise InputError(f"{strategy_file}: {exc.strerror}")
    sdig = digest(_read(strategy_file))
    report = bne_report(game, sigma, priors, seed, f"{dig} {sdig}", labels, doc.prior)
    _emit(ctx, report, started)


# ---------------------------------------------------------------------------


@main.command()
@click.argument("game_file")
@click.option("--output", "-o", type=click.Path(dir_okay=False), help="Write the converted game here.")
@click.option("--samples", default=100, show_default=True, type=click.IntRange(min=0),
              help="Random simplex type profiles for the equivalence audit.")
@click.option("--seed", default=0, show_default=True, type=int)
@click.pass_context
def convert(ctx, game_file, output, samples, seed):
    """Turn a type_linear file into a (generalized) multi-game and audit utilities."""
    started = time.perf_counter()
    doc, dig = _load(game_file)
    if doc.kind != "type_linear":
        raise InputError(f"{game_file}: convert needs a type_linear file")
    game = doc.game
    target = to_mg(game) if isinstance(game, OwnTypeLinearGame) else to_generalized_mg(game)
    exhaustive = equivalence_audit(game, target, vertex_samples(game))
    sampled = equivalence_audit(game, target, random_samples(game, samples, seed))
    text = gamefile.dumps(target)
    if output:
        Path(output).write_text(text)
    ok = exhaustive.ok and sampled.ok
    summary = [f"converted to {type(target).__name__}",
               f"vertex audit: {exhaustive.checked} cells, {len(exhaustive.violations)} mismatches",
               f"random audit: {sampled.checked} cells, {len(sampled.violations)} mismatches"]
    result = {"target": gamefile.dump_document(target),
              "vertex_audit_mismatches": len(exhaustive.violations),
              "random_audit_mismatches": len(sampled.violations)}
    _emit(ctx, _report("convert", dig, "valid" if ok else REFUTED, summary, result, seed=seed),
          started)


# ---------------------------------------------------------------------------


def trust_report(belief=None, theta1=Fraction(1, 4), theta2=(0, Fraction(2, 3)),
                 sender_grid=(0, 1), receiver_steps=3) -> dict:
    from .staged import build_trust_dg
    g = build_trust_dg(sender_grid, theta1, theta2, receiver_steps)
    summary = [f"sender type {theta1}, receiver types {', '.join(q(t) for t in g.theta2)}"]
    result = {"theta1": q(g.theta1), "theta2": [q(t) for t in g.theta2],
              "sender_grid": [q(y) for y in g.sender_grid]}
    replies = {}
    for t in g.theta2:
        replies[q(t)] = {q(y): [q(x) for x in sorted(receiver_best_reply(g, y, t))]
                         for y in g.sender_grid}
    result["receiver_best_replies"] = replies
    threshold = sender_threshold(g) if len(g.theta2) == 2 else None
    result["threshold"] = None if threshold is None else q(threshold)
    summary.append("threshold p0 (belief the receiver is selfish): "
                   + ("none" if threshold is None else q(threshold)))
    if belief is not None:
        beliefs = [as_rational(belief)]
    elif threshold is not None:
        beliefs = [threshold / 2, threshold, (threshold + 1) / 2]
    else:
        beliefs = [Fraction(0), Fraction(1, 2), Fraction(1)]
    policies = []
    for p0 in beliefs:
        spe = spe_with_belief(g, p0)
        optimal = sorted(spe.sender_policy)
        everything = len(optimal) == len(g.sender_grid) and len(optimal) > 1
        policies.append({"p0": q(p0), "sender_optimal": [q(y) for y in optimal],
                         "all_actions_optimal": everything,
                         "expected_utility": {q(y): q(v) for y, v in spe.sender_values.items()}})
        if everything:
            summary.append(f"p0 = {p0}: every sender action is optimal")
        else:
            summary.append(f"p0 = {p0}: sender sends " + ", ".join(q(y) for y in optimal))
    result["policies"] = policies
    return _report("example trust", None, "valid", summary, result)


def pd_report(params, theta1=None, theta2=None, grid=DEFAULT_GRID) -> dict:
    from .staged import build_pd_dg
    mg = build_pd_dg(*params)
    extra = []
    local = None
    search = vertex_regularity_search(mg)
    if theta1 is not None and theta2 is not None and search.certified:
        types = (double_game_type(theta1), double_game_type(theta2))
        profile = tuple(extend_witness(search.witness, i, t) for i, t in enumerate(types))
        g = mg.local_game(types)
        violations = nash_violations(g, profile)
        names = mg.basic[0].action_labels
        extra.append(f"extended witness at theta = ({theta1}, {theta2}): "
                     + " ; ".join(strategy_text(s, names[i]) for i, s in enumerate(profile)))
        extra.append(f"  is a NE of that local game: {not violations}")
        for i, x, gain in violations:
            extra.append(f"  agent {i + 1} gains {gain} by {names[i][x]}")
        local = {"theta": [q(theta1), q(theta2)], "profile": profile_doc(profile, names),
                 "is_nash": not violations,
                 "violations": [{"agent": i, "deviation": names[i][x], "gain": q(gain)}
                                for i, x, gain in violations]}
    report = regularity_report(mg, grid, None, "example pd", extra)
    report["result"]["params"] = [q(as_rational(p)) for p in params]
    if local is not None:
        report["result"]["local_check"] = local
    return report


def coordination_report(params, priors, seed, grid) -> dict:
    from .games import StrategyMapProfile
    game = bundled.coordination_bayesian(params)
    sigma = StrategyMapProfile.constant(game.types, [0, 0])
    labels = bundled.COORD_LABELS
    bne = bne_report(game, sigma, priors, seed, None, labels, command="example coordination")
    mg = bundled.coordination_double_game(*params)
    constant = Witness.from_actions([[0, 0], [0, 0]], mg.actions)
    check = verify_type_regularity(mg, constant, grid)
    bne["result"]["constant_map_grid_check"] = regularity_doc(check, labels, VIOLATION_LIMIT)
    bne["summary"].append(f"constant map a1 on grid d={grid}: {check.checked} profiles, "
                          f"{len(check.violations)} violations")
    if check.violations:
        bne["status"] = REFUTED
    return bne


@main.command()
@click.argument("name", type=click.Choice(["pd", "trust", "markets", "coordination"]))
@click.option("--belief", callback=_rational_option, help="trust: belief p0 that the receiver is selfish.")
@click.option("--theta1", callback=_rational_option, help="trust/pd: agent 1 type.")
@click.option("--theta2", help="trust: receiver types (comma list); pd: agent 2 type.")
@click.option("--sender-grid", callback=_rational_list, help="trust: sender amounts, comma list.")
@click.option("--receiver-steps", default=3, show_default=True, type=click.IntRange(min=1),
              help="trust: receiver returns k*3y/steps.")
@click.option("--params", callback=_rational_list,
              help="pd: t,r,p,s,y,z; coordination: x,y,z,w.")
@click.option("--grid", default=DEFAULT_GRID, show_default=True, type=click.IntRange(min=1))
@click.option("--priors", default=64, show_default=True, type=click.IntRange(min=0))
@click.option("--seed", default=0, show_default=True, type=int)
@click.pass_context
def example(ctx, name, belief, theta1, theta2, sender_grid, receiver_steps, params, grid,
            priors, seed):
    """Run a bundled worked example end to end."""
    started = time.perf_counter()
    try:
        if name == "trust":
            kwargs = {"receiver_steps": receiver_steps}
            if theta1 is not None:
                kwargs["theta1"] = theta1
            if theta2 is not None:
                kwargs["theta2"] = _rational_list(None, None, theta2)
            if sender_grid is not None:
                kwargs["sender_grid"] = sender_grid
            report = trust_report(belief, **kwargs)
        elif name == "pd":
            t2 = _rational_option(None, None, theta2) if theta2 is not None else None
            report = pd_report(params or bundled.PD_DEFAULT, theta1, t2, grid)
        elif name == "markets":
            report = regularity_report(bundled.markets_multigame(), grid, None, "example markets")
        else:
            report = coordination_report(params or bundled.COORDINATION_DEFAULT, priors, seed, grid)
    except GameInputError as exc:
        raise InputError(str(exc))
    _emit(ctx, report, started)


if __name__ == "__main__":
    sys.exit(main())
