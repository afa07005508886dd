"""Command-line interface.

Exit codes: 0 = success / all checks passed, 1 = a verified property failed,
2 = invalid input or an enumeration guard was hit.  Machine-readable JSON
goes to stdout, human diagnostics to stderr.  Every command is deterministic
given its arguments and seed (COMBPRISM_SEED supplies the default seed).
"""

from __future__ import annotations

import functools
import json
import os
import sys

import click

from . import _kernels
from .graphs import _prism, build_complete, build_prism
from .inequalities import (
    Comb,
    CombInequality,
    enumerate_uniform_combs,
    tours_incidence_matrix,
    validate_comb,
)
from .protocol import bit_account, estimate_expectation, run_pm_protocol
from .reduction import ReductionInstance, build_comb_from_odd_set, build_tour_from_matching, exhaustive_reduction_sweep, verify_conditions
from .slacklab import build_slack_matrix, facet_check
from .structures import (
    OddSet,
    PerfectMatching,
    enumerate_odd_sets,
    enumerate_perfect_matchings,
    enumerate_tours,
    enumerate_two_matchings,
    extend_matching_to_2matching,
    restrict_2matching_to_matching,
)


def emit(payload) -> None:
    click.echo(json.dumps(payload, sort_keys=True, separators=(",", ":")))


def default_seed() -> int:
    return int(os.environ.get("COMBPRISM_SEED", "0"))


def parse_vertices(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x != "")
    except ValueError:
        raise ValueError(f"expected comma-separated vertex ids, got {text!r}")


def parse_edges(text: str) -> tuple[tuple[int, int], ...]:
    edges = []
    for part in text.split(","):
        if not part:
            continue
        bits = part.split("-")
        if len(bits) != 2:
            raise ValueError(f"expected edges like 0-1,2-3, got {part!r}")
        edges.append((int(bits[0]), int(bits[1])))
    return tuple(edges)


def input_errors(fn):
    """Map bad input (including guard violations) to exit code 2."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ValueError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
        except OSError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)

    return wrapper


@click.group()
@click.option("--jobs", type=int, default=None, help="Thread cap for the numba kernel backend.")
def main(jobs):
    """Exact desk-scale checks for comb inequalities over subdivided prisms."""
    if jobs is not None:
        _kernels.set_num_threads(jobs)


@main.command("prism-info")
@click.option("--base-n", type=int, required=True)
@click.option("--t", type=int, required=True)
@click.option("--dump", is_flag=True, help="Also emit the full edge list.")
@input_errors
def prism_info(base_n, t, dump):
    """Vertex and edge counts of the t-layer prism over K_{base-n}."""
    prism = build_prism(base_n, t)
    if dump:
        emit(prism.to_json())
    else:
        emit({"vertices": prism.n, "edges": len(prism.edges)})


@main.command("enumerate")
@click.option("--object", "kind", type=click.Choice(["tours", "matchings", "odd-sets"]), required=True)
@click.option("--n", type=int, required=True)
@click.option("--size", type=int, default=None, help="Set size (odd-sets only).")
@click.option("--limit", type=int, default=None, help="Emit at most this many items.")
@click.option("--allow-large", is_flag=True, help="Override the enumeration size guards.")
@input_errors
def enumerate_cmd(kind, n, size, limit, allow_large):
    """Enumerate tours, perfect matchings, or odd sets of K_n."""
    if kind == "tours":
        items = [t.to_json() for t in enumerate_tours(n, allow_large=allow_large)]
    elif kind == "matchings":
        items = [m.to_json() for m in enumerate_perfect_matchings(n, allow_large=allow_large)]
    else:
        if size is None:
            raise ValueError("odd-sets needs --size")
        items = [s.to_json() for s in enumerate_odd_sets(n, size)]
    count = len(items)
    if limit is not None:
        items = items[:limit]
    emit({"object": kind, "n": n, "count": count, "items": items})


@main.command("reduce")
@click.option("--base-n", "base_n", type=int, required=True)
@click.option("--t", type=int, required=True)
@click.option("--h", type=int, required=True)
@click.option("--odd-set", "odd_set_text", type=str, required=True)
@click.option("--matching", "matching_text", type=str, required=True)
@click.option("--w1", type=int, required=True)
@click.option("--w3", type=int, required=True)
@input_errors
def reduce_cmd(base_n, t, h, odd_set_text, matching_text, w1, w3):
    """Build the comb/tour pair for one instance and report the conditions."""
    graph = build_complete(base_n)
    matching = PerfectMatching(graph, parse_edges(matching_text))
    odd = OddSet(parse_vertices(odd_set_text))
    inst = ReductionInstance(
        base_n, odd, matching, w1, matching.partner(w1), w3, matching.partner(w3), h, t
    )
    comb = build_comb_from_odd_set(inst)
    tour = build_tour_from_matching(inst.matching, inst.w1, inst.w2, inst.w3, inst.w4, inst.t)
    report = verify_conditions(inst)
    emit(
        {
            "comb": CombInequality(comb).to_json(),
            "tour": tour.to_json(),
            "sl_comb": report.sl_comb,
            "sl_odd": report.sl_odd,
            "report": report.to_json(),
        }
    )
    if not report.all_ok:
        sys.exit(1)


@main.group()
def verify():
    """Exhaustive verification commands (exit 0 iff no failures)."""


@verify.command("lemma1")
@click.option("--base-n", "base_n", type=int, required=True)
@click.option("--t-max", "t_max", type=int, default=4)
@click.option("--exhaustive", is_flag=True, help="Sweep every instance (default: first 200).")
@click.option("--allow-large", is_flag=True)
@input_errors
def verify_reduction(base_n, t_max, exhaustive, allow_large):
    """Check the comb/tour construction conditions over K_{base-n}."""
    if t_max < 2:
        raise ValueError("t-max must be at least 2")
    budget = [None if exhaustive else 200]

    class _Stop(Exception):
        pass

    def on_report(inst, report):
        if budget[0] is not None:
            budget[0] -= 1
            if budget[0] <= 0:
                raise _Stop()

    try:
        summary = exhaustive_reduction_sweep(
            base_n, t_values=tuple(range(2, t_max + 1)), allow_large=allow_large, on_report=on_report
        )
    except _Stop:
        click.echo("stopped after sample budget; pass --exhaustive for the full sweep", err=True)
        sys.exit(0)
    emit(summary.to_json())
    if summary.failed > 0:
        sys.exit(1)


@verify.command("validity")
@click.option("--n", type=int, required=True)
@click.option("--h", type=int, required=True)
@click.option("--t", type=int, required=True)
@click.option("--cap", type=int, default=10**4)
@input_errors
def verify_validity(n, h, t, cap):
    """Check slack >= 0 for every (h,t)-uniform comb of K_n against every tour."""
    import numpy as np

    combs = enumerate_uniform_combs(n, h, t, cap=cap)
    if not combs:
        emit({"n": n, "h": h, "t": t, "combs_checked": 0, "violations": 0, "empty_class": True})
        return
    tours = enumerate_tours(n)
    graph = tours[0].graph
    incidence = tours_incidence_matrix(tours)
    ineqs = [CombInequality(c) for c in combs]
    coeffs = np.stack([iq.coefficient_vector(graph) for iq in ineqs])
    rhs = np.array([iq.rhs for iq in ineqs], dtype=np.int64)
    mins, args = _kernels.min_slack(coeffs, rhs, incidence)
    violations = int((mins < 0).sum())
    payload = {
        "n": n,
        "h": h,
        "t": t,
        "combs_checked": len(combs),
        "tours": len(tours),
        "violations": violations,
        "min_slack": int(mins.min()),
        "empty_class": False,
    }
    if violations:
        worst = int(np.argmin(mins))
        payload["witness"] = {
            "comb": combs[worst].to_json(),
            "tour": tours[int(args[worst])].to_json(),
            "slack": int(mins[worst]),
        }
    emit(payload)
    if violations:
        sys.exit(1)


@main.command("protocol")
@click.option("--base-n", "base_n", type=int, required=True)
@click.option("--t", type=int, default=2)
@click.option("--h", type=int, default=1)
@click.option("--odd-set", "odd_set_text", type=str, required=True)
@click.option("--matching", "matching_text", type=str, required=True)
@click.option("--mode", type=click.Choice(["exact", "mc"]), default="exact")
@click.option("--trials", type=int, default=10**4)
@click.option("--seed", type=int, default=None)
@input_errors
def protocol_cmd(base_n, t, h, odd_set_text, matching_text, mode, trials, seed):
    """Run the odd-set slack protocol on one (S, M) instance."""
    from .inequalities import OddSetInequality, odd_set_slack

    seed = default_seed() if seed is None else seed
    graph = build_complete(base_n)
    matching = PerfectMatching(graph, parse_edges(matching_text))
    odd = OddSet(parse_vertices(odd_set_text))
    expected = odd_set_slack(OddSetInequality(odd), matching)
    outcome = run_pm_protocol(odd, matching, t, h, mode="exact", seed=seed)
    audit = bit_account(outcome, base_n, t)
    payload = outcome.to_json()
    payload["expected_slack"] = expected
    payload["budget_ok"] = audit.within_budget
    payload["budget_bits"] = audit.budget_bits
    if mode == "mc":
        est = estimate_expectation(odd, matching, t, h, trials=trials, seed=seed)
        payload.update(est.to_json())
    emit(payload)
    if not audit.within_budget or outcome.output_value != expected:
        sys.exit(1)


@main.command("slack-matrix")
@click.option("--family", type=click.Choice(["uniform-combs", "odd-sets"]), required=True)
@click.option("--n", type=int, required=True)
@click.option("--h", type=int, default=None)
@click.option("--t", type=int, default=None)
@click.option("--size", type=int, default=None, help="Odd-set size (default: all odd sizes).")
@click.option("--cap", type=int, default=10**4)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@input_errors
def slack_matrix_cmd(family, n, h, t, size, cap, out):
    """Write the family-vs-vertices slack matrix as CSV."""
    matrix = build_slack_matrix(family, n, h=h, t=t, cap=cap, size=size)
    with open(out, "w") as fh:
        fh.write(matrix.to_csv())
    meta = matrix.metadata()
    meta["out"] = out
    emit(meta)


@main.command("facet-check")
@click.option("--n", type=int, required=True)
@click.option("--comb", "comb_path", type=click.Path(exists=True, dir_okay=False), required=True)
@input_errors
def facet_check_cmd(n, comb_path):
    """Check whether a comb inequality is facet-defining over K_n."""
    with open(comb_path) as fh:
        comb = Comb.from_json(json.load(fh))
    structure = validate_comb(comb)
    if not structure.ok:
        raise ValueError(f"invalid comb: {'; '.join(structure.violations())}")
    report = facet_check(CombInequality(comb), n)
    emit(report.to_json())
    if not report.is_facet:
        sys.exit(1)


@main.command("prop1")
@click.option("--n-max", type=int, default=6, help="Largest even base for the round-trip sweep.")
@input_errors
def prop1_cmd(n_max):
    """Matching <-> 2-matching correspondence sweep over 3-layer prisms."""
    if n_max < 2 or n_max % 2 != 0:
        raise ValueError("n-max must be an even integer >= 2")
    round_trips = 0
    round_trip_failures = 0
    for n in range(2, n_max + 1, 2):
        for matching in enumerate_perfect_matchings(n):
            lifted = extend_matching_to_2matching(matching)
            if restrict_2matching_to_matching(lifted) != matching.edges:
                round_trip_failures += 1
            round_trips += 1
    two_matchings = 0
    vertical_violations = 0
    for base in (3, 4):
        prism = _prism(base, 3)
        verticals = set(prism.vertical_edges)
        for x in enumerate_two_matchings(prism):
            two_matchings += 1
            if not verticals.issubset(x.edge_set):
                vertical_violations += 1
    emit(
        {
            "round_trips": round_trips,
            "round_trip_failures": round_trip_failures,
            "two_matchings_checked": two_matchings,
            "vertical_violations": vertical_violations,
        }
    )
    if round_trip_failures or vertical_violations:
        sys.exit(1)


if __name__ == "__main__":
    main()
