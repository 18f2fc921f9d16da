"""``mixorder`` command line.

Exit status: 0 success, 2 usage or malformed input, 3 domain error (improper
model, infeasible scenario, value outside a function's domain), 4 when
``theorem verify`` finds a contradiction.

Computed numbers are written with 12 significant digits. Configuration echoes
(models, scenarios) keep full precision so they replay exactly.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import Optional, Sequence

import numpy as np

from .baselines import AgingNotion, classify_monotone_aging, evaluate, make_baseline
from .exceptions import DomainError
from .majorization import compare_vectors
from .mixture import curve_table, model_from_dict
from .orders import GridConfig, Relation, check_order
from .theorems import (Consistency, SamplerBounds, Scenario, TheoremId, check_conclusion,
                       check_hypotheses, reproduce_counterexample, sweep, verify)

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_CONTRADICTION = 0, 2, 3, 4
_EXACT_KEYS = {"baseline", "groups", "u_groups", "v_groups", "scenario",
               "contradiction_scenarios", "inconclusive_scenarios", "bounds"}


class UsageError(Exception):
    pass


# -- serialisation -----------------------------------------------------------

def _num(x: float, exact: bool):
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x if exact else float(f"{x:.12g}")


def _clean(obj, exact: bool = False):
    if isinstance(obj, dict):
        return {k: _clean(v, exact or k in _EXACT_KEYS) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_clean(v, exact) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _num(float(obj), exact)
    return obj


def _csv_cell(v) -> str:
    v = _clean(v)
    return v if isinstance(v, str) else repr(v)


def render_json(obj) -> str:
    return json.dumps(_clean(obj), indent=2) + "\n"


def render_csv(columns: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    names = list(columns)
    w.writerow(names)
    for row in zip(*(np.atleast_1d(columns[n]) for n in names)):
        w.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


# -- inputs ------------------------------------------------------------------

def _load_json(text: Optional[str], what: str = "--in"):
    if text is None:
        raise UsageError(f"{what} is required")
    raw = text
    if not text.lstrip().startswith(("{", "[")):
        if not os.path.exists(text):
            raise UsageError(f"{what}: no such file {text!r}")
        with open(text) as fh:
            raw = fh.read()
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what}: malformed JSON ({exc})") from None


def _distribution(d: dict):
    """A mixture when ``groups`` is present, otherwise a bare baseline."""
    if not isinstance(d, dict):
        raise UsageError("distribution JSON must be an object")
    try:
        if "groups" in d:
            return model_from_dict(d)
        base = d.get("baseline", d)
        return make_baseline(base["family"], base.get("params", []))
    except KeyError as exc:
        raise UsageError(f"distribution JSON is missing {exc}") from None


def _grid(args) -> GridConfig:
    kw = {}
    if args.grid_points is not None:
        kw["n_points"] = args.grid_points
    if args.p_lo is not None:
        kw["p_lo"] = args.p_lo
    if args.p_hi is not None:
        kw["p_hi"] = args.p_hi
    if args.eps is not None:
        kw["eps_abs"] = kw["eps_rel"] = args.eps
    return GridConfig(**kw)


def _baseline_from_args(args):
    if args.input is not None:
        d = _load_json(args.input)
        return _distribution(d), d
    if args.family is None:
        raise UsageError("give --family (and --params) or --in")
    return make_baseline(args.family, args.params or []), {}


# -- subcommands -------------------------------------------------------------

def cmd_eval(args):
    dist, d = _baseline_from_args(args)
    functional = args.functional or d.get("functional")
    points = args.x if args.x is not None else d.get("points", d.get("x"))
    if functional is None or points is None:
        raise UsageError("eval needs --functional and --x")
    pts = np.atleast_1d(np.asarray(points, dtype=float))
    values = np.atleast_1d(evaluate(dist, functional, pts))
    if args.format == "csv":
        return render_csv({"point": pts, "value": values})
    return render_json({"functional": functional, "points": pts, "values": values})


def cmd_mixture(args):
    model = _distribution(_load_json(args.input))
    if not hasattr(model, "groups"):
        raise UsageError("mixture needs a model with two groups")
    if args.functional:
        if args.x is None:
            raise UsageError("--functional needs --x")
        pts = np.atleast_1d(np.asarray(args.x, dtype=float))
        values = np.atleast_1d(evaluate(model, args.functional, pts))
        if args.format == "csv":
            return render_csv({"x": pts, args.functional: values})
        return render_json({"functional": args.functional, "points": pts, "values": values})
    if args.format == "csv":
        lo = model.support_lo if args.x_lo is None else args.x_lo
        hi = args.x_hi
        if hi is None:
            model.require_proper()
            hi = float(model.quantile(1 - 1e-6))
        n = args.grid_points or 201
        return render_csv(curve_table(model, np.linspace(lo, hi, n)))
    out = {"model": model.to_dict(), "support_lo": model.support_lo,
           "properness": model.properness.to_dict()}
    if model.is_proper:
        out["mean"] = model.mean
    return render_json(out)


def cmd_order(args):
    if args.input is not None:
        d = _load_json(args.input)
        a, b = d.get("a"), d.get("b")
        relation = args.relation or d.get("relation")
    else:
        a, b, relation = _load_json(args.a, "--a"), _load_json(args.b, "--b"), args.relation
    if a is None or b is None or relation is None:
        raise UsageError("order needs two distributions (a, b) and a relation")
    try:
        relation = Relation(relation)
    except ValueError:
        raise UsageError(f"unknown relation {relation!r}") from None
    verdict = check_order(_distribution(a), _distribution(b), relation, _grid(args))
    if args.format == "csv":
        return render_csv(verdict.curve)
    return render_json(verdict.to_dict())


def cmd_majorize(args):
    if args.input is not None:
        d = _load_json(args.input)
        u, v, mode = d.get("u"), d.get("v"), args.mode or d.get("mode")
    else:
        u, v, mode = _load_json(args.u, "--u"), _load_json(args.v, "--v"), args.mode
    if u is None or v is None or mode is None:
        raise UsageError("majorize needs u, v and a mode")
    verdict = compare_vectors(u, v, mode)
    if args.format == "csv":
        return render_csv({"index": np.arange(1, len(verdict.partial_sums_u) + 1),
                           "partial_sum_u": verdict.partial_sums_u,
                           "partial_sum_v": verdict.partial_sums_v})
    return render_json(verdict.to_dict())


def cmd_aging(args):
    dist, d = _baseline_from_args(args)
    notion = args.notion or d.get("notion")
    if notion is None:
        raise UsageError("aging needs --notion")
    probe = None
    if args.probe_lo is not None or args.probe_hi is not None:
        if args.probe_lo is None or args.probe_hi is None:
            raise UsageError("give both --probe-lo and --probe-hi")
        probe = (args.probe_lo, args.probe_hi)
    verdict = classify_monotone_aging(dist, AgingNotion(notion.lower()), probe,
                                      n_points=args.grid_points or 512)
    if args.format == "csv":
        raise UsageError("aging emits JSON only")
    return render_json({"notion": notion.lower(), **verdict.to_dict()})


def _scenario(args) -> Scenario:
    d = _load_json(args.input)
    try:
        return Scenario.from_dict(d)
    except KeyError as exc:
        raise UsageError(f"scenario JSON is missing {exc}") from None


def cmd_theorem(args):
    tid = TheoremId.parse(args.id)
    scenario = _scenario(args)
    if args.action == "hypotheses":
        hyps = check_hypotheses(tid, scenario)
        if args.format == "csv":
            return render_csv({"name": [h.name for h in hyps], "verdict": [h.verdict for h in hyps],
                               "binding": [h.binding for h in hyps],
                               "detail": [h.detail for h in hyps]})
        return render_json(hyps.to_dict())
    if args.action == "conclusion":
        verdict = check_conclusion(tid, scenario, _grid(args))
        if args.format == "csv":
            return render_csv(verdict.curve)
        return render_json(verdict.to_dict())
    report = verify(tid, scenario, _grid(args))
    if args.format == "csv":
        raise UsageError("theorem verify emits JSON only")
    text = render_json(report.to_dict())
    status = EXIT_CONTRADICTION if report.consistent is Consistency.CONTRADICTS else EXIT_OK
    return text, status


def cmd_sweep(args):
    tid = TheoremId.parse(args.id)
    bounds = None
    if args.input is not None:
        bounds = SamplerBounds.from_dict(_load_json(args.input))
    seed = 0 if args.seed is None else args.seed
    count = 200 if args.count is None else args.count
    if args.format == "csv":
        raise UsageError("sweep emits JSON only")
    summary = sweep(tid, bounds, seed, count, _grid(args))
    out = summary.to_dict()
    if bounds is not None:
        out["bounds"] = bounds.to_dict()
    return render_json(out)


def cmd_counterexample(args):
    report = reproduce_counterexample(args.id, _grid(args))
    if args.format == "csv":
        if report.curve is None:
            raise UsageError(f"{args.id} has no curve; use --format json")
        return render_csv({k: report.curve[k] for k in ("x", "F_U", "F_V")})
    return render_json(report.to_dict())


# -- parser ------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p):
    p.add_argument("--in", dest="input", help="JSON file or inline JSON")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--grid-points", type=int)
    p.add_argument("--p-lo", type=float)
    p.add_argument("--p-hi", type=float)
    p.add_argument("--eps", type=float, help="sets both absolute and relative tolerance")
    p.add_argument("--seed", type=int)
    p.add_argument("--count", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mixorder",
                     description="Stochastic-order toolkit for two-group location-scale mixtures.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("eval", help="evaluate a baseline (or mixture) functional")
    _common(p)
    p.add_argument("--family")
    p.add_argument("--params", type=float, nargs="*")
    p.add_argument("--functional")
    p.add_argument("--x", type=float, nargs="+")

    p = sub.add_parser("mixture", help="properness report, evaluation, or curve table")
    _common(p)
    p.add_argument("--functional")
    p.add_argument("--x", type=float, nargs="+")
    p.add_argument("--x-lo", type=float)
    p.add_argument("--x-hi", type=float)

    p = sub.add_parser("order", help="decide a stochastic order between two distributions")
    _common(p)
    p.add_argument("--relation", choices=[r.value for r in Relation])
    p.add_argument("--a", help="first distribution (JSON or file)")
    p.add_argument("--b", help="second distribution (JSON or file)")

    p = sub.add_parser("majorize", help="compare two vectors by (weak) majorization")
    _common(p)
    p.add_argument("--mode", choices=("m", "wsuper", "wsub"))
    p.add_argument("--u")
    p.add_argument("--v")

    p = sub.add_parser("aging", help="classify an aging notion of a baseline")
    _common(p)
    p.add_argument("--family")
    p.add_argument("--params", type=float, nargs="*")
    p.add_argument("--notion", choices=[n.value for n in AgingNotion])
    p.add_argument("--probe-lo", type=float)
    p.add_argument("--probe-hi", type=float)

    p = sub.add_parser("theorem", help="audit one theorem on one scenario")
    p.add_argument("action", choices=("verify", "hypotheses", "conclusion"))
    _common(p)
    p.add_argument("--id", required=True)

    p = sub.add_parser("sweep", help="randomised audit of one theorem")
    _common(p)
    p.add_argument("--id", required=True)

    p = sub.add_parser("counterexample", help="reproduce a built-in counterexample")
    _common(p)
    p.add_argument("--id", required=True,
                   choices=("improper-pdf", "weibull-crossing", "frechet-crossing"))
    return parser


_COMMANDS = {
    "eval": cmd_eval, "mixture": cmd_mixture, "order": cmd_order, "majorize": cmd_majorize,
    "aging": cmd_aging, "theorem": cmd_theorem, "sweep": cmd_sweep,
    "counterexample": cmd_counterexample,
}


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        result = _COMMANDS[args.command](args)
        text, status = result if isinstance(result, tuple) else (result, EXIT_OK)
    except UsageError as exc:
        print(f"mixorder: usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"mixorder: domain error: {exc}", file=stderr)
        return EXIT_DOMAIN
    except (ValueError, KeyError, TypeError) as exc:
        print(f"mixorder: invalid input: {exc}", file=stderr)
        return EXIT_USAGE
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
