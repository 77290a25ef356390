"""Command line front end: ``bqc-realizer {check,extract,eval,realize,validate}``.

Exit status: 0 success or Holds, 1 check failure or Fails, 2 Unknown, 3 input error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import yaml

from .calculus import ProofFormatError, check_derivation, format_path, iter_nodes, load_proof
from .campaign import validate
from .extraction import ExtractionError, extract, sentence_realizer
from .numbering import DEFAULT_FUEL, FUEL_EXHAUSTED, DecodeError, Value, decode, evaluate, render_term
from .semantics import (
    DEFAULT_BOUND, DomainError, Fails, Holds, Unknown, WitnessError, check, check_sequent,
    check_with_witnesses, load_evaluation, load_witnesses,
)
from .syntax import ParseError, parse_formula, parse_sequent, predicates, render_sequent

OK, FAILED, UNKNOWN, INPUT_ERROR = 0, 1, 2, 3
PROG = "bqc-realizer"


class InputError(Exception):
    pass


def _default_fuel() -> int:
    raw = os.environ.get("BQC_FUEL")
    if not raw:
        return DEFAULT_FUEL
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"BQC_FUEL must be an integer, got {raw!r}") from None


def _vars(text: str | None) -> tuple:
    if not text:
        return ()
    return tuple(v for v in text.replace(",", " ").split())


def _nats(text: str) -> list:
    if not text.strip():
        return []
    try:
        vals = [int(x) for x in text.split(",")]
    except ValueError:
        raise InputError(f"expected comma-separated naturals, got {text!r}") from None
    if any(v < 0 for v in vals):
        raise InputError("arguments must be naturals")
    return vals


def _emit(args, payload: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _load_checked(path):
    d, sig = load_proof(path)
    return d, sig, check_derivation(d)


def _replay_line(step, fuel) -> str:
    args = ",".join(map(str, step.args))
    return f"{PROG} eval --code {step.code} --args {args} --fuel {fuel}"


def _verdict_status(v) -> int:
    return OK if isinstance(v, Holds) else FAILED if isinstance(v, Fails) else UNKNOWN


def _verdict_payload(v, fuel) -> tuple[dict, list]:
    if isinstance(v, Holds):
        return {"verdict": "Holds"}, ["verdict: Holds"]
    if isinstance(v, Unknown):
        return ({"verdict": "Unknown", "bound": v.bound, "reason": v.reason},
                ["verdict: Unknown", f"bound: {v.bound}", f"reason: {v.reason}"])
    trace = [{"code": s.code, "args": list(s.args), "outcome": str(s.outcome), "note": s.note}
             for s in v.trace]
    lines = ["verdict: Fails", f"reason: {v.reason}"]
    lines += [f"trace: {s}" for s in v.trace]
    payload = {"verdict": "Fails", "reason": v.reason, "trace": trace}
    if v.trace:
        replay = _replay_line(v.trace[0], fuel)
        lines.append(f"replay: {replay}")
        payload["replay"] = replay
    return payload, lines


# -- subcommands -----------------------------------------------------------

def cmd_check(args) -> int:
    d, _, report = _load_checked(args.file)
    nodes = sum(1 for _ in iter_nodes(d))
    payload = {"ok": report.ok, "nodes": nodes, "conclusion": render_sequent(d.conclusion),
               "failures": [{"path": format_path(p), "reason": r} for p, r in report.failures]}
    lines = [f"ok: {str(report.ok).lower()}", f"nodes: {nodes}",
             f"conclusion: {render_sequent(d.conclusion)}"]
    lines += [f"failure: {format_path(p)}: {r}" for p, r in report.failures]
    _emit(args, payload, lines)
    return OK if report.ok else FAILED


def cmd_extract(args) -> int:
    d, _, report = _load_checked(args.file)
    if not report.ok:
        _emit(args, {"ok": False, "failures": [{"path": format_path(p), "reason": r}
                                                for p, r in report.failures]},
              [f"failure: {format_path(p)}: {r}" for p, r in report.failures])
        return FAILED
    rs = _vars(args.vars)
    try:
        e = extract(d, rs, check=False)
    except ExtractionError as exc:
        raise InputError(str(exc)) from None
    payload = {"index": str(e), "vars": list(rs), "sequent": render_sequent(d.conclusion)}
    lines = [str(e)]
    if args.show_term:
        term = render_term(decode(e))
        payload["term"] = term
        lines.append(term)
    _emit(args, payload, lines)
    return OK


def cmd_eval(args) -> int:
    fuel = args.fuel if args.fuel is not None else _default_fuel()
    vals = _nats(args.args)
    out = evaluate(args.code, vals, fuel)
    payload = {"code": str(args.code), "args": vals, "outcome": str(out)}
    lines = [str(out)]
    if args.show_term:
        try:
            term = render_term(decode(args.code))
        except DecodeError as exc:
            term = f"(not a code: {exc})"
        payload["term"] = term
        lines.append(term)
    if isinstance(out, Value):
        payload["value"] = str(out.v)
    _emit(args, payload, lines)
    if isinstance(out, Value):
        return OK
    return UNKNOWN if out.reason == FUEL_EXHAUSTED else FAILED


def cmd_realize(args) -> int:
    fuel = args.fuel if args.fuel is not None else _default_fuel()
    f = load_evaluation(args.evaluation)
    rs = _vars(args.vars)
    if args.formula is not None and args.witnesses:
        raise InputError("--witnesses needs --sequent")
    if args.proof:
        d, _, report = _load_checked(args.proof)
        if not report.ok:
            raise InputError(f"proof does not check:\n{report}")
        if args.formula is not None:
            e = sentence_realizer(d)
        else:
            e = extract(d, rs, check=False)
    else:
        e = args.code
    if args.formula is not None:
        v = check(e, parse_formula(args.formula), f, args.bound, fuel)
        subject = args.formula
    else:
        S = parse_sequent(args.sequent)
        if args.witnesses:
            v = check_with_witnesses(e, S, rs, f, load_witnesses(args.witnesses), fuel, args.bound)
        else:
            v = check_sequent(e, S, rs, f, args.bound, fuel)
        subject = render_sequent(S)
    payload, lines = _verdict_payload(v, fuel)
    payload.update({"code": str(e), "subject": subject})
    _emit(args, payload, [f"code: {e}", f"subject: {subject}", *lines])
    return _verdict_status(v)


def cmd_validate(args) -> int:
    fuel = args.fuel if args.fuel is not None else _default_fuel()
    directory = Path(args.dir)
    files = sorted(directory.glob("*.bqc"))
    if not files:
        raise InputError(f"no .bqc files in {directory}")
    rows, status = [], OK
    for path in files:
        d, sig, report = _load_checked(path)
        name = path.stem
        if not report.ok:
            rows.append({"proof": name, "checked": False,
                         "failures": [f"{format_path(p)}: {r}" for p, r in report.failures]})
            status = FAILED
            continue
        if sig is None:
            sig = {}
            for _, node in iter_nodes(d):
                sig.update(predicates(node.conclusion.lhs))
                sig.update(predicates(node.conclusion.rhs))
        for r in validate(name, d, sig, args.trials, args.seed, bound=args.bound, fuel=fuel):
            row = {"proof": name, "checked": True, "vars": list(r.rs), "holds": r.holds,
                   "fails": r.fails, "unknown": r.unknown, "index_bits": r.index.bit_length()}
            if r.fails:
                status = FAILED
                row["replay"] = [_replay_line(v.trace[0], fuel) for _, v in r.failures if v.trace]
            rows.append(row)
    totals = {k: sum(r.get(k, 0) for r in rows) for k in ("holds", "fails", "unknown")}
    if args.json:
        print(json.dumps({"rows": rows, "totals": totals, "trials": args.trials,
                          "seed": args.seed}, sort_keys=True))
    else:
        print(f"{'proof':24} {'vars':14} {'holds':>6} {'fails':>6} {'unknown':>8}")
        for r in rows:
            if not r["checked"]:
                print(f"{r['proof']:24} {'-':14} check failed: {'; '.join(r['failures'])}")
                continue
            print(f"{r['proof']:24} {','.join(r['vars']) or '-':14} {r['holds']:6} "
                  f"{r['fails']:6} {r['unknown']:8}")
            for line in r.get("replay", ()):
                print(f"  replay: {line}")
        print(f"total: holds={totals['holds']} fails={totals['fails']} unknown={totals['unknown']}")
    return status


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog=PROG, description=__doc__.splitlines()[0])
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="check a derivation file")
    c.add_argument("file")
    c.set_defaults(run=cmd_check)

    x = sub.add_parser("extract", help="extract a realizer index from a derivation")
    x.add_argument("file")
    x.add_argument("--vars", default="", help='admissible variable list, e.g. "x,y"')
    x.add_argument("--show-term", action="store_true", help="also print the decoded program term")
    x.set_defaults(run=cmd_extract)

    ev = sub.add_parser("eval", help="apply an index to arguments")
    ev.add_argument("--code", type=int, required=True, help="index to run")
    ev.add_argument("--args", default="", help='comma-separated naturals, e.g. "3,7"')
    ev.add_argument("--fuel", type=int, help="step budget (default: $BQC_FUEL or 10**6)")
    ev.add_argument("--show-term", action="store_true", help="also print the decoded program term")
    ev.set_defaults(run=cmd_eval)

    r = sub.add_parser("realize", help="check that an index realizes a sequent or formula")
    src = r.add_mutually_exclusive_group(required=True)
    src.add_argument("--code", type=int, help="candidate realizer index")
    src.add_argument("--proof", help="derivation file to extract the candidate from")
    what = r.add_mutually_exclusive_group(required=True)
    what.add_argument("--sequent", help="sequent A => B, realized over --vars")
    what.add_argument("--formula", help="closed formula")
    r.add_argument("--vars", default="", help="admissible variable list for --sequent")
    r.add_argument("--evaluation", required=True, help="evaluation file (YAML)")
    r.add_argument("--bound", type=int, default=DEFAULT_BOUND,
                   help="enumeration bound for top and implication antecedents")
    r.add_argument("--fuel", type=int, help="step budget per application")
    r.add_argument("--witnesses", help="witness file for implication antecedents")
    r.set_defaults(run=cmd_realize)

    v = sub.add_parser("validate", help="randomized soundness campaign over a proof directory")
    v.add_argument("dir")
    v.add_argument("--trials", type=int, default=50, help="random evaluations per proof and list")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    v.add_argument("--fuel", type=int)
    v.set_defaults(run=cmd_validate)

    for sp in (c, x, ev, r, v):
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else OK
    try:
        return args.run(args)
    except (InputError, ParseError, ProofFormatError, DomainError, WitnessError, ExtractionError,
            OSError, yaml.YAMLError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, WitnessError) and exc.args else exc
        if getattr(args, "json", False):
            print(json.dumps({"error": str(msg)}))
        else:
            print(f"error: {msg}", file=sys.stderr)
        return INPUT_ERROR


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
