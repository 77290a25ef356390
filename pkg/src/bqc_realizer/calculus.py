"""Derivations in basic predicate calculus and their checker.

Each node names its axiom or rule and carries the instantiation of the
schema (formula metavariables ``A``, ``B``, ``C``, variable lists ``xs``,
``ys`` and the variable ``x``).  Checking instantiates the schema with that
data and compares, modulo alpha-equivalence, with the recorded premise and
node conclusions.

R6 is read as the sequent ``[ys/xs]A => [ys/xs]B``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterator, Mapping

import yaml

from .syntax import (
    AllImp, And, Bot, Exists, Formula, Or, ParseError, Sequent, Top,
    alpha_equivalent_sequent, free_vars, parse_formula, parse_sequent, render,
    render_sequent, substitute, substitute_sequent,
)

AXIOMS = tuple(f"A{i}" for i in range(1, 12))
RULES = ("R1", "R2", "R3a", "R3b", "R4", "R5a", "R5b", "R6", "R7", "R8", "R9")
PREMISE_COUNT = {**{a: 0 for a in AXIOMS}, **{r: 1 for r in RULES}, "R1": 2, "R2": 2, "R4": 2}


@dataclass(frozen=True)
class Inst:
    """Instantiation data of a schema; unused fields stay ``None``."""
    A: Formula | None = None
    B: Formula | None = None
    C: Formula | None = None
    xs: tuple | None = None
    ys: tuple | None = None
    x: str | None = None


@dataclass(frozen=True)
class Derivation:
    rule: str
    conclusion: Sequent
    premises: tuple = ()
    inst: Inst = field(default_factory=Inst)

    def __post_init__(self):
        if self.rule not in PREMISE_COUNT:
            raise ValueError(f"unknown axiom or rule {self.rule!r}")

    @property
    def is_axiom(self) -> bool:
        return self.rule in AXIOMS


@dataclass
class CheckReport:
    ok: bool
    failures: list  # (path, reason)

    def __str__(self):
        if self.ok:
            return "ok"
        return "\n".join(f"{format_path(p)}: {r}" for p, r in self.failures)


def format_path(path: tuple) -> str:
    return "root" if not path else ".".join(map(str, path))


class SchemaError(Exception):
    """Raised while instantiating a schema whose data is incomplete."""


def _need(inst: Inst, *names):
    missing = [n for n in names if getattr(inst, n) is None]
    if missing:
        raise SchemaError(f"missing instantiation {', '.join(missing)}")
    return [getattr(inst, n) for n in names]


def _distinct(vs, label, out):
    if len(set(vs)) != len(vs):
        out.append(f"{label} has repeated variables")


def schema(rule: str, inst: Inst) -> tuple[list[Sequent], Sequent, list[str]]:
    """Instantiate ``rule``: (premise sequents, conclusion, side-condition violations)."""
    bad: list[str] = []
    S = Sequent
    if rule == "A1":
        (A,) = _need(inst, "A")
        return [], S(A, A), bad
    if rule == "A2":
        (A,) = _need(inst, "A")
        return [], S(A, Top()), bad
    if rule == "A3":
        (A,) = _need(inst, "A")
        return [], S(Bot(), A), bad
    if rule == "A4":
        A, B, x = _need(inst, "A", "B", "x")
        if x in free_vars(A):
            bad.append(f"{x} free in A")
        return [], S(And(A, Exists(x, B)), Exists(x, And(A, B))), bad
    if rule == "A5":
        A, B, C = _need(inst, "A", "B", "C")
        return [], S(And(A, Or(B, C)), Or(And(A, B), And(A, C))), bad
    if rule in ("A6", "A7", "A8"):
        A, B, C, xs = _need(inst, "A", "B", "C", "xs")
        _distinct(xs, "xs", bad)
        if rule == "A6":
            lhs, rhs = And(AllImp(xs, A, B), AllImp(xs, B, C)), AllImp(xs, A, C)
        elif rule == "A7":
            lhs, rhs = And(AllImp(xs, A, B), AllImp(xs, A, C)), AllImp(xs, A, And(B, C))
        else:
            lhs, rhs = And(AllImp(xs, B, A), AllImp(xs, C, A)), AllImp(xs, Or(B, C), A)
        return [], S(lhs, rhs), bad
    if rule in ("A9", "A10"):
        A, B, xs, ys = _need(inst, "A", "B", "xs", "ys")
        _distinct(xs, "xs", bad)
        _distinct(ys, "ys", bad)
        if len(xs) != len(ys):
            bad.append(f"|xs| = {len(xs)} differs from |ys| = {len(ys)}")
            return [], None, bad
        if bad:
            return [], None, bad
        lhs = AllImp(xs, A, B)
        if rule == "A9":
            rhs = AllImp(xs, substitute(A, xs, ys), substitute(B, xs, ys))
        else:
            clash = sorted(set(ys) & free_vars(lhs))
            if clash:
                bad.append(f"{', '.join(clash)} from ys free in all xs (A -> B)")
            rhs = AllImp(ys, A, B)
        return [], S(lhs, rhs), bad
    if rule == "A11":
        A, B, xs, x = _need(inst, "A", "B", "xs", "x")
        _distinct(xs, "xs", bad)
        if x in xs:
            bad.append(f"{x} occurs in xs")
            return [], None, bad
        if len(set(xs)) != len(xs):
            return [], None, bad
        if x in free_vars(A):
            bad.append(f"{x} free in A")
        return [], S(AllImp((*xs, x), B, A), AllImp(xs, Exists(x, B), A)), bad
    if rule == "R1":
        A, B, C = _need(inst, "A", "B", "C")
        return [S(A, B), S(B, C)], S(A, C), bad
    if rule == "R2":
        A, B, C = _need(inst, "A", "B", "C")
        return [S(A, B), S(A, C)], S(A, And(B, C)), bad
    if rule in ("R3a", "R3b"):
        A, B, C = _need(inst, "A", "B", "C")
        return [S(A, And(B, C))], S(A, B if rule == "R3a" else C), bad
    if rule == "R4":
        A, B, C = _need(inst, "A", "B", "C")
        return [S(B, A), S(C, A)], S(Or(B, C), A), bad
    if rule in ("R5a", "R5b"):
        A, B, C = _need(inst, "A", "B", "C")
        return [S(Or(B, C), A)], S(B if rule == "R5a" else C, A), bad
    if rule == "R6":
        A, B, xs, ys = _need(inst, "A", "B", "xs", "ys")
        _distinct(xs, "xs", bad)
        _distinct(ys, "ys", bad)
        if len(xs) != len(ys):
            bad.append(f"|xs| = {len(xs)} differs from |ys| = {len(ys)}")
        if bad:
            return [S(A, B)], None, bad
        return [S(A, B)], S(substitute(A, xs, ys), substitute(B, xs, ys)), bad
    if rule in ("R7", "R8"):
        A, B, x = _need(inst, "A", "B", "x")
        if x in free_vars(A):
            bad.append(f"{x} free in A")
        top, bottom = S(B, A), S(Exists(x, B), A)
        return ([top], bottom, bad) if rule == "R7" else ([bottom], top, bad)
    if rule == "R9":
        A, B, C, xs = _need(inst, "A", "B", "C", "xs")
        _distinct(xs, "xs", bad)
        clash = [v for v in xs if v in free_vars(A)]
        if clash:
            bad.append(f"{', '.join(clash)} from xs free in A")
        if len(set(xs)) != len(xs):
            return [S(And(A, B), C)], None, bad
        return [S(And(A, B), C)], S(A, AllImp(xs, B, C)), bad
    raise SchemaError(f"unknown axiom or rule {rule!r}")


def _check_node(d: Derivation, path: tuple) -> list:
    out = []
    want = PREMISE_COUNT[d.rule]
    if len(d.premises) != want:
        return [(path, f"{d.rule} takes {want} premise(s), got {len(d.premises)}")]
    try:
        premises, concl, bad = schema(d.rule, d.inst)
    except SchemaError as exc:
        return [(path, f"{d.rule}: {exc}")]
    out.extend((path, f"{d.rule} side condition: {b}") for b in bad)
    for i, (p, s) in enumerate(zip(d.premises, premises)):
        if not alpha_equivalent_sequent(p.conclusion, s):
            out.append((path, f"{d.rule} premise {i} should be {render_sequent(s)}, "
                              f"got {render_sequent(p.conclusion)}"))
    if concl is not None and not alpha_equivalent_sequent(d.conclusion, concl):
        out.append((path, f"{d.rule} conclusion should be {render_sequent(concl)}, "
                          f"got {render_sequent(d.conclusion)}"))
    return out


def check_axiom(d: Derivation, path: tuple = ()) -> CheckReport:
    if not d.is_axiom:
        return CheckReport(False, [(path, f"{d.rule} is not an axiom")])
    f = _check_node(d, path)
    return CheckReport(not f, f)


def check_rule(d: Derivation, path: tuple = ()) -> CheckReport:
    """Check one rule application against its premises' recorded conclusions."""
    if d.is_axiom:
        return CheckReport(False, [(path, f"{d.rule} is not a rule")])
    f = _check_node(d, path)
    return CheckReport(not f, f)


def check_derivation(d: Derivation) -> CheckReport:
    failures = []
    for path, node in iter_nodes(d):
        failures.extend(_check_node(node, path))
    return CheckReport(not failures, failures)


def iter_nodes(d: Derivation, path: tuple = ()) -> Iterator[tuple[tuple, Derivation]]:
    """Depth-first, pre-order."""
    yield path, d
    for i, p in enumerate(d.premises):
        yield from iter_nodes(p, path + (i,))


def rules_used(d: Derivation) -> set:
    return {n.rule for _, n in iter_nodes(d)}


def size(d: Derivation) -> int:
    return sum(1 for _ in iter_nodes(d))


# -- construction helpers --------------------------------------------------
# Each helper computes the conclusion from its arguments; side conditions are
# not enforced here so that deliberately broken derivations can be built.

def _f(a) -> Formula:
    return parse_formula(a) if isinstance(a, str) else a


def _vs(vs) -> tuple:
    if isinstance(vs, str):
        return tuple(v for v in vs.replace(",", " ").split())
    return tuple(vs)


def _make(rule, premises=(), **kw) -> Derivation:
    inst = Inst(**kw)
    _, concl, bad = schema(rule, inst)
    if concl is None:
        raise ValueError(f"cannot build {rule}: {'; '.join(bad)}")
    return Derivation(rule, concl, tuple(premises), inst)


def a1(A): return _make("A1", A=_f(A))
def a2(A): return _make("A2", A=_f(A))
def a3(A): return _make("A3", A=_f(A))
def a4(A, x, B): return _make("A4", A=_f(A), x=x, B=_f(B))
def a5(A, B, C): return _make("A5", A=_f(A), B=_f(B), C=_f(C))
def a6(xs, A, B, C): return _make("A6", xs=_vs(xs), A=_f(A), B=_f(B), C=_f(C))
def a7(xs, A, B, C): return _make("A7", xs=_vs(xs), A=_f(A), B=_f(B), C=_f(C))
def a8(xs, A, B, C): return _make("A8", xs=_vs(xs), A=_f(A), B=_f(B), C=_f(C))
def a9(xs, ys, A, B): return _make("A9", xs=_vs(xs), ys=_vs(ys), A=_f(A), B=_f(B))
def a10(xs, ys, A, B): return _make("A10", xs=_vs(xs), ys=_vs(ys), A=_f(A), B=_f(B))
def a11(xs, x, A, B): return _make("A11", xs=_vs(xs), x=x, A=_f(A), B=_f(B))


def _split(f, cls, rule):
    if not isinstance(f, cls):
        raise ValueError(f"{rule} needs a {cls.__name__} here, got {render(f)}")
    return f.left, f.right


def r1(d1: Derivation, d2: Derivation):
    return _make("R1", (d1, d2), A=d1.conclusion.lhs, B=d1.conclusion.rhs, C=d2.conclusion.rhs)


def r2(d1: Derivation, d2: Derivation):
    return _make("R2", (d1, d2), A=d1.conclusion.lhs, B=d1.conclusion.rhs, C=d2.conclusion.rhs)


def r3a(d: Derivation):
    B, C = _split(d.conclusion.rhs, And, "R3a")
    return _make("R3a", (d,), A=d.conclusion.lhs, B=B, C=C)


def r3b(d: Derivation):
    B, C = _split(d.conclusion.rhs, And, "R3b")
    return _make("R3b", (d,), A=d.conclusion.lhs, B=B, C=C)


def r4(d1: Derivation, d2: Derivation):
    return _make("R4", (d1, d2), A=d1.conclusion.rhs, B=d1.conclusion.lhs, C=d2.conclusion.lhs)


def r5a(d: Derivation):
    B, C = _split(d.conclusion.lhs, Or, "R5a")
    return _make("R5a", (d,), A=d.conclusion.rhs, B=B, C=C)


def r5b(d: Derivation):
    B, C = _split(d.conclusion.lhs, Or, "R5b")
    return _make("R5b", (d,), A=d.conclusion.rhs, B=B, C=C)


def r6(d: Derivation, xs, ys):
    return _make("R6", (d,), A=d.conclusion.lhs, B=d.conclusion.rhs, xs=_vs(xs), ys=_vs(ys))


def r7(d: Derivation, x: str):
    return _make("R7", (d,), A=d.conclusion.rhs, B=d.conclusion.lhs, x=x)


def r8(d: Derivation, x: str | None = None):
    lhs = d.conclusion.lhs
    if not isinstance(lhs, Exists):
        raise ValueError(f"R8 needs an existential antecedent, got {render(lhs)}")
    if x is not None and x != lhs.var:
        raise ValueError(f"R8 variable {x} does not match {lhs.var}")
    return _make("R8", (d,), A=d.conclusion.rhs, B=lhs.body, x=lhs.var)


def r9(d: Derivation, xs):
    A, B = _split(d.conclusion.lhs, And, "R9")
    return _make("R9", (d,), A=A, B=B, C=d.conclusion.rhs, xs=_vs(xs))


# -- proof files -----------------------------------------------------------

class ProofFormatError(ValueError):
    pass


def _parse_node(node, sig, path) -> Derivation:
    where = format_path(path)
    if not isinstance(node, Mapping):
        raise ProofFormatError(f"{where}: a proof node must be a mapping")
    unknown = set(node) - {"rule", "conclusion", "with", "premises"}
    if unknown:
        raise ProofFormatError(f"{where}: unknown field(s) {', '.join(sorted(unknown))}")
    rule = node.get("rule")
    if rule not in PREMISE_COUNT:
        raise ProofFormatError(f"{where}: unknown rule {rule!r}")
    try:
        concl = parse_sequent(str(node["conclusion"]), sig)
        kw = {}
        for key, val in (node.get("with") or {}).items():
            if key in ("A", "B", "C"):
                kw[key] = parse_formula(str(val), sig)
            elif key in ("xs", "ys"):
                kw[key] = _vs(val if val is not None else ())
            elif key == "x":
                kw[key] = str(val)
            else:
                raise ProofFormatError(f"{where}: unknown instantiation field {key!r}")
    except KeyError:
        raise ProofFormatError(f"{where}: missing conclusion") from None
    except ParseError as exc:
        raise ProofFormatError(f"{where}: {exc}") from None
    premises = tuple(_parse_node(p, sig, path + (i,)) for i, p in enumerate(node.get("premises") or ()))
    return Derivation(rule, concl, premises, Inst(**kw))


def load_proof_text(text: str) -> tuple[Derivation, dict | None]:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ProofFormatError(f"not valid YAML: {exc}") from None
    if not isinstance(doc, Mapping) or "proof" not in doc:
        raise ProofFormatError("a proof file needs a top-level 'proof' entry")
    sig = doc.get("signature")
    if sig is not None:
        sig = {str(k): int(v) for k, v in sig.items()}
    return _parse_node(doc["proof"], sig, ()), sig


def load_proof(path) -> tuple[Derivation, dict | None]:
    return load_proof_text(Path(path).read_text(encoding="utf-8"))


def _dump_node(d: Derivation) -> dict:
    out: dict = {"rule": d.rule, "conclusion": render_sequent(d.conclusion)}
    w = {}
    for key in ("A", "B", "C"):
        if getattr(d.inst, key) is not None:
            w[key] = render(getattr(d.inst, key))
    for key in ("xs", "ys"):
        if getattr(d.inst, key) is not None:
            w[key] = list(getattr(d.inst, key))
    if d.inst.x is not None:
        w["x"] = d.inst.x
    if w:
        out["with"] = w
    if d.premises:
        out["premises"] = [_dump_node(p) for p in d.premises]
    return out


def dump_proof(d: Derivation, signature: Mapping[str, int] | None = None) -> str:
    doc: dict = {}
    if signature is not None:
        doc["signature"] = dict(signature)
    doc["proof"] = _dump_node(d)
    return yaml.safe_dump(doc, sort_keys=False, width=1000)


def with_conclusion(d: Derivation, s: Sequent) -> Derivation:
    return replace(d, conclusion=s)


__all__ = [
    "AXIOMS", "RULES", "PREMISE_COUNT", "Inst", "Derivation", "CheckReport", "SchemaError",
    "ProofFormatError", "schema", "check_axiom", "check_rule", "check_derivation", "iter_nodes",
    "rules_used", "size", "format_path", "load_proof", "load_proof_text", "dump_proof",
    "with_conclusion", "substitute_sequent",
    "a1", "a2", "a3", "a4", "a5", "a6", "a7", "a8", "a9", "a10", "a11",
    "r1", "r2", "r3a", "r3b", "r4", "r5a", "r5b", "r6", "r7", "r8", "r9",
]
