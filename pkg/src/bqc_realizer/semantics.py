"""Realizability over finite domains, as a three-valued decision procedure.

``e r A`` is checked structurally.  The only source of incompleteness is the
guarded implication: every realizer of the antecedent must be mapped to a
realizer of the consequent.  Antecedent realizers are enumerated
structurally.  Atoms, bot, conjunction, disjunction and existentials
enumerate exactly.  ``top`` and nested implications are enumerated up to
``bound``, and the verdict degrades to ``Unknown`` when that matters.

``Fails`` is only reported for a violation whose antecedent candidate is a
genuine realizer (its own verdict is ``Holds``), so ``Fails`` is sound.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Callable, Mapping, Sequence, Union

import yaml

from .numbering import (
    DEFAULT_FUEL, FUEL_EXHAUSTED, Undefined, evaluate, in_index_set, pair, symbolic_component,
    symbolic_in_last, unpair,
)
from .syntax import (
    AllImp, And, Atom, Bot, Exists, Formula, Num, Or, Sequent, Top, constants, free_vars,
    has_top, is_admissible, rank, render, render_sequent, substitute,
)

__all__ = [
    "Evaluation", "Holds", "Fails", "Unknown", "Verdict", "Step", "DomainError", "WitnessError",
    "DEFAULT_BOUND", "real_set", "check", "check_sequent", "check_with_witnesses", "replay",
    "random_evaluation", "load_evaluation", "load_evaluation_text", "dump_evaluation",
    "load_witnesses", "instantiate",
]

DEFAULT_BOUND = 32


class DomainError(ValueError):
    pass


class WitnessError(KeyError):
    pass


@dataclass(frozen=True)
class Evaluation:
    """Finite domain plus generalized predicates; unlisted tuples have no realizers."""
    domain: frozenset
    preds: Mapping = field(default_factory=dict)  # name -> {tuple: frozenset}

    def __post_init__(self):
        object.__setattr__(self, "domain", frozenset(self.domain))
        fixed = {}
        for name, table in self.preds.items():
            fixed[name] = {tuple(k): frozenset(v) for k, v in table.items()}
        object.__setattr__(self, "preds", fixed)

    def realizers(self, pred: str, args: tuple) -> frozenset:
        return self.preds.get(pred, {}).get(tuple(args), frozenset())

    @property
    def sorted_domain(self) -> tuple:
        return tuple(sorted(self.domain))

    def __hash__(self):
        return hash((self.domain, tuple(sorted((k, tuple(sorted(v.items()))) for k, v in self.preds.items()))))


@dataclass(frozen=True)
class Step:
    """One replayable evaluation: ``evaluate(code, args)`` gave ``outcome``."""
    code: int
    args: tuple
    outcome: object
    note: str = ""

    def __str__(self):
        args = ",".join(map(str, self.args))
        return f"eval({self.code}; {args}) = {self.outcome}" + (f"  [{self.note}]" if self.note else "")


@dataclass(frozen=True)
class Holds:
    def __str__(self):
        return "Holds"


@dataclass(frozen=True)
class Fails:
    reason: str
    trace: tuple = ()

    def __str__(self):
        lines = [f"Fails: {self.reason}"] + [f"  {s}" for s in self.trace]
        return "\n".join(lines)


@dataclass(frozen=True)
class Unknown:
    bound: int
    reason: str = ""

    def __str__(self):
        return f"Unknown (bound {self.bound}{': ' + self.reason if self.reason else ''})"


Verdict = Union[Holds, Fails, Unknown]
HOLDS = Holds()


@lru_cache(maxsize=1 << 16)
def instantiate(f: Formula, xs: tuple, values: tuple) -> Formula:
    return substitute(f, xs, [Num(v) for v in values]) if xs else f


def _closed(A: Formula, f: Evaluation) -> None:
    if free_vars(A):
        raise DomainError(f"{render(A)} has free variables {sorted(free_vars(A))}")
    outside = constants(A) - f.domain
    if outside:
        raise DomainError(f"constants {sorted(outside)} of {render(A)} are outside the domain")


def real_set(A: Formula, f: Evaluation) -> frozenset:
    """Exact set of realizers of a closed, implication-free, top-free formula."""
    if rank(A) > 0 or has_top(A):
        raise ValueError(f"real_set needs an implication-free formula without top: {render(A)}")
    _closed(A, f)
    return frozenset(_real_set(A, f))


def _real_set(A: Formula, f: Evaluation) -> set:
    if isinstance(A, Bot):
        return set()
    if isinstance(A, Atom):
        return set(f.realizers(A.pred, tuple(a.k for a in A.args)))
    if isinstance(A, And):
        left = _real_set(A.left, f)
        right = _real_set(A.right, f) if left else set()
        return {pair(a, b) for a in left for b in right}
    if isinstance(A, Or):
        return {pair(0, a) for a in _real_set(A.left, f)} | {pair(1, b) for b in _real_set(A.right, f)}
    if isinstance(A, Exists):
        out = set()
        for m in f.sorted_domain:
            out |= {pair(m, s) for s in _real_set(instantiate(A.body, (A.var,), (m,)), f)}
        return out
    raise ValueError(f"unexpected formula {render(A)}")


# -- the checker -----------------------------------------------------------

Witnesses = Union[Mapping, Callable, None]


def _format_path(path: tuple) -> str:
    return ".".join(map(str, path)) if path else "root"


class _Checker:
    def __init__(self, f: Evaluation, bound: int, fuel: int, witnesses: Witnesses = None):
        self.f = f
        self.bound = bound
        self.fuel = fuel
        self.witnesses = witnesses
        self._evals: dict = {}
        self._verdicts: dict = {}

    def eval(self, e: int, args: tuple):
        key = (e, args)
        out = self._evals.get(key)
        if out is None:
            out = self._evals[key] = evaluate(e, args, self.fuel)
        return out

    def unknown(self, reason=""):
        return Unknown(self.bound, reason)

    # verdict for e r A, A closed
    def check(self, e: int, A: Formula) -> Verdict:
        if isinstance(A, Top):
            return HOLDS
        key = (e, A)
        v = self._verdicts.get(key)
        if v is None:
            v = self._verdicts[key] = self._check(e, A)
        return v

    def _check(self, e: int, A: Formula) -> Verdict:
        if isinstance(A, Bot):
            return Fails(f"nothing realizes bot (given {e})")
        if isinstance(A, Atom):
            args = tuple(a.k for a in A.args)
            if e in self.f.realizers(A.pred, args):
                return HOLDS
            return Fails(f"{e} is not a realizer of {render(A)}")
        if isinstance(A, And):
            a, b = unpair(e)
            left = self.check(a, A.left)
            if isinstance(left, Fails):
                return Fails(f"left component {a} of {e}: {left.reason}", left.trace)
            right = self.check(b, A.right)
            if isinstance(right, Fails):
                return Fails(f"right component {b} of {e}: {right.reason}", right.trace)
            return _join(left, right)
        if isinstance(A, Or):
            tag, s = unpair(e)
            if tag not in (0, 1):
                return Fails(f"disjunction tag {tag} of {e} is neither 0 nor 1")
            sub = self.check(s, A.left if tag == 0 else A.right)
            if isinstance(sub, Fails):
                return Fails(f"disjunct {tag} of {e}: {sub.reason}", sub.trace)
            return sub
        if isinstance(A, Exists):
            m, s = unpair(e)
            if m not in self.f.domain:
                return Fails(f"existential witness {m} of {e} is outside the domain")
            sub = self.check(s, instantiate(A.body, (A.var,), (m,)))
            if isinstance(sub, Fails):
                return Fails(f"existential with witness {m}, body realizer {s}: {sub.reason}", sub.trace)
            return sub
        if isinstance(A, AllImp):
            return self.check_implication(e, A, None)
        raise TypeError(f"not a formula: {A!r}")

    def check_implication(self, e: int, A: AllImp, witnesses: Witnesses) -> Verdict:
        n = len(A.vars)
        if not in_index_set(e, n + 1):
            return Fails(f"{e} is not an index of arity {n + 1}")
        pending: Verdict = HOLDS
        for values in itertools.product(self.f.sorted_domain, repeat=n):
            ant = instantiate(A.ant, A.vars, values)
            cons = instantiate(A.cons, A.vars, values)
            if witnesses is not None:
                cands, exact = self.witness_candidates(ant, (), values, witnesses)
            else:
                cands, exact = self.candidates(ant)
            v = self.obligation(e, values, cands, exact, cons)
            if isinstance(v, Fails):
                return v
            pending = _join(pending, v)
        return pending

    def obligation(self, e, values, cands, exact, cons) -> Verdict:
        """All antecedent candidates ``s`` must give ``e(values, s)`` realizing ``cons``."""
        sym = symbolic_in_last(e, values, self.fuel)
        if sym is not None and not isinstance(sym, int) and self.holds_for_every(sym, cons):
            return HOLDS
        if isinstance(sym, int):
            # the result does not depend on s: one evaluation settles every realizer
            res = self.outcome(e, values + (0,), cons)
            if res is HOLDS:
                return HOLDS
            genuine = next((s for s, g in cands if g), None)
            if isinstance(res, Fails) and genuine is not None:
                return self.outcome(e, values + (genuine,), cons)
            if isinstance(res, Fails) and exact and not cands:
                return HOLDS
            if isinstance(res, Unknown):
                return res
            return self.unknown("violation only on unconfirmed antecedent candidates")
        pending = HOLDS if exact else self.unknown("antecedent realizers enumerated up to the bound")
        for s, genuine in cands:
            res = self.outcome(e, values + (s,), cons)
            if isinstance(res, Fails):
                if genuine:
                    return res
                pending = _join(pending, self.unknown("violation only on unconfirmed antecedent candidates"))
            else:
                pending = _join(pending, res)
        return pending

    def holds_for_every(self, v, A: Formula) -> bool:
        """Does the symbolic value ``v`` realize ``A`` whatever the unknown is?

        ``v`` is total in the unknown, so only its shape matters.  ``False``
        means "not shown" and the caller falls back to enumeration.
        """
        if isinstance(v, int):
            return self.check(v, A) is HOLDS
        if isinstance(A, Top):
            return True
        if isinstance(A, And):
            return (self.holds_for_every(symbolic_component(v, 0), A.left)
                    and self.holds_for_every(symbolic_component(v, 1), A.right))
        if isinstance(A, (Or, Exists)):
            head = symbolic_component(v, 0)
            if not isinstance(head, int):
                return False
            if isinstance(A, Or):
                if head not in (0, 1):
                    return False
                return self.holds_for_every(symbolic_component(v, 1), A.left if head == 0 else A.right)
            if head not in self.f.domain:
                return False
            return self.holds_for_every(symbolic_component(v, 1), instantiate(A.body, (A.var,), (head,)))
        return False

    def outcome(self, e, args, cons) -> Verdict:
        out = self.eval(e, args)
        if isinstance(out, Undefined):
            if out.reason == FUEL_EXHAUSTED:
                return self.unknown(f"fuel exhausted at eval({e}; {','.join(map(str, args))})")
            return Fails(f"application is undefined ({out.reason})", (Step(e, args, out),))
        sub = self.check(out.v, cons)
        if isinstance(sub, Fails):
            step = Step(e, args, out, f"result must realize {render(cons)}")
            return Fails(f"result {out.v} does not realize {render(cons)}: {sub.reason}", (step, *sub.trace))
        return sub

    # antecedent enumeration: (list of (s, genuine)), exact?
    def candidates(self, A: Formula) -> tuple[list, bool]:
        if isinstance(A, Bot):
            return [], True
        if isinstance(A, Top):
            return [(s, True) for s in range(self.bound + 1)], False
        if isinstance(A, Atom):
            return [(s, True) for s in sorted(self.f.realizers(A.pred, tuple(a.k for a in A.args)))], True
        if isinstance(A, And):
            left, el = self.candidates(A.left)
            if not left and el:
                return [], True
            right, er = self.candidates(A.right)
            out = [(pair(a, b), ga and gb) for a, ga in left for b, gb in right]
            return sorted(out), el and er
        if isinstance(A, Or):
            left, el = self.candidates(A.left)
            right, er = self.candidates(A.right)
            out = [(pair(0, a), g) for a, g in left] + [(pair(1, b), g) for b, g in right]
            return sorted(out), el and er
        if isinstance(A, Exists):
            out, exact = [], True
            for m in self.f.sorted_domain:
                sub, ex = self.candidates(instantiate(A.body, (A.var,), (m,)))
                out += [(pair(m, s), g) for s, g in sub]
                exact = exact and ex
            return sorted(out), exact
        if isinstance(A, AllImp):
            if self.unrealizable(A):
                return [], True
            out = []
            for s in range(self.bound + 1):
                v = self.check(s, A)
                if not isinstance(v, Fails):
                    out.append((s, v is HOLDS))
            return out, False
        raise TypeError(f"not a formula: {A!r}")

    def unrealizable(self, A: Formula) -> bool:
        """Sufficient test that nothing realizes the closed formula ``A``."""
        if isinstance(A, Bot):
            return True
        if isinstance(A, Atom):
            return not self.f.realizers(A.pred, tuple(a.k for a in A.args))
        if isinstance(A, And):
            return self.unrealizable(A.left) or self.unrealizable(A.right)
        if isinstance(A, Or):
            return self.unrealizable(A.left) and self.unrealizable(A.right)
        if isinstance(A, Exists):
            return all(self.unrealizable(instantiate(A.body, (A.var,), (m,)))
                       for m in self.f.sorted_domain)
        if isinstance(A, AllImp):
            # one genuine antecedent realizer with nowhere to go is enough
            for values in itertools.product(self.f.sorted_domain, repeat=len(A.vars)):
                if self.unrealizable(instantiate(A.cons, A.vars, values)):
                    cands, _ = self.candidates(instantiate(A.ant, A.vars, values))
                    if any(g for _, g in cands):
                        return True
            return False
        return False

    def witness_candidates(self, A, path, values, witnesses) -> tuple[list, bool]:
        """As ``candidates`` but guarded implications draw from supplied witnesses."""
        if isinstance(A, AllImp):
            key = (path, tuple(values))
            try:
                if callable(witnesses):
                    supplied = witnesses(path, tuple(values))
                else:
                    supplied = witnesses[key]
            except KeyError:
                raise WitnessError(f"no witnesses for occurrence {_format_path(path)} "
                                   f"at values {list(values)}") from None
            out = []
            for s in sorted(set(supplied)):
                v = self.check(s, A)
                if not isinstance(v, Fails):
                    out.append((s, v is HOLDS))
            return out, True
        if isinstance(A, And):
            left, el = self.witness_candidates(A.left, path + (0,), values, witnesses)
            right, er = self.witness_candidates(A.right, path + (1,), values, witnesses)
            return sorted((pair(a, b), ga and gb) for a, ga in left for b, gb in right), el and er
        if isinstance(A, Or):
            left, el = self.witness_candidates(A.left, path + (0,), values, witnesses)
            right, er = self.witness_candidates(A.right, path + (1,), values, witnesses)
            out = [(pair(0, a), g) for a, g in left] + [(pair(1, b), g) for b, g in right]
            return sorted(out), el and er
        if isinstance(A, Exists):
            out, exact = [], True
            for m in self.f.sorted_domain:
                body = instantiate(A.body, (A.var,), (m,))
                sub, ex = self.witness_candidates(body, path + (0,), tuple(values) + (m,), witnesses)
                out += [(pair(m, s), g) for s, g in sub]
                exact = exact and ex
            return sorted(out), exact
        return self.candidates(A)


def _join(a: Verdict, b: Verdict) -> Verdict:
    if isinstance(a, Fails):
        return a
    if isinstance(b, Fails):
        return b
    if isinstance(a, Unknown):
        return a
    return b


def check(e: int, A: Formula, f: Evaluation, bound: int = DEFAULT_BOUND,
          fuel: int = DEFAULT_FUEL) -> Verdict:
    """Does ``e`` realize the closed formula ``A`` under ``f``?"""
    _closed(A, f)
    return _Checker(f, bound, fuel).check(e, A)


def check_sequent(e: int, S: Sequent, rs: Sequence[str], f: Evaluation,
                  bound: int = DEFAULT_BOUND, fuel: int = DEFAULT_FUEL) -> Verdict:
    rs = tuple(rs)
    if not is_admissible(rs, S):
        raise DomainError(f"{list(rs)} is not admissible for {render_sequent(S)}")
    return check(e, AllImp(rs, S.lhs, S.rhs), f, bound, fuel)


def check_with_witnesses(e: int, S: Sequent, rs: Sequence[str], f: Evaluation,
                         witnesses: Witnesses, fuel: int = DEFAULT_FUEL,
                         bound: int = DEFAULT_BOUND) -> Verdict:
    """Like ``check_sequent``, but realizers of guarded implications inside the
    antecedent come from ``witnesses``.

    ``witnesses`` maps ``(path, values)`` to a set of codes, or is a callable
    with that signature.  ``path`` locates the implication inside the
    antecedent (0/1 for left/right of ``&`` and ``|``, 0 for an ``ex`` body).
    ``values`` holds the values of ``rs`` followed by those of the enclosing
    existentials.  ``Holds`` means "realizes against every supplied witness".
    """
    rs = tuple(rs)
    if not is_admissible(rs, S):
        raise DomainError(f"{list(rs)} is not admissible for {render_sequent(S)}")
    A = AllImp(rs, S.lhs, S.rhs)
    _closed(A, f)
    return _Checker(f, bound, fuel).check_implication(e, A, witnesses if witnesses is not None else {})


def replay(step: Step, fuel: int = DEFAULT_FUEL) -> bool:
    """Re-run a trace step; true when it reproduces the recorded outcome."""
    return evaluate(step.code, step.args, fuel) == step.outcome


# -- evaluations: random generation and files ------------------------------

def random_evaluation(signature: Mapping[str, int], rng: random.Random, *,
                      max_domain: int = 4, max_set: int = 4, value_limit: int = 32,
                      domain_pool: int = 6, require_zero: bool = True) -> Evaluation:
    """Domain of 1..max_domain elements (containing 0 unless told otherwise),
    every predicate tuple mapped to 0..max_set realizers below ``value_limit``."""
    size = rng.randint(1, max_domain)
    if require_zero:
        domain = {0} | set(rng.sample(range(1, domain_pool), size - 1))
    else:
        domain = set(rng.sample(range(domain_pool), size))
    dom = sorted(domain)
    preds = {}
    for name in sorted(signature):
        table = {}
        for args in itertools.product(dom, repeat=signature[name]):
            k = rng.randint(0, max_set)
            table[args] = frozenset(rng.sample(range(value_limit), k))
        preds[name] = table
    return Evaluation(frozenset(domain), preds)


def _parse_key(key) -> tuple:
    if isinstance(key, int):
        return (key,)
    if isinstance(key, (list, tuple)):
        return tuple(int(x) for x in key)
    text = str(key).strip().strip("()[]")
    return tuple(int(x) for x in text.split(",") if x.strip())


def load_evaluation_text(text: str) -> Evaluation:
    doc = yaml.safe_load(text)
    if not isinstance(doc, Mapping) or "domain" not in doc:
        raise ValueError("an evaluation file needs a 'domain' entry")
    domain = frozenset(int(x) for x in doc["domain"] or ())
    preds = {}
    for name, table in (doc.get("predicates") or {}).items():
        parsed = {}
        for key, vals in (table or {}).items():
            args = _parse_key(key)
            if any(a not in domain for a in args):
                raise ValueError(f"{name}{args}: arguments outside the domain")
            parsed[args] = frozenset(int(v) for v in vals or ())
        preds[str(name)] = parsed
    return Evaluation(domain, preds)


def load_evaluation(path) -> Evaluation:
    return load_evaluation_text(Path(path).read_text(encoding="utf-8"))


def dump_evaluation(f: Evaluation) -> str:
    doc = {
        "domain": sorted(f.domain),
        "predicates": {
            name: {",".join(map(str, k)): sorted(v) for k, v in sorted(table.items())}
            for name, table in sorted(f.preds.items())
        },
    }
    return yaml.safe_dump(doc, sort_keys=False)


def load_witnesses(path) -> dict:
    """Witness file: a list of ``{path: "0.1", values: [...], realizers: [...]}``."""
    doc = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
    entries = doc.get("witnesses", []) if isinstance(doc, Mapping) else doc
    out = {}
    for entry in entries or ():
        p = str(entry.get("path", "root"))
        key_path = () if p in ("", "root") else tuple(int(x) for x in p.split("."))
        out[(key_path, tuple(int(v) for v in entry.get("values", ())))] = frozenset(
            int(r) for r in entry.get("realizers", ()))
    return out

