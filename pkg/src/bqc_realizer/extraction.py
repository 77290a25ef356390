"""Realizer extraction: derivation + admissible variable list -> index.

A realizer of ``A => B`` over the list ``r1..rl`` is an index ``e`` of arity
``l+1``: ``e(k1..kl, d)`` turns a realizer ``d`` of ``A(k)`` into one of
``B(k)``.  Axioms are realized directly over the requested list.  Rules
extract their premises over a canonical intermediate list ``us`` (the sorted
free variables of every sequent in the rule instance, plus the rule's own
bound variables where needed), combine them there, and move the result to the
requested list with :func:`adapt_list`.

Realizers of axioms A6-A11 and rule R9 must compute new indices from their
input at run time; they do so with ``Build`` nodes.  Everything else is
combined statically with the index builders.

Caveat: dropping a variable from a list fixes it to 0.  The result is only
guaranteed to realize the sequent over domains that contain 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .calculus import Derivation, check_derivation
from .numbering import (
    Arg, Build, Compose, Cond, Const, Fst, Pair, Smn, Snd, Value,
    build_compose, build_cond, build_const, build_dummy, build_perm, build_smn, encode,
    evaluate,
)
from .syntax import Sequent, Top, free_vars, is_admissible, render_sequent, sequent_free_vars

__all__ = [
    "ExtractionError", "RealizedSequent", "adapt_list", "adapt_index", "realize_axiom",
    "realize_rule", "extract", "extract_realized", "sentence_realizer", "intermediate_lists",
    "specialize", "realized_implication", "PAIR12",
]

PAIR12 = encode(Pair(Arg(1), Arg(2)))


class ExtractionError(ValueError):
    pass


@dataclass(frozen=True)
class RealizedSequent:
    sequent: Sequent
    list: tuple
    index: int

    def __post_init__(self):
        if not is_admissible(self.list, self.sequent):
            raise ExtractionError(f"{list(self.list)} is not admissible for {render_sequent(self.sequent)}")


def _proj(i: int) -> int:
    return encode(Arg(i))


def _projs(n: int) -> list:
    return [_proj(i) for i in range(1, n + 1)]


# -- list reindexing -------------------------------------------------------

def adapt_index(e: int, source: Sequence[str], target: Sequence[str]) -> int:
    """Move a realizer from list ``source`` to list ``target``.

    Permute to (shared, d, dropped), fix the dropped variables to 0, add the
    target's new variables as trailing dummies, then permute to (target, d).
    """
    source, target = list(source), list(target)
    if source == target:
        return e
    shared = [v for v in target if v in source]
    dropped = [v for v in source if v not in target]
    added = [v for v in target if v not in source]
    # e1(shared, d, dropped) = e(source, d)
    layout = shared + ["\0d"] + dropped
    p = [layout.index(v) + 1 for v in source] + [layout.index("\0d") + 1]
    e1 = build_perm(e, p)
    e2 = build_smn(e1, [0] * len(dropped), len(shared) + 1)
    e3 = e2
    for j in range(len(added)):
        e3 = build_dummy(e3, len(shared) + 1 + j)
    # e3 takes (shared, d, added); reorder to (target, d)
    final_layout = target + ["\0d"]
    q = [final_layout.index(v) + 1 for v in shared + ["\0d"] + added]
    # build_perm(f, q)(x) = f(x_q1..): here f = e3 and its j-th argument is x_{q(j)}
    return build_perm(e3, q)


def adapt_list(r: RealizedSequent, target: Sequence[str]) -> RealizedSequent:
    target = tuple(target)
    if not is_admissible(target, r.sequent):
        raise ExtractionError(f"{list(target)} is not admissible for {render_sequent(r.sequent)}")
    return RealizedSequent(r.sequent, target, adapt_index(r.index, r.list, target))


# -- axioms ----------------------------------------------------------------

def _term_map(vs_index: dict, vs: Sequence[str]) -> list:
    """Projection codes for each variable in ``vs`` looked up in ``vs_index``;
    a variable with no position gets the constant 0 (its value is never used)."""
    out = []
    for v in vs:
        if v in vs_index:
            out.append(_proj(vs_index[v]))
        else:
            out.append(encode(Const(0)))
    return out


def realize_axiom(d: Derivation, rs: Sequence[str]) -> int:
    rs = list(rs)
    l = len(rs)
    D = Arg(l + 1)
    inst = d.inst
    rule = d.rule
    if rule in ("A1", "A2"):
        return encode(D)
    if rule == "A3":
        return build_const(0)
    if rule in ("A4", "A5"):
        return encode(Pair(Fst(Snd(D)), Pair(Fst(D), Snd(Snd(D)))))
    if rule in ("A6", "A7", "A8", "A9", "A10", "A11"):
        n = len(inst.xs)
        projs = [Const(c) for c in _projs(n)]
    if rule == "A6":
        # index of (m, a) -> c(m, b(m, a)) for d = pair(b, c)
        op = Compose(n + 1, (n + 1,) * (n + 1))
        return encode(Build(op, (Snd(D), *projs, Fst(D))))
    if rule == "A7":
        op = Compose(2, (n + 1, n + 1))
        return encode(Build(op, (Const(PAIR12), Fst(D), Snd(D))))
    if rule == "A8":
        op = Compose(n + 1, (n + 1,) * (n + 1))
        tail = Const(encode(Snd(Arg(n + 1))))
        left = Build(op, (Fst(D), *projs, tail))
        right = Build(op, (Snd(D), *projs, tail))
        return encode(Build(Cond(n), (left, right)))
    if rule == "A9":
        # (m, a, k) -> d(z(m, k), a), then fix k
        where = {v: n + 1 + i for i, v in enumerate(rs, 1)}
        where.update({x: j for j, x in enumerate(inst.xs, 1)})
        zs = [Const(c) for c in _term_map(where, inst.ys)]
        op = Compose(n + 1, (n + l + 1,) * (n + 1))
        inner = Build(op, (D, *zs, Const(_proj(n + 1))))
        return encode(Build(Smn(l, n + 1), (inner, *(Arg(i) for i in range(1, l + 1)))))
    if rule == "A10":
        p = len(inst.ys)
        where = {v: p + 1 + i for i, v in enumerate(rs, 1)}
        where.update({y: j for j, y in enumerate(inst.ys, 1)})
        xs_map = [Const(c) for c in _term_map(where, inst.xs)]
        op = Compose(n + 1, (p + l + 1,) * (n + 1))
        inner = Build(op, (D, *xs_map, Const(_proj(p + 1))))
        return encode(Build(Smn(l, p + 1), (inner, *(Arg(i) for i in range(1, l + 1)))))
    if rule == "A11":
        # (m, b) -> d(m, p1 b, p2 b)
        op = Compose(n + 2, (n + 1,) * (n + 2))
        args = (D, *projs, Const(encode(Fst(Arg(n + 1)))), Const(encode(Snd(Arg(n + 1)))))
        return encode(Build(op, args))
    raise ExtractionError(f"{rule} is not an axiom")


# -- rules -----------------------------------------------------------------

def _sorted_fv(*seqs: Sequent) -> list:
    out = set()
    for s in seqs:
        out |= sequent_free_vars(s)
    return sorted(out)


def intermediate_lists(d: Derivation) -> tuple[tuple, list]:
    """Canonical list for the rule's own realizer and the lists its premises are
    extracted over."""
    seqs = [d.conclusion, *(p.conclusion for p in d.premises)]
    inst = d.inst
    if d.rule == "R7":
        us = [v for v in _sorted_fv(*seqs) if v != inst.x]
        return tuple(us), [tuple(us) + (inst.x,)]
    if d.rule == "R8":
        us = [v for v in _sorted_fv(*seqs) if v != inst.x]
        return tuple(us) + (inst.x,), [tuple(us)]
    if d.rule == "R9":
        us = [v for v in _sorted_fv(*seqs) if v not in inst.xs]
        return tuple(us), [tuple(inst.xs) + tuple(us)]
    us = tuple(_sorted_fv(*seqs))
    return us, [us] * len(d.premises)


def realize_rule(d: Derivation, premises: Sequence[RealizedSequent], rs: Sequence[str]) -> int:
    """Realizer of the rule's conclusion over ``rs`` from premise realizers over any lists."""
    us, lists = intermediate_lists(d)
    if len(premises) != len(lists):
        raise ExtractionError(f"{d.rule} needs {len(lists)} premise realizer(s)")
    idx = [adapt_list(r, lst).index for r, lst in zip(premises, lists)]
    p = len(us)
    projs = _projs(p)
    last = _proj(p + 1)
    rule = d.rule
    ms = [p + 1] * (p + 1)
    if rule == "R1":
        a, b = idx
        e = build_compose(b, [*projs, a], ms)
    elif rule == "R2":
        b, c = idx
        e = build_compose(PAIR12, [b, c], [p + 1, p + 1])
    elif rule == "R3a":
        e = build_compose(encode(Fst(Arg(1))), idx, [p + 1])
    elif rule == "R3b":
        e = build_compose(encode(Snd(Arg(1))), idx, [p + 1])
    elif rule == "R4":
        snd_last = encode(Snd(Arg(p + 1)))
        b, c = (build_compose(x, [*projs, snd_last], ms) for x in idx)
        e = build_cond(b, c, p)
    elif rule in ("R5a", "R5b"):
        tag = 0 if rule == "R5a" else 1
        e = build_compose(idx[0], [*projs, encode(Pair(Const(tag), Arg(p + 1)))], ms)
    elif rule == "R6":
        xs, ys = d.inst.xs, d.inst.ys
        ren = dict(zip(xs, ys))
        zs = []
        for i, u in enumerate(us, 1):
            target = ren.get(u, u)
            zs.append(_proj(us.index(target) + 1) if target in us else _proj(i))
        e = build_compose(idx[0], [*zs, last], ms)
    elif rule == "R7":
        # (k, d) -> a(k, p1 d, p2 d); a is over us + [x]
        inner = [*projs, encode(Fst(Arg(p + 1))), encode(Snd(Arg(p + 1)))]
        e = build_compose(idx[0], inner, [p + 1] * (p + 2))
    elif rule == "R8":
        # (k, c, d) -> a(k, pair(c, d)); here us already ends with x
        q = p - 1
        e = build_compose(idx[0], [*_projs(q), encode(Pair(Arg(q + 1), Arg(q + 2)))], [q + 2] * (q + 1))
    elif rule == "R9":
        n = len(d.inst.xs)
        c = idx[0]
        # c'(m, b, k, d) = c(m, k, pair(d, b)), then fix (k, d) at run time
        inner = [*_projs(n), *(_proj(n + 1 + i) for i in range(1, p + 1)),
                 encode(Pair(Arg(n + p + 2), Arg(n + 1)))]
        c2 = build_compose(c, inner, [n + p + 2] * (n + p + 1))
        e = encode(Build(Smn(p + 1, n + 1), (Const(c2), *(Arg(i) for i in range(1, p + 2)))))
    else:
        raise ExtractionError(f"{rule} is not a rule")
    return adapt_index(e, us, rs)


# -- driver ----------------------------------------------------------------

def extract(d: Derivation, rs: Sequence[str], *, check: bool = True) -> int:
    """Index of arity ``len(rs)+1`` realizing ``d.conclusion`` over ``rs``."""
    rs = tuple(rs)
    if check:
        report = check_derivation(d)
        if not report.ok:
            raise ExtractionError(f"derivation does not check:\n{report}")
    if not is_admissible(rs, d.conclusion):
        raise ExtractionError(f"{list(rs)} is not admissible for {render_sequent(d.conclusion)}")
    cache: dict = {}

    def go(node: Derivation, lst: tuple) -> int:
        key = (id(node), lst)
        if key in cache:
            return cache[key]
        if node.is_axiom:
            e = realize_axiom(node, lst)
        else:
            _, lists = intermediate_lists(node)
            prem = [RealizedSequent(p.conclusion, pl, go(p, pl)) for p, pl in zip(node.premises, lists)]
            e = realize_rule(node, prem, lst)
        cache[key] = e
        return e

    return go(d, rs)


def extract_realized(d: Derivation, rs: Sequence[str]) -> RealizedSequent:
    return RealizedSequent(d.conclusion, tuple(rs), extract(d, rs))


def sentence_realizer(d: Derivation) -> int:
    """For a derivation of ``top => A`` with ``A`` closed: a realizer of ``A``."""
    s = d.conclusion
    if not isinstance(s.lhs, Top):
        raise ExtractionError("a sentence derivation must conclude top => A")
    if free_vars(s.rhs):
        raise ExtractionError(f"{render_sequent(s)} is not closed")
    e = extract(d, ())
    out = evaluate(e, [0])
    if not isinstance(out, Value):
        raise ExtractionError(f"realizer did not produce a value: {out}")
    return out.v


def specialize(e: int, n: int, ks: Sequence[int]) -> int:
    """``e'(m1..mn, a) = e(m1..mn, k1..kj, a)``: turn a sequent realizer over
    ``xs + rest`` into a realizer of ``all xs (A -> B)`` with ``rest`` fixed."""
    inner = [*_projs(n), *(build_const(k) for k in ks), _proj(n + 1)]
    return build_compose(e, inner, [n + 1] * len(inner))


def realized_implication(r: RealizedSequent, xs: Sequence[str], ks: Sequence[int]) -> int:
    """Realizer of ``all xs (lhs -> rhs)`` from a sequent realizer whose list is
    ``xs`` followed by the remaining variables, fixed to ``ks``."""
    xs = tuple(xs)
    if tuple(r.list[:len(xs)]) != xs:
        raise ExtractionError(f"list {list(r.list)} does not start with {list(xs)}")
    return specialize(r.index, len(xs), ks)

