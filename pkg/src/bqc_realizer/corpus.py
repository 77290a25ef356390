"""Sample derivations used by the validation campaign, tests and demos.

``corpus()`` returns checked multi-step derivations covering every axiom and
rule; ``negative_corpus()`` returns derivations that each break one side
condition at a known node.  ``write_corpus`` stores both as ``.bqc`` files.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .calculus import (
    Derivation, Inst, a1, a2, a3, a4, a5, a6, a7, a8, a9, a10, a11, dump_proof,
    r1, r2, r3a, r3b, r4, r5a, r5b, r6, r7, r8, r9,
)
from .syntax import parse_formula, parse_sequent


@dataclass(frozen=True)
class Entry:
    name: str
    derivation: Derivation
    signature: dict
    note: str = ""
    bad_path: tuple | None = None  # negatives: where the checker must complain
    bad_rule: str | None = None


def _swap(f: str) -> Derivation:
    """``X & Y => Y & X`` for a conjunction ``f``."""
    ax = a1(f)
    return r2(r3b(ax), r3a(ax))


def _intro(f: str) -> Derivation:
    """``B => ex x B`` from ``ex x B => ex x B`` (f is the existential)."""
    return r8(a1(f))


def corpus() -> list[Entry]:
    out = []

    def add(name, d, sig, note=""):
        out.append(Entry(name, d, sig, note))

    p0 = {"P": 0, "Q": 0, "R": 0}
    p1 = {"P": 1, "Q": 1, "R": 1}

    swap = _swap("P & Q")
    add("swap", swap, p0, "conjunction commutes")
    add("swap_sentence", r9(r1(r3b(a1("top & (P & Q)")), swap), ""), p0,
        "top => (P & Q -> Q & P); its sentence realizer swaps pair components")

    or_comm = r4(r5b(a1("Q | P")), r5a(a1("Q | P")))
    add("or_comm", or_comm, p0, "disjunction commutes")

    add("and_assoc", r2(r3a(r3a(a1("(P & Q) & R"))),
                        r2(r3b(r3a(a1("(P & Q) & R"))), r3b(a1("(P & Q) & R")))),
        p0, "(P & Q) & R => P & (Q & R)")

    add("top_intro", r2(a1("P"), a2("P")), p0, "P => P & top")
    add("bot_elim", r4(a3("P"), a1("P")), p0, "bot | P => P")

    add("exists_intro_renamed", r6(_intro("ex x P(x)"), "x", "y"), p1,
        "P(y) => ex x P(x) by introduction then renaming")

    proj = r3a(a1("P(x) & Q(x)"))
    add("exists_mono", r7(r1(proj, _intro("ex x P(x)")), "x"), p1,
        "ex x (P(x) & Q(x)) => ex x P(x)")

    sig_pq = {"P": 0, "Q": 1}
    inner = r1(_swap("P & Q(x)"), _intro("ex x (Q(x) & P)"))
    add("exists_pull", r1(a4("P", "x", "Q(x)"), r7(inner, "x")), sig_pq,
        "P & ex x Q(x) => ex x (Q(x) & P) via A4")

    dist = a5("P", "Q", "R")
    flip = r4(r5b(a1("(P & R) | (P & Q)")), r5a(a1("(P & R) | (P & Q)")))
    add("distribute", r1(dist, flip), p0, "P & (Q | R) => (P & R) | (P & Q)")

    trans = a6("", "P", "Q", "R")
    add("trans_keep", r2(trans, r3a(a1("(P -> Q) & (Q -> R)"))), p0,
        "(P -> Q) & (Q -> R) => (P -> R) & (P -> Q)")

    add("trans_pred", r1(a6("x", "P(x)", "Q(x)", "R(x)"),
                         a9("x", "y", "P(x)", "R(x)")), p1,
        "A6 over x, then instantiate x to the free y with A9")

    add("split_inst", r1(a7("x", "P(x)", "Q(x)", "R(x)"),
                         a9("x", "y", "P(x)", "Q(x) & R(x)")), p1,
        "A7 then A9 with a free variable")

    cases = a8("x", "R(x)", "P(x)", "Q(x)")
    add("cases_rebind", r1(cases, a10("x", "z", "P(x) | Q(x)", "R(x)")), p1,
        "A8 then A10 rebinding the quantifier")

    sig_r = {"R": 2}
    step = r1(r3b(a1("top & R(x,y)")), _intro("ex y R(x,y)"))
    gen = r9(step, "x y")
    add("exists_ante", r1(gen, a11("x", "y", "ex y R(x,y)", "R(x,y)")), sig_r,
        "R9 over two variables then A11")

    refl = r9(r3b(a1("top & R(x,y)")), "x y")
    add("perm_inst", r1(refl, a9("x y", "y x", "R(x,y)", "R(x,y)")), sig_r,
        "A9 with a permutation of the bound variables")

    add("rename_swap", r6(_swap("P(x) & Q(x)"), "x", "y"), p1, "R6 renaming after a swap")

    e1 = r1(_intro("ex x R(x,y)"), _intro("ex y ex x R(x,y)"))
    add("exists_comm", r7(r7(e1, "y"), "x"), sig_r, "ex x ex y R(x,y) => ex y ex x R(x,y)")

    add("curry_top", r9(r3a(a1("P & top")), ""), p0, "P => (top -> P)")

    left = r1(_intro("ex x P(x)"), r5a(a1("ex x P(x) | ex x Q(x)")))
    right = r1(_intro("ex x Q(x)"), r5b(a1("ex x P(x) | ex x Q(x)")))
    add("exists_or", r7(r4(left, right), "x"), p1,
        "ex x (P(x) | Q(x)) => ex x P(x) | ex x Q(x)")

    add("sentence_exists", r9(r1(r3b(a1("top & P(x)")), r6(_intro("ex y P(y)"), "y", "x")), "x"), p1,
        "top => all x (P(x) -> ex y P(y))")

    weak = r9(r3b(a1("top & P(x)")), "x")
    add("rebind_free", r1(weak, a10("x", "y", "P(x)", "P(x)")), p1,
        "top => all y (P(x) -> P(x)) with x left free")

    to_or = r1(r3b(a1("P & Q")), r5a(a1("Q | R")))
    add("and_or", r1(r2(r3a(a1("P & Q")), to_or), a5("P", "Q", "R")), p0,
        "P & Q => (P & Q) | (P & R) through distribution")

    return out


def _raw(rule, concl, premises=(), **kw) -> Derivation:
    return Derivation(rule, parse_sequent(concl), tuple(premises),
                      Inst(**{k: (parse_formula(v) if k in "ABC" else v) for k, v in kw.items()}))


def negative_corpus() -> list[Entry]:
    """One derivation per side condition, with the offending node's path."""
    out = []
    p1 = {"P": 1, "Q": 1}

    bad_a4 = _raw("A4", "P(x) & ex x Q(x) => ex x (P(x) & Q(x))", A="P(x)", B="Q(x)", x="x")
    d = Derivation("R1", parse_sequent("P(x) & ex x Q(x) => ex x (P(x) & Q(x))"),
                   (bad_a4, a1("ex x (P(x) & Q(x))")),
                   Inst(A=parse_formula("P(x) & ex x Q(x)"), B=parse_formula("ex x (P(x) & Q(x))"),
                        C=parse_formula("ex x (P(x) & Q(x))")))
    out.append(Entry("bad_a4", d, p1, "bound variable of A4 free in A", (0,), "A4"))

    bad_a10 = _raw("A10", "all x (P(x) -> Q(y)) => all y (P(x) -> Q(y))",
                   A="P(x)", B="Q(y)", xs=("x",), ys=("y",))
    out.append(Entry("bad_a10", bad_a10, p1, "new quantifier captures a free variable", (), "A10"))

    sig = {"P": 1, "Q": 2}
    bad_a11 = _raw("A11", "all x y (Q(x,y) -> P(y)) => all x (ex y Q(x,y) -> P(y))",
                   A="P(y)", B="Q(x,y)", xs=("x",), x="y")
    d = r2(a1("all x y (Q(x,y) -> P(y))"), bad_a11)
    out.append(Entry("bad_a11", d, sig, "A11 variable free in the consequent", (1,), "A11"))

    bad_r7 = Derivation("R7", parse_sequent("ex x P(x) => P(x)"), (a1("P(x)"),),
                        Inst(A=parse_formula("P(x)"), B=parse_formula("P(x)"), x="x"))
    d = r2(bad_r7, a2("ex x P(x)"))
    out.append(Entry("bad_r7", d, p1, "R7 variable free in the consequent", (0,), "R7"))

    prem = r9(r3b(a1("ex x P(x) & P(x)")), "")
    bad_r8 = Derivation("R8", parse_sequent("P(x) => (P(x) -> P(x))"), (prem,),
                        Inst(A=parse_formula("(P(x) -> P(x))"), B=parse_formula("P(x)"), x="x"))
    out.append(Entry("bad_r8", bad_r8, p1, "R8 variable free in the consequent", (), "R8"))

    bad_r9 = Derivation("R9", parse_sequent("P(x) => all x (Q(x) -> Q(x))"),
                        (r3b(a1("P(x) & Q(x)")),),
                        Inst(A=parse_formula("P(x)"), B=parse_formula("Q(x)"),
                             C=parse_formula("Q(x)"), xs=("x",)))
    d = r1(a1("P(x)"), bad_r9)
    out.append(Entry("bad_r9", d, p1, "R9 quantifies a variable free in A", (1,), "R9"))
    return out


def write_corpus(directory, negatives_directory=None) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for e in corpus():
        path = directory / f"{e.name}.bqc"
        path.write_text(f"# {e.note}\n" + dump_proof(e.derivation, e.signature), encoding="utf-8")
        paths.append(path)
    if negatives_directory is not None:
        neg = Path(negatives_directory)
        neg.mkdir(parents=True, exist_ok=True)
        for e in negative_corpus():
            path = neg / f"{e.name}.bqc"
            where = ".".join(map(str, e.bad_path)) or "root"
            header = f"# {e.note}; rejected at {where} ({e.bad_rule})\n"
            path.write_text(header + dump_proof(e.derivation, e.signature), encoding="utf-8")
            paths.append(path)
    return paths


__all__ = ["Entry", "corpus", "negative_corpus", "write_corpus"]
