"""Formulas of basic predicate logic with numeric constants.

Implication never appears on its own: it is always guarded by a (possibly
empty) block of universal quantifiers, ``AllImp(vars, ant, cons)``.

Concrete grammar::

    formula := disj
    disj    := conj ('|' conj)*
    conj    := unary ('&' unary)*
    unary   := 'bot' | 'top' | 'ex' IDENT unary
             | 'all' IDENT* '(' formula '->' formula ')'
             | '(' formula '->' formula ')'        # empty quantifier block
             | '(' formula ')'
             | IDENT [ '(' term (',' term)* ')' ]
    term    := IDENT | NUMBER
    sequent := formula '=>' formula
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

__all__ = [
    "Var", "Num", "LTerm", "Bot", "Top", "Atom", "And", "Or", "AllImp", "Exists", "Formula",
    "Sequent", "ParseError", "KEYWORDS",
    "parse_formula", "parse_sequent", "parse_term", "render", "render_sequent",
    "free_vars", "sequent_free_vars", "all_vars", "substitute", "substitute_sequent",
    "alpha_equivalent", "alpha_equivalent_sequent", "is_admissible", "rank",
    "predicates", "constants", "is_closed", "as_term", "has_top", "fresh_name",
]


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Num:
    k: int

    def __str__(self):
        return str(self.k)


LTerm = Union[Var, Num]


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple = ()


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class AllImp:
    """``all vars (ant -> cons)``; ``vars`` are names and may be empty."""
    vars: tuple
    ant: "Formula"
    cons: "Formula"

    def __post_init__(self):
        if len(set(self.vars)) != len(self.vars):
            raise ValueError(f"quantified variables must be distinct: {self.vars}")


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


Formula = Union[Bot, Top, Atom, And, Or, AllImp, Exists]


@dataclass(frozen=True)
class Sequent:
    lhs: Formula
    rhs: Formula

    def __str__(self):
        return render_sequent(self)


def as_term(t) -> LTerm:
    """Coerce ``int``/``str`` shorthands into terms."""
    if isinstance(t, (Var, Num)):
        return t
    if isinstance(t, int):
        return Num(t)
    if isinstance(t, str):
        return Var(t)
    raise TypeError(f"not a term: {t!r}")


# -- parsing ---------------------------------------------------------------

KEYWORDS = frozenset({"bot", "top", "all", "ex"})


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int, expected=()):
        self.line = line
        self.column = column
        self.expected = frozenset(expected)
        self.message = message
        exp = f" (expected one of: {', '.join(sorted(self.expected))})" if self.expected else ""
        super().__init__(f"line {line}, column {column}: {message}{exp}")


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<op>->|=>|[&|(),]))")


@dataclass
class _Tok:
    kind: str  # num, ident, op, eof
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    line_starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def where(p):
        import bisect
        ln = bisect.bisect_right(line_starts, p) - 1
        return ln + 1, p - line_starts[ln] + 1

    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            toks.append(_Tok("eof", "", *where(pos)))
            return toks
        m = _TOKEN.match(text, pos)
        if not m:
            ln, col = where(pos)
            raise ParseError(f"unexpected character {text[pos]!r}", ln, col)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append(_Tok(kind, m.group(kind), *where(start)))
        pos = m.end()


class _Parser:
    def __init__(self, text: str, signature: Mapping[str, int] | None, arities: dict | None = None):
        self.toks = _tokenize(text)
        self.i = 0
        self.signature = signature
        self.arities = {} if arities is None else arities

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def fail(self, expected, tok=None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ParseError(f"unexpected {found}", tok.line, tok.col, expected)

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            self.fail({repr(text)})

    def ident(self, what="identifier") -> str:
        tok = self.tok
        if tok.kind != "ident" or tok.text in KEYWORDS:
            self.fail({what})
        self.i += 1
        return tok.text

    def end(self):
        if self.tok.kind != "eof":
            self.fail({"end of input", "'&'", "'|'"})

    def formula(self) -> Formula:
        f = self.conj()
        while self.accept("|"):
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.accept("&"):
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.tok
        if tok.kind == "ident":
            if tok.text == "bot":
                self.i += 1
                return Bot()
            if tok.text == "top":
                self.i += 1
                return Top()
            if tok.text == "ex":
                self.i += 1
                v = self.ident("variable")
                return Exists(v, self.unary())
            if tok.text == "all":
                self.i += 1
                vs = []
                while self.tok.kind == "ident":
                    tv = self.tok
                    name = self.ident("variable")
                    if name in vs:
                        raise ParseError(f"variable {name!r} quantified twice", tv.line, tv.col)
                    vs.append(name)
                if self.tok.kind != "op" or self.tok.text != "(":
                    self.fail({"variable", "'('"})
                self.i += 1
                ant = self.formula()
                self.expect("->")
                cons = self.formula()
                self.expect(")")
                return AllImp(tuple(vs), ant, cons)
            return self.atom()
        if self.accept("("):
            inner = self.formula()
            if self.accept("->"):
                cons = self.formula()
                self.expect(")")
                return AllImp((), inner, cons)
            if not self.accept(")"):
                self.fail({"'->'", "')'", "'&'", "'|'"})
            return inner
        self.fail({"bot", "top", "ex", "all", "predicate", "'('"})

    def atom(self) -> Atom:
        tok = self.tok
        name = self.ident("predicate")
        args = []
        if self.accept("("):
            args.append(self.term())
            while self.accept(","):
                args.append(self.term())
            self.expect(")")
        self.check_arity(name, len(args), tok)
        return Atom(name, tuple(args))

    def check_arity(self, name, n, tok):
        if self.signature is not None:
            if name not in self.signature:
                raise ParseError(f"undeclared predicate {name!r}", tok.line, tok.col)
            want = self.signature[name]
        else:
            want = self.arities.setdefault(name, n)
        if want != n:
            raise ParseError(f"predicate {name!r} has arity {want}, used with {n}", tok.line, tok.col)

    def term(self) -> LTerm:
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return Num(int(tok.text))
        return Var(self.ident("term"))


def parse_formula(text: str, signature: Mapping[str, int] | None = None) -> Formula:
    """Parse a formula.  With ``signature`` every predicate must be declared there;
    without one, each predicate must be used with a single arity."""
    p = _Parser(text, signature)
    f = p.formula()
    p.end()
    return f


def parse_sequent(text: str, signature: Mapping[str, int] | None = None) -> Sequent:
    p = _Parser(text, signature)
    lhs = p.formula()
    if not p.accept("=>"):
        p.fail({"'=>'", "'&'", "'|'"})
    rhs = p.formula()
    p.end()
    return Sequent(lhs, rhs)


def parse_term(text: str) -> LTerm:
    p = _Parser(text, None)
    t = p.term()
    p.end()
    return t


# -- rendering -------------------------------------------------------------

def render(f: Formula) -> str:
    if isinstance(f, Bot):
        return "bot"
    if isinstance(f, Top):
        return "top"
    if isinstance(f, Atom):
        if not f.args:
            return f.pred
        return f"{f.pred}({','.join(str(a) for a in f.args)})"
    if isinstance(f, And):
        left = render(f.left)
        if isinstance(f.left, Or):
            left = f"({left})"
        right = render(f.right)
        if isinstance(f.right, (And, Or)):
            right = f"({right})"
        return f"{left} & {right}"
    if isinstance(f, Or):
        right = render(f.right)
        if isinstance(f.right, Or):
            right = f"({right})"
        return f"{render(f.left)} | {right}"
    if isinstance(f, AllImp):
        head = f"all {' '.join(f.vars)} " if f.vars else ""
        return f"{head}({render(f.ant)} -> {render(f.cons)})"
    if isinstance(f, Exists):
        body = render(f.body)
        if isinstance(f.body, (And, Or)):
            body = f"({body})"
        return f"ex {f.var} {body}"
    raise TypeError(f"not a formula: {f!r}")


def render_sequent(s: Sequent) -> str:
    return f"{render(s.lhs)} => {render(s.rhs)}"


# -- variables -------------------------------------------------------------

def free_vars(f: Formula) -> frozenset:
    if isinstance(f, (Bot, Top)):
        return frozenset()
    if isinstance(f, Atom):
        return frozenset(a.name for a in f.args if isinstance(a, Var))
    if isinstance(f, (And, Or)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, AllImp):
        return (free_vars(f.ant) | free_vars(f.cons)) - set(f.vars)
    if isinstance(f, Exists):
        return free_vars(f.body) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def sequent_free_vars(s: Sequent) -> frozenset:
    return free_vars(s.lhs) | free_vars(s.rhs)


def all_vars(f: Formula) -> set:
    """Every variable name occurring in ``f``, free, bound or in a binder."""
    if isinstance(f, (Bot, Top)):
        return set()
    if isinstance(f, Atom):
        return {a.name for a in f.args if isinstance(a, Var)}
    if isinstance(f, (And, Or)):
        return all_vars(f.left) | all_vars(f.right)
    if isinstance(f, AllImp):
        return all_vars(f.ant) | all_vars(f.cons) | set(f.vars)
    return all_vars(f.body) | {f.var}


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    """``base`` followed by the smallest positive numeric suffix not in ``avoid``."""
    avoid = set(avoid)
    i = 1
    while f"{base}{i}" in avoid:
        i += 1
    return f"{base}{i}"


def substitute(f: Formula, xs: Sequence[str], ts: Sequence) -> Formula:
    """Simultaneous capture-avoiding substitution ``[ts/xs] f``.

    A bound variable is renamed only when it would capture a variable of a
    substituted term; the new name is the old one plus the smallest unused
    numeric suffix.
    """
    xs = [x.name if isinstance(x, Var) else x for x in xs]
    if len(xs) != len(ts):
        raise ValueError(f"substitution needs equal lengths, got {len(xs)} and {len(ts)}")
    if len(set(xs)) != len(xs):
        raise ValueError(f"substituted variables must be distinct: {xs}")
    mapping = {x: as_term(t) for x, t in zip(xs, ts)}
    avoid = all_vars(f) | set(xs) | {t.name for t in mapping.values() if isinstance(t, Var)}
    return _subst(f, mapping, avoid)


def _subst(f: Formula, mapping: dict, avoid: set) -> Formula:
    if not mapping or isinstance(f, (Bot, Top)):
        return f
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(mapping.get(a.name, a) if isinstance(a, Var) else a for a in f.args))
    if isinstance(f, And):
        return And(_subst(f.left, mapping, avoid), _subst(f.right, mapping, avoid))
    if isinstance(f, Or):
        return Or(_subst(f.left, mapping, avoid), _subst(f.right, mapping, avoid))
    if isinstance(f, AllImp):
        body_fv = free_vars(f.ant) | free_vars(f.cons)
        vs, inner = _binder(f.vars, body_fv, mapping, avoid)
        return AllImp(vs, _subst(f.ant, inner, avoid), _subst(f.cons, inner, avoid))
    if isinstance(f, Exists):
        vs, inner = _binder((f.var,), free_vars(f.body), mapping, avoid)
        return Exists(vs[0], _subst(f.body, inner, avoid))
    raise TypeError(f"not a formula: {f!r}")


def _binder(vs, body_fv, mapping, avoid):
    inner = {x: t for x, t in mapping.items() if x not in vs and x in body_fv}
    incoming = {t.name for t in inner.values() if isinstance(t, Var)}
    new_vs = []
    for v in vs:
        if v in incoming:
            nv = fresh_name(v, avoid)
            avoid.add(nv)
            inner[v] = Var(nv)
            new_vs.append(nv)
        else:
            new_vs.append(v)
    return tuple(new_vs), inner


def substitute_sequent(s: Sequent, xs: Sequence[str], ts: Sequence) -> Sequent:
    return Sequent(substitute(s.lhs, xs, ts), substitute(s.rhs, xs, ts))


def alpha_equivalent(a: Formula, b: Formula) -> bool:
    return _alpha(a, b, {}, {}, 0)


def _alpha(a, b, env_a, env_b, depth) -> bool:
    if type(a) is not type(b):
        return False
    if isinstance(a, (Bot, Top)):
        return True
    if isinstance(a, Atom):
        if a.pred != b.pred or len(a.args) != len(b.args):
            return False
        for s, t in zip(a.args, b.args):
            if isinstance(s, Num) or isinstance(t, Num):
                if s != t:
                    return False
                continue
            ls, lt = env_a.get(s.name), env_b.get(t.name)
            if ls != lt or (ls is None and s.name != t.name):
                return False
        return True
    if isinstance(a, (And, Or)):
        return (_alpha(a.left, b.left, env_a, env_b, depth)
                and _alpha(a.right, b.right, env_a, env_b, depth))
    if isinstance(a, AllImp):
        if len(a.vars) != len(b.vars):
            return False
        ea, eb = dict(env_a), dict(env_b)
        for k, (u, v) in enumerate(zip(a.vars, b.vars)):
            ea[u] = eb[v] = depth + k
        d = depth + len(a.vars)
        return _alpha(a.ant, b.ant, ea, eb, d) and _alpha(a.cons, b.cons, ea, eb, d)
    ea, eb = dict(env_a), dict(env_b)
    ea[a.var] = eb[b.var] = depth
    return _alpha(a.body, b.body, ea, eb, depth + 1)


def alpha_equivalent_sequent(s: Sequent, t: Sequent) -> bool:
    return alpha_equivalent(s.lhs, t.lhs) and alpha_equivalent(s.rhs, t.rhs)


def is_admissible(xs: Sequence[str], s: Sequent) -> bool:
    """True when ``xs`` is duplicate-free and covers every free variable of ``s``."""
    xs = list(xs)
    return len(set(xs)) == len(xs) and sequent_free_vars(s) <= set(xs)


def rank(f: Formula) -> int:
    """0 for implication-free formulas, else the max of ``1 + rank(ant)`` over
    the guarded implications occurring in ``f``."""
    if isinstance(f, (Bot, Top, Atom)):
        return 0
    if isinstance(f, (And, Or)):
        return max(rank(f.left), rank(f.right))
    if isinstance(f, AllImp):
        return max(1 + rank(f.ant), rank(f.cons))
    return rank(f.body)


def has_top(f: Formula) -> bool:
    if isinstance(f, Top):
        return True
    if isinstance(f, (Bot, Atom)):
        return False
    if isinstance(f, (And, Or)):
        return has_top(f.left) or has_top(f.right)
    if isinstance(f, AllImp):
        return has_top(f.ant) or has_top(f.cons)
    return has_top(f.body)


def predicates(f: Formula) -> dict:
    """Predicate symbols of ``f`` with their arities."""
    out: dict = {}

    def go(f):
        if isinstance(f, Atom):
            out[f.pred] = len(f.args)
        elif isinstance(f, (And, Or)):
            go(f.left), go(f.right)
        elif isinstance(f, AllImp):
            go(f.ant), go(f.cons)
        elif isinstance(f, Exists):
            go(f.body)

    go(f)
    return out


def constants(f: Formula) -> set:
    if isinstance(f, Atom):
        return {a.k for a in f.args if isinstance(a, Num)}
    if isinstance(f, (And, Or)):
        return constants(f.left) | constants(f.right)
    if isinstance(f, AllImp):
        return constants(f.ant) | constants(f.cons)
    if isinstance(f, Exists):
        return constants(f.body)
    return set()


def is_closed(f: Formula) -> bool:
    return not free_vars(f)
