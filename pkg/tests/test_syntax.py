import pytest
from hypothesis import given, settings, strategies as st

from bqc_realizer.syntax import (
    AllImp, And, Atom, Bot, Exists, Num, Or, ParseError, Sequent, Top, Var, alpha_equivalent,
    constants, free_vars, fresh_name, has_top, is_admissible, is_closed, parse_formula,
    parse_sequent, parse_term, predicates, rank, render, render_sequent, substitute,
)

NAMES = ["x", "y", "z", "u"]
SIG = {"P": 1, "Q": 2, "R": 0}

terms = st.one_of(st.sampled_from(NAMES).map(Var), st.integers(0, 9).map(Num))
atoms = st.one_of(
    st.builds(lambda t: Atom("P", (t,)), terms),
    st.builds(lambda a, b: Atom("Q", (a, b)), terms, terms),
    st.just(Atom("R")), st.just(Top()), st.just(Bot()),
)


def _extend(sub):
    return st.one_of(
        st.builds(And, sub, sub), st.builds(Or, sub, sub),
        st.builds(Exists, st.sampled_from(NAMES), sub),
        st.builds(AllImp, st.lists(st.sampled_from(NAMES), max_size=3, unique=True).map(tuple),
                  sub, sub),
    )


formulas = st.recursive(atoms, _extend, max_leaves=16)


def x_(s):
    return parse_formula(s)


# -- parsing ----------------------------------------------------------------

def test_parse_examples():
    assert parse_formula("top") == Top()
    assert parse_formula("all x (P(x) -> ex y Q(x,y))") == AllImp(
        ("x",), Atom("P", (Var("x"),)), Exists("y", Atom("Q", (Var("x"), Var("y")))))


def test_precedence_and_grouping():
    assert x_("R | R & top") == Or(Atom("R"), And(Atom("R"), Top()))
    assert x_("R & R & bot") == And(And(Atom("R"), Atom("R")), Bot())
    assert x_("(R | R) & top") == And(Or(Atom("R"), Atom("R")), Top())
    assert x_("(R -> bot)") == AllImp((), Atom("R"), Bot())
    assert x_("ex x P(x) & R") == And(Exists("x", Atom("P", (Var("x"),))), Atom("R"))


def test_sequent_and_term():
    s = parse_sequent("P(x) & top => ex y P(y)")
    assert s == Sequent(And(Atom("P", (Var("x"),)), Top()), Exists("y", Atom("P", (Var("y"),))))
    assert parse_term("7") == Num(7)
    assert parse_term("w") == Var("w")


@pytest.mark.parametrize("text", [
    "P(x", "all x P(x)", "P(x) -> Q(x)", "ex (P(x))", "top &", "all x x (P(x) -> R)", "bot(x)",
])
def test_parse_errors(text):
    with pytest.raises(ParseError) as err:
        parse_formula(text)
    assert err.value.line >= 1 and err.value.column >= 1


def test_parse_error_position_and_expected():
    with pytest.raises(ParseError) as err:
        parse_formula("P(x) &\n  | R")
    assert (err.value.line, err.value.column) == (2, 3)
    assert err.value.expected


def test_signature_checks():
    assert parse_formula("Q(x, 3)", SIG) == Atom("Q", (Var("x"), Num(3)))
    with pytest.raises(ParseError):
        parse_formula("Q(x)", SIG)
    with pytest.raises(ParseError):
        parse_formula("S(x)", SIG)
    with pytest.raises(ParseError):
        parse_formula("P(x) & P(x, y)")  # inconsistent use without a signature


@settings(max_examples=500)
@given(formulas)
def test_render_parse_roundtrip(f):
    assert parse_formula(render(f)) == f


def test_render_sequent():
    assert render_sequent(parse_sequent("P(x)=>top")) == "P(x) => top"


# -- variables --------------------------------------------------------------

def test_free_vars_examples():
    assert free_vars(Top()) == set()
    assert free_vars(x_("all x (P(x) -> Q(x,y))")) == {"y"}
    assert free_vars(x_("ex x P(x) & P(x)")) == {"x"}


def test_admissibility_examples():
    assert is_admissible([], parse_sequent("P(3) => top"))
    assert not is_admissible(["x"], parse_sequent("P(x) => Q(x,y)"))
    assert is_admissible(["x", "y", "z"], parse_sequent("P(x) => Q(x,y)"))


def test_fresh_name():
    assert fresh_name("y", {"y", "x"}) == "y1"
    assert fresh_name("y", {"y", "y1", "y2"}) == "y3"


def test_rank_and_misc():
    assert rank(x_("P(x) & ex y Q(x,y)")) == 0
    assert rank(x_("all x (P(x) -> R)")) == 1
    assert rank(x_("all x ((R -> R) -> R)")) == 2
    assert rank(x_("R | (R -> (R -> R))")) == 1  # consequents do not raise the rank
    assert has_top(x_("R & (top -> R)")) and not has_top(x_("R"))
    assert predicates(x_("P(x) & ex y Q(x,y)")) == {"P": 1, "Q": 2}
    assert constants(x_("P(3) | Q(x, 4)")) == {3, 4}
    assert is_closed(x_("ex x P(x)")) and not is_closed(x_("P(x)"))


# -- substitution -----------------------------------------------------------

def test_substitute_examples():
    assert substitute(x_("P(x)"), ["x"], [3]) == x_("P(3)")
    out = substitute(x_("ex y Q(x,y)"), ["x"], ["y"])
    assert out == x_("ex y1 Q(y,y1)")
    assert alpha_equivalent(out, x_("ex z Q(y,z)"))


def test_substitute_respects_binders():
    f = x_("all x (P(x) -> Q(x,y)) & P(x)")
    assert substitute(f, ["x"], [5]) == x_("all x (P(x) -> Q(x,y)) & P(5)")
    g = substitute(x_("all y z (P(y) -> Q(x,z))"), ["x"], ["z"])
    assert free_vars(g) == {"z"}
    assert alpha_equivalent(g, x_("all y w (P(y) -> Q(z,w))"))


def test_substitute_is_simultaneous():
    assert substitute(x_("Q(x,y)"), ["x", "y"], ["y", "x"]) == x_("Q(y,x)")


def test_substitute_length_mismatch():
    with pytest.raises(ValueError):
        substitute(x_("P(x)"), ["x", "y"], [1])


@settings(max_examples=100)
@given(formulas)
def test_identity_substitution_is_alpha_equivalent(f):
    assert alpha_equivalent(substitute(f, ["x"], ["x"]), f)


@given(formulas, st.integers(0, 9), st.integers(0, 9))
def test_closed_substitutions_compose(f, k, m):
    one = substitute(substitute(f, ["x"], [k]), ["y"], [m])
    assert one == substitute(f, ["x", "y"], [k, m])


@given(formulas, st.lists(st.sampled_from(NAMES), unique=True, max_size=3))
def test_numeral_substitution_removes_variables(f, xs):
    g = substitute(f, xs, list(range(len(xs))))
    assert free_vars(g) == free_vars(f) - set(xs)


@given(formulas, st.sampled_from(NAMES), st.sampled_from(NAMES))
def test_substitution_avoids_capture(f, x, y):
    g = substitute(f, [x], [y])
    expected = free_vars(f) - {x} | ({y} if x in free_vars(f) else set())
    assert free_vars(g) == expected


def _rename_bound(f, env=None):
    """Alpha-variant of ``f``: every binder ``v`` becomes ``vb``."""
    env = env or {}
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(Var(env.get(a.name, a.name)) if isinstance(a, Var) else a
                                  for a in f.args))
    if isinstance(f, (And, Or)):
        return type(f)(_rename_bound(f.left, env), _rename_bound(f.right, env))
    if isinstance(f, Exists):
        inner = {**env, f.var: f.var + "b"}
        return Exists(f.var + "b", _rename_bound(f.body, inner))
    if isinstance(f, AllImp):
        inner = {**env, **{v: v + "b" for v in f.vars}}
        return AllImp(tuple(v + "b" for v in f.vars), _rename_bound(f.ant, inner),
                      _rename_bound(f.cons, inner))
    return f


@given(formulas, st.sampled_from(NAMES), st.sampled_from(NAMES))
def test_alpha_respected_by_substitution(f, x, y):
    g = _rename_bound(f)
    assert alpha_equivalent(g, f)
    assert alpha_equivalent(substitute(g, [x], [y]), substitute(f, [x], [y]))


def test_alpha_equivalence_is_an_equivalence():
    a = x_("all x (P(x) -> ex y Q(x,y))")
    b = x_("all z (P(z) -> ex w Q(z,w))")
    c = x_("all u (P(u) -> ex x Q(u,x))")
    assert alpha_equivalent(a, a)
    assert alpha_equivalent(a, b) and alpha_equivalent(b, a)
    assert alpha_equivalent(b, c) and alpha_equivalent(a, c)
    assert not alpha_equivalent(a, x_("all x (P(x) -> ex y Q(y,x))"))
    assert not alpha_equivalent(x_("ex x P(y)"), x_("ex y P(y)"))


def test_allimp_requires_distinct_vars():
    with pytest.raises(ValueError):
        AllImp(("x", "x"), Top(), Top())
