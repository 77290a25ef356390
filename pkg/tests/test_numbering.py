import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bqc_realizer.numbering import (
    Arg, Build, Compose, Const, DecodeError, Dummy, Fst, IfZFst, MakeConst, Pair, Perm,
    Smn, Snd, Undefined, Value, apply_builder, build_compose, build_cond, build_const,
    build_dummy, build_perm, build_proj, build_smn, builder_index, code_pair, code_unpair,
    HOLE, constant_in_last, decode, encode, evaluate, in_index_set, max_arg, pair, pair_array,
    render_term, simplify, substitute_args, symbolic_component, symbolic_in_last, try_decode,
    unpair, unpair_array,
)

import oracle

nats = st.integers(min_value=0, max_value=10 ** 12)

leaves = st.one_of(st.builds(Const, st.integers(0, 10 ** 6)), st.builds(Arg, st.integers(1, 5)))
terms = st.recursive(
    leaves,
    lambda sub: st.one_of(
        st.builds(Pair, sub, sub), st.builds(Fst, sub), st.builds(Snd, sub),
        st.builds(IfZFst, sub, sub, sub),
        st.builds(lambda a, b: Build(Smn(1, 1), (a, b)), sub, sub),
        st.builds(lambda a: Build(Dummy(2), (a,)), sub),
    ),
    max_leaves=12,
)


# -- pairing ---------------------------------------------------------------

def test_pair_examples():
    assert pair(0, 0) == 0
    assert pair(1, 2) == 8
    assert unpair(0) == (0, 0)
    assert unpair(8) == (1, 2)


def test_pair_matches_diagonal_enumeration():
    table = oracle.diagonal_table(200)
    assert all(pair(a, b) == n for (a, b), n in table.items())
    assert all(unpair(n) == ab for ab, n in table.items())


@given(nats, nats)
def test_pair_roundtrip_large(a, b):
    assert unpair(pair(a, b)) == (a, b)
    assert oracle.ref_unpair_newton(pair(a, b)) == (a, b)


def test_pair_rejects_negatives():
    with pytest.raises(ValueError):
        pair(-1, 0)
    with pytest.raises(ValueError):
        unpair(-3)


def test_array_kernels_agree_with_exact():
    rng = np.random.default_rng(3)
    a = rng.integers(0, 1 << 20, 5000)
    b = rng.integers(0, 1 << 20, 5000)
    n = pair_array(a, b)
    assert [int(x) for x in n[:200]] == [pair(int(x), int(y)) for x, y in zip(a[:200], b[:200])]
    ua, ub = unpair_array(n)
    assert np.array_equal(ua, a) and np.array_equal(ub, b)


def test_array_kernels_refuse_inexact_range():
    with pytest.raises(OverflowError):
        pair_array([1 << 25], [1 << 25])
    with pytest.raises(OverflowError):
        unpair_array([1 << 50])


def test_float_sweep_small():
    assert oracle.roundtrip_sweep(300) == 0


# -- code layout ------------------------------------------------------------

@given(nats, nats)
def test_code_pair_matches_bitstring_reference(a, b):
    c = code_pair(a, b)
    assert c == oracle.ref_code_pair(a, b)
    assert code_unpair(c) == (a, b)


def test_code_unpair_rejects_malformed():
    bad = [n for n in range(2000) if _ref_fails(n)]
    assert bad, "some small numbers are not code pairs"
    for n in bad:
        with pytest.raises(DecodeError):
            code_unpair(n)


def _ref_fails(n):
    try:
        oracle.ref_code_unpair(n)
    except oracle.NotACode:
        return True
    return False


# -- codec ------------------------------------------------------------------

def test_codec_examples():
    assert encode(Const(0)) == 0
    assert decode(encode(Arg(1))) == Arg(1)


@settings(max_examples=300)
@given(terms)
def test_encode_decode_roundtrip(t):
    e = encode(t)
    assert decode(e) == t
    assert oracle.ref_decode(e) == t


def test_decode_encode_on_small_numbers():
    for e in range(20000):
        t = try_decode(e)
        ref = None
        try:
            ref = oracle.ref_decode(e)
        except oracle.NotACode:
            pass
        assert t == ref
        if t is not None:
            assert encode(t) == e


def test_encode_validates():
    with pytest.raises(ValueError):
        encode(Arg(0))
    with pytest.raises(ValueError):
        encode(Build(Perm((1, 1)), (Const(0),)))
    with pytest.raises(ValueError):
        encode(Build(Smn(1, 0), (Const(0),)))


def test_render_term():
    assert render_term(Pair(Arg(1), Const(4))) == "(pair (arg 1) (const 4))"
    assert render_term(Build(Smn(1, 2), (Arg(1), Const(0)))) == "(build smn/1,2 (arg 1) (const 0))"


# -- evaluation -------------------------------------------------------------

def test_eval_examples():
    assert evaluate(encode(Arg(3)), [5, 7, 9]) == Value(9)
    assert evaluate(encode(Pair(Arg(1), Const(4))), [2]) == Value(pair(2, 4))


def test_eval_decode_failures():
    assert evaluate(encode(Arg(2)), [1]).reason == "decode-failure"
    assert isinstance(evaluate(6, []), Undefined)
    # a builder fed a number that is not an index of the right arity
    t = Build(MakeConst(), (Const(3),))
    assert evaluate(encode(t), []) == Value(build_const(3))
    bad = Build(Dummy(0), (Const(encode(Arg(1))),))
    assert evaluate(encode(bad), []).reason == "decode-failure"


def test_eval_against_oracle():
    rng = random.Random(11)
    for _ in range(2000):
        n = rng.randrange(4)
        t = oracle.random_term(rng, n, depth=5)
        xs = [rng.randrange(1000) for _ in range(n + rng.randrange(2))]
        got = evaluate(encode(t), xs)
        assert got == Value(oracle.run(t, xs))


def test_fuel_monotone():
    t = encode(Pair(Pair(Arg(1), Arg(1)), Fst(Arg(1))))
    outcomes = [evaluate(t, [5], fuel) for fuel in range(0, 8)]
    assert outcomes[0].reason == "fuel-exhausted"
    first = next(i for i, o in enumerate(outcomes) if isinstance(o, Value))
    assert all(o == outcomes[-1] for o in outcomes[first:])


def test_arity_monotone():
    e = encode(Pair(Arg(2), Arg(1)))
    assert not in_index_set(e, 1)
    assert all(in_index_set(e, n) for n in range(2, 6))
    assert evaluate(e, [1, 2]) == evaluate(e, [1, 2, 99, 100])


# -- builders ---------------------------------------------------------------

E_ID = encode(Arg(1))
E_SWAP = encode(Pair(Snd(Arg(1)), Fst(Arg(1))))


def test_builder_examples():
    assert evaluate(build_proj(1, 1), [42]) == Value(42)
    assert evaluate(build_proj(2, 3), [4, 5, 6]) == Value(5)
    ident = build_compose(E_ID, [E_ID], [1])
    assert all(evaluate(ident, [x]) == Value(x) for x in range(100))
    assert evaluate(build_compose(E_SWAP, [E_ID], [1]), [pair(3, 4)]) == Value(pair(4, 3))
    assert evaluate(build_const(0), []) == Value(0)
    assert evaluate(build_const(7), [1, 2, 3]) == Value(7)
    c = build_cond(encode(Const(1)), encode(Const(2)), 0)
    assert evaluate(c, [pair(0, 5)]) == Value(1)
    assert evaluate(c, [pair(3, 5)]) == Value(2)
    assert evaluate(build_perm(E_ID, (2, 1)), [4, 9]) == Value(9)
    assert evaluate(build_dummy(build_const(5), 0), [99]) == Value(5)
    assert evaluate(build_dummy(build_proj(1, 1), 1), [3, 8]) == Value(3)
    assert evaluate(build_smn(encode(Arg(2)), [7], 1), [3]) == Value(7)


def test_builders_check_arity():
    with pytest.raises(DecodeError):
        build_dummy(encode(Arg(2)), 1)
    with pytest.raises(DecodeError):
        build_smn(encode(Arg(3)), [1], 1)
    with pytest.raises(ValueError):
        build_perm(E_ID, (1, 3))
    with pytest.raises(ValueError):
        build_proj(3, 2)


def test_result_arities():
    assert in_index_set(build_const(9), 0)
    assert in_index_set(build_compose(E_SWAP, [encode(Arg(3))], [3]), 3)
    assert in_index_set(build_smn(encode(Pair(Arg(1), Arg(3))), [5, 6], 1), 1)


def test_builder_index_matches_direct_call():
    op = Compose(1, (2,))
    inner = encode(Pair(Arg(2), Arg(1)))
    via_code = evaluate(builder_index(op), [E_SWAP, inner])
    assert via_code == Value(apply_builder(op, [E_SWAP, inner]))


def test_simplify_keeps_meaning():
    rng = random.Random(5)
    for _ in range(1000):
        t = oracle.random_term(rng, 2, depth=5)
        xs = [rng.randrange(500), rng.randrange(500)]
        assert oracle.run(simplify(t), xs) == oracle.run(t, xs)
        assert max_arg(simplify(t)) <= max_arg(t)


def test_simplify_keeps_builder_failures():
    # dropping the right component would hide the failing builder
    t = Fst(Pair(Const(1), Build(Dummy(0), (Const(encode(Arg(1))),))))
    assert simplify(t) == t


# -- symbolic evaluation ------------------------------------------------------

def test_constant_in_last():
    assert constant_in_last(encode(Const(4)), [1]) == 4
    assert constant_in_last(encode(Pair(Arg(1), Const(2))), [3]) == pair(3, 2)
    assert constant_in_last(encode(Arg(2)), [3]) is None
    assert constant_in_last(encode(Fst(Pair(Const(5), Arg(1)))), []) == 5


def test_constant_in_last_agrees_with_evaluation():
    rng = random.Random(9)
    settled = 0
    for _ in range(2000):
        t = oracle.random_term(rng, 2, depth=4)
        a = rng.randrange(50)
        v = constant_in_last(encode(t), [a])
        if v is None:
            continue
        settled += 1
        assert {oracle.run(t, [a, s]) for s in (0, 1, 17, 10 ** 6)} == {v}
    assert settled > 100


def test_symbolic_value_matches_every_instance():
    rng = random.Random(10)
    open_terms = 0
    for _ in range(2000):
        t = oracle.random_term(rng, 2, depth=4)
        a = rng.randrange(50)
        v = symbolic_in_last(encode(t), [a])
        if v is None or isinstance(v, int):
            continue
        open_terms += 1
        assert max_arg(v) == HOLE
        for s in (0, 3, 17, 10 ** 6):
            closed = substitute_args(v, {HOLE: Const(s)})
            assert oracle.run(closed, []) == oracle.run(t, [a, s])
    assert open_terms > 100


def test_symbolic_component():
    v = symbolic_in_last(encode(Pair(Const(4), Arg(1))), [])
    assert symbolic_component(v, 0) == 4
    assert symbolic_component(v, 1) == Arg(HOLE)
    assert symbolic_component(pair(2, 9), 1) == 9
