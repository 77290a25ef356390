"""A Gödel-numbered language of total number-theoretic functions.

Every natural number is either the code of a program term or fails to
decode.  A code ``e`` is an index of an ``n``-ary function (``e in I_n``)
when it decodes and the term mentions no argument beyond ``n``.  The
language has no application primitive, so every program terminates; the
``Build`` node is how programs compute *new* codes at run time
(composition, constants, conditionals, permutations, dummy arguments and
s-m-n specialisation).

Two pairings are in play:

* ``pair``/``unpair`` is the Cantor bijection.  It is the value-level
  pairing that realizers are built from, and what ``Pair``/``Fst``/``Snd``
  compute.
* ``code_pair``/``code_unpair`` is a length-prefixed injection used only to
  lay out codes.  Its bit length is additive in its arguments, so the code
  of a deep term stays proportional to the term size.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence, Union

import numba
import numpy as np

__all__ = [
    "pair", "unpair", "fst", "snd", "pair_fast", "unpair_fast", "pair_array", "unpair_array",
    "code_pair", "code_unpair", "DecodeError",
    "Const", "Arg", "Pair", "Fst", "Snd", "IfZFst", "Build",
    "Compose", "MakeConst", "Cond", "Perm", "Dummy", "Smn",
    "encode", "decode", "try_decode", "max_arg", "in_index_set", "term_size", "render_term",
    "Value", "Undefined", "DECODE_FAILURE", "FUEL_EXHAUSTED", "DEFAULT_FUEL",
    "evaluate", "eval_term", "apply_builder", "builder_index",
    "build_proj", "build_compose", "build_const", "build_cond", "build_perm",
    "build_dummy", "build_smn", "substitute_args", "simplify", "constant_in_last",
    "symbolic_in_last", "symbolic_component", "HOLE",
]


# -- Cantor pairing --------------------------------------------------------

def pair(a: int, b: int) -> int:
    """Cantor pairing ``c(a, b) = (a+b)(a+b+1)/2 + b``."""
    if a < 0 or b < 0:
        raise ValueError("pair is defined on naturals only")
    s = a + b
    return s * (s + 1) // 2 + b


def unpair(n: int) -> tuple[int, int]:
    if n < 0:
        raise ValueError("unpair is defined on naturals only")
    w = (math.isqrt(8 * n + 1) - 1) // 2
    b = n - w * (w + 1) // 2
    return w - b, b


def fst(n: int) -> int:
    return unpair(n)[0]


def snd(n: int) -> int:
    return unpair(n)[1]


# Float kernels for bulk work.  Exact while 8n+1 < 2**53: sqrt is correctly
# rounded, so floor() only needs care at perfect squares, where it is exact.
_FAST_LIMIT = 1 << 49


@numba.njit(cache=True, fastmath=True)
def pair_fast(a: float, b: float) -> float:
    s = a + b
    return s * (s + 1.0) * 0.5 + b


@numba.njit(cache=True, fastmath=True)
def unpair_fast(n: float) -> tuple:
    w = math.floor((math.sqrt(8.0 * n + 1.0) - 1.0) * 0.5)
    b = n - w * (w + 1.0) * 0.5
    return w - b, b


@numba.njit(cache=True)
def _unpair_into(ns, out_a, out_b):
    for i in range(ns.shape[0]):
        a, b = unpair_fast(np.float64(ns[i]))
        out_a[i] = np.int64(a)
        out_b[i] = np.int64(b)


def pair_array(a, b) -> np.ndarray:
    """Vectorised ``pair`` for int64 arrays whose results stay below 2**49."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    s = a + b
    out = s * (s + 1) // 2 + b
    if out.size and (out.min() < 0 or out.max() >= _FAST_LIMIT):
        raise OverflowError("pair_array result outside the exact float range")
    return out


def unpair_array(ns) -> tuple[np.ndarray, np.ndarray]:
    ns = np.ascontiguousarray(ns, dtype=np.int64).ravel()
    if ns.size and (ns.min() < 0 or ns.max() >= _FAST_LIMIT):
        raise OverflowError("unpair_array input outside the exact float range")
    out_a = np.empty_like(ns)
    out_b = np.empty_like(ns)
    _unpair_into(ns, out_a, out_b)
    return out_a, out_b


# -- code layout pairing ---------------------------------------------------

class DecodeError(ValueError):
    """A number is not a code, or not a code of the required arity."""


def _bits(n: int) -> tuple[int, int]:
    # bijective N -> bit strings, as (value, length)
    m = n + 1
    length = m.bit_length() - 1
    return m - (1 << length), length


def _from_bits(value: int, length: int) -> int:
    return ((1 << length) | value) - 1


def code_pair(a: int, b: int) -> int:
    """Injective pairing with ``len(code_pair(a, b)) ~ len(a) + len(b) + 2 log len(a)``.

    Layout: Elias-gamma(len(a)+1), then the bits of ``a``, then the bits of ``b``.
    """
    va, la = _bits(a)
    vb, lb = _bits(b)
    g = la + 1
    gl = g.bit_length()
    value = (((g << la) | va) << lb) | vb
    return _from_bits(value, 2 * gl - 1 + la + lb)


def code_unpair(n: int) -> tuple[int, int]:
    value, total = _bits(n)
    if value == 0:
        raise DecodeError(f"{n} is not a code pair")
    zeros = total - value.bit_length()
    head = 2 * zeros + 1
    if head > total:
        raise DecodeError(f"{n} is not a code pair")
    rest_len = total - head
    la = (value >> rest_len) - 1
    if la > rest_len:
        raise DecodeError(f"{n} is not a code pair")
    rest = value & ((1 << rest_len) - 1)
    lb = rest_len - la
    va = rest >> lb
    vb = rest & ((1 << lb) - 1)
    return _from_bits(va, la), _from_bits(vb, lb)


def _encode_list(xs: Sequence[int]) -> int:
    if not xs:
        return 0
    if len(xs) == 1:
        return xs[0]
    return code_pair(xs[0], _encode_list(xs[1:]))


def _decode_list(n: int, length: int) -> list[int]:
    if length == 0:
        if n != 0:
            raise DecodeError("non-empty payload for an empty list")
        return []
    out = []
    while length > 1:
        head, n = code_unpair(n)
        out.append(head)
        length -= 1
    out.append(n)
    return out


# -- program terms ---------------------------------------------------------

@dataclass(frozen=True)
class Const:
    k: int


@dataclass(frozen=True)
class Arg:
    i: int  # 1-based


@dataclass(frozen=True)
class Pair:
    left: "ProgTerm"
    right: "ProgTerm"


@dataclass(frozen=True)
class Fst:
    term: "ProgTerm"


@dataclass(frozen=True)
class Snd:
    term: "ProgTerm"


@dataclass(frozen=True)
class IfZFst:
    """``then`` when ``fst(scrut) == 0``, else ``orelse``."""
    scrut: "ProgTerm"
    then: "ProgTerm"
    orelse: "ProgTerm"


@dataclass(frozen=True)
class Build:
    op: "Builder"
    args: tuple


ProgTerm = Union[Const, Arg, Pair, Fst, Snd, IfZFst, Build]


# builder tags; each fixes its argument count and arity parameters

@dataclass(frozen=True)
class Compose:
    """``(e, e1..en) -> index of x -> e(e1(x), ..., en(x))`` with ``ei in I_{ms[i]}``."""
    n: int
    ms: tuple

    @property
    def arg_count(self) -> int:
        return self.n + 1


@dataclass(frozen=True)
class MakeConst:
    arg_count = 1


@dataclass(frozen=True)
class Cond:
    n: int
    arg_count = 2


@dataclass(frozen=True)
class Perm:
    perm: tuple  # perm[j-1] = p(j), a permutation of 1..n

    @property
    def n(self) -> int:
        return len(self.perm)

    arg_count = 1


@dataclass(frozen=True)
class Dummy:
    n: int
    arg_count = 1


@dataclass(frozen=True)
class Smn:
    m: int
    n: int

    @property
    def arg_count(self) -> int:
        return self.m + 1


Builder = Union[Compose, MakeConst, Cond, Perm, Dummy, Smn]

_TAGS = 7


def _is_perm(p: Sequence[int]) -> bool:
    return sorted(p) == list(range(1, len(p) + 1))


def _validate_op(op: Builder) -> None:
    if isinstance(op, Compose):
        if op.n < 0 or len(op.ms) != op.n or any(m < 0 for m in op.ms):
            raise ValueError(f"malformed composition tag {op}")
    elif isinstance(op, Perm):
        if not _is_perm(op.perm):
            raise ValueError(f"{op.perm} is not a permutation of 1..{len(op.perm)}")
    elif isinstance(op, (Cond, Dummy)):
        if op.n < 0:
            raise ValueError(f"negative arity in {op}")
    elif isinstance(op, Smn):
        if op.m < 0 or op.n < 0:
            raise ValueError(f"negative arity in {op}")


def _encode_op(op: Builder) -> int:
    if isinstance(op, Compose):
        return code_pair(0, code_pair(op.n, _encode_list(list(op.ms))))
    if isinstance(op, MakeConst):
        return code_pair(1, 0)
    if isinstance(op, Cond):
        return code_pair(2, op.n)
    if isinstance(op, Perm):
        return code_pair(3, code_pair(op.n, _encode_list([p - 1 for p in op.perm])))
    if isinstance(op, Dummy):
        return code_pair(4, op.n)
    if isinstance(op, Smn):
        return code_pair(5, code_pair(op.m, op.n))
    raise TypeError(f"not a builder: {op!r}")


def _decode_op(n: int) -> Builder:
    kind, params = code_unpair(n)
    if kind == 0:
        arity, rest = code_unpair(params)
        return Compose(arity, tuple(_decode_list(rest, arity)))
    if kind == 1:
        if params != 0:
            raise DecodeError("constant builder takes no parameters")
        return MakeConst()
    if kind == 2:
        return Cond(params)
    if kind == 3:
        arity, rest = code_unpair(params)
        perm = tuple(p + 1 for p in _decode_list(rest, arity))
        if not _is_perm(perm):
            raise DecodeError(f"{perm} is not a permutation")
        return Perm(perm)
    if kind == 4:
        return Dummy(params)
    if kind == 5:
        m, arity = code_unpair(params)
        return Smn(m, arity)
    raise DecodeError(f"unknown builder kind {kind}")


def encode(t: ProgTerm) -> int:
    """Code of a term: ``7 * payload + tag`` with tags 0..6 in constructor order."""
    memo: dict[int, int] = {}

    def enc(t):
        key = id(t)
        if key in memo:
            return memo[key]
        if isinstance(t, Const):
            if t.k < 0:
                raise ValueError("constants are naturals")
            c = _TAGS * t.k
        elif isinstance(t, Arg):
            if t.i < 1:
                raise ValueError("argument positions start at 1")
            c = _TAGS * (t.i - 1) + 1
        elif isinstance(t, Pair):
            c = _TAGS * code_pair(enc(t.left), enc(t.right)) + 2
        elif isinstance(t, Fst):
            c = _TAGS * enc(t.term) + 3
        elif isinstance(t, Snd):
            c = _TAGS * enc(t.term) + 4
        elif isinstance(t, IfZFst):
            c = _TAGS * code_pair(enc(t.scrut), code_pair(enc(t.then), enc(t.orelse))) + 5
        elif isinstance(t, Build):
            _validate_op(t.op)
            if len(t.args) != t.op.arg_count:
                raise ValueError(f"{t.op} takes {t.op.arg_count} arguments, got {len(t.args)}")
            payload = code_pair(_encode_op(t.op), _encode_list([enc(a) for a in t.args]))
            c = _TAGS * payload + 6
        else:
            raise TypeError(f"not a program term: {t!r}")
        memo[key] = c
        return c

    return enc(t)


@lru_cache(maxsize=1 << 16)
def decode(e: int) -> ProgTerm:
    """Inverse of ``encode``; raises ``DecodeError`` on numbers that are not codes."""
    if e < 0:
        raise DecodeError("codes are naturals")
    payload, tag = divmod(e, _TAGS)
    if tag == 0:
        return Const(payload)
    if tag == 1:
        return Arg(payload + 1)
    if tag == 2:
        left, right = code_unpair(payload)
        return Pair(decode(left), decode(right))
    if tag == 3:
        return Fst(decode(payload))
    if tag == 4:
        return Snd(decode(payload))
    if tag == 5:
        scrut, rest = code_unpair(payload)
        then, orelse = code_unpair(rest)
        return IfZFst(decode(scrut), decode(then), decode(orelse))
    op_code, args_code = code_unpair(payload)
    op = _decode_op(op_code)
    return Build(op, tuple(decode(a) for a in _decode_list(args_code, op.arg_count)))


def try_decode(e: int) -> ProgTerm | None:
    try:
        return decode(e)
    except DecodeError:
        return None


def max_arg(t: ProgTerm) -> int:
    """Largest argument position mentioned anywhere in ``t`` (0 if none)."""
    if isinstance(t, Const):
        return 0
    if isinstance(t, Arg):
        return t.i
    if isinstance(t, Pair):
        return max(max_arg(t.left), max_arg(t.right))
    if isinstance(t, (Fst, Snd)):
        return max_arg(t.term)
    if isinstance(t, IfZFst):
        return max(max_arg(t.scrut), max_arg(t.then), max_arg(t.orelse))
    return max((max_arg(a) for a in t.args), default=0)


_max_arg_of_code = lru_cache(maxsize=1 << 16)(lambda e: max_arg(decode(e)))


def in_index_set(e: int, n: int) -> bool:
    """``e in I_n``: ``e`` decodes and uses no argument past position ``n``."""
    try:
        return _max_arg_of_code(e) <= n
    except DecodeError:
        return False


def term_size(t: ProgTerm) -> int:
    if isinstance(t, (Const, Arg)):
        return 1
    if isinstance(t, Pair):
        return 1 + term_size(t.left) + term_size(t.right)
    if isinstance(t, (Fst, Snd)):
        return 1 + term_size(t.term)
    if isinstance(t, IfZFst):
        return 1 + term_size(t.scrut) + term_size(t.then) + term_size(t.orelse)
    return 1 + sum(term_size(a) for a in t.args)


def _render_op(op: Builder) -> str:
    if isinstance(op, Compose):
        return f"compose/{op.n}[{' '.join(map(str, op.ms))}]"
    if isinstance(op, MakeConst):
        return "const-index"
    if isinstance(op, Cond):
        return f"cond/{op.n}"
    if isinstance(op, Perm):
        return f"perm[{' '.join(map(str, op.perm))}]"
    if isinstance(op, Dummy):
        return f"dummy/{op.n}"
    return f"smn/{op.m},{op.n}"


def render_term(t: ProgTerm) -> str:
    """Prefix rendering, e.g. ``(pair (arg 1) (const 4))``."""
    if isinstance(t, Const):
        return f"(const {t.k})"
    if isinstance(t, Arg):
        return f"(arg {t.i})"
    if isinstance(t, Pair):
        return f"(pair {render_term(t.left)} {render_term(t.right)})"
    if isinstance(t, Fst):
        return f"(fst {render_term(t.term)})"
    if isinstance(t, Snd):
        return f"(snd {render_term(t.term)})"
    if isinstance(t, IfZFst):
        return f"(ifz-fst {render_term(t.scrut)} {render_term(t.then)} {render_term(t.orelse)})"
    inner = " ".join(render_term(a) for a in t.args)
    return f"(build {_render_op(t.op)}{' ' if inner else ''}{inner})"


# -- evaluation ------------------------------------------------------------

DECODE_FAILURE = "decode-failure"
FUEL_EXHAUSTED = "fuel-exhausted"
DEFAULT_FUEL = 10 ** 6


@dataclass(frozen=True)
class Value:
    v: int

    def __str__(self):
        return str(self.v)


@dataclass(frozen=True)
class Undefined:
    reason: str
    detail: str = ""

    def __str__(self):
        return f"undefined ({self.reason}{': ' + self.detail if self.detail else ''})"


EvalOutcome = Union[Value, Undefined]


class _OutOfFuel(Exception):
    pass


class _Fuel:
    __slots__ = ("left",)

    def __init__(self, left: int):
        self.left = left

    def spend(self, k: int = 1) -> None:
        self.left -= k
        if self.left < 0:
            raise _OutOfFuel


def _run(t: ProgTerm, args: tuple, fuel: _Fuel) -> int:
    fuel.spend()
    if isinstance(t, Const):
        return t.k
    if isinstance(t, Arg):
        return args[t.i - 1]
    if isinstance(t, Pair):
        return pair(_run(t.left, args, fuel), _run(t.right, args, fuel))
    if isinstance(t, Fst):
        return unpair(_run(t.term, args, fuel))[0]
    if isinstance(t, Snd):
        return unpair(_run(t.term, args, fuel))[1]
    if isinstance(t, IfZFst):
        if unpair(_run(t.scrut, args, fuel))[0] == 0:
            return _run(t.then, args, fuel)
        return _run(t.orelse, args, fuel)
    values = [_run(a, args, fuel) for a in t.args]
    fuel.spend(len(values))  # one step per code the builder re-decodes
    return apply_builder(t.op, values)


def eval_term(t: ProgTerm, args: Sequence[int], fuel: int = DEFAULT_FUEL) -> EvalOutcome:
    args = tuple(args)
    if max_arg(t) > len(args):
        return Undefined(DECODE_FAILURE, f"term needs {max_arg(t)} arguments, got {len(args)}")
    try:
        return Value(_run(t, args, _Fuel(fuel)))
    except DecodeError as exc:
        return Undefined(DECODE_FAILURE, str(exc))
    except _OutOfFuel:
        return Undefined(FUEL_EXHAUSTED)


def evaluate(e: int, args: Sequence[int], fuel: int = DEFAULT_FUEL) -> EvalOutcome:
    """Apply the function with index ``e`` to ``args``.

    Undefined(decode-failure) when ``e`` is not in ``I_len(args)``.
    """
    try:
        t = decode(e)
    except DecodeError as exc:
        return Undefined(DECODE_FAILURE, str(exc))
    return eval_term(t, args, fuel)


# Symbolic evaluation with one unknown argument.  A symbolic value is a
# ProgTerm in which ``Arg(HOLE)`` stands for the unknown.  Builders only run
# when that is sound for every value of the unknown: s-m-n may fix an argument
# to the unknown (it accepts any number there), everything else gives up.
HOLE = 1 << 40


class _GiveUp(Exception):
    pass


def _lift(v) -> ProgTerm:
    return Const(v) if isinstance(v, int) else v


def _has_hole(t: ProgTerm) -> bool:
    return max_arg(t) >= HOLE


def _settle(t: ProgTerm):
    t = simplify(t)
    if isinstance(t, Const):
        return t.k
    return t


def _sym(t: ProgTerm, args: tuple, fuel: _Fuel):
    fuel.spend()
    if isinstance(t, Const):
        return t.k
    if isinstance(t, Arg):
        return args[t.i - 1]
    if isinstance(t, Pair):
        a, b = _sym(t.left, args, fuel), _sym(t.right, args, fuel)
        if isinstance(a, int) and isinstance(b, int):
            return pair(a, b)
        return Pair(_lift(a), _lift(b))
    if isinstance(t, (Fst, Snd)):
        v = _sym(t.term, args, fuel)
        if isinstance(v, int):
            return unpair(v)[0 if isinstance(t, Fst) else 1]
        return _settle(type(t)(v))
    if isinstance(t, IfZFst):
        v = _sym(t.scrut, args, fuel)
        if not isinstance(v, int):
            v = _settle(Fst(v))
            if not isinstance(v, int):
                raise _GiveUp
            return _sym(t.then if v == 0 else t.orelse, args, fuel)
        return _sym(t.then if unpair(v)[0] == 0 else t.orelse, args, fuel)
    values = [_sym(a, args, fuel) for a in t.args]
    fuel.spend(len(values))
    if all(isinstance(v, int) for v in values):
        return apply_builder(t.op, values)
    if isinstance(t.op, Smn) and isinstance(values[0], int):
        body = _decode_at(values[0], t.op.n + t.op.m)
        fixed = {t.op.n + j + 1: _lift(k) for j, k in enumerate(values[1:])}
        out = simplify(substitute_args(body, fixed))
        if _has_hole(out):
            raise _GiveUp
        return encode(out)
    raise _GiveUp


def symbolic_in_last(e: int, args: Sequence[int], fuel: int = DEFAULT_FUEL):
    """``evaluate(e, [*args, s])`` as a function of an unknown ``s``.

    Returns an ``int`` when the value does not depend on ``s``, otherwise a
    Build-free term in which ``Arg(HOLE)`` stands for ``s`` (so the value is
    defined for every ``s``), or ``None`` when neither could be shown.
    """
    try:
        t = decode(e)
    except DecodeError:
        return None
    if max_arg(t) > len(args) + 1:
        return None
    try:
        return _sym(t, tuple(args) + (Arg(HOLE),), _Fuel(fuel))
    except (_GiveUp, DecodeError, _OutOfFuel):
        return None


def symbolic_component(v, i: int):
    """First (``i == 0``) or second component of a symbolic value."""
    if isinstance(v, int):
        return unpair(v)[i]
    return _settle((Fst if i == 0 else Snd)(v))


def constant_in_last(e: int, args: Sequence[int], fuel: int = DEFAULT_FUEL) -> int | None:
    """If ``evaluate(e, [*args, s])`` is the same value for every ``s``, return it.

    ``None`` means "could not show it", not "depends on s".  A decode failure
    that happens for every ``s`` also gives ``None``.
    """
    v = symbolic_in_last(e, args, fuel)
    return v if isinstance(v, int) else None


# -- index builders --------------------------------------------------------

def _decode_at(e: int, n: int) -> ProgTerm:
    t = decode(e)
    if _max_arg_of_code(e) > n:
        raise DecodeError(f"code {e} is not an index of arity {n}")
    return t


def substitute_args(t: ProgTerm, mapping: dict) -> ProgTerm:
    """Replace every ``Arg(i)`` by ``mapping[i]``; positions not in the map are kept."""
    memo: dict[int, ProgTerm] = {}

    def go(t):
        key = id(t)
        if key in memo:
            return memo[key]
        if isinstance(t, Const):
            r = t
        elif isinstance(t, Arg):
            r = mapping.get(t.i, t)
        elif isinstance(t, Pair):
            r = Pair(go(t.left), go(t.right))
        elif isinstance(t, Fst):
            r = Fst(go(t.term))
        elif isinstance(t, Snd):
            r = Snd(go(t.term))
        elif isinstance(t, IfZFst):
            r = IfZFst(go(t.scrut), go(t.then), go(t.orelse))
        else:
            r = Build(t.op, tuple(go(a) for a in t.args))
        memo[key] = r
        return r

    return go(t)


def simplify(t: ProgTerm) -> ProgTerm:
    """Local rewrites that keep every evaluation outcome.

    ``fst (pair a b)`` becomes ``a`` when ``b`` contains no ``Build`` node (so
    dropping it cannot hide a decode failure), and symmetrically for ``snd``.
    Projections of constants are folded, and a conditional whose scrutinee has
    a constant first component is replaced by the branch it selects.
    """
    memo: dict[int, tuple] = {}

    def go(t) -> tuple:  # (term, contains no Build)
        key = id(t)
        if key in memo:
            return memo[key]
        if isinstance(t, (Const, Arg)):
            r = (t, True)
        elif isinstance(t, Pair):
            (a, pa), (b, pb) = go(t.left), go(t.right)
            r = (Pair(a, b), pa and pb)
        elif isinstance(t, (Fst, Snd)):
            x, px = go(t.term)
            first = isinstance(t, Fst)
            if isinstance(x, Const):
                r = (Const(unpair(x.k)[0 if first else 1]), True)
            elif isinstance(x, Pair) and first and go_pure(x.right):
                r = (x.left, px)
            elif isinstance(x, Pair) and not first and go_pure(x.left):
                r = (x.right, px)
            else:
                r = ((Fst if first else Snd)(x), px)
        elif isinstance(t, IfZFst):
            sc, ps = go(t.scrut)
            head = None
            if isinstance(sc, Const):
                head = unpair(sc.k)[0]
            elif isinstance(sc, Pair) and isinstance(sc.left, Const) and ps:
                head = sc.left.k
            if head is not None:
                r = go(t.then if head == 0 else t.orelse)
            else:
                (a, pa), (b, pb) = go(t.then), go(t.orelse)
                r = (IfZFst(sc, a, b), ps and pa and pb)
        else:
            args = [go(a) for a in t.args]
            r = (Build(t.op, tuple(a for a, _ in args)), False)
        memo[key] = r
        return r

    def go_pure(t) -> bool:
        if isinstance(t, (Const, Arg)):
            return True
        if isinstance(t, Pair):
            return go_pure(t.left) and go_pure(t.right)
        if isinstance(t, (Fst, Snd)):
            return go_pure(t.term)
        if isinstance(t, IfZFst):
            return go_pure(t.scrut) and go_pure(t.then) and go_pure(t.orelse)
        return False

    return go(t)[0]


def _has_build(t: ProgTerm) -> bool:
    if isinstance(t, Build):
        return True
    if isinstance(t, Pair):
        return _has_build(t.left) or _has_build(t.right)
    if isinstance(t, (Fst, Snd)):
        return _has_build(t.term)
    if isinstance(t, IfZFst):
        return _has_build(t.scrut) or _has_build(t.then) or _has_build(t.orelse)
    return False


def _tuple(ts: Sequence[ProgTerm]) -> ProgTerm:
    out = ts[-1]
    for t in reversed(ts[:-1]):
        out = Pair(t, out)
    return out


def apply_builder(op: Builder, codes: Sequence[int]) -> int:
    """Run a builder primitive on code-valued arguments; raises ``DecodeError``."""
    if len(codes) != op.arg_count:
        raise DecodeError(f"{op} takes {op.arg_count} arguments, got {len(codes)}")
    if isinstance(op, Compose):
        outer = _decode_at(codes[0], op.n)
        inner = [_decode_at(c, m) for c, m in zip(codes[1:], op.ms)]
        body = substitute_args(outer, {j + 1: t for j, t in enumerate(inner)})
        # Composition is strict: an inner function that may be undefined (it
        # runs a builder) must be evaluated even where the outer one ignores it.
        forced = [t for t in inner if _has_build(t)]
        if forced:
            body = Snd(Pair(_tuple(forced), body))
        return encode(simplify(body))
    if isinstance(op, MakeConst):
        return _TAGS * codes[0]
    if isinstance(op, Cond):
        then = _decode_at(codes[0], op.n + 1)
        orelse = _decode_at(codes[1], op.n + 1)
        return encode(simplify(IfZFst(Arg(op.n + 1), then, orelse)))
    if isinstance(op, Perm):
        body = _decode_at(codes[0], op.n)
        return encode(simplify(substitute_args(body, {j + 1: Arg(p) for j, p in enumerate(op.perm)})))
    if isinstance(op, Dummy):
        _decode_at(codes[0], op.n)
        return codes[0]
    body = _decode_at(codes[0], op.n + op.m)
    return encode(simplify(substitute_args(body, {op.n + j + 1: Const(k) for j, k in enumerate(codes[1:])})))


def builder_index(op: Builder) -> int:
    """Index of the builder itself as a V-function of ``op.arg_count`` arguments."""
    _validate_op(op)
    return encode(Build(op, tuple(Arg(i + 1) for i in range(op.arg_count))))


def build_proj(i: int, n: int) -> int:
    if not 1 <= i <= n:
        raise ValueError(f"projection I^{i}_{n} needs 1 <= i <= n")
    return encode(Arg(i))


def build_compose(e: int, es: Sequence[int], ms: Sequence[int]) -> int:
    es, ms = list(es), list(ms)
    if len(es) != len(ms):
        raise ValueError("one inner arity per inner index")
    op = Compose(len(es), tuple(ms))
    _validate_op(op)
    return apply_builder(op, [e, *es])


def build_const(k: int) -> int:
    if k < 0:
        raise ValueError("constants are naturals")
    return apply_builder(MakeConst(), [k])


def build_cond(e1: int, e2: int, n: int) -> int:
    return apply_builder(Cond(n), [e1, e2])


def build_perm(e: int, p: Iterable[int]) -> int:
    op = Perm(tuple(p))
    _validate_op(op)
    return apply_builder(op, [e])


def build_dummy(e: int, n: int) -> int:
    return apply_builder(Dummy(n), [e])


def build_smn(e: int, ks: Sequence[int], n: int) -> int:
    return apply_builder(Smn(len(ks), n), [e, *ks])
