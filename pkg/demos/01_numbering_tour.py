"""
A tour of the numbered function language
========================================

Every natural number either decodes to a small program term or fails to
decode.  This script pairs numbers, builds codes, and runs them.
"""

# %%
# Cantor pairing is the value-level pairing.  The float kernel agrees with the
# exact integer version on a whole array at once.
import numpy as np

from bqc_realizer.numbering import (
    Arg, Fst, Pair, Snd, build_compose, build_const, build_perm, build_smn, decode, encode,
    evaluate, pair, render_term, unpair, unpair_array,
)

print(pair(3, 4), unpair(pair(3, 4)))
a, b = unpair_array(np.arange(10))
print(list(zip(a.tolist(), b.tolist())))

# %%
# A term is encoded bottom-up.  ``Arg(1)`` happens to get code 1, and the
# component swap gets 16368.
swap = encode(Pair(Snd(Arg(1)), Fst(Arg(1))))
print(encode(Arg(1)), swap, render_term(decode(swap)))
print(evaluate(swap, [pair(5, 9)]), "=", pair(9, 5))

# %%
# Index builders compute new codes.  Composition, constants, permutation and
# s-m-n specialisation all return plain numbers that can be run again.
pair_code = encode(Pair(Arg(1), Arg(2)))
curried = build_smn(pair_code, [7], 1)  # x -> pair(x, 7)
print(render_term(decode(curried)), evaluate(curried, [2]))
flipped = build_perm(pair_code, [2, 1])
print(evaluate(flipped, [1, 2]), "=", pair(2, 1))
twice = build_compose(swap, [swap], [1])
print(evaluate(twice, [pair(5, 9)]), "=", pair(5, 9))
print(evaluate(build_const(42), []))

# %%
# Not every number is a code, and every evaluation runs on a fuel budget.
print(evaluate(2, [0]))
print(evaluate(encode(Pair(Arg(1), Arg(1))), [1], fuel=1))
