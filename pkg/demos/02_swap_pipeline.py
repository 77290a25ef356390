"""
From a derivation to a checked realizer
=======================================

The worked example: derive ``P & Q => Q & P``, curry it into the sentence
``top => (P & Q -> Q & P)``, extract realizers and check them.
"""

# %%
from bqc_realizer.calculus import a1, check_derivation, dump_proof, r1, r2, r3a, r3b, r9
from bqc_realizer.extraction import extract, sentence_realizer
from bqc_realizer.numbering import decode, evaluate, pair, render_term
from bqc_realizer.semantics import Evaluation, check, check_sequent

ax = a1("P & Q")
swap = r2(r3b(ax), r3a(ax))
print(swap.conclusion, check_derivation(swap).ok)
print(dump_proof(swap))

# %%
# The extracted index takes a realizer of ``P & Q`` and returns one of
# ``Q & P``: it swaps the pair.
e = extract(swap, [])
print(e, render_term(decode(e)))
print(evaluate(e, [pair(3, 8)]), "=", pair(8, 3))

# %%
# A concrete evaluation: P is realized by 3 or 5, Q by 8.
f = Evaluation(frozenset({0}), {"P": {(): frozenset({3, 5})}, "Q": {(): frozenset({8})}})
print(check_sequent(e, swap.conclusion, [], f))

# %%
# Currying into a sentence.  First compose ``top & (P & Q) => P & Q`` with the
# swap, then move ``P & Q`` behind the implication.  The realizer of
# ``top => A`` applied to 0 realizes A outright, and here it is the swap itself.
curried = r9(r1(r3b(a1("top & (P & Q)")), swap), "")
print(curried.conclusion, check_derivation(curried).ok)
e_prime = sentence_realizer(curried)
print(e_prime, render_term(decode(e_prime)))
print(check(e_prime, curried.conclusion.rhs, f))
