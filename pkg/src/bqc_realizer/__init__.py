"""Realizer extraction for basic predicate calculus.

Gödel-numbered total term language (``numbering``), formulas and
substitution (``syntax``), a derivation checker (``calculus``), the
extraction compiler (``extraction``), a bounded realizability checker over
finite evaluations (``semantics``) and a command line front end (``cli``).
"""
from .numbering import (
    Value, Undefined, decode, encode, evaluate, pair, render_term, unpair,
)
from .syntax import Sequent, parse_formula, parse_sequent, render, render_sequent
from .calculus import Derivation, check_derivation, dump_proof, load_proof
from .extraction import extract, sentence_realizer
from .semantics import (
    Evaluation, Fails, Holds, Unknown, check, check_sequent, check_with_witnesses,
    load_evaluation, random_evaluation,
)

__version__ = "0.1.0"

__all__ = [
    "Value", "Undefined", "decode", "encode", "evaluate", "pair", "render_term", "unpair",
    "Sequent", "parse_formula", "parse_sequent", "render", "render_sequent",
    "Derivation", "check_derivation", "dump_proof", "load_proof",
    "extract", "sentence_realizer",
    "Evaluation", "Fails", "Holds", "Unknown", "check", "check_sequent", "check_with_witnesses",
    "load_evaluation", "random_evaluation",
]
