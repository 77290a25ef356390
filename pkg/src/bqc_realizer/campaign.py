"""Randomized soundness campaign: extract, then check against random evaluations."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .calculus import Derivation
from .extraction import extract
from .numbering import DEFAULT_FUEL
from .semantics import (
    DEFAULT_BOUND, Holds, Unknown, check_sequent, random_evaluation,
)
from .syntax import Sequent, fresh_name, rank, sequent_free_vars

__all__ = ["ListResult", "admissible_lists", "exact_antecedent", "validate", "run_campaign"]


@dataclass
class ListResult:
    name: str
    rs: tuple
    index: int
    holds: int = 0
    fails: int = 0
    unknown: int = 0
    exact: bool = True
    failures: list = field(default_factory=list)  # (Evaluation, Fails)
    seconds: float = 0.0

    @property
    def trials(self) -> int:
        return self.holds + self.fails + self.unknown


def admissible_lists(s: Sequent) -> list[tuple]:
    """The sorted free variables, and the reversed list with a fresh extra variable."""
    fv = sorted(sequent_free_vars(s))
    extra = fresh_name("w", fv)
    return [tuple(fv), tuple(reversed(fv)) + (extra,)]


def exact_antecedent(s: Sequent) -> bool:
    """Rank-0 antecedents: enumerated exactly, or constant in their realizer."""
    return rank(s.lhs) == 0


def validate(name: str, d: Derivation, signature: dict, trials: int, seed: int, *,
             lists: Iterable[Sequence[str]] | None = None, bound: int = DEFAULT_BOUND,
             fuel: int = DEFAULT_FUEL, keep_failures: int = 3) -> list[ListResult]:
    s = d.conclusion
    lists = [tuple(rs) for rs in (lists if lists is not None else admissible_lists(s))]
    rng = random.Random(f"{seed}:{name}")
    evaluations = [random_evaluation(signature, rng) for _ in range(trials)]
    results = []
    for rs in lists:
        t0 = time.perf_counter()
        e = extract(d, rs)
        r = ListResult(name, rs, e, exact=exact_antecedent(s))
        for f in evaluations:
            v = check_sequent(e, s, rs, f, bound, fuel)
            if isinstance(v, Holds):
                r.holds += 1
            elif isinstance(v, Unknown):
                r.unknown += 1
            else:
                r.fails += 1
                if len(r.failures) < keep_failures:
                    r.failures.append((f, v))
        r.seconds = time.perf_counter() - t0
        results.append(r)
    return results


def run_campaign(entries, trials: int, seed: int, *, bound: int = DEFAULT_BOUND,
                 fuel: int = DEFAULT_FUEL) -> list[ListResult]:
    """``entries``: iterable of (name, derivation, signature); results sorted by name."""
    out = []
    for name, d, sig in sorted(entries, key=lambda t: t[0]):
        out.extend(validate(name, d, sig, trials, seed, bound=bound, fuel=fuel))
    return out


