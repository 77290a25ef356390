import pytest

from suites import axiom_cases, mutants, rule_cases, run_case

CASES = [(rule, c) for group in (axiom_cases(), rule_cases()) for rule, cs in group.items() for c in cs]


@pytest.mark.parametrize("rule, case", CASES, ids=[f"{r}-{c.label}" for r, c in CASES])
def test_case_holds_and_a_mutant_fails(rule, case):
    res = run_case(case, trials=8, seed=1)
    assert not res.fails, res.fails[0][1]
    assert res.unknown == 0
    assert res.killed_by is not None


def test_mutant_family_shape():
    names = [name for name, _ in mutants(1, 0)]
    assert names[0] == "swapped output" and len(set(names)) == len(names)
