import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xparity.branching import clause_branch, simple_branch, variable_branch, xor_children
from xparity.formula import Formula
from xparity.oracle import brute_parity
from xparity.reducer import reduce_formula


def formulas(max_n=6, max_m=6, max_len=3):
    def build(n):
        lit = st.integers(1, n).flatmap(lambda v: st.sampled_from([v, -v]))
        clause = st.lists(lit, min_size=1, max_size=max_len).map(
            lambda ls: list(dict.fromkeys(ls))
        )
        return st.lists(clause, min_size=1, max_size=max_m).map(
            lambda cs: Formula(range(1, n + 1), cs)
        )

    return st.integers(1, max_n).flatmap(build)


def test_simple_branch_examples():
    phi = Formula([1, 2], [[1, 2]])
    branch = simple_branch(phi, 1)
    ps = [brute_parity(c) for c in branch.children]
    assert ps == [1, 0]  # y forced vs y free
    assert xor_children(ps) == brute_parity(phi) == 1

    phi = Formula([1], [[1]])
    ps = [brute_parity(c) for c in simple_branch(phi, 1).children]
    assert ps == [0, 1]


@given(formulas())
@settings(max_examples=200, deadline=None)
def test_simple_branch_xor_identity(phi):
    x = min(phi.variables)
    ps = [brute_parity(c) for c in simple_branch(phi, x).children]
    assert xor_children(ps) == brute_parity(phi)


def test_clause_branch_examples():
    phi = Formula([1, 2], [[1, 2]])
    branch = clause_branch(phi, [1, 2])
    ps = [brute_parity(c) for c in branch.children]
    assert ps == [0, 1]  # 4 models without the clause; x=y=0 leaves 1
    assert xor_children(ps) == 1


@given(formulas())
@settings(max_examples=200, deadline=None)
def test_clause_branch_xor_identity(phi):
    pivot = phi.clauses[0]
    try:
        branch = clause_branch(phi, pivot)
    except ValueError:
        return  # tautological pivot cannot be falsified
    ps = [brute_parity(c) for c in branch.children]
    assert xor_children(ps) == brute_parity(phi)


def test_variable_branch_two_clauses():
    # x in (x a) and (x b): children per the first-falsified-side split
    phi = Formula([1, 2, 3], [[1, 2], [1, 3]])
    branch = variable_branch(phi, 1)
    assert len(branch.children) == 2
    ps = [brute_parity(c) for c in branch.children]
    assert xor_children(ps) == brute_parity(phi)
    assert branch.added_counts == [0, 1]


def test_variable_branch_degenerate_degree_one():
    phi = Formula([1, 2, 3], [[1, 2], [2, 3]])
    branch = variable_branch(phi, 1)
    assert len(branch.children) == 1
    # single child equals assigning the side false and the literal true
    child = branch.children[0]
    assert brute_parity(child) == brute_parity(phi)


def test_variable_branch_rejects_tautological_side():
    phi = Formula([1, 2], [[1, 2, -2]])
    with pytest.raises(ValueError):
        variable_branch(phi, 1)


@given(formulas())
@settings(max_examples=200, deadline=None)
def test_variable_branch_xor_identity(phi):
    occupied = [v for v in sorted(phi.variables) if phi.degree(v) > 0]
    if not occupied:
        return
    x = occupied[0]
    try:
        branch = variable_branch(phi, x)
    except ValueError:
        return
    assert len(branch.children) == phi.degree(x)
    ps = [brute_parity(c) for c in branch.children]
    assert xor_children(ps) == brute_parity(phi)


def test_variable_branch_adds_real_clauses_on_reduced_input():
    rng = random.Random(3)
    checked = 0
    for seed in range(300):
        n = rng.randint(4, 12)
        clauses = [
            [rng.choice([v, -v]) for v in rng.sample(range(1, n + 1), rng.randint(2, 3))]
            for _ in range(rng.randint(2, 10))
        ]
        out = reduce_formula(Formula(range(1, n + 1), clauses))
        if out.settled or out.formula.is_empty():
            continue
        psi = out.formula
        x = min(v for v in psi.variables if psi.degree(v) > 0)
        branch = variable_branch(psi, x)
        # on reduced input the i-th child really adds i-1 clauses
        assert branch.added_counts == list(range(len(branch.children)))
        checked += 1
    assert checked >= 20
