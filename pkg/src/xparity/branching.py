"""The three parity-preserving branching schemes.

Each scheme splits a formula into children whose parities XOR to the
parent's parity.  Children are returned unreduced: the solvers reduce them
themselves so the measure bookkeeping can attribute the whole drop to
branch-plus-reduction, the quantity the analysis bounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .formula import (
    Formula,
    add_clause,
    assign_literal,
    canonical_clause,
    falsify_clause,
    remove_clause,
)


@dataclass
class BranchSet:
    scheme: str  # "simple" | "variable" | "clause"
    pivot: object  # variable id or clause tuple
    children: list
    labels: list = field(default_factory=list)  # per-child description
    added_counts: list = field(default_factory=list)  # variable branching only

    def __iter__(self):
        return iter(self.children)


def simple_branch(phi: Formula, x: int) -> BranchSet:
    """Children [phi[x=0], phi[x=1]]."""
    if x not in phi.variables:
        raise ValueError(f"variable {x} not in formula")
    return BranchSet(
        scheme="simple",
        pivot=x,
        children=[assign_literal(phi, -x), assign_literal(phi, x)],
        labels=["x=0", "x=1"],
    )


def clause_branch(phi: Formula, clause) -> BranchSet:
    """Children [phi minus C, (phi minus C)[C=0]]."""
    c = canonical_clause(clause)
    without = remove_clause(phi, c)
    return BranchSet(
        scheme="clause",
        pivot=c,
        children=[without, falsify_clause(without, c)],
        labels=["drop", "falsify"],
    )


def variable_branch(phi: Formula, x: int, clause_order=None) -> BranchSet:
    """Branch over which clause of x is the first to have its side falsified.

    With x in clauses (l1 v C1), ..., (ld v Cd), the i-th child is
    phi[C1=1, ..., C_{i-1}=1, Ci=0, li=1]: earlier sides are added back as
    clauses, the i-th side falsified, and x's literal in it satisfied.  The
    case with every side satisfied makes x a free variable, so it carries no
    parity and is dropped.
    """
    occs = phi.occ.get(x, ())
    if not occs:
        raise ValueError(f"variable {x} does not occur")
    items = [(lit, tuple(l for l in phi.clauses[cidx] if l != lit)) for cidx, lit in occs]
    if clause_order is not None:
        want = [canonical_clause(c) for c in clause_order]
        by_full = {canonical_clause(side + (lit,)): (lit, side) for lit, side in items}
        items = [by_full[c] for c in want]
    for _, side in items:
        s = set(side)
        if any(-l in s for l in s):
            raise ValueError("side clause contains complementary literals; reduce first")
    children = []
    added_counts = []
    labels = []
    for i, (lit, side) in enumerate(items):
        child = phi
        added = 0
        for j in range(i):
            before = child.m
            child = add_clause(child, items[j][1])
            added += child.m - before
        child = falsify_clause(child, side) if side else child
        child = assign_literal(child, lit)
        children.append(child)
        added_counts.append(added)
        labels.append(f"first falsified side {i}")
    return BranchSet(
        scheme="variable",
        pivot=x,
        children=children,
        labels=labels,
        added_counts=added_counts,
    )


def xor_children(parities) -> int:
    out = 0
    for p in parities:
        out ^= p
    return out
