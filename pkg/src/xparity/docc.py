"""Bounded-occurrence solving through positive formulas.

Clause branching on a clause holding a mixed variable's positive literal
drops one clause on the keep side and at least two on the falsify side, so
every formula reduces to a tree of all-positive leaves.  A positive
formula's models are exactly the hitting sets of its clause system; passing
to the dual system turns those into set covers, whose count agrees with the
dual hitting-set count modulo 2.  At desk scale the terminal counter is the
brute-force oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .branching import clause_branch, variable_branch
from .formula import Formula, clause_sort_key, flip_variable, var_of
from .oracle import SetSystem, count_hitting_sets
from .reducer import apply_rule
from .telemetry import Telemetry


class NotPositive(ValueError):
    pass


def is_positive(phi: Formula) -> bool:
    return all(l > 0 for c in phi.clauses for l in c)


def _reduce_basic(phi: Formula):
    """Fixpoint of the five counting-safe rules (empty clause, duplicate
    literals, tautologies, subsumption, unit clauses).  The parity-only
    rules stay out so the clause-drop bookkeeping of positive reduction
    stays intact.  Returns ("verdict", 0) or ("formula", phi')."""
    while True:
        for rule in ("R1", "R2", "R3", "R4", "R5"):
            res = apply_rule(phi, rule)
            if res is None:
                continue
            if res[0] == "verdict":
                return ("verdict", 0)
            phi = res[1]
            break
        else:
            return ("formula", phi)


def flip_negative_variables(phi: Formula) -> tuple[Formula, tuple]:
    flipped = []
    for v in sorted(phi.variables):
        pos, negc = phi.polarity_counts(v)
        if pos == 0 and negc > 0:
            phi = flip_variable(phi, v)
            flipped.append(v)
    return phi, tuple(flipped)


@dataclass
class PositiveReduction:
    leaves: list  # positive formulas still to be evaluated
    base_parity: int  # XOR of leaves settled during reduction
    branch_count: int = 0
    flips: list = field(default_factory=list)


def reduce_to_positive(phi: Formula, telemetry: Telemetry | None = None) -> PositiveReduction:
    """Branch until only positive formulas remain; XOR over all leaves
    reproduces the input parity.  Per branch the clause count drops by at
    least 1 (keep side) and 2 (falsify side), which is asserted."""
    tel = telemetry if telemetry is not None else Telemetry()
    result = PositiveReduction(leaves=[], base_parity=0)
    stack = [(phi, 0)]
    while stack:
        cur, depth = stack.pop()
        status, val = _reduce_basic(cur)
        if status == "verdict":
            tel.leaf(depth, "docc.verdict")
            continue
        cur = val
        cur, flipped = flip_negative_variables(cur)
        if flipped:
            result.flips.append(flipped)
        if not cur.clauses:
            # free variables double the count; only the fully assigned
            # formula contributes an odd leaf
            tel.leaf(depth, "docc.trivial")
            result.base_parity ^= 1 if cur.n == 0 else 0
            continue
        if is_positive(cur):
            tel.leaf(depth, "docc.positive-leaf")
            result.leaves.append(cur)
            continue
        x = min(
            v for v in cur.variables if 0 not in cur.polarity_counts(v) and cur.degree(v) > 0
        )
        pivot = min(
            (cur.clauses[cidx] for cidx, lit in cur.occ[x] if lit > 0),
            key=clause_sort_key,
        )
        tel.node(depth, "docc.to-positive", {"pivot": list(pivot), "on": x})
        result.branch_count += 1
        branch = clause_branch(cur, pivot)
        claims = [1, 2]
        for i, child in enumerate(branch.children):
            status, val = _reduce_basic(child)
            if status == "verdict":
                tel.check(
                    "docc.to-positive",
                    i,
                    claimed={"dm": claims[i]},
                    observed={"dm": cur.m},
                    passed=True,
                    resolved=True,
                )
                tel.leaf(depth + 1, "docc.verdict")
                continue
            dm = cur.m - val.m
            tel.check(
                "docc.to-positive",
                i,
                claimed={"dm": claims[i]},
                observed={"dm": dm},
                passed=dm >= claims[i],
                note=branch.labels[i],
            )
            stack.append((val, depth + 1))
    return result


def solve_positive_fib(
    phi: Formula, d: int | None = None, telemetry: Telemetry | None = None, depth: int = 0
) -> int:
    """Variable branching on a maximum-degree variable of a positive formula;
    the branching vector (d, d-1, ..., 1) gives the d-th order Fibonacci
    constant as growth base."""
    if not is_positive(phi):
        raise NotPositive("solve_positive_fib needs a positive formula")
    tel = telemetry if telemetry is not None else Telemetry()
    if d is not None:
        worst = max((phi.degree(v) for v in phi.variables), default=0)
        if worst > d:
            raise ValueError(f"degree {worst} exceeds the declared bound {d}")
    return _fib(phi, tel, depth)


def _fib(phi: Formula, tel: Telemetry, depth: int) -> int:
    if phi.has_empty_clause():
        tel.leaf(depth, "fib.falsified")
        return 0
    if not phi.clauses:
        tel.leaf(depth, "fib.trivial")
        return 1 if phi.n == 0 else 0
    if any(phi.degree(v) == 0 for v in phi.variables):
        tel.leaf(depth, "fib.free-variable")
        return 0
    degrees = {v: phi.degree(v) for v in phi.variables}
    top = max(degrees.values())
    x = min(v for v, dg in degrees.items() if dg == top)
    tel.node(depth, "fib.branch", {"on": x, "degree": top})
    parity = 0
    for child in variable_branch(phi, x).children:
        parity ^= _fib(child, tel, depth + 1)
    return parity


def to_dual_system(phi: Formula) -> SetSystem:
    """Dual of a positive formula: universe the clause indices, one set per
    variable holding the clauses it appears in.  d-occ input means every
    dual set has size at most d."""
    if not is_positive(phi):
        raise NotPositive("dual system is defined for positive formulas")
    family = []
    for v in sorted(phi.variables):
        family.append(frozenset(cidx for cidx, _ in phi.occ.get(v, ())))
    return SetSystem(frozenset(range(phi.m)), tuple(family))


def primal_system(phi: Formula) -> SetSystem:
    """A positive formula read as a set system over its variables; models
    correspond bijectively to hitting sets."""
    if not is_positive(phi):
        raise NotPositive("primal system is defined for positive formulas")
    return SetSystem(
        phi.variables, tuple(frozenset(var_of(l) for l in c) for c in phi.clauses)
    )


def solve_docc(
    phi: Formula,
    d: int | None = None,
    telemetry: Telemetry | None = None,
    oracle_cap: int = 20,
) -> int:
    """Reduce to positive leaves, then settle each leaf through the dual
    chain: models = primal hitting sets = dual set covers = dual hitting
    sets (mod 2), the last evaluated by enumeration."""
    if d is not None:
        worst = max((phi.degree(v) for v in phi.variables), default=0)
        if worst > d:
            raise ValueError(f"degree {worst} exceeds the declared bound {d}")
    tel = telemetry if telemetry is not None else Telemetry()
    red = reduce_to_positive(phi, tel)
    parity = red.base_parity
    for leaf in red.leaves:
        dual = to_dual_system(leaf)
        parity ^= count_hitting_sets(dual, oracle_cap) & 1
    return parity
