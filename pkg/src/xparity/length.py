"""General Parity-SAT by degree-descending branching, measured by weighted
variable counts.

The measure gives 1-variables weight 0, 2-variables 1.5 and i-variables
weight i from degree 3 up; it never exceeds the formula length, so the
search-tree bounds in the measure carry over to length.  Six steps
progressively purify the formula: eliminate 4+-degree variables, then
4+-clauses touching 3-variables, then mixed 3-variables, then 3-variables
in short clauses, then the remaining all-positive all-3-clause structure,
and finally hand the 2-occurrence residue to the bisection solver.  Every
branch files a ledger entry of the analysis-claimed measure drops against the
observed ones, in exact rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import occ2 as occ2_mod
from .branching import clause_branch, simple_branch, variable_branch
from .formula import Formula, clause_sort_key, flip_variable, var_of
from .occ2 import Occ2Config
from .oracle import brute_parity
from .reducer import SUBFORMULA_VAR_CAP, ReducerInvariantError, reduce_formula
from .telemetry import Telemetry

W2 = Fraction(3, 2)


def weight(degree: int) -> Fraction:
    if degree <= 1:
        return Fraction(0)
    if degree == 2:
        return W2
    return Fraction(degree)


def marginal_weight(degree: int) -> Fraction:
    return weight(degree) - weight(degree - 1)


def measure_mu(phi: Formula) -> Fraction:
    total = Fraction(0)
    for v in phi.variables:
        total += weight(phi.degree(v))
    return total


@dataclass
class LengthConfig:
    occ2: Occ2Config = field(default_factory=Occ2Config)


# -- local structure around a 3-variable ----------------------------------------


@dataclass
class LocalStructure:
    x: int
    clause_idxs: tuple
    y_x: frozenset
    r_x: tuple  # clause indices holding the remaining occurrences
    ext_x: frozenset
    proper: bool


def compute_ext(phi: Formula, x: int) -> LocalStructure:
    """Y_x, R_x and Ext_x for a 3-variable whose clauses all have length 3."""
    occs = phi.occ.get(x, ())
    if len(occs) != 3:
        raise ValueError(f"{x} is not a 3-variable")
    cidxs = tuple(sorted(cidx for cidx, _ in occs))
    inside: dict[int, int] = {}
    for cidx in cidxs:
        clause = phi.clauses[cidx]
        if len(clause) != 3:
            raise ValueError("all clauses of the variable must have length 3")
        for l in clause:
            v = var_of(l)
            if v != x:
                inside[v] = inside.get(v, 0) + 1
    y_x = frozenset(v for v, cnt in inside.items() if phi.degree(v) - cnt == 1)
    r_idx = sorted(
        {
            cidx
            for v in y_x
            for cidx, _ in phi.occ[v]
            if cidx not in cidxs
        }
    )
    r_vars = {var_of(l) for i in r_idx for l in phi.clauses[i]}
    ext = frozenset(r_vars - y_x)
    sides = [
        [var_of(l) for l in phi.clauses[cidx] if var_of(l) != x] for cidx in cidxs
    ]
    disjoint = sum(len(s) for s in sides) == len({v for s in sides for v in s})
    all_three = all(phi.degree(v) == 3 for v in inside)
    return LocalStructure(
        x=x,
        clause_idxs=cidxs,
        y_x=y_x,
        r_x=tuple(r_idx),
        ext_x=ext,
        proper=disjoint and all_three,
    )


# -- step classification -----------------------------------------------------------


@dataclass
class Step:
    kind: str
    formula: Formula  # after any polarity-normalizing flips
    pivot: object
    flips: tuple = ()
    info: dict = field(default_factory=dict)


def _normalize(phi: Formula, x: int):
    pos, negc = phi.polarity_counts(x)
    if negc > pos:
        return flip_variable(phi, x), (x,)
    return phi, ()


def classify_step(phi: Formula) -> Step:
    """First applicable step, in order 1, 2, 3.1, 3.2, 4, 5.1, 5.2, 6, with
    its pivot; ties go to the smallest canonical variable or clause.  The
    returned formula has the pivot polarity-normalized where a step assumes
    it."""
    degrees = {v: phi.degree(v) for v in phi.variables}
    max_deg = max(degrees.values(), default=0)

    if max_deg >= 4:
        x = min(v for v, d in degrees.items() if d == max_deg)
        return Step("step1", phi, x, info={"d": max_deg})

    three_vars = sorted(v for v, d in degrees.items() if d == 3)

    if three_vars:
        candidates = [
            c
            for c in phi.clauses
            if len(c) >= 4 and any(degrees[var_of(l)] == 3 for l in c)
        ]
        if candidates:
            clause = min(candidates, key=clause_sort_key)
            x = min(var_of(l) for l in clause if degrees[var_of(l)] == 3)
            side_vars = [var_of(l) for l in clause if var_of(l) != x]
            c2 = sum(1 for v in side_vars if degrees[v] == 2)
            return Step("step2", phi, (clause, x), info={"c2": c2})

        mixed = [v for v in three_vars if 0 not in phi.polarity_counts(v)]
        for want_d in (2, 1):  # step 3.1 then step 3.2
            for x in mixed:
                psi, flips = _normalize(phi, x)
                neg_occ = [(cidx, lit) for cidx, lit in psi.occ[x] if lit < 0]
                (neg_cidx, _), = neg_occ
                d_len = len(psi.clauses[neg_cidx]) - 1
                if d_len == want_d:
                    kind = "step3_1" if want_d == 2 else "step3_2"
                    return Step(kind, psi, x, flips, info={"neg_clause": psi.clauses[neg_cidx]})

        for x in three_vars:
            if any(len(phi.clauses[cidx]) == 2 for cidx, _ in phi.occ[x]):
                psi, flips = _normalize(phi, x)
                c = sum(1 for cidx, _ in psi.occ[x] if len(psi.clauses[cidx]) == 2)
                return Step("step4", psi, x, flips, info={"c": c})

        # stage claim: every 3-variable is now pure and lives in 3-clauses only
        for x in three_vars:
            for cidx, _ in phi.occ[x]:
                if len(phi.clauses[cidx]) != 3:
                    raise ReducerInvariantError(
                        f"3-variable {x} in a {len(phi.clauses[cidx])}-clause after step 4"
                    )

        structures = {x: compute_ext(phi, x) for x in three_vars}
        for x in three_vars:
            if structures[x].ext_x:
                psi, flips = _normalize(phi, x)
                return Step(
                    "step5_1", psi, x, flips, info={"ext": len(structures[x].ext_x)}
                )
        not_proper = [x for x in three_vars if not structures[x].proper]
        if not_proper:
            raise ReducerInvariantError(
                f"non-proper 3-variables {not_proper} but no variable with external "
                "neighbors: the structural dichotomy is violated"
            )
        x = three_vars[0]
        psi, flips = _normalize(phi, x)
        return Step("step5_2", psi, x, flips)

    return Step("step6", phi, None)


# -- per-step branching with measure claims ------------------------------------------


def _claims_for(step: Step):
    """Per-child claimed measure drops (by child index) plus optional joint
    claims; children are ordered as the branching schemes emit them."""
    phi = step.formula
    if step.kind == "step1":
        d = step.info["d"]
        wd = weight(d)
        joint = {"sum": 2 * wd + 2 * d * marginal_weight(d)}
        return [{"drop": wd}, {"drop": wd}], joint
    if step.kind == "step2":
        c2 = step.info["c2"]
        if c2 == 0:
            return [{"drop": 4 * W2}, {"drop": 8 * W2}], None
        return [{"drop": 5 * W2}, {"drop": 5 * W2}], None
    if step.kind == "step3_1":
        x = step.pivot
        d_vars = [var_of(l) for l in step.info["neg_clause"] if var_of(l) != x]
        c2 = sum(1 for v in d_vars if phi.degree(v) == 2)
        c3 = len(d_vars) - c2
        # the falsify branch assigns x and var(D); the satisfied positive
        # clauses add one w2 per side occurrence, but only for variables not
        # already assigned: sides may reuse var(D), where the assignment
        # weight already covers the lost occurrence
        assigned = set(d_vars) | {x}
        outside = sum(
            1
            for cidx, lit in phi.occ[x]
            if lit > 0
            for l in phi.clauses[cidx]
            if var_of(l) not in assigned
        )
        falsify = (2 + c2 + 2 * c3 + min(outside, 2)) * W2
        keep = 4 * W2 if c2 >= 1 else 3 * W2
        return [{"drop": keep}, {"drop": falsify}], None
    if step.kind == "step3_2":
        x = step.pivot
        sides = [
            [l for l in phi.clauses[cidx] if l != lit]
            for cidx, lit in phi.occ[x]
            if lit > 0
        ]
        if all(len(s) == 1 for s in sides):
            return [{"drop": 5 * W2}, {"drop": 5 * W2}], None
        return [{"drop": 3 * W2}, {"drop": 3 * W2}], {"sum": 10 * W2}
    if step.kind == "step4":
        # children are [x=0, x=1]; satisfying branch is the second
        return [{"drop": 3 * W2}, {"drop": 5 * W2}], {"sum": 10 * W2}
    if step.kind == "step5_1":
        ext = step.info["ext"]
        return [{"drop": 2 * W2}, {"drop": (8 + ext) * W2}], None
    if step.kind == "step5_2":
        return [{"drop": 10 * W2}, {"drop": 8 * W2}, {"drop": 6 * W2}], None
    raise ValueError(step.kind)


def _branch_for(step: Step):
    phi = step.formula
    if step.kind in ("step1", "step3_2", "step4", "step5_1"):
        return simple_branch(phi, step.pivot)
    if step.kind == "step2":
        clause, _ = step.pivot
        return clause_branch(phi, clause)
    if step.kind == "step3_1":
        x = step.pivot
        (neg_cidx,) = [cidx for cidx, lit in phi.occ[x] if lit < 0]
        return clause_branch(phi, phi.clauses[neg_cidx])
    if step.kind == "step5_2":
        x = step.pivot
        order = sorted((phi.clauses[cidx] for cidx, _ in phi.occ[x]), key=clause_sort_key)
        return variable_branch(phi, x, clause_order=order)
    raise ValueError(step.kind)


def _check_step32_structure(step: Step):
    """The guarantees behind the step 3.2 analysis: the variable of the
    2-clause side never sits in both positive sides, nor in a unit side."""
    phi = step.formula
    x = step.pivot
    (neg_cidx,) = [cidx for cidx, lit in phi.occ[x] if lit < 0]
    (y_lit,) = [l for l in phi.clauses[neg_cidx] if var_of(l) != x]
    y = var_of(y_lit)
    sides = [
        [l for l in phi.clauses[cidx] if l != lit]
        for cidx, lit in phi.occ[x]
        if lit > 0
    ]
    in_side = [any(var_of(l) == y for l in s) for s in sides]
    if all(in_side):
        raise ReducerInvariantError("step 3.2: y occurs in both positive sides")
    for s, present in zip(sides, in_side):
        if len(s) == 1 and present:
            raise ReducerInvariantError("step 3.2: y occurs in a unit side")


def _reduce_checked(phi: Formula, tel: Telemetry):
    """Reduce and assert the measure never increased (and stays below the
    formula length, which is what lets measure bounds speak about L)."""
    mu0 = measure_mu(phi)
    if mu0 > phi.length:
        raise ReducerInvariantError(f"mu {mu0} exceeds length {phi.length}")
    out = reduce_formula(phi)
    if out.formula is not None:
        mu1 = measure_mu(out.formula)
        if mu1 > out.formula.length:
            raise ReducerInvariantError("mu exceeds length after reduction")
        tel.check(
            "len.reduce-mu",
            0,
            claimed={"mu_drop_at_least": 0},
            observed={"mu_drop": mu0 - mu1},
            passed=mu1 <= mu0,
        )
    return out


def _solve(psi: Formula, tel: Telemetry, depth: int, cfg: LengthConfig) -> int:
    if psi.n <= SUBFORMULA_VAR_CAP:
        # constant-size residue: settle it the way the isolate rule settles
        # small components.  The step analyses lean on the small-subformula
        # interface property, which says nothing about whole formulas this
        # small.
        tel.leaf(depth, "len.small-brute")
        return brute_parity(psi)
    step = classify_step(psi)
    if step.kind == "step6":
        occ2_mod.check_occ2(psi)
        return occ2_mod._solve_reduced(psi, tel, depth, cfg.occ2)
    if step.kind == "step3_2":
        _check_step32_structure(step)
    claims, joint = _claims_for(step)
    branch = _branch_for(step)
    tel.node(
        depth,
        f"len.{step.kind}",
        {"pivot": step.pivot if isinstance(step.pivot, int) else list(step.pivot[0]),
         "flips": list(step.flips)},
    )
    mu_parent = measure_mu(step.formula)
    parity = 0
    drops = []
    resolved_flags = []
    rest = []
    for i, child in enumerate(branch.children):
        out = _reduce_checked(child, tel)
        if out.settled:
            child_parity, remainder = 0, None
        elif out.formula.is_empty():
            child_parity, remainder = 1, None
        else:
            child_parity, remainder = None, out.formula
        resolved = remainder is None
        drop = mu_parent - measure_mu(remainder) if remainder is not None else mu_parent
        drops.append(drop)
        resolved_flags.append(resolved)
        rest.append(remainder)
        tel.check(
            f"len.{step.kind}",
            i,
            claimed=claims[i],
            observed={"drop": drop},
            passed=drop >= claims[i]["drop"],
            resolved=resolved,
            note=branch.labels[i],
        )
        if resolved:
            tel.leaf(depth + 1, f"len.{step.kind}-settled")
            parity ^= child_parity
    if joint and not any(resolved_flags):
        total = sum(drops, Fraction(0))
        tel.check(
            f"len.{step.kind}-joint",
            0,
            claimed={"sum": joint["sum"]},
            observed={"sum": total},
            passed=total >= joint["sum"],
        )
    for remainder in rest:
        if remainder is not None:
            parity ^= _solve(remainder, tel, depth + 1, cfg)
    return parity


def solve_length(
    phi: Formula, telemetry: Telemetry | None = None, config: LengthConfig | None = None
) -> int:
    """Parity of an arbitrary CNF formula, polynomial space."""
    tel = telemetry if telemetry is not None else Telemetry()
    cfg = config if config is not None else LengthConfig()
    out = _reduce_checked(phi, tel)
    if out.settled:
        tel.leaf(0, "len.verdict")
        return 0
    if out.formula.is_empty():
        tel.leaf(0, "len.empty")
        return 1
    return _solve(out.formula, tel, 0, cfg)
