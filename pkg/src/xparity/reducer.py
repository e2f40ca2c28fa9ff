"""The thirteen parity-preserving reduction rules and their fixpoint engine.

Rules either rewrite the formula (strictly decreasing the potential
(n, m, L) in lexicographic order) or settle the instance outright with an
even-parity verdict.  ``reduce_formula`` applies them in a fixed priority
order, restarting from the first rule after every change; any order is
correct, a fixed one keeps traces deterministic.

Rule summary (ids follow the priority order):
  R1  empty clause present            -> parity 0
  R2  duplicated literal in a clause  -> drop copies
  R3  tautological clause             -> drop clause
  R4  subsumed clause                 -> drop superset
  R5  unit clause                     -> assign it true
  R6  variable with no occurrence     -> parity 0 (free variable doubles)
  R7  variable with one occurrence    -> assign it true, falsify the rest
  R8  literal dominating a variable   -> assign the dominating literal false
  R9  twin literals                   -> drop one variable
  R10 complementary subsumption       -> strip the complementary literal
  R11 clauses (p q) and (-p -q)       -> merge p := -q
  R12 isolated small subformula       -> settle by brute force, remove
  R13 small subformula hinged on one  -> settle both hinge values by brute
      shared variable                    force, remove, fix the hinge
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .formula import (
    Formula,
    assign_literal,
    merge_variables,
    remove_variable,
    var_of,
)
from .oracle import brute_parity

SUBFORMULA_VAR_CAP = 10  # threshold from the isolate/semi-isolate rules

RULE_IDS = tuple(f"R{i}" for i in range(1, 14))


class ReducerInvariantError(AssertionError):
    """The fixpoint engine observed something the rules promise impossible."""


@dataclass
class ReductionOutcome:
    formula: Formula | None
    verdict: int | None
    trace: list = field(default_factory=list)
    potential_log: list = field(default_factory=list)

    @property
    def settled(self) -> bool:
        return self.verdict is not None


def _clause_sets(phi: Formula):
    return [frozenset(c) for c in phi.clauses]


def _lit_index(phi: Formula) -> dict:
    """literal -> sorted tuple of clause indices containing it."""
    idx: dict[int, list] = {}
    for occs in phi.occ.values():
        for cidx, lit in occs:
            idx.setdefault(lit, []).append(cidx)
    return {lit: tuple(sorted(ix)) for lit, ix in idx.items()}


# -- individual rules --------------------------------------------------------
# Each returns None (not applicable), ("verdict", detail) or
# ("changed", formula, detail).


def _r1(phi: Formula):
    for clause in phi.clauses:
        if not clause:
            return ("verdict", "empty clause")
    return None


def _r2(phi: Formula):
    for clause in phi.clauses:
        if len(set(clause)) != len(clause):
            cleaned = tuple(dict.fromkeys(clause))
            out = [cleaned if c == clause else c for c in phi.clauses]
            return ("changed", Formula._make(phi.variables, out), f"dedup {clause}")
    return None


def _r3(phi: Formula):
    for clause in phi.clauses:
        s = set(clause)
        if any(-l in s for l in s):
            out = [c for c in phi.clauses if c != clause]
            return ("changed", Formula._make(phi.variables, out), f"tautology {clause}")
    return None


def _r4(phi: Formula):
    sets = _clause_sets(phi)
    m = len(sets)
    for i in range(m):
        for j in range(m):
            if i != j and sets[i] < sets[j]:
                out = [c for k, c in enumerate(phi.clauses) if k != j]
                return (
                    "changed",
                    Formula._make(phi.variables, out),
                    f"{phi.clauses[i]} subsumes {phi.clauses[j]}",
                )
    return None


def _r5(phi: Formula):
    for clause in phi.clauses:
        if len(clause) == 1:
            lit = clause[0]
            return ("changed", assign_literal(phi, lit), f"unit {lit}")
    return None


def _r6(phi: Formula):
    for v in sorted(phi.variables):
        if phi.degree(v) == 0:
            return ("verdict", f"0-variable {v}")
    return None


def _r7(phi: Formula):
    for v in sorted(phi.variables):
        occs = phi.occ.get(v, ())
        if len(occs) == 1:
            cidx, lit = occs[0]
            clause = phi.clauses[cidx]
            out = assign_literal(phi, lit)
            for other in dict.fromkeys(clause):
                if other != lit:
                    out = assign_literal(out, -other)
            return ("changed", out, f"1-variable {v}: {lit}=1, rest of {clause} false")
    return None


def _r8(phi: Formula):
    sets = _clause_sets(phi)
    for v in sorted(phi.variables):
        occs = phi.occ.get(v, ())
        if not occs:
            continue
        common = set.intersection(*(set(sets[cidx]) for cidx, _ in occs))
        common.discard(v)
        common.discard(-v)
        if common:
            lit = min(common, key=lambda l: (abs(l), l < 0))
            return ("changed", assign_literal(phi, -lit), f"{lit} dominates {v}: {lit}=0")
    return None


def _r9(phi: Formula):
    lidx = _lit_index(phi)
    empty = ()
    for clause in phi.clauses:
        for a in clause:
            for b in clause:
                if var_of(a) >= var_of(b):
                    continue
                if lidx.get(a, empty) == lidx.get(b, empty) and lidx.get(
                    -a, empty
                ) == lidx.get(-b, empty):
                    # twins: drop the higher-numbered variable
                    return (
                        "changed",
                        remove_variable(phi, var_of(b)),
                        f"twins {a},{b}: drop {var_of(b)}",
                    )
    return None


def _r10(phi: Formula):
    sets = _clause_sets(phi)
    lidx = _lit_index(phi)
    for v in sorted(phi.variables):
        for lit in (v, -v):
            for ai in lidx.get(lit, ()):
                rest = sets[ai] - {lit}
                for bi in lidx.get(-lit, ()):
                    if bi != ai and rest <= sets[bi] - {-lit}:
                        rewritten = tuple(l for l in phi.clauses[bi] if l != -lit)
                        out = [
                            rewritten if k == bi else c
                            for k, c in enumerate(phi.clauses)
                        ]
                        return (
                            "changed",
                            Formula._make(phi.variables, out),
                            f"{phi.clauses[ai]} resolves {-lit} out of {phi.clauses[bi]}",
                        )
    return None


def _r11(phi: Formula):
    two = {}
    for clause in phi.clauses:
        if len(clause) == 2:
            key = frozenset(var_of(l) for l in clause)
            if len(key) != 2:
                continue  # duplicated variable, earlier rules handle it
            for other in two.get(key, ()):
                if set(clause) == {-l for l in other}:
                    a, b = sorted(clause, key=lambda l: -abs(l))  # a has larger var
                    target = -b if a > 0 else b
                    merged = merge_variables(phi, var_of(a), target)
                    cleaned = [
                        c
                        for c in merged.clauses
                        if not any(-l in c for l in c)
                    ]
                    return (
                        "changed",
                        Formula._make(merged.variables, cleaned),
                        f"{clause} vs {other}: set var {var_of(a)} := literal {target}",
                    )
            two.setdefault(key, []).append(clause)
    return None


def _clause_components(phi: Formula, skip_var: int | None = None) -> list[list[int]]:
    """Connected components of the clause-sharing graph, as sorted lists of
    clause indices; adjacency through skip_var is ignored when given."""
    m = phi.m
    adj: list[set] = [set() for _ in range(m)]
    for v, occs in phi.occ.items():
        if v == skip_var:
            continue
        idxs = [cidx for cidx, _ in occs]
        for a in idxs[1:]:
            adj[idxs[0]].add(a)
            adj[a].add(idxs[0])
    seen = [False] * m
    comps = []
    for start in range(m):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        comp = []
        while stack:
            c = stack.pop()
            comp.append(c)
            for nb in adj[c]:
                if not seen[nb]:
                    seen[nb] = True
                    stack.append(nb)
        comps.append(sorted(comp))
    return comps


def _subformula(phi: Formula, clause_idxs) -> Formula:
    clauses = [phi.clauses[i] for i in clause_idxs]
    vs = frozenset(var_of(l) for c in clauses for l in c)
    return Formula._make(vs, clauses)


def _r12(phi: Formula):
    comps = _clause_components(phi)
    if len(comps) < 2:
        return None
    for comp in comps:
        sub = _subformula(phi, comp)
        if sub.n <= SUBFORMULA_VAR_CAP:
            p = brute_parity(sub)
            if p == 0:
                return ("verdict", f"isolated subformula {comp} has even parity")
            keep = [c for i, c in enumerate(phi.clauses) if i not in set(comp)]
            return (
                "changed",
                Formula._make(phi.variables - sub.variables, keep),
                f"isolated subformula {comp}, parity 1, removed",
            )
    return None


def _r13(phi: Formula):
    for x in sorted(phi.variables):
        occs = phi.occ.get(x, ())
        if len(occs) < 2:
            continue
        comps = _clause_components(phi, skip_var=x)
        x_clauses = {cidx for cidx, _ in occs}
        x_comps = [c for c in comps if x_clauses & set(c)]
        if len(x_comps) < 2:
            continue
        for comp in x_comps:
            sub = _subformula(phi, comp)
            if sub.n > SUBFORMULA_VAR_CAP:
                continue
            p1 = brute_parity(assign_literal(sub, x))
            p0 = brute_parity(assign_literal(sub, -x))
            if p0 == 0 and p1 == 0:
                return ("verdict", f"hinged subformula {comp} even for both values of {x}")
            keep = [c for i, c in enumerate(phi.clauses) if i not in set(comp)]
            rest = Formula._make(phi.variables - (sub.variables - {x}), keep)
            if p0 == 1 and p1 == 0:
                rest = assign_literal(rest, -x)
                detail = f"hinged subformula {comp}: forced {x}=0"
            elif p0 == 0 and p1 == 1:
                rest = assign_literal(rest, x)
                detail = f"hinged subformula {comp}: forced {x}=1"
            else:
                detail = f"hinged subformula {comp}: both parities odd, {x} kept"
            return ("changed", rest, detail)
    return None


_RULES = (
    ("R1", _r1),
    ("R2", _r2),
    ("R3", _r3),
    ("R4", _r4),
    ("R5", _r5),
    ("R6", _r6),
    ("R7", _r7),
    ("R8", _r8),
    ("R9", _r9),
    ("R10", _r10),
    ("R11", _r11),
    ("R12", _r12),
    ("R13", _r13),
)

_RULE_BY_ID = dict(_RULES)


def apply_rule(phi: Formula, rule_id: str):
    """Apply a single rule once.  Returns None, ("verdict", detail) or
    ("changed", formula, detail)."""
    return _RULE_BY_ID[rule_id](phi)


def reduce_formula(phi: Formula, keep_details: bool = False) -> ReductionOutcome:
    """Exhaustively apply the rules: the R(phi) of the analysis.

    Parity is preserved (or the verdict 0 is correct), and every step
    strictly decreases (n, m, L) lexicographically, which is asserted.
    """
    trace = []
    potential = [(phi.n, phi.m, phi.length)]
    while True:
        fired = False
        for rule_id, fn in _RULES:
            res = fn(phi)
            if res is None:
                continue
            if res[0] == "verdict":
                trace.append((rule_id, res[1] if keep_details else ""))
                return ReductionOutcome(None, 0, trace, potential)
            _, new_phi, detail = res
            new_pot = (new_phi.n, new_phi.m, new_phi.length)
            if not new_pot < potential[-1]:
                raise ReducerInvariantError(
                    f"{rule_id} did not decrease the potential: "
                    f"{potential[-1]} -> {new_pot}"
                )
            trace.append((rule_id, detail if keep_details else ""))
            potential.append(new_pot)
            phi = new_phi
            fired = True
            break
        if not fired:
            return ReductionOutcome(phi, None, trace, potential)


def is_fixpoint(phi: Formula) -> bool:
    return all(fn(phi) is None for _, fn in _RULES)


# -- reduced-formula property report ----------------------------------------


@dataclass
class PropertyReport:
    """Pass/fail for the five structural properties of reduced formulas,
    with a concrete witness for each failure."""

    results: dict
    witnesses: dict

    @property
    def all_pass(self) -> bool:
        return all(self.results.values())


def _connected_subsets_within_cap(phi: Formula, cap: int, limit: int = 500_000):
    """All connected, non-empty, proper clause subsets with at most ``cap``
    variables.  Variable count grows monotonically with the subset, so
    pruning at the cap is exact."""
    m = phi.m
    adj: list[set] = [set() for _ in range(m)]
    for occs in phi.occ.values():
        idxs = [cidx for cidx, _ in occs]
        for i in idxs:
            for j in idxs:
                if i != j:
                    adj[i].add(j)
    varsets = [frozenset(var_of(l) for l in c) for c in phi.clauses]
    out = []
    seen = set()
    for start in range(m):
        base = frozenset((start,))
        if len(varsets[start]) > cap:
            continue
        stack = [(base, varsets[start])]
        seen.add(base)
        while stack:
            subset, vs = stack.pop()
            out.append((subset, vs))
            if len(out) > limit:
                raise ReducerInvariantError("subformula enumeration exploded")
            for c in subset:
                for nb in adj[c]:
                    # fix the minimum element to avoid revisits across starts
                    if nb <= start or nb in subset:
                        continue
                    nxt = subset | {nb}
                    if nxt in seen:
                        continue
                    seen.add(nxt)
                    nvs = vs | varsets[nb]
                    if len(nvs) <= cap:
                        stack.append((nxt, nvs))
    return [(s, v) for s, v in out if len(s) < m]


def check_reduced_properties(phi: Formula) -> PropertyReport:
    results = {}
    witnesses = {}

    bad = [(v, phi.degree(v)) for v in sorted(phi.variables) if phi.degree(v) < 2]
    results["p1_all_variables_2plus"] = not bad
    if bad:
        witnesses["p1_all_variables_2plus"] = bad[0]

    short = [c for c in phi.clauses if len(c) < 2]
    results["p2_all_clauses_2plus"] = not short
    if short:
        witnesses["p2_all_clauses_2plus"] = short[0]

    sets = _clause_sets(phi)
    two_vars = {v for v in phi.variables if phi.degree(v) == 2}
    viol = None
    m = phi.m
    for i in range(m):
        vi = {var_of(l) for l in sets[i]}
        for j in range(i + 1, m):
            shared = vi & {var_of(l) for l in sets[j]} & two_vars
            if len(shared) > 1:
                viol = (phi.clauses[i], phi.clauses[j], sorted(shared))
                break
        if viol:
            break
    results["p3_clause_pair_one_common_2var"] = viol is None
    if viol:
        witnesses["p3_clause_pair_one_common_2var"] = viol

    viol = None
    twos = [c for c in phi.clauses if len(c) == 2]
    for i in range(len(twos)):
        for j in range(i + 1, len(twos)):
            shared = {var_of(l) for l in twos[i]} & {var_of(l) for l in twos[j]}
            if len(shared) > 1:
                viol = (twos[i], twos[j], sorted(shared))
                break
        if viol:
            break
    results["p4_2clause_pair_one_common_var"] = viol is None
    if viol:
        witnesses["p4_2clause_pair_one_common_var"] = viol

    viol = None
    all_vars_by_clause = [frozenset(var_of(l) for l in c) for c in phi.clauses]
    for subset, vs in _connected_subsets_within_cap(phi, SUBFORMULA_VAR_CAP):
        rest_vars = frozenset().union(
            *(all_vars_by_clause[i] for i in range(phi.m) if i not in subset)
        ) if len(subset) < phi.m else frozenset()
        if len(vs & rest_vars) < 2:
            viol = (sorted(subset), sorted(vs & rest_vars))
            break
    results["p5_small_subformula_interface"] = viol is None
    if viol:
        witnesses["p5_small_subformula_interface"] = viol

    return PropertyReport(results, witnesses)
