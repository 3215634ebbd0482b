"""Answer-set enumeration, stable-model checking and weak-constraint costs.

The enumerator does a depth-first search over atom truth assignments in a
fixed atom order (false branch first), interleaved with propagation:

  * a satisfied normal-rule body forces its head true;
  * a satisfied constraint body is a conflict, an almost-satisfied one is
    falsified through its last open literal;
  * choice-rule cardinality bounds force or forbid remaining head atoms;
  * an atom whose every potential supporting rule is blocked is forced false.

Total assignments that survive propagation are verified with a full
stability check (model of the program, bounds respected, and equality with
the least model of the reduct), which is also exposed as `is_answer_set`.
Weak constraints never influence which answer sets exist; they are only
evaluated by `cost_vector` / `dominates`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .grounding import GroundProgram
from .model import (
    ChoiceRule,
    Comparison,
    HardConstraint,
    NormalRule,
    PartialInterpretation,
    WeakConstraint,
    normalize_costs,
    term_key,
)


@dataclass(frozen=True)
class SolveQuery:
    program: GroundProgram
    required: PartialInterpretation = PartialInterpretation()
    limit: int | None = None


def atom_order_key(atom):
    return (atom.pred, len(atom.args), tuple(term_key(t) for t in atom.args))


class _Compiled:
    """Integer-indexed view of a ground program (weak constraints split off)."""

    def __init__(self, gp: GroundProgram):
        self.atoms = sorted(gp.atom_universe, key=atom_order_key)
        self.index = {a: i for i, a in enumerate(self.atoms)}
        self.normals = []      # (head, pos, neg)
        self.constraints = []  # (pos, neg)
        self.choices = []      # (lower, upper, heads, pos, neg)
        self.weaks = []        # (weight, level, terms, pos, neg)
        self.inconsistent = gp.inconsistent
        for r in gp.rules:
            if any(isinstance(e, Comparison) for e in r.body):
                raise ValueError(f"solver expects comparison-free ground rules: {r}")
            pos = tuple(self.index[e.atom] for e in r.body if not e.negated)
            neg = tuple(self.index[e.atom] for e in r.body if e.negated)
            if isinstance(r, NormalRule):
                self.normals.append((self.index[r.head], pos, neg))
            elif isinstance(r, HardConstraint):
                self.constraints.append((pos, neg))
            elif isinstance(r, ChoiceRule):
                heads = tuple(self.index[a] for a in r.heads)
                self.choices.append((r.lower, r.upper, heads, pos, neg))
            elif isinstance(r, WeakConstraint):
                self.weaks.append((r.weight.value, r.level, r.terms, pos, neg))
        # potential supporters per atom: (pos, neg) bodies of rules that can derive it
        self.supports = [[] for _ in self.atoms]
        for head, pos, neg in self.normals:
            self.supports[head].append((pos, neg))
        for lower, upper, heads, pos, neg in self.choices:
            for h in heads:
                self.supports[h].append((pos, neg))

    # -- propagation -------------------------------------------------------

    def propagate(self, assign) -> bool:
        """Close `assign` (list of None/True/False) under the propagation
        rules; False signals a conflict."""
        changed = True
        while changed:
            changed = False

            def set_(i, value):
                nonlocal changed
                if assign[i] is None:
                    assign[i] = value
                    changed = True
                    return True
                return assign[i] is value

            for head, pos, neg in self.normals:
                state = _body_state(assign, pos, neg)
                if state is True and not set_(head, True):
                    return False
                if assign[head] is False and state is None:
                    open_lit = _single_open(assign, pos, neg)
                    if open_lit is not None:
                        i, positive = open_lit
                        if not set_(i, not positive):
                            return False

            for pos, neg in self.constraints:
                state = _body_state(assign, pos, neg)
                if state is True:
                    return False
                if state is None:
                    open_lit = _single_open(assign, pos, neg)
                    if open_lit is not None:
                        i, positive = open_lit
                        if not set_(i, not positive):
                            return False

            for lower, upper, heads, pos, neg in self.choices:
                if _body_state(assign, pos, neg) is not True:
                    continue
                t = sum(1 for h in heads if assign[h] is True)
                u = sum(1 for h in heads if assign[h] is None)
                if t > upper or t + u < lower:
                    return False
                if t == upper and u:
                    for h in heads:
                        if assign[h] is None and not set_(h, False):
                            return False
                elif t + u == lower and u:
                    for h in heads:
                        if assign[h] is None and not set_(h, True):
                            return False

            for i in range(len(self.atoms)):
                if assign[i] is False:
                    continue
                if all(_body_state(assign, pos, neg) is False
                       for pos, neg in self.supports[i]):
                    if not set_(i, False):
                        return False
        return True

    # -- stability ---------------------------------------------------------

    def stable(self, true_set: frozenset) -> bool:
        """Is the given set of atom indices a stable model?"""
        for head, pos, neg in self.normals:
            if head not in true_set and _sat(true_set, pos, neg):
                return False
        for pos, neg in self.constraints:
            if _sat(true_set, pos, neg):
                return False
        for lower, upper, heads, pos, neg in self.choices:
            if _sat(true_set, pos, neg):
                chosen = sum(1 for h in heads if h in true_set)
                if not lower <= chosen <= upper:
                    return False
        # least model of the reduct
        lm = set()
        reduct = [(head, pos) for head, pos, neg in self.normals
                  if not any(n in true_set for n in neg)]
        for lower, upper, heads, pos, neg in self.choices:
            if not any(n in true_set for n in neg):
                reduct.extend((h, pos) for h in heads if h in true_set)
        changed = True
        while changed:
            changed = False
            for head, pos in reduct:
                if head not in lm and all(p in lm for p in pos):
                    lm.add(head)
                    changed = True
        return true_set <= lm


def _body_state(assign, pos, neg):
    """True: satisfied; False: falsified; None: open."""
    state = True
    for i in pos:
        v = assign[i]
        if v is False:
            return False
        if v is None:
            state = None
    for i in neg:
        v = assign[i]
        if v is True:
            return False
        if v is None:
            state = None
    return state


def _single_open(assign, pos, neg):
    """The single unassigned literal of an otherwise satisfied body, as
    (atom index, positive?), or None."""
    found = None
    for i in pos:
        v = assign[i]
        if v is False:
            return None
        if v is None:
            if found is not None:
                return None
            found = (i, True)
    for i in neg:
        v = assign[i]
        if v is True:
            return None
        if v is None:
            if found is not None:
                return None
            found = (i, False)
    return found


def _sat(true_set, pos, neg):
    return all(p in true_set for p in pos) and not any(n in true_set for n in neg)


def answer_sets_iter(q: SolveQuery):
    """Generate the answer sets of the query, in the enumeration order."""
    gp = q.program
    if gp.inconsistent:
        return
    c = _Compiled(gp)
    assign = [None] * len(c.atoms)
    for a in q.required.inclusions:
        i = c.index.get(a)
        if i is None:
            return  # a required atom the program can never produce
        assign[i] = True
    for a in q.required.exclusions:
        i = c.index.get(a)
        if i is not None:
            assign[i] = False

    def search(assign):
        if not c.propagate(assign):
            return
        try:
            branch = assign.index(None)
        except ValueError:
            true_set = frozenset(i for i, v in enumerate(assign) if v)
            if c.stable(true_set):
                yield frozenset(c.atoms[i] for i in true_set)
            return
        for value in (False, True):
            child = list(assign)
            child[branch] = value
            yield from search(child)

    yield from search(assign)


def answer_sets(q: SolveQuery) -> list:
    """Up to `limit` answer sets extending the required partial
    interpretation, in a deterministic order."""
    out = []
    for model in answer_sets_iter(q):
        out.append(model)
        if q.limit is not None and len(out) >= q.limit:
            break
    return out


def is_answer_set(p: GroundProgram, interpretation: frozenset) -> bool:
    """Stable-model membership test; polynomial in the program size."""
    if p.inconsistent:
        return False
    c = _Compiled(p)
    indices = set()
    for a in interpretation:
        i = c.index.get(a)
        if i is None:
            return False  # atoms outside the universe can never be supported
        indices.add(i)
    return c.stable(frozenset(indices))


def cost_vector(p: GroundProgram, interpretation: frozenset) -> dict:
    """Total weak-constraint cost per priority level.

    Each distinct satisfied ground tuple (weight, level, terms) contributes
    its weight once, mirroring the usual weak-constraint semantics.
    """
    tuples = set()
    for r in p.rules:
        if not isinstance(r, WeakConstraint):
            continue
        sat = all(
            (e.atom in interpretation) != e.negated
            for e in r.body
        )
        if sat:
            tuples.add((r.weight.value, r.level, r.terms))
    costs = {}
    for w, level, _terms in tuples:
        costs[level] = costs.get(level, 0) + w
    return normalize_costs(costs)


def dominates(c1: dict, c2: dict, op: str) -> bool:
    """Compare cost vectors under a comparison operator.

    ``<`` holds when, at the highest priority level where the vectors
    differ, the first has the lower cost (lower cost is better).
    """
    if op == ">":
        return dominates(c2, c1, "<")
    if op == ">=":
        return dominates(c2, c1, "<=")
    levels = set(c1) | set(c2)
    if op == "=":
        return all(c1.get(l, 0) == c2.get(l, 0) for l in levels)
    if op == "!=":
        return not dominates(c1, c2, "=")
    for level in sorted(levels, reverse=True):
        a, b = c1.get(level, 0), c2.get(level, 0)
        if a != b:
            return a < b
    return op == "<="
