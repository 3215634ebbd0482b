"""Shared evaluation machinery for the learners.

A `TaskContext` grounds the background, each example's context and every
rule-space candidate together (once per distinct base program), and answers
coverage queries for arbitrary selector sets (subsets of the rule space).

For examples whose answer sets range over a small set of undetermined atoms,
coverage is decided by *witness analysis*: every potential accepting answer
set A is enumerated up front, and for each candidate rule we precompute
whether it breaks A (some instance is unsatisfied) and which reduct
instances it contributes towards deriving A.  A selector set then accepts A
iff it picks no breaker and its instances close the derivation of A.  This
also yields, for an uncovered example, the exact set of rules whose addition
could still fix it, which drives the branch-and-bound searches.

Examples with too many undetermined atoms fall back to solver queries.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .bias import build_rule_space
from .grounding import GroundProgram, ground_parts
from .model import (
    ChoiceRule,
    HardConstraint,
    INFINITE,
    NormalRule,
    PartialInterpretation,
    Program,
    WeakConstraint,
    normalize_costs,
    program_length,
)
from .solver import SolveQuery, answer_sets, atom_order_key, dominates, is_answer_set

# Sentinel for "any remaining rule could help" (query-mode fallback).
ANY_RULE = object()

_BASE = -1  # grounding tag for background + context rules


def _broken_by(rule, atoms) -> bool:
    """Does the interpretation fail to satisfy this ground rule?"""
    if isinstance(rule, WeakConstraint):
        return False
    sat = all((e.atom in atoms) != e.negated for e in rule.body)
    if not sat:
        return False
    if isinstance(rule, NormalRule):
        return rule.head not in atoms
    if isinstance(rule, HardConstraint):
        return True
    chosen = sum(1 for h in rule.heads if h in atoms)
    return not rule.lower <= chosen <= rule.upper


def _reduct_instances(rule, atoms):
    """Support instances (head, positive body) this rule contributes to the
    reduct w.r.t. the interpretation; only derivations staying inside the
    interpretation are kept."""
    out = []
    if isinstance(rule, (NormalRule, ChoiceRule)):
        neg_ok = all(e.atom not in atoms for e in rule.body if e.negated)
        if neg_ok:
            pos = frozenset(e.atom for e in rule.body if not e.negated)
            if pos <= atoms:
                heads = (rule.head,) if isinstance(rule, NormalRule) else rule.heads
                for h in heads:
                    if h in atoms:
                        out.append((h, pos))
    return out


def _weak_tuples(rule, atoms) -> frozenset:
    if not isinstance(rule, WeakConstraint):
        return frozenset()
    if all((e.atom in atoms) != e.negated for e in rule.body):
        return frozenset({(rule.weight.value, rule.level, rule.terms)})
    return frozenset()


def _closure(seed, instance_lists, goal=None):
    lm = set(seed)
    changed = True
    while changed:
        changed = False
        for insts in instance_lists:
            for head, pos in insts:
                if head not in lm and pos <= lm:
                    lm.add(head)
                    changed = True
        if goal is not None and goal <= lm:
            break
    return lm


class _WitnessData:
    """Per-interpretation analysis of the whole grounding table."""

    __slots__ = ("atoms", "base_ok", "breakers", "derivers", "weak", "base_insts",
                 "base_lm", "base_weak")

    def __init__(self, table, atoms: frozenset):
        self.atoms = atoms
        self.base_ok = True
        self.breakers = set()
        self.derivers = {}
        self.weak = {}
        base_insts = []
        base_weak = set()
        for tag, rules in table.rules_by_tag.items():
            if tag == _BASE:
                for r in rules:
                    if _broken_by(r, atoms):
                        self.base_ok = False
                    base_insts.extend(_reduct_instances(r, atoms))
                    base_weak |= _weak_tuples(r, atoms)
            else:
                insts = []
                tuples = set()
                for r in rules:
                    if _broken_by(r, atoms):
                        self.breakers.add(tag)
                    insts.extend(_reduct_instances(r, atoms))
                    tuples |= _weak_tuples(r, atoms)
                if insts:
                    self.derivers[tag] = tuple(insts)
                if tuples:
                    self.weak[tag] = frozenset(tuples)
        self.breakers = frozenset(self.breakers)
        self.base_insts = tuple(base_insts)
        self.base_weak = frozenset(base_weak)
        self.base_lm = frozenset(_closure((), [base_insts])) if self.base_ok else frozenset()

    def accepting(self, sel: frozenset) -> bool:
        if not self.base_ok or (sel & self.breakers):
            return False
        gap = self.atoms - self.base_lm
        if not gap:
            return True
        lists = [self.base_insts]
        lists.extend(self.derivers[s] for s in sel if s in self.derivers)
        lm = _closure(self.base_lm, lists, goal=self.atoms)
        return self.atoms <= lm

    def gap(self, sel: frozenset) -> frozenset:
        """Atoms of the witness left unsupported by the selection."""
        lists = [self.base_insts]
        lists.extend(self.derivers[s] for s in sel if s in self.derivers)
        lm = _closure(self.base_lm, lists, goal=self.atoms)
        return self.atoms - frozenset(lm)

    def external_derivers(self, gap: frozenset) -> frozenset:
        """Rules able to derive a gap atom from outside the gap; any selector
        set that supports the whole witness must include one of these."""
        outside = self.atoms - gap
        out = set()
        for tag, insts in self.derivers.items():
            for head, pos in insts:
                if head in gap and pos <= outside:
                    out.add(tag)
                    break
        return frozenset(out)

    def cost(self, sel: frozenset) -> dict:
        tuples = set(self.base_weak)
        for s in sel:
            if s in self.weak:
                tuples |= self.weak[s]
        costs = {}
        for w, level, _terms in tuples:
            costs[level] = costs.get(level, 0) + w
        return normalize_costs(costs)

    def active_weak(self) -> frozenset:
        return frozenset(self.weak)


class _GroundTable:
    """Joint grounding of background + one context + the whole rule space."""

    def __init__(self, ctx, base_program: Program):
        parts = [(_BASE, r) for r in base_program.rules]
        parts.extend((i, r) for i, r in enumerate(ctx.space.rules))
        tagged, universe, possible, false_tags = ground_parts(parts)
        self.rules_by_tag = {}
        for tag, rule in tagged:
            self.rules_by_tag.setdefault(tag, []).append(rule)
        self.universe = universe
        self.possible = possible
        self.base_inconsistent = _BASE in false_tags
        self.false_sels = frozenset(t for t in false_tags if t != _BASE)
        self.base_rules = tuple(self.rules_by_tag.get(_BASE, ()))
        self._witnesses: dict = {}
        self._certain = None

    @property
    def certain(self) -> frozenset:
        """Atoms true in every answer set regardless of the selection."""
        if self._certain is None:
            certain = set()
            usable = []
            for r in self.base_rules:
                if isinstance(r, NormalRule) and all(
                        e.atom not in self.possible for e in r.body if e.negated):
                    usable.append((r.head, [e.atom for e in r.body if not e.negated]))
            changed = True
            while changed:
                changed = False
                for head, pos in usable:
                    if head not in certain and all(p in certain for p in pos):
                        certain.add(head)
                        changed = True
            self._certain = frozenset(certain)
        return self._certain

    def witness(self, atoms: frozenset) -> _WitnessData:
        data = self._witnesses.get(atoms)
        if data is None:
            data = self._witnesses[atoms] = _WitnessData(self, atoms)
        return data

    def assemble(self, sel: frozenset) -> GroundProgram:
        rules = list(self.base_rules)
        for s in sorted(sel):
            rules.extend(self.rules_by_tag.get(s, ()))
        return GroundProgram(tuple(rules), self.universe,
                             self.base_inconsistent or bool(sel & self.false_sels))


class ExampleEval:
    """Coverage evaluation of a single CDPI example over selector sets."""

    def __init__(self, ctx, example):
        self.ctx = ctx
        self.example = example
        self.table = ctx.table_for(example.context)
        self.pi = example.pi
        t = self.table
        self.witness_atoms = None  # None = query mode
        if not t.base_inconsistent and not self.pi.inclusions <= t.possible:
            self.witness_atoms = ()  # no interpretation can ever accept
        elif t.base_inconsistent or t.certain & self.pi.exclusions:
            self.witness_atoms = ()
        else:
            fixed = t.certain | self.pi.inclusions
            free = sorted(t.possible - fixed - self.pi.exclusions, key=atom_order_key)
            if len(free) <= ctx.witness_cap:
                candidates = []
                for k in range(len(free) + 1):
                    for combo in itertools.combinations(free, k):
                        atoms = frozenset(fixed | set(combo))
                        if t.witness(atoms).base_ok:
                            candidates.append(atoms)
                self.witness_atoms = tuple(candidates)
        self._witness_set = frozenset(self.witness_atoms or ())

    @property
    def witness_mode(self) -> bool:
        return self.witness_atoms is not None

    def covered(self, sel: frozenset) -> bool:
        has = bool(self.accepting_sets(sel, limit=1))
        return has if self.example.positive else not has

    def accepting_sets(self, sel: frozenset, limit=None) -> list:
        if sel & self.table.false_sels:
            return []  # an always-violated constraint was selected
        if self.witness_mode:
            out = []
            for a in self.witness_atoms:
                if self.table.witness(a).accepting(sel):
                    out.append(a)
                    if limit is not None and len(out) >= limit:
                        break
            return out
        self.ctx.stats["solver_calls"] += 1
        return answer_sets(SolveQuery(self.table.assemble(sel), self.pi, limit))

    def is_accepting(self, atoms: frozenset, sel: frozenset) -> bool:
        if not self.pi.accepts(atoms) or sel & self.table.false_sels:
            return False
        if self.witness_mode:
            if atoms not in self._witness_set:
                return False
            return self.table.witness(atoms).accepting(sel)
        self.ctx.stats["solver_calls"] += 1
        return is_answer_set(self.table.assemble(sel), atoms)

    def breaker_set(self, atoms: frozenset) -> frozenset:
        """Rules whose selection stops `atoms` from being an answer set."""
        return self.table.witness(atoms).breakers | self.table.false_sels

    def cost(self, atoms: frozenset, sel: frozenset) -> dict:
        if self.witness_mode:
            return self.table.witness(atoms).cost(sel)
        from .solver import cost_vector
        return cost_vector(self.table.assemble(sel), atoms)

    def fix_options(self, sel: frozenset):
        """Rules whose addition could flip this (currently uncovered) example
        to covered; frozenset() when nothing can, ANY_RULE in query mode."""
        if not self.witness_mode:
            return ANY_RULE
        options = set()
        if self.example.positive:
            for a in self.witness_atoms:
                w = self.table.witness(a)
                if sel & w.breakers or not w.base_ok:
                    continue
                gap = w.gap(sel)
                if not gap:
                    continue  # already accepting (can happen mid-analysis)
                options |= w.external_derivers(gap)
        else:
            for a in self.witness_atoms:
                w = self.table.witness(a)
                if w.accepting(sel):
                    options |= (w.breakers - sel) | (self.table.false_sels - sel)
                    break
        return frozenset(options - sel)

    def relevant_rules(self) -> frozenset:
        """Every rule that can interact with this example at all."""
        if not self.witness_mode:
            return frozenset(range(len(self.ctx.space)))
        out = set(self.table.false_sels)
        for a in self.witness_atoms:
            w = self.table.witness(a)
            out |= w.breakers | set(w.derivers) | set(w.weak)
        return frozenset(out)


class OrderingEval:
    """Coverage evaluation of a brave or cautious ordering example."""

    def __init__(self, ctx, ordering):
        self.ctx = ctx
        self.ordering = ordering
        self.left = ctx.cdpi[ordering.left_id]
        self.right = ctx.cdpi[ordering.right_id]

    @property
    def witness_mode(self) -> bool:
        return self.left.witness_mode and self.right.witness_mode

    def _sides(self, sel):
        return self.left.accepting_sets(sel), self.right.accepting_sets(sel)

    def covered(self, sel: frozenset) -> bool:
        o = self.ordering
        s1, s2 = self._sides(sel)
        if o.cautious:
            # vacuously covered when either side has no accepting answer sets
            for a1 in s1:
                c1 = self.left.cost(a1, sel)
                for a2 in s2:
                    if not dominates(c1, self.right.cost(a2, sel), o.op):
                        return False
            return True
        for a1 in s1:
            c1 = self.left.cost(a1, sel)
            for a2 in s2:
                if dominates(c1, self.right.cost(a2, sel), o.op):
                    return True
        return False

    def violating_pair(self, sel: frozenset):
        """For a cautious ordering: the first pair of accepting answer sets
        ordered the wrong way, or None."""
        o = self.ordering
        s1, s2 = self._sides(sel)
        for a1 in s1:
            c1 = self.left.cost(a1, sel)
            for a2 in s2:
                if not dominates(c1, self.right.cost(a2, sel), o.op):
                    return a1, a2
        return None

    def pair_fix_options(self, a1, a2, sel: frozenset):
        """Rules that could repair the ordering of one concrete pair: break
        either side or shift a weak-constraint cost on either interpretation."""
        if not self.witness_mode:
            return ANY_RULE
        w1 = self.left.table.witness(a1)
        w2 = self.right.table.witness(a2)
        options = (w1.breakers | w2.breakers | w1.active_weak() | w2.active_weak()
                   | self.left.table.false_sels | self.right.table.false_sels)
        return frozenset(options - sel)

    def fix_options(self, sel: frozenset):
        if not self.witness_mode:
            return ANY_RULE
        o = self.ordering
        options = set()
        if o.cautious:
            pair = self.violating_pair(sel)
            if pair is None:
                return frozenset()
            res = self.pair_fix_options(pair[0], pair[1], sel)
            return res
        # brave: unlock further accepting sets on either side ...
        for side in (self.left, self.right):
            for a in side.witness_atoms:
                w = side.table.witness(a)
                if sel & w.breakers or not w.base_ok:
                    continue
                gap = w.gap(sel)
                if gap:
                    options |= w.external_derivers(gap)
        # ... or shift weak costs on some currently accepting pair
        s1, s2 = self._sides(sel)
        for a1 in s1:
            w1 = self.left.table.witness(a1)
            for a2 in s2:
                w2 = self.right.table.witness(a2)
                options |= w1.active_weak() | w2.active_weak()
        return frozenset(options - sel)

    def relevant_rules(self) -> frozenset:
        if not self.witness_mode:
            return frozenset(range(len(self.ctx.space)))
        return self.left.relevant_rules() | self.right.relevant_rules()


class TaskContext:
    """Everything the searches need to evaluate selector sets over one task."""

    def __init__(self, task, space=None, witness_cap: int = 6):
        self.task = task
        self.space = space if space is not None else build_rule_space(task.mode_bias, task.config)
        self.lengths = self.space.lengths
        self.witness_cap = witness_cap
        self.stats = {"solver_calls": 0}
        self._tables: dict = {}
        self.cdpi = {}
        for e in task.examples:
            self.cdpi[e.id] = ExampleEval(self, e)
        self.orderings = {}
        for o in task.orderings:
            self.orderings[o.id] = OrderingEval(self, o)
        self.evals = {**self.cdpi, **self.orderings}
        self.penalty = {eid: ev_penalty(self.evals[eid]) for eid in self.evals}
        self.order = [e.id for e in task.examples] + [o.id for o in task.orderings]
        self._covered_memo: dict = {}

    def table_for(self, context: Program) -> _GroundTable:
        base = self.task.background.union(context)
        key = base.canonical()
        table = self._tables.get(key)
        if table is None:
            table = self._tables[key] = _GroundTable(self, base)
        return table

    # -- selector-set evaluation -------------------------------------------

    def length(self, sel: frozenset) -> int:
        return sum(self.lengths[s] for s in sel)

    def covered(self, eid: str, sel: frozenset) -> bool:
        key = (eid, sel)
        hit = self._covered_memo.get(key)
        if hit is None:
            hit = self._covered_memo[key] = self.evals[eid].covered(sel)
        return hit

    def uncovered(self, sel: frozenset, ids=None) -> list:
        ids = self.order if ids is None else ids
        return [eid for eid in ids if not self.covered(eid, sel)]

    def score(self, sel: frozenset, ids=None):
        total = self.length(sel)
        for eid in self.uncovered(sel, ids):
            p = self.penalty[eid]
            if p == INFINITE:
                return INFINITE
            total += p
        return total

    def program(self, sel: frozenset) -> Program:
        return Program(tuple(self.space.rules[s] for s in sorted(sel)))


def ev_penalty(ev):
    return ev.example.penalty if isinstance(ev, ExampleEval) else ev.ordering.penalty
