"""Range expansion and safe ground instantiation.

The Herbrand universe is the set of constants and integers syntactically
present in the program being grounded.  Instantiation of a non-ground rule
keeps an instance only if every positive body atom is possibly derivable
(head of some rule instance reachable in the same fixpoint), which preserves
the stable models while avoiding useless instances.  Built-in comparison
literals are evaluated away during instantiation: satisfied ones are dropped,
failing ones discard the instance.  Rules that are already ground pass
through untouched.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .model import (
    Atom,
    ChoiceRule,
    Comparison,
    Const,
    HardConstraint,
    IntConst,
    IntRange,
    Literal,
    NormalRule,
    Program,
    Var,
    WeakConstraint,
    eval_comparison,
    head_atoms,
    is_ground,
    substitute,
    term_key,
)


class WeightError(ValueError):
    """A weak constraint weight grounded to a non-integer."""


@dataclass(frozen=True)
class GroundProgram:
    rules: tuple
    atom_universe: frozenset
    # An always-violated constraint appeared (e.g. ":- 1 = 1."): no answer sets.
    inconsistent: bool = False


def _expand_rule(r) -> list:
    if not _has_range(r):
        return [r]
    if not (isinstance(r, NormalRule) and not r.body):
        raise ValueError(f"integer range outside a fact: {r}")
    choices = [
        [IntConst(v) for v in range(t.lo, t.hi + 1)] if isinstance(t, IntRange) else [t]
        for t in r.head.args
    ]
    return [NormalRule(Atom(r.head.pred, tuple(combo)))
            for combo in itertools.product(*choices)]


def expand_ranges(p: Program) -> Program:
    """Replace ``lo..hi`` arguments of facts by one fact per combination.

    An empty range (lo > hi) expands to no facts.  Ranges anywhere else are
    rejected.
    """
    out = []
    for r in p.rules:
        out.extend(_expand_rule(r))
    return Program(tuple(out))


def _has_range(rule) -> bool:
    for a in head_atoms(rule):
        if any(isinstance(t, IntRange) for t in a.args):
            return True
    for e in rule.body:
        if isinstance(e, Literal) and any(isinstance(t, IntRange) for t in e.atom.args):
            return True
    return False


def _split_body(rule):
    pos, neg, cmps = [], [], []
    for e in rule.body:
        if isinstance(e, Comparison):
            cmps.append(e)
        elif e.negated:
            neg.append(e)
        else:
            pos.append(e)
    return pos, neg, cmps


def _match_atom(pattern: Atom, fact: Atom, binding: dict) -> dict | None:
    if pattern.pred != fact.pred or len(pattern.args) != len(fact.args):
        return None
    new = dict(binding)
    for pat, val in zip(pattern.args, fact.args):
        if isinstance(pat, Var):
            bound = new.get(pat.name)
            if bound is None:
                new[pat.name] = val
            elif bound != val:
                return None
        elif pat != val:
            return None
    return new


def _matches(rule, by_pred, pos, cmps):
    """All substitutions making every positive body atom possibly derivable
    and every comparison true.  Safety makes these bindings total."""
    def step(i, binding):
        if i == len(pos):
            if all(eval_comparison(c.op, _bind(c.left, binding), _bind(c.right, binding))
                   for c in cmps):
                yield binding
            return
        atom = pos[i].atom
        for fact in by_pred.get((atom.pred, len(atom.args)), ()):
            new = _match_atom(atom, fact, binding)
            if new is not None:
                yield from step(i + 1, new)

    yield from step(0, {})


def _bind(term, binding):
    if isinstance(term, Var):
        return binding[term.name]
    return term


def _evaluate_ground_comparisons(rule):
    """Drop satisfied comparisons from a ground rule; None if one fails."""
    kept = []
    for e in rule.body:
        if isinstance(e, Comparison):
            if not eval_comparison(e.op, e.left, e.right):
                return None
        else:
            kept.append(e)
    body = tuple(kept)
    if isinstance(rule, NormalRule):
        return NormalRule(rule.head, body)
    if isinstance(rule, ChoiceRule):
        return ChoiceRule(rule.lower, rule.heads, rule.upper, body)
    if isinstance(rule, HardConstraint):
        return HardConstraint(body)
    return WeakConstraint(body, rule.weight, rule.level, rule.terms)


def ground_parts(parts) -> tuple[list, frozenset, frozenset, frozenset]:
    """Ground a list of (tag, Rule) pairs jointly, keeping the attribution.

    Returns (list of (tag, ground rule), atom universe, possibly-derivable
    atoms, tags that produced an always-violated constraint).
    """
    expanded = []
    for tag, rule in parts:
        expanded.extend((tag, r) for r in _expand_rule(rule))

    possible = set()
    by_pred: dict = {}

    def add_possible(atom):
        if atom not in possible:
            possible.add(atom)
            by_pred.setdefault((atom.pred, len(atom.args)), []).append(atom)
            return True
        return False

    prepared = []
    for tag, rule in expanded:
        pos, neg, cmps = _split_body(rule)
        prepared.append((tag, rule, pos, neg, cmps, is_ground(rule)))

    changed = True
    while changed:
        changed = False
        for tag, rule, pos, neg, cmps, ground_rule in prepared:
            if ground_rule:
                if all(lit.atom in possible for lit in pos) and \
                   all(eval_comparison(c.op, c.left, c.right) for c in cmps):
                    for h in head_atoms(rule):
                        changed |= add_possible(h)
            else:
                for binding in _matches(rule, by_pred, pos, cmps):
                    for h in head_atoms(rule):
                        changed |= add_possible(substitute(NormalRule(h), binding).head)

    out = []
    false_tags = set()
    for tag, rule, pos, neg, cmps, ground_rule in prepared:
        if ground_rule:
            simplified = _evaluate_ground_comparisons(rule)
            if simplified is None:
                continue
            if isinstance(simplified, HardConstraint) and not simplified.body:
                false_tags.add(tag)
                continue
            out.append((tag, simplified))
        else:
            instances = []
            for binding in _matches(rule, by_pred, pos, cmps):
                inst = substitute(rule, binding)
                if isinstance(inst, WeakConstraint) and not isinstance(inst.weight, IntConst):
                    raise WeightError(f"weight {inst.weight} is not an integer in: {inst}")
                inst = _evaluate_ground_comparisons(inst)
                instances.append(inst)
            instances.sort(key=_instance_key)
            out.extend((tag, inst) for inst in instances)

    universe = set()
    for _, rule in out:
        for a in head_atoms(rule):
            universe.add(a)
        for e in rule.body:
            universe.add(e.atom)
    return out, frozenset(universe), frozenset(possible), frozenset(false_tags)


def _instance_key(rule):
    keys = [tuple(term_key(t) for t in a.args) for a in head_atoms(rule)]
    for e in rule.body:
        keys.append(tuple(term_key(t) for t in e.atom.args))
    return keys


def ground(p: Program) -> GroundProgram:
    """Ground instantiation of a safe program (ranges expanded first)."""
    tagged, universe, _possible, false_tags = ground_parts(
        [(i, r) for i, r in enumerate(p.rules)])
    return GroundProgram(tuple(r for _, r in tagged), universe, bool(false_tags))
