"""Branch-and-bound searches over selector sets.

Both searches enumerate subsets of the rule space best-first by a score
lower bound, breaking ties by the lexicographic order of the selected
indices.  Children extend a node only with rules that could still repair
some unmet requirement (an uncovered example's fix options, a failing
consistency check, a violated constraint clause), which is complete: any
superset that repairs a requirement must contain one of its fix options.

`DeficiencySearch` evaluates coverage semantically through a TaskContext and
is used by the hypothesis searches that interleave solving and checking.
`ConstraintSearch` evaluates purely against accumulated coverage-constraint
formulas; its scores are the constraint-based approximation.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field

from .engine import ANY_RULE, ExampleEval, TaskContext
from .model import INFINITE


class ResourceExceeded(RuntimeError):
    """A search or translation exceeded its time or iteration budget."""


def _conflicts_mandatory(ctx, eid, mandatory) -> bool:
    """True when covering some mandatory example makes `eid` impossible to
    cover: same ground program, opposite polarity, and the negative one's
    partial interpretation is contained in the positive one's, so any
    accepting answer set for the positive side also accepts the negative."""
    ev = ctx.evals[eid]
    if not isinstance(ev, ExampleEval):
        return False
    for mid in mandatory:
        mev = ctx.evals[mid]
        if not isinstance(mev, ExampleEval) or mev.table is not ev.table:
            continue
        if mev.example.positive == ev.example.positive:
            continue
        pos, neg = (ev, mev) if ev.example.positive else (mev, ev)
        if (neg.pi.inclusions <= pos.pi.inclusions
                and neg.pi.exclusions <= pos.pi.exclusions):
            return True
    return False


def _check_budget(deadline, pops, max_pops, what):
    if deadline is not None and time.monotonic() > deadline:
        raise ResourceExceeded(f"{what}: time budget exceeded")
    if max_pops is not None and pops > max_pops:
        raise ResourceExceeded(f"{what}: iteration budget exceeded")


# ---------------------------------------------------------------------------
# Clauses over selectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClauseLit:
    """One disjunct: either "select at least one of `require`" or
    "select none of `forbid`"."""
    require: frozenset | None = None
    forbid: frozenset | None = None

    def holds(self, sel: frozenset) -> bool:
        if self.require is not None:
            return bool(sel & self.require)
        return not (sel & self.forbid)

    def fixable(self, sel: frozenset) -> bool:
        """Could the literal hold in some superset of sel?"""
        if self.require is not None:
            return bool(self.require)
        return not (sel & self.forbid)

    def __str__(self):
        if self.require is not None:
            return "any{%s}" % ",".join(map(str, sorted(self.require)))
        return "none{%s}" % ",".join(map(str, sorted(self.forbid)))


Clause = tuple  # tuple[ClauseLit, ...], a disjunction


def clause_holds(clause, sel: frozenset) -> bool:
    return any(lit.holds(sel) for lit in clause)


def clause_fixable(clause, sel: frozenset) -> bool:
    return any(lit.fixable(sel) for lit in clause)


def clause_options(clause, sel: frozenset) -> set:
    out = set()
    for lit in clause:
        if lit.require is not None:
            out |= lit.require - sel
    return out


def formula_holds(clauses, sel: frozenset) -> bool:
    return all(clause_holds(c, sel) for c in clauses)


# ---------------------------------------------------------------------------
# Semantic search
# ---------------------------------------------------------------------------

@dataclass
class Candidate:
    sel: frozenset
    length: int
    valid: bool
    failed_checks: tuple = ()
    score: float = INFINITE  # length + uncovered finite penalties (valid only)
    lb: float = 0  # pop-order bound: no later candidate scores below this


class DeficiencySearch:
    """Best-first stream of selector sets.

    mandatory: example ids that every yielded-valid candidate must cover.
    scored:    finite-penalty example ids whose penalties enter the score.
    checks:    (key, ok(sel), fix(sel)) triples; failing candidates are
               yielded as invalid and their fix options drive branching.
    """

    def __init__(self, ctx: TaskContext, mandatory=(), scored=(), checks=(),
                 deadline=None, max_pops=None):
        self.ctx = ctx
        self.mandatory = [eid for eid in ctx.order if eid in set(mandatory)]
        self.scored = [eid for eid in ctx.order if eid in set(scored)]
        self.checks = list(checks)
        self.deadline = deadline
        self.max_pops = max_pops
        self.pops = 0
        # finite examples that conflict with a mandatory one can never be
        # covered by a valid candidate; their penalty is a sunk cost
        self.sunk = frozenset(eid for eid in self.scored
                              if _conflicts_mandatory(ctx, eid, self.mandatory))

    def _sunk_penalty(self):
        return sum(self.ctx.penalty[eid] for eid in self.sunk)

    def _options(self, eid, sel):
        opts = self.ctx.evals[eid].fix_options(sel)
        if opts is ANY_RULE:
            return frozenset(range(len(self.ctx.space))) - sel
        return opts

    def stream(self):
        ctx = self.ctx
        n = len(ctx.space)
        start = frozenset()
        heap = [(0, (), start)]
        pushed = {start}

        while heap:
            lb, tie, sel = heapq.heappop(heap)
            self.pops += 1
            _check_budget(self.deadline, self.pops, self.max_pops, "program search")

            length = ctx.length(sel)
            unmet, dead = [], False
            for eid in self.mandatory:
                if not ctx.covered(eid, sel):
                    opts = self._options(eid, sel)
                    if not opts:
                        dead = True
                        break
                    unmet.append((eid, opts))
            if dead:
                continue

            failed = []
            if not unmet:
                for key, ok, fix in self.checks:
                    if not ok(sel):
                        failed.append((key, fix))

            score = length + self._sunk_penalty()
            true_lb = length + self._sunk_penalty()
            scored_opts = set()
            if not unmet and not failed:
                for eid in self.scored:
                    if eid in self.sunk:
                        continue
                    if not ctx.covered(eid, sel):
                        score += ctx.penalty[eid]
                        opts = self._options(eid, sel)
                        if not opts:
                            true_lb += ctx.penalty[eid]
                        else:
                            scored_opts |= opts
                if true_lb > lb:
                    # penalties that no extension can avoid; reorder lazily
                    heapq.heappush(heap, (true_lb, tie, sel))
                    continue

            yield Candidate(sel, length, valid=not unmet and not failed,
                            failed_checks=tuple(k for k, _ in failed),
                            score=score if (not unmet and not failed) else INFINITE,
                            lb=lb)

            if unmet:
                options = unmet[0][1]
            elif failed:
                options = failed[0][1](sel)
                if options is ANY_RULE:
                    options = frozenset(range(n)) - sel
            else:
                options = scored_opts
            for r in sorted(options):
                child = sel | {r}
                if child not in pushed:
                    pushed.add(child)
                    child_tie = tuple(sorted(child))
                    heapq.heappush(heap, (length + ctx.lengths[r], child_tie, child))

    def run(self, collect: int = 1):
        """Minimum-score valid candidates, ties broken lexicographically.
        Returns a list of (score, sel) with at most `collect` entries."""
        best_score = INFINITE
        best = []
        for cand in self.stream():
            if best_score < INFINITE and cand.lb > best_score:
                break
            if not cand.valid:
                continue
            if cand.score < best_score:
                best_score = cand.score
                best = [cand.sel]
            elif cand.score == best_score and best_score < INFINITE:
                best.append(cand.sel)
        best.sort(key=lambda s: tuple(sorted(s)))
        return [(best_score, s) for s in best[:collect]]


# ---------------------------------------------------------------------------
# Formula-only search (coverage constraints)
# ---------------------------------------------------------------------------

class ConstraintSearch:
    """Optimize length + penalties of examples attached to violated
    constraint groups.  Purely propositional: no coverage checks."""

    def __init__(self, ctx: TaskContext, groups, deadline=None, max_pops=None):
        self.ctx = ctx
        self.groups = list(groups)  # (clauses, ids)
        self.deadline = deadline
        self.max_pops = max_pops
        self.pops = 0

    def _evaluate(self, sel):
        """(score, lb, uncovered ids, branch options)"""
        ctx = self.ctx
        length = ctx.length(sel)
        uncov = set()
        doomed = set()
        hard_options = None  # options of the first violated hard group
        soft_options = set()
        for clauses, ids in self.groups:
            violated_clause = None
            fixable = False
            for c in clauses:
                if not clause_holds(c, sel):
                    if violated_clause is None:
                        violated_clause = c
                    if clause_fixable(c, sel):
                        violated_clause = c
                        fixable = True
                        break
            if violated_clause is None:
                continue
            uncov |= ids
            hard = any(ctx.penalty[eid] == INFINITE for eid in ids)
            if not fixable:
                doomed |= ids
            elif hard:
                # every acceptable candidate must repair this group
                if hard_options is None:
                    hard_options = clause_options(violated_clause, sel)
            else:
                soft_options |= clause_options(violated_clause, sel)
        score = length
        for eid in uncov:
            p = ctx.penalty[eid]
            score = INFINITE if p == INFINITE else score + p
            if score == INFINITE:
                break
        lb = length
        for eid in doomed:
            p = ctx.penalty[eid]
            lb = INFINITE if p == INFINITE else lb + p
            if lb == INFINITE:
                break
        options = hard_options if hard_options is not None else soft_options
        return score, lb, frozenset(uncov), frozenset(options - sel)

    def run(self, collect: int = 1):
        """Returns [(approx score, sel, uncovered ids)], best first."""
        start = frozenset()
        heap = [(0, (), start)]
        pushed = {start}
        best_score = INFINITE
        best = []
        while heap:
            key, tie, sel = heapq.heappop(heap)
            self.pops += 1
            _check_budget(self.deadline, self.pops, self.max_pops, "constraint search")
            score, lb, uncov, options = self._evaluate(sel)
            if lb > key:
                if lb < INFINITE:
                    heapq.heappush(heap, (lb, tie, sel))
                continue
            if best_score < INFINITE and key > best_score:
                break
            if score < best_score:
                best_score = score
                best = [(sel, uncov)]
            elif score == best_score and score < INFINITE:
                best.append((sel, uncov))
            length = self.ctx.length(sel)
            for r in sorted(options):
                child = sel | {r}
                if child not in pushed:
                    pushed.add(child)
                    heapq.heappush(heap, (length + self.ctx.lengths[r],
                                          tuple(sorted(child)), child))
        best.sort(key=lambda pair: tuple(sorted(pair[0])))
        return [(best_score, sel, uncov) for sel, uncov in best[:collect]]
