"""Example coverage and hypothesis scoring.

A positive example is covered when some answer set of background +
hypothesis + context extends its partial interpretation; a negative example
when none does.  A brave ordering needs one pair of accepting answer sets
whose cost vectors satisfy the comparison, a cautious ordering needs every
pair to (vacuously true when either side has no accepting answer set).

The hypothesis score is its length plus the penalties of the examples it
leaves uncovered; leaving an infinite-penalty example uncovered makes the
score infinite.
"""

from __future__ import annotations

from dataclasses import dataclass

from .grounding import ground
from .model import (
    CDPIExample,
    INFINITE,
    LearningTask,
    OrderingExample,
    Program,
    program_length,
)
from .solver import SolveQuery, answer_sets, answer_sets_iter, cost_vector, dominates


def accepting_sets(task: LearningTask, hypothesis: Program, example: CDPIExample,
                   limit: int | None = None) -> list:
    """Answer sets of B + H + C extending the example's partial
    interpretation, up to `limit`."""
    gp = ground(task.background.union(hypothesis, example.context))
    return answer_sets(SolveQuery(gp, example.pi, limit))


def covers(task: LearningTask, hypothesis: Program, example: CDPIExample) -> bool:
    has_one = bool(accepting_sets(task, hypothesis, example, limit=1))
    return has_one if example.positive else not has_one


def covers_ordering(task: LearningTask, hypothesis: Program,
                    ordering: OrderingExample) -> bool:
    """Brave orderings stop at the first satisfying pair; cautious orderings
    check every pair exhaustively."""
    left = task.example(ordering.left_id)
    right = task.example(ordering.right_id)
    gp_left = ground(task.background.union(hypothesis, left.context))
    gp_right = ground(task.background.union(hypothesis, right.context))
    rights = [(a2, cost_vector(gp_right, a2))
              for a2 in answer_sets(SolveQuery(gp_right, right.pi))]
    if ordering.cautious:
        for a1 in answer_sets_iter(SolveQuery(gp_left, left.pi)):
            c1 = cost_vector(gp_left, a1)
            for _a2, c2 in rights:
                if not dominates(c1, c2, ordering.op):
                    return False
        return True
    for a1 in answer_sets_iter(SolveQuery(gp_left, left.pi)):
        c1 = cost_vector(gp_left, a1)
        for _a2, c2 in rights:
            if dominates(c1, c2, ordering.op):
                return True
    return False


@dataclass(frozen=True)
class CoverageReport:
    covered: dict
    witnesses: dict
    vacuous_orderings: frozenset
    total_penalty: float
    score: float


def coverage_report(task: LearningTask, hypothesis: Program) -> CoverageReport:
    covered = {}
    witnesses = {}
    vacuous = set()
    total = 0
    for e in task.examples:
        sets = accepting_sets(task, hypothesis, e, limit=1)
        covered[e.id] = bool(sets) if e.positive else not sets
        if e.positive and sets:
            witnesses[e.id] = sets[0]
    for o in task.orderings:
        covered[o.id] = covers_ordering(task, hypothesis, o)
        if o.cautious and covered[o.id]:
            if not (accepting_sets(task, hypothesis, task.example(o.left_id), limit=1)
                    and accepting_sets(task, hypothesis, task.example(o.right_id), limit=1)):
                vacuous.add(o.id)
    infinite = False
    for item in (*task.examples, *task.orderings):
        if not covered[item.id]:
            if item.penalty == INFINITE:
                infinite = True
            else:
                total += item.penalty
    return CoverageReport(
        covered=covered,
        witnesses=witnesses,
        vacuous_orderings=frozenset(vacuous),
        total_penalty=total,
        score=INFINITE if infinite else program_length(hypothesis) + total,
    )


def score(task: LearningTask, hypothesis: Program):
    """program length + summed penalties of uncovered examples, or infinite
    when an infinite-penalty example is uncovered."""
    return coverage_report(task, hypothesis).score
