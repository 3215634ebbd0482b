"""The learning strategies.

All strategies return an optimal solution of the task (minimum length plus
penalties of uncovered examples), or None when no program in the space is a
solution:

  * `learn_bruteforce` scores every subset of the rule space (test oracle).
  * `learn_ilasp1` enumerates programs by increasing length, discarding the
    violating ones (those that cover the positive obligations but break a
    negative example or cautious ordering), and returns the first program
    that covers everything.  Noise-free tasks only.
  * `learn_ilasp2` repeatedly finds a minimum-score program covering the
    positive obligations and consistent with the violating reasons collected
    so far; a violating program contributes a new reason (a concrete witness
    interpretation, or pair for cautious orderings) that rules out every
    program violating for the same reason.
  * `learn_ilasp2i` interleaves a search for a not-yet-covered (relevant)
    example with ilasp2 restricted to the relevant examples found so far.
  * `learn_ilasp3` translates each relevant example into coverage
    constraints over the rule space (with an implication check attaching
    other examples that cannot be covered when the constraints are violated)
    and searches the constraint formulas instead of the examples.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

from .engine import ANY_RULE, ExampleEval, OrderingEval, TaskContext
from .model import INFINITE, LearningTask, Program
from .search import (
    Clause,
    ClauseLit,
    ConstraintSearch,
    DeficiencySearch,
    ResourceExceeded,
    clause_holds,
    formula_holds,
)
from .solver import dominates


class NoiseUnsupported(ValueError):
    """ilasp1 only handles tasks where every penalty is infinite."""


class OracleRefused(RuntimeError):
    """The brute-force oracle guard rejected a too-large rule space."""


@dataclass(frozen=True)
class ViolatingReason:
    """Why a hypothesis broke a universal obligation: a witness answer set
    of a negative example, or an accepting pair wrongly ordered for a
    cautious ordering."""
    kind: str  # "negative-example" | "cautious-ordering"
    example_id: str
    witness: object  # frozenset, or (frozenset, frozenset) for orderings


@dataclass(frozen=True)
class CoverageConstraint:
    """A conjunction of selector clauses satisfied by exactly the programs
    that cover the attached examples (the first id is the translated one)."""
    example_ids: tuple
    clauses: tuple


@dataclass
class LearnerState:
    hypothesis: frozenset = frozenset()
    relevant: list = field(default_factory=list)
    violating_reasons: list = field(default_factory=list)
    constraints: dict = field(default_factory=dict)
    uncov: frozenset = frozenset()
    iterations: int = 0
    excluded: list = field(default_factory=list)
    trace: list = field(default_factory=list)

    def log(self, event, **payload):
        self.trace.append({"iteration": self.iterations, "event": event, **payload})


def _positive_ids(ctx, ids=None):
    ids = set(ctx.order if ids is None else ids)
    out = []
    for eid in ctx.order:
        if eid not in ids:
            continue
        ev = ctx.evals[eid]
        if isinstance(ev, ExampleEval) and ev.example.positive:
            out.append(eid)
        elif isinstance(ev, OrderingEval) and not ev.ordering.cautious:
            out.append(eid)
    return out


def _universal_ids(ctx, ids=None):
    ids = set(ctx.order if ids is None else ids)
    out = []
    for eid in ctx.order:
        if eid not in ids:
            continue
        ev = ctx.evals[eid]
        if isinstance(ev, ExampleEval) and not ev.example.positive:
            out.append(eid)
        elif isinstance(ev, OrderingEval) and ev.ordering.cautious:
            out.append(eid)
    return out


def _infinite(ctx, ids):
    return [eid for eid in ids if ctx.penalty[eid] == INFINITE]


def _finite_ids(ctx, ids=None):
    ids = ctx.order if ids is None else ids
    return [eid for eid in ids if ctx.penalty[eid] != INFINITE]


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------

def learn_bruteforce(task: LearningTask, max_score=INFINITE, *,
                     space=None, guard: int = 20, ctx: TaskContext | None = None):
    """Exhaustively score every subset of the rule space; minimum-score
    subset wins, ties broken by lexicographic selector order.

    Returns (Program, score) or None.  Raises OracleRefused beyond `guard`
    rules.
    """
    ctx = ctx or TaskContext(task, space)
    n = len(ctx.space)
    if n > guard:
        raise OracleRefused(f"rule space has {n} rules, oracle guard is {guard}")
    best = None
    for mask in range(2 ** n):
        sel = frozenset(i for i in range(n) if mask >> i & 1)
        s = ctx.score(sel)
        if s == INFINITE or s > max_score:
            continue
        key = (s, tuple(sorted(sel)))
        if best is None or key < best:
            best = key
    if best is None:
        return None
    return ctx.program(frozenset(best[1])), best[0]


def oracle_solutions(task: LearningTask, limit: int = 1, *, space=None, guard: int = 20,
                     ctx: TaskContext | None = None):
    """All optimal solutions (up to `limit`), for solution enumeration."""
    ctx = ctx or TaskContext(task, space)
    n = len(ctx.space)
    if n > guard:
        raise OracleRefused(f"rule space has {n} rules, oracle guard is {guard}")
    scored = []
    for mask in range(2 ** n):
        sel = frozenset(i for i in range(n) if mask >> i & 1)
        s = ctx.score(sel)
        if s != INFINITE:
            scored.append((s, tuple(sorted(sel))))
    if not scored:
        return [], None
    scored.sort()
    best = scored[0][0]
    sels = [frozenset(t) for s, t in scored if s == best][:limit]
    return [ctx.program(sel) for sel in sels], best


# ---------------------------------------------------------------------------
# ilasp1
# ---------------------------------------------------------------------------

def _universal_check(ctx, eid):
    ev = ctx.evals[eid]
    return (eid, lambda sel: ctx.covered(eid, sel), ev.fix_options)


def _ilasp1(task, ctx, state, solutions=1, deadline=None, max_pops=None):
    if _finite_ids(ctx):
        raise NoiseUnsupported("ilasp1 requires all example penalties to be infinite")
    positive = _positive_ids(ctx)
    universal = _universal_ids(ctx)
    search = DeficiencySearch(ctx, mandatory=positive,
                              checks=[_universal_check(ctx, eid) for eid in universal],
                              deadline=deadline, max_pops=max_pops)
    found = []
    best_len = None
    length_seen = -1
    for cand in search.stream():
        if cand.length > length_seen:
            length_seen = cand.length
            state.iterations += 1
            state.log("length_level", length=cand.length)
        if best_len is not None and cand.lb > best_len:
            break
        if cand.failed_checks:
            # a violating hypothesis: covers the positives, breaks a
            # universal obligation; forbid this exact selector set
            state.excluded.append(cand.sel)
            state.log("violating_hypothesis", length=cand.length, rules=len(cand.sel))
            continue
        if cand.valid:
            if best_len is None:
                best_len = cand.length
                state.log("solution", length=cand.length)
            if cand.length == best_len:
                found.append(cand.sel)
                if len(found) >= solutions and solutions == 1:
                    break
    found.sort(key=lambda s: tuple(sorted(s)))
    return found[:solutions], best_len


# ---------------------------------------------------------------------------
# ilasp2
# ---------------------------------------------------------------------------

def _vr_check(ctx, vr: ViolatingReason):
    if vr.kind == "negative-example":
        ev = ctx.cdpi[vr.example_id]
        atoms = vr.witness

        def ok(sel):
            return not ev.is_accepting(atoms, sel)

        def fix(sel):
            if not ev.witness_mode:
                return ANY_RULE
            return ev.breaker_set(atoms) - sel
    else:
        oev = ctx.orderings[vr.example_id]
        a1, a2 = vr.witness
        op = oev.ordering.op

        def ok(sel):
            if not (oev.left.is_accepting(a1, sel) and oev.right.is_accepting(a2, sel)):
                return True
            return dominates(oev.left.cost(a1, sel), oev.right.cost(a2, sel), op)

        def fix(sel):
            return oev.pair_fix_options(a1, a2, sel)

    return (f"vr:{vr.example_id}", ok, fix)


def _extract_reason(ctx, eid, sel) -> ViolatingReason:
    ev = ctx.evals[eid]
    if isinstance(ev, ExampleEval):
        witness = ev.accepting_sets(sel, limit=1)[0]
        return ViolatingReason("negative-example", eid, witness)
    pair = ev.violating_pair(sel)
    return ViolatingReason("cautious-ordering", eid, pair)


def _ilasp2(task, ctx, state, ids=None, solutions=1, deadline=None, max_pops=None):
    """The violating-reason loop.  Returns (selector sets, score) over the
    given example ids (default: the whole task)."""
    mandatory = _infinite(ctx, _positive_ids(ctx, ids))
    scored = _finite_ids(ctx, list(ids) if ids is not None else None)
    hard_universal = _infinite(ctx, _universal_ids(ctx, ids))
    while True:
        state.iterations += 1
        checks = [_vr_check(ctx, vr) for vr in state.violating_reasons]
        search = DeficiencySearch(ctx, mandatory=mandatory, scored=scored,
                                  checks=checks, deadline=deadline, max_pops=max_pops)
        results = search.run(collect=max(solutions, 1))
        if not results or results[0][0] == INFINITE:
            state.log("no_solution")
            return [], None
        score, sel = results[0]
        state.hypothesis = sel
        violated = next((eid for eid in hard_universal if not ctx.covered(eid, sel)), None)
        if violated is None:
            sels = [s for sc, s in results if sc == score and
                    all(ctx.covered(eid, s) for eid in hard_universal)]
            state.log("solution", score=score, rules=len(sel))
            return sels[:solutions], score
        vr = _extract_reason(ctx, violated, sel)
        state.violating_reasons.append(vr)
        state.log("violating_reason", example=violated, kind=vr.kind,
                  reasons=len(state.violating_reasons))


# ---------------------------------------------------------------------------
# ilasp2i
# ---------------------------------------------------------------------------

def _ilasp2i(task, ctx, state, solutions=1, deadline=None, max_pops=None):
    relevant: list = []
    sel = frozenset()
    candidates = [sel]
    while True:
        state.iterations += 1
        new_rel = next((eid for eid in ctx.order
                        if eid not in relevant and not ctx.covered(eid, sel)), None)
        if new_rel is None:
            state.relevant = relevant
            target = ctx.score(sel)
            full = [s for s in candidates if ctx.score(s) == target]
            state.log("solution", score=target, relevant=len(relevant))
            return (full or [sel])[:solutions], target
        relevant.append(new_rel)
        state.log("relevant_example", example=new_rel, relevant=len(relevant))
        inner = LearnerState(violating_reasons=state.violating_reasons)
        candidates, _score = _ilasp2(task, ctx, inner, ids=relevant,
                                     solutions=solutions, deadline=deadline,
                                     max_pops=max_pops)
        state.violating_reasons = inner.violating_reasons
        if not candidates:
            state.relevant = relevant
            state.log("no_solution")
            return [], None
        sel = candidates[0]
        state.hypothesis = sel


# ---------------------------------------------------------------------------
# Example translation (coverage constraints)
# ---------------------------------------------------------------------------

def _positive_failure_clause(ev: ExampleEval, sel) -> Clause:
    """A clause every program covering the example satisfies, violated by
    `sel`: for each potential witness, either some breaker must be avoided
    or a missing external deriver must be added."""
    lits = []
    for atoms in ev.witness_atoms:
        w = ev.table.witness(atoms)
        breakers = ev.breaker_set(atoms)
        if sel & breakers:
            lits.append(ClauseLit(forbid=breakers))
        else:
            gap = w.gap(sel)
            lits.append(ClauseLit(require=w.external_derivers(gap)))
    return tuple(lits)


def _support_core(ev: ExampleEval, atoms, sel) -> list:
    """A minimal subset of `sel` that still supports the witness."""
    w = ev.table.witness(atoms)
    core = [s for s in sorted(sel) if s in w.derivers]
    for s in list(core):
        trimmed = frozenset(c for c in core if c != s)
        if w.accepting(trimmed):
            core.remove(s)
    return core


def _negative_failure_clause(ev: ExampleEval, sel) -> Clause:
    """`sel` wrongly leaves an accepting answer set; any covering program
    must break that witness or drop part of its support."""
    atoms = ev.accepting_sets(sel, limit=1)[0]
    core = _support_core(ev, atoms, sel)
    lits = [ClauseLit(require=ev.breaker_set(atoms))]
    lits.extend(ClauseLit(forbid=frozenset({s})) for s in core)
    return tuple(lits)


def _differ_clause(rel: frozenset, sel) -> Clause:
    """Any program behaving differently from `sel` on this example must
    differ from it on some rule that can interact with the example."""
    lits = [ClauseLit(require=frozenset({r})) for r in sorted(rel - sel)]
    lits.extend(ClauseLit(forbid=frozenset({r})) for r in sorted(rel & sel))
    return tuple(lits)


def _failure_clause(ctx, ev, sel) -> Clause:
    if isinstance(ev, ExampleEval) and ev.witness_mode:
        if ev.example.positive:
            return _positive_failure_clause(ev, sel)
        return _negative_failure_clause(ev, sel)
    return _differ_clause(ev.relevant_rules(), sel)


def _mentioned(clauses) -> frozenset:
    out = set()
    for clause in clauses:
        for lit in clause:
            out |= lit.require if lit.require is not None else lit.forbid
    return frozenset(out)


def translate(task: LearningTask, example, *, space=None, ctx: TaskContext | None = None,
              max_iterations: int = 5000, exhaustive_cap: int = 14,
              seed: CoverageConstraint | None = None, hint=None,
              deadline=None) -> CoverageConstraint:
    """Translate an example into coverage constraints over the rule space.

    Counterexample-guided: repeatedly search for a program satisfying the
    formula built so far yet not covering the example, and add a clause
    excluding that failure pattern; stop when no such program is found.  On
    rule spaces whose relevant part is small the discrepancy search is
    exhaustive, making the formula an exact characterization of coverage.
    """
    ctx = ctx or TaskContext(task, space)
    eid = example if isinstance(example, str) else example.id
    ev = ctx.evals[eid]
    clauses = list(seed.clauses) if seed is not None else []
    relevant = sorted(ev.relevant_rules() | _mentioned(clauses))

    def is_spurious(sel):
        return formula_holds(clauses, sel) and not ctx.covered(eid, sel)

    cursor = 0  # adding clauses never makes an already-rejected set spurious

    def find_spurious():
        nonlocal cursor
        if hint is not None and is_spurious(hint):
            return hint
        if len(relevant) <= exhaustive_cap:
            for mask in range(cursor, 2 ** len(relevant)):
                sel = frozenset(relevant[i] for i in range(len(relevant)) if mask >> i & 1)
                if is_spurious(sel):
                    cursor = mask
                    return sel
            cursor = 2 ** len(relevant)
            return None
        # large spaces: probe formula-optimal candidates within budget; the
        # formula stays sound, and ilasp3 re-refines with its own hints
        groups = [((c,), frozenset({eid})) for c in clauses]
        probe = ConstraintSearch(ctx, groups, deadline=deadline)
        try:
            results = probe.run(collect=64)
        except ResourceExceeded:
            return None
        for _score, sel, _uncov in results:
            if is_spurious(sel):
                return sel
        return None

    for _ in range(max_iterations):
        if deadline is not None and time.monotonic() > deadline:
            raise ResourceExceeded("translate: time budget exceeded")
        spurious = find_spurious()
        if spurious is None:
            break
        hint = None
        clause = _failure_clause(ctx, ev, spurious)
        if clause_holds(clause, spurious):
            raise ResourceExceeded(f"translate made no progress on {eid}")
        clauses.append(clause)
        new_mentions = _mentioned([clause]) - set(relevant)
        if new_mentions:
            relevant = sorted(set(relevant) | new_mentions)
            cursor = 0
    else:
        raise ResourceExceeded(f"translate exceeded {max_iterations} refinements on {eid}")
    return CoverageConstraint((eid,), tuple(clauses))


# ---------------------------------------------------------------------------
# Implication check
# ---------------------------------------------------------------------------

def _protected_constants(ctx) -> frozenset:
    """Constants whose identity matters: those in the background, the bias
    declarations or the rule space.  Renaming the others (context-local
    constants) cannot change which programs cover an example."""
    from .model import rule_constants
    out = set()
    for r in ctx.task.background.rules:
        out |= rule_constants(r)
    for r in ctx.space.rules:
        out |= rule_constants(r)
    for _type, value in ctx.task.mode_bias.constants:
        out.add(value)
    return frozenset(out)


def _match_renaming(a, b, protected) -> bool:
    """Is there a bijective renaming of non-protected constants, fixing all
    protected ones, that maps example `a` onto example `b`?  Sound but not
    complete: the alignment is greedy over a structural sort, then verified
    exactly.  Identical examples always match."""
    from .model import Const, IntConst, canonicalize, substitute_constants

    if a.positive != b.positive:
        return False
    if (a.pi, a.context) == (b.pi, b.context):
        return True

    def blank_atom(atom):
        return (atom.pred, tuple("?" if isinstance(t, (Const, IntConst)) and t not in protected
                                 else str(t) for t in atom.args))

    def blank_rule(rule):
        text = str(rule)
        for c in sorted(rule_free_constants(rule), key=str, reverse=True):
            text = text.replace(str(c), "?")
        return text

    def rule_free_constants(rule):
        from .model import rule_constants
        return {c for c in rule_constants(rule) if c not in protected}

    sigma = {}

    def align_terms(ts, us):
        for t, u in zip(ts, us):
            if isinstance(t, (Const, IntConst)) and t not in protected:
                if type(t) is not type(u) or (u in protected):
                    return False
                if sigma.setdefault(t, u) != u:
                    return False
            elif t != u:
                return False
        return True

    for group_a, group_b in ((a.pi.inclusions, b.pi.inclusions),
                             (a.pi.exclusions, b.pi.exclusions)):
        if len(group_a) != len(group_b):
            return False
        for atom_a, atom_b in zip(sorted(group_a, key=blank_atom),
                                  sorted(group_b, key=blank_atom)):
            if blank_atom(atom_a) != blank_atom(atom_b):
                return False
            if not align_terms(atom_a.args, atom_b.args):
                return False
    rules_a = sorted((canonicalize(r) for r in a.context.rules), key=blank_rule)
    rules_b = sorted((canonicalize(r) for r in b.context.rules), key=blank_rule)
    if len(rules_a) != len(rules_b):
        return False
    for ra, rb in zip(rules_a, rules_b):
        themed = substitute_constants(ra, sigma)
        if themed != rb:
            # try to extend sigma by aligning the two rules argument-wise
            from .model import head_atoms, Literal
            atoms_a = list(head_atoms(ra)) + [e.atom for e in ra.body if isinstance(e, Literal)]
            atoms_b = list(head_atoms(rb)) + [e.atom for e in rb.body if isinstance(e, Literal)]
            if len(atoms_a) != len(atoms_b):
                return False
            for atom_a, atom_b in zip(atoms_a, atoms_b):
                if (atom_a.pred, atom_a.arity) != (atom_b.pred, atom_b.arity):
                    return False
                if not align_terms(atom_a.args, atom_b.args):
                    return False
    # verify: sigma must be injective and map a exactly onto b
    if len(set(sigma.values())) != len(sigma):
        return False
    mapped_incl = frozenset(_map_atom(atom, sigma) for atom in a.pi.inclusions)
    mapped_excl = frozenset(_map_atom(atom, sigma) for atom in a.pi.exclusions)
    if mapped_incl != b.pi.inclusions or mapped_excl != b.pi.exclusions:
        return False
    mapped_rules = frozenset(canonicalize(substitute_constants(r, sigma))
                             for r in a.context.rules)
    target_rules = frozenset(canonicalize(r) for r in b.context.rules)
    return mapped_rules == target_rules


def _map_atom(atom, sigma):
    from .model import Atom
    return Atom(atom.pred, tuple(sigma.get(t, t) for t in atom.args))


def implication_check(task: LearningTask, constraint: CoverageConstraint, candidates,
                      *, semantic: bool = False, space=None,
                      ctx: TaskContext | None = None, exhaustive_cap: int = 14) -> set:
    """Ids of candidate examples guaranteed uncovered whenever the
    constraint's formula is violated.

    Default mode attaches examples identical to the translated one up to a
    renaming of constants that occur only in example contexts; the optional
    semantic mode proves implication by exhaustively checking for a
    counterexample program (small relevant rule sets only).
    """
    ctx = ctx or TaskContext(task, space)
    base_id = constraint.example_ids[0]
    base_ev = ctx.evals[base_id]
    attached = set()
    protected = _protected_constants(ctx)

    for cand in candidates:
        eid = cand if isinstance(cand, str) else cand.id
        if eid == base_id:
            attached.add(eid)
            continue
        ev = ctx.evals[eid]
        if isinstance(ev, ExampleEval) and isinstance(base_ev, ExampleEval):
            if _match_renaming(base_ev.example, ev.example, protected):
                attached.add(eid)
                continue
        elif isinstance(ev, OrderingEval) and isinstance(base_ev, OrderingEval):
            if _ordering_identity(ev.ordering) == _ordering_identity(base_ev.ordering):
                attached.add(eid)
                continue
        if semantic and _implied_semantically(ctx, constraint, eid, exhaustive_cap):
            attached.add(eid)
    return attached


def _ordering_identity(o):
    return (o.left_id, o.right_id, o.op, o.cautious)


def _implied_semantically(ctx, constraint, eid, cap) -> bool:
    """No program violating the formula covers the candidate (exhaustive
    over the rules either side can interact with; gives up beyond `cap`)."""
    rel = sorted(_mentioned(constraint.clauses) | ctx.evals[eid].relevant_rules())
    if len(rel) > cap:
        return False
    for mask in range(2 ** len(rel)):
        sel = frozenset(rel[i] for i in range(len(rel)) if mask >> i & 1)
        if not formula_holds(constraint.clauses, sel) and ctx.covered(eid, sel):
            return False
    return True


# ---------------------------------------------------------------------------
# ilasp3
# ---------------------------------------------------------------------------

def _ilasp3(task, ctx, state, solutions=1, deadline=None, max_pops=None,
            semantic_implication=False):
    while True:
        state.iterations += 1
        groups = [(c.clauses, frozenset(c.example_ids)) for c in state.constraints.values()]
        search = ConstraintSearch(ctx, groups, deadline=deadline, max_pops=max_pops)
        results = search.run(collect=max(solutions, 1))
        if not results or results[0][0] == INFINITE:
            state.log("no_solution")
            return [], None
        approx, sel, uncov = results[0]
        state.hypothesis, state.uncov = sel, uncov
        rel = next((eid for eid in ctx.order
                    if eid not in uncov and not ctx.covered(eid, sel)), None)
        if rel is None:
            # the approximation is exact for sel, so sel is optimal
            sels = [s for a, s, _u in results if a == approx and ctx.score(s) == approx]
            state.log("solution", score=approx, rules=len(sel),
                      constraints=len(state.constraints))
            return sels[:solutions], approx
        state.log("relevant_example", example=rel, uncov=len(uncov))
        constraint = translate(task, rel, ctx=ctx, seed=state.constraints.get(rel),
                               hint=sel, deadline=deadline)
        ids = implication_check(task, constraint, list(ctx.order),
                                semantic=semantic_implication, ctx=ctx)
        state.constraints[rel] = CoverageConstraint(
            (rel, *sorted(ids - {rel})), constraint.clauses)
        state.log("translated", example=rel, clauses=len(constraint.clauses),
                  attached=len(ids))


# ---------------------------------------------------------------------------
# Public entry points
# ---------------------------------------------------------------------------

@dataclass
class RunResult:
    programs: list
    score: float | None
    state: LearnerState
    stats: dict


def run_learner(task: LearningTask, algorithm: str = "ilasp3", *, space=None,
                solutions: int = 1, deadline=None, max_pops=None,
                witness_cap: int = 6) -> RunResult:
    """Run one learning strategy and report programs, score and statistics."""
    started = time.monotonic()
    state = LearnerState()
    if algorithm == "oracle":
        ctx = TaskContext(task, space, witness_cap)
        programs, score = oracle_solutions(task, solutions, ctx=ctx)
        sels = None
    else:
        ctx = TaskContext(task, space, witness_cap)
        fn = {"ilasp1": _ilasp1, "ilasp2": _ilasp2, "ilasp2i": _ilasp2i,
              "ilasp3": _ilasp3}[algorithm]
        sels, score = fn(task, ctx, state, solutions=solutions,
                         deadline=deadline, max_pops=max_pops)
        if algorithm == "ilasp1" and sels:
            score = ctx.length(sels[0])
        programs = [ctx.program(s) for s in (sels or [])]
    stats = dict(ctx.stats)
    stats.update(
        iterations=state.iterations,
        relevant_examples=len(state.relevant),
        violating_reasons=len(state.violating_reasons),
        constraints=len(state.constraints),
        rule_space=len(ctx.space),
        wall_time=time.monotonic() - started,
    )
    return RunResult(programs, score, state, stats)


def _single(result: RunResult):
    return result.programs[0] if result.programs else None


def learn_ilasp1(task: LearningTask, *, space=None, deadline=None):
    """Length-layered generate-and-test; optimal for noise-free tasks."""
    return _single(run_learner(task, "ilasp1", space=space, deadline=deadline))


def learn_ilasp2(task: LearningTask, *, space=None, deadline=None):
    """Optimal-program search driven by violating reasons."""
    return _single(run_learner(task, "ilasp2", space=space, deadline=deadline))


def learn_ilasp2i(task: LearningTask, *, space=None, deadline=None):
    """ilasp2 over an incrementally grown set of relevant examples."""
    return _single(run_learner(task, "ilasp2i", space=space, deadline=deadline))


def learn_ilasp3(task: LearningTask, *, space=None, deadline=None):
    """Constraint-driven search over translated examples."""
    return _single(run_learner(task, "ilasp3", space=space, deadline=deadline))
