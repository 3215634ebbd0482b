"""Core domain types: terms, atoms, rules, programs, interpretations and examples.

Everything here is an immutable value.  Rules render back to the task-file
syntax via ``str()``; ``render`` joins a whole program.  Variable names are
preserved as written; structural equality of rules and programs is defined
up to canonical variable renaming (see ``canonicalize``).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

INFINITE = math.inf

COMPARISON_OPS = ("=", "!=", "<", "<=", ">", ">=")


class SafetyError(ValueError):
    """A rule uses a variable that no positive body literal binds."""


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    """A constant symbol (lowercase identifier)."""
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class IntConst:
    """An integer constant."""
    value: int

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Var:
    """A variable (identifier beginning uppercase)."""
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class IntRange:
    """An inclusive integer range ``lo..hi``; only legal in fact arguments."""
    lo: int
    hi: int

    def __str__(self):
        return f"{self.lo}..{self.hi}"


Term = "Const | IntConst | Var | IntRange"


def term_key(t) -> tuple:
    """A total order over ground-ish terms, used for deterministic output."""
    if isinstance(t, IntConst):
        return (0, t.value)
    if isinstance(t, Const):
        return (1, t.name)
    if isinstance(t, Var):
        return (2, t.name)
    return (3, t.lo, t.hi)


# ---------------------------------------------------------------------------
# Atoms and body elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    def __str__(self):
        if not self.args:
            return self.pred
        return "%s(%s)" % (self.pred, ", ".join(str(a) for a in self.args))


@dataclass(frozen=True)
class Literal:
    """An atom, possibly negation-as-failure negated (body position only)."""
    atom: Atom
    negated: bool = False

    def __str__(self):
        return ("not " if self.negated else "") + str(self.atom)


@dataclass(frozen=True)
class Comparison:
    """A built-in comparison between two terms, e.g. ``V1 != V2``."""
    op: str
    left: object
    right: object

    def __str__(self):
        return f"{self.left} {self.op} {self.right}"


BodyElem = "Literal | Comparison"


def eval_comparison(op: str, left, right) -> bool:
    """Evaluate a ground comparison.  Integers compare numerically; other
    ground terms fall back to a fixed total order (ints before symbols)."""
    if isinstance(left, IntConst) and isinstance(right, IntConst):
        a, b = left.value, right.value
    else:
        a, b = term_key(left), term_key(right)
    if op == "=":
        return a == b
    if op == "!=":
        return a != b
    if op == "<":
        return a < b
    if op == "<=":
        return a <= b
    if op == ">":
        return a > b
    return a >= b


# ---------------------------------------------------------------------------
# Rules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NormalRule:
    head: Atom
    body: tuple = ()

    def __str__(self):
        if not self.body:
            return f"{self.head}."
        return "%s :- %s." % (self.head, ", ".join(str(b) for b in self.body))


@dataclass(frozen=True)
class ChoiceRule:
    lower: int
    heads: tuple
    upper: int
    body: tuple = ()

    def __str__(self):
        hd = "%d { %s } %d" % (self.lower, ", ".join(str(a) for a in self.heads), self.upper)
        if not self.body:
            return hd + "."
        return "%s :- %s." % (hd, ", ".join(str(b) for b in self.body))


@dataclass(frozen=True)
class HardConstraint:
    body: tuple

    def __str__(self):
        return ":- %s." % ", ".join(str(b) for b in self.body)


@dataclass(frozen=True)
class WeakConstraint:
    body: tuple
    weight: object = IntConst(1)
    level: int = 1
    terms: tuple = ()

    def __str__(self):
        tail = str(self.weight) + "@" + str(self.level)
        if self.terms:
            tail += ", " + ", ".join(str(t) for t in self.terms)
        return ":~ %s.[%s]" % (", ".join(str(b) for b in self.body), tail)


Rule = "NormalRule | ChoiceRule | HardConstraint | WeakConstraint"


def rule_length(r) -> int:
    """Length of a rule counted in literals.

    Normal rules count the head plus the body, choice rules count their head
    atoms plus the body, constraints (hard and weak) count the body only.
    """
    if isinstance(r, NormalRule):
        return 1 + len(r.body)
    if isinstance(r, ChoiceRule):
        return len(r.heads) + len(r.body)
    return len(r.body)


def head_atoms(r) -> tuple:
    if isinstance(r, NormalRule):
        return (r.head,)
    if isinstance(r, ChoiceRule):
        return r.heads
    return ()


def atom_vars(a: Atom) -> set:
    return {t.name for t in a.args if isinstance(t, Var)}


def elem_vars(e) -> set:
    if isinstance(e, Literal):
        return atom_vars(e.atom)
    out = set()
    for t in (e.left, e.right):
        if isinstance(t, Var):
            out.add(t.name)
    return out


def rule_vars(r) -> set:
    out = set()
    for a in head_atoms(r):
        out |= atom_vars(a)
    for e in r.body:
        out |= elem_vars(e)
    if isinstance(r, WeakConstraint):
        if isinstance(r.weight, Var):
            out.add(r.weight.name)
        for t in r.terms:
            if isinstance(t, Var):
                out.add(t.name)
    return out


def positive_body_vars(r) -> set:
    out = set()
    for e in r.body:
        if isinstance(e, Literal) and not e.negated:
            out |= atom_vars(e.atom)
    return out


def is_safe(r) -> bool:
    """Every variable must occur in a positive body literal (so facts must
    be ground).  Comparison literals do not bind variables."""
    return rule_vars(r) <= positive_body_vars(r)


def check_rule(r) -> None:
    """Validate structural invariants; raises SafetyError / ValueError."""
    if not is_safe(r):
        raise SafetyError(f"unsafe rule: {r}")
    if isinstance(r, HardConstraint) and not r.body:
        raise ValueError("hard constraint with empty body")
    if isinstance(r, WeakConstraint) and not r.body:
        raise ValueError("weak constraint with empty body")
    if isinstance(r, ChoiceRule):
        if not r.heads:
            raise ValueError("choice rule with no head atoms")
        if not (0 <= r.lower <= r.upper <= len(r.heads)):
            raise ValueError(f"bad choice bounds in: {r}")


def is_ground(r) -> bool:
    return not rule_vars(r)


def rule_constants(r) -> set:
    """All constant and integer terms occurring in a rule."""
    out = set()

    def visit(t):
        if isinstance(t, (Const, IntConst)):
            out.add(t)
        elif isinstance(t, IntRange):
            out.add(IntConst(t.lo))
            out.add(IntConst(t.hi))

    for a in head_atoms(r):
        for t in a.args:
            visit(t)
    for e in r.body:
        if isinstance(e, Literal):
            for t in e.atom.args:
                visit(t)
        else:
            visit(e.left)
            visit(e.right)
    if isinstance(r, WeakConstraint):
        visit(r.weight)
        for t in r.terms:
            visit(t)
    return out


# ---------------------------------------------------------------------------
# Canonicalization
# ---------------------------------------------------------------------------

def _sub_term(t, sub):
    if isinstance(t, Var):
        return sub.get(t.name, t)
    return t


def _sub_atom(a: Atom, sub) -> Atom:
    return Atom(a.pred, tuple(_sub_term(t, sub) for t in a.args))


def substitute_constants(r, mapping):
    """Apply a constant-to-constant mapping to a rule."""
    def sub_term(t):
        return mapping.get(t, t)

    def sub_atom(a):
        return Atom(a.pred, tuple(sub_term(t) for t in a.args))

    def sub_elem(e):
        if isinstance(e, Literal):
            return Literal(sub_atom(e.atom), e.negated)
        return Comparison(e.op, sub_term(e.left), sub_term(e.right))

    body = tuple(sub_elem(e) for e in r.body)
    if isinstance(r, NormalRule):
        return NormalRule(sub_atom(r.head), body)
    if isinstance(r, ChoiceRule):
        return ChoiceRule(r.lower, tuple(sub_atom(a) for a in r.heads), r.upper, body)
    if isinstance(r, HardConstraint):
        return HardConstraint(body)
    return WeakConstraint(body, sub_term(r.weight), r.level,
                          tuple(sub_term(t) for t in r.terms))


def substitute(r, sub):
    """Apply a variable substitution (name -> Term) to a rule."""
    def sub_elem(e):
        if isinstance(e, Literal):
            return Literal(_sub_atom(e.atom, sub), e.negated)
        return Comparison(e.op, _sub_term(e.left, sub), _sub_term(e.right, sub))

    body = tuple(sub_elem(e) for e in r.body)
    if isinstance(r, NormalRule):
        return NormalRule(_sub_atom(r.head, sub), body)
    if isinstance(r, ChoiceRule):
        return ChoiceRule(r.lower, tuple(_sub_atom(a, sub) for a in r.heads), r.upper, body)
    if isinstance(r, HardConstraint):
        return HardConstraint(body)
    return WeakConstraint(body, _sub_term(r.weight, sub), r.level,
                          tuple(_sub_term(t, sub) for t in r.terms))


def _skeleton_term(t):
    # variables are blanked so alpha-variants share a sort key
    if isinstance(t, Var):
        return (2,)
    return term_key(t)


def _skeleton_elem(e):
    if isinstance(e, Literal):
        group = 2 if e.negated else 0
        return (group, e.atom.pred, len(e.atom.args),
                tuple(_skeleton_term(t) for t in e.atom.args))
    return (1, e.op, _skeleton_term(e.left), _skeleton_term(e.right))


def _group_ties(items, key):
    """Split a key-sorted list into runs of equal keys."""
    out = []
    for _, grp in itertools.groupby(sorted(items, key=key), key=key):
        out.append(list(grp))
    return out


def _rename_in_order(r):
    """Rename variables to V1, V2, ... in order of first occurrence
    (head first, then body left to right, then any weak tail)."""
    order = []

    def visit(t):
        if isinstance(t, Var) and t.name not in order:
            order.append(t.name)

    for a in head_atoms(r):
        for t in a.args:
            visit(t)
    for e in r.body:
        if isinstance(e, Literal):
            for t in e.atom.args:
                visit(t)
        else:
            visit(e.left)
            visit(e.right)
    if isinstance(r, WeakConstraint):
        visit(r.weight)
        for t in r.terms:
            visit(t)
    sub = {name: Var(f"V{i + 1}") for i, name in enumerate(order)}
    return substitute(r, sub)


def canonicalize(r):
    """Canonical form of a rule: body literals sorted by a name-insensitive
    structural order, variables renamed V1, V2, ... by first occurrence.

    Literals whose structural keys tie are arranged so that the renamed rule
    renders lexicographically least, which makes the form independent of the
    input's variable names and literal order.  Idempotent.
    """
    if not is_safe(r):
        raise SafetyError(f"unsafe rule: {r}")

    body_groups = _group_ties(list(r.body), _skeleton_elem)
    if isinstance(r, ChoiceRule):
        head_groups = _group_ties(list(r.heads), lambda a: _skeleton_elem(Literal(a)))
    else:
        head_groups = []

    def arrangements(groups):
        perms = [itertools.permutations(g) if len(g) > 1 else [tuple(g)] for g in groups]
        for combo in itertools.product(*perms):
            yield tuple(itertools.chain.from_iterable(combo))

    best = None
    for heads in (arrangements(head_groups) if head_groups else [None]):
        for body in arrangements(body_groups):
            if isinstance(r, NormalRule):
                cand = NormalRule(r.head, body)
            elif isinstance(r, ChoiceRule):
                cand = ChoiceRule(r.lower, heads, r.upper, body)
            elif isinstance(r, HardConstraint):
                cand = HardConstraint(body)
            else:
                cand = WeakConstraint(body, r.weight, r.level, r.terms)
            cand = _rename_in_order(cand)
            text = str(cand)
            if best is None or text < best[0]:
                best = (text, cand)
    return best[1]


# ---------------------------------------------------------------------------
# Programs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Program:
    """A finite set of rules.  Order is kept for deterministic rendering;
    duplicates under canonical renaming are dropped; equality and hashing
    compare canonical rule sets."""
    rules: tuple = ()

    def __post_init__(self):
        seen = set()
        kept = []
        for r in self.rules:
            key = canonicalize(r)
            if key not in seen:
                seen.add(key)
                kept.append(r)
        object.__setattr__(self, "rules", tuple(kept))
        object.__setattr__(self, "_canon", frozenset(seen))

    def canonical(self) -> frozenset:
        return self._canon

    def __eq__(self, other):
        if not isinstance(other, Program):
            return NotImplemented
        return self._canon == other._canon

    def __hash__(self):
        return hash(self._canon)

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def union(self, *others) -> Program:
        rules = list(self.rules)
        for o in others:
            rules.extend(o.rules)
        return Program(tuple(rules))


EMPTY_PROGRAM = Program()


def program_length(p: Program) -> int:
    return sum(rule_length(r) for r in p.rules)


def render(p: Program) -> str:
    """One rule per line in the task-file syntax; parses back to an equal
    program (up to canonical renaming)."""
    return "".join(str(r) + "\n" for r in p.rules)


# ---------------------------------------------------------------------------
# Interpretations and examples
# ---------------------------------------------------------------------------

# An interpretation is a frozenset of ground Atoms.
Interpretation = frozenset


@dataclass(frozen=True)
class PartialInterpretation:
    inclusions: frozenset = frozenset()
    exclusions: frozenset = frozenset()

    def __post_init__(self):
        overlap = self.inclusions & self.exclusions
        if overlap:
            raise ValueError(f"inclusions and exclusions overlap: {overlap}")

    def accepts(self, interp: frozenset) -> bool:
        return self.inclusions <= interp and not (self.exclusions & interp)

    def __str__(self):
        def fmt(atoms):
            return "{%s}" % ", ".join(sorted(str(a) for a in atoms))
        return "%s, %s" % (fmt(self.inclusions), fmt(self.exclusions))


EMPTY_PI = PartialInterpretation()


@dataclass(frozen=True)
class CDPIExample:
    """A context-dependent partial interpretation example."""
    id: str
    positive: bool
    pi: PartialInterpretation = EMPTY_PI
    context: Program = EMPTY_PROGRAM
    penalty: float = INFINITE

    def __post_init__(self):
        if any(isinstance(r, WeakConstraint) for r in self.context.rules):
            raise ValueError(f"example {self.id}: context may not contain weak constraints")
        if not (self.penalty == INFINITE or (isinstance(self.penalty, int) and self.penalty > 0)):
            raise ValueError(f"example {self.id}: penalty must be a positive integer or infinite")


@dataclass(frozen=True)
class OrderingExample:
    """An assertion that accepting answer sets of two positive examples are
    ordered by ``op`` on their weak-constraint cost vectors; brave orderings
    are existential over pairs, cautious orderings universal."""
    id: str
    left_id: str
    right_id: str
    op: str = "<"
    cautious: bool = False
    penalty: float = INFINITE

    def __post_init__(self):
        if self.op not in COMPARISON_OPS:
            raise ValueError(f"ordering {self.id}: bad operator {self.op!r}")
        if self.left_id == self.right_id and self.op not in ("=", "!="):
            raise ValueError(f"ordering {self.id}: equal example refs need = or !=")
        if not (self.penalty == INFINITE or (isinstance(self.penalty, int) and self.penalty > 0)):
            raise ValueError(f"ordering {self.id}: penalty must be a positive integer or infinite")


# A cost vector maps priority level -> total cost; absent levels are zero.
CostVector = dict


def normalize_costs(costs: dict) -> dict:
    return {lvl: c for lvl, c in sorted(costs.items()) if c != 0}


@dataclass(frozen=True)
class LearningTask:
    """Background knowledge, mode bias, examples and search configuration."""
    background: Program
    mode_bias: object
    examples: tuple = ()
    orderings: tuple = ()
    config: object = None

    def __post_init__(self):
        ids = [e.id for e in self.examples]
        dup = {i for i in ids if ids.count(i) > 1}
        if dup:
            raise ValueError(f"duplicate example ids: {sorted(dup)}")
        positive = {e.id for e in self.examples if e.positive}
        for o in self.orderings:
            for ref in (o.left_id, o.right_id):
                if ref not in positive:
                    raise ValueError(f"ordering {o.id} references {ref!r}, "
                                     "which is not a positive example")
        for r in self.background.rules:
            check_rule(r)

    def example(self, eid: str) -> CDPIExample:
        for e in self.examples:
            if e.id == eid:
                return e
        raise KeyError(eid)
