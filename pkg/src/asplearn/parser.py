"""Task-file parsing: rules, mode declarations, examples and orderings.

Grammar sketch (whitespace-insensitive, ``%`` comments to end of line):

    rule       := head? (":-" body)? "."  |  ":~" body "." "[" wterm "@" int ("," term)* "]"
    head       := atom | int "{" atom (("," | ";") atom)* "}" int
    body elem  := atom | "not" atom | term cmp term
    directive  := #pos | #neg | #brave_ordering | #cautious_ordering
                | #modeh | #modeb | #constant | #maxv

``#pos``/``#neg`` take 2 to 4 arguments: an optional leading identifier
(``id`` or ``id@penalty``), inclusion and exclusion atom sets, and an
optional context program in braces.  Anonymous examples are given ids
``pos_k`` / ``neg_k`` in order of appearance, orderings ``ord_k``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .bias import ModeBias, ModeSchema, SchemaConst, SchemaVar, SearchConfig
from .model import (
    Atom,
    CDPIExample,
    ChoiceRule,
    Comparison,
    Const,
    HardConstraint,
    INFINITE,
    IntConst,
    IntRange,
    LearningTask,
    Literal,
    NormalRule,
    OrderingExample,
    PartialInterpretation,
    Program,
    Var,
    WeakConstraint,
    is_ground,
    is_safe,
)

_TOKEN_RE = re.compile(r"""
      (?P<ws>\s+|%[^\n]*)
    | (?P<dots>\.\.)
    | (?P<arrow>:-|:~)
    | (?P<cmp>!=|<=|>=|=|<|>)
    | (?P<int>-?\d+)
    | (?P<directive>\#[a-z_]+)
    | (?P<var>[A-Z_][A-Za-z0-9_]*)
    | (?P<ident>[a-z][A-Za-z0-9_]*)
    | (?P<punct>[(){}\[\],;.@])
""", re.VERBOSE)


@dataclass
class ParseError(Exception):
    line: int
    column: int
    message: str
    kind: str = "syntax"  # syntax | duplicate-id | dangling-ref | overlap | unsafe-rule

    def __str__(self):
        return f"line {self.line}, column {self.column}: {self.message}"


@dataclass(frozen=True)
class _Token:
    type: str
    value: str
    line: int
    column: int


def _tokenize(source: str):
    tokens = []
    line, col, pos = 1, 1, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None or m.end() == pos:
            raise ParseError(line, col, f"unexpected character {source[pos]!r}")
        kind = m.lastgroup
        text = m.group()
        if kind != "ws":
            if kind == "punct":
                kind = text
            tokens.append(_Token(kind, text, line, col))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.i = 0

    # -- token plumbing ----------------------------------------------------

    def peek(self, ahead=0) -> _Token:
        return self.tokens[min(self.i + ahead, len(self.tokens) - 1)]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        if tok.type != "eof":
            self.i += 1
        return tok

    def at(self, *types) -> bool:
        return self.peek().type in types

    def expect(self, type_, what=None) -> _Token:
        tok = self.peek()
        if tok.type != type_:
            raise self.error(f"expected {what or type_}, found {tok.value or 'end of input'!r}")
        return self.next()

    def error(self, message, kind="syntax", tok=None) -> ParseError:
        tok = tok or self.peek()
        return ParseError(tok.line, tok.column, message, kind)

    # -- terms and atoms ---------------------------------------------------

    def parse_term(self):
        tok = self.peek()
        if tok.type == "int":
            self.next()
            lo = int(tok.value)
            if self.at("dots"):
                self.next()
                hi = int(self.expect("int", "range upper bound").value)
                return IntRange(lo, hi)
            return IntConst(lo)
        if tok.type == "var":
            self.next()
            return Var(tok.value)
        if tok.type == "ident":
            self.next()
            return Const(tok.value)
        raise self.error(f"expected a term, found {tok.value!r}")

    def parse_atom(self) -> Atom:
        name = self.expect("ident", "a predicate name").value
        args = []
        if self.at("("):
            self.next()
            args.append(self.parse_term())
            while self.at(","):
                self.next()
                args.append(self.parse_term())
            self.expect(")")
        return Atom(name, tuple(args))

    def parse_body_elem(self):
        if self.at("ident") and self.peek().value == "not":
            self.next()
            return Literal(self.parse_atom(), negated=True)
        # comparison or atom: a term followed by a comparison operator
        if self.at("int", "var") or (self.at("ident") and self.peek(1).type == "cmp"):
            left = self.parse_term()
            op = self.expect("cmp", "a comparison operator").value
            right = self.parse_term()
            return Comparison(op, left, right)
        atom = self.parse_atom()
        if self.at("cmp"):
            raise self.error("comparisons must be between terms")
        return Literal(atom)

    def parse_body(self) -> tuple:
        elems = [self.parse_body_elem()]
        while self.at(","):
            self.next()
            elems.append(self.parse_body_elem())
        return tuple(elems)

    # -- rules ---------------------------------------------------------------

    def parse_rule(self):
        start = self.peek()
        if self.at("arrow") and start.value == ":~":
            self.next()
            body = self.parse_body()
            self.expect(".")
            self.expect("[", "the weak constraint tail '[w@l, ...]'")
            weight = self.parse_term()
            if not isinstance(weight, (IntConst, Var)):
                raise self.error("weak constraint weight must be an integer or variable", tok=start)
            self.expect("@")
            level = int(self.expect("int", "a priority level").value)
            terms = []
            while self.at(","):
                self.next()
                terms.append(self.parse_term())
            self.expect("]")
            rule = WeakConstraint(body, weight, level, tuple(terms))
        elif self.at("arrow"):  # ":-"
            self.next()
            body = self.parse_body()
            self.expect(".")
            rule = HardConstraint(body)
        elif self.at("int"):  # choice rule
            lower = int(self.next().value)
            self.expect("{", "a choice rule head")
            heads = [self.parse_atom()]
            while self.at(",", ";"):
                self.next()
                heads.append(self.parse_atom())
            self.expect("}")
            upper = int(self.expect("int", "the choice upper bound").value)
            body = ()
            if self.at("arrow") and self.peek().value == ":-":
                self.next()
                body = self.parse_body()
            self.expect(".")
            if not (0 <= lower <= upper <= len(heads)):
                raise self.error(f"choice bounds {lower}..{upper} out of range", tok=start)
            rule = ChoiceRule(lower, tuple(heads), upper, body)
        else:
            head = self.parse_atom()
            body = ()
            if self.at("arrow") and self.peek().value == ":-":
                self.next()
                body = self.parse_body()
            elif self.at("arrow"):
                raise self.error("normal rules use ':-'")
            self.expect(".")
            rule = NormalRule(head, body)
        self._check_rule(rule, start)
        return rule

    def _check_rule(self, rule, tok):
        if not is_safe(rule):
            raise self.error(f"unsafe rule: {rule}", kind="unsafe-rule", tok=tok)
        has_range = any(isinstance(t, IntRange)
                        for a in _rule_atoms(rule) for t in a.args)
        if has_range and not (isinstance(rule, NormalRule) and not rule.body):
            raise self.error("integer ranges are only allowed in facts", tok=tok)

    # -- example components --------------------------------------------------

    def parse_atom_set(self) -> frozenset:
        self.expect("{", "an atom set")
        atoms = set()
        if not self.at("}"):
            atoms.add(self._ground_atom())
            while self.at(","):
                self.next()
                atoms.add(self._ground_atom())
        self.expect("}")
        return frozenset(atoms)

    def _ground_atom(self) -> Atom:
        tok = self.peek()
        atom = self.parse_atom()
        if not is_ground(NormalRule(atom)):
            raise self.error(f"example atoms must be ground: {atom}", tok=tok)
        return atom

    def parse_context(self) -> Program:
        start = self.peek()
        self.expect("{", "a context program")
        rules = []
        while not self.at("}"):
            rule = self.parse_rule()
            if isinstance(rule, WeakConstraint):
                raise self.error("contexts may not contain weak constraints", tok=start)
            rules.append(rule)
        self.expect("}")
        return Program(tuple(rules))

    def parse_id_and_penalty(self):
        tok = self.expect("ident", "an example identifier")
        penalty = INFINITE
        if self.at("@"):
            self.next()
            ptok = self.expect("int", "a penalty")
            penalty = int(ptok.value)
            if penalty <= 0:
                raise self.error("penalties must be positive", tok=ptok)
        return tok.value, penalty, tok


def _rule_atoms(rule):
    atoms = []
    if isinstance(rule, NormalRule):
        atoms.append(rule.head)
    elif isinstance(rule, ChoiceRule):
        atoms.extend(rule.heads)
    for e in rule.body:
        if isinstance(e, Literal):
            atoms.append(e.atom)
    return atoms


def parse_program(source: str) -> Program:
    """Parse a bare program (rules only)."""
    p = _Parser(source)
    rules = []
    while not p.at("eof"):
        rules.append(p.parse_rule())
    return Program(tuple(rules))


def parse_mode_schema(source: str) -> ModeSchema:
    """Parse a mode declaration schema such as ``heads(var(coin))``."""
    p = _Parser(source)
    schema = _schema_from_parser(p)
    if not p.at("eof"):
        raise p.error("trailing input after schema")
    return schema


def _schema_from_parser(p: _Parser) -> ModeSchema:
    name = p.expect("ident", "a predicate name").value
    args = []
    if p.at("("):
        p.next()
        args.append(_schema_arg(p))
        while p.at(","):
            p.next()
            args.append(_schema_arg(p))
        p.expect(")")
    return ModeSchema(name, tuple(args))


def _schema_arg(p: _Parser):
    tok = p.peek()
    if tok.type == "ident" and tok.value in ("var", "const") and p.peek(1).type == "(":
        p.next()
        p.next()
        type_ = p.expect("ident", "a placeholder type").value
        p.expect(")")
        return SchemaVar(type_) if tok.value == "var" else SchemaConst(type_)
    if tok.type == "int":
        p.next()
        return IntConst(int(tok.value))
    if tok.type == "ident":
        p.next()
        return Const(tok.value)
    raise p.error(f"expected a schema argument, found {tok.value!r}")


def parse_task(source: str) -> LearningTask:
    """Parse a full task file into a LearningTask."""
    p = _Parser(source)
    background = []
    modeh, modeb, constants = [], [], []
    max_variables = 3
    examples, orderings = [], []
    pos_seen = {}  # id -> (polarity, token) for duplicate / ref checking
    counters = {"pos": 0, "neg": 0, "ord": 0}
    ordering_refs = []  # (ref id, token)

    def fresh_id(prefix):
        counters[prefix] += 1
        return f"{prefix}_{counters[prefix]}"

    def register(eid, positive, tok):
        if eid in pos_seen:
            raise p.error(f"duplicate example id {eid!r}", kind="duplicate-id", tok=tok)
        pos_seen[eid] = positive

    while not p.at("eof"):
        if p.at("directive"):
            tok = p.next()
            name = tok.value
            if name in ("#pos", "#neg"):
                positive = name == "#pos"
                p.expect("(")
                if p.at("ident"):
                    eid, penalty, id_tok = p.parse_id_and_penalty()
                    p.expect(",")
                else:
                    eid, penalty, id_tok = fresh_id("pos" if positive else "neg"), INFINITE, tok
                inclusions = p.parse_atom_set()
                p.expect(",")
                exclusions = p.parse_atom_set()
                context = Program()
                if p.at(","):
                    p.next()
                    context = p.parse_context()
                p.expect(")")
                p.expect(".")
                if inclusions & exclusions:
                    both = sorted(str(a) for a in inclusions & exclusions)
                    raise p.error(f"inclusions and exclusions overlap: {', '.join(both)}",
                                  kind="overlap", tok=tok)
                register(eid, positive, id_tok)
                examples.append(CDPIExample(eid, positive,
                                            PartialInterpretation(inclusions, exclusions),
                                            context, penalty))
            elif name in ("#brave_ordering", "#cautious_ordering"):
                p.expect("(")
                ids = [p.parse_id_and_penalty()]
                while p.at(","):
                    p.next()
                    if p.at("cmp"):
                        break
                    ids.append(p.parse_id_and_penalty())
                op = "<"
                if p.at("cmp"):
                    op = p.next().value
                p.expect(")")
                p.expect(".")
                if len(ids) == 2:
                    (left, lp, ltok), (right, rp, rtok) = ids
                    oid, penalty = fresh_id("ord"), INFINITE
                    if lp != INFINITE or rp != INFINITE:
                        raise p.error("penalties belong on the ordering's own id", tok=ltok)
                elif len(ids) == 3:
                    (oid, penalty, otok), (left, lp, ltok), (right, rp, rtok) = ids
                    register(oid, None, otok)
                    if lp != INFINITE or rp != INFINITE:
                        raise p.error("penalties belong on the ordering's own id", tok=ltok)
                else:
                    raise p.error(f"{name} takes two example ids, "
                                  "optionally preceded by its own id", tok=tok)
                ordering_refs.append((left, ltok))
                ordering_refs.append((right, rtok))
                try:
                    orderings.append(OrderingExample(oid, left, right, op,
                                                     cautious=name == "#cautious_ordering",
                                                     penalty=penalty))
                except ValueError as exc:
                    raise p.error(str(exc), kind="dangling-ref", tok=tok)
            elif name == "#modeh":
                p.expect("(")
                modeh.append(_schema_from_parser(p))
                p.expect(")")
                p.expect(".")
            elif name == "#modeb":
                p.expect("(")
                modeb.append(_schema_from_parser(p))
                p.expect(")")
                p.expect(".")
            elif name == "#constant":
                p.expect("(")
                type_ = p.expect("ident", "a constant type").value
                p.expect(",")
                value = p.parse_term()
                if not isinstance(value, (Const, IntConst)):
                    raise p.error("declared constants must be symbols or integers", tok=tok)
                p.expect(")")
                p.expect(".")
                constants.append((type_, value))
            elif name == "#maxv":
                p.expect("(")
                max_variables = int(p.expect("int", "a variable count").value)
                p.expect(")")
                p.expect(".")
            else:
                raise p.error(f"unknown directive {name}", tok=tok)
        else:
            background.append(p.parse_rule())

    for ref, tok in ordering_refs:
        if ref not in pos_seen:
            raise p.error(f"ordering references unknown example {ref!r}",
                          kind="dangling-ref", tok=tok)
        if pos_seen[ref] is not True:
            raise p.error(f"ordering references {ref!r}, which is not a positive example",
                          kind="dangling-ref", tok=tok)

    bias = ModeBias(tuple(modeh), tuple(modeb), tuple(constants), max_variables)
    return LearningTask(Program(tuple(background)), bias,
                        tuple(examples), tuple(orderings), SearchConfig())


# ---------------------------------------------------------------------------
# Rendering a task back to its file form
# ---------------------------------------------------------------------------

def render_task(task: LearningTask) -> str:
    """Serialize a task so that parse_task(render_task(t)) equals t
    (up to canonical renaming of rule variables)."""
    out = []
    for rule in task.background.rules:
        out.append(str(rule))
    bias = task.mode_bias
    for schema in bias.modeh:
        out.append(f"#modeh({schema}).")
    for schema in bias.modeb:
        out.append(f"#modeb({schema}).")
    for type_, value in bias.constants:
        out.append(f"#constant({type_}, {value}).")
    out.append(f"#maxv({bias.max_variables}).")
    for e in task.examples:
        head = e.id if e.penalty == INFINITE else f"{e.id}@{int(e.penalty)}"
        incl = ", ".join(sorted(str(a) for a in e.pi.inclusions))
        excl = ", ".join(sorted(str(a) for a in e.pi.exclusions))
        ctx = " ".join(str(r) for r in e.context.rules)
        out.append("#%s(%s, {%s}, {%s}, {%s})." %
                   ("pos" if e.positive else "neg", head, incl, excl, ctx))
    for o in task.orderings:
        head = o.id if o.penalty == INFINITE else f"{o.id}@{int(o.penalty)}"
        kind = "cautious" if o.cautious else "brave"
        out.append(f"#{kind}_ordering({head}, {o.left_id}, {o.right_id}, {o.op}).")
    return "\n".join(out) + "\n"
