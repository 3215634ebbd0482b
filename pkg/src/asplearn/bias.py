"""Mode bias declarations and generation of the finite rule space.

The rule space is the indexed, deduplicated set of candidate rules compatible
with the bias: heads come from #modeh declarations (as plain heads, choice
heads or weak-constraint heads), bodies are sets of positive or negated
#modeb instantiations plus optional comparison literals, and every rule must
be safe and within the variable / body-size / length caps.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .model import (
    Atom,
    ChoiceRule,
    Comparison,
    Const,
    HardConstraint,
    IntConst,
    Literal,
    NormalRule,
    Var,
    WeakConstraint,
    canonicalize,
    is_safe,
    rule_length,
)


class BiasError(ValueError):
    """The bias is unusable, e.g. a const(type) with no declared constants."""


@dataclass(frozen=True)
class SchemaVar:
    type: str

    def __str__(self):
        return f"var({self.type})"


@dataclass(frozen=True)
class SchemaConst:
    type: str

    def __str__(self):
        return f"const({self.type})"


@dataclass(frozen=True)
class ModeSchema:
    """A predicate schema with var/const placeholders and fixed terms."""
    pred: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.pred
        return "%s(%s)" % (self.pred, ", ".join(str(a) for a in self.args))


@dataclass(frozen=True)
class ModeBias:
    modeh: tuple = ()
    modeb: tuple = ()
    constants: tuple = ()  # (type, Term) pairs, in declaration order
    max_variables: int = 3

    def constants_of(self, type_: str) -> tuple:
        return tuple(v for t, v in self.constants if t == type_)


@dataclass(frozen=True)
class SearchConfig:
    """Conventions of the hypothesis space the bias alone does not fix."""
    max_body_literals: int = 3
    enable_normal: bool = True
    enable_constraints: bool = False
    enable_choice: bool = False
    choice_bounds: tuple = ((0, 1),)
    enable_weak: bool = False
    weak_levels: tuple = (1,)
    weak_variable_weights: bool = True  # weights are {1} plus any body variable
    max_rule_length: int | None = None
    allow_comparisons: bool = False
    comparison_ops: tuple = ("!=",)


DEFAULT_CONFIG = SearchConfig()


@dataclass(frozen=True)
class RuleSpace:
    """Indexed canonical rules; the index is the rule's selector id."""
    rules: tuple

    def __post_init__(self):
        object.__setattr__(self, "lengths", tuple(rule_length(r) for r in self.rules))
        object.__setattr__(self, "_index", {r: i for i, r in enumerate(self.rules)})

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)


def contains(space: RuleSpace, rule) -> int | None:
    """Selector id of a rule (up to canonical renaming), or None."""
    return space._index.get(canonicalize(rule))


# ---------------------------------------------------------------------------
# Space generation
# ---------------------------------------------------------------------------

def _var_pool(n):
    return tuple(Var(f"V{i + 1}") for i in range(n))


def _instantiate(schema, bias, pool, head_mode):
    """All fills of a schema's placeholders.

    Yields (Atom, var_types).  In head mode, variables are introduced in
    canonical order (first new variable is V1, ...), since any alpha-variant
    of the final rule can name head variables that way; body instantiations
    range over the whole pool.
    """
    def fill(i, args, types, n_used):
        if i == len(schema.args):
            yield Atom(schema.pred, tuple(args)), dict(types)
            return
        arg = schema.args[i]
        if isinstance(arg, SchemaVar):
            if head_mode:
                # previously introduced variables plus at most one fresh one
                candidates = pool[:min(n_used + 1, len(pool))]
            else:
                candidates = pool
            for v in candidates:
                known = types.get(v.name)
                if known is not None and known != arg.type:
                    continue
                fresh = v.name not in types
                types[v.name] = arg.type
                yield from fill(i + 1, args + [v], types, n_used + (1 if fresh else 0))
                if fresh:
                    del types[v.name]
        elif isinstance(arg, SchemaConst):
            values = bias.constants_of(arg.type)
            if not values:
                raise BiasError(f"no constants declared for type {arg.type!r} "
                                f"(needed by {schema})")
            for c in values:
                yield from fill(i + 1, args + [c], types, n_used)
        else:  # fixed term
            yield from fill(i + 1, args + [arg], types, n_used)

    yield from fill(0, [], {}, 0)


def _body_pool(bias, pool):
    """All positive/negated modeb literal instantiations with their typing."""
    out = []
    seen = set()
    for schema in bias.modeb:
        for atom, types in _instantiate(schema, bias, pool, head_mode=False):
            key = (atom, tuple(sorted(types.items())))
            if key in seen:
                continue
            seen.add(key)
            for negated in (False, True):
                out.append((Literal(atom, negated), types))
    out.sort(key=lambda item: (item[0].negated, str(item[0])))
    return out


def _merge_types(maps):
    merged = {}
    for m in maps:
        for v, t in m.items():
            if merged.setdefault(v, t) != t:
                return None
    return merged


def _comparisons(types, bias, cfg):
    """Comparison literals available over the given typed variables."""
    out = []
    names = sorted(types)
    for op in cfg.comparison_ops:
        for a, b in itertools.combinations(names, 2):
            if types[a] != types[b]:
                continue
            out.append(Comparison(op, Var(a), Var(b)))
            if op not in ("=", "!="):
                out.append(Comparison(op, Var(b), Var(a)))
        for v in names:
            for c in bias.constants_of(types[v]):
                out.append(Comparison(op, Var(v), c))
    return out


def _body_var_order(body):
    order = []
    for elem in body:
        if isinstance(elem, Literal):
            for t in elem.atom.args:
                if isinstance(t, Var) and t.name not in order:
                    order.append(t.name)
    return order


def build_rule_space(bias: ModeBias, cfg: SearchConfig = DEFAULT_CONFIG) -> RuleSpace:
    """Enumerate the rule space for a bias under the given conventions.

    Deterministic: the result is indexed by (length, rendered text).
    """
    pool = _var_pool(bias.max_variables)
    literal_pool = _body_pool(bias, pool)

    heads = []
    for schema in bias.modeh:
        for atom, types in _instantiate(schema, bias, pool, head_mode=True):
            heads.append((atom, types))

    rules = set()

    def consider(rule):
        if not is_safe(rule):
            return
        if cfg.max_rule_length is not None and rule_length(rule) > cfg.max_rule_length:
            return
        rules.add(canonicalize(rule))

    def bodies():
        """All candidate bodies: (body tuple, merged var types)."""
        max_b = cfg.max_body_literals
        for k in range(max_b + 1):
            for combo in itertools.combinations(literal_pool, k):
                merged = _merge_types([t for _, t in combo])
                if merged is None or len(merged) > bias.max_variables:
                    continue
                atoms = tuple(lit for lit, _ in combo)
                yield atoms, merged
                if cfg.allow_comparisons and k < max_b and merged:
                    comps = _comparisons(merged, bias, cfg)
                    for c in range(1, max_b - k + 1):
                        for extra in itertools.combinations(comps, c):
                            yield atoms + extra, merged

    for body, types in bodies():
        if cfg.enable_normal or cfg.enable_choice:
            for head, htypes in heads:
                merged = _merge_types([types, htypes])
                if merged is None or len(merged) > bias.max_variables:
                    continue
                if cfg.enable_normal:
                    consider(NormalRule(head, body))
                if cfg.enable_choice:
                    for lo, up in cfg.choice_bounds:
                        if 0 <= lo <= up <= 1:
                            consider(ChoiceRule(lo, (head,), up, body))
        if body:
            if cfg.enable_constraints:
                consider(HardConstraint(body))
            if cfg.enable_weak:
                var_order = _body_var_order(body)
                terms = tuple(Var(v) for v in var_order)
                weights = [IntConst(1)]
                if cfg.weak_variable_weights:
                    weights.extend(Var(v) for v in var_order)
                for level in cfg.weak_levels:
                    for w in weights:
                        consider(WeakConstraint(body, w, level, terms))

    ordered = sorted(rules, key=lambda r: (rule_length(r), str(r)))
    return RuleSpace(tuple(ordered))
