"""asplearn: learn answer set programs from partial interpretations,
context-dependent examples and answer-set preference orderings."""

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
    SafetyError,
    Var,
    WeakConstraint,
    canonicalize,
    program_length,
    render,
    rule_length,
)
from .parser import ParseError, parse_mode_schema, parse_program, parse_task, render_task
from .grounding import GroundProgram, WeightError, expand_ranges, ground
from .solver import SolveQuery, answer_sets, cost_vector, dominates, is_answer_set
from .bias import BiasError, ModeBias, ModeSchema, RuleSpace, SearchConfig, build_rule_space, contains
from .coverage import CoverageReport, accepting_sets, coverage_report, covers, covers_ordering, score
from .learners import (
    CoverageConstraint,
    NoiseUnsupported,
    OracleRefused,
    ResourceExceeded,
    ViolatingReason,
    implication_check,
    learn_bruteforce,
    learn_ilasp1,
    learn_ilasp2,
    learn_ilasp2i,
    learn_ilasp3,
    translate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
