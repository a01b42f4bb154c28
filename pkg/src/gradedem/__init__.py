"""Graded semantics, behavioural distances and graded modal logics for
Moore-shaped machines ``A x (T-)^Sigma`` over four monads: powerset,
nonempty powerset, distributions and distributions with a black hole.
"""

from .quantale import BOOL, UNIT, Quantale
from .monad import (DIST, DISTBH, NEPOW, POW, STAR, STUCK, MonadKind, MonadValue, kantorovich,
                    o_expect, o_expect_bh, o_join)
from .machine import Machine, Signature, build, det_step, load_machine, machine_from_json, preset
from .graded import WordTable, behavioural_distance, n_step_behaviour
from .logic import (Logic, check_modality, check_prop_op, eval_on_behaviour, eval_state,
                    format_formula, logical_distance, parse_formula, uniform_depth)
from .expressivity import (appendix_counterexample, check_black_hole_separation,
                           check_depth1_separation_F, check_expressivity, check_invariance,
                           random_machine)
from .reports import CheckReport, DomainError, ResourceLimitError, SignatureError

__all__ = [
    "BOOL", "UNIT", "Quantale",
    "POW", "NEPOW", "DIST", "DISTBH", "STAR", "STUCK", "MonadKind", "MonadValue",
    "kantorovich", "o_join", "o_expect", "o_expect_bh",
    "Machine", "Signature", "build", "det_step", "load_machine", "machine_from_json", "preset",
    "WordTable", "behavioural_distance", "n_step_behaviour",
    "Logic", "check_modality", "check_prop_op", "eval_on_behaviour", "eval_state",
    "format_formula", "logical_distance", "parse_formula", "uniform_depth",
    "appendix_counterexample", "check_black_hole_separation", "check_depth1_separation_F",
    "check_expressivity", "check_invariance", "random_machine",
    "CheckReport", "DomainError", "ResourceLimitError", "SignatureError",
]
