"""Dependency grammar toolkit.

Well-formedness axioms for dependency structures, Hayes-style grammars
with function labels, an all-parses projective parser checked against the
Gaifman CFG, conversion to and from head-marked phrase markers, and
functional/semantic structure building with lexical control.
"""

from .axioms import Violation, validate
from .convert import ds_to_pm, pm_to_ds
from .ds import Arc, DependencyStructure, Leaf, Node, Token, build_ds
from .functional import build_fstructure, render_term, resolve_control, to_semantics
from .grammar import Grammar, gaifman_cfg, parse_grammar, render_grammar, validate_grammar
from .parser import Analysis, enumerate_oracle, parse, parse_via_cfg

__version__ = "0.1.0"

__all__ = [
    "Analysis",
    "Arc",
    "DependencyStructure",
    "Grammar",
    "Leaf",
    "Node",
    "Token",
    "Violation",
    "build_ds",
    "build_fstructure",
    "ds_to_pm",
    "enumerate_oracle",
    "gaifman_cfg",
    "parse",
    "parse_grammar",
    "parse_via_cfg",
    "pm_to_ds",
    "render_grammar",
    "render_term",
    "resolve_control",
    "to_semantics",
    "validate",
    "validate_grammar",
]
