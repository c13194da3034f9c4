"""Dependency structures <-> head-marked phrase markers.

``ds_to_pm`` builds the minimal phrase marker: one flat node per word that
has dependents, holding the word's left dependents' constituents, the word
itself (the head child) and its right dependents' constituents. Words
without dependents stay bare leaves, so no node is unary.

``pm_to_ds`` goes the other way by head percolation. Several phrase
markers map to the same dependency structure; labels never survive a
trip through phrase markers.
"""

from __future__ import annotations

from .axioms import Violation, validate
from .ds import Arc, DependencyStructure, DSError, Leaf, Node, PhraseMarker, dependents_of, fringe

__all__ = ["IllFormedError", "ds_to_pm", "pm_to_ds", "label_map", "apply_labels", "is_minimal"]


class IllFormedError(ValueError):
    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__("; ".join(v.message for v in violations))


def ds_to_pm(ds: DependencyStructure) -> PhraseMarker:
    violations = validate(ds)
    if violations:
        raise IllFormedError(violations)

    def build(i: int) -> PhraseMarker:
        deps = dependents_of(ds, i)
        if not deps:
            return Leaf(ds.token(i))
        left = [build(d) for d in deps if d < i]
        right = [build(d) for d in deps if d > i]
        return Node(tuple(left) + (Leaf(ds.token(i)),) + tuple(right), len(left))

    return build(ds.roots()[0])


def pm_to_ds(pm: PhraseMarker) -> DependencyStructure:
    tokens = tuple(fringe(pm))
    if [t.index for t in tokens] != list(range(1, len(tokens) + 1)):
        raise DSError("phrase-marker fringe must be numbered 1..n")
    arcs: set[Arc] = set()

    def head(p: PhraseMarker) -> int:
        if isinstance(p, Leaf):
            return p.token.index
        kid_heads = [head(c) for c in p.children]
        h = kid_heads[p.head_child]
        arcs.update(Arc(h, d) for k, d in enumerate(kid_heads) if k != p.head_child)
        return h

    head(pm)
    return DependencyStructure(tokens, frozenset(arcs))


def is_minimal(pm: PhraseMarker) -> bool:
    """True when no node has a single child."""
    if isinstance(pm, Leaf):
        return True
    return len(pm.children) > 1 and all(is_minimal(c) for c in pm.children)


def label_map(ds: DependencyStructure) -> dict[int, str]:
    """Arc labels keyed by dependent index; phrase markers drop them."""
    return {a.dep: a.label for a in ds.arcs}


def apply_labels(ds: DependencyStructure, labels: dict[int, str]) -> DependencyStructure:
    arcs = frozenset(Arc(a.head, a.dep, labels.get(a.dep, a.label)) for a in ds.arcs)
    return DependencyStructure(ds.tokens, arcs)
