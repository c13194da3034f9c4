"""Dependency structures and head-marked phrase markers.

A :class:`DependencyStructure` is a token sequence plus an arbitrary set of
labeled arcs. It is deliberately *not* required to be a tree: multiple
governors, cycles and several independent elements are all representable,
so that :mod:`dgkit.axioms` has something to reject.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

__all__ = [
    "DSError",
    "Token",
    "Arc",
    "DependencyStructure",
    "build_ds",
    "heads_of",
    "dependents_of",
    "descendants",
    "projection_span",
    "Leaf",
    "Node",
    "PhraseMarker",
    "fringe",
]

NO_LABEL = "_"


class DSError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Token:
    index: int
    form: str
    category: str = NO_LABEL

    def __post_init__(self):
        if self.index < 1:
            raise DSError(f"token index must be >= 1, got {self.index}")
        if not self.form:
            raise DSError("token form must be non-empty")

    def __str__(self):
        return f"{self.form}/{self.category}"


@dataclass(frozen=True, order=True)
class Arc:
    head: int
    dep: int
    label: str = NO_LABEL

    @property
    def span(self) -> tuple[int, int]:
        return (min(self.head, self.dep), max(self.head, self.dep))


@dataclass(frozen=True)
class DependencyStructure:
    tokens: tuple[Token, ...]
    arcs: frozenset[Arc]

    def __len__(self):
        return len(self.tokens)

    @property
    def n(self) -> int:
        return len(self.tokens)

    def token(self, i: int) -> Token:
        return self.tokens[i - 1]

    def sorted_arcs(self) -> list[Arc]:
        return sorted(self.arcs, key=lambda a: (a.dep, a.head, a.label))

    def head_vector(self) -> tuple[int, ...]:
        """Head of each token (0 when independent). Only meaningful under A3."""
        heads = [0] * self.n
        for arc in self.arcs:
            heads[arc.dep - 1] = arc.head
        return tuple(heads)

    def label_vector(self) -> tuple[str, ...]:
        labels = [NO_LABEL] * self.n
        for arc in self.arcs:
            labels[arc.dep - 1] = arc.label
        return tuple(labels)

    def unlabeled(self) -> frozenset[tuple[int, int]]:
        return frozenset((a.head, a.dep) for a in self.arcs)

    def roots(self) -> list[int]:
        deps = {a.dep for a in self.arcs}
        return [t.index for t in self.tokens if t.index not in deps]


def _as_token(i: int, tok) -> Token:
    if isinstance(tok, Token):
        if tok.index != i:
            raise DSError(f"token at position {i} carries index {tok.index}")
        return tok
    if isinstance(tok, str):
        form, _, cat = tok.rpartition("/") if "/" in tok else (tok, "", NO_LABEL)
        return Token(i, form, cat)
    form, cat = tok
    return Token(i, form, cat)


def build_ds(tokens: Sequence, arcs: Iterable = ()) -> DependencyStructure:
    """Construct a dependency structure, checking the representation invariants.

    ``tokens`` may be :class:`Token` objects, ``(form, category)`` pairs or
    ``"form/CAT"`` strings; ``arcs`` may be :class:`Arc` objects or
    ``(head, dep[, label])`` tuples.
    """
    toks = tuple(_as_token(i, t) for i, t in enumerate(tokens, 1))
    n = len(toks)
    seen: dict[tuple[int, int], Arc] = {}
    for a in arcs:
        arc = a if isinstance(a, Arc) else Arc(*a)
        for end in (arc.head, arc.dep):
            if not 1 <= end <= n:
                raise DSError(f"arc {arc.head}->{arc.dep}: index {end} out of range 1..{n}")
        if arc.head == arc.dep:
            raise DSError(f"self-loop on token {arc.head}")
        key = (arc.head, arc.dep)
        if key in seen:
            raise DSError(f"duplicate arc {arc.head}->{arc.dep}")
        seen[key] = arc
    return DependencyStructure(toks, frozenset(seen.values()))


def heads_of(ds: DependencyStructure, i: int) -> set[int]:
    return {a.head for a in ds.arcs if a.dep == i}


def dependents_of(ds: DependencyStructure, i: int) -> list[int]:
    """Direct dependents of ``i`` in surface order."""
    return sorted(a.dep for a in ds.arcs if a.head == i)


def descendants(ds: DependencyStructure, i: int) -> set[int]:
    """Everything transitively below ``i``, excluding ``i`` itself.

    Requires unique heads. Cycles terminate thanks to the visited set.
    """
    for tok in ds.tokens:
        if len(heads_of(ds, tok.index)) > 1:
            raise DSError(f"token {tok.index} has several heads; descendants is undefined")
    children: dict[int, list[int]] = {}
    for a in ds.arcs:
        children.setdefault(a.head, []).append(a.dep)
    seen: set[int] = set()
    stack = list(children.get(i, ()))
    while stack:
        d = stack.pop()
        if d in seen:
            continue
        seen.add(d)
        stack.extend(children.get(d, ()))
    seen.discard(i)
    return seen


def projection_span(ds: DependencyStructure, i: int) -> tuple[int, int]:
    covered = descendants(ds, i) | {i}
    return (min(covered), max(covered))


# ---------------------------------------------------------------------------
# phrase markers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Leaf:
    token: Token

    @property
    def head_token(self) -> Token:
        return self.token


@dataclass(frozen=True)
class Node:
    children: tuple[PhraseMarker, ...]
    head_child: int

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if not self.children:
            raise DSError("phrase-marker node must have at least one child")
        if not 0 <= self.head_child < len(self.children):
            raise DSError(f"head_child {self.head_child} out of range for {len(self.children)} children")
        indices = [t.index for t in fringe(self)]
        if indices != list(range(indices[0], indices[0] + len(indices))):
            raise DSError(f"phrase-marker fringe is not contiguous: {indices}")

    @property
    def head_token(self) -> Token:
        return self.children[self.head_child].head_token


PhraseMarker = Union[Leaf, Node]


def fringe(pm: PhraseMarker) -> list[Token]:
    if isinstance(pm, Leaf):
        return [pm.token]
    out: list[Token] = []
    for child in pm.children:
        out.extend(fringe(child))
    return out
