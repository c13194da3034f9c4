"""Functional structures, lexical control and predicate-argument terms.

Labeled arcs of an analysis are read as grammatical functions: an arc
``h -> d`` labeled SUBJ makes d's structure the SUBJ of h's. The
governor is always the functional head. Control specifications then add
gaps co-indexed with their trigger word, and frames turn the result into
nested predicate-argument terms such as ``ba(gan(die, chou, x1))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Union

from .ds import dependents_of
from .grammar import Grammar
from .parser import Analysis

__all__ = [
    "FunctionalError",
    "FunctionalUniquenessError",
    "ControlConflictError",
    "FStructure",
    "CorefNote",
    "Const",
    "Var",
    "App",
    "SemanticTerm",
    "build_fstructure",
    "resolve_control",
    "to_semantics",
    "render_term",
    "fstructure_to_json",
]


class FunctionalError(ValueError):
    pass


class FunctionalUniquenessError(FunctionalError):
    pass


class ControlConflictError(FunctionalError):
    pass


@dataclass(frozen=True)
class FStructure:
    pred: str
    index: int
    category: str = "_"
    attrs: Mapping[str, FStructure] = field(default_factory=dict)
    gaps: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        clash = set(self.attrs) & set(self.gaps)
        if clash:
            raise FunctionalError(f"functions {sorted(clash)} are both filled and gapped at {self.pred}")
        object.__setattr__(self, "attrs", MappingProxyType(dict(sorted(self.attrs.items()))))
        object.__setattr__(self, "gaps", MappingProxyType(dict(sorted(self.gaps.items()))))

    def walk(self):
        yield self
        for sub in self.attrs.values():
            yield from sub.walk()

    def get(self, path) -> FStructure | None:
        node = self
        for label in path:
            node = node.attrs.get(label)
            if node is None:
                return None
        return node

    def replace_at(self, path, new: FStructure) -> FStructure:
        if not path:
            return new
        head, rest = path[0], path[1:]
        attrs = dict(self.attrs)
        attrs[head] = self.attrs[head].replace_at(rest, new)
        return FStructure(self.pred, self.index, self.category, attrs, self.gaps)


@dataclass(frozen=True, order=True)
class CorefNote:
    variable: str
    antecedent: int


@dataclass(frozen=True)
class Const:
    form: str


@dataclass(frozen=True)
class Var:
    id: str


@dataclass(frozen=True)
class App:
    functor: str
    args: tuple[SemanticTerm, ...]


SemanticTerm = Union[Const, Var, App]


def build_fstructure(a: Analysis, g: Grammar | None = None) -> FStructure:
    """The root's f-structure; unlabeled arcs become ``_1``, ``_2``, ... left to right."""
    ds = a.ds
    labels = {arc.dep: arc.label for arc in ds.arcs}

    def build(i: int) -> FStructure:
        tok = ds.token(i)
        attrs: dict[str, FStructure] = {}
        unlabeled = 0
        for d in dependents_of(ds, i):
            label = labels[d]
            if label == "_":
                unlabeled += 1
                label = f"_{unlabeled}"
            if label in attrs:
                raise FunctionalUniquenessError(f"{tok.form} (token {i}) has two {label} dependents")
            attrs[label] = build(d)
        return FStructure(tok.form, i, tok.category, attrs)

    roots = ds.roots()
    if len(roots) != 1:
        raise FunctionalError("analysis must have exactly one root")
    return build(roots[0])


def _var_for(index: int) -> str:
    return f"x{index}"


def resolve_control(
    fs: FStructure, a: Analysis, g: Grammar
) -> tuple[FStructure, list[CorefNote]]:
    """Fill control gaps; each gap is co-indexed with the word that triggered it.

    A spec whose path prefix does not exist under the trigger does nothing.
    A path end that is already a filled function, or a gap bound to some
    other controller, is a :class:`ControlConflictError`.
    """
    notes: set[CorefNote] = set()
    cats = {t.index: t.category for t in a.ds.tokens}
    for spec in g.controls:
        paths = {}

        def locate(node: FStructure, path: tuple[str, ...]) -> None:
            paths[node.index] = path
            for label, sub in node.attrs.items():
                locate(sub, path + (label,))

        locate(fs, ())
        for idx in sorted(paths):
            trigger = fs.get(paths[idx])
            if spec.trigger not in (trigger.pred, cats.get(idx)):
                continue
            *prefix, last = spec.gap_path
            target_path = paths[idx] + tuple(prefix)
            target = fs.get(target_path)
            if target is None:
                continue
            var = _var_for(idx)
            if last in target.attrs:
                raise ControlConflictError(
                    f"{'.'.join(spec.gap_path)} under {trigger.pred} is already filled by {target.attrs[last].pred}"
                )
            if last in target.gaps:
                if target.gaps[last] != var:
                    raise ControlConflictError(
                        f"{'.'.join(spec.gap_path)} under {trigger.pred} is already bound to {target.gaps[last]}"
                    )
            else:
                gaps = dict(target.gaps)
                gaps[last] = var
                new = FStructure(target.pred, target.index, target.category, target.attrs, gaps)
                fs = fs.replace_at(target_path, new)
            notes.add(CorefNote(var, idx))
    return fs, sorted(notes, key=lambda n: (n.antecedent, n.variable))


def to_semantics(fs: FStructure, g: Grammar, notes: list[CorefNote] = ()) -> SemanticTerm:
    bound = {n.variable for n in notes}

    def term(node: FStructure) -> SemanticTerm:
        frame = g.frame_for(node.pred, node.category)
        if frame is None:
            if node.attrs or node.gaps:
                raise FunctionalError(f"no frame for {node.pred} ({node.category}), which has dependents")
            return Const(node.pred)
        args: list[SemanticTerm] = []
        for f in frame:
            if f in node.attrs:
                args.append(term(node.attrs[f]))
            elif f in node.gaps:
                if node.gaps[f] not in bound:
                    raise FunctionalError(f"gap variable {node.gaps[f]} has no co-reference note")
                args.append(Var(node.gaps[f]))
            else:
                raise FunctionalError(f"frame of {node.pred} needs {f}, which is neither filled nor gapped")
        return App(node.pred, tuple(args))

    return term(fs)


def render_term(t: SemanticTerm, notes: list[CorefNote] = ()) -> str:
    """``functor(arg, ...)`` with variables renamed x1, x2, ... by first appearance."""
    names: dict[str, str] = {}

    def show(t: SemanticTerm) -> str:
        if isinstance(t, Const):
            return t.form
        if isinstance(t, Var):
            if t.id not in names:
                names[t.id] = f"x{len(names) + 1}"
            return names[t.id]
        return f"{t.functor}({', '.join(show(a) for a in t.args)})"

    text = show(t)
    antecedents = {n.variable: n.antecedent for n in notes}
    for var_id, name in names.items():
        if var_id in antecedents:
            text += f" # {name} = token[{antecedents[var_id]}]"
    return text


def fstructure_to_json(fs: FStructure) -> dict:
    return {
        "pred": fs.pred,
        "cat": fs.category,
        "index": fs.index,
        "attrs": {k: fstructure_to_json(v) for k, v in fs.attrs.items()},
        "gaps": dict(fs.gaps),
    }
