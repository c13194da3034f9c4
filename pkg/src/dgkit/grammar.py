"""Hayes-style dependency grammars and their Gaifman phrase-structure counterpart.

A grammar consists of

* rules ``X(A, B, *, C)``: a governor of category X takes the listed
  dependents in exactly that order, the governor sitting at the ``*``;
  dependents may carry a grammatical-function label, ``X(A:SUBJ, *)``;
* leaf declarations ``X(*)``: X may occur with no dependents;
* root declarations ``*(X)``: X may occur with no governor;
* a lexicon mapping word-forms to categories, plus argument frames and
  control specifications used by :mod:`dgkit.functional`.

The text format is line oriented::

    cat D N V
    root V
    leaf D N
    rule N : D:DET *
    rule V : N:SUBJ *
    word the : D
    frame barks : SUBJ
    control ba : COMMENT.OBJ = SELF
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import product
from types import MappingProxyType
from typing import Iterable, Mapping

__all__ = [
    "GrammarError",
    "Slot",
    "Rule",
    "ControlSpec",
    "Grammar",
    "Diagnostic",
    "Production",
    "Cfg",
    "parse_grammar",
    "render_grammar",
    "validate_grammar",
    "gaifman_cfg",
    "render_cfg",
    "bar",
    "lex",
    "START",
    "NO_LABEL",
]

NO_LABEL = "_"
SELF = "SELF"
START = "S^"

_SYMBOL = re.compile(r"[^\s()*:^#]+")


class GrammarError(ValueError):
    """Malformed grammar text or an inconsistent grammar value."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _check_symbol(name: str, what: str) -> str:
    if not name or not _SYMBOL.fullmatch(name):
        raise GrammarError(f"invalid {what} {name!r}")
    return name


@dataclass(frozen=True)
class Slot:
    category: str
    label: str | None = None

    def __lt__(self, other: Slot) -> bool:
        return (self.category, self.label or "") < (other.category, other.label or "")

    def __post_init__(self):
        _check_symbol(self.category, "category")
        if self.label is not None:
            _check_symbol(self.label, "label")
            if self.label == NO_LABEL:
                raise GrammarError(f"label {NO_LABEL!r} is reserved for unlabeled arcs")

    @property
    def arc_label(self) -> str:
        return self.label if self.label is not None else NO_LABEL

    def __str__(self):
        return self.category if self.label is None else f"{self.category}:{self.label}"


@dataclass(frozen=True, order=True)
class Rule:
    """One governor category with its ordered left and right dependent slots.

    A rule with no slots at all stands for a leaf declaration; the grammar
    keeps those in ``leaf_cats`` instead of ``rules``.
    """

    head: str
    left: tuple[Slot, ...] = ()
    right: tuple[Slot, ...] = ()

    def __post_init__(self):
        _check_symbol(self.head, "category")
        object.__setattr__(self, "left", tuple(self.left))
        object.__setattr__(self, "right", tuple(self.right))

    @property
    def is_leaf(self) -> bool:
        return not self.left and not self.right

    @property
    def slots(self) -> tuple[Slot, ...]:
        return self.left + self.right

    def duplicate_labels(self) -> list[str]:
        seen: set[str] = set()
        dups = []
        for slot in self.slots:
            if slot.label is None:
                continue
            if slot.label in seen and slot.label not in dups:
                dups.append(slot.label)
            seen.add(slot.label)
        return dups

    def __str__(self):
        parts = [str(s) for s in self.left] + ["*"] + [str(s) for s in self.right]
        return f"{self.head}({', '.join(parts)})"


@dataclass(frozen=True, order=True)
class ControlSpec:
    """Install a gap at ``gap_path`` below the trigger, co-indexed with the trigger."""

    trigger: str
    gap_path: tuple[str, ...]
    controller: str = SELF

    def __post_init__(self):
        _check_symbol(self.trigger, "control trigger")
        object.__setattr__(self, "gap_path", tuple(self.gap_path))
        if not self.gap_path:
            raise GrammarError("control gap path must name at least one function")
        for label in self.gap_path:
            _check_symbol(label, "label")
        if self.controller != SELF:
            raise GrammarError(f"unsupported controller {self.controller!r} (only {SELF})")


@dataclass(frozen=True)
class Grammar:
    """An immutable dependency grammar.

    Collections are canonicalised on construction (rules deduplicated and
    sorted, controls sorted) so that equal grammars compare equal no matter
    how they were assembled.
    """

    categories: frozenset[str] = frozenset()
    rules: tuple[Rule, ...] = ()
    leaf_cats: frozenset[str] = frozenset()
    root_cats: frozenset[str] = frozenset()
    lexicon: Mapping[str, frozenset[str]] = field(default_factory=dict)
    frames: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    controls: tuple[ControlSpec, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "categories", frozenset(self.categories))
        for cat in self.categories:
            _check_symbol(cat, "category")
        rules = set()
        for rule in self.rules:
            if rule.is_leaf:
                raise GrammarError(f"rule {rule} has no dependent slots; declare `leaf {rule.head}` instead")
            rules.add(rule)
        object.__setattr__(self, "rules", tuple(sorted(rules)))
        object.__setattr__(self, "leaf_cats", frozenset(self.leaf_cats))
        object.__setattr__(self, "root_cats", frozenset(self.root_cats))
        lexicon = {}
        for form, cats in sorted(self.lexicon.items()):
            _check_symbol(form, "word-form")
            cats = frozenset([cats] if isinstance(cats, str) else cats)
            if not cats:
                raise GrammarError(f"word {form!r} has no category")
            lexicon[form] = cats
        object.__setattr__(self, "lexicon", MappingProxyType(lexicon))
        frames = {}
        for key, labels in sorted(self.frames.items()):
            _check_symbol(key, "frame key")
            labels = tuple(labels)
            if not labels:
                raise GrammarError(f"frame for {key!r} is empty")
            if len(set(labels)) != len(labels):
                raise GrammarError(f"frame for {key!r} repeats a function")
            frames[key] = labels
        object.__setattr__(self, "frames", MappingProxyType(frames))
        object.__setattr__(self, "controls", tuple(sorted(set(self.controls))))

    def __hash__(self):
        return hash(render_grammar(self))

    def undeclared(self) -> list[str]:
        """Categories referenced anywhere but missing from ``categories``."""
        used: set[str] = set(self.leaf_cats) | set(self.root_cats)
        for rule in self.rules:
            used.add(rule.head)
            used.update(s.category for s in rule.slots)
        for cats in self.lexicon.values():
            used.update(cats)
        return sorted(used - self.categories)

    def rules_for(self, cat: str) -> tuple[Rule, ...]:
        """Every way a word of ``cat`` can take dependents, leaf use included."""
        found = tuple(r for r in self.rules if r.head == cat)
        if cat in self.leaf_cats:
            found = (Rule(cat),) + found
        return found

    def categories_of(self, form: str) -> frozenset[str]:
        return self.lexicon.get(form, frozenset())

    def frame_for(self, form: str, cat: str | None = None) -> tuple[str, ...] | None:
        if form in self.frames:
            return self.frames[form]
        if cat is not None and cat in self.frames:
            return self.frames[cat]
        return None


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

_DIRECTIVES = ("cat", "root", "leaf", "rule", "word", "frame", "control")


def _split_colon(rest: str, lineno: int, directive: str) -> tuple[str, str]:
    if ":" not in rest:
        raise GrammarError(f"`{directive}` needs `<name> : ...`", lineno)
    left, right = rest.split(":", 1)
    left = left.strip()
    if not left or len(left.split()) != 1:
        raise GrammarError(f"`{directive}` needs exactly one name before ':'", lineno)
    return left, right.strip()


def _parse_rule(rest: str, lineno: int) -> Rule:
    head, body = _split_colon(rest, lineno, "rule")
    items = body.split()
    if items.count("*") != 1:
        raise GrammarError("rule must contain exactly one bare `*`", lineno)
    star = items.index("*")
    slots = []
    for item in items:
        if item == "*":
            continue
        cat, sep, label = item.partition(":")
        if sep and not label:
            raise GrammarError(f"empty label in slot {item!r}", lineno)
        try:
            slots.append(Slot(cat, label or None))
        except GrammarError as exc:
            raise GrammarError(str(exc), lineno) from None
    try:
        return Rule(head, tuple(slots[:star]), tuple(slots[star:]))
    except GrammarError as exc:
        raise GrammarError(str(exc), lineno) from None


def parse_grammar(text: str) -> Grammar:
    """Read a grammar from its text format.

    Raises :class:`GrammarError` (with a line number) on syntax errors,
    unknown directives and references to undeclared categories.
    """
    categories: set[str] = set()
    roots: set[str] = set()
    leaves: set[str] = set()
    rules: list[Rule] = []
    lexicon: dict[str, set[str]] = {}
    frames: dict[str, tuple[str, ...]] = {}
    controls: list[ControlSpec] = []
    first_use: dict[str, int] = {}

    def use(cat: str, lineno: int) -> None:
        first_use.setdefault(cat, lineno)

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        directive, _, rest = line.partition(" ")
        rest = rest.strip()
        if directive not in _DIRECTIVES:
            raise GrammarError(f"unknown directive {directive!r}", lineno)
        try:
            if directive in ("cat", "root", "leaf"):
                names = rest.split()
                if not names:
                    raise GrammarError(f"`{directive}` needs at least one category", lineno)
                for name in names:
                    _check_symbol(name, "category")
                    if directive == "cat":
                        categories.add(name)
                    else:
                        use(name, lineno)
                        (roots if directive == "root" else leaves).add(name)
            elif directive == "rule":
                rule = _parse_rule(rest, lineno)
                if rule.is_leaf:
                    raise GrammarError(
                        f"rule for {rule.head} has no dependent slots; use `leaf {rule.head}`", lineno
                    )
                use(rule.head, lineno)
                for slot in rule.slots:
                    use(slot.category, lineno)
                rules.append(rule)
            elif directive == "word":
                form, cats = _split_colon(rest, lineno, "word")
                _check_symbol(form, "word-form")
                names = cats.split()
                if not names:
                    raise GrammarError("`word` needs at least one category", lineno)
                for name in names:
                    _check_symbol(name, "category")
                    use(name, lineno)
                lexicon.setdefault(form, set()).update(names)
            elif directive == "frame":
                key, labels = _split_colon(rest, lineno, "frame")
                _check_symbol(key, "frame key")
                names = tuple(labels.split())
                if not names:
                    raise GrammarError("`frame` needs at least one function", lineno)
                for name in names:
                    _check_symbol(name, "label")
                if key in frames and frames[key] != names:
                    raise GrammarError(f"conflicting frames for {key!r}", lineno)
                frames[key] = names
            else:
                trigger, spec = _split_colon(rest, lineno, "control")
                path, eq, controller = spec.partition("=")
                if not eq:
                    raise GrammarError("`control` needs `= SELF`", lineno)
                labels = path.strip().split(".")
                if any(not p for p in labels):
                    raise GrammarError("empty function in control path", lineno)
                controls.append(ControlSpec(trigger, tuple(labels), controller.strip()))
        except GrammarError as exc:
            if exc.line is None:
                raise GrammarError(str(exc), lineno) from None
            raise

    for cat, lineno in sorted(first_use.items(), key=lambda kv: (kv[1], kv[0])):
        if cat not in categories:
            raise GrammarError(f"undeclared category {cat}", lineno)

    return Grammar(
        categories=frozenset(categories),
        rules=tuple(rules),
        leaf_cats=frozenset(leaves),
        root_cats=frozenset(roots),
        lexicon={k: frozenset(v) for k, v in lexicon.items()},
        frames=frames,
        controls=tuple(controls),
    )


def _render_rule(rule: Rule) -> str:
    parts = [str(s) for s in rule.left] + ["*"] + [str(s) for s in rule.right]
    return f"rule {rule.head} : {' '.join(parts)}"


def render_grammar(g: Grammar) -> str:
    """Canonical text form; ``parse_grammar(render_grammar(g)) == g``."""
    lines = []
    for directive, names in (("cat", g.categories), ("root", g.root_cats), ("leaf", g.leaf_cats)):
        if names:
            lines.append(f"{directive} {' '.join(sorted(names))}")
    lines.extend(sorted(_render_rule(r) for r in g.rules))
    lines.extend(f"word {form} : {' '.join(sorted(cats))}" for form, cats in sorted(g.lexicon.items()))
    lines.extend(f"frame {key} : {' '.join(labels)}" for key, labels in sorted(g.frames.items()))
    lines.extend(
        sorted(f"control {c.trigger} : {'.'.join(c.gap_path)} = {c.controller}" for c in g.controls)
    )
    return "".join(line + "\n" for line in lines)


# ---------------------------------------------------------------------------
# diagnostics
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    message: str

    def __str__(self):
        return f"{self.severity}: {self.message}"


def validate_grammar(g: Grammar) -> list[Diagnostic]:
    diags = []
    if not g.root_cats:
        diags.append(Diagnostic("error", "no root category declared"))
    for cat in g.undeclared():
        diags.append(Diagnostic("error", f"undeclared category {cat}"))
    for rule in g.rules:
        for label in rule.duplicate_labels():
            diags.append(Diagnostic("error", f"duplicate label {label} in rule {rule}"))

    heads = {r.head for r in g.rules}
    mentioned = set(heads) | set(g.leaf_cats) | set(g.root_cats)
    for rule in g.rules:
        mentioned.update(s.category for s in rule.slots)
    for cats in g.lexicon.values():
        mentioned.update(cats)
    with_words = {c for cats in g.lexicon.values() for c in cats}

    for cat in sorted(g.categories):
        if cat not in mentioned:
            diags.append(Diagnostic("warning", f"unreachable category {cat}"))
        elif cat not in heads and cat not in g.leaf_cats:
            diags.append(Diagnostic("warning", f"category {cat} is usable neither via a rule nor as a leaf"))
    for cat in sorted(heads):
        if cat not in with_words:
            diags.append(Diagnostic("warning", f"rule head {cat} has no word in the lexicon"))
    return sorted(diags)


# ---------------------------------------------------------------------------
# Gaifman construction
# ---------------------------------------------------------------------------


def bar(cat: str) -> str:
    return f"{cat}_bar"


def lex(cat: str) -> str:
    return f"{cat}_lex"


@dataclass(frozen=True, order=True)
class Production:
    lhs: str
    rhs: tuple[str, ...]
    head: int

    def __str__(self):
        return f"{self.lhs} -> {' '.join(self.rhs)} # head={self.head}"


@dataclass(frozen=True)
class Cfg:
    nonterminals: frozenset[str]
    preterminals: frozenset[str]
    terminals: frozenset[str]
    start: str
    productions: tuple[Production, ...]

    @property
    def head_index(self) -> dict[Production, int]:
        return {p: p.head for p in self.productions}


def gaifman_cfg(g: Grammar) -> Cfg:
    """Build the strongly equivalent phrase-structure grammar.

    For each category X there is a phrasal symbol ``X_bar`` and a
    preterminal ``X_lex``; the governor's preterminal is the head child of
    every production it appears in. Labels do not survive the
    construction, so rules differing only in labels share a production.
    """
    errors = [d for d in validate_grammar(g) if d.severity == "error"]
    if errors:
        raise GrammarError("; ".join(d.message for d in errors))

    prods: set[Production] = set()
    for form, cats in g.lexicon.items():
        for cat in cats:
            prods.add(Production(lex(cat), (form,), 0))
    for rule in g.rules:
        rhs = tuple(bar(s.category) for s in rule.left) + (lex(rule.head),)
        rhs += tuple(bar(s.category) for s in rule.right)
        prods.add(Production(bar(rule.head), rhs, len(rule.left)))
    for cat in g.leaf_cats:
        prods.add(Production(bar(cat), (lex(cat),), 0))
    for cat in g.root_cats:
        prods.add(Production(START, (bar(cat),), 0))

    return Cfg(
        nonterminals=frozenset({START} | {bar(c) for c in g.categories} | {lex(c) for c in g.categories}),
        preterminals=frozenset(lex(c) for c in g.categories),
        terminals=frozenset(g.lexicon),
        start=START,
        productions=tuple(sorted(prods, key=lambda p: (p.lhs, p.rhs, p.head))),
    )


def render_cfg(cfg: Cfg) -> str:
    return "".join(f"{p}\n" for p in cfg.productions)


def iter_sentences(g: Grammar, max_len: int) -> Iterable[tuple[str, ...]]:
    """All word sequences of length 1..max_len over the lexicon, in sorted order."""
    forms = sorted(g.lexicon)
    for n in range(1, max_len + 1):
        yield from product(forms, repeat=n)
