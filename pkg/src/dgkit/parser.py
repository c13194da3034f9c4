"""All-parses dependency parsing under a :class:`~dgkit.grammar.Grammar`.

Three independent routes produce the same canonical list of analyses:

``parse``
    a chart over spans: a complete subtree of category X over ``[i, j]``
    is a head word of category X plus, for one of X's rules, a sequence of
    complete subtrees matching the left slots and another matching the
    right slots. Subtrees always cover contiguous spans, so every result
    is projective by construction.

``parse_via_cfg``
    CKY over the binarised Gaifman CFG; derivation trees are turned back
    into dependency structures by following head children.

``enumerate_oracle``
    brute force over every category assignment and head vector; only for
    short sentences.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

from . import axioms
from .ds import Arc, DependencyStructure, Token
from .grammar import START, Cfg, Grammar, Rule, bar, gaifman_cfg, lex

__all__ = [
    "ParseError",
    "UnknownWordError",
    "AnalysisLimitExceeded",
    "Analysis",
    "parse",
    "parse_via_cfg",
    "enumerate_oracle",
    "check_analysis",
    "DEFAULT_MAX_ANALYSES",
    "ORACLE_MAX_LEN",
]

DEFAULT_MAX_ANALYSES = 10_000
ORACLE_MAX_LEN = 7


class ParseError(ValueError):
    pass


class UnknownWordError(ParseError):
    def __init__(self, form: str, position: int):
        self.form = form
        self.position = position
        super().__init__(f"unknown word {form!r} at position {position}")


class AnalysisLimitExceeded(ParseError):
    """More analyses than allowed; ``analyses`` holds the first ``limit`` found."""

    def __init__(self, limit: int, analyses: list[Analysis]):
        self.limit = limit
        self.analyses = analyses
        super().__init__(f"sentence has more than {limit} analyses")


@dataclass(frozen=True)
class Analysis:
    ds: DependencyStructure
    rule_trace: tuple[Rule, ...]  # rule_trace[i - 1] is the rule used at token i

    def rule_at(self, i: int) -> Rule:
        return self.rule_trace[i - 1]

    def sort_key(self):
        return (
            self.ds.head_vector(),
            self.ds.label_vector(),
            tuple(t.category for t in self.ds.tokens),
        )


def _forms(g: Grammar, sentence: str | Sequence[str]) -> tuple[str, ...]:
    forms = tuple(sentence.split()) if isinstance(sentence, str) else tuple(sentence)
    if not forms:
        raise ParseError("empty sentence")
    for pos, form in enumerate(forms, 1):
        if form not in g.lexicon:
            raise UnknownWordError(form, pos)
    return forms


def _limit(max_analyses: int | None) -> int:
    if max_analyses is None:
        max_analyses = int(os.environ.get("DG_MAX_ANALYSES", DEFAULT_MAX_ANALYSES))
    if max_analyses < 1:
        raise ValueError("max_analyses must be positive")
    return max_analyses


def _collect(found: Iterator[Analysis], limit: int) -> list[Analysis]:
    seen: dict[tuple, Analysis] = {}
    for a in found:
        seen.setdefault(a.sort_key(), a)
        if len(seen) > limit:
            kept = sorted(seen.values(), key=Analysis.sort_key)[:limit]
            raise AnalysisLimitExceeded(limit, kept)
    return sorted(seen.values(), key=Analysis.sort_key)


def _make_analysis(forms, cats, heads, rules) -> Analysis:
    """Build an Analysis from per-token category, (head, label) and rule."""
    tokens = tuple(Token(i, f, c) for i, (f, c) in enumerate(zip(forms, cats), 1))
    arcs = frozenset(Arc(h, i, lab) for i, (h, lab) in enumerate(heads, 1) if h)
    return Analysis(DependencyStructure(tokens, arcs), tuple(rules))


def _rule_index(g: Grammar) -> dict[tuple, list[Rule]]:
    """(head cat, left cats, right cats) -> the rules with that unlabeled shape."""
    index: dict[tuple, list[Rule]] = {}
    for cat in sorted(g.categories):
        for rule in g.rules_for(cat):
            key = (cat, tuple(s.category for s in rule.left), tuple(s.category for s in rule.right))
            index.setdefault(key, []).append(rule)
    return index


# ---------------------------------------------------------------------------
# direct chart parser
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Sub:
    head: int
    cat: str
    rule: Rule
    deps: tuple[_Sub, ...]


def parse(g: Grammar, sentence: str | Sequence[str], max_analyses: int | None = None) -> list[Analysis]:
    """Every analysis of ``sentence`` licensed by ``g``, in canonical order."""
    forms = _forms(g, sentence)
    limit = _limit(max_analyses)
    n = len(forms)
    word_cats = [None] + [sorted(g.categories_of(f)) for f in forms]
    rules_for = {c: g.rules_for(c) for c in g.categories}

    def options(i: int, j: int, cat: str):
        for h in range(i, j + 1):
            if cat not in word_cats[h]:
                continue
            for rule in rules_for[cat]:
                lcats = tuple(s.category for s in rule.left)
                rcats = tuple(s.category for s in rule.right)
                if seq_count(i, h - 1, lcats) and seq_count(h + 1, j, rcats):
                    yield h, rule, lcats, rcats

    @lru_cache(maxsize=None)
    def cover_count(i: int, j: int, cat: str) -> int:
        return sum(
            seq_count(i, h - 1, lc) * seq_count(h + 1, j, rc) for h, _, lc, rc in options(i, j, cat)
        )

    @lru_cache(maxsize=None)
    def seq_count(i: int, j: int, cats: tuple[str, ...]) -> int:
        if not cats:
            return 1 if i > j else 0
        if j - i + 1 < len(cats):
            return 0
        return sum(
            cover_count(i, k, cats[0]) * seq_count(k + 1, j, cats[1:])
            for k in range(i, j - len(cats) + 2)
        )

    def covers(i: int, j: int, cat: str) -> Iterator[_Sub]:
        for h, rule, lc, rc in options(i, j, cat):
            for left in seqs(i, h - 1, lc):
                for right in seqs(h + 1, j, rc):
                    yield _Sub(h, cat, rule, left + right)

    def seqs(i: int, j: int, cats: tuple[str, ...]) -> Iterator[tuple[_Sub, ...]]:
        if not cats:
            if i > j:
                yield ()
            return
        for k in range(i, j - len(cats) + 2):
            if not (cover_count(i, k, cats[0]) and seq_count(k + 1, j, cats[1:])):
                continue
            for first in covers(i, k, cats[0]):
                for rest in seqs(k + 1, j, cats[1:]):
                    yield (first,) + rest

    def analyses() -> Iterator[Analysis]:
        for root_cat in sorted(g.root_cats):
            if not cover_count(1, n, root_cat):
                continue
            for tree in covers(1, n, root_cat):
                cats = [None] * n
                heads = [(0, "_")] * n
                rules = [None] * n
                stack = [tree]
                while stack:
                    sub = stack.pop()
                    cats[sub.head - 1] = sub.cat
                    rules[sub.head - 1] = sub.rule
                    for slot, dep in zip(sub.rule.slots, sub.deps):
                        heads[dep.head - 1] = (sub.head, slot.arc_label)
                        stack.append(dep)
                yield _make_analysis(forms, cats, heads, rules)

    return _collect(analyses(), limit)


# ---------------------------------------------------------------------------
# CKY over the Gaifman CFG
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Deriv:
    prod: object  # grammar.Production
    children: tuple  # _Deriv nodes, or a single token position for lexical productions


def _binarize(cfg: Cfg):
    """Split the CFG into lexical, unary and binary tables.

    Productions with more than two children get fresh intermediate
    symbols ``("@", k, pos)`` covering the suffix from ``pos`` onwards.
    """
    lexical: dict[str, list] = {}
    unary: dict[str, list] = {}
    binary: dict[tuple, list] = {}
    nonterminals = cfg.nonterminals
    for k, p in enumerate(cfg.productions):
        rhs = p.rhs
        if len(rhs) == 1:
            if rhs[0] in nonterminals:
                unary.setdefault(rhs[0], []).append((p.lhs, p))
            else:
                lexical.setdefault(rhs[0], []).append((p.lhs, p))
            continue
        lhs = p.lhs
        for pos in range(len(rhs) - 2):
            nxt = ("@", k, pos + 1)
            binary.setdefault((rhs[pos], nxt), []).append((lhs, p))
            lhs = nxt
        binary.setdefault((rhs[-2], rhs[-1]), []).append((lhs, p))
    return lexical, unary, binary


def _cky_chart(cfg: Cfg, forms: Sequence[str]):
    lexical, unary, binary = _binarize(cfg)
    n = len(forms)
    # chart[i, j][sym] -> list of backpointers
    chart: dict[tuple[int, int], dict] = {}

    def close_unary(cell: dict) -> None:
        agenda = list(cell)
        while agenda:
            sym = agenda.pop()
            for lhs, p in unary.get(sym, ()):
                bp = ("unary", p, sym)
                entries = cell.setdefault(lhs, [])
                if bp not in entries:
                    entries.append(bp)
                    agenda.append(lhs)

    for i, form in enumerate(forms, 1):
        cell: dict = {}
        for lhs, p in lexical.get(form, ()):
            cell.setdefault(lhs, []).append(("lex", p, i))
        close_unary(cell)
        chart[i, i] = cell
    for width in range(2, n + 1):
        for i in range(1, n - width + 2):
            j = i + width - 1
            cell = {}
            for k in range(i, j):
                left, right = chart[i, k], chart[k + 1, j]
                for b in left:
                    for c in right:
                        for lhs, p in binary.get((b, c), ()):
                            cell.setdefault(lhs, []).append(("bin", p, k, b, c))
            close_unary(cell)
            chart[i, j] = cell
    return chart


def _derivations(chart, cfg: Cfg, n: int) -> Iterator[_Deriv]:
    def real(sym) -> bool:
        return not isinstance(sym, tuple)

    def derivs(sym, i, j) -> Iterator[_Deriv]:
        for bp in chart[i, j].get(sym, ()):
            kind, p = bp[0], bp[1]
            if kind == "lex":
                yield _Deriv(p, (bp[2],))
            elif kind == "unary":
                for d in derivs(bp[2], i, j):
                    yield _Deriv(p, (d,))
            else:
                for kids in pairs(bp, i, j):
                    yield _Deriv(p, kids)

    def pairs(bp, i, j) -> Iterator[tuple]:
        _, _, k, b, c = bp
        for first in derivs(b, i, k):
            if real(c):
                for second in derivs(c, k + 1, j):
                    yield (first, second)
            else:
                for tail in tails(c, k + 1, j):
                    yield (first,) + tail

    def tails(sym, i, j) -> Iterator[tuple]:
        for bp in chart[i, j].get(sym, ()):
            yield from pairs(bp, i, j)

    yield from derivs(cfg.start, 1, n)


def parse_via_cfg(
    g: Grammar,
    sentence: str | Sequence[str],
    max_analyses: int | None = None,
    cfg: Cfg | None = None,
) -> list[Analysis]:
    """Same contract as :func:`parse`, computed through the Gaifman CFG.

    The CFG forgets function labels; each derivation is expanded into one
    analysis per choice of grammar rule whose unlabeled shape matches the
    production used at each head.
    """
    forms = _forms(g, sentence)
    limit = _limit(max_analyses)
    cfg = cfg or gaifman_cfg(g)
    n = len(forms)
    symbol_cat = {bar(c): c for c in g.categories} | {lex(c): c for c in g.categories}
    shapes = _rule_index(g)
    chart = _cky_chart(cfg, forms)

    def analyses() -> Iterator[Analysis]:
        for top in _derivations(chart, cfg, n):
            cats: list = [None] * n
            heads: list = [None] * n
            choices: list = [None] * n

            def walk(d: _Deriv) -> int:
                """Return the lexical head position of ``d``, recording arcs below it."""
                if d.prod.lhs in symbol_cat and d.prod.lhs == lex(symbol_cat[d.prod.lhs]):
                    pos = d.children[0]
                    cats[pos - 1] = symbol_cat[d.prod.lhs]
                    return pos
                kid_heads = [walk(c) for c in d.children]
                h = kid_heads[d.prod.head]
                if d.prod.lhs == START:
                    heads[h - 1] = 0
                    return h
                cat = symbol_cat[d.prod.lhs]
                deps = kid_heads[: d.prod.head] + kid_heads[d.prod.head + 1 :]
                for dep in deps:
                    heads[dep - 1] = h
                shape = (
                    cat,
                    tuple(symbol_cat[s] for s in d.prod.rhs[: d.prod.head]),
                    tuple(symbol_cat[s] for s in d.prod.rhs[d.prod.head + 1 :]),
                )
                choices[h - 1] = (deps, shapes[shape])
                return h

            walk(top)
            for picked in product(*(rules for _, rules in choices)):
                labeled = [(0, "_")] * n
                for (deps, _), rule in zip(choices, picked):
                    for dep, slot in zip(deps, rule.slots):
                        labeled[dep - 1] = (heads[dep - 1], slot.arc_label)
                yield _make_analysis(forms, cats, labeled, picked)

    return _collect(analyses(), limit)


# ---------------------------------------------------------------------------
# brute-force oracle
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _tree_head_vectors(n: int) -> tuple[tuple[int, ...], ...]:
    """Head vectors over n tokens that pass every axiom check."""
    out = []
    tokens = tuple(Token(i, "w") for i in range(1, n + 1))
    for heads in product(range(n + 1), repeat=n):
        if any(h == i for i, h in enumerate(heads, 1)):
            continue
        ds = DependencyStructure(tokens, frozenset(Arc(h, i) for i, h in enumerate(heads, 1) if h))
        if not axioms.validate(ds):
            out.append(heads)
    return tuple(out)


def enumerate_oracle(
    g: Grammar, sentence: str | Sequence[str], max_analyses: int | None = None
) -> list[Analysis]:
    """Exhaustive search over categories x head vectors; at most 7 words."""
    forms = _forms(g, sentence)
    n = len(forms)
    if n > ORACLE_MAX_LEN:
        raise ParseError(f"oracle is limited to {ORACLE_MAX_LEN} words, got {n}")
    limit = _limit(max_analyses)
    shapes = _rule_index(g)

    def analyses() -> Iterator[Analysis]:
        for heads in _tree_head_vectors(n):
            deps = [[] for _ in range(n + 1)]
            for i, h in enumerate(heads, 1):
                deps[h].append(i)
            for cats in product(*(sorted(g.categories_of(f)) for f in forms)):
                if cats[heads.index(0)] not in g.root_cats:
                    continue
                options = []
                for i in range(1, n + 1):
                    key = (
                        cats[i - 1],
                        tuple(cats[d - 1] for d in deps[i] if d < i),
                        tuple(cats[d - 1] for d in deps[i] if d > i),
                    )
                    options.append(shapes.get(key, []))
                for picked in product(*options):
                    labeled = [(0, "_")] * n
                    for i, rule in enumerate(picked, 1):
                        for dep, slot in zip(deps[i], rule.slots):
                            labeled[dep - 1] = (i, slot.arc_label)
                    yield _make_analysis(forms, cats, labeled, picked)

    return _collect(analyses(), limit)


def check_analysis(g: Grammar, a: Analysis) -> list[str]:
    """Problems with ``a`` as an analysis under ``g``; empty when it is sound."""
    problems = [v.message for v in axioms.validate(a.ds)]
    if problems:
        return problems
    ds = a.ds
    for tok in ds.tokens:
        rule = a.rule_at(tok.index)
        if rule.head != tok.category:
            problems.append(f"token {tok.index}: rule head {rule.head} != category {tok.category}")
        if rule.is_leaf and tok.category not in g.leaf_cats:
            problems.append(f"token {tok.index}: {tok.category} is not a declared leaf")
        elif not rule.is_leaf and rule not in g.rules:
            problems.append(f"token {tok.index}: rule {rule} is not in the grammar")
        arcs = sorted((a_ for a_ in ds.arcs if a_.head == tok.index), key=lambda x: x.dep)
        left = [x for x in arcs if x.dep < tok.index]
        right = [x for x in arcs if x.dep > tok.index]
        for side, slots in ((left, rule.left), (right, rule.right)):
            got = [(ds.token(x.dep).category, x.label) for x in side]
            want = [(s.category, s.arc_label) for s in slots]
            if got != want:
                problems.append(f"token {tok.index}: dependents {got} do not match slots {want}")
    root = ds.roots()[0]
    if ds.token(root).category not in g.root_cats:
        problems.append(f"root token {root} has non-root category {ds.token(root).category}")
    return problems
