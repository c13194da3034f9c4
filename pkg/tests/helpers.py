"""Independent enumerators and oracles shared by the tests."""

from __future__ import annotations

from itertools import product
from pathlib import Path

from dgkit.ds import build_ds
from dgkit.grammar import parse_grammar

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"


def load_grammar(name: str):
    return parse_grammar((DATA / name).read_text(encoding="utf-8"))


def head_vectors(n: int):
    """Every h: {1..n} -> {0..n} without self-loops."""
    for heads in product(range(n + 1), repeat=n):
        if all(h != i for i, h in enumerate(heads, 1)):
            yield heads


def ds_from_heads(heads, labels=None):
    n = len(heads)
    arcs = [(h, i, labels[i - 1] if labels else "_") for i, h in enumerate(heads, 1) if h]
    return build_ds([(f"w{i}", "X") for i in range(1, n + 1)], arcs)


def is_tree(heads) -> bool:
    """Exactly one root and every token reaches it by following heads."""
    if list(heads).count(0) != 1:
        return False
    for i in range(1, len(heads) + 1):
        seen = set()
        while i:
            if i in seen:
                return False
            seen.add(i)
            i = heads[i - 1]
    return True


def is_projective_by_dominance(heads) -> bool:
    """Textbook projectivity: every word strictly between a head and its
    dependent is dominated by that head."""

    def dominated_by(c, h):
        while c:
            if c == h:
                return True
            c = heads[c - 1]
        return False

    for d, h in enumerate(heads, 1):
        if not h:
            continue
        for c in range(min(h, d) + 1, max(h, d)):
            if not dominated_by(c, h):
                return False
    return True


def projective_trees(n: int):
    """Head vectors of single-root projective trees, by the dominance oracle."""
    for heads in head_vectors(n):
        if is_tree(heads) and is_projective_by_dominance(heads):
            yield heads


def cfg_recognizes(cfg, forms) -> bool:
    """Naive memoised top-down recogniser, independent of the parser's CKY."""
    from functools import lru_cache

    by_lhs = {}
    for p in cfg.productions:
        by_lhs.setdefault(p.lhs, []).append(p.rhs)
    forms = tuple(forms)

    @lru_cache(maxsize=None)
    def derives(sym, i, j):
        if sym not in by_lhs:
            return j == i + 1 and forms[i] == sym
        return any(seq(rhs, i, j) for rhs in by_lhs[sym])

    @lru_cache(maxsize=None)
    def seq(rhs, i, j):
        if not rhs:
            return i == j
        if j - i < len(rhs):
            return False
        return any(derives(rhs[0], i, k) and seq(rhs[1:], k, j) for k in range(i + 1, j + 1))

    return derives(cfg.start, 0, len(forms))
