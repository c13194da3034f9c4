"""Reading and writing dependency structures and phrase markers.

CoNLL-like text: one token per line, ``ID FORM CAT HEAD LABEL`` separated
by tabs, HEAD 0 for the independent element, blank line between
sentences, ``#`` lines are comments. Only single-head structures fit.

JSON: ``{"tokens": [{"form", "cat"}], "arcs": [{"head", "dep", "label"}]}``,
which can hold any arc set.

Phrase markers as s-expressions: ``( ( the/D ^dog/N ) ^barks/V )``; the
``^`` marks each node's head child.
"""

from __future__ import annotations

import json
import re
from typing import Iterator

from .ds import Arc, DependencyStructure, DSError, Leaf, Node, PhraseMarker, Token, build_ds

__all__ = [
    "FormatError",
    "read_conll",
    "write_conll",
    "ds_to_json",
    "ds_from_json",
    "read_ds_json",
    "read_pm",
    "write_pm",
    "dumps",
]


class FormatError(ValueError):
    pass


def dumps(obj) -> str:
    """Compact, key-sorted JSON so output is byte-stable."""
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(", ", ": "))


# ---------------------------------------------------------------------------
# CoNLL
# ---------------------------------------------------------------------------


def _conll_blocks(text: str) -> Iterator[list[tuple[int, str]]]:
    block: list[tuple[int, str]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            if block:
                yield block
                block = []
        elif not line.startswith("#"):
            block.append((lineno, line))
    if block:
        yield block


def read_conll(text: str) -> list[DependencyStructure]:
    out = []
    for block in _conll_blocks(text):
        tokens, arcs = [], []
        for expected, (lineno, line) in enumerate(block, 1):
            cols = line.rstrip("\n").split("\t")
            if len(cols) != 5:
                raise FormatError(f"line {lineno}: expected 5 tab-separated columns, got {len(cols)}")
            ident, form, cat, head, label = cols
            try:
                ident_n, head_n = int(ident), int(head)
            except ValueError:
                raise FormatError(f"line {lineno}: ID and HEAD must be integers") from None
            if ident_n != expected:
                raise FormatError(f"line {lineno}: expected token id {expected}, got {ident_n}")
            tokens.append((form, cat))
            if head_n:
                arcs.append((head_n, ident_n, label or "_"))
        try:
            out.append(build_ds(tokens, arcs))
        except DSError as exc:
            raise FormatError(f"line {block[0][0]}: {exc}") from None
    return out


def write_conll(ds: DependencyStructure) -> str:
    heads: dict[int, Arc] = {}
    for arc in ds.arcs:
        if arc.dep in heads:
            raise FormatError(f"token {arc.dep} has several heads; use the JSON format")
        heads[arc.dep] = arc
    lines = []
    for tok in ds.tokens:
        arc = heads.get(tok.index)
        head, label = (arc.head, arc.label) if arc else (0, "_")
        lines.append(f"{tok.index}\t{tok.form}\t{tok.category}\t{head}\t{label}\n")
    return "".join(lines)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def ds_to_json(ds: DependencyStructure) -> dict:
    return {
        "tokens": [{"form": t.form, "cat": t.category} for t in ds.tokens],
        "arcs": [{"head": a.head, "dep": a.dep, "label": a.label} for a in ds.sorted_arcs()],
    }


def ds_from_json(obj) -> DependencyStructure:
    try:
        tokens = [(t["form"], t.get("cat", "_")) for t in obj["tokens"]]
        arcs = [(int(a["head"]), int(a["dep"]), a.get("label", "_")) for a in obj.get("arcs", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed dependency-structure JSON: {exc}") from None
    try:
        return build_ds(tokens, arcs)
    except DSError as exc:
        raise FormatError(str(exc)) from None


def read_ds_json(text: str) -> list[DependencyStructure]:
    """One structure, or a JSON array of them."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    if isinstance(obj, list):
        return [ds_from_json(o) for o in obj]
    return [ds_from_json(obj)]


# ---------------------------------------------------------------------------
# s-expressions
# ---------------------------------------------------------------------------

_SEXP_TOKEN = re.compile(r"\^?\(|\)|\^?[^\s()]+")


def _leaf_token(index: int, text: str) -> Token:
    form, sep, cat = text.rpartition("/")
    if not sep or not form or not cat:
        raise FormatError(f"leaf {text!r} must look like form/CAT")
    return Token(index, form, cat)


def read_pm(text: str) -> PhraseMarker:
    items = _SEXP_TOKEN.findall(text)
    if "".join(items) != "".join(text.split()):
        raise FormatError(f"unexpected characters in phrase marker {text.strip()!r}")
    if not items:
        raise FormatError("empty phrase marker")
    pos = 0
    counter = 0

    def item() -> tuple[PhraseMarker, bool]:
        nonlocal pos, counter
        if pos >= len(items):
            raise FormatError("unbalanced parentheses")
        tok = items[pos]
        pos += 1
        is_head = tok.startswith("^")
        body = tok[1:] if is_head else tok
        if body == ")":
            raise FormatError("unexpected ')'")
        if body != "(":
            counter += 1
            return Leaf(_leaf_token(counter, body)), is_head
        children, heads = [], []
        while True:
            if pos >= len(items):
                raise FormatError("unbalanced parentheses")
            if items[pos] == ")":
                pos += 1
                break
            child, child_is_head = item()
            if child_is_head:
                heads.append(len(children))
            children.append(child)
        if not children:
            raise FormatError("empty node '( )'")
        if len(heads) != 1:
            raise FormatError(f"node must mark exactly one head child with '^', found {len(heads)}")
        try:
            return Node(tuple(children), heads[0]), is_head
        except DSError as exc:
            raise FormatError(str(exc)) from None

    pm, _ = item()
    if pos != len(items):
        raise FormatError("trailing material after phrase marker")
    return pm


def write_pm(pm: PhraseMarker) -> str:
    if isinstance(pm, Leaf):
        return str(pm.token)
    parts = []
    for k, child in enumerate(pm.children):
        text = write_pm(child)
        parts.append("^" + text if k == pm.head_child else text)
    return "( " + " ".join(parts) + " )"
