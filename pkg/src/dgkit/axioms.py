"""Well-formedness of dependency structures.

A1  exactly one element is independent;
A2  every other element depends on some element (checked here as: every
    element is reachable from an independent one, so cycles are rejected);
A3  no element depends directly on more than one other;
A4  if A depends on B and C lies between them, C depends on A, on B, or on
    some other element lying between them;
A5  no element has a dependent on the far side of its own governor.

A5 follows from A1-A4. For trees, A4 holds exactly when no two arcs
cross and no independent element lies under an arc; both facts are
exercised exhaustively in the test-suite rather than assumed here.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ds import Arc, DependencyStructure

__all__ = [
    "Violation",
    "check_a1",
    "check_a2",
    "check_a3",
    "check_a4",
    "check_a5",
    "is_noncrossing",
    "a1_violations",
    "a2_violations",
    "a3_violations",
    "a4_violations",
    "a5_violations",
    "crossing_violations",
    "validate",
    "is_well_formed",
]

AXIOMS = ("A1", "A2", "A3", "A4", "A5", "CROSSING", "COVERED_ROOT", "CYCLE")


@dataclass(frozen=True)
class Violation:
    axiom: str
    witnesses: tuple = ()
    message: str = ""
    conditional: bool = False

    def __post_init__(self):
        if self.axiom not in AXIOMS:
            raise ValueError(f"unknown axiom {self.axiom!r}")
        object.__setattr__(self, "witnesses", tuple(self.witnesses))

    def to_json(self) -> dict:
        out = {
            "axiom": self.axiom,
            "witnesses": [_witness_json(w) for w in self.witnesses],
            "message": self.message,
        }
        if self.conditional:
            out["conditional"] = True
        return out


def _witness_json(w):
    if isinstance(w, Arc):
        return {"head": w.head, "dep": w.dep, "label": w.label}
    return w


def _head_sets(ds: DependencyStructure) -> dict[int, set[int]]:
    heads: dict[int, set[int]] = {t.index: set() for t in ds.tokens}
    for a in ds.arcs:
        heads[a.dep].add(a.head)
    return heads


# ---------------------------------------------------------------------------
# violation producers; the check_* predicates are thin wrappers
# ---------------------------------------------------------------------------


def a1_violations(ds: DependencyStructure) -> list[Violation]:
    roots = ds.roots()
    if len(roots) == 1:
        return []
    if not roots:
        return [Violation("A1", (), "no independent element")]
    return [Violation("A1", roots, f"{len(roots)} independent elements: {roots}")]


def a2_violations(ds: DependencyStructure) -> list[Violation]:
    children: dict[int, list[int]] = {}
    for a in ds.arcs:
        children.setdefault(a.head, []).append(a.dep)
    reached = set(ds.roots())
    stack = list(reached)
    while stack:
        for d in children.get(stack.pop(), ()):
            if d not in reached:
                reached.add(d)
                stack.append(d)
    stranded = sorted(t.index for t in ds.tokens if t.index not in reached)
    if not stranded:
        return []
    # every stranded token has a head, so following heads must loop
    return [Violation("CYCLE", stranded, f"tokens {stranded} are not reachable from an independent element")]


def a3_violations(ds: DependencyStructure) -> list[Violation]:
    out = []
    for i, hs in sorted(_head_sets(ds).items()):
        if len(hs) > 1:
            out.append(Violation("A3", (i,), f"token {i} has {len(hs)} governors: {sorted(hs)}"))
    return out


def a4_violations(ds: DependencyStructure) -> list[Violation]:
    heads = _head_sets(ds)
    out = []
    for arc in sorted(ds.arcs, key=lambda a: (a.span, a.head)):
        lo, hi = arc.span
        for c in range(lo + 1, hi):
            if not any(lo <= h <= hi for h in heads[c]):
                where = "is independent" if not heads[c] else f"is governed from outside by {sorted(heads[c])}"
                out.append(
                    Violation("A4", (arc, c), f"arc {arc.head}->{arc.dep} spans token {c}, which {where}")
                )
    return out


def a5_violations(ds: DependencyStructure) -> list[Violation]:
    heads = _head_sets(ds)
    deps: dict[int, list[int]] = {}
    for a in ds.arcs:
        deps.setdefault(a.head, []).append(a.dep)
    out = []
    for i in sorted(heads):
        for g in sorted(heads[i]):
            bad = sorted(d for d in deps.get(i, ()) if min(i, d) < g < max(i, d))
            if bad:
                out.append(
                    Violation(
                        "A5",
                        (i,),
                        f"token {i} has dependents {bad} beyond its governor {g}",
                    )
                )
                break
    return out


def crossing_violations(ds: DependencyStructure) -> list[Violation]:
    arcs = sorted(ds.arcs, key=lambda a: (a.span, a.head))
    out = []
    for x in arcs:
        a, b = x.span
        for y in arcs:
            c, d = y.span
            if a < c < b < d:
                out.append(Violation("CROSSING", (x, y), f"arcs {x.head}->{x.dep} and {y.head}->{y.dep} cross"))
    for r in ds.roots():
        for x in arcs:
            lo, hi = x.span
            if lo < r < hi:
                out.append(
                    Violation("COVERED_ROOT", (r, x), f"independent token {r} lies under arc {x.head}->{x.dep}")
                )
    return out


def check_a1(ds: DependencyStructure) -> bool:
    return not a1_violations(ds)


def check_a2(ds: DependencyStructure) -> bool:
    return not a2_violations(ds)


def check_a3(ds: DependencyStructure) -> bool:
    return not a3_violations(ds)


def check_a4(ds: DependencyStructure) -> bool:
    """Literal A4 over the arc set; only conclusive when A1-A3 hold."""
    return not a4_violations(ds)


def check_a5(ds: DependencyStructure) -> bool:
    return not a5_violations(ds)


def is_noncrossing(ds: DependencyStructure) -> bool:
    return not crossing_violations(ds)


def validate(ds: DependencyStructure, *, always_check_order: bool = False) -> list[Violation]:
    """All failing axioms with witnesses; empty iff ``ds`` is a projective tree.

    A4, A5 and the crossing check only run once A1-A3 hold. With
    ``always_check_order`` they run regardless and their findings on
    ill-formed input are flagged ``conditional``.
    """
    found = a1_violations(ds) + a2_violations(ds) + a3_violations(ds)
    if found and not always_check_order:
        return found
    conditional = bool(found)
    for v in a4_violations(ds) + a5_violations(ds) + crossing_violations(ds):
        found.append(Violation(v.axiom, v.witnesses, v.message, conditional))
    return found


def is_well_formed(ds: DependencyStructure) -> bool:
    return not validate(ds)
