import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dgkit.grammar import (
    ControlSpec,
    Grammar,
    GrammarError,
    Production,
    Rule,
    Slot,
    gaifman_cfg,
    parse_grammar,
    render_cfg,
    render_grammar,
    validate_grammar,
)

TRIVIAL = "cat V\nroot V\nleaf V\nword runs : V\n"
TOY = (
    "cat D N V\nroot V\nleaf D\nleaf N\nrule N : D:DET *\nrule V : N:SUBJ *\n"
    "word the : D\nword dog : N\nword barks : V\n"
)


def test_parse_trivial():
    g = parse_grammar(TRIVIAL)
    assert g.root_cats == {"V"}
    assert g.leaf_cats == {"V"}
    assert dict(g.lexicon) == {"runs": {"V"}}
    assert g.rules == ()


def test_parse_toy_slot_order():
    g = parse_grammar(TOY)
    assert len(g.rules) == 2
    n_rule = next(r for r in g.rules if r.head == "N")
    assert n_rule.left == (Slot("D", "DET"),)
    assert n_rule.right == ()


def test_rule_slots_both_sides_keep_order():
    g = parse_grammar("cat A B C X\nroot X\nleaf A B C\nrule X : B A:F * C B:G\n")
    (rule,) = g.rules
    assert rule.left == (Slot("B"), Slot("A", "F"))
    assert rule.right == (Slot("C"), Slot("B", "G"))


def test_undeclared_category():
    with pytest.raises(GrammarError, match="undeclared category D"):
        parse_grammar("rule N : D *")


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("cat A\nfoo A\n", "unknown directive"),
        ("cat A B\nrule A : B\n", "exactly one bare"),
        ("cat A B\nrule A : * B *\n", "exactly one bare"),
        ("cat A\nrule A : *\n", "leaf A"),
        ("cat A\nword : A\n", "exactly one name"),
        ("cat A\ncontrol x : OBJ\n", "= SELF"),
        ("cat A\ncontrol x : OBJ = OTHER\n", "unsupported controller"),
        ("cat A B\nrule A : B:_ *\n", "reserved"),
        ("cat A(\n", "invalid category"),
    ],
)
def test_syntax_errors_carry_line_numbers(text, fragment):
    with pytest.raises(GrammarError, match=fragment) as exc:
        parse_grammar(text)
    assert exc.value.line is not None


def test_duplicate_rules_collapse_and_comments_ignored():
    g = parse_grammar("# c\ncat A B\n\nroot A\nleaf B\nrule A : * B   # tail\nrule A : * B\n")
    assert g.rules == (Rule("A", (), (Slot("B"),)),)


def test_validate_clean_toy():
    assert validate_grammar(parse_grammar(TOY)) == []


def test_validate_root_without_category():
    g = Grammar(categories=frozenset(), root_cats=frozenset({"V"}))
    diags = validate_grammar(g)
    assert any(d.severity == "error" and "undeclared category V" in d.message for d in diags)


def test_validate_no_root():
    diags = validate_grammar(parse_grammar("cat V\nleaf V\nword runs : V\n"))
    assert [d.message for d in diags if d.severity == "error"] == ["no root category declared"]


def test_validate_unreachable_category_warning():
    g = parse_grammar(TOY.replace("cat D N V", "cat D N V P"))
    diags = validate_grammar(g)
    assert [(d.severity, d.message) for d in diags] == [("warning", "unreachable category P")]


def test_validate_unusable_and_wordless_head():
    g = parse_grammar("cat A B\nroot A\nrule A : B *\nword b : B\n")
    messages = [d.message for d in validate_grammar(g)]
    assert "category B is usable neither via a rule nor as a leaf" in messages
    assert "rule head A has no word in the lexicon" in messages


def test_validate_duplicate_labels():
    g = parse_grammar("cat A B\nroot A\nleaf B\nrule A : B:F * B:F\nword a : A\n")
    assert any(d.severity == "error" and "duplicate label F" in d.message for d in validate_grammar(g))


def test_gaifman_trivial():
    cfg = gaifman_cfg(parse_grammar(TRIVIAL))
    assert render_cfg(cfg) == "S^ -> V_bar # head=0\nV_bar -> V_lex # head=0\nV_lex -> runs # head=0\n"
    assert cfg.terminals == {"runs"}
    assert cfg.start == "S^"


def test_gaifman_toy():
    cfg = gaifman_cfg(parse_grammar(TOY))
    assert Production("N_bar", ("D_bar", "N_lex"), 1) in cfg.productions
    assert Production("V_bar", ("N_bar", "V_lex"), 1) in cfg.productions
    assert cfg.head_index[Production("V_bar", ("N_bar", "V_lex"), 1)] == 1
    assert cfg.terminals == {"the", "dog", "barks"}
    for p in cfg.productions:
        assert 0 <= p.head < len(p.rhs)
        for sym in p.rhs:
            assert sym in cfg.nonterminals or sym in cfg.terminals


def test_gaifman_rejects_rootless_grammar():
    with pytest.raises(GrammarError, match="no root"):
        gaifman_cfg(parse_grammar("cat V\nleaf V\nword runs : V\n"))


def test_gaifman_head_index_between_slots():
    g = parse_grammar("cat A B C X\nroot X\nleaf A B C\nrule X : A B * C\nword x : X\n")
    (p,) = [p for p in gaifman_cfg(g).productions if p.lhs == "X_bar"]
    assert p.rhs == ("A_bar", "B_bar", "X_lex", "C_bar")
    assert p.head == 2


def test_frames_and_controls_parse():
    g = parse_grammar("cat T V\nroot T\nleaf V\nrule T : * V:COMMENT\nframe ba : COMMENT\ncontrol ba : COMMENT.OBJ = SELF\n")
    assert g.frames["ba"] == ("COMMENT",)
    assert g.controls == (ControlSpec("ba", ("COMMENT", "OBJ")),)


def test_control_requires_path():
    with pytest.raises(GrammarError):
        ControlSpec("x", ())


# --- round trip and determinism ------------------------------------------------

_names = st.sampled_from(["A", "B", "C", "N", "V", "Xp"])
_labels = st.one_of(st.none(), st.sampled_from(["SUBJ", "OBJ", "F", "COMMENT"]))
_forms = st.sampled_from(["a", "b", "dog", "ba", "x-1", "runs"])


@st.composite
def grammars(draw):
    cats = draw(st.sets(_names, min_size=1))
    cat = st.sampled_from(sorted(cats))
    slot = st.builds(Slot, cat, _labels)
    rules = []
    for _ in range(draw(st.integers(0, 4))):
        left = draw(st.lists(slot, max_size=2))
        right = draw(st.lists(slot, min_size=0 if left else 1, max_size=2))
        rules.append(Rule(draw(cat), tuple(left), tuple(right)))
    lexicon = draw(st.dictionaries(_forms, st.sets(cat, min_size=1), max_size=4))
    frames = draw(
        st.dictionaries(
            st.one_of(_forms, cat), st.lists(st.sampled_from(["SUBJ", "OBJ", "F"]), min_size=1, unique=True), max_size=2
        )
    )
    controls = draw(
        st.lists(
            st.builds(ControlSpec, st.one_of(_forms, cat), st.lists(st.sampled_from(["OBJ", "COMMENT"]), min_size=1, max_size=2).map(tuple)),
            max_size=2,
        )
    )
    return Grammar(
        categories=frozenset(cats),
        rules=tuple(rules),
        leaf_cats=frozenset(draw(st.sets(cat))),
        root_cats=frozenset(draw(st.sets(cat))),
        lexicon=lexicon,
        frames=frames,
        controls=tuple(controls),
    )


@settings(max_examples=200, deadline=None)
@given(grammars())
def test_render_parse_round_trip(g):
    text = render_grammar(g)
    assert parse_grammar(text) == g
    assert render_grammar(parse_grammar(text)) == text


@settings(max_examples=100, deadline=None)
@given(grammars())
def test_gaifman_deterministic_and_sorted(g):
    if any(d.severity == "error" for d in validate_grammar(g)):
        return
    first, second = gaifman_cfg(g), gaifman_cfg(parse_grammar(render_grammar(g)))
    assert first == second
    keys = [(p.lhs, p.rhs) for p in first.productions]
    assert keys == sorted(keys)
    assert first.terminals == set(g.lexicon)
