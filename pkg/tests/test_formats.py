import json

import pytest

from dgkit.ds import Leaf, Node, Token, build_ds
from dgkit.formats import (
    FormatError,
    ds_from_json,
    ds_to_json,
    dumps,
    read_conll,
    read_ds_json,
    read_pm,
    write_conll,
    write_pm,
)

DS = build_ds(["the/D", "dog/N", "barks/V"], [(2, 1, "DET"), (3, 2, "SUBJ")])
CONLL = "1\tthe\tD\t2\tDET\n2\tdog\tN\t3\tSUBJ\n3\tbarks\tV\t0\t_\n"


def test_conll_round_trip():
    assert write_conll(DS) == CONLL
    assert read_conll("# c\n" + CONLL + "\n\n" + CONLL) == [DS, DS]


def test_conll_rejects_multi_head():
    multi = build_ds(["a/X", "b/X", "c/X"], [(1, 2), (3, 2)])
    with pytest.raises(FormatError, match="several heads"):
        write_conll(multi)


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("1\tthe\tD\t2\n", "5 tab-separated"),
        ("1\tthe\tD\tx\t_\n", "integers"),
        ("2\tthe\tD\t0\t_\n", "expected token id 1"),
        ("1\tthe\tD\t1\t_\n", "self-loop"),
        ("1\tthe\tD\t4\t_\n", "out of range"),
    ],
)
def test_conll_errors(text, fragment):
    with pytest.raises(FormatError, match=fragment):
        read_conll(text)


def test_json_round_trip():
    obj = ds_to_json(DS)
    assert obj["arcs"] == [
        {"head": 2, "dep": 1, "label": "DET"},
        {"head": 3, "dep": 2, "label": "SUBJ"},
    ]
    assert ds_from_json(json.loads(dumps(obj))) == DS
    assert read_ds_json(dumps([obj, obj])) == [DS, DS]


def test_json_holds_multi_head():
    multi = build_ds(["a/X", "b/X", "c/X"], [(1, 2), (3, 2)])
    assert ds_from_json(ds_to_json(multi)) == multi


@pytest.mark.parametrize("text", ["{", '{"arcs": []}', '{"tokens": [{"form": "a"}], "arcs": [{"head": 1, "dep": 1}]}'])
def test_json_errors(text):
    with pytest.raises(FormatError):
        read_ds_json(text)


def test_dumps_is_key_sorted():
    assert dumps({"b": 1, "a": [1, 2]}) == '{"a": [1, 2], "b": 1}'


def test_pm_round_trip():
    text = "( ( the/D ^dog/N ) ^barks/V )"
    pm = read_pm(text)
    assert pm == Node(
        (Node((Leaf(Token(1, "the", "D")), Leaf(Token(2, "dog", "N"))), 1), Leaf(Token(3, "barks", "V"))), 1
    )
    assert write_pm(pm) == text
    assert read_pm("a/b/N") == Leaf(Token(1, "a/b", "N"))


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("", "empty"),
        ("( a/N b/N )", "exactly one head"),
        ("( ^a/N ^b/N )", "exactly one head"),
        ("( ^a/N", "unbalanced"),
        ("( ^a/N ) )", "trailing"),
        ("( )", "empty node"),
        ("( ^a )", "form/CAT"),
        (")", "unexpected"),
    ],
)
def test_pm_errors(text, fragment):
    with pytest.raises(FormatError, match=fragment):
        read_pm(text)
