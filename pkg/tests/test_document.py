import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hodgelattice.document import DocumentError, document_to_json, dumps, load_document, parse_document

rationals = st.one_of(
    st.integers(-50, 50),
    st.tuples(st.integers(-50, 50), st.integers(1, 30)).map(list),
)


def scalars(order):
    plain = st.integers(-9, 9)
    cyc = st.builds(
        lambda num, den: {"num": num, "den": den},
        st.lists(st.integers(-9, 9), min_size=1, max_size=max(order, 1)),
        st.integers(1, 12),
    )
    return st.one_of(plain, cyc)


def matrices(rank, order):
    return st.lists(st.lists(scalars(order), min_size=rank, max_size=rank), min_size=rank, max_size=rank)


@st.composite
def documents(draw):
    rank = draw(st.integers(1, 3))
    n = draw(st.integers(1, 2))
    order = draw(st.sampled_from([1, 2, 3, 4, 6, 12]))
    doc = {
        "schema_version": 1,
        "rank": rank,
        "n": n,
        "cyclotomic_order": order,
        "matrices": draw(st.lists(matrices(rank, order), min_size=n, max_size=n)),
    }
    if draw(st.booleans()):
        doc["vhs"] = {
            "weight": draw(st.integers(0, 3)),
            "polarization": draw(matrices(rank, 1).map(lambda m: [[e if isinstance(e, int) else 1 for e in r] for r in m])),
            "flag": {str(p): draw(st.lists(st.integers(1, rank), max_size=rank)) for p in range(draw(st.integers(1, 3)))},
        }
    if draw(st.booleans()):
        term = st.fixed_dictionaries(
            {
                "alpha": st.integers(1, rank),
                "exponents": st.lists(st.integers(-4, 4), min_size=n, max_size=n),
                "coeff": st.fixed_dictionaries({"re": rationals, "im": rationals}),
            }
        )
        doc["section"] = {
            "basis": draw(st.sampled_from(["standard", "adapted"])),
            "terms": draw(st.lists(term, max_size=4)),
            "symbolic_tail": draw(st.booleans()),
        }
    if draw(st.booleans()):
        doc["region"] = {"a": [draw(st.integers(1, 9)), 10], "epsilon": draw(st.integers(1, 5)), "samples": 10}
    if draw(st.booleans()):
        coord = st.tuples(rationals, rationals).map(list)
        doc["points"] = draw(st.lists(st.lists(coord, min_size=n, max_size=n), min_size=1, max_size=3))
    if draw(st.booleans()):
        doc["vectors"] = draw(st.lists(st.lists(scalars(order), min_size=rank, max_size=rank), max_size=3))
    return doc


@given(documents())
def test_round_trip(raw):
    doc = parse_document(raw)
    encoded = document_to_json(doc)
    assert parse_document(encoded) == doc
    # canonical encoding is a fixed point
    assert document_to_json(parse_document(json.loads(dumps(encoded)))) == encoded


def test_load_fixture(data_dir):
    doc = load_document(str(data_dir / "unipotent_block.json"))
    assert doc.rank == 2 and doc.n == 1
    assert doc.section.terms[0].alpha == 2
    assert doc.points[1] == ((Fraction(1, 3), Fraction(2)),)
    assert doc.region.a == Fraction(1, 2)


@pytest.mark.parametrize(
    "patch, path",
    [
        ({"rank": 0}, "$.rank"),
        ({"matrices": []}, "$.matrices"),
        ({"matrices": [[[1, 1], [0]]]}, "$.matrices[0][1]"),
        ({"matrices": [[[1, {"den": 2}], [0, 1]]]}, "$.matrices[0][0][1].num"),
        ({"schema_version": 2}, "$.schema_version"),
        ({"bogus": 1}, "$"),
        ({"points": [[[0, 1], [0, 2]]]}, "$.points[0]"),
        ({"region": {"a": 2, "epsilon": 1}}, "$.region.a"),
        ({"section": {"terms": [{"alpha": 3, "exponents": [0]}]}}, "$.section.terms[0].alpha"),
        ({"vhs": {"weight": 1, "polarization": [[0, -1], [1, 0]], "flag": {"0": [3]}}}, "$.vhs.flag.0[0]"),
    ],
)
def test_errors_carry_paths(patch, path):
    raw = {"schema_version": 1, "rank": 2, "n": 1, "matrices": [[[1, 1], [0, 1]]]}
    raw.update(patch)
    with pytest.raises(DocumentError) as err:
        parse_document(raw)
    assert err.value.path == path


def test_syntax_error_position(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "rank": 2,\n  "n": 1,,\n}')
    with pytest.raises(DocumentError, match="line 3 column"):
        load_document(str(p))


def test_dumps_is_canonical():
    text = dumps({"b": [1, 2.5, float("nan")], "a": {"x": Fraction(1, 3)}})
    assert text == '{\n  "a": {\n    "x": "1/3"\n  },\n  "b": [1, 2.5, null]\n}\n'
    assert dumps(0.1) == "0.10000000000000001\n"
