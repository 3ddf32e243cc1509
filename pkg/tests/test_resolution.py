import json

import pytest

from monozeta.factory import family
from monozeta.resolution import (
    Component,
    FormSpec,
    FormTerm,
    ResolutionData,
    ResolutionFormatError,
    Stratum,
    form_from_doc,
    form_to_doc,
    monomial_form,
    parse,
    parse_form,
    serialize,
    validate,
)


def cusp_by_hand() -> ResolutionData:
    return ResolutionData(
        ambient_dim=2,
        components=(
            Component("E1", "exceptional", 2, 2),
            Component("E2", "exceptional", 3, 3),
            Component("E3", "exceptional", 6, 5),
            Component("S", "strict", 1, 1),
        ),
        strata=(
            Stratum(("E1",), 0),
            Stratum(("E2",), 0),
            Stratum(("E3",), -1),
            Stratum(("S",), 0),
            Stratum(("E1", "E3"), 1),
            Stratum(("E2", "E3"), 1),
            Stratum(("E3", "S"), 1),
        ),
    )


def test_hand_built_cusp_is_valid():
    rd = cusp_by_hand()
    assert validate(rd) == []
    assert rd.strict_gcd == 1
    assert sorted(rd.neighbours("E3")) == [("E1", 1), ("E2", 1), ("S", 1)]
    assert rd.chi(("E3",)) == -1
    assert rd.chi(("E1", "E2")) == 0


def test_curvette_with_nonzero_N_rejected():
    rd = cusp_by_hand()
    bad = ResolutionData(2, rd.components + (Component("C", "curvette", 1, 2),), rd.strata)
    assert any("curvette with nonzero N" in p for p in validate(bad))


def test_duplicate_stratum_rejected():
    rd = cusp_by_hand()
    bad = ResolutionData(2, rd.components, rd.strata + (Stratum(("E3", "E1"), 1),))
    assert any("duplicate stratum" in p for p in validate(bad))


def test_surface_strata_have_at_most_two_components():
    rd = cusp_by_hand()
    bad = ResolutionData(2, rd.components, rd.strata + (Stratum(("E1", "E2", "S"), 1),))
    assert validate(bad)


def test_empty_stratum_only_global():
    rd = cusp_by_hand()
    assert validate(ResolutionData(2, rd.components, rd.strata + (Stratum((), 0, 1),))) == []
    assert validate(ResolutionData(2, rd.components, rd.strata + (Stratum((), 1),)))


def test_nu_and_N_bounds():
    bad = ResolutionData(2, (Component("E", "exceptional", 0, 0),), (Stratum(("E",), 1),))
    problems = validate(bad)
    assert any("N >= 1" in p for p in problems)
    assert any("nu >= 1" in p for p in problems)


def test_round_trip_is_byte_identical():
    for rd in (cusp_by_hand(), family("ex28").rd, family("fermat", d=4).rd, family("xy", d=2, N=1, Nprime=3).rd):
        text = serialize(rd)
        assert parse(text) == rd
        assert serialize(parse(text)) == text


def test_unknown_reference_is_a_parse_error():
    doc = json.loads(serialize(cusp_by_hand()))
    doc["strata"].append({"components": ["E9"], "chi_local": 0})
    with pytest.raises(ResolutionFormatError, match="E9"):
        parse(json.dumps(doc))


def test_malformed_documents_carry_context():
    with pytest.raises(ResolutionFormatError, match="line 1"):
        parse("{")
    doc = json.loads(serialize(cusp_by_hand()))
    doc["components"][1]["N"] = "3"
    with pytest.raises(ResolutionFormatError, match=r"components\[1\]\.N"):
        parse(json.dumps(doc))
    doc = json.loads(serialize(cusp_by_hand()))
    doc["extra"] = 1
    with pytest.raises(ResolutionFormatError, match="unknown keys"):
        parse(json.dumps(doc))


def test_form_documents():
    w = FormSpec((FormTerm("E1", 2), FormTerm("E2", 5, 2)))
    assert form_from_doc(form_to_doc(w)) == w
    assert parse_form('{"terms": [{"host": "E1", "m": 1}]}') == FormSpec((FormTerm("E1", 1),))
    with pytest.raises(ResolutionFormatError):
        parse_form('{"terms": [{"host": "E1", "m": -1}]}')


def test_copies_split_remainder_first():
    assert FormTerm("E", 7, 3).split() == [3, 2, 2]
    assert FormTerm("E", 2, 3).split() == [1, 1, 0]
    assert sum(FormTerm("E", 11, 4).split()) == 11


def test_monomial_form_uses_axis_hosts():
    rd = family("ex28").rd
    w = monomial_form(rd, {"x": 2, "y": 0})
    assert w.terms == (FormTerm("E1", 2),)
    with pytest.raises(Exception):
        monomial_form(rd, {"z": 1})
