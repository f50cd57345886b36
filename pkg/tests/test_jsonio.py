import json

import pytest

from finsheaf import jsonio
from finsheaf.cohom import cohomology
from finsheaf.errors import InputError
from finsheaf.wedge import build_wedge, canonical_covering, gap_sheaf


def roundtrip(obj):
    return json.loads(json.dumps(obj))


def test_matrix_roundtrip_and_validation():
    m = jsonio.matrix_from_json([["3", "-4"], ["0", "7"]])
    assert jsonio.matrix_to_json(m) == [["3", "-4"], ["0", "7"]]
    with pytest.raises(InputError):
        jsonio.matrix_from_json([["a"]])
    with pytest.raises(InputError):
        jsonio.matrix_from_json([["1", "2"], ["3"]])
    with pytest.raises(InputError):
        jsonio.matrix_from_json([["1"]], rows=2)


def test_poset_roundtrip():
    w = build_wedge(2)
    back = jsonio.poset_from_json(roundtrip(jsonio.poset_to_json(w.poset)))
    assert back == w.poset
    with pytest.raises(InputError):
        jsonio.poset_from_json({"elements": ["a"]})


def test_covering_roundtrip():
    w = build_wedge(2)
    c = canonical_covering(w)
    back = jsonio.covering_from_json(w.poset, roundtrip(jsonio.covering_to_json(c)))
    assert list(back.order) == list(c.order)
    assert all(back.members[n] == c.members[n] for n in c.order)


def test_sheaf_roundtrip_preserves_cohomology():
    w = build_wedge(2)
    s = gap_sheaf(w)
    back = jsonio.sheaf_from_json(w.poset, roundtrip(jsonio.sheaf_to_json(s)))
    for q in (0, 1, 2):
        assert cohomology(w.poset, back, q).canonical == cohomology(w.poset, s, q).canonical


def test_sheaf_from_json_rejects_bad_data():
    w = build_wedge(1)
    obj = jsonio.sheaf_to_json(gap_sheaf(w))
    incomplete = {"stalks": {}, "restrictions": obj["restrictions"]}
    with pytest.raises(InputError):
        jsonio.sheaf_from_json(w.poset, incomplete)
    missing_restriction = {"stalks": obj["stalks"], "restrictions": {}}
    with pytest.raises(InputError):
        jsonio.sheaf_from_json(w.poset, missing_restriction)


def test_group_forms():
    g = jsonio.group_from_json({"rank": 1, "invariant_factors": [2]})
    assert g.canonical == (1, (2,))
    assert jsonio.group_to_json(g) == {"rank": 1, "invariant_factors": [2]}
    with pytest.raises(InputError):
        jsonio.group_from_json({"rank": "x"})
