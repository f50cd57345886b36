"""JSON wire formats.

Matrices serialize as arrays of arrays of decimal strings so that nothing is
ever rounded in transit.  Posets serialize by their cover relations, sheaves
by stalk canonical forms plus restriction matrices keyed by "p<q" for cover
pairs, coverings by member lists plus the index order.
"""

from __future__ import annotations

from typing import Dict, List

from .abgroup import GroupHom, IntMatrix, PresentedAbGroup
from .cech import Covering
from .errors import InputError
from .finspace import FinitePoset
from .sheaf import PosetSheaf


def matrix_to_json(m: IntMatrix) -> list:
    return [[str(e) for e in row] for row in m.data]


def matrix_from_json(obj, rows: int = None, cols: int = None) -> IntMatrix:
    if not isinstance(obj, list) or any(not isinstance(r, list) for r in obj):
        raise InputError("matrix must be an array of arrays")
    try:
        data = [[int(e) for e in row] for row in obj]
    except (TypeError, ValueError):
        raise InputError("matrix entries must be decimal integer strings")
    r = len(data)
    c = len(data[0]) if data else (cols or 0)
    if any(len(row) != c for row in data):
        raise InputError("matrix rows differ in length")
    if rows is not None and r != rows:
        raise InputError(f"expected {rows} rows, got {r}")
    if cols is not None and c != cols:
        raise InputError(f"expected {cols} columns, got {c}")
    return IntMatrix(r, c, data)


def group_to_json(g: PresentedAbGroup) -> dict:
    rank, factors = g.canonical
    return {"rank": rank, "invariant_factors": list(factors)}


def group_from_json(obj) -> PresentedAbGroup:
    try:
        return PresentedAbGroup.from_canonical_form(
            int(obj["rank"]), [int(f) for f in obj.get("invariant_factors", [])]
        )
    except (KeyError, TypeError, ValueError):
        raise InputError("group must have integer 'rank' and 'invariant_factors'")


def poset_to_json(p: FinitePoset) -> dict:
    return {"elements": list(p.elements), "covers": [[a, b] for a, b in p.covers]}


def poset_from_json(obj) -> FinitePoset:
    try:
        elements = list(obj["elements"])
        covers = [(a, b) for a, b in obj["covers"]]
    except (KeyError, TypeError, ValueError):
        raise InputError("poset must have 'elements' and 'covers'")
    return FinitePoset(elements, covers)


def covering_to_json(c: Covering) -> dict:
    return {
        "members": {
            name: sorted(c.members[name], key=c.base.elements.index) for name in c.order
        },
        "order": list(c.order),
    }


def covering_from_json(base: FinitePoset, obj) -> Covering:
    try:
        members = {name: set(labels) for name, labels in obj["members"].items()}
        order = list(obj["order"])
    except (KeyError, TypeError, AttributeError):
        raise InputError("covering must have 'members' and 'order'")
    return Covering(base, members, order)


def sheaf_to_json(s: PosetSheaf) -> dict:
    stalks = {e: group_to_json(s.stalks[e]) for e in s.base.elements}
    restrictions = {}
    for p, q in s.base.covers:
        restrictions[f"{p}<{q}"] = matrix_to_json(s.restrict(p, q))
    return {"stalks": stalks, "restrictions": restrictions}


def sheaf_from_json(base: FinitePoset, obj) -> PosetSheaf:
    try:
        stalks = {e: group_from_json(g) for e, g in obj["stalks"].items()}
        raw = obj["restrictions"]
    except (KeyError, TypeError, AttributeError):
        raise InputError("sheaf must have 'stalks' and 'restrictions'")
    for e in base.elements:
        if e not in stalks:
            raise InputError(f"missing stalk for element {e!r}")
    cover_maps: Dict[tuple, IntMatrix] = {}
    for p, q in base.covers:
        key = f"{p}<{q}"
        if key not in raw:
            raise InputError(f"missing restriction {key!r}")
        cover_maps[(p, q)] = matrix_from_json(
            raw[key], rows=stalks[q].generator_count, cols=stalks[p].generator_count
        )
    from .errors import ContractViolation

    try:
        return PosetSheaf(base, stalks, cover_maps)
    except ContractViolation as e:
        # user data, not an internal bug
        raise InputError(str(e))
