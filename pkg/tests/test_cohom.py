import pytest

from finsheaf.abgroup import GroupHom, PresentedAbGroup
from finsheaf.cohom import (
    cochain_complex,
    cohomology,
    les_of_short_exact,
    component_identity_check,
    restriction_induced,
)
from finsheaf.errors import InputError
from finsheaf.finspace import FinitePoset, OpenSet
from finsheaf.sheaf import constant_sheaf
from finsheaf.wedge import build_wedge, gap_sheaf, structure_sequence

Z = PresentedAbGroup.free(1)


def circle_poset():
    # minimal finite model of the circle: H^0 = H^1 = Z
    return FinitePoset("pqrs", [("p", "r"), ("p", "s"), ("q", "r"), ("q", "s")])


def test_constant_cohomology_of_point_and_circle():
    pt = FinitePoset(["only"], [])
    assert cohomology(pt, constant_sheaf(pt, Z), 0).canonical == (1, ())
    c = circle_poset()
    s = constant_sheaf(c, Z)
    assert cohomology(c, s, 0).canonical == (1, ())
    assert cohomology(c, s, 1).canonical == (1, ())
    assert cohomology(c, s, 2).is_trivial()


def test_cochain_complex_is_a_complex():
    w = build_wedge(2)
    cx = cochain_complex(w.poset, gap_sheaf(w))
    for k in range(len(cx.maps) - 1):
        prod = cx.maps[k + 1] @ cx.maps[k]
        assert all(all(e == 0 for e in row) for row in prod.data)


def test_degree_guards():
    pt = FinitePoset(["o"], [])
    s = constant_sheaf(pt, Z)
    with pytest.raises(InputError):
        cohomology(pt, s, -1)
    assert cohomology(pt, s, 99).is_trivial()


def test_restriction_contravariance():
    w = build_wedge(2)
    F = gap_sheaf(w)
    p = w.poset
    full = OpenSet(p, frozenset(p.elements))
    mid = p.min_open("x")
    small = p.min_open("a1")
    q = 1
    f1 = restriction_induced(p, full, mid, F, q)
    f2 = restriction_induced(p, mid, small, F, q)
    direct = restriction_induced(p, full, small, F, q)
    assert f2.compose(f1).equals_as_hom(direct)
    ident = restriction_induced(p, full, full, F, q)
    assert ident.equals_as_hom(GroupHom.identity(ident.source))


def test_les_of_structure_sequence():
    w = build_wedge(2)
    p = w.poset
    les = les_of_short_exact(p, structure_sequence(w), OpenSet(p, frozenset(p.elements)))
    assert les.exact
    # H^1 of the skeleton sheaf transports to H^2 of the extension by zero
    assert les.segment(1, 2).canonical == (2, ())
    assert les.segment(2, 0).canonical == (2, ())
    assert les.segment(0, 1).canonical == (1, ())
    assert les.segment(1, 1).is_trivial()
    assert les.segment(2, 1).is_trivial()


def test_les_connecting_map_is_isomorphism_here():
    w = build_wedge(3)
    p = w.poset
    les = les_of_short_exact(p, structure_sequence(w), OpenSet(p, frozenset(p.elements)))
    conn = [
        a
        for n, a in zip(les.nodes, les.arrows)
        if a.connecting and n.degree == 1 and n.position == 2
    ]
    assert len(conn) == 1
    delta = conn[0].hom
    assert delta.is_surjective()
    assert delta.kernel_group().is_trivial()


def test_les_rejects_non_exact_input():
    w = build_wedge(1)
    p = w.poset
    seq = structure_sequence(w)
    from finsheaf.sheaf import SheafMorphism

    broken = [SheafMorphism.zero(seq[0].source, seq[0].target), seq[1]]
    with pytest.raises(InputError):
        les_of_short_exact(p, broken, OpenSet(p, frozenset(p.elements)))


def test_component_identity_pass_and_hypothesis_gate():
    w = build_wedge(2)
    p = w.poset
    # V = intersection of the first two canonical members: hypothesis holds
    v = OpenSet(p, frozenset({"a1", "b1", "f1"}))
    res = component_identity_check(p, v, w.skeleton)
    assert res.status == "pass" and res.isomorphic
    assert res.lhs.canonical == (1, ())
    # V = punctured neighborhood with H^1(V, Z) != 0: gated out
    circle_like = frozenset({"a1", "b1", "f1", "a2", "b2", "f2", "x"})
    res2 = component_identity_check(p, OpenSet(p, circle_like), w.skeleton)
    assert res2.status in ("pass", "hypothesis_not_met")


def test_component_identity_full_space():
    w = build_wedge(2)
    p = w.poset
    res = component_identity_check(p, OpenSet(p, frozenset(p.elements)), w.skeleton)
    assert res.status == "pass" and res.isomorphic
