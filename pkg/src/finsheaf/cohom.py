"""Sheaf cohomology on finite posets via the canonical strict-chain complex.

The degree-k cochain group is the direct sum, over strict chains
p_0 < ... < p_k, of the stalk at p_k.  The differential is the alternating
sum of face maps; dropping the last element composes with the restriction
stalk(p_{k-1}) -> stalk(p_k).  In degree 0 this picks out compatible
families, i.e. global sections, and the complex computes sheaf cohomology
of the Alexandrov space.  For the constant sheaf it is literally the
simplicial cochain complex of the order complex.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .abgroup import (
    ChainComplexData,
    GroupHom,
    IntMatrix,
    PresentedAbGroup,
    Subquotient,
    induced_on_homology,
    solve,
)
from .errors import ContractViolation, InputError
from .finspace import FinitePoset, OpenSet
from .sheaf import PosetSheaf, SheafMorphism, constant_sheaf, is_exact


class CochainComplex(ChainComplexData):
    """Strict-chain cochain complex of a sheaf, with the chain bookkeeping
    needed to build chain-level maps (projections, stalkwise morphisms)."""

    def __init__(self, base, sheaf, groups, maps, chain_layout):
        self.base = base
        self.sheaf = sheaf
        # per degree: list of (chain, offset, rank); only nonzero stalks listed
        self.chain_layout = chain_layout
        super().__init__(groups, maps)

    def degree_rank(self, k: int) -> int:
        return self.groups[k].generator_count if 0 <= k < len(self.groups) else 0


def _stalk_rank(sheaf: PosetSheaf, p: str) -> int:
    g = sheaf.stalks[p]
    rank, factors = g.canonical
    if factors:
        raise ContractViolation(
            "cochain complexes are implemented for sheaves with free stalks; "
            f"stalk at {p!r} has torsion {factors}"
        )
    if rank != g.generator_count:
        raise ContractViolation(
            f"stalk at {p!r} has redundant generators; re-present it canonically first"
        )
    return rank


def cochain_complex(base: FinitePoset, sheaf: PosetSheaf) -> CochainComplex:
    """The canonical cochain complex of a free-stalk sheaf on a poset."""
    if sheaf.base != base:
        raise InputError("sheaf is not defined on the given poset")
    ranks = {p: _stalk_rank(sheaf, p) for p in base.elements}
    top = base.height
    layout: List[List[Tuple[tuple, int, int]]] = []
    index: List[Dict[tuple, int]] = []
    for k in range(top + 1):
        entries = []
        offset = 0
        idx = {}
        for chain in base.strict_chains(k):
            r = ranks[chain[-1]]
            if r == 0:
                continue
            idx[chain] = offset
            entries.append((chain, offset, r))
            offset += r
        layout.append(entries)
        index.append(idx)
    groups = [PresentedAbGroup.free(sum(r for _, _, r in entries)) for entries in layout]
    if not groups:
        groups = [PresentedAbGroup.trivial()]
        layout = [[]]
    maps = []
    for k in range(len(groups) - 1):
        rows = groups[k + 1].generator_count
        cols = groups[k].generator_count
        entries = [[0] * cols for _ in range(rows)]
        for chain, off, r in layout[k + 1]:
            for i in range(len(chain)):
                face = chain[:i] + chain[i + 1:]
                sign = -1 if i % 2 else 1
                if i < len(chain) - 1:
                    src_off = index[k].get(face)
                    if src_off is None:
                        continue
                    for t in range(r):
                        entries[off + t][src_off + t] += sign
                else:
                    src_off = index[k].get(face)
                    if src_off is None:
                        continue
                    rmat = sheaf.restrict(face[-1], chain[-1])
                    for t in range(rmat.rows):
                        for s in range(rmat.cols):
                            entries[off + t][src_off + s] += sign * rmat.data[t][s]
        maps.append(IntMatrix(rows, cols, entries))
    return CochainComplex(base, sheaf, groups, maps, layout)


def cohomology_classifier(base: FinitePoset, sheaf: PosetSheaf, q: int) -> Subquotient:
    cx = cochain_complex(base, sheaf)
    return cx.homology(q)


def cohomology(base: FinitePoset, sheaf: PosetSheaf, q: int) -> PresentedAbGroup:
    """H^q of the sheaf, in canonical form.  Degrees above the poset height
    are trivial."""
    if q < 0:
        raise InputError("degree must be >= 0")
    if q > base.height:
        return PresentedAbGroup.trivial()
    return cohomology_classifier(base, sheaf, q).group


def chain_projection(
    source: CochainComplex, target: CochainComplex, k: int
) -> IntMatrix:
    """Chain-level projection C^k(V) -> C^k(W) for W an (open) subspace of V:
    keep the coordinates of chains contained in W."""
    rows = target.degree_rank(k)
    cols = source.degree_rank(k)
    entries = [[0] * cols for _ in range(rows)]
    src_index = {chain: off for chain, off, _ in (source.chain_layout[k] if k < len(source.chain_layout) else [])}
    for chain, off, r in (target.chain_layout[k] if k < len(target.chain_layout) else []):
        soff = src_index.get(chain)
        if soff is None:
            continue
        for t in range(r):
            entries[off + t][soff + t] = 1
    return IntMatrix(rows, cols, entries)


def restriction_induced(
    base: FinitePoset, V: OpenSet, W: OpenSet, sheaf: PosetSheaf, q: int
) -> GroupHom:
    """The map H^q(V,F) -> H^q(W,F) induced by W ⊆ V, both open."""
    if not W.members <= V.members:
        raise InputError("W must be contained in V")
    if V.parent != base or W.parent != base:
        raise InputError("open sets must live on the given poset")
    src_space = base.subposet(V.members)
    tgt_space = base.subposet(W.members)
    src_cx = cochain_complex(src_space, sheaf.restricted_to(V.members))
    tgt_cx = cochain_complex(tgt_space, sheaf.restricted_to(W.members))
    degrees = max(len(src_cx.groups), len(tgt_cx.groups))
    f = [chain_projection(src_cx, tgt_cx, k) for k in range(degrees)]
    # pad the shorter complex so degrees line up
    while len(src_cx.groups) < degrees:
        src_cx.groups.append(PresentedAbGroup.trivial())
        src_cx.maps.append(IntMatrix.zero(0, src_cx.groups[-2].generator_count))
    while len(tgt_cx.groups) < degrees:
        tgt_cx.groups.append(PresentedAbGroup.trivial())
        tgt_cx.maps.append(IntMatrix.zero(0, tgt_cx.groups[-2].generator_count))
    if q >= degrees:
        return GroupHom.zero(PresentedAbGroup.trivial(), PresentedAbGroup.trivial())
    return induced_on_homology(f, src_cx, tgt_cx, q)


@dataclass
class LESNode:
    degree: int
    position: int  # 0, 1, 2 for the three sheaves
    label: str
    group: PresentedAbGroup


@dataclass
class LESArrow:
    hom: GroupHom
    connecting: bool


@dataclass
class LongExactSequence:
    nodes: List[LESNode]
    arrows: List[LESArrow]  # arrows[i]: nodes[i] -> nodes[i+1]
    exact: bool
    failing_node: Optional[int] = None

    def segment(self, degree: int, position: int) -> PresentedAbGroup:
        for n in self.nodes:
            if n.degree == degree and n.position == position:
                return n.group
        raise InputError(f"no node at degree {degree}, position {position}")


def _sheaf_morphism_chain_map(m: SheafMorphism, src_cx: CochainComplex, tgt_cx: CochainComplex) -> List[IntMatrix]:
    """Per-degree block-diagonal matrices applying the stalk morphism at the
    chain's last element."""
    mats = []
    for k in range(len(src_cx.groups)):
        rows = tgt_cx.degree_rank(k)
        cols = src_cx.degree_rank(k)
        entries = [[0] * cols for _ in range(rows)]
        tgt_index = {chain: off for chain, off, _ in (tgt_cx.chain_layout[k] if k < len(tgt_cx.chain_layout) else [])}
        for chain, soff, r in (src_cx.chain_layout[k] if k < len(src_cx.chain_layout) else []):
            toff = tgt_index.get(chain)
            if toff is None:
                continue
            comp = m.components[chain[-1]]
            for i in range(comp.rows):
                for j in range(comp.cols):
                    entries[toff + i][soff + j] = comp.data[i][j]
        mats.append(IntMatrix(rows, cols, entries))
    return mats


def les_of_short_exact(
    base: FinitePoset,
    ses: Sequence[SheafMorphism],
    V: OpenSet,
) -> LongExactSequence:
    """The long exact cohomology sequence of 0 -> A -> B -> C -> 0 over V.

    Connecting maps are computed by the snake lemma with exact integer
    preimage solving; exactness is re-verified at every node.
    """
    if len(ses) != 2:
        raise InputError("a short exact sequence is given by two morphisms A->B and B->C")
    fa, fb = ses
    sub = [m.restricted_to(V.members) for m in ses]
    verdict = is_exact(sub)
    if not verdict.exact:
        raise InputError(
            f"input sequence is not exact over V (fails at {verdict.failing_element})"
        )
    fa, fb = sub
    space = base.subposet(V.members)
    cxs = [
        cochain_complex(space, fa.source),
        cochain_complex(space, fa.target),
        cochain_complex(space, fb.target),
    ]
    top = len(cxs[0].groups) - 1
    # pad complexes to a common length
    maxdeg = max(len(c.groups) for c in cxs)
    for c in cxs:
        while len(c.groups) < maxdeg:
            c.groups.append(PresentedAbGroup.trivial())
            c.maps.append(IntMatrix.zero(0, c.groups[-2].generator_count))
            c.chain_layout.append([])
    fmat = _sheaf_morphism_chain_map(fa, cxs[0], cxs[1])
    gmat = _sheaf_morphism_chain_map(fb, cxs[1], cxs[2])
    labels = ["A", "B", "C"]
    homs: Dict[Tuple[int, int], Subquotient] = {}
    for k in range(maxdeg):
        for pos in range(3):
            homs[(k, pos)] = cxs[pos].homology(k)

    nodes: List[LESNode] = []
    arrows: List[LESArrow] = []
    for k in range(maxdeg):
        for pos in range(3):
            nodes.append(LESNode(k, pos, f"H^{k}({labels[pos]})", homs[(k, pos)].group))

    def induced(k: int, pos: int) -> GroupHom:
        f = fmat if pos == 0 else gmat
        hs, ht = homs[(k, pos)], homs[(k, pos + 1)]
        cols = []
        for i in range(hs.group.generator_count):
            coords = [0] * hs.group.generator_count
            coords[i] = 1
            rep = hs.rep_of(coords)
            cols.append(list(ht.class_of(f[k].apply(rep))))
        return GroupHom(hs.group, ht.group, IntMatrix.from_columns(cols, nrows=ht.group.generator_count))

    def connecting(k: int) -> GroupHom:
        hs = homs[(k, 2)]
        ht = homs.get((k + 1, 0))
        if ht is None:
            return GroupHom.zero(hs.group, PresentedAbGroup.trivial())
        cols = []
        for i in range(hs.group.generator_count):
            coords = [0] * hs.group.generator_count
            coords[i] = 1
            c_rep = hs.rep_of(coords)
            b_lift = solve(gmat[k], c_rep)
            if b_lift is None:
                raise ContractViolation("snake lemma: lift through B failed")
            db = cxs[1].maps[k].apply(b_lift) if k < len(cxs[1].maps) else tuple()
            a_pre = solve(fmat[k + 1], db)
            if a_pre is None:
                raise ContractViolation("snake lemma: preimage in A failed")
            cols.append(list(ht.class_of(a_pre)))
        return GroupHom(hs.group, ht.group, IntMatrix.from_columns(cols, nrows=ht.group.generator_count))

    for k in range(maxdeg):
        arrows.append(LESArrow(induced(k, 0), False))
        arrows.append(LESArrow(induced(k, 1), False))
        if k + 1 < maxdeg:
            arrows.append(LESArrow(connecting(k), True))

    # verify exactness at every node; the left end needs injectivity
    exact = True
    failing = None
    if arrows and not arrows[0].hom.kernel_group().is_trivial():
        exact = False
        failing = 0
    for i in range(1, len(nodes) - 1):
        if not exact:
            break
        incoming = arrows[i - 1].hom
        outgoing = arrows[i].hom if i < len(arrows) else None
        if outgoing is None:
            break
        cx = ChainComplexData(
            [incoming.source, incoming.target, outgoing.target],
            [incoming.matrix, outgoing.matrix],
        )
        if not cx.homology(1).group.is_trivial():
            exact = False
            failing = i
            break
    return LongExactSequence(nodes, arrows, exact, failing)


@dataclass
class ComponentIdentityResult:
    status: str  # "pass", "fail", "hypothesis_not_met"
    lhs: Optional[PresentedAbGroup] = None
    rhs: Optional[PresentedAbGroup] = None

    @property
    def isomorphic(self) -> Optional[bool]:
        if self.status == "hypothesis_not_met":
            return None
        return self.lhs.is_isomorphic_to(self.rhs)


def component_identity_check(base: FinitePoset, V: OpenSet, skeleton: Sequence[str]) -> ComponentIdentityResult:
    """Compare H^1(V, F) with coker(H^0(V,Z) -> H^0(V ∩ skeleton, Z)), where
    F is the rank-one sheaf extended by zero from the open complement of the
    skeleton.  Requires H^1(V, Z) = 0; otherwise reports hypothesis-not-met
    rather than a verdict."""
    skel = frozenset(skeleton)
    if not base.is_closed(skel):
        raise InputError("skeleton must be a closed subset")
    from .sheaf import extension_by_zero

    complement = OpenSet(base, set(base.elements) - skel)
    Z = PresentedAbGroup.free(1)
    v_space = base.subposet(V.members)
    if not cohomology(v_space, constant_sheaf(v_space, Z), 1).is_trivial():
        return ComponentIdentityResult("hypothesis_not_met")
    F = extension_by_zero(base, complement, Z)
    lhs = cohomology(v_space, F.restricted_to(V.members), 1)
    # coker of the component-refinement matrix H^0(V) -> H^0(V ∩ skeleton)
    trace = V.members & skel
    trace_comps = base.subposet(trace).connected_components()
    v_comps = v_space.connected_components()
    entries = [[1 if d <= c else 0 for c in v_comps] for d in trace_comps]
    mat = IntMatrix(len(trace_comps), len(v_comps), entries)
    rhs = PresentedAbGroup(len(trace_comps), mat)
    status = "pass" if lhs.is_isomorphic_to(rhs) else "fail"
    return ComponentIdentityResult(status, lhs, rhs)
