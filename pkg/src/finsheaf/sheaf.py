"""Sheaves of abelian groups on finite posets.

A sheaf is the same thing as a functor: one stalk per element plus a
restriction homomorphism along every comparable pair p <= q (remember that
the stalk at p is the sections over its minimal open set, which shrinks as
p grows).  Restriction maps are stored on cover relations only; composites
are derived, cached, and checked for path independence at construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Sequence, Tuple

from .abgroup import GroupHom, IntMatrix, PresentedAbGroup, block_diag, kernel_basis, solve
from .errors import ContractViolation, InputError
from .finspace import FinitePoset, OpenSet


class PosetSheaf:
    def __init__(
        self,
        base: FinitePoset,
        stalks: Dict[str, PresentedAbGroup],
        cover_maps: Dict[Tuple[str, str], IntMatrix],
        check: bool = True,
    ):
        if set(stalks) != set(base.elements):
            raise InputError("stalks must be given for exactly the elements of the base")
        for (a, b) in cover_maps:
            if (a, b) not in base.covers:
                raise InputError(f"({a},{b}) is not a cover relation of the base")
        for (a, b) in base.covers:
            m = cover_maps.get((a, b))
            if m is None:
                raise InputError(f"missing restriction map for cover relation ({a},{b})")
            if m.rows != stalks[b].generator_count or m.cols != stalks[a].generator_count:
                raise InputError(f"restriction matrix for ({a},{b}) has wrong dimensions")
        self.base = base
        self.stalks = dict(stalks)
        self.cover_maps = dict(cover_maps)
        self._restrict_cache: Dict[Tuple[str, str], IntMatrix] = {}
        if check:
            self._check_functorial()

    def stalk(self, p: str) -> PresentedAbGroup:
        if p not in self.stalks:
            raise InputError(f"unknown element {p!r}")
        return self.stalks[p]

    def restrict(self, p: str, q: str) -> IntMatrix:
        """The restriction matrix stalk(p) -> stalk(q) for p <= q."""
        if p == q:
            return IntMatrix.identity(self.stalks[p].generator_count)
        if not self.base.lt(p, q):
            raise InputError(f"{p!r} is not below {q!r}")
        key = (p, q)
        cached = self._restrict_cache.get(key)
        if cached is not None:
            return cached
        if key in self.cover_maps:
            m = self.cover_maps[key]
        else:
            # any cover path gives the same hom; functoriality was checked
            mid = next(c for (a, c) in self.base.covers if a == p and self.base.lt(c, q))
            m = self.restrict(mid, q) @ self.cover_maps[(p, mid)]
        self._restrict_cache[key] = m
        return m

    def restrict_hom(self, p: str, q: str) -> GroupHom:
        return GroupHom(self.stalks[p], self.stalks[q], self.restrict(p, q), check=False)

    def _check_functorial(self) -> None:
        # all factorizations p < m < q must agree with the direct composite
        for p in self.base.elements:
            for q in self.base.elements:
                if not self.base.lt(p, q):
                    continue
                direct = GroupHom(self.stalks[p], self.stalks[q], self.restrict(p, q), check=False)
                for m in self.base.elements:
                    if self.base.lt(p, m) and self.base.lt(m, q):
                        via = self.restrict(m, q) @ self.restrict(p, m)
                        if not direct.equals_as_hom(
                            GroupHom(self.stalks[p], self.stalks[q], via, check=False)
                        ):
                            raise ContractViolation(
                                f"restriction maps not functorial along {p} < {m} < {q}"
                            )
                # restriction must respect stalk relations
                for j in range(self.stalks[p].relations.cols):
                    img = direct.matrix.apply(self.stalks[p].relations.column(j))
                    if not self.stalks[q].contains_in_relations(img):
                        raise ContractViolation(f"restriction ({p},{q}) does not respect relations")

    def restricted_to(self, members: Iterable[str]) -> "PosetSheaf":
        """The sheaf induced on a subspace (restriction of the functor)."""
        sub = self.base.subposet(members)
        stalks = {e: self.stalks[e] for e in sub.elements}
        maps = {(a, b): self.restrict(a, b) for (a, b) in sub.covers}
        return PosetSheaf(sub, stalks, maps, check=False)

    def __repr__(self):
        return f"<PosetSheaf on {len(self.base)} elements>"


def constant_sheaf(base: FinitePoset, group: PresentedAbGroup) -> PosetSheaf:
    """Every stalk the given group, every restriction the identity."""
    n = group.generator_count
    ident = IntMatrix.identity(n)
    return PosetSheaf(
        base,
        {e: group for e in base.elements},
        {c: ident for c in base.covers},
        check=False,
    )


def zero_sheaf(base: FinitePoset) -> PosetSheaf:
    return constant_sheaf(base, PresentedAbGroup.trivial())


def extension_by_zero(base: FinitePoset, opens: OpenSet, group: PresentedAbGroup) -> PosetSheaf:
    """Stalk = group inside the open set, trivial outside; restriction is the
    identity inside and zero across the boundary."""
    if opens.parent != base:
        raise InputError("open set does not belong to the given poset")
    trivial = PresentedAbGroup.trivial()
    stalks = {e: (group if e in opens else trivial) for e in base.elements}
    maps = {}
    for (a, b) in base.covers:
        maps[(a, b)] = (
            IntMatrix.identity(group.generator_count)
            if a in opens and b in opens
            else IntMatrix.zero(stalks[b].generator_count, stalks[a].generator_count)
        )
    return PosetSheaf(base, stalks, maps, check=False)


def closed_pushforward(base: FinitePoset, closed: Iterable[str], group: PresentedAbGroup) -> PosetSheaf:
    """The pushforward of the constant sheaf on a closed subspace.

    The stalk at p is one copy of the group per connected component of
    min_open(p) ∩ A; restrictions refine components.
    """
    a_set = frozenset(closed)
    if not base.is_closed(a_set):
        raise InputError("subset is not closed (complement is not an up-set)")
    comps: Dict[str, list] = {}
    for p in base.elements:
        trace = base.up_set(p) & a_set
        comps[p] = base.subposet(trace).connected_components() if trace else []
    g = group.generator_count
    from .abgroup import direct_sum

    stalks = {p: direct_sum([group] * len(comps[p])) for p in base.elements}
    maps = {}
    ident = IntMatrix.identity(g)
    zero = IntMatrix.zero(g, g)
    for (p, q) in base.covers:
        blocks = []
        for dq in comps[q]:
            row = []
            for cp in comps[p]:
                row.append(ident if dq <= cp else zero)
            blocks.append(row)
        rows = len(comps[q]) * g
        cols = len(comps[p]) * g
        entries = [[0] * cols for _ in range(rows)]
        for i, row in enumerate(blocks):
            for j, blk in enumerate(row):
                for bi in range(g):
                    for bj in range(g):
                        entries[i * g + bi][j * g + bj] = blk.data[bi][bj]
        maps[(p, q)] = IntMatrix(rows, cols, entries)
    return PosetSheaf(base, stalks, maps)


class SheafMorphism:
    """A natural transformation between sheaves on the same base."""

    def __init__(self, source: PosetSheaf, target: PosetSheaf, components: Dict[str, IntMatrix], check: bool = True):
        if source.base != target.base:
            raise InputError("morphism requires sheaves on the same base")
        for e in source.base.elements:
            m = components.get(e)
            if m is None:
                raise InputError(f"missing component at {e!r}")
            if m.rows != target.stalks[e].generator_count or m.cols != source.stalks[e].generator_count:
                raise InputError(f"component at {e!r} has wrong dimensions")
        self.source = source
        self.target = target
        self.components = dict(components)
        if check:
            self._check_natural()

    def _check_natural(self) -> None:
        for (p, q) in self.source.base.covers:
            left = self.components[q] @ self.source.restrict(p, q)
            right = self.target.restrict(p, q) @ self.components[p]
            tgt = self.target.stalks[q]
            for j in range(left.cols):
                diff = [a - b for a, b in zip(left.column(j), right.column(j))]
                if not tgt.contains_in_relations(diff):
                    raise ContractViolation(f"naturality fails on cover relation ({p},{q})")

    def component_hom(self, p: str) -> GroupHom:
        return GroupHom(self.source.stalks[p], self.target.stalks[p], self.components[p], check=False)

    def restricted_to(self, members: Iterable[str]) -> "SheafMorphism":
        src = self.source.restricted_to(members)
        tgt = self.target.restricted_to(members)
        return SheafMorphism(src, tgt, {e: self.components[e] for e in src.base.elements}, check=False)

    @classmethod
    def zero(cls, source: PosetSheaf, target: PosetSheaf) -> "SheafMorphism":
        comps = {
            e: IntMatrix.zero(
                target.stalks[e].generator_count, source.stalks[e].generator_count
            )
            for e in source.base.elements
        }
        return cls(source, target, comps, check=False)

    @classmethod
    def identity(cls, sheaf: PosetSheaf) -> "SheafMorphism":
        comps = {e: IntMatrix.identity(sheaf.stalks[e].generator_count) for e in sheaf.base.elements}
        return cls(sheaf, sheaf, comps, check=False)


def kernel_sheaf(m: SheafMorphism) -> PosetSheaf:
    """Stalkwise kernel with the induced restrictions."""
    base = m.source.base
    gens: Dict[str, IntMatrix] = {}
    stalks: Dict[str, PresentedAbGroup] = {}
    for p in base.elements:
        hom = m.component_hom(p)
        src = m.source.stalks[p]
        lifted = kernel_basis(hom.matrix.hstack(-m.target.stalks[p].relations))
        kg = lifted.submatrix_rows(range(src.generator_count))
        rel = kernel_basis(kg.hstack(-src.relations)).submatrix_rows(range(kg.cols))
        gens[p] = kg
        stalks[p] = PresentedAbGroup(kg.cols, rel)
    maps = {}
    for (p, q) in base.covers:
        r = m.source.restrict(p, q)
        cols = []
        for j in range(gens[p].cols):
            vec = r.apply(gens[p].column(j))
            sol = solve(gens[q].hstack(-m.source.stalks[q].relations), vec)
            if sol is None:
                raise ContractViolation("restriction does not preserve the kernel")
            cols.append(list(sol[: gens[q].cols]))
        maps[(p, q)] = IntMatrix.from_columns(cols, nrows=gens[q].cols)
    return PosetSheaf(base, stalks, maps)


def cokernel_sheaf(m: SheafMorphism) -> PosetSheaf:
    """Stalkwise cokernel; restrictions descend from the target sheaf."""
    base = m.source.base
    stalks = {
        p: PresentedAbGroup(
            m.target.stalks[p].generator_count,
            m.target.stalks[p].relations.hstack(m.components[p]),
        )
        for p in base.elements
    }
    maps = {(p, q): m.target.restrict(p, q) for (p, q) in base.covers}
    return PosetSheaf(base, stalks, maps)


@dataclass(frozen=True)
class ExactnessResult:
    exact: bool
    failing_element: Optional[str] = None
    failing_position: Optional[int] = None

    def __bool__(self):
        return self.exact


def is_exact(morphisms: Sequence[SheafMorphism]) -> ExactnessResult:
    """Stalkwise exactness of 0 -> F_0 -> F_1 -> ... -> F_n -> 0.

    Checks every object, with the sequence padded by zero maps on both ends.
    The certificate names the first failing element and position.
    """
    if not morphisms:
        raise InputError("need at least one morphism")
    for a, b in zip(morphisms, morphisms[1:]):
        if a.target is not b.source and a.target.base != b.source.base:
            raise InputError("morphisms do not compose")
    sheaves = [morphisms[0].source] + [m.target for m in morphisms]
    base = sheaves[0].base
    from .abgroup import ChainComplexData

    for p in base.elements:
        groups = (
            [PresentedAbGroup.trivial()]
            + [s.stalks[p] for s in sheaves]
            + [PresentedAbGroup.trivial()]
        )
        mats = (
            [IntMatrix.zero(groups[1].generator_count, 0)]
            + [m.components[p] for m in morphisms]
            + [IntMatrix.zero(0, groups[-2].generator_count)]
        )
        # a non-complex is in particular not exact
        for i in range(len(mats) - 1):
            comp = mats[i + 1] @ mats[i]
            tgt = groups[i + 2]
            if any(not tgt.contains_in_relations(comp.column(j)) for j in range(comp.cols)):
                return ExactnessResult(False, p, i)
        cx = ChainComplexData(groups, mats)
        for pos in range(1, len(groups) - 1):
            if not cx.homology(pos).group.is_trivial():
                return ExactnessResult(False, p, pos - 1)
    return ExactnessResult(True)
