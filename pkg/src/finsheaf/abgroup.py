"""Exact arithmetic of integer matrices and finitely generated abelian groups.

Everything here works over plain Python ints, which are arbitrary precision,
so Smith normal form never overflows no matter how badly the intermediate
entries blow up.  Matrices are dense and immutable; groups are given by a
generator count and an integer relation matrix, with the canonical form
(rank + invariant factors) computed through Smith normal form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .errors import ContractViolation, InputError


class IntMatrix:
    """Immutable dense integer matrix, row-major."""

    __slots__ = ("rows", "cols", "data", "_hash")

    def __init__(self, rows: int, cols: int, entries: Iterable[Iterable[int]]):
        data = tuple(tuple(int(e) for e in row) for row in entries)
        if len(data) != rows or any(len(r) != cols for r in data):
            raise InputError(f"expected {rows}x{cols} entries")
        self.rows = rows
        self.cols = cols
        self.data = data
        self._hash = None

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        return cls(len(rows), ncols, rows)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]], nrows: Optional[int] = None) -> "IntMatrix":
        if not cols:
            return cls.zero(nrows or 0, 0)
        n = len(cols[0])
        return cls(n, len(cols), [[c[i] for c in cols] for i in range(n)])

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, [[0] * cols for _ in range(rows)])

    @classmethod
    def diagonal(cls, entries: Sequence[int], rows: Optional[int] = None, cols: Optional[int] = None) -> "IntMatrix":
        r = rows if rows is not None else len(entries)
        c = cols if cols is not None else len(entries)
        m = [[0] * c for _ in range(r)]
        for i, d in enumerate(entries):
            m[i][i] = d
        return cls(r, c, m)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IntMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self.data))
        return self._hash

    def __setattr__(self, name, value):
        # allow construction, forbid mutation afterwards
        if hasattr(self, "_hash") and name not in ("_hash",):
            raise AttributeError("IntMatrix is immutable")
        object.__setattr__(self, name, value)

    def __repr__(self):
        return f"IntMatrix({self.rows}x{self.cols}, {list(map(list, self.data))})"

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise InputError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        bt = list(zip(*other.data)) if other.data else [()] * other.cols
        out = [
            [sum(a * b for a, b in zip(row, col)) for col in bt]
            for row in self.data
        ]
        if self.rows == 0 or other.cols == 0:
            return IntMatrix.zero(self.rows, other.cols)
        return IntMatrix(self.rows, other.cols, out)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, [[-e for e in row] for row in self.data])

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, list(zip(*self.data)) if self.data else [[] for _ in range(self.cols)])

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.data)

    def columns(self) -> list:
        return [self.column(j) for j in range(self.cols)]

    def apply(self, vec: Sequence[int]) -> tuple:
        """Matrix-vector product."""
        if len(vec) != self.cols:
            raise InputError(f"vector length {len(vec)} != {self.cols} columns")
        return tuple(sum(a * x for a, x in zip(row, vec)) for row in self.data)

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise InputError("hstack: row counts differ")
        return IntMatrix(
            self.rows,
            self.cols + other.cols,
            [ra + rb for ra, rb in zip(self.data, other.data)],
        )

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.cols:
            raise InputError("vstack: column counts differ")
        return IntMatrix(self.rows + other.rows, self.cols, self.data + other.data)

    def submatrix_rows(self, row_indices: Sequence[int]) -> "IntMatrix":
        return IntMatrix(len(row_indices), self.cols, [self.data[i] for i in row_indices])

    def is_zero(self) -> bool:
        return all(e == 0 for row in self.data for e in row)

    def det(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise InputError("determinant requires a square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = [list(row) for row in self.data]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
                a[i][k] = 0
            prev = a[k][k]
        return sign * a[n - 1][n - 1]


def block_diag(blocks: Sequence[IntMatrix]) -> IntMatrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = [[0] * cols for _ in range(rows)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.rows):
            for j in range(b.cols):
                out[r0 + i][c0 + j] = b.data[i][j]
        r0 += b.rows
        c0 += b.cols
    return IntMatrix(rows, cols, out)


@dataclass(frozen=True)
class SmithDecomposition:
    """U @ M @ V == D with U, V unimodular and D in Smith normal form."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def diagonal(self) -> tuple:
        return tuple(self.D.data[i][i] for i in range(min(self.D.rows, self.D.cols)))

    @property
    def num_nonzero(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def smith_decompose(M: IntMatrix) -> SmithDecomposition:
    r, c = M.rows, M.cols
    A = [list(row) for row in M.data]
    U = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    Ui = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    V = [[1 if i == j else 0 for j in range(c)] for i in range(c)]
    Vi = [[1 if i == j else 0 for j in range(c)] for i in range(c)]

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        for row in Ui:
            row[i], row[j] = row[j], row[i]

    def row_add(i, t, q):
        # row_i += q * row_t
        A[i] = [a + q * b for a, b in zip(A[i], A[t])]
        U[i] = [a + q * b for a, b in zip(U[i], U[t])]
        for row in Ui:
            row[t] -= q * row[i]

    def row_negate(i):
        A[i] = [-a for a in A[i]]
        U[i] = [-a for a in U[i]]
        for row in Ui:
            row[i] = -row[i]

    def col_swap(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def col_add(j, t, q):
        # col_j += q * col_t
        for row in A:
            row[j] += q * row[t]
        for row in V:
            row[j] += q * row[t]
        Vi[t] = [a - q * b for a, b in zip(Vi[t], Vi[j])]

    t = 0
    limit = min(r, c)
    while t < limit:
        # pivot: nonzero entry of minimal absolute value, row-major tie-break
        pivot = None
        for i in range(t, r):
            for j in range(t, c):
                if A[i][j] != 0 and (pivot is None or abs(A[i][j]) < abs(A[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        if pivot[0] != t:
            row_swap(t, pivot[0])
        if pivot[1] != t:
            col_swap(t, pivot[1])
        if A[t][t] < 0:
            row_negate(t)
        p = A[t][t]
        restart = False
        for i in range(t + 1, r):
            if A[i][t] != 0:
                q = A[i][t] // p
                if q:
                    row_add(i, t, -q)
                if A[i][t] != 0:
                    restart = True
        if restart:
            continue
        for j in range(t + 1, c):
            if A[t][j] != 0:
                q = A[t][j] // p
                if q:
                    col_add(j, t, -q)
                if A[t][j] != 0:
                    restart = True
        if restart:
            continue
        # enforce the divisibility chain: pivot must divide the whole tail block
        bad_row = None
        for i in range(t + 1, r):
            if any(A[i][j] % p != 0 for j in range(t + 1, c)):
                bad_row = i
                break
        if bad_row is not None:
            row_add(t, bad_row, 1)
            continue
        t += 1

    return SmithDecomposition(
        U=IntMatrix(r, r, U),
        D=IntMatrix(r, c, A),
        V=IntMatrix(c, c, V),
        U_inv=IntMatrix(r, r, Ui),
        V_inv=IntMatrix(c, c, Vi),
    )


def smith_normal_form(M: IntMatrix):
    """(U, D, V) with U @ M @ V == D, U and V unimodular, D in SNF."""
    s = smith_decompose(M)
    return s.U, s.D, s.V


def kernel_basis(M: IntMatrix) -> IntMatrix:
    """Columns form a Z-basis of {x : M @ x = 0}."""
    s = smith_decompose(M)
    free = list(range(s.num_nonzero, M.cols))
    return IntMatrix.from_columns([s.V.column(j) for j in free], nrows=M.cols)


def solve(M: IntMatrix, b: Sequence[int]) -> Optional[tuple]:
    """An integer x with M @ x = b, or None when no integral solution exists."""
    if len(b) != M.rows:
        raise InputError(f"right-hand side length {len(b)} != {M.rows} rows")
    s = smith_decompose(M)
    ub = s.U.apply(b)
    diag = s.diagonal
    z = [0] * M.cols
    for i in range(M.rows):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if ub[i] != 0:
                return None
        else:
            q, r = divmod(ub[i], d)
            if r != 0:
                return None
            z[i] = q
    return s.V.apply(z)


def cokernel(M: IntMatrix) -> "PresentedAbGroup":
    """The group with generators the rows of M and relations its columns."""
    return PresentedAbGroup(M.rows, M)


class PresentedAbGroup:
    """Finitely generated abelian group: free generators modulo integer relations.

    The relation matrix has one column per relation.  Canonical form is
    (rank, invariant factors > 1 in ascending divisibility order); two groups
    are isomorphic iff their canonical forms are equal.
    """

    __slots__ = ("generator_count", "relations", "__dict__")

    def __init__(self, generator_count: int, relations: IntMatrix):
        if relations.rows != generator_count:
            raise InputError("relation matrix must have one row per generator")
        self.generator_count = generator_count
        self.relations = relations

    @classmethod
    def free(cls, n: int) -> "PresentedAbGroup":
        return cls(n, IntMatrix.zero(n, 0))

    @classmethod
    def trivial(cls) -> "PresentedAbGroup":
        return cls.free(0)

    @classmethod
    def from_canonical_form(cls, rank: int, factors: Sequence[int]) -> "PresentedAbGroup":
        n = rank + len(factors)
        return cls(n, IntMatrix.diagonal(list(factors), rows=n, cols=len(factors)))

    @cached_property
    def _smith(self) -> SmithDecomposition:
        return smith_decompose(self.relations)

    @cached_property
    def canonical(self) -> tuple:
        """(rank, invariant_factors)."""
        diag = self._smith.diagonal
        nonzero = [d for d in diag if d != 0]
        rank = self.generator_count - len(nonzero)
        return rank, tuple(d for d in nonzero if d > 1)

    @property
    def rank(self) -> int:
        return self.canonical[0]

    @property
    def invariant_factors(self) -> tuple:
        return self.canonical[1]

    def is_trivial(self) -> bool:
        return self.canonical == (0, ())

    def is_free(self) -> bool:
        return not self.invariant_factors

    def is_isomorphic_to(self, other: "PresentedAbGroup") -> bool:
        return self.canonical == other.canonical

    @property
    def canonical_gen_count(self) -> int:
        rank, factors = self.canonical
        return rank + len(factors)

    def canonical_group(self) -> "PresentedAbGroup":
        """The same group presented on canonical generators (torsion first)."""
        rank, factors = self.canonical
        return PresentedAbGroup.from_canonical_form(rank, factors)

    # -- coordinates ---------------------------------------------------------
    # Canonical coordinates list the torsion generators (ascending factors)
    # followed by the free generators.

    @cached_property
    def _coordinate_layout(self):
        diag = self._smith.diagonal
        nonzero = len([d for d in diag if d != 0])
        torsion = [i for i in range(nonzero) if diag[i] > 1]
        free = list(range(nonzero, self.generator_count))
        return torsion, free

    def to_canonical(self, vec: Sequence[int]) -> tuple:
        """Canonical coordinates of the element represented by a generator vector."""
        if len(vec) != self.generator_count:
            raise InputError("vector length does not match generator count")
        z = self._smith.U.apply(vec)
        torsion, free = self._coordinate_layout
        diag = self._smith.diagonal
        return tuple(z[i] % diag[i] for i in torsion) + tuple(z[i] for i in free)

    def from_canonical(self, coords: Sequence[int]) -> tuple:
        """A generator vector representing the element with given canonical coordinates."""
        torsion, free = self._coordinate_layout
        if len(coords) != len(torsion) + len(free):
            raise InputError("coordinate length does not match canonical generators")
        z = [0] * self.generator_count
        for i, val in zip(torsion, coords[: len(torsion)]):
            z[i] = val
        for i, val in zip(free, coords[len(torsion):]):
            z[i] = val
        return self._smith.U_inv.apply(z)

    def contains_in_relations(self, vec: Sequence[int]) -> bool:
        """Does the vector lie in the relation lattice (i.e. represent 0)?"""
        return solve(self.relations, vec) is not None

    def __eq__(self, other):
        return (
            isinstance(other, PresentedAbGroup)
            and self.generator_count == other.generator_count
            and self.relations == other.relations
        )

    def __hash__(self):
        return hash((self.generator_count, self.relations))

    def __str__(self):
        rank, factors = self.canonical
        parts = []
        if rank == 1:
            parts.append("Z")
        elif rank > 1:
            parts.append(f"Z^{rank}")
        parts.extend(f"Z/{d}" for d in factors)
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"<PresentedAbGroup {self}>"


def direct_sum(groups: Sequence[PresentedAbGroup]) -> PresentedAbGroup:
    gens = sum(g.generator_count for g in groups)
    return PresentedAbGroup(gens, block_diag([g.relations for g in groups]))


class GroupHom:
    """Homomorphism of presented groups, recorded on generators."""

    __slots__ = ("source", "target", "matrix", "__dict__")

    def __init__(self, source: PresentedAbGroup, target: PresentedAbGroup, matrix: IntMatrix, check: bool = True):
        if matrix.rows != target.generator_count or matrix.cols != source.generator_count:
            raise InputError("hom matrix dimensions do not match the groups")
        if check:
            for j in range(source.relations.cols):
                image = matrix.apply(source.relations.column(j))
                if not target.contains_in_relations(image):
                    raise InputError("matrix does not map source relations into target relations")
        self.source = source
        self.target = target
        self.matrix = matrix

    @classmethod
    def identity(cls, g: PresentedAbGroup) -> "GroupHom":
        return cls(g, g, IntMatrix.identity(g.generator_count), check=False)

    @classmethod
    def zero(cls, source: PresentedAbGroup, target: PresentedAbGroup) -> "GroupHom":
        return cls(source, target, IntMatrix.zero(target.generator_count, source.generator_count), check=False)

    def compose(self, first: "GroupHom") -> "GroupHom":
        """self ∘ first."""
        return GroupHom(first.source, self.target, self.matrix @ first.matrix, check=False)

    def equals_as_hom(self, other: "GroupHom") -> bool:
        """Equality as maps of groups (componentwise modulo target relations)."""
        if self.matrix.cols != other.matrix.cols or self.matrix.rows != other.matrix.rows:
            return False
        for j in range(self.matrix.cols):
            diff = [a - b for a, b in zip(self.matrix.column(j), other.matrix.column(j))]
            if not self.target.contains_in_relations(diff):
                return False
        return True

    def is_zero(self) -> bool:
        return self.equals_as_hom(GroupHom.zero(self.source, self.target))

    def is_surjective(self) -> bool:
        return cokernel(self.matrix.hstack(self.target.relations)).is_trivial()

    def kernel_group(self) -> PresentedAbGroup:
        """The kernel, as an abstract presented group."""
        lifted = kernel_basis(self.matrix.hstack(-self.target.relations))
        gens = lifted.submatrix_rows(range(self.source.generator_count))
        rel = kernel_basis(gens.hstack(-self.source.relations))
        rel_top = rel.submatrix_rows(range(gens.cols))
        return PresentedAbGroup(gens.cols, rel_top)

    def cokernel_group(self) -> PresentedAbGroup:
        return PresentedAbGroup(
            self.target.generator_count, self.target.relations.hstack(self.matrix)
        )

    def __repr__(self):
        return f"<GroupHom {self.source} -> {self.target}>"


class Subquotient:
    """ker(d_out)/im(d_in) inside a presented ambient group, with cycle lifting.

    `class_of` maps a cycle (generator vector of the ambient group) to the
    canonical coordinates of its class; `rep_of` picks a representative
    cycle of a class.  The homology group itself is exposed both as a raw
    presentation (`presented`) and in canonical form (`group`).
    """

    def __init__(
        self,
        ambient: PresentedAbGroup,
        d_in: Optional[IntMatrix],
        d_out: Optional[IntMatrix],
        next_relations: Optional[IntMatrix] = None,
    ):
        g = ambient.generator_count
        if d_in is None:
            d_in = IntMatrix.zero(g, 0)
        if d_out is None:
            d_out = IntMatrix.zero(0, g)
        if next_relations is None:
            next_relations = IntMatrix.zero(d_out.rows, 0)
        self.ambient = ambient
        self.d_in = d_in
        self.d_out = d_out
        self.next_relations = next_relations
        # cycles: x with d_out @ x in the next relation lattice
        full = kernel_basis(d_out.hstack(-next_relations))
        self.cycle_gens = full.submatrix_rows(range(g))
        # relations: combinations of cycle generators landing in
        # im(d_in) + ambient relations
        boundary = d_in.hstack(ambient.relations)
        rel = kernel_basis(self.cycle_gens.hstack(-boundary))
        self.presented = PresentedAbGroup(
            self.cycle_gens.cols, rel.submatrix_rows(range(self.cycle_gens.cols))
        )
        self.group = self.presented.canonical_group()

    def is_cycle(self, vec: Sequence[int]) -> bool:
        image = self.d_out.apply(vec)
        return solve(self.next_relations, image) is not None if self.next_relations.cols else all(
            e == 0 for e in image
        )

    def class_of(self, vec: Sequence[int]) -> tuple:
        if not self.is_cycle(vec):
            raise InputError("vector is not a cycle")
        coeffs = solve(self.cycle_gens, vec)
        if coeffs is None:
            raise ContractViolation("cycle does not lie in the computed cycle lattice")
        return self.presented.to_canonical(coeffs)

    def rep_of(self, coords: Sequence[int]) -> tuple:
        return self.cycle_gens.apply(self.presented.from_canonical(coords))


def homology_at(
    d1: Optional[IntMatrix],
    d2: Optional[IntMatrix],
    ambient: Optional[PresentedAbGroup] = None,
) -> Subquotient:
    """ker(d2)/im(d1) for a free chain group, with the lifting interface.

    Raises ContractViolation unless d2 @ d1 == 0.
    """
    if ambient is None:
        if d1 is not None:
            ambient = PresentedAbGroup.free(d1.rows)
        elif d2 is not None:
            ambient = PresentedAbGroup.free(d2.cols)
        else:
            raise InputError("need at least one differential or an ambient group")
    if d1 is not None and d2 is not None and not (d2 @ d1).is_zero():
        raise ContractViolation("d2 @ d1 != 0")
    return Subquotient(ambient, d1, d2)


@dataclass
class ChainComplexData:
    """A finite complex of presented abelian groups and its differentials.

    maps[i] sends groups[i] to groups[i+1]; d∘d = 0 is checked modulo the
    target relations.
    """

    groups: list
    maps: list = field(default_factory=list)

    def __post_init__(self):
        if len(self.maps) != max(len(self.groups) - 1, 0):
            raise InputError("need exactly one map per adjacent pair of groups")
        for i, m in enumerate(self.maps):
            if m.cols != self.groups[i].generator_count or m.rows != self.groups[i + 1].generator_count:
                raise InputError(f"differential {i} has wrong dimensions")
        for i in range(len(self.maps) - 1):
            comp = self.maps[i + 1] @ self.maps[i]
            tgt = self.groups[i + 2]
            for j in range(comp.cols):
                if not tgt.contains_in_relations(comp.column(j)):
                    raise ContractViolation(f"d∘d != 0 between degrees {i} and {i + 2}")

    def differential(self, k: int) -> Optional[IntMatrix]:
        return self.maps[k] if 0 <= k < len(self.maps) else None

    def homology(self, k: int) -> Subquotient:
        if not (0 <= k < len(self.groups)):
            trivial = PresentedAbGroup.trivial()
            return Subquotient(trivial, None, None)
        nxt = self.groups[k + 1] if k + 1 < len(self.groups) else None
        return Subquotient(
            self.groups[k],
            self.differential(k - 1),
            self.differential(k),
            nxt.relations if nxt is not None else None,
        )


def check_chain_map(f: Sequence[IntMatrix], source: ChainComplexData, target: ChainComplexData) -> None:
    """Raise ContractViolation unless f commutes with the differentials."""
    for k in range(len(source.maps)):
        if k >= len(target.maps) or k + 1 >= len(f):
            break
        left = f[k + 1] @ source.maps[k]
        right = target.maps[k] @ f[k]
        tgt = target.groups[k + 1]
        for j in range(left.cols):
            diff = [a - b for a, b in zip(left.column(j), right.column(j))]
            if not tgt.contains_in_relations(diff):
                raise ContractViolation(f"chain map does not commute with d in degree {k}")


def induced_on_homology(
    f: Sequence[IntMatrix],
    source: ChainComplexData,
    target: ChainComplexData,
    p: int,
) -> GroupHom:
    """The well-defined map H^p(source) -> H^p(target) of a chain map."""
    check_chain_map(f, source, target)
    hs = source.homology(p)
    ht = target.homology(p)
    cols = []
    n = hs.group.generator_count
    for i in range(n):
        coords = [0] * n
        coords[i] = 1
        rep = hs.rep_of(coords)
        image = f[p].apply(rep) if p < len(f) else tuple([0] * ht.ambient.generator_count)
        cols.append(list(ht.class_of(image)))
    matrix = IntMatrix.from_columns(cols, nrows=ht.group.generator_count)
    return GroupHom(hs.group, ht.group, matrix)
