"""Twisted-sector phase factors and partition-function assembly.

A 2-cocycle omega mod N assigns each commuting pair (g, h) the phase

    epsilon(g, h) = omega(g, h) - omega(h, g)    (additive exponents mod N),

the weight the (g, h) twisted sector picks up in an orbifold partition
function.  epsilon depends only on the cohomology class of omega, satisfies
epsilon(g, g) = 1 and epsilon(g, h)*epsilon(h, g) = 1, restricts to a
bicharacter on any abelian subgroup containing g and h, and is invariant
under the SL(2,Z) reindexing of sectors.  Everything here is exact: phases
are roots of unity, amplitudes are rationals or opaque symbols.

The membrane analogue for three commuting elements alternates a 3-cocycle
over the six orderings of the triple and is SL(3,Z) invariant in the same
sense.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence, Union

import numpy as np

from . import intlinalg
from .cochains import Cochain
from .errors import DegreeError, NotCommutingError, ShapeError, UnimodularityError
from .groups import FiniteGroup, commuting_pairs
from .phases import ONE, CyclotomicSum, Phase


class Sector:
    """A twisted sector: boundary holonomies (g, h) with gh = hg."""

    __slots__ = ("group", "g", "h")

    def __init__(self, group: FiniteGroup, g: int, h: int):
        n = group.order
        if not (0 <= g < n and 0 <= h < n):
            raise ShapeError(f"sector ({g}, {h}) out of range for order {n}")
        if not group.commutes(g, h):
            raise NotCommutingError(f"elements {g} and {h} do not commute")
        self.group = group
        self.g = g
        self.h = h

    @property
    def pair(self) -> tuple[int, int]:
        return (self.g, self.h)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Sector)
            and self.group is other.group
            and self.g == other.g
            and self.h == other.h
        )

    def __hash__(self):
        return hash((id(self.group), self.g, self.h))

    def __repr__(self) -> str:
        return f"Sector({self.g}, {self.h})"


def _require_degree(omega: Cochain, degree: int) -> None:
    if omega.space.degree != degree:
        raise DegreeError(
            f"need a degree-{degree} cochain, got degree {omega.space.degree}"
        )


def epsilon(omega: Cochain, g: int, h: int) -> Phase:
    """Phase of the (g, h) sector: omega(g,h) - omega(h,g), exponents mod N."""
    _require_degree(omega, 2)
    group = omega.space.group
    if not group.commutes(g, h):
        raise NotCommutingError(f"elements {g} and {h} do not commute")
    n = omega.space.modulus
    return Phase(omega.value(g, h) - omega.value(h, g), n)


def epsilon_table(omega: Cochain) -> dict[tuple[int, int], Phase]:
    """epsilon on every commuting pair, keyed (g, h) in element order."""
    _require_degree(omega, 2)
    group = omega.space.group
    return {(g, h): epsilon(omega, g, h) for g, h in commuting_pairs(group)}


def modular_transform(sector: Sector, matrix: Sequence[Sequence[int]]) -> Sector:
    """Reindex a sector by M in SL(2,Z).

    (g, h) maps to (g^a h^c, g^b h^d) for M = ((a, b), (c, d)); the products
    are unambiguous because g and h commute.  T = ((1,0),(1,1)) sends (g, h)
    to (gh, h) and S = ((0,-1),(1,0)) sends it to (h, g^-1).
    """
    (a, b), (c, d) = ((int(x) for x in row) for row in matrix)
    if a * d - b * c != 1:
        raise UnimodularityError(f"determinant {a * d - b * c} is not 1")
    group = sector.group
    g, h = sector.g, sector.h
    new_g = group.mul(group.power(g, a), group.power(h, c))
    new_h = group.mul(group.power(g, b), group.power(h, d))
    return Sector(group, new_g, new_h)


Amplitude = Union[Fraction, str]
AmplitudeSpec = Union[None, Mapping[tuple[int, int], object], Callable[[Sector], object]]


class SectorEntry:
    """One row of a sector table: sector, its phase, its amplitude."""

    __slots__ = ("sector", "phase", "amplitude")

    def __init__(self, sector: Sector, phase: Phase, amplitude: Amplitude):
        self.sector = sector
        self.phase = phase
        self.amplitude = amplitude

    def __repr__(self) -> str:
        return f"SectorEntry({self.sector!r}, {self.phase!r}, {self.amplitude!r})"


class SectorTable:
    """Phase-weighted sector sum (1/|G|) sum over gh=hg of eps(g,h)*Z_(g,h).

    Entries cover exactly the commuting pairs of the group, in element
    order.  Amplitudes are exact rationals or opaque tokens; value() is
    defined only in the all-rational case and is an exact cyclotomic sum.
    """

    __slots__ = ("group", "entries", "normalization")

    def __init__(self, group: FiniteGroup, entries: Sequence[SectorEntry]):
        self.group = group
        self.entries = tuple(entries)
        self.normalization = Fraction(1, group.order)

    @property
    def is_numeric(self) -> bool:
        return all(isinstance(e.amplitude, Fraction) for e in self.entries)

    def value(self) -> CyclotomicSum:
        if not self.is_numeric:
            raise ValueError("table has symbolic amplitudes; no numeric value")
        total = CyclotomicSum.zero()
        for e in self.entries:
            total = total + CyclotomicSum.from_phase(e.phase) * e.amplitude
        return total * self.normalization

    def symbolic_terms(self) -> list[tuple[str, CyclotomicSum]]:
        """Coefficient of each token, tokens in first-appearance order.

        Rational amplitudes contribute under the token "1".  The 1/|G|
        prefactor is not folded in; it stays in ``normalization``.
        """
        order: list[str] = []
        coeff: dict[str, CyclotomicSum] = {}
        for e in self.entries:
            if isinstance(e.amplitude, str):
                token, scale = e.amplitude, Fraction(1)
            else:
                token, scale = "1", e.amplitude
            if token not in coeff:
                order.append(token)
                coeff[token] = CyclotomicSum.zero()
            coeff[token] = coeff[token] + CyclotomicSum.from_phase(e.phase) * scale
        return [(t, coeff[t]) for t in order]


def sector_orbit(group: FiniteGroup, g: int, h: int) -> tuple[int, int]:
    """Lexicographically least pair simultaneously conjugate to (g, h)."""
    best = (g, h)
    for k in group.elements():
        cand = (group.conjugate(k, g), group.conjugate(k, h))
        if cand < best:
            best = cand
    return best


def assemble_partition(
    group: FiniteGroup,
    omega: Cochain,
    amplitudes: AmplitudeSpec = None,
) -> SectorTable:
    """Weight every commuting-pair sector by epsilon and an amplitude.

    ``amplitudes`` may be None (opaque tokens, one per conjugation orbit of
    sectors), a mapping keyed by (g, h) covering every commuting pair, or a
    callable taking a Sector.  Values: rationals stay exact; strings are
    formal symbols.
    """
    _require_degree(omega, 2)
    if omega.space.group is not group:
        raise ShapeError("cocycle group does not match the partition group")
    entries = []
    for g, h in commuting_pairs(group):
        sector = Sector(group, g, h)
        if amplitudes is None:
            i, j = sector_orbit(group, g, h)
            value: object = f"Z[{i},{j}]"
        elif callable(amplitudes):
            value = amplitudes(sector)
        else:
            try:
                value = amplitudes[(g, h)]
            except KeyError:
                raise ShapeError(f"no amplitude for sector ({g}, {h})") from None
        if not isinstance(value, str):
            value = Fraction(value)
        entries.append(SectorEntry(sector, epsilon(omega, g, h), value))
    return SectorTable(group, entries)


class GroupAlgebraElement:
    """Element of the rational group algebra Q[G]."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group: FiniteGroup, coeffs: Sequence[object]):
        cs = tuple(Fraction(c) for c in coeffs)
        if len(cs) != group.order:
            raise ShapeError(
                f"{len(cs)} coefficients for a group of order {group.order}"
            )
        self.group = group
        self.coeffs = cs

    def convolve(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        if self.group is not other.group:
            raise ShapeError("cannot convolve over different groups")
        mul = self.group.mul
        out = [Fraction(0)] * self.group.order
        for u, cu in enumerate(self.coeffs):
            if not cu:
                continue
            for v, cv in enumerate(other.coeffs):
                if cv:
                    out[mul(u, v)] += cu * cv
        return GroupAlgebraElement(self.group, out)

    __mul__ = convolve

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, GroupAlgebraElement)
            and self.group is other.group
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((id(self.group), self.coeffs))

    def is_idempotent(self) -> bool:
        return self.convolve(self) == self

    def regular_matrix(self) -> list[list[Fraction]]:
        """Matrix of left multiplication on the regular representation."""
        n = self.group.order
        mul = self.group.mul
        out = [[Fraction(0)] * n for _ in range(n)]
        for g, c in enumerate(self.coeffs):
            if c:
                for x in range(n):
                    out[mul(g, x)][x] += c
        return out

    def regular_rank(self) -> int:
        mat = self.regular_matrix()
        scale = 1
        for row in mat:
            for c in row:
                scale = scale * c.denominator // np.gcd(scale, c.denominator)
        arr = np.array(
            [[int(c * scale) for c in row] for row in mat], dtype=np.int64
        )
        return intlinalg.rank(arr)

    def __repr__(self) -> str:
        return f"GroupAlgebraElement({self.group.name!r}, {self.coeffs!r})"


def projection_operator(group: FiniteGroup) -> GroupAlgebraElement:
    """(1/|G|) sum of all group elements: the invariant-state projector."""
    c = Fraction(1, group.order)
    return GroupAlgebraElement(group, [c] * group.order)


class WilsonData:
    """Flat Wilson-line holonomies on the two boundary paths of the torus.

    ``holonomies`` maps an element to its (path-1, path-2) phase pair;
    unlisted elements carry the identity phase on both paths, in which case
    the holonomy formula degenerates to the bare two-cochain phase.
    """

    __slots__ = ("group", "_holonomies")

    def __init__(
        self,
        group: FiniteGroup,
        holonomies: Optional[Mapping[int, tuple[Phase, Phase]]] = None,
    ):
        self.group = group
        table: dict[int, tuple[Phase, Phase]] = {}
        for g, pair in (holonomies or {}).items():
            if not 0 <= g < group.order:
                raise ShapeError(f"element {g} out of range")
            p1, p2 = pair
            table[int(g)] = (p1, p2)
        self._holonomies = table

    def holonomy(self, g: int) -> tuple[Phase, Phase]:
        return self._holonomies.get(g, (ONE, ONE))

    @property
    def is_trivial(self) -> bool:
        return all(p1.is_one and p2.is_one for p1, p2 in self._holonomies.values())


def holonomy_phase(
    omega: Cochain, wilson: Optional[WilsonData], g: int, h: int
) -> Phase:
    """Sector phase with Wilson lines: eps(g,h) plus the path holonomies.

    Additively: omega(g,h) - omega(h,g) + Lambda(g on path 2) - Lambda(h on
    path 1).  With trivial Wilson data this is exactly epsilon(omega, g, h).
    """
    base = epsilon(omega, g, h)
    if wilson is None:
        return base
    if wilson.group is not omega.space.group:
        raise ShapeError("Wilson data group does not match the cocycle group")
    lam_g = wilson.holonomy(g)[1]
    lam_h = wilson.holonomy(h)[0]
    return base * lam_g * lam_h.inverse()


def membrane_phase(omega3: Cochain, g1: int, g2: int, g3: int) -> Phase:
    """Alternating sum of a 3-cocycle over the six orderings of a triple.

    Additive exponents: w(g1,g2,g3) - w(g2,g1,g3) - w(g3,g2,g1)
    + w(g3,g1,g2) + w(g2,g3,g1) - w(g1,g3,g2), all mod N.  Vanishes whenever
    two arguments coincide.
    """
    _require_degree(omega3, 3)
    group = omega3.space.group
    for a, b in ((g1, g2), (g1, g3), (g2, g3)):
        if not group.commutes(a, b):
            raise NotCommutingError(f"elements {a} and {b} do not commute")
    w = omega3.value
    k = (
        w(g1, g2, g3)
        - w(g2, g1, g3)
        - w(g3, g2, g1)
        + w(g3, g1, g2)
        + w(g2, g3, g1)
        - w(g1, g3, g2)
    )
    return Phase(k, omega3.space.modulus)


def _det3(m: Sequence[Sequence[int]]) -> int:
    (a, b, c), (d, e, f), (g, h, i) = m
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def transform_triple(
    group: FiniteGroup, triple: Sequence[int], matrix: Sequence[Sequence[int]]
) -> tuple[int, int, int]:
    """Monomial action of an integer 3x3 matrix: row i gives the exponents
    of the new i-th element in the old commuting triple."""
    g1, g2, g3 = triple
    out = []
    for row in matrix:
        x = group.identity
        for base, exp in zip((g1, g2, g3), row):
            x = group.mul(x, group.power(base, int(exp)))
        out.append(x)
    return (out[0], out[1], out[2])


def check_sl3_invariance(
    omega3: Cochain, triple: Sequence[int], matrix: Sequence[Sequence[int]]
) -> bool:
    """True iff the membrane phase of the triple survives the SL(3,Z) move."""
    det = _det3(matrix)
    if det != 1:
        raise UnimodularityError(f"determinant {det} is not 1")
    group = omega3.space.group
    g1, g2, g3 = triple
    new = transform_triple(group, (g1, g2, g3), matrix)
    return membrane_phase(omega3, *new) == membrane_phase(omega3, g1, g2, g3)
