"""Group cohomology in degrees 1..3 with Z/N and U(1) coefficients.

Everything runs on the normalized bar complex from cochains.py. The mod-N
groups H^p(G, Z/N) come out of a two-stage exact computation:

* Stage 1 writes the cocycle submodule of (Z/N)^s as V diag(c): with
  U R V = D a diagonalization of the (streamed) echelon R of the
  differential, x = V t is a cocycle exactly when each t_i is a multiple
  of c_i = N / gcd(d_i, N).
* Stage 2 maps the relation span (coboundaries, plus whatever extra
  relations the coefficient sequence demands) into the t-coordinates and
  presents H as the cokernel of [W | diag(N/c)] over Z/N; its chained
  diagonalization yields the invariant factors, generator cocycles, and
  a classifier that works on any cocycle.

U(1) coefficients reduce to Z/|G|: multiplication by |G| kills
H^p(G, U(1)) for p >= 1, so phases can be taken to be |G|-th roots of
unity, and the only correction is dividing out Bockstein images of
degree-(p-1) cocycles, which are exactly the classes that become
coboundaries once U(1) phases are allowed. An independent route computes
H^{p+1}(G, Z) (pure torsion for a finite group) from the integral Smith
form of the degree-p differential; H^p(G, U(1)) and H^{p+1}(G, Z) must
agree, and the tests hold them to that.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd
from typing import Optional

import numpy as np

from . import intlinalg
from .cochains import Cochain, CochainSpace, coboundary_table, differential_blocks
from .errors import (
    DegreeError,
    ModulusError,
    NotCocycleError,
    ShapeError,
    SizeCeilingError,
)
from .groups import FiniteGroup

# Ceiling on cochain-space slots for any space a kernel is computed in
# (the matrix column count; rows are streamed and only need the second,
# much looser bound).
MAX_KERNEL_SLOTS = 4096
MAX_DIFFERENTIAL_ROWS = 1 << 21


def _check_ceiling(group: FiniteGroup, degree: int) -> None:
    slots = (group.order - 1) ** degree
    if slots > MAX_KERNEL_SLOTS:
        raise SizeCeilingError(
            f"degree-{degree} computation needs {slots} cochain slots "
            f"(limit {MAX_KERNEL_SLOTS}); the group is too large for this degree"
        )
    rows = (group.order - 1) ** (degree + 1)
    if rows > MAX_DIFFERENTIAL_ROWS:
        raise SizeCeilingError(
            f"degree-{degree} computation streams {rows} differential rows "
            f"(limit {MAX_DIFFERENTIAL_ROWS}); the group is too large"
        )


def _cocycle_lattice(space: CochainSpace, mod: int):
    """Kernel data for the differential out of ``space``, mod N.

    Returns (c, V, Vinv): the cocycle submodule of (Z/N)^s is exactly
    {V diag(c) t mod N : t integer}, with V invertible mod N.
    """
    if space.slots == 0:
        z = np.zeros((0, 0), dtype=np.int64)
        return np.zeros(0, dtype=np.int64), z, z
    R = intlinalg.echelon_stream(
        differential_blocks(space, mod), space.slots, mod
    )
    d, T = intlinalg.diagonalize(R, mod, transforms=("v", "vinv"), chain=False)
    c = np.full(space.slots, 1, dtype=np.int64)
    for i, x in enumerate(d):
        c[i] = mod // gcd(int(x), mod)
    return c, T["v"], T["vinv"]


def bockstein(cocycle: Cochain) -> Cochain:
    """Bockstein of a mod-N cocycle: lift to integers, d, divide by N.

    The image under the connecting map of 0 -> Z/N -> Z/N^2 -> Z/N -> 0,
    one degree up. Raises NotCocycleError if d(lift) is not divisible
    by N, i.e. the input was not a cocycle mod N.
    """
    space = cocycle.space
    N = space.modulus
    lifted = coboundary_table(space, cocycle.table % N, 0)
    if np.any(lifted % N):
        raise NotCocycleError("bockstein needs a cocycle mod N")
    out_space = CochainSpace(space.group, space.degree + 1, N)
    return out_space.from_vector((lifted // N) % N)


def _bockstein_relation_columns(group: FiniteGroup, degree: int, N: int) -> list:
    """Bockstein images of a generating set of degree-(p-1) cocycles.

    These are the extra relations that cut H^p(G, Z/N) down to
    H^p(G, U(1)) when N = |G|.
    """
    if degree == 1:
        return []
    prev = CochainSpace(group, degree - 1, N)
    c, V, _ = _cocycle_lattice(prev, N)
    cols = []
    for i in range(prev.slots):
        gen = (int(c[i]) * V[:, i]) % N
        lifted = coboundary_table(prev, gen, 0)
        assert not np.any(lifted % N)
        beta = (lifted // N) % N
        if np.any(beta):
            cols.append(beta)
    return cols


@dataclass(eq=False)
class CohomologyGroup:
    """H^p as a finite abelian group with explicit generator cocycles.

    invariant_factors is the divisibility chain (each divides the next,
    all > 1); generators[i] represents a class of order
    invariant_factors[i]; classify() expresses any cocycle's class in
    these coordinates.
    """

    group: FiniteGroup
    degree: int
    modulus: int
    coefficients: str
    invariant_factors: tuple
    generators: list
    _space: CochainSpace = field(repr=False)
    _c: np.ndarray = field(repr=False)
    _vinv: np.ndarray = field(repr=False)
    _u: np.ndarray = field(repr=False)
    _kept: list = field(repr=False)
    _howell: np.ndarray = field(repr=False)

    @property
    def order(self) -> int:
        out = 1
        for f in self.invariant_factors:
            out *= f
        return out

    def is_trivial(self) -> bool:
        return not self.invariant_factors

    @property
    def space(self) -> CochainSpace:
        return self._space

    def _kernel_coords(self, cocycle: Cochain) -> np.ndarray:
        space = self._space
        N = self.modulus
        t = (self._vinv @ (cocycle.table % N)) % N
        w = np.zeros(space.slots, dtype=np.int64)
        for i in range(space.slots):
            ci = int(self._c[i])
            if int(t[i]) % ci:
                raise NotCocycleError("not a cocycle mod N")
            w[i] = int(t[i]) // ci
        return w

    def classify(self, cocycle: Cochain) -> tuple:
        """Coordinates of a cocycle's class, one per invariant factor.

        The class of ``cocycle`` equals sum_i coords[i] * generators[i],
        with coords[i] in Z/invariant_factors[i]. Raises NotCocycleError
        when the input is not a cocycle mod N.
        """
        if cocycle.space != self._space:
            raise ShapeError("cocycle belongs to a different cochain space")
        if self._space.slots == 0:
            return ()
        coords = (self._u @ self._kernel_coords(cocycle)) % self.modulus
        return tuple(
            int(coords[i]) % f for i, f in zip(self._kept, self.invariant_factors)
        )

    def class_representative(self, coords) -> Cochain:
        """The canonical cocycle with the given class coordinates."""
        if len(coords) != len(self.generators):
            raise ShapeError(
                f"expected {len(self.generators)} coordinates, got {len(coords)}"
            )
        acc = self._space.zero()
        for k, gen in zip(coords, self.generators):
            acc = acc + gen.scaled(int(k))
        return self.reduce(acc)

    def reduce(self, cocycle: Cochain) -> Cochain:
        """Canonical representative of the cocycle's class.

        Greedy reduction against the Howell basis of the relation span:
        two cocycles are in the same class exactly when they reduce to
        the same table.
        """
        if cocycle.space != self._space:
            raise ShapeError("cocycle belongs to a different cochain space")
        if self._howell.shape[0] == 0:
            return Cochain(self._space, cocycle.table % self.modulus)
        red = intlinalg.reduce_mod(self._howell, cocycle.table, self.modulus)
        return Cochain(self._space, red)

    def is_trivial_class(self, cocycle: Cochain) -> bool:
        return all(x == 0 for x in self.classify(cocycle))

    def representatives(self, limit: int = 20000) -> list:
        """Canonical representatives of all classes, trivial class first."""
        if self.order > limit:
            raise SizeCeilingError(
                f"{self.order} classes exceeds the enumeration limit {limit}"
            )
        out = []
        for coords in itertools.product(*(range(f) for f in self.invariant_factors)):
            out.append(self.class_representative(coords))
        return out


def _trivial_cohomology(
    group: FiniteGroup, degree: int, N: int, coefficients: str, space: CochainSpace
) -> CohomologyGroup:
    z2 = np.zeros((0, 0), dtype=np.int64)
    return CohomologyGroup(
        group=group,
        degree=degree,
        modulus=N,
        coefficients=coefficients,
        invariant_factors=(),
        generators=[],
        _space=space,
        _c=np.zeros(0, dtype=np.int64),
        _vinv=z2,
        _u=z2,
        _kept=[],
        _howell=np.zeros((0, space.slots), dtype=np.int64),
    )


def _cohomology(
    group: FiniteGroup, degree: int, N: int, coefficients: str
) -> CohomologyGroup:
    if degree < 1 or degree > 3:
        raise DegreeError(
            f"cohomology is implemented for degrees 1..3, got {degree}"
        )
    _check_ceiling(group, degree)
    space = CochainSpace(group, degree, N)
    s = space.slots
    if s == 0:
        return _trivial_cohomology(group, degree, N, coefficients, space)

    # Stage 1: cocycles of degree p as V diag(c).
    c, V, Vinv = _cocycle_lattice(space, N)

    # Relation span in cochain coordinates: coboundaries first.
    prev = CochainSpace(group, degree - 1, N)
    relation_cols = []
    for j in range(prev.slots):
        e = np.zeros(prev.slots, dtype=np.int64)
        e[j] = 1
        col = coboundary_table(prev, e, N)
        if np.any(col):
            relation_cols.append(col)
    if coefficients == "U(1)":
        relation_cols.extend(_bockstein_relation_columns(group, degree, N))

    # Howell basis of the relation span, for canonical representatives.
    if relation_cols:
        howell = intlinalg.howell_mod(np.array(relation_cols), N)
    else:
        howell = np.zeros((0, s), dtype=np.int64)

    # Stage 2: map relations to kernel coordinates (x = V diag(c) w) and
    # present H as the cokernel of [W | diag(N/c)] over Z/N. The
    # diag(N/c) columns absorb the mod-(N/c_i) ambiguity of each w_i, so
    # tracking transforms mod N is exact.
    wcols = []
    for col in relation_cols:
        t = (Vinv @ col) % N
        w = np.zeros(s, dtype=np.int64)
        for i in range(s):
            ci = int(c[i])
            assert int(t[i]) % ci == 0, "relation outside the cocycle lattice"
            w[i] = int(t[i]) // ci
        wcols.append(w)
    L = np.diag((N // c).astype(np.int64))
    A = np.hstack([np.array(wcols).T, L]) if wcols else L
    d2, T2 = intlinalg.diagonalize(A, N, transforms=("u", "uinv"), chain=True)
    U, Uinv = T2["u"], T2["uinv"]
    fdiag = [gcd(int(x), N) or N for x in d2]
    assert len(fdiag) == s

    kept = [i for i in range(s) if fdiag[i] > 1]
    factors = tuple(fdiag[i] for i in kept)
    assert all(factors[i + 1] % factors[i] == 0 for i in range(len(factors) - 1))

    # Generators: x = V diag(c) Uinv e_i.
    gens = []
    for i in kept:
        w = Uinv[:, i] % N
        x = (V @ ((c * w) % N)) % N
        gens.append(space.from_vector(x))

    return CohomologyGroup(
        group=group,
        degree=degree,
        modulus=N,
        coefficients=coefficients,
        invariant_factors=factors,
        generators=gens,
        _space=space,
        _c=c,
        _vinv=Vinv,
        _u=U,
        _kept=kept,
        _howell=howell,
    )


def cohomology_zn(group: FiniteGroup, degree: int, modulus: int) -> CohomologyGroup:
    """H^degree(G, Z/modulus) with explicit generators and classifier."""
    if modulus < 2:
        raise ModulusError(f"modulus must be at least 2, got {modulus}")
    return _cohomology(group, degree, modulus, f"Z/{modulus}")


def cohomology_u1(
    group: FiniteGroup, degree: int, modulus: Optional[int] = None
) -> CohomologyGroup:
    """H^degree(G, U(1)) as a finite group of exact root-of-unity phases.

    Exponent tables are mod N (default |G|; any multiple of |G| gives the
    same group presented on a finer scale, useful when classifying data
    whose phases have extra denominators); the value k at a tuple stands
    for the phase exp(2*pi*i*k/N).  Multiplication by |G| kills this
    cohomology, which is why finite exponent tables capture it exactly.
    """
    if group.order == 1:
        # No nonidentity elements: every space is zero-dimensional.
        return _cohomology(group, degree, max(modulus or 2, 2), "U(1)")
    n = group.order if modulus is None else int(modulus)
    if n % group.order:
        raise ModulusError(
            f"modulus {n} is not a multiple of the group order {group.order}"
        )
    return _cohomology(group, degree, n, "U(1)")


def enumerate_class_representatives(
    group: FiniteGroup, degree: int, limit: int = 20000
) -> list:
    """Canonical U(1) cocycle representatives, one per class, trivial first.

    The list order is deterministic: coordinates run through the invariant
    factors odometer-style, so index k always names the same class.
    """
    return cohomology_u1(group, degree).representatives(limit)


def reduce_by_coboundaries(cochain: Cochain, coefficients: str = "Z/N") -> Cochain:
    """Canonical representative of a cocycle's cohomology class.

    With "Z/N" coefficients the quotient is by coboundaries of mod-N
    cochains; with "U(1)" the Bockstein relations are also quotiented and
    the modulus must be a multiple of |G|.  Building the classifier anew
    per call costs more than CohomologyGroup.reduce; prefer that for bulk
    work.
    """
    space = cochain.space
    if coefficients == "U(1)":
        h = cohomology_u1(space.group, space.degree, space.modulus)
    else:
        h = cohomology_zn(space.group, space.degree, space.modulus)
    return h.reduce(cochain)


def is_cocycle_mod(cochain: Cochain) -> bool:
    """Cocycle test mod the cochain's own modulus."""
    return not np.any(
        coboundary_table(cochain.space, cochain.table, cochain.space.modulus)
    )


def is_coboundary(cochain: Cochain) -> bool:
    """Membership of the strict coboundary submodule mod N.

    Tests whether the table equals d(b) mod N for some degree-(p-1)
    cochain b, by solving against the coboundary span.
    """
    space = cochain.space
    N = space.modulus
    if space.degree < 1:
        raise DegreeError("coboundaries start at degree 1")
    prev = CochainSpace(space.group, space.degree - 1, N)
    rows = []
    for j in range(prev.slots):
        e = np.zeros(prev.slots, dtype=np.int64)
        e[j] = 1
        rows.append(coboundary_table(prev, e, N))
    if not rows:
        return not np.any(cochain.table % N)
    return intlinalg.solve_mod(np.array(rows), cochain.table, N) is not None


def cohomology_z_oracle(group: FiniteGroup, degree: int, verify_rank: bool = True) -> tuple:
    """H^degree(G, Z) for degrees 2..4: invariant factors, integral route.

    For a finite group this cohomology is pure torsion, and it equals the
    torsion of the cokernel of the degree-(p-1) differential: kernels of
    integer matrices are saturated, so every torsion class of the
    cokernel already lies in the cocycle sublattice. The answer is the
    set of invariant factors > 1 of the integral Smith form, ascending.

    With verify_rank=True (and sizes permitting) the zero free rank is
    re-checked via rank(D_p) + rank(D_{p-1}) = dim C^p.
    """
    if degree < 2 or degree > 4:
        raise DegreeError(f"integral route covers degrees 2..4, got {degree}")
    if group.order == 1:
        return ()
    _check_ceiling(group, degree - 1)
    prev = CochainSpace(group, degree - 1, 2)
    rows = (group.order - 1) ** degree
    if rows * prev.slots <= 1 << 22:
        D = np.vstack(list(differential_blocks(prev, 0)))
        d, _, _ = intlinalg.smith_normal_form(D.T if rows > prev.slots else D)
        rank_prev = sum(1 for x in d if x)
    else:
        # Unimodular row ops preserve the cokernel up to free summands,
        # and dropped zero rows only remove free summands, so the
        # torsion of the echelon's Smith form is the torsion wanted.
        E = intlinalg.echelon_stream(
            differential_blocks(prev, 0), prev.slots, 0
        )
        d, _, _ = intlinalg.smith_normal_form(E)
        rank_prev = sum(1 for x in d if x)
    factors = tuple(int(x) for x in d if int(x) > 1)

    if verify_rank and degree <= 3:
        cur = CochainSpace(group, degree, 2)
        if cur.slots <= MAX_KERNEL_SLOTS:
            E2 = intlinalg.echelon_stream(
                differential_blocks(cur, 0), cur.slots, 0
            )
            assert rank_prev + E2.shape[0] == cur.slots, (
                "free rank of the cohomology is nonzero; differential bug"
            )
    return factors
