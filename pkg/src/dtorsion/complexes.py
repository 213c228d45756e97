"""Finite equivariant cell complexes and orbifold Euler characteristics.

A GComplex is a purely combinatorial cell complex (cells carry a dimension
and a boundary list, nothing geometric) together with a cell permutation
per group element.  Actions must be admissible: an element that fixes a
cell fixes every cell in its boundary closure.  That regularity is what
makes orbit counting compute quotient Euler characteristics, so it is
validated at construction and violations name the offending element and
cell.

Two stringy Euler characteristics are implemented independently:

    sum form:        (1/|G|) * sum over commuting pairs of e(X^{g,h})
    conjugacy form:  sum over classes [g] of e(X^g / C(g))

Their agreement is a theorem; the conjugacy form cross-checks it at
runtime rather than assuming it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from .errors import FormatError, InadmissibleActionError, ShapeError
from .groups import FiniteGroup, cyclic, direct_product


class GComplex:
    """Equivariant cell complex over a fixed finite group.

    ``cells`` is a sequence of (id, dimension, boundary ids); ``action``
    maps a group element index to the image ids in cell declaration order.
    The identity row may be omitted.  Construction validates boundary
    dimensions, permutation structure, equivariance of the boundary
    relation, the group law, and admissibility.
    """

    __slots__ = ("group", "ids", "dims", "boundaries", "action", "_position", "_closure")

    def __init__(
        self,
        group: FiniteGroup,
        cells: Sequence[tuple[str, int, Iterable[str]]],
        action: Optional[Mapping[int, Sequence[str]]] = None,
    ):
        self.group = group
        ids = []
        dims = []
        raw_bnd = []
        for cid, dim, bnd in cells:
            cid = str(cid)
            if dim < 0:
                raise ShapeError(f"cell {cid} has negative dimension")
            ids.append(cid)
            dims.append(int(dim))
            raw_bnd.append([str(b) for b in bnd])
        if len(set(ids)) != len(ids):
            raise ShapeError("duplicate cell ids")
        self.ids = tuple(ids)
        self.dims = tuple(dims)
        self._position = {cid: i for i, cid in enumerate(ids)}
        boundaries = []
        for i, bnd in enumerate(raw_bnd):
            out = []
            for b in bnd:
                j = self._position.get(b)
                if j is None:
                    raise ShapeError(f"cell {ids[i]} has unknown boundary cell {b}")
                if dims[j] >= dims[i]:
                    raise ShapeError(
                        f"boundary cell {b} of {ids[i]} does not drop dimension"
                    )
                out.append(j)
            boundaries.append(tuple(sorted(set(out))))
        self.boundaries = tuple(boundaries)

        n = len(ids)
        perms = np.tile(np.arange(n, dtype=np.int64), (group.order, 1))
        for g, images in (action or {}).items():
            g = int(g)
            if not 0 <= g < group.order:
                raise ShapeError(f"action element {g} out of range")
            images = [str(x) for x in images]
            if len(images) != n:
                raise ShapeError(f"action of element {g} lists {len(images)} cells, not {n}")
            try:
                perms[g] = [self._position[x] for x in images]
            except KeyError as exc:
                raise ShapeError(f"action of element {g} names unknown cell {exc}") from None
        self.action = perms
        self._closure: Optional[tuple[frozenset, ...]] = None
        self._validate()

    # -- validation ----------------------------------------------------------

    def _validate(self) -> None:
        group, perms = self.group, self.action
        n = len(self.ids)
        if n and not (perms[group.identity] == np.arange(n)).all():
            raise ShapeError("identity element must act trivially")
        for g in group.elements():
            row = perms[g]
            if n and sorted(row.tolist()) != list(range(n)):
                raise ShapeError(f"action of element {g} is not a permutation")
            for c in range(n):
                if self.dims[row[c]] != self.dims[c]:
                    raise ShapeError(
                        f"element {g} moves cell {self.ids[c]} across dimensions"
                    )
                image_bnd = tuple(sorted(int(row[b]) for b in self.boundaries[c]))
                if image_bnd != self.boundaries[row[c]]:
                    raise ShapeError(
                        f"element {g} does not preserve the boundary of {self.ids[c]}"
                    )
        for g in group.elements():
            for h in group.elements():
                gh = group.mul(g, h)
                if not (perms[g][perms[h]] == perms[gh]).all():
                    raise ShapeError(
                        f"action rows of {g} and {h} do not compose to {gh}"
                    )
        for g in group.elements():
            row = perms[g]
            for c in range(n):
                if row[c] != c:
                    continue
                for b in self.closure(c):
                    if row[b] != b:
                        raise InadmissibleActionError(
                            f"element {g} fixes cell {self.ids[c]} but moves "
                            f"boundary cell {self.ids[b]}"
                        )

    def closure(self, c: int) -> frozenset:
        """Indices of every cell in the boundary closure of ``c`` (c excluded)."""
        if self._closure is None:
            memo: list[Optional[frozenset]] = [None] * len(self.ids)

            def walk(i: int) -> frozenset:
                if memo[i] is None:
                    acc = set()
                    for b in self.boundaries[i]:
                        acc.add(b)
                        acc |= walk(b)
                    memo[i] = frozenset(acc)
                return memo[i]

            for i in range(len(self.ids)):
                walk(i)
            self._closure = tuple(memo)  # type: ignore[arg-type]
        return self._closure[c]

    # -- basic queries --------------------------------------------------------

    @property
    def ncells(self) -> int:
        return len(self.ids)

    def cell_index(self, cid: str) -> int:
        try:
            return self._position[cid]
        except KeyError:
            raise ShapeError(f"no cell named {cid}") from None

    def __repr__(self) -> str:
        return f"GComplex(group={self.group.name!r}, cells={len(self.ids)})"


class Subcomplex:
    """A boundary-closed selection of cells of a parent GComplex."""

    __slots__ = ("parent", "cells")

    def __init__(self, parent: GComplex, cells: Iterable[int]):
        self.parent = parent
        self.cells = tuple(sorted(set(int(c) for c in cells)))
        chosen = set(self.cells)
        for c in self.cells:
            for b in parent.boundaries[c]:
                if b not in chosen:
                    raise ShapeError(
                        f"selection drops boundary cell {parent.ids[b]} of {parent.ids[c]}"
                    )

    def __repr__(self) -> str:
        return f"Subcomplex(cells={len(self.cells)})"


def _cells_and_dims(x: Union[GComplex, Subcomplex]) -> tuple[GComplex, tuple[int, ...]]:
    if isinstance(x, Subcomplex):
        return x.parent, x.cells
    return x, tuple(range(x.ncells))


def euler_char(x: Union[GComplex, Subcomplex]) -> int:
    """Alternating cell count: even dimensions count +1, odd count -1."""
    parent, cells = _cells_and_dims(x)
    return sum(1 if parent.dims[c] % 2 == 0 else -1 for c in cells)


def cell_counts(x: Union[GComplex, Subcomplex]) -> tuple[int, ...]:
    """Number of cells per dimension, index d counting the d-cells."""
    parent, cells = _cells_and_dims(x)
    if not cells:
        return ()
    top = max(parent.dims[c] for c in cells)
    out = [0] * (top + 1)
    for c in cells:
        out[parent.dims[c]] += 1
    return tuple(out)


def fixed_subcomplex(x: Union[GComplex, Subcomplex], elements: Iterable[int]) -> Subcomplex:
    """Cells fixed by every listed element; admissibility keeps it closed."""
    parent, cells = _cells_and_dims(x)
    selected = list(cells)
    for g in elements:
        g = int(g)
        row = parent.action[g]
        selected = [c for c in selected if row[c] == c]
    return Subcomplex(parent, selected)


def _subgroup(group: FiniteGroup, elements: Optional[Iterable[int]]) -> tuple[int, ...]:
    if elements is None:
        return tuple(group.elements())
    subset = sorted(set(int(g) for g in elements))
    members = set(subset)
    if group.identity not in members:
        raise ShapeError("subgroup does not contain the identity")
    for a in subset:
        if group.inv(a) not in members:
            raise ShapeError(f"subgroup is not closed under inversion at {a}")
        for b in subset:
            if group.mul(a, b) not in members:
                raise ShapeError(f"subgroup is not closed under products at ({a}, {b})")
    return tuple(subset)


def quotient_orbit_euler(
    x: Union[GComplex, Subcomplex], subgroup: Optional[Iterable[int]] = None
) -> int:
    """Euler characteristic of the quotient: alternating count of cell orbits."""
    parent, cells = _cells_and_dims(x)
    members = _subgroup(parent.group, subgroup)
    chosen = set(cells)
    for g in members:
        row = parent.action[g]
        for c in cells:
            if int(row[c]) not in chosen:
                raise InadmissibleActionError(
                    f"element {g} moves cell {parent.ids[c]} out of the subcomplex"
                )
    seen = set()
    total = 0
    for c in cells:
        if c in seen:
            continue
        orbit = {int(parent.action[g][c]) for g in members}
        seen |= orbit
        total += 1 if parent.dims[c] % 2 == 0 else -1
    return total


def orbifold_euler_sum(
    x: GComplex, subgroup: Optional[Iterable[int]] = None
) -> Fraction:
    """(1/|H|) sum of e(X^{g,h}) over commuting pairs of H; always integral."""
    members = _subgroup(x.group, subgroup)
    total = 0
    for g in members:
        for h in members:
            if x.group.commutes(g, h):
                total += euler_char(fixed_subcomplex(x, (g, h)))
    value = Fraction(total, len(members))
    assert value.denominator == 1, "orbifold Euler sum came out non-integral"
    return value


def _subgroup_classes(
    group: FiniteGroup, members: Sequence[int]
) -> list[tuple[int, ...]]:
    # Conjugacy classes of the subgroup, sorted by smallest member.
    left = set(members)
    classes = []
    while left:
        g = min(left)
        orbit = sorted({group.conjugate(k, g) for k in members})
        left -= set(orbit)
        classes.append(tuple(orbit))
    classes.sort(key=lambda c: c[0])
    return classes


def orbifold_euler_conjugacy(
    x: GComplex, subgroup: Optional[Iterable[int]] = None
) -> int:
    """Sum of e(X^g / C(g)) over conjugacy classes; checked against the
    commuting-pair form before returning."""
    members = _subgroup(x.group, subgroup)
    total = 0
    for cls in _subgroup_classes(x.group, members):
        g = cls[0]
        cent = [k for k in members if x.group.commutes(g, k)]
        total += quotient_orbit_euler(fixed_subcomplex(x, (g,)), cent)
    other = orbifold_euler_sum(x, members)
    assert total == other, f"Euler formulas disagree: {total} vs {other}"
    return total


@dataclass(frozen=True)
class InertiaComponent:
    """One component [X^g / C(g)] of the inertia decomposition."""

    representative: int
    class_size: int
    centralizer_order: int
    cell_counts: tuple[int, ...]
    euler_fixed: int
    euler_quotient: int


@dataclass(frozen=True)
class InertiaReport:
    """Per-class fixed loci and quotients; total is the stringy Euler number."""

    components: tuple[InertiaComponent, ...]
    total: int


def inertia_components(
    x: GComplex, subgroup: Optional[Iterable[int]] = None
) -> InertiaReport:
    members = _subgroup(x.group, subgroup)
    comps = []
    total = 0
    for cls in _subgroup_classes(x.group, members):
        g = cls[0]
        cent = [k for k in members if x.group.commutes(g, k)]
        fixed = fixed_subcomplex(x, (g,))
        quot = quotient_orbit_euler(fixed, cent)
        comps.append(
            InertiaComponent(
                representative=g,
                class_size=len(cls),
                centralizer_order=len(cent),
                cell_counts=cell_counts(fixed),
                euler_fixed=euler_char(fixed),
                euler_quotient=quot,
            )
        )
        total += quot
    report = InertiaReport(components=tuple(comps), total=total)
    assert report.total == orbifold_euler_sum(x, members)
    return report


# -- products and builders ----------------------------------------------------


def product_complex(x: GComplex, y: GComplex) -> GComplex:
    """Product cells (c, d) with added dimensions and the diagonal action.

    Both factors must live over the same group object; the boundary of a
    product cell is (bd c) x d together with c x (bd d).
    """
    if x.group is not y.group:
        raise ShapeError("product factors live over different groups")
    cells = []
    for i, ci in enumerate(x.ids):
        for j, cj in enumerate(y.ids):
            bnd = [f"{x.ids[b]}*{cj}" for b in x.boundaries[i]]
            bnd += [f"{ci}*{y.ids[b]}" for b in y.boundaries[j]]
            cells.append((f"{ci}*{cj}", x.dims[i] + y.dims[j], bnd))
    action = {}
    for g in x.group.elements():
        if g == x.group.identity:
            continue
        images = []
        for i in range(x.ncells):
            for j in range(y.ncells):
                images.append(f"{x.ids[x.action[g][i]]}*{y.ids[y.action[g][j]]}")
        action[g] = images
    return GComplex(x.group, cells, action)


def circle_with_involution(group: Optional[FiniteGroup] = None) -> GComplex:
    """Circle as 2 vertices and 2 edges; the generator reflects, fixing both
    vertices and swapping the edges.  Default group is Z2."""
    group = group or cyclic(2)
    cells = [
        ("v0", 0, []),
        ("v1", 0, []),
        ("e0", 1, ["v0", "v1"]),
        ("e1", 1, ["v0", "v1"]),
    ]
    action = {1: ["v0", "v1", "e1", "e0"]}
    return GComplex(group, cells, action)


def circle_with_rotation(group: Optional[FiniteGroup] = None) -> GComplex:
    """Circle as 2 vertices and 2 edges; the generator is the free half-turn
    swapping the vertices and swapping the edges.  Default group is Z2."""
    group = group or cyclic(2)
    cells = [
        ("v0", 0, []),
        ("v1", 0, []),
        ("e0", 1, ["v0", "v1"]),
        ("e1", 1, ["v0", "v1"]),
    ]
    action = {1: ["v1", "v0", "e1", "e0"]}
    return GComplex(group, cells, action)


def sphere_octahedral() -> GComplex:
    """Octahedral 2-sphere (6 vertices, 12 edges, 8 faces) with a V4 action.

    Over Z2 x Z2: element 2 reflects through the equator (fixed locus: the
    equatorial circle), element 1 is the half-turn about the poles (fixed
    locus: the two poles), element 3 is the antipodal map (free).
    """
    group = direct_product(cyclic(2), cyclic(2))
    # vertices: px/mx, py/my (equator), pz/mz (poles)
    verts = ["px", "mx", "py", "my", "pz", "mz"]
    cells: list[tuple[str, int, list]] = [(v, 0, []) for v in verts]
    equator = [("px", "py"), ("py", "mx"), ("mx", "my"), ("my", "px")]
    edges = []
    for a, b in equator:
        edges.append((f"e_{a}{b}", [a, b]))
    for pole in ("pz", "mz"):
        for v in ("px", "py", "mx", "my"):
            edges.append((f"e_{pole}{v}", [pole, v]))
    for name, bnd in edges:
        cells.append((name, 1, bnd))
    faces = []
    for pole in ("pz", "mz"):
        for a, b in equator:
            faces.append((f"f_{pole}{a}{b}", [f"e_{a}{b}", f"e_{pole}{a}", f"e_{pole}{b}"]))
    for name, bnd in faces:
        cells.append((name, 2, bnd))

    flip = {"px": "mx", "mx": "px", "py": "my", "my": "py", "pz": "mz", "mz": "pz"}

    def vertex_map(element: int):
        # element 1: half-turn about the poles; 2: equatorial reflection
        def rho(v: str) -> str:
            return v if v in ("pz", "mz") else flip[v]

        def sigma(v: str) -> str:
            return flip[v] if v in ("pz", "mz") else v

        if element == 1:
            return rho
        if element == 2:
            return sigma
        return lambda v: rho(sigma(v))

    ids = [c[0] for c in cells]
    pos = {cid: k for k, cid in enumerate(ids)}
    edge_lookup = {frozenset(b): n for n, b in edges}
    face_lookup = {frozenset(b): n for n, b in faces}

    def image(cid: str, vmap) -> str:
        k = pos[cid]
        if cells[k][1] == 0:
            return vmap(cid)
        if cells[k][1] == 1:
            a, b = cells[k][2]
            return edge_lookup[frozenset((vmap(a), vmap(b)))]
        mapped = []
        for e in cells[k][2]:
            a, b = cells[pos[e]][2]
            mapped.append(edge_lookup[frozenset((vmap(a), vmap(b)))])
        return face_lookup[frozenset(mapped)]

    action = {}
    for g in (1, 2, 3):
        vmap = vertex_map(g)
        action[g] = [image(cid, vmap) for cid in ids]
    return GComplex(group, cells, action)


def torus_power(k: int) -> GComplex:
    """k-fold product of the reflection circle with the diagonal negation.

    The Z2 generator negates every circle factor at once; its fixed locus
    is the 2^k half-period vertices.
    """
    if k < 1:
        raise ShapeError("torus power needs k >= 1")
    base = circle_with_involution()
    out = base
    for _ in range(k - 1):
        out = product_complex(out, base)
    return out


# -- file format ---------------------------------------------------------------


def format_complex(x: GComplex) -> str:
    """Emit `cell`, `bnd`, and `act` lines; parse_complex inverts this."""
    lines = []
    for i, cid in enumerate(x.ids):
        lines.append(f"cell {cid} {x.dims[i]}")
    for i, cid in enumerate(x.ids):
        if x.boundaries[i]:
            names = " ".join(x.ids[b] for b in x.boundaries[i])
            lines.append(f"bnd {cid} {names}")
    for g in x.group.elements():
        if g == x.group.identity:
            continue
        images = " ".join(x.ids[int(x.action[g][i])] for i in range(x.ncells))
        lines.append(f"act {g} {images}")
    return "\n".join(lines) + "\n"


def parse_complex(text: str, group: FiniteGroup) -> GComplex:
    """Read the `cell` / `bnd` / `act` line format over a known group."""
    cells: dict[str, tuple[int, list[str]]] = {}
    order: list[str] = []
    action: dict[int, list[str]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        kind = fields[0]
        if kind == "cell":
            if len(fields) != 3:
                raise FormatError(f"line {lineno}: cell lines need an id and a dimension")
            cid = fields[1]
            if cid in cells:
                raise FormatError(f"line {lineno}: duplicate cell {cid}")
            try:
                dim = int(fields[2])
            except ValueError:
                raise FormatError(f"line {lineno}: bad dimension {fields[2]!r}") from None
            cells[cid] = (dim, [])
            order.append(cid)
        elif kind == "bnd":
            if len(fields) < 3:
                raise FormatError(f"line {lineno}: bnd lines need an id and boundary ids")
            cid = fields[1]
            if cid not in cells:
                raise FormatError(f"line {lineno}: bnd before cell {cid}")
            cells[cid][1].extend(fields[2:])
        elif kind == "act":
            if len(fields) < 2:
                raise FormatError(f"line {lineno}: act lines need an element index")
            try:
                g = int(fields[1])
            except ValueError:
                raise FormatError(f"line {lineno}: bad element index {fields[1]!r}") from None
            if g in action:
                raise FormatError(f"line {lineno}: duplicate act line for element {g}")
            action[g] = fields[2:]
        else:
            raise FormatError(f"line {lineno}: unknown directive {kind!r}")
    for g in group.elements():
        if g != group.identity and g not in action:
            raise FormatError(f"no act line for element {g}")
    try:
        return GComplex(
            group,
            [(cid, cells[cid][0], cells[cid][1]) for cid in order],
            action,
        )
    except (ShapeError, InadmissibleActionError) as exc:
        raise FormatError(str(exc)) from exc
