"""Equivariant transition data on finite discrete sites.

A :class:`DiscreteSite` is pure overlap combinatorics: named patches with
finite component sets, double- and triple-overlap components with
restriction maps down to the patches, optional quadruple components, and
a group action permuting the components of every stratum compatibly with
the restrictions.  All local functions are locally constant with values
in roots of unity, so every structure equation becomes a finite list of
:class:`~dtorsion.phases.Phase` identities checkable one component at a
time.

Orientation convention: overlap data is stored on the sorted patch pair
(or triple), and the reversed orientation is the inverse phase.  The
pullback of a component function along a group element ``g`` is
``(g^* f)(x) = f(g . x)``.

Verification reports name each violated relation by a stable identifier
(``bundle.transition``, ``gerbe.associativity``, ...) together with the
offending component and group tuple, so a failing input can be repaired
line by line.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import lcm
from typing import Dict, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .cochains import Cochain, CochainSpace
from .cohomology import CohomologyGroup, cohomology_u1
from .errors import DegreeError, FormatError, GroupSpecError, ShapeError, SiteError
from .groups import FiniteGroup, abelianization, parse_group_spec
from .phases import ONE, Phase

PairKey = Tuple[str, str]
TripleKey = Tuple[str, str, str]
QuadKey = Tuple[str, str, str, str]


class DiscreteSite:
    """Finite site: patches, overlap components, restrictions, G-action.

    ``patches`` maps a patch name to its component ids.  ``doubles`` maps
    a sorted patch pair to ``{component: (restriction in first patch,
    restriction in second patch)}``; ``triples`` maps a sorted patch
    triple ``(a, b, c)`` to ``{component: (restriction in (a,b),
    restriction in (b,c), restriction in (a,c))}``; ``quads`` maps a
    sorted quadruple ``(a, b, c, d)`` to restrictions into the four
    sorted triples ``(a,b,c), (a,b,d), (a,c,d), (b,c,d)``.  ``action``
    maps a group element to ``{component: image}``; unlisted components
    are fixed and unlisted elements act trivially.  Component ids must be
    globally unique across all strata.
    """

    def __init__(
        self,
        group: FiniteGroup,
        patches: Mapping[str, Sequence[str]],
        doubles: Optional[Mapping[PairKey, Mapping[str, PairKey]]] = None,
        triples: Optional[Mapping[TripleKey, Mapping[str, TripleKey]]] = None,
        quads: Optional[Mapping[QuadKey, Mapping[str, QuadKey]]] = None,
        action: Optional[Mapping[int, Mapping[str, str]]] = None,
    ):
        if not patches:
            raise SiteError("a site needs at least one patch")
        self.group = group
        self.patches: Dict[str, Tuple[str, ...]] = {}
        owner: Dict[str, tuple] = {}
        for name in sorted(patches):
            comps = tuple(sorted(patches[name]))
            if not comps:
                raise SiteError(f"patch {name} has no components")
            for c in comps:
                if c in owner:
                    raise SiteError(f"component id {c} is not unique")
                owner[c] = ("patch", name)
            self.patches[name] = comps

        self.doubles: Dict[PairKey, Dict[str, PairKey]] = {}
        for key in sorted(doubles or {}):
            a, b = key
            if not (a < b):
                raise SiteError(f"overlap pair {key} must be sorted")
            for name in key:
                if name not in self.patches:
                    raise SiteError(f"overlap {key} references unknown patch {name}")
            entry: Dict[str, PairKey] = {}
            for c in sorted((doubles or {})[key]):
                pa, pb = (doubles or {})[key][c]
                if c in owner:
                    raise SiteError(f"component id {c} is not unique")
                owner[c] = ("double", key)
                if pa not in self.patches[a] or pb not in self.patches[b]:
                    raise SiteError(
                        f"overlap component {c} restricts outside patches {a}, {b}"
                    )
                entry[c] = (pa, pb)
            self.doubles[key] = entry

        self.triples: Dict[TripleKey, Dict[str, TripleKey]] = {}
        for key in sorted(triples or {}):
            a, b, c = key
            if not (a < b < c):
                raise SiteError(f"triple {key} must be sorted")
            for pair in ((a, b), (b, c), (a, c)):
                if pair not in self.doubles:
                    raise SiteError(f"triple {key} needs the overlap {pair}")
            entry3: Dict[str, TripleKey] = {}
            for t in sorted((triples or {})[key]):
                xab, xbc, xac = (triples or {})[key][t]
                if t in owner:
                    raise SiteError(f"component id {t} is not unique")
                owner[t] = ("triple", key)
                if (
                    xab not in self.doubles[(a, b)]
                    or xbc not in self.doubles[(b, c)]
                    or xac not in self.doubles[(a, c)]
                ):
                    raise SiteError(
                        f"triple component {t} restricts outside its overlaps"
                    )
                # The two ways down to each patch must land on one component.
                rab, rbc, rac = (
                    self.doubles[(a, b)][xab],
                    self.doubles[(b, c)][xbc],
                    self.doubles[(a, c)][xac],
                )
                if rab[0] != rac[0] or rab[1] != rbc[0] or rbc[1] != rac[1]:
                    raise SiteError(
                        f"triple component {t} has inconsistent patch restrictions"
                    )
                entry3[t] = (xab, xbc, xac)
            self.triples[key] = entry3

        self.quads: Dict[QuadKey, Dict[str, QuadKey]] = {}
        for key in sorted(quads or {}):
            a, b, c, d = key
            if not (a < b < c < d):
                raise SiteError(f"quadruple {key} must be sorted")
            faces = ((a, b, c), (a, b, d), (a, c, d), (b, c, d))
            for face in faces:
                if face not in self.triples:
                    raise SiteError(f"quadruple {key} needs the triple {face}")
            entry4: Dict[str, QuadKey] = {}
            for q in sorted((quads or {})[key]):
                rs = tuple((quads or {})[key][q])
                if q in owner:
                    raise SiteError(f"component id {q} is not unique")
                owner[q] = ("quad", key)
                if len(rs) != 4 or any(
                    rs[i] not in self.triples[faces[i]] for i in range(4)
                ):
                    raise SiteError(
                        f"quadruple component {q} restricts outside its triples"
                    )
                # Each pair of faces shares one double; both routes must agree.
                for i, j, slot_i, slot_j in (
                    (0, 1, 0, 0),  # (a,b,c) and (a,b,d) share (a,b)
                    (0, 2, 2, 0),  # (a,b,c) and (a,c,d) share (a,c)
                    (0, 3, 1, 0),  # (a,b,c) and (b,c,d) share (b,c)
                    (1, 2, 2, 2),  # (a,b,d) and (a,c,d) share (a,d)
                    (1, 3, 1, 2),  # (a,b,d) and (b,c,d) share (b,d)
                    (2, 3, 1, 1),  # (a,c,d) and (b,c,d) share (c,d)
                ):
                    left = self.triples[faces[i]][rs[i]][slot_i]
                    right = self.triples[faces[j]][rs[j]][slot_j]
                    if left != right:
                        raise SiteError(
                            f"quadruple component {q} has inconsistent restrictions"
                        )
                entry4[q] = rs  # type: ignore[assignment]
            self.quads[key] = entry4

        self._owner = owner
        self._all = tuple(sorted(owner))
        self._act = self._build_action(action or {})
        self._check_action()
        self.pieces = self._connected_pieces()

    def _build_action(self, action: Mapping[int, Mapping[str, str]]):
        n = len(self.group)
        full: Dict[int, Dict[str, str]] = {}
        for g in range(n):
            full[g] = {c: c for c in self._all}
        for key, row in action.items():
            g = int(key)
            if not 0 <= g < n:
                raise SiteError(f"action names element {g} outside the group")
            for c, image in row.items():
                if c not in self._owner or image not in self._owner:
                    raise SiteError(f"action row for element {g} names unknown component")
                if g == self.group.identity and image != c:
                    raise SiteError("the identity must fix every component")
                full[g][c] = image
        return full

    def _check_action(self):
        n = len(self.group)
        for g in range(n):
            row = self._act[g]
            if sorted(row.values()) != list(self._all):
                raise SiteError(f"element {g} does not act by a permutation")
            for c in self._all:
                if self._owner[row[c]] != self._owner[c]:
                    raise SiteError(
                        f"element {g} moves component {c} to a different stratum"
                    )
        # Restrictions are equivariant stratum by stratum.
        for g in range(n):
            for key, entry in self.doubles.items():
                for c, (pa, pb) in entry.items():
                    if entry[self._act[g][c]] != (self._act[g][pa], self._act[g][pb]):
                        raise SiteError(
                            f"element {g} breaks the restrictions of overlap component {c}"
                        )
            for key3, entry3 in self.triples.items():
                for t, rs in entry3.items():
                    moved = tuple(self._act[g][x] for x in rs)
                    if entry3[self._act[g][t]] != moved:
                        raise SiteError(
                            f"element {g} breaks the restrictions of triple component {t}"
                        )
            for key4, entry4 in self.quads.items():
                for q, rs4 in entry4.items():
                    moved4 = tuple(self._act[g][x] for x in rs4)
                    if entry4[self._act[g][q]] != moved4:
                        raise SiteError(
                            f"element {g} breaks the restrictions of quadruple component {q}"
                        )
        for g in range(n):
            for h in range(n):
                gh = self.group.mul(g, h)
                for c in self._all:
                    if self._act[g][self._act[h][c]] != self._act[gh][c]:
                        raise SiteError(
                            f"action rows for {g} and {h} do not compose to {gh}"
                        )

    def _connected_pieces(self):
        parent = {c: c for name in self.patches for c in self.patches[name]}

        def find(x: str) -> str:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for entry in self.doubles.values():
            for pa, pb in entry.values():
                parent[find(pa)] = find(pb)
        groups: Dict[str, set] = {}
        for c in parent:
            groups.setdefault(find(c), set()).add(c)
        return tuple(
            frozenset(members)
            for _, members in sorted(groups.items(), key=lambda kv: min(kv[1]))
        )

    @property
    def is_connected(self) -> bool:
        return len(self.pieces) == 1

    def act(self, g: int, component: str) -> str:
        return self._act[g][component]

    def patch_components(self) -> Tuple[str, ...]:
        return tuple(c for name in self.patches for c in self.patches[name])

    def double_components(self) -> Tuple[str, ...]:
        return tuple(c for key in self.doubles for c in self.doubles[key])

    def triple_components(self) -> Tuple[str, ...]:
        return tuple(t for key in self.triples for t in self.triples[key])

    def patch_of(self, component: str) -> str:
        kind, where = self._owner[component]
        if kind != "patch":
            raise ShapeError(f"{component} is not a patch component")
        return where

    def __repr__(self) -> str:
        return (
            f"DiscreteSite({self.group.name!r}, patches={len(self.patches)}, "
            f"doubles={sum(len(v) for v in self.doubles.values())}, "
            f"triples={sum(len(v) for v in self.triples.values())})"
        )


def _fill(site: DiscreteSite, keys, given, what: str) -> Dict:
    table = {k: ONE for k in keys}
    for k, ph in (given or {}).items():
        if k not in table:
            raise ShapeError(f"{what} entry {k} does not match the site")
        if not isinstance(ph, Phase):
            raise ShapeError(f"{what} entry {k} must be a Phase")
        table[k] = ph
    return table


class BundleCocycle:
    """Transition phases on double-overlap components, stored on the
    sorted patch pair; the reversed orientation is the inverse."""

    def __init__(self, site: DiscreteSite, values: Optional[Mapping[str, Phase]] = None):
        self.site = site
        self.values = _fill(site, site.double_components(), values, "cocycle")

    def value(self, component: str) -> Phase:
        return self.values[component]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BundleCocycle)
            and self.site is other.site
            and self.values == other.values
        )


class BundleEquivariantStructure:
    """Per group element, a phase on every patch component."""

    def __init__(
        self,
        site: DiscreteSite,
        phases: Optional[Mapping[Tuple[int, str], Phase]] = None,
    ):
        self.site = site
        keys = [
            (g, c) for g in range(len(site.group)) for c in site.patch_components()
        ]
        self.phases = _fill(site, keys, phases, "structure")

    def h(self, g: int, component: str) -> Phase:
        return self.phases[(g, component)]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BundleEquivariantStructure)
            and self.site is other.site
            and self.phases == other.phases
        )


@dataclass(frozen=True)
class Violation:
    relation: str
    component: str
    elements: Tuple[int, ...]

    def __str__(self) -> str:
        where = f"{self.relation} fails at component {self.component}"
        if self.elements:
            where += f" for elements {self.elements}"
        return where


@dataclass(frozen=True)
class VerificationReport:
    passed: bool
    violations: Tuple[Violation, ...]

    def __bool__(self) -> bool:
        return self.passed

    def __str__(self) -> str:
        if self.passed:
            return "pass"
        lines = [f"{len(self.violations)} violated relation(s):"]
        for v in self.violations[:8]:
            lines.append(f"  {v}")
        if len(self.violations) > 8:
            lines.append(f"  ... and {len(self.violations) - 8} more")
        return "\n".join(lines)


def _same_site(site: DiscreteSite, *objects) -> None:
    for obj in objects:
        if obj.site is not site:
            raise ShapeError("data belongs to a different site")


def verify_bundle_equivariance(
    site: DiscreteSite,
    cocycle: BundleCocycle,
    structure: BundleEquivariantStructure,
) -> VerificationReport:
    """Check closure on triples, the pullback/transition relation, and
    the composition law for the patch phases."""
    _same_site(site, cocycle, structure)
    bad = []
    for key, entry in site.triples.items():
        for t, (xab, xbc, xac) in entry.items():
            prod = cocycle.value(xab) * cocycle.value(xbc) * cocycle.value(xac).inverse()
            if not prod.is_one:
                bad.append(Violation("bundle.closure", t, ()))
    n = len(site.group)
    for g in range(n):
        for key, entry in site.doubles.items():
            for x, (pa, pb) in entry.items():
                lhs = cocycle.value(site.act(g, x))
                rhs = cocycle.value(x) * structure.h(g, pa) * structure.h(g, pb).inverse()
                if lhs != rhs:
                    bad.append(Violation("bundle.transition", x, (g,)))
    for g1 in range(n):
        for g2 in range(n):
            g12 = site.group.mul(g1, g2)
            for c in site.patch_components():
                lhs = structure.h(g12, c)
                rhs = structure.h(g1, site.act(g2, c)) * structure.h(g2, c)
                if lhs != rhs:
                    bad.append(Violation("bundle.composition", c, (g1, g2)))
    return VerificationReport(not bad, tuple(bad))


class Character:
    """Homomorphism from the group into roots of unity."""

    __slots__ = ("group", "values")

    def __init__(self, group: FiniteGroup, values: Sequence[Phase]):
        if len(values) != len(group):
            raise ShapeError("need one phase per group element")
        self.group = group
        self.values = tuple(values)
        if not self.values[group.identity].is_one:
            raise ShapeError("a character sends the identity to 1")
        for g in range(len(group)):
            for h in range(len(group)):
                if self.values[g] * self.values[h] != self.values[group.mul(g, h)]:
                    raise ShapeError(
                        f"not a homomorphism: fails at the pair ({g}, {h})"
                    )

    def __call__(self, g: int) -> Phase:
        return self.values[g]

    @property
    def is_trivial(self) -> bool:
        return all(v.is_one for v in self.values)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Character)
            and self.group is other.group
            and self.values == other.values
        )

    def __hash__(self) -> int:
        return hash((id(self.group), self.values))

    def __repr__(self) -> str:
        return f"Character({', '.join(str(v) for v in self.values)})"


def characters(group: FiniteGroup) -> Tuple[Character, ...]:
    """All homomorphisms G -> U(1), enumerated through the abelianization
    in lexicographic coefficient order."""
    ab = abelianization(group)
    out = []
    for choice in itertools.product(*(range(d) for d in ab.invariant_factors)):
        values = []
        for g in range(len(group)):
            ph = ONE
            for pick, d, coord in zip(choice, ab.invariant_factors, ab.projection[g]):
                ph = ph * Phase(pick * coord, d)
            values.append(ph)
        out.append(Character(group, values))
    return tuple(out)


def act_bundle(
    structure: BundleEquivariantStructure, character: Character
) -> BundleEquivariantStructure:
    """Twist every patch phase of element g by character(g)."""
    if character.group is not structure.site.group:
        raise ShapeError("character belongs to a different group")
    phases = {
        (g, c): ph * character(g) for (g, c), ph in structure.phases.items()
    }
    return BundleEquivariantStructure(structure.site, phases)


def bundle_difference_character(
    s1: BundleEquivariantStructure,
    s2: BundleEquivariantStructure,
    cocycle: Optional[BundleCocycle] = None,
) -> Union[Character, Dict[str, Character]]:
    """Ratio of two equivariant structures for the same cocycle.

    On a connected site the ratio is patch-independent and returns one
    :class:`Character`; a disconnected site returns a dict keyed by the
    smallest patch component of each connected piece.  Passing the
    shared ``cocycle`` verifies both structures first.
    """
    site = s1.site
    _same_site(site, s2)
    if cocycle is not None:
        for tag, s in (("first", s1), ("second", s2)):
            report = verify_bundle_equivariance(site, cocycle, s)
            if not report:
                raise SiteError(f"the {tag} structure is not equivariant: {report}")
    n = len(site.group)
    ratio = {
        (g, c): s1.h(g, c) / s2.h(g, c)
        for g in range(n)
        for c in site.patch_components()
    }
    # Patch-independence across every overlap; failure means the two
    # structures do not serve a common cocycle.
    for g in range(n):
        for entry in site.doubles.values():
            for x, (pa, pb) in entry.items():
                if ratio[(g, pa)] != ratio[(g, pb)]:
                    raise SiteError(
                        f"difference of element {g} jumps across overlap component {x}"
                    )
    out: Dict[str, Character] = {}
    for piece in site.pieces:
        rep = min(piece)
        for g in range(n):
            for c in piece:
                if site.act(g, c) not in piece:
                    raise SiteError(
                        "the action mixes connected pieces; no per-piece character exists"
                    )
                if ratio[(g, c)] != ratio[(g, rep)]:
                    raise SiteError(
                        f"difference of element {g} is not constant on a connected piece"
                    )
        try:
            out[rep] = Character(site.group, [ratio[(g, rep)] for g in range(n)])
        except ShapeError as exc:
            raise SiteError(f"difference is not a character: {exc}") from exc
    if site.is_connected:
        return out[min(out)]
    return out


class GerbeCocycle:
    """Phases on triple-overlap components, stored on the sorted triple."""

    def __init__(self, site: DiscreteSite, values: Optional[Mapping[str, Phase]] = None):
        self.site = site
        self.values = _fill(site, site.triple_components(), values, "gerbe cocycle")

    def value(self, component: str) -> Phase:
        return self.values[component]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GerbeCocycle)
            and self.site is other.site
            and self.values == other.values
        )


class GerbeEquivariantStructure:
    """Per element g an overlap correction nu^g, plus per pair (g1, g2) a
    patch-level connecting phase."""

    def __init__(
        self,
        site: DiscreteSite,
        nu: Optional[Mapping[Tuple[int, str], Phase]] = None,
        connecting: Optional[Mapping[Tuple[int, int, str], Phase]] = None,
    ):
        self.site = site
        n = len(site.group)
        nu_keys = [(g, x) for g in range(n) for x in site.double_components()]
        conn_keys = [
            (g1, g2, c)
            for g1 in range(n)
            for g2 in range(n)
            for c in site.patch_components()
        ]
        self.nu = _fill(site, nu_keys, nu, "nu")
        self.connecting = _fill(site, conn_keys, connecting, "connecting phase")

    def nu_at(self, g: int, component: str) -> Phase:
        return self.nu[(g, component)]

    def conn(self, g1: int, g2: int, component: str) -> Phase:
        return self.connecting[(g1, g2, component)]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GerbeEquivariantStructure)
            and self.site is other.site
            and self.nu == other.nu
            and self.connecting == other.connecting
        )


def verify_gerbe_equivariance(
    site: DiscreteSite,
    cocycle: GerbeCocycle,
    structure: GerbeEquivariantStructure,
) -> VerificationReport:
    """Check quadruple closure, the pullback/transition relation for the
    triple phases, the composition law for nu, and the associativity law
    for the connecting phases."""
    _same_site(site, cocycle, structure)
    bad = []
    for key, entry in site.quads.items():
        for q, (tabc, tabd, tacd, tbcd) in entry.items():
            prod = (
                cocycle.value(tbcd)
                * cocycle.value(tacd).inverse()
                * cocycle.value(tabd)
                * cocycle.value(tabc).inverse()
            )
            if not prod.is_one:
                bad.append(Violation("gerbe.closure", q, ()))
    n = len(site.group)
    for g in range(n):
        for key, entry in site.triples.items():
            for t, (xab, xbc, xac) in entry.items():
                lhs = cocycle.value(site.act(g, t))
                rhs = (
                    cocycle.value(t)
                    * structure.nu_at(g, xab)
                    * structure.nu_at(g, xbc)
                    * structure.nu_at(g, xac).inverse()
                )
                if lhs != rhs:
                    bad.append(Violation("gerbe.transition", t, (g,)))
    for g1 in range(n):
        for g2 in range(n):
            g12 = site.group.mul(g1, g2)
            for entry in site.doubles.values():
                for x, (pa, pb) in entry.items():
                    lhs = structure.nu_at(g12, x)
                    rhs = (
                        structure.nu_at(g2, x)
                        * structure.nu_at(g1, site.act(g2, x))
                        * structure.conn(g1, g2, pa)
                        * structure.conn(g1, g2, pb).inverse()
                    )
                    if lhs != rhs:
                        bad.append(Violation("gerbe.composition", x, (g1, g2)))
    for g1 in range(n):
        for g2 in range(n):
            for g3 in range(n):
                g12 = site.group.mul(g1, g2)
                g23 = site.group.mul(g2, g3)
                for c in site.patch_components():
                    lhs = structure.conn(g1, g23, c) * structure.conn(g2, g3, c)
                    rhs = structure.conn(g1, g2, site.act(g3, c)) * structure.conn(
                        g12, g3, c
                    )
                    if lhs != rhs:
                        bad.append(Violation("gerbe.associativity", c, (g1, g2, g3)))
    return VerificationReport(not bad, tuple(bad))


class GerbeDifferenceData:
    """Per element g a transition phase on double overlaps, plus per pair
    (g1, g2) a patch-level connecting phase; the ratio of two gerbe
    structures."""

    def __init__(
        self,
        site: DiscreteSite,
        transitions: Optional[Mapping[Tuple[int, str], Phase]] = None,
        connecting: Optional[Mapping[Tuple[int, int, str], Phase]] = None,
    ):
        self.site = site
        n = len(site.group)
        t_keys = [(g, x) for g in range(n) for x in site.double_components()]
        w_keys = [
            (g1, g2, c)
            for g1 in range(n)
            for g2 in range(n)
            for c in site.patch_components()
        ]
        self.transitions = _fill(site, t_keys, transitions, "transition")
        self.connecting = _fill(site, w_keys, connecting, "connecting phase")

    def t(self, g: int, component: str) -> Phase:
        return self.transitions[(g, component)]

    def w(self, g1: int, g2: int, component: str) -> Phase:
        return self.connecting[(g1, g2, component)]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GerbeDifferenceData)
            and self.site is other.site
            and self.transitions == other.transitions
            and self.connecting == other.connecting
        )


def _diagram_violations(d: GerbeDifferenceData):
    site = d.site
    n = len(site.group)
    bad = []
    for g in range(n):
        for key, entry in site.triples.items():
            for t, (xab, xbc, xac) in entry.items():
                prod = d.t(g, xab) * d.t(g, xbc) * d.t(g, xac).inverse()
                if not prod.is_one:
                    bad.append(Violation("diagram.closure", t, (g,)))
    for g1 in range(n):
        for g2 in range(n):
            g12 = site.group.mul(g1, g2)
            for entry in site.doubles.values():
                for x, (pa, pb) in entry.items():
                    lhs = d.t(g12, x)
                    rhs = (
                        d.t(g2, x)
                        * d.t(g1, site.act(g2, x))
                        * d.w(g1, g2, pa)
                        * d.w(g1, g2, pb).inverse()
                    )
                    if lhs != rhs:
                        bad.append(Violation("diagram.compatibility", x, (g1, g2)))
    for g1 in range(n):
        for g2 in range(n):
            for g3 in range(n):
                g12 = site.group.mul(g1, g2)
                g23 = site.group.mul(g2, g3)
                for c in site.patch_components():
                    lhs = d.w(g1, g23, c) * d.w(g2, g3, c)
                    rhs = d.w(g1, g2, site.act(g3, c)) * d.w(g12, g3, c)
                    if lhs != rhs:
                        bad.append(Violation("diagram.associativity", c, (g1, g2, g3)))
    return bad


def verify_group_law_diagram(d: GerbeDifferenceData) -> bool:
    """True iff the transition phases close on triples, compose under the
    group law up to the connecting phases, and the connecting phases
    associate.  On a one-patch site this is exactly the 2-cocycle
    condition for the connecting phases."""
    return not _diagram_violations(d)


def gerbe_difference_data(
    s1: GerbeEquivariantStructure, s2: GerbeEquivariantStructure
) -> GerbeDifferenceData:
    """Componentwise ratio of two gerbe structures; the result always
    satisfies the group-law diagram when both inputs are equivariant for
    one cocycle."""
    site = s1.site
    _same_site(site, s2)
    transitions = {key: s1.nu[key] / s2.nu[key] for key in s1.nu}
    connecting = {
        key: s1.connecting[key] / s2.connecting[key] for key in s1.connecting
    }
    d = GerbeDifferenceData(site, transitions, connecting)
    bad = _diagram_violations(d)
    if bad:
        raise SiteError(
            "difference fails the group-law diagram; the structures are not "
            f"equivariant for one cocycle: {bad[0]}"
        )
    return d


def act_gerbe(
    structure: GerbeEquivariantStructure, d: GerbeDifferenceData
) -> GerbeEquivariantStructure:
    """Multiply a gerbe structure by difference data."""
    _same_site(structure.site, d)
    nu = {key: ph * d.transitions[key] for key, ph in structure.nu.items()}
    connecting = {
        key: ph * d.connecting[key] for key, ph in structure.connecting.items()
    }
    return GerbeEquivariantStructure(structure.site, nu, connecting)


@dataclass(frozen=True)
class ExtractedClass:
    """A degree-2 class pulled out of trivialized difference data."""

    cohomology: CohomologyGroup
    coordinates: Tuple[int, ...]
    representative: Cochain

    @property
    def is_trivial(self) -> bool:
        return not any(self.coordinates)

    def __str__(self) -> str:
        factors = self.cohomology.invariant_factors
        if not factors:
            return "trivial class (the group is trivial in degree 2)"
        shape = " x ".join(f"Z/{f}" for f in factors)
        return f"class {self.coordinates} in {shape}"


def extract_discrete_torsion(d: GerbeDifferenceData) -> ExtractedClass:
    """Read the group 2-cocycle off difference data whose transition
    phases are all trivial, and classify it.

    Residual constant regauging of trivialized transitions only shifts
    the connecting phases by coboundaries, so the class is well defined.
    """
    site = d.site
    group = site.group
    for (g, x), ph in d.transitions.items():
        if not ph.is_one:
            raise SiteError(
                f"transition for element {g} is not trivial at component {x}; "
                "quotient the transitions away first"
            )
    n = len(group)
    comps = site.patch_components()
    values: Dict[Tuple[int, int], Phase] = {}
    for g1 in range(n):
        for g2 in range(n):
            seen = {d.w(g1, g2, c) for c in comps}
            if len(seen) != 1:
                raise SiteError(
                    f"connecting phase for ({g1}, {g2}) varies across components"
                )
            values[(g1, g2)] = seen.pop()
    for g1 in range(n):
        for g2 in range(n):
            for g3 in range(n):
                lhs = values[(g1, group.mul(g2, g3))] * values[(g2, g3)]
                rhs = values[(g1, g2)] * values[(group.mul(g1, g2), g3)]
                if lhs != rhs:
                    raise SiteError(
                        f"connecting phases violate the 2-cocycle law at ({g1}, {g2}, {g3})"
                    )
    # Dividing by the constant value at the identity pair is a coboundary
    # shift and normalizes the identity rows exactly.
    c0 = values[(group.identity, group.identity)]
    values = {key: ph / c0 for key, ph in values.items()}
    modulus = len(group)
    for ph in values.values():
        modulus = lcm(modulus, ph.n)
    modulus = max(modulus, 2)
    space = CochainSpace(group, 2, modulus)
    table = np.zeros_like(space.zero().table)
    for (g1, g2), ph in values.items():
        if g1 == group.identity or g2 == group.identity:
            if not ph.is_one:
                raise SiteError("identity rows failed to normalize")
            continue
        table[space.index_of((g1, g2))] = ph.k * (modulus // ph.n)
    cocycle = space.from_vector(table)
    hgroup = cohomology_u1(group, 2, modulus)
    coords = hgroup.classify(cocycle)
    return ExtractedClass(hgroup, coords, hgroup.reduce(cocycle))


def single_point_site(group: FiniteGroup) -> DiscreteSite:
    """One patch, one component, trivial action."""
    return DiscreteSite(group, {"A": ("a0",)})


def embed_difference_data(
    cochain: Cochain, site: Optional[DiscreteSite] = None
) -> GerbeDifferenceData:
    """Spread a degree-2 cochain out as difference data with trivial
    transitions: every patch component carries the same connecting
    phases."""
    if cochain.space.degree != 2:
        raise DegreeError("difference data needs a degree-2 cochain")
    group = cochain.space.group
    if site is None:
        site = single_point_site(group)
    elif site.group is not group:
        raise ShapeError("site and cochain use different groups")
    connecting = {}
    for g1 in range(len(group)):
        for g2 in range(len(group)):
            ph = cochain.phase(g1, g2)
            for c in site.patch_components():
                connecting[(g1, g2, c)] = ph
    return GerbeDifferenceData(site, None, connecting)


# -- text format --------------------------------------------------------------
#
# site Z2xZ2
# patch A a0 a1
# overlap A B o0 : a0 b0
# triple A B C t0 : oab obc oac
# quad A B C D q0 : tabc tabd tacd tbcd
# act 1 a0 a1
# endsite
# bundle
# A B o0 1/2
# endbundle
# equiv bundle
# 1 a0 1/2
# endequiv
# gerbe
# A B C t0 1/4
# endgerbe
# equiv gerbe
# nu 1 o0 1/2
# hh 1 2 a0 3/4
# endequiv
#
# Unlisted phases are 1; '#' starts a comment.


@dataclass(frozen=True)
class CechDocument:
    site: DiscreteSite
    kind: str  # "bundle" or "gerbe"
    bundle: Optional[BundleCocycle] = None
    bundle_structure: Optional[BundleEquivariantStructure] = None
    gerbe: Optional[GerbeCocycle] = None
    gerbe_structure: Optional[GerbeEquivariantStructure] = None

    def verify(self) -> VerificationReport:
        if self.kind == "bundle":
            return verify_bundle_equivariance(
                self.site, self.bundle, self.bundle_structure
            )
        return verify_gerbe_equivariance(
            self.site, self.gerbe, self.gerbe_structure
        )


def _parse_phase(token: str) -> Phase:
    parts = token.split("/")
    if len(parts) != 2:
        raise FormatError(f"phases are written k/N, got {token!r}")
    try:
        k, n = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise FormatError(f"phases are written k/N, got {token!r}") from exc
    if n <= 0:
        raise FormatError(f"phase modulus must be positive, got {token!r}")
    return Phase(k, n)


def _parse_element(token: str, group: FiniteGroup) -> int:
    try:
        g = int(token)
    except ValueError as exc:
        raise FormatError(f"group elements are integer indices, got {token!r}") from exc
    if not 0 <= g < len(group):
        raise FormatError(f"element {g} is outside the group")
    return g


def _split_restrictions(parts, line: str):
    if ":" not in parts:
        raise FormatError(f"missing ':' before restrictions in {line!r}")
    at = parts.index(":")
    return parts[:at], parts[at + 1 :]


def parse_site(lines, start: int):
    """Parse a ``site`` stanza; returns (DiscreteSite, next line index)."""
    head = lines[start].split()
    if len(head) < 2:
        raise FormatError("site line needs a group spec")
    try:
        group = parse_group_spec("".join(head[1:]))
    except GroupSpecError as exc:
        raise FormatError(f"invalid site group: {exc}") from exc
    patches: Dict[str, list] = {}
    doubles: Dict[PairKey, Dict[str, PairKey]] = {}
    triples: Dict[TripleKey, Dict[str, TripleKey]] = {}
    quads: Dict[QuadKey, Dict[str, QuadKey]] = {}
    action: Dict[int, Dict[str, str]] = {}
    i = start + 1
    while True:
        if i >= len(lines):
            raise FormatError("site stanza never ends; missing 'endsite'")
        line = lines[i]
        parts = line.split()
        word = parts[0]
        if word == "endsite":
            i += 1
            break
        if word == "patch":
            if len(parts) < 3:
                raise FormatError(f"patch line needs a name and components: {line!r}")
            patches.setdefault(parts[1], []).extend(parts[2:])
        elif word == "overlap":
            names, rest = _split_restrictions(parts[1:], line)
            if len(names) != 3 or len(rest) != 2:
                raise FormatError(f"overlap line needs 'A B comp : pa pb': {line!r}")
            key = (names[0], names[1])
            doubles.setdefault(key, {})[names[2]] = (rest[0], rest[1])
        elif word == "triple":
            names, rest = _split_restrictions(parts[1:], line)
            if len(names) != 4 or len(rest) != 3:
                raise FormatError(
                    f"triple line needs 'A B C comp : xab xbc xac': {line!r}"
                )
            key3 = (names[0], names[1], names[2])
            triples.setdefault(key3, {})[names[3]] = (rest[0], rest[1], rest[2])
        elif word == "quad":
            names, rest = _split_restrictions(parts[1:], line)
            if len(names) != 5 or len(rest) != 4:
                raise FormatError(
                    f"quad line needs 'A B C D comp : four triples': {line!r}"
                )
            key4 = (names[0], names[1], names[2], names[3])
            quads.setdefault(key4, {})[names[4]] = tuple(rest)  # type: ignore[assignment]
        elif word == "act":
            if len(parts) != 4:
                raise FormatError(f"act line needs 'act g comp image': {line!r}")
            g = _parse_element(parts[1], group)
            action.setdefault(g, {})[parts[2]] = parts[3]
        else:
            raise FormatError(f"unknown site line {line!r}")
        i += 1
    try:
        site = DiscreteSite(group, patches, doubles, triples, quads, action)
    except (SiteError, ShapeError) as exc:
        raise FormatError(f"invalid site: {exc}") from exc
    return site, i


def parse_cech_document(text: str) -> CechDocument:
    lines = []
    for raw in text.splitlines():
        body = raw.split("#", 1)[0].strip()
        if body:
            lines.append(body)
    site = None
    bundle_values: Optional[Dict[str, Phase]] = None
    bundle_h: Optional[Dict[Tuple[int, str], Phase]] = None
    gerbe_values: Optional[Dict[str, Phase]] = None
    gerbe_nu: Optional[Dict[Tuple[int, str], Phase]] = None
    gerbe_conn: Optional[Dict[Tuple[int, int, str], Phase]] = None
    i = 0
    while i < len(lines):
        parts = lines[i].split()
        word = parts[0]
        if word == "site":
            if site is not None:
                raise FormatError("only one site stanza per document")
            site, i = parse_site(lines, i)
            continue
        if site is None:
            raise FormatError("the site stanza must come first")
        if word == "bundle" and len(parts) == 1:
            if bundle_values is not None:
                raise FormatError("duplicate bundle stanza")
            bundle_values = {}
            i += 1
            while True:
                if i >= len(lines):
                    raise FormatError("bundle stanza never ends; missing 'endbundle'")
                if lines[i] == "endbundle":
                    i += 1
                    break
                entry = lines[i].split()
                if len(entry) != 4:
                    raise FormatError(f"bundle line needs 'A B comp k/N': {lines[i]!r}")
                a, b, comp, tok = entry
                if (a, b) not in site.doubles or comp not in site.doubles[(a, b)]:
                    raise FormatError(f"bundle line names unknown overlap: {lines[i]!r}")
                bundle_values[comp] = _parse_phase(tok)
                i += 1
        elif word == "gerbe" and len(parts) == 1:
            if gerbe_values is not None:
                raise FormatError("duplicate gerbe stanza")
            gerbe_values = {}
            i += 1
            while True:
                if i >= len(lines):
                    raise FormatError("gerbe stanza never ends; missing 'endgerbe'")
                if lines[i] == "endgerbe":
                    i += 1
                    break
                entry = lines[i].split()
                if len(entry) != 5:
                    raise FormatError(f"gerbe line needs 'A B C comp k/N': {lines[i]!r}")
                a, b, c, comp, tok = entry
                key3 = (a, b, c)
                if key3 not in site.triples or comp not in site.triples[key3]:
                    raise FormatError(f"gerbe line names unknown triple: {lines[i]!r}")
                gerbe_values[comp] = _parse_phase(tok)
                i += 1
        elif word == "equiv" and len(parts) == 2 and parts[1] == "bundle":
            if bundle_h is not None:
                raise FormatError("duplicate equiv bundle stanza")
            bundle_h = {}
            i += 1
            while True:
                if i >= len(lines):
                    raise FormatError("equiv stanza never ends; missing 'endequiv'")
                if lines[i] == "endequiv":
                    i += 1
                    break
                entry = lines[i].split()
                if len(entry) != 3:
                    raise FormatError(
                        f"equiv bundle line needs 'g comp k/N': {lines[i]!r}"
                    )
                g = _parse_element(entry[0], site.group)
                bundle_h[(g, entry[1])] = _parse_phase(entry[2])
                i += 1
        elif word == "equiv" and len(parts) == 2 and parts[1] == "gerbe":
            if gerbe_nu is not None:
                raise FormatError("duplicate equiv gerbe stanza")
            gerbe_nu = {}
            gerbe_conn = {}
            i += 1
            while True:
                if i >= len(lines):
                    raise FormatError("equiv stanza never ends; missing 'endequiv'")
                if lines[i] == "endequiv":
                    i += 1
                    break
                entry = lines[i].split()
                if entry[0] == "nu" and len(entry) == 4:
                    g = _parse_element(entry[1], site.group)
                    gerbe_nu[(g, entry[2])] = _parse_phase(entry[3])
                elif entry[0] == "hh" and len(entry) == 5:
                    g1 = _parse_element(entry[1], site.group)
                    g2 = _parse_element(entry[2], site.group)
                    gerbe_conn[(g1, g2, entry[3])] = _parse_phase(entry[4])
                else:
                    raise FormatError(
                        f"equiv gerbe line needs 'nu g comp k/N' or "
                        f"'hh g1 g2 comp k/N': {lines[i]!r}"
                    )
                i += 1
        else:
            raise FormatError(f"unknown stanza line {lines[i]!r}")
    if site is None:
        raise FormatError("document has no site stanza")
    has_bundle = bundle_values is not None or bundle_h is not None
    has_gerbe = gerbe_values is not None or gerbe_nu is not None
    if has_bundle and has_gerbe:
        raise FormatError("document mixes bundle and gerbe stanzas")
    if not has_bundle and not has_gerbe:
        raise FormatError("document has no bundle or gerbe data")
    try:
        if has_bundle:
            return CechDocument(
                site,
                "bundle",
                bundle=BundleCocycle(site, bundle_values),
                bundle_structure=BundleEquivariantStructure(site, bundle_h),
            )
        return CechDocument(
            site,
            "gerbe",
            gerbe=GerbeCocycle(site, gerbe_values),
            gerbe_structure=GerbeEquivariantStructure(site, gerbe_nu, gerbe_conn),
        )
    except (SiteError, ShapeError) as exc:
        raise FormatError(f"invalid document: {exc}") from exc


def format_site(site: DiscreteSite) -> str:
    """Canonical site stanza: sorted strata, only non-fixed action pairs."""
    lines = [f"site {site.group.name}"]
    for name, comps in site.patches.items():
        lines.append(f"patch {name} {' '.join(comps)}")
    for (a, b), entry in site.doubles.items():
        for comp, (pa, pb) in entry.items():
            lines.append(f"overlap {a} {b} {comp} : {pa} {pb}")
    for (a, b, c), entry3 in site.triples.items():
        for comp, rs in entry3.items():
            lines.append(f"triple {a} {b} {c} {comp} : {' '.join(rs)}")
    for key4, entry4 in site.quads.items():
        for comp, rs4 in entry4.items():
            lines.append(f"quad {' '.join(key4)} {comp} : {' '.join(rs4)}")
    for g in range(len(site.group)):
        for comp in site._all:
            image = site.act(g, comp)
            if image != comp:
                lines.append(f"act {g} {comp} {image}")
    lines.append("endsite")
    return "\n".join(lines) + "\n"


def format_cech_document(doc: CechDocument) -> str:
    """Canonical document text; trivial phases are omitted."""
    out = [format_site(doc.site)]
    site = doc.site
    if doc.kind == "bundle":
        lines = ["bundle"]
        for (a, b), entry in site.doubles.items():
            for comp in entry:
                ph = doc.bundle.value(comp)
                if not ph.is_one:
                    lines.append(f"{a} {b} {comp} {ph}")
        lines.append("endbundle")
        out.append("\n".join(lines) + "\n")
        lines = ["equiv bundle"]
        for g in range(len(site.group)):
            for comp in site.patch_components():
                ph = doc.bundle_structure.h(g, comp)
                if not ph.is_one:
                    lines.append(f"{g} {comp} {ph}")
        lines.append("endequiv")
        out.append("\n".join(lines) + "\n")
        return "".join(out)
    lines = ["gerbe"]
    for (a, b, c), entry3 in site.triples.items():
        for comp in entry3:
            ph = doc.gerbe.value(comp)
            if not ph.is_one:
                lines.append(f"{a} {b} {c} {comp} {ph}")
    lines.append("endgerbe")
    out.append("\n".join(lines) + "\n")
    lines = ["equiv gerbe"]
    n = len(site.group)
    for g in range(n):
        for comp in site.double_components():
            ph = doc.gerbe_structure.nu_at(g, comp)
            if not ph.is_one:
                lines.append(f"nu {g} {comp} {ph}")
    for g1 in range(n):
        for g2 in range(n):
            for comp in site.patch_components():
                ph = doc.gerbe_structure.conn(g1, g2, comp)
                if not ph.is_one:
                    lines.append(f"hh {g1} {g2} {comp} {ph}")
    lines.append("endequiv")
    out.append("\n".join(lines) + "\n")
    return "".join(out)
