"""Normalized cochains on a finite group with Z/N coefficients.

A degree-p cochain is a function on p-tuples of group elements with
values in Z/N, written additively (the value k stands for the phase
exp(2*pi*i*k/N)). Cochains are normalized: any tuple containing the
identity is sent to 0, so only tuples of non-identity elements are
stored. Tables are flat numpy vectors of length (|G|-1)^p, indexed
mixed-radix with the leftmost argument most significant; the non-identity
elements are enumerated in increasing element order.

The differential is

    (dc)(g_1, .., g_{p+1}) = c(g_2, .., g_{p+1})
        + sum_i (-1)^i c(g_1, .., g_i g_{i+1}, .., g_{p+1})
        + (-1)^{p+1} c(g_1, .., g_p)

where a term whose merged argument is the identity drops out. It is
exposed two ways: applied directly to a table (a gather, cheap even in
degree 3), and as dense row blocks of the matrix for the kernel
computations, so the full matrix never has to exist at once.
"""

from __future__ import annotations

import re

import numpy as np

from .errors import DegreeError, FormatError, ModulusError, ShapeError
from .groups import FiniteGroup
from .phases import Phase

MAX_DEGREE = 4


class CochainSpace:
    """Degree-p cochains on a group, with Z/N coefficient tables."""

    __slots__ = ("group", "degree", "modulus", "nonidentity", "position", "slots")

    def __init__(self, group: FiniteGroup, degree: int, modulus: int):
        if not 0 <= degree <= MAX_DEGREE:
            raise DegreeError(f"degree {degree} out of range 0..{MAX_DEGREE}")
        if modulus < 2:
            raise ModulusError(f"modulus must be at least 2, got {modulus}")
        self.group = group
        self.degree = degree
        self.modulus = modulus
        e = group.identity
        self.nonidentity = np.array(
            [g for g in range(group.order) if g != e], dtype=np.int64
        )
        pos = np.full(group.order, -1, dtype=np.int64)
        pos[self.nonidentity] = np.arange(group.order - 1)
        self.position = pos
        self.slots = (group.order - 1) ** degree

    def index_of(self, args) -> int:
        """Flat slot of a tuple of non-identity elements."""
        if len(args) != self.degree:
            raise ShapeError(f"expected {self.degree} arguments, got {len(args)}")
        idx = 0
        width = len(self.nonidentity)
        for g in args:
            d = int(self.position[g])
            if d < 0:
                raise ShapeError("identity is not a stored argument")
            idx = idx * width + d
        return idx

    def args_of(self, index: int) -> tuple:
        """Inverse of index_of."""
        width = len(self.nonidentity)
        digits = []
        for _ in range(self.degree):
            digits.append(index % width)
            index //= width
        return tuple(int(self.nonidentity[d]) for d in reversed(digits))

    def zero(self) -> "Cochain":
        return Cochain(self, np.zeros(self.slots, dtype=np.int64))

    def from_vector(self, vec) -> "Cochain":
        vec = np.asarray(vec, dtype=np.int64)
        if vec.shape != (self.slots,):
            raise ShapeError(f"expected a vector of length {self.slots}")
        return Cochain(self, vec % self.modulus)

    def decode_digits(self, indices) -> np.ndarray:
        """Row indices -> (k, degree) matrix of mixed-radix digits."""
        indices = np.asarray(indices, dtype=np.int64)
        width = len(self.nonidentity)
        digits = np.empty((indices.shape[0], self.degree), dtype=np.int64)
        tmp = indices.copy()
        for j in reversed(range(self.degree)):
            digits[:, j] = tmp % width
            tmp //= width
        return digits

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CochainSpace)
            and self.group is other.group
            and self.degree == other.degree
            and self.modulus == other.modulus
        )

    def __repr__(self) -> str:
        return (
            f"CochainSpace({self.group.name!r}, degree={self.degree}, "
            f"modulus={self.modulus})"
        )


class Cochain:
    """A normalized cochain: flat Z/N table over non-identity tuples."""

    __slots__ = ("space", "table")

    def __init__(self, space: CochainSpace, table: np.ndarray):
        self.space = space
        self.table = table

    def value(self, *args) -> int:
        """Exponent mod N at a tuple; 0 whenever an argument is the identity."""
        if any(g == self.space.group.identity for g in args):
            if len(args) != self.space.degree:
                raise ShapeError(
                    f"expected {self.space.degree} arguments, got {len(args)}"
                )
            return 0
        return int(self.table[self.space.index_of(args)])

    def phase(self, *args) -> Phase:
        """The value as an exact root of unity."""
        return Phase(self.value(*args), self.space.modulus)

    def __add__(self, other: "Cochain") -> "Cochain":
        if self.space != other.space:
            raise ShapeError("cochain spaces differ")
        return Cochain(self.space, (self.table + other.table) % self.space.modulus)

    def __sub__(self, other: "Cochain") -> "Cochain":
        if self.space != other.space:
            raise ShapeError("cochain spaces differ")
        return Cochain(self.space, (self.table - other.table) % self.space.modulus)

    def __neg__(self) -> "Cochain":
        return Cochain(self.space, (-self.table) % self.space.modulus)

    def scaled(self, k: int) -> "Cochain":
        return Cochain(self.space, (k * self.table) % self.space.modulus)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Cochain)
            and self.space == other.space
            and np.array_equal(self.table, other.table)
        )

    def is_zero(self) -> bool:
        return not np.any(self.table)

    def __repr__(self) -> str:
        return f"Cochain(degree={self.space.degree}, modulus={self.space.modulus})"


def _term_columns(space: CochainSpace, digits: np.ndarray):
    """Term data for differential rows given their (k, p+1) digit matrix.

    Yields (sign, cols, mask): flat column indices into the degree-p table
    and a validity mask (False where the merged argument is the identity).
    """
    group = space.group
    p = space.degree
    width = len(space.nonidentity)
    mul = np.asarray(group.table, dtype=np.int64)
    elems = space.nonidentity[digits]

    def flatten(dmat):
        idx = np.zeros(dmat.shape[0], dtype=np.int64)
        for j in range(dmat.shape[1]):
            idx = idx * width + dmat[:, j]
        return idx

    full = np.ones(digits.shape[0], dtype=bool)
    yield 1, flatten(digits[:, 1:]), full
    sign = 1
    for i in range(1, p + 1):
        sign = -sign
        merged = mul[elems[:, i - 1], elems[:, i]]
        mask = merged != group.identity
        dcol = np.where(mask, space.position[merged], 0)
        dmat = np.concatenate(
            [digits[:, : i - 1], dcol[:, None], digits[:, i + 1 :]], axis=1
        )
        yield sign, flatten(dmat), mask
    yield -sign, flatten(digits[:, :p]), full


def coboundary_table(space: CochainSpace, vec: np.ndarray, mod: int) -> np.ndarray:
    """Differential applied to a degree-p table; entries mod ``mod`` (0 = over Z)."""
    group = space.group
    out_space = CochainSpace(group, space.degree + 1, space.modulus)
    rows = np.arange(out_space.slots, dtype=np.int64)
    digits = out_space.decode_digits(rows)
    out = np.zeros(out_space.slots, dtype=np.int64)
    for sign, cols, mask in _term_columns(space, digits):
        out += sign * np.where(mask, vec[cols], 0)
    if mod:
        out %= mod
    return out


def coboundary(cochain: Cochain) -> Cochain:
    """The differential of a cochain, one degree up."""
    space = cochain.space
    out = coboundary_table(space, cochain.table, space.modulus)
    return CochainSpace(space.group, space.degree + 1, space.modulus).from_vector(out)


def is_cocycle(cochain: Cochain) -> bool:
    return not np.any(coboundary_table(cochain.space, cochain.table, cochain.space.modulus))


def differential_blocks(space: CochainSpace, mod: int, block_rows: int = 1 << 15):
    """Dense row blocks of the degree-p differential matrix.

    The matrix has (|G|-1)^(p+1) rows and (|G|-1)^p columns; blocks are
    yielded top to bottom so kernels can be computed by streaming
    absorption without materializing the whole thing.
    """
    out_slots = (space.group.order - 1) ** (space.degree + 1)
    out_space = CochainSpace(space.group, space.degree + 1, space.modulus)
    for start in range(0, out_slots, block_rows):
        rows = np.arange(start, min(start + block_rows, out_slots), dtype=np.int64)
        digits = out_space.decode_digits(rows)
        block = np.zeros((rows.shape[0], space.slots), dtype=np.int64)
        local = np.arange(rows.shape[0])
        for sign, cols, mask in _term_columns(space, digits):
            np.add.at(block, (local[mask], cols[mask]), sign)
        if mod:
            block %= mod
        yield block


def differential_matrix(space: CochainSpace, mod: int = 0) -> np.ndarray:
    """The full dense differential matrix (small spaces only)."""
    blocks = list(differential_blocks(space, mod))
    if not blocks:
        return np.zeros((0, space.slots), dtype=np.int64)
    return np.vstack(blocks)


_HEADER_RE = re.compile(
    r'^cocycle\s+degree=(\d+)\s+modulus=(\d+)\s+group="([^"]*)"\s*$'
)


def format_cochain(cochain: Cochain) -> str:
    """Text form: a header line, then one line per nonzero entry.

    Entry lines hold the p element indices followed by the value; only
    non-identity tuples appear, in increasing slot order.
    """
    space = cochain.space
    lines = [
        f'cocycle degree={space.degree} modulus={space.modulus} '
        f'group="{space.group.name}"'
    ]
    for idx in np.nonzero(cochain.table)[0]:
        args = space.args_of(int(idx))
        lines.append(" ".join(str(a) for a in args + (int(cochain.table[idx]),)))
    return "\n".join(lines) + "\n"


def parse_cochain(text: str, group: FiniteGroup) -> Cochain:
    """Inverse of format_cochain; validates indices against the group."""
    body = [
        ln.strip()
        for ln in text.splitlines()
        if ln.strip() and not ln.lstrip().startswith("#")
    ]
    if not body:
        raise FormatError("empty cochain text")
    m = _HEADER_RE.match(body[0])
    if not m:
        raise FormatError(f"bad cochain header: {body[0]!r}")
    degree, modulus = int(m.group(1)), int(m.group(2))
    space = CochainSpace(group, degree, modulus)
    vec = np.zeros(space.slots, dtype=np.int64)
    for ln in body[1:]:
        parts = ln.split()
        if len(parts) != degree + 1:
            raise FormatError(f"expected {degree + 1} fields: {ln!r}")
        try:
            nums = [int(x) for x in parts]
        except ValueError:
            raise FormatError(f"non-integer field: {ln!r}") from None
        args, val = nums[:-1], nums[-1]
        for g in args:
            if not 0 <= g < group.order:
                raise FormatError(f"element index {g} out of range: {ln!r}")
            if g == group.identity:
                raise FormatError(f"identity argument in entry: {ln!r}")
        vec[space.index_of(args)] = val % modulus
    return Cochain(space, vec)
