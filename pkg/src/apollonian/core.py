"""Integer algebra of Descartes quadruples and the Apollonian group action."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .errors import (
    CurvatureOverflowError,
    ImprimitiveError,
    NotDescartesError,
    NotRootError,
    ParityError,
    UnboundedPackingError,
    UsageError,
)

INT64_MAX = (1 << 63) - 1


class Quadruple(NamedTuple):
    """Ordered curvatures of four mutually tangent circles."""

    v1: int
    v2: int
    v3: int
    v4: int

    def __str__(self) -> str:
        return ",".join(str(v) for v in self)


PRESETS = {
    "bugeye": Quadruple(-1, 2, 2, 3),
    "coins": Quadruple(-11, 21, 24, 28),
}


@dataclass(frozen=True)
class PackingDescriptor:
    root: Quadruple
    name: Optional[str] = None

    @property
    def bounding_curvature(self) -> int:
        return self.root[0]

    @property
    def label(self) -> str:
        return self.name or str(self.root)


def _check_int64(values) -> None:
    for v in values:
        if not -INT64_MAX <= v <= INT64_MAX:
            raise CurvatureOverflowError(f"curvature {v} does not fit in 64 bits")


def descartes_form(q) -> int:
    """Return 2*(v1^2+...+v4^2) - (v1+...+v4)^2.

    Raises CurvatureOverflowError when an intermediate term would leave the
    signed 64-bit range rather than returning a wrapped value.
    """
    _check_int64(q)
    squares = 2 * sum(v * v for v in q)
    total = sum(q)
    if squares > INT64_MAX or total * total > INT64_MAX:
        raise CurvatureOverflowError(f"Descartes form of {tuple(q)} overflows 64 bits")
    return squares - total * total


def apply_generator(q, i: int) -> Quadruple:
    """Apply S_i (1-based): v_i -> 2*(sum of the other three) - v_i."""
    if i not in (1, 2, 3, 4):
        raise UsageError(f"generator index must be 1..4, got {i!r}")
    k = i - 1
    new = 2 * (sum(q) - q[k]) - q[k]
    _check_int64((new,))
    out = list(q)
    out[k] = new
    return Quadruple(*out)


def _is_primitive(q) -> bool:
    return math.gcd(*(abs(v) for v in q)) == 1


def _has_two_even(q) -> bool:
    return sum(1 for v in q if v % 2 == 0) == 2


def reduce_to_root(q) -> Quadruple:
    """Walk up the quadruple tree to the root of the packing containing ``q``.

    Each step rewrites the maximal coordinate while that strictly lowers it.
    The result is sorted with the bounding (negative) curvature first.
    """
    q = Quadruple(*q)
    if descartes_form(q) != 0:
        raise NotDescartesError(f"{tuple(q)} does not satisfy the Descartes equation")
    while True:
        if 0 in q:
            raise UnboundedPackingError(f"reduction reached {tuple(q)} with a zero curvature")
        k = max(range(4), key=lambda j: q[j])
        new = 2 * (sum(q) - q[k]) - q[k]
        if new >= q[k]:
            break
        q = apply_generator(q, k + 1)
    if sum(1 for v in q if v < 0) != 1:
        raise UnboundedPackingError(f"{tuple(q)} is not the root of a bounded packing")
    return Quadruple(*sorted(q))


def validate_packing(root, name: Optional[str] = None) -> PackingDescriptor:
    """Check that ``root`` is the root quadruple of a primitive bounded packing."""
    q = Quadruple(*(int(v) for v in root))
    if descartes_form(q) != 0:
        raise NotDescartesError(f"{tuple(q)} does not satisfy the Descartes equation")
    if not _is_primitive(q):
        raise ImprimitiveError(f"{tuple(q)} is not primitive (common factor > 1)")
    if 0 in q or sum(1 for v in q if v < 0) != 1:
        raise UnboundedPackingError(
            f"{tuple(q)} needs exactly one negative and no zero curvature")
    if not _has_two_even(q):
        raise ParityError(f"{tuple(q)} must have exactly two even curvatures")
    if not (q[0] < 0 < q[1] <= q[2] <= q[3]):
        raise NotRootError(f"{tuple(q)} is not sorted as (negative, ascending positives)")
    if q[0] + q[1] + q[2] < q[3]:
        raise NotRootError(f"{tuple(q)} is not a root quadruple; try reduce_to_root")
    return PackingDescriptor(q, name)


def parse_quadruple(text: str) -> Quadruple:
    """Parse ``"-1,2,2,3"`` or a preset name such as ``"bugeye"``."""
    key = text.strip().lower()
    if key in PRESETS:
        return PRESETS[key]
    parts = [p for p in key.replace(" ", "").split(",") if p]
    if len(parts) != 4:
        raise UsageError(f"expected four comma-separated integers or a preset, got {text!r}")
    try:
        return Quadruple(*(int(p) for p in parts))
    except ValueError:
        raise UsageError(f"non-integer curvature in {text!r}") from None


def packing_from_spec(text: str) -> PackingDescriptor:
    """Resolve a preset or comma list to a validated packing, reducing to the root."""
    key = text.strip().lower()
    q = parse_quadruple(text)
    root = reduce_to_root(q)
    return validate_packing(root, key if key in PRESETS else None)


def bugeye() -> PackingDescriptor:
    return validate_packing(PRESETS["bugeye"], "bugeye")


def coins() -> PackingDescriptor:
    return validate_packing(PRESETS["coins"], "coins")
