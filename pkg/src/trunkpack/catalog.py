"""Box catalog and axis-aligned orientation handling.

Boxes are rigid cuboids identified by a single letter.  All dimensions are
integer millimetres.  An orientation is one of the six axis permutations,
written as a three-letter string: the i-th letter names the world axis that
receives the box's i-th dimension, so ("yxz", dims=(610, 483, 229)) stands
the box with 483 mm along x, 610 mm along y and 229 mm along z.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

# canonical orientation order, used everywhere a deterministic sweep is needed
ORIENTATIONS = ("zyx", "zxy", "yzx", "xzy", "yxz", "xyz")

_AXIS_INDEX = {"x": 0, "y": 1, "z": 2}


@dataclass(frozen=True)
class BoxType:
    """One catalog entry: a cuboid type with a per-pattern count limit."""

    id: str
    dims_mm: tuple
    max_count: int
    phase: str = "primary"

    def volume_mm3(self) -> int:
        a, b, c = self.dims_mm
        return a * b * c

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "dims_mm": list(self.dims_mm),
            "max_count": self.max_count,
            "phase": self.phase,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "BoxType":
        dims = tuple(int(v) for v in obj["dims_mm"])
        if len(dims) != 3 or any(v <= 0 for v in dims):
            raise ValueError(f"box {obj.get('id')!r}: dims_mm must be 3 positive ints")
        return cls(
            id=str(obj["id"]),
            dims_mm=dims,
            max_count=int(obj["max_count"]),
            phase=str(obj.get("phase", "primary")),
        )


# luggage set: six everyday cases packed in the main phase, a golf bag and a
# small parts box reserved for dedicated phases
FULL_CATALOG = (
    BoxType("A", (610, 483, 229), 4, "primary"),
    BoxType("B", (457, 330, 165), 4, "primary"),
    BoxType("C", (660, 406, 229), 2, "primary"),
    BoxType("D", (533, 457, 216), 2, "primary"),
    BoxType("E", (381, 229, 203), 2, "primary"),
    BoxType("F", (533, 356, 178), 2, "primary"),
    BoxType("G", (1143, 204, 204), 2, "golf"),
    BoxType("H", (325, 152, 114), 20, "hbox"),
)


def builtin_catalog() -> list:
    """The complete built-in luggage set (all phases, A through H)."""
    return list(FULL_CATALOG)


def default_catalog() -> list:
    """The boxes packed by default: the primary phase of the full catalog."""
    return [b for b in FULL_CATALOG if b.phase == "primary"]


def load_catalog(path: str) -> list:
    """Read a catalog override: a JSON array of box objects
    ({id, dims_mm, max_count, phase})."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, list) or not data:
        raise ValueError("catalog file must be a non-empty JSON array")
    boxes = [BoxType.from_dict(obj) for obj in data]
    ids = [b.id for b in boxes]
    if len(set(ids)) != len(ids):
        raise ValueError("catalog ids must be unique")
    return boxes


def save_catalog(boxes: Iterable[BoxType], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump([b.as_dict() for b in boxes], fh, indent=2, sort_keys=True)
        fh.write("\n")


def oriented_extents(dims: Sequence, orientation: str) -> tuple:
    """Extent along each world axis after applying the orientation."""
    if len(orientation) != 3 or set(orientation) != {"x", "y", "z"}:
        raise ValueError(f"bad orientation {orientation!r}")
    out = [None, None, None]
    for i, axis in enumerate(orientation):
        out[_AXIS_INDEX[axis]] = dims[i]
    return tuple(out)


def distinct_orientations(box: BoxType, allowed: Optional[Sequence[str]] = None) -> list:
    """Orientations of the box with pairwise distinct world extents.

    Equal box dimensions make some of the six permutations geometrically
    identical; only the first representative in canonical order is kept.
    """
    names = ORIENTATIONS if allowed is None else [o for o in ORIENTATIONS if o in allowed]
    seen = set()
    out = []
    for name in names:
        ext = oriented_extents(box.dims_mm, name)
        if ext not in seen:
            seen.add(ext)
            out.append(name)
    return out


def half_extents(box: BoxType, orientation: str) -> tuple:
    """Half of each oriented extent, exact."""
    return tuple(Fraction(e, 2) for e in oriented_extents(box.dims_mm, orientation))


def catalog_volume_bound_mm3(boxes: Iterable[BoxType]) -> int:
    """Total volume if every box of every type were placed."""
    return sum(b.volume_mm3() * b.max_count for b in boxes)
