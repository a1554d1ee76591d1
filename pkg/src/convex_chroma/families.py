"""Families of homothets: a body plus a placement list, with JSON round-trip."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .geometry import ConvexBody, GeometryError, Placement


@dataclass(frozen=True)
class Family:
    """A finite family of homothets of one body.

    All placements share the body's dimension.  If every scale is equal the
    family is a translate family.
    """

    body: ConvexBody
    placements: tuple[Placement, ...]
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        dim = self.body.dimension
        for p in self.placements:
            if len(p.center) != dim:
                raise GeometryError(
                    f"placement dimension {len(p.center)} != body dimension {dim}"
                )

    def __len__(self) -> int:
        return len(self.placements)

    @property
    def is_translate_family(self) -> bool:
        scales = {p.scale for p in self.placements}
        return len(scales) <= 1

    def centers(self) -> np.ndarray:
        if not self.placements:
            return np.zeros((0, self.body.dimension))
        return np.array([p.center for p in self.placements], dtype=float)

    def scales(self) -> np.ndarray:
        return np.array([p.scale for p in self.placements], dtype=float)

    def to_json(self) -> dict:
        return {
            "body": self.body.to_json(),
            "placements": [
                {"center": list(p.center), "scale": p.scale} for p in self.placements
            ],
            "meta": dict(self.meta),
        }

    @staticmethod
    def from_json(obj: dict) -> "Family":
        body = ConvexBody.from_json(obj["body"])
        placements = tuple(
            Placement(center=tuple(p["center"]), scale=float(p.get("scale", 1.0)))
            for p in obj["placements"]
        )
        return Family(body=body, placements=placements, meta=dict(obj.get("meta", {})))


def translates(body: ConvexBody, centers: Sequence[Sequence[float]], meta: dict | None = None) -> Family:
    """Translate family of the body at the given centers (scale 1)."""
    return Family(
        body=body,
        placements=tuple(Placement(center=tuple(c)) for c in centers),
        meta=meta or {},
    )


def dumps_family(family: Family) -> str:
    return json.dumps(family.to_json(), sort_keys=True, indent=2) + "\n"


def save_family(family: Family, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_family(family))


def load_family(path) -> Family:
    with open(path) as fh:
        return Family.from_json(json.load(fh))


def family_digest(family: Family) -> str:
    """Stable sha256 digest of the canonical family JSON."""
    return hashlib.sha256(dumps_family(family).encode()).hexdigest()
