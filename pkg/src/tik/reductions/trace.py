"""Reduction traces: everything needed to move witnesses across a reduction."""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from typing import Any

import numpy as np

from ..errors import InputError
from ..field import FieldSpec


@dataclass(frozen=True, eq=False)
class ReductionTrace:
    rid: str
    field: FieldSpec
    input_dims: tuple[int, ...]
    output_dims: tuple[int, ...]
    layout: dict[str, Any] = dc_field(default_factory=dict)

    def __getitem__(self, key: str) -> Any:
        return self.layout[key]

    def to_dict(self) -> dict:
        return {
            "reduction": self.rid,
            "field": self.field.to_dict(),
            "input_dims": list(self.input_dims),
            "output_dims": list(self.output_dims),
            "layout": _encode(self.layout, self.field),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ReductionTrace":
        try:
            F = FieldSpec.from_dict(d["field"])
            return cls(d["reduction"], F, tuple(d["input_dims"]), tuple(d["output_dims"]),
                       _decode(d.get("layout", {}), F))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed trace document: {exc}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


def _encode(obj: Any, F: FieldSpec) -> Any:
    if isinstance(obj, np.ndarray):
        if obj.dtype == bool:
            return {"bool_matrix": obj.astype(int).tolist()}
        return {"matrix": [[F.render(v) for v in row] for row in np.atleast_2d(obj)],
                "shape": list(obj.shape)}
    if isinstance(obj, dict):
        return {str(k): _encode(v, F) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode(v, F) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, ReductionTrace):
        return {"trace": obj.to_dict()}
    return obj


def _decode(obj: Any, F: FieldSpec) -> Any:
    if isinstance(obj, dict):
        if "matrix" in obj and "shape" in obj:
            M = F.array([[F.parse(v) for v in row] for row in obj["matrix"]])
            return M.reshape(obj["shape"])
        if "bool_matrix" in obj:
            return np.array(obj["bool_matrix"], dtype=bool)
        if "trace" in obj and len(obj) == 1:
            return ReductionTrace.from_dict(obj["trace"])
        return {k: _decode(v, F) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_decode(v, F) for v in obj]
    return obj
