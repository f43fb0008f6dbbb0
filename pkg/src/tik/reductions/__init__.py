"""Instance reductions with witness transport and extraction.

Every reduction produces ``(output, trace)``. Witnesses move across a
reduction through the pair of traces of the two instances being compared,
since several constructions depend on the data (compression bases, arc
lists, quotient pivots).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..errors import InputError
from ..groups import WitnessTuple
from ..tensor import ActionKind
from . import compress, conj, graph, skew, system, vvw
from .trace import ReductionTrace


@dataclass(frozen=True)
class Reduction:
    rid: str
    source: ActionKind | None     # None when the input is not a 3-way array under a five-action
    target: ActionKind
    reduce: Callable
    transport: Callable
    extract: Callable


def _pathalg():
    from .. import pathalg
    return pathalg


REGISTRY: dict[str, Reduction] = {
    "graph3": Reduction("graph3", None, ActionKind.UUV, graph.graph_to_tensor, graph.transport, graph.extract),
    "classical2gl": Reduction("classical2gl", ActionKind.UVW, ActionKind.UVW, system.reduce_classical_to_gl,
                              system.classical_transport, system.classical_extract),
    "uvw2vvw": Reduction("uvw2vvw", ActionKind.UVW, ActionKind.UUV, skew.reduce, skew.transport, skew.extract),
    "compress": Reduction("compress", ActionKind.UVW, ActionKind.UVW, compress.reduce,
                          compress.transport, compress.extract),
    "uvw2conj": Reduction("uvw2conj", ActionKind.UVW, ActionKind.UUstarV, conj.reduce, conj.transport, conj.extract),
    "vvw2alg": Reduction("vvw2alg", ActionKind.UUV, ActionKind.UUUstar, vvw.reduce_algebra,
                         vvw.transport, vvw.extract),
    "vvw2cubic": Reduction("vvw2cubic", ActionKind.UUV, ActionKind.UUU, vvw.reduce_cubic,
                           vvw.transport, vvw.extract),
    "d2three": Reduction("d2three", ActionKind.GENERAL, ActionKind.UUUstar,
                         lambda f: _pathalg().reduce_d_to_3(f),
                         lambda s, t, w: _pathalg().transport(s, t, w),
                         lambda s, t, w: _pathalg().extract(s, t, w)),
    "plainify": Reduction("plainify", None, ActionKind.UVW, system.fgs_plainify,
                          system.transport, system.extract),
}


def get(rid: str) -> Reduction:
    try:
        return REGISTRY[rid]
    except KeyError:
        raise InputError(f"unknown reduction id {rid!r}; known: {', '.join(REGISTRY)}") from None


def _check_pair(src: ReductionTrace, tgt: ReductionTrace) -> Reduction:
    if src.rid != tgt.rid:
        raise InputError(f"traces come from different reductions ({src.rid}, {tgt.rid})")
    return get(src.rid)


def transport_witness(src: ReductionTrace, tgt: ReductionTrace, w: WitnessTuple) -> WitnessTuple:
    return _check_pair(src, tgt).transport(src, tgt, w)


def extract_witness(src: ReductionTrace, tgt: ReductionTrace, w: WitnessTuple) -> WitnessTuple:
    return _check_pair(src, tgt).extract(src, tgt, w)


__all__ = ["REGISTRY", "Reduction", "ReductionTrace", "get", "transport_witness", "extract_witness"]
