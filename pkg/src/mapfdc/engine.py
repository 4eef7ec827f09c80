from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Tuple

from . import _engine_py
from .errors import PreconditionError
from .graphs import Graph
from .model import Placement

DEFAULT_STATE_GUARD = 50_000_000

try:
    from . import _engine_c
except ImportError:  # pragma: no cover - depends on build environment
    _engine_c = None

_FORCED = os.environ.get("MAPFDC_ENGINE", "").strip().lower()
if _FORCED == "py":
    _engine_c = None
elif _FORCED == "c" and _engine_c is None:
    raise ImportError("MAPFDC_ENGINE=c but the compiled engine is unavailable")


def active_engine() -> str:
    """Name of the engine the selector will use: 'c' or 'py'."""
    return "py" if _engine_c is None else "c"


@dataclass(frozen=True)
class BfsResult:
    status: str
    path: Optional[Tuple[Placement, ...]]
    states: int


@lru_cache(maxsize=128)
def _closed_neighborhood_csr(graph: Graph) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    indptr = [0]
    data: List[int] = []
    for v in range(graph.n):
        data.extend(graph.closed_neighbors(v))
        indptr.append(len(data))
    return tuple(indptr), tuple(data)


def joint_bfs(
    graph: Graph,
    starts: Placement,
    targets: Placement,
    occupancy_vertices=None,
    min_occupancy: int = 0,
    depth_cap: Optional[int] = None,
    state_guard: int = DEFAULT_STATE_GUARD,
) -> BfsResult:
    """Breadth-first search over joint placements under simultaneous-move,
    per-turn-injective, swap-free semantics.

    occupancy_vertices/min_occupancy: every placement other than the start
    and target must keep at least min_occupancy agents on the given
    vertices. The returned path starts with the start placement.
    """
    if len(starts) != len(targets):
        raise PreconditionError("start and target maps differ in length")
    if depth_cap is not None and depth_cap < 0:
        raise PreconditionError("depth cap must be non-negative")
    if state_guard <= 0:
        raise PreconditionError("state guard must be positive")
    mask: Optional[bytes] = None
    if min_occupancy > 0:
        row = bytearray(graph.n)
        for v in occupancy_vertices or ():
            row[v] = 1
        mask = bytes(row)
    indptr, data = _closed_neighborhood_csr(graph)
    impl = _engine_py if _engine_c is None or graph.n > 65535 else _engine_c
    status, path, states = impl.run_bfs(
        graph.n,
        indptr,
        data,
        tuple(starts),
        tuple(targets),
        mask,
        min_occupancy,
        depth_cap,
        state_guard,
    )
    return BfsResult(status, tuple(path) if path is not None else None, states)
