from __future__ import annotations

"""Pure-Python joint-state BFS over simultaneous agent moves.

Mirrors the compiled engine in `_engine_c` move for move: successor states
are enumerated agent by agent in id order, each agent's options in ascending
vertex order, so both engines discover states in the same sequence and
return identical schedules.
"""

from typing import Dict, List, Optional, Tuple

STATUS_FOUND = "found"
STATUS_ABSENT = "absent"
STATUS_RESOURCE = "resource"


def run_bfs(
    n_verts: int,
    nbr_indptr: List[int],
    nbr_data: List[int],
    starts: Tuple[int, ...],
    targets: Tuple[int, ...],
    occupancy_mask: Optional[bytes],
    min_occupancy: int,
    depth_cap: Optional[int],
    state_guard: int,
) -> Tuple[str, Optional[List[Tuple[int, ...]]], int]:
    """Shortest swap-free joint schedule from starts to targets.

    nbr_indptr/nbr_data: CSR closed neighborhoods, each row sorted ascending.
    occupancy_mask[v] = 1 marks vertices counted toward min_occupancy; every
    intermediate state (neither start nor target) must place at least
    min_occupancy agents on marked vertices.
    Returns (status, path or None, states discovered). The path includes the
    start placement as its first entry.
    """
    n_agents = len(starts)
    if starts == targets:
        return (STATUS_FOUND, [starts], 1)

    visited: Dict[Tuple[int, ...], int] = {starts: 0}
    states: List[Tuple[int, ...]] = [starts]
    parents: List[int] = [-1]
    frontier: List[int] = [0]
    depth = 0

    prev_occ = [-1] * n_verts
    occupied = bytearray(n_verts)
    new = [0] * n_agents
    choice = [0] * n_agents

    while frontier:
        if depth_cap is not None and depth >= depth_cap:
            return (STATUS_ABSENT, None, len(states))
        depth += 1
        next_frontier: List[int] = []
        for sid in frontier:
            prev = states[sid]
            for a in range(n_agents):
                prev_occ[prev[a]] = a
            hit = -1
            level = 0
            choice[0] = 0
            while level >= 0:
                base = nbr_indptr[prev[level]]
                end = nbr_indptr[prev[level] + 1]
                i = choice[level]
                if base + i >= end:
                    level -= 1
                    if level >= 0:
                        occupied[new[level]] = 0
                        choice[level] += 1
                    continue
                v = nbr_data[base + i]
                if occupied[v]:
                    choice[level] += 1
                    continue
                holder = prev_occ[v]
                if 0 <= holder < level and new[holder] == prev[level]:
                    choice[level] += 1
                    continue
                new[level] = v
                if level + 1 == n_agents:
                    key = tuple(new)
                    accept = True
                    if min_occupancy > 0 and key != targets:
                        cnt = 0
                        for w in new:
                            if occupancy_mask[w]:
                                cnt += 1
                        accept = cnt >= min_occupancy
                    if accept and key not in visited:
                        if len(states) >= state_guard:
                            for a in range(n_agents):
                                prev_occ[prev[a]] = -1
                            return (STATUS_RESOURCE, None, len(states))
                        visited[key] = len(states)
                        states.append(key)
                        parents.append(sid)
                        if key == targets:
                            hit = len(states) - 1
                            break
                        next_frontier.append(len(states) - 1)
                    choice[level] += 1
                else:
                    occupied[v] = 1
                    level += 1
                    choice[level] = 0
            for a in range(n_agents):
                prev_occ[prev[a]] = -1
            if hit >= 0:
                for j in range(n_agents - 1):
                    occupied[new[j]] = 0
                path: List[Tuple[int, ...]] = []
                idx = hit
                while idx >= 0:
                    path.append(states[idx])
                    idx = parents[idx]
                path.reverse()
                return (STATUS_FOUND, path, len(states))
        frontier = next_frontier
    return (STATUS_ABSENT, None, len(states))
