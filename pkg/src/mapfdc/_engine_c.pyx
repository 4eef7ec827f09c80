# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled joint-state BFS over simultaneous agent moves.

Behavioural twin of `_engine_py.run_bfs`: identical enumeration order,
identical results. States are keyed as packed uint16 vertex rows, which
caps the engine at 65535 vertices; the selector in `engine` falls back to
the pure implementation above that size.
"""

from cpython.bytes cimport PyBytes_FromStringAndSize
from libc.stdlib cimport free, malloc

STATUS_FOUND = "found"
STATUS_ABSENT = "absent"
STATUS_RESOURCE = "resource"

MAX_VERTICES = 65535


def run_bfs(
    n_verts,
    nbr_indptr,
    nbr_data,
    starts,
    targets,
    occupancy_mask,
    min_occupancy,
    depth_cap,
    state_guard,
):
    cdef int nv = n_verts
    cdef int na = len(starts)
    cdef int kmin = min_occupancy
    cdef long guard = state_guard
    cdef long cap = -1 if depth_cap is None else depth_cap
    cdef int ne = len(nbr_data)
    cdef int* indptr = NULL
    cdef int* data = NULL
    cdef unsigned short* start_row = NULL
    cdef unsigned short* target_row = NULL
    cdef unsigned short* new_row = NULL
    cdef int* choice = NULL
    cdef int* prev_occ = NULL
    cdef char* occupied = NULL
    cdef char* mask = NULL
    cdef int i, v, sid, level, base, end, holder, cnt, hit, j, idx
    cdef long depth = 0
    cdef long n_states = 1
    cdef const unsigned short* prev
    cdef const unsigned short* row
    cdef bint accept, is_target

    if nv > MAX_VERTICES:
        raise ValueError("vertex count exceeds compiled engine limit")
    if tuple(starts) == tuple(targets):
        return (STATUS_FOUND, [tuple(starts)], 1)

    indptr = <int*> malloc((nv + 1) * sizeof(int))
    data = <int*> malloc((ne if ne else 1) * sizeof(int))
    start_row = <unsigned short*> malloc(na * sizeof(unsigned short))
    target_row = <unsigned short*> malloc(na * sizeof(unsigned short))
    new_row = <unsigned short*> malloc(na * sizeof(unsigned short))
    choice = <int*> malloc(na * sizeof(int))
    prev_occ = <int*> malloc(nv * sizeof(int))
    occupied = <char*> malloc(nv)
    mask = <char*> malloc(nv)
    if (indptr == NULL or data == NULL or start_row == NULL or target_row == NULL
            or new_row == NULL or choice == NULL or prev_occ == NULL
            or occupied == NULL or mask == NULL):
        free(indptr); free(data); free(start_row); free(target_row)
        free(new_row); free(choice); free(prev_occ); free(occupied); free(mask)
        raise MemoryError()

    try:
        for i in range(nv + 1):
            indptr[i] = nbr_indptr[i]
        for i in range(ne):
            data[i] = nbr_data[i]
        for i in range(na):
            start_row[i] = starts[i]
            target_row[i] = targets[i]
        for i in range(nv):
            prev_occ[i] = -1
            occupied[i] = 0
            mask[i] = 0
        if occupancy_mask is not None:
            for i in range(nv):
                if occupancy_mask[i]:
                    mask[i] = 1

        start_key = PyBytes_FromStringAndSize(<char*> start_row, na * 2)

        visited = {start_key: 0}
        states = [start_key]
        parents = [-1]
        frontier = [0]

        while frontier:
            if cap >= 0 and depth >= cap:
                return (STATUS_ABSENT, None, n_states)
            depth += 1
            next_frontier = []
            for sid_obj in frontier:
                sid = sid_obj
                prev_bytes = <bytes> states[sid]
                prev = <const unsigned short*> (<const char*> prev_bytes)
                for i in range(na):
                    prev_occ[prev[i]] = i
                hit = -1
                level = 0
                choice[0] = 0
                while level >= 0:
                    base = indptr[prev[level]] + choice[level]
                    end = indptr[prev[level] + 1]
                    if base >= end:
                        level -= 1
                        if level >= 0:
                            occupied[new_row[level]] = 0
                            choice[level] += 1
                        continue
                    v = data[base]
                    if occupied[v]:
                        choice[level] += 1
                        continue
                    holder = prev_occ[v]
                    if 0 <= holder < level and new_row[holder] == prev[level]:
                        choice[level] += 1
                        continue
                    new_row[level] = v
                    if level + 1 == na:
                        accept = True
                        is_target = True
                        for j in range(na):
                            if new_row[j] != target_row[j]:
                                is_target = False
                                break
                        if kmin > 0 and not is_target:
                            cnt = 0
                            for j in range(na):
                                if mask[new_row[j]]:
                                    cnt += 1
                            accept = cnt >= kmin
                        if accept:
                            key = PyBytes_FromStringAndSize(<char*> new_row, na * 2)
                            if key not in visited:
                                if n_states >= guard:
                                    for i in range(na):
                                        prev_occ[prev[i]] = -1
                                    return (STATUS_RESOURCE, None, n_states)
                                visited[key] = n_states
                                states.append(key)
                                parents.append(sid)
                                n_states += 1
                                if is_target:
                                    hit = n_states - 1
                                    break
                                next_frontier.append(n_states - 1)
                        choice[level] += 1
                    else:
                        occupied[v] = 1
                        level += 1
                        choice[level] = 0
                for i in range(na):
                    prev_occ[prev[i]] = -1
                if hit >= 0:
                    for j in range(na - 1):
                        occupied[new_row[j]] = 0
                    path = []
                    idx = hit
                    while idx >= 0:
                        row_bytes = <bytes> states[idx]
                        row = <const unsigned short*> (<const char*> row_bytes)
                        path.append(tuple([row[i] for i in range(na)]))
                        idx = parents[idx]
                    path.reverse()
                    return (STATUS_FOUND, path, n_states)
            frontier = next_frontier
        return (STATUS_ABSENT, None, n_states)
    finally:
        free(indptr); free(data); free(start_row); free(target_row)
        free(new_row); free(choice); free(prev_occ); free(occupied); free(mask)
