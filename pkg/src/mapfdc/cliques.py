from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import PreconditionError
from .graphs import Graph
from .model import Instance, Placement, Schedule
from . import oracle


@dataclass(frozen=True)
class SwappingPairSet:
    """Agent pairs that would have to exchange vertices in a single turn:
    each pair (a, b) has start(a) = target(b) and start(b) = target(a)."""

    pairs: Tuple[Tuple[int, int], ...]

    @property
    def p(self) -> int:
        return len(self.pairs)


def find_swapping_pairs(starts: Sequence[int], targets: Sequence[int]) -> SwappingPairSet:
    at_start: Dict[int, int] = {v: a for a, v in enumerate(starts)}
    out: List[Tuple[int, int]] = []
    for a, v in enumerate(targets):
        b = at_start.get(v)
        if b is None or b == a:
            continue
        if a < b and targets[b] == starts[a]:
            out.append((a, b))
    return SwappingPairSet(tuple(out))


def _one_turn(targets: Placement) -> Tuple[int, Schedule]:
    return 1, Schedule((targets,))


def _case_many_pairs(starts: Placement, pairs: Tuple[Tuple[int, int], ...]) -> Placement:
    """Two or more swapping pairs: rotate the betas one pair onward, with the
    last alpha filling the gap, so every blocked exchange is broken at once."""
    alphas = [a for a, _ in pairs]
    betas = [b for _, b in pairs]
    p = len(pairs)
    mid = list(starts)
    mid[alphas[p - 1]] = starts[betas[0]]
    for i in range(p - 1):
        mid[betas[i]] = starts[betas[i + 1]]
    mid[betas[p - 1]] = starts[alphas[p - 1]]
    return tuple(mid)


def _case_one_pair(inst: Instance, pair: Tuple[int, int]) -> Placement:
    """A single swapping pair. With a free vertex the alpha steps aside;
    otherwise two further agents, both settled or both displaced, join a
    three-cycle that breaks the exchange."""
    starts, targets = inst.starts, inst.targets
    a1, b1 = pair
    used = set(starts)
    if len(starts) < inst.graph.n:
        spare = min(v for v in range(inst.graph.n) if v not in used)
        mid = list(starts)
        mid[a1] = spare
        return tuple(mid)
    others = [a for a in range(len(starts)) if a != a1 and a != b1]
    home = [a for a in others if starts[a] == targets[a]]
    away = [a for a in others if starts[a] != targets[a]]
    cand_home = tuple(home[:2]) if len(home) >= 2 else None
    cand_away = tuple(away[:2]) if len(away) >= 2 else None
    if cand_home is None and cand_away is None:
        raise AssertionError("no helper pair among the remaining agents")
    use_home = cand_home is not None and (cand_away is None or cand_home < cand_away)
    mid = list(starts)
    if use_home:
        a0, b0 = cand_home
        mid[a1] = starts[a0]
        mid[a0] = starts[b0]
        mid[b0] = starts[a1]
    else:
        a0, b0 = cand_away
        if targets[a0] == starts[b0]:
            a0, b0 = b0, a0
        mid[a1] = starts[a0]
        mid[b1] = starts[a1]
        mid[a0] = starts[b1]
    return tuple(mid)


def solve_clique(inst: Instance) -> Optional[Tuple[int, Schedule]]:
    """Optimal schedule on a complete graph.

    With at least four vertices the answer is direct: makespan 0 when every
    agent starts on its target, 1 when no pair of agents must exchange
    vertices, and 2 otherwise. Smaller cliques can be infeasible and are
    decided by exhaustive search.
    """
    if not inst.graph.is_complete():
        raise PreconditionError("graph is not complete")
    if inst.starts == inst.targets:
        return 0, Schedule(())
    if inst.graph.n < 4:
        return oracle.optimal_schedule(inst)
    pairs = find_swapping_pairs(inst.starts, inst.targets)
    if pairs.p == 0:
        result = _one_turn(inst.targets)
    elif pairs.p >= 2:
        result = 2, Schedule((_case_many_pairs(inst.starts, pairs.pairs), inst.targets))
    else:
        result = 2, Schedule((_case_one_pair(inst, pairs.pairs[0]), inst.targets))
    if inst.makespan_limit is not None and result[0] > inst.makespan_limit:
        return None
    return result


def solve_clique_anonymous(
    graph: Graph,
    named: Mapping[int, Tuple[int, int]],
    anon_starts: Sequence[int],
    anon_targets: Sequence[int],
) -> Schedule:
    """Clique schedule where only some agents have fixed targets.

    `named` maps an agent key to its (start, target); anonymous agents may
    end on any vertex of `anon_targets`. Returned placements list the named
    agents first in ascending key order, then one anonymous agent per start
    vertex in ascending start order; anonymous starts are matched to targets
    in increasing vertex order, which on a clique costs nothing.
    """
    if not graph.is_complete():
        raise PreconditionError("graph is not complete")
    if graph.n < 4:
        raise PreconditionError("anonymous clique solving needs at least 4 vertices")
    if len(anon_starts) != len(anon_targets):
        raise PreconditionError("anonymous start/target counts differ")
    keys = sorted(named)
    starts = tuple(named[k][0] for k in keys) + tuple(sorted(anon_starts))
    targets = tuple(named[k][1] for k in keys) + tuple(sorted(anon_targets))
    result = solve_clique(Instance(graph, starts, targets))
    assert result is not None
    return result[1]
