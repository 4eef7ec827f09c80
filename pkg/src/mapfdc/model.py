from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import ParseError, PreconditionError
from .graphs import Graph

Placement = Tuple[int, ...]


def _check_placement(graph: Graph, pl: Sequence[int], what: str) -> None:
    for v in pl:
        if not (0 <= v < graph.n):
            raise PreconditionError(f"{what} vertex {v} out of range")
    if len(set(pl)) != len(pl):
        raise PreconditionError(f"{what} is not injective")


@dataclass(frozen=True)
class Instance:
    """MAPF instance: agents 0..|A|-1 with injective start and target maps."""

    graph: Graph
    starts: Placement
    targets: Placement
    makespan_limit: Optional[int] = None

    def __post_init__(self) -> None:
        if len(self.starts) != len(self.targets):
            raise PreconditionError("start and target maps differ in length")
        _check_placement(self.graph, self.starts, "start")
        _check_placement(self.graph, self.targets, "target")
        if self.makespan_limit is not None and self.makespan_limit < 0:
            raise PreconditionError("makespan limit must be non-negative")

    @property
    def n_agents(self) -> int:
        return len(self.starts)

    @property
    def agents(self) -> range:
        return range(len(self.starts))


@dataclass(frozen=True)
class Schedule:
    """Placements s_1..s_m; turn 0 is the instance's start map."""

    placements: Tuple[Placement, ...]

    @property
    def makespan(self) -> int:
        return len(self.placements)

    def final(self, starts: Placement) -> Placement:
        return self.placements[-1] if self.placements else starts


@dataclass(frozen=True)
class ColoredGroup:
    group_id: int
    starts: Tuple[int, ...]
    targets: Tuple[int, ...]


@dataclass(frozen=True)
class ColoredInstance:
    """MAPF with anonymous targets inside each group: a group's agents must
    collectively end on the group's target set. Agent ids are assigned
    group by group, within a group in start-list order."""

    graph: Graph
    groups: Tuple[ColoredGroup, ...]
    makespan_limit: Optional[int] = None

    def __post_init__(self) -> None:
        for g in self.groups:
            if len(g.starts) != len(g.targets):
                raise PreconditionError(
                    f"group {g.group_id}: start/target counts differ"
                )
        _check_placement(self.graph, self.all_starts, "start")
        _check_placement(self.graph, self.all_targets, "target")

    @property
    def all_starts(self) -> Placement:
        return tuple(v for g in self.groups for v in g.starts)

    @property
    def all_targets(self) -> Placement:
        return tuple(v for g in self.groups for v in g.targets)

    @property
    def n_agents(self) -> int:
        return sum(len(g.starts) for g in self.groups)

    def group_of(self) -> Tuple[int, ...]:
        """Group index (0-based position in `groups`) per agent id."""
        out: List[int] = []
        for idx, g in enumerate(self.groups):
            out.extend([idx] * len(g.starts))
        return tuple(out)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    rule: Optional[str] = None
    turn: Optional[int] = None
    agents: Tuple[int, ...] = ()
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def detect_swaps(prev: Sequence[int], nxt: Sequence[int]) -> List[Tuple[int, int]]:
    """All unordered agent pairs {a, b} with nxt[a] = prev[b] and nxt[b] = prev[a].

    Placements must cover the same agents (equal length).
    """
    if len(prev) != len(nxt):
        raise PreconditionError("placements cover different agent sets")
    at_prev: Dict[int, int] = {v: a for a, v in enumerate(prev)}
    out: List[Tuple[int, int]] = []
    for a, v in enumerate(nxt):
        b = at_prev.get(v)
        if b is None or b == a:
            continue
        if nxt[b] == prev[a] and a < b:
            out.append((a, b))
    return out


def _validate_turns(
    graph: Graph, starts: Placement, placements: Sequence[Placement]
) -> Optional[Verdict]:
    n = len(starts)
    prev = starts
    for turn, cur in enumerate(placements, start=1):
        if len(cur) != n:
            raise PreconditionError(f"turn {turn}: placement covers {len(cur)} agents, expected {n}")
        for a, v in enumerate(cur):
            if not (0 <= v < graph.n):
                raise PreconditionError(f"turn {turn}: vertex {v} out of range")
            if v != prev[a] and not graph.has_edge(prev[a], v):
                return Verdict(
                    False, "neighborhood", turn, (a,),
                    f"agent {a} moves {prev[a]} -> {v} without an edge",
                )
        if len(set(cur)) != n:
            seen: Dict[int, int] = {}
            clash: Tuple[int, ...] = ()
            for a, v in enumerate(cur):
                if v in seen:
                    clash = (seen[v], a)
                    break
                seen[v] = a
            return Verdict(
                False, "injective", turn, clash,
                f"agents {clash[0]} and {clash[1]} share vertex {cur[clash[1]]}",
            )
        swaps = detect_swaps(prev, cur)
        if swaps:
            a, b = swaps[0]
            return Verdict(
                False, "swap", turn, (a, b),
                f"agents {a} and {b} exchange vertices {prev[a]} and {prev[b]}",
            )
        prev = cur
    return None


def validate_schedule(inst: Instance, sched: Schedule) -> Verdict:
    """Feasibility check: closed-neighborhood moves, per-turn injectivity,
    no swaps (turn 0 included), final placement = targets, makespan limit."""
    bad = _validate_turns(inst.graph, inst.starts, sched.placements)
    if bad is not None:
        return bad
    final = sched.final(inst.starts)
    m = sched.makespan
    for a in range(inst.n_agents):
        if final[a] != inst.targets[a]:
            return Verdict(
                False, "target", m, (a,),
                f"agent {a} ends on {final[a]}, target is {inst.targets[a]}",
            )
    if inst.makespan_limit is not None and m > inst.makespan_limit:
        return Verdict(
            False, "limit", m, (),
            f"makespan {m} exceeds limit {inst.makespan_limit}",
        )
    return Verdict(True)


def validate_colored_schedule(inst: ColoredInstance, sched: Schedule) -> Verdict:
    starts = inst.all_starts
    bad = _validate_turns(inst.graph, starts, sched.placements)
    if bad is not None:
        return bad
    final = sched.final(starts)
    m = sched.makespan
    offset = 0
    for idx, g in enumerate(inst.groups):
        got = set(final[offset : offset + len(g.starts)])
        want = set(g.targets)
        if got != want:
            stray = sorted(got - want)
            return Verdict(
                False, "target", m, (),
                f"group {g.group_id} ends on {sorted(got)}, target set is "
                f"{sorted(want)} (off-target: {stray})",
            )
        offset += len(g.starts)
    if inst.makespan_limit is not None and m > inst.makespan_limit:
        return Verdict(
            False, "limit", m, (),
            f"makespan {m} exceeds limit {inst.makespan_limit}",
        )
    return Verdict(True)


# --- file formats ---------------------------------------------------------


def _content_lines(text: str) -> List[Tuple[int, List[str]]]:
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            out.append((no, body.split()))
    return out


def _int_tok(no: int, tok: str, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(no, f"expected integer {what}, got {tok!r}") from None


def _parse_graph_lines(
    lines: List[Tuple[int, List[str]]], header: str
) -> Tuple[int, List[Tuple[int, int]], List[Tuple[int, List[str]]]]:
    """Common head of both instance formats: header, vertices, edges.
    Returns (n, edges, remaining directive lines)."""
    if not lines:
        raise ParseError(1, "empty file")
    no, toks = lines[0]
    if toks != [header, "1"]:
        raise ParseError(no, f"expected header '{header} 1'")
    n: Optional[int] = None
    edges: List[Tuple[int, int]] = []
    seen_edges = set()
    rest: List[Tuple[int, List[str]]] = []
    for no, toks in lines[1:]:
        key = toks[0]
        if key == "vertices":
            if n is not None:
                raise ParseError(no, "duplicate vertices line")
            if len(toks) != 2:
                raise ParseError(no, "vertices takes one count")
            n = _int_tok(no, toks[1], "vertex count")
            if n < 0:
                raise ParseError(no, "vertex count must be non-negative")
        elif key == "edge":
            if n is None:
                raise ParseError(no, "edge before vertices line")
            if len(toks) != 3:
                raise ParseError(no, "edge takes two endpoints")
            u = _int_tok(no, toks[1], "endpoint")
            v = _int_tok(no, toks[2], "endpoint")
            if u == v:
                raise ParseError(no, f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(no, f"unknown vertex id in edge {u} {v}")
            e = (u, v) if u < v else (v, u)
            if e in seen_edges:
                raise ParseError(no, f"duplicate edge {u} {v}")
            seen_edges.add(e)
            edges.append(e)
        else:
            rest.append((no, toks))
    if n is None:
        raise ParseError(lines[-1][0], "missing vertices line")
    return n, edges, rest


def parse_instance(text: str) -> Instance:
    lines = _content_lines(text)
    n, edges, rest = _parse_graph_lines(lines, "mapf")
    starts: List[int] = []
    targets: List[int] = []
    seen_s: Dict[int, int] = {}
    seen_t: Dict[int, int] = {}
    limit: Optional[int] = None
    for no, toks in rest:
        key = toks[0]
        if key == "agent":
            if len(toks) != 3:
                raise ParseError(no, "agent takes start and target")
            s = _int_tok(no, toks[1], "start")
            t = _int_tok(no, toks[2], "target")
            for v in (s, t):
                if not (0 <= v < n):
                    raise ParseError(no, f"unknown vertex id {v}")
            if s in seen_s:
                raise ParseError(no, f"duplicate start vertex {s}")
            if t in seen_t:
                raise ParseError(no, f"duplicate target vertex {t}")
            seen_s[s] = len(starts)
            seen_t[t] = len(targets)
            starts.append(s)
            targets.append(t)
        elif key == "limit":
            if limit is not None:
                raise ParseError(no, "duplicate limit line")
            if len(toks) != 2:
                raise ParseError(no, "limit takes one value")
            limit = _int_tok(no, toks[1], "limit")
            if limit < 0:
                raise ParseError(no, "limit must be non-negative")
        else:
            raise ParseError(no, f"unknown directive {key!r}")
    if not starts:
        raise ParseError(lines[-1][0], "instance has no agents")
    return Instance(Graph(n, edges), tuple(starts), tuple(targets), limit)


def serialize_instance(inst: Instance) -> str:
    out = ["mapf 1", f"vertices {inst.graph.n}"]
    out.extend(f"edge {u} {v}" for u, v in inst.graph.sorted_edges())
    out.extend(
        f"agent {s} {t}" for s, t in zip(inst.starts, inst.targets)
    )
    if inst.makespan_limit is not None:
        out.append(f"limit {inst.makespan_limit}")
    return "\n".join(out) + "\n"


def parse_colored_instance(text: str) -> ColoredInstance:
    lines = _content_lines(text)
    n, edges, rest = _parse_graph_lines(lines, "cmapf")
    groups: List[ColoredGroup] = []
    limit: Optional[int] = None
    i = 0
    while i < len(rest):
        no, toks = rest[i]
        key = toks[0]
        if key == "limit":
            if limit is not None:
                raise ParseError(no, "duplicate limit line")
            if len(toks) != 2:
                raise ParseError(no, "limit takes one value")
            limit = _int_tok(no, toks[1], "limit")
            i += 1
            continue
        if key != "group":
            raise ParseError(no, f"unknown directive {key!r}")
        if len(toks) != 2:
            raise ParseError(no, "group takes one id")
        gid = _int_tok(no, toks[1], "group id")
        if gid != len(groups) + 1:
            raise ParseError(no, f"group ids must be sequential; expected {len(groups) + 1}")
        if i + 1 >= len(rest) or rest[i + 1][1][0] != "starts":
            raise ParseError(no, f"group {gid} missing starts line")
        if i + 2 >= len(rest) or rest[i + 2][1][0] != "targets":
            raise ParseError(no, f"group {gid} missing targets line")
        sno, stoks = rest[i + 1]
        tno, ttoks = rest[i + 2]
        svs = [_int_tok(sno, x, "start") for x in stoks[1:]]
        tvs = [_int_tok(tno, x, "target") for x in ttoks[1:]]
        for lno, vs in ((sno, svs), (tno, tvs)):
            for v in vs:
                if not (0 <= v < n):
                    raise ParseError(lno, f"unknown vertex id {v}")
        if len(svs) != len(tvs):
            raise ParseError(tno, f"group {gid}: {len(svs)} starts but {len(tvs)} targets")
        groups.append(ColoredGroup(gid, tuple(svs), tuple(tvs)))
        i += 3
    if not groups:
        raise ParseError(lines[-1][0], "colored instance has no groups")
    try:
        return ColoredInstance(Graph(n, edges), tuple(groups), limit)
    except PreconditionError as exc:
        raise ParseError(lines[-1][0], str(exc)) from None


def serialize_colored_instance(inst: ColoredInstance) -> str:
    out = ["cmapf 1", f"vertices {inst.graph.n}"]
    out.extend(f"edge {u} {v}" for u, v in inst.graph.sorted_edges())
    for g in inst.groups:
        out.append(f"group {g.group_id}")
        out.append("starts " + " ".join(str(v) for v in g.starts))
        out.append("targets " + " ".join(str(v) for v in g.targets))
    if inst.makespan_limit is not None:
        out.append(f"limit {inst.makespan_limit}")
    return "\n".join(out) + "\n"


def parse_schedule(text: str, inst) -> Schedule:
    """Parse a schedule for the given instance (plain or colored): per-turn
    vertex rows in agent order."""
    n_agents = inst.n_agents
    n_verts = inst.graph.n
    lines = _content_lines(text)
    if not lines:
        raise ParseError(1, "empty schedule file")
    no, toks = lines[0]
    if toks[0] != "schedule" or len(toks) != 2:
        raise ParseError(no, "expected header 'schedule <m>'")
    m = _int_tok(no, toks[1], "makespan")
    if m < 0:
        raise ParseError(no, "makespan must be non-negative")
    rows = lines[1:]
    if len(rows) != m:
        raise ParseError(
            rows[-1][0] if rows else no,
            f"expected {m} turn lines, found {len(rows)}",
        )
    placements: List[Placement] = []
    for idx, (no, toks) in enumerate(rows, start=1):
        if toks[0] != "turn":
            raise ParseError(no, "expected turn line")
        if len(toks) < 2 or not toks[1].endswith(":"):
            raise ParseError(no, "expected 'turn <i>:'")
        i = _int_tok(no, toks[1][:-1], "turn index")
        if i != idx:
            raise ParseError(no, f"turn index {i} out of order, expected {idx}")
        vs = [_int_tok(no, x, "vertex") for x in toks[2:]]
        if len(vs) != n_agents:
            raise ParseError(no, f"turn covers {len(vs)} agents, expected {n_agents}")
        for v in vs:
            if not (0 <= v < n_verts):
                raise ParseError(no, f"unknown vertex id {v}")
        placements.append(tuple(vs))
    return Schedule(tuple(placements))


def serialize_schedule(sched: Schedule) -> str:
    out = [f"schedule {sched.makespan}"]
    for i, pl in enumerate(sched.placements, start=1):
        out.append(f"turn {i}: " + " ".join(str(v) for v in pl))
    return "\n".join(out) + "\n"
