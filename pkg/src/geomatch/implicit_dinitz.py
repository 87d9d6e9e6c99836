"""Maximum many-to-many matching by blocking-flow phases over an incidence
graph held implicitly as a biclique cover.

The conceptual network is s -> points -> ranges -> t plus, once flow exists,
reversal edges from ranges back to points.  A phase never materializes the
point-range edges: the level graph stores, per consecutive layer pair, the
cover parts touched by the frontier (each part restricted to the nodes that
actually sit on those two levels), and only feeder, backward, and draining
edges explicitly.  Expansion then inserts one middle vertex per stored part,
so a phase costs O(n + sigma) regardless of how dense the incidences are.

Between phases the flow support is pruned to a forest (rblct module), which
keeps the backward edge count linear in the node count.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cover import BicliqueCover
from .flow import INF, Flow, FlowNetwork, Matching, SupplyDemand
from .numeric import RATIONAL, InputError, InternalError, NumericContext
from .rblct import prune_to_forest

# build_level_graph returns Done (None) when no unmet demand is reachable,
# i.e. the current flow is maximum
Done = None


@dataclass
class PhaseState:
    """Flow accumulated so far plus the per-phase bookkeeping."""

    flow: dict  # (point, range) -> positive amount
    used: list  # shipped supply per point
    met: list  # received demand per range
    phase: int = 0
    t_levels: list = field(default_factory=list)


def new_phase_state(n_points: int, n_ranges: int) -> PhaseState:
    return PhaseState({}, [0] * n_points, [0] * n_ranges)


@dataclass
class LevelGraph:
    """One phase's layered residual graph.

    Point layer j sits at level 2j+1, range layer j at level 2j+2, t at
    ``t_level``.  ``forward[j]`` holds (part id, points, ranges) triples:
    the cover parts consumed by point layer j, each restricted to that
    layer on the point side and to first-reached ranges on the range side.
    ``backward[j]`` holds (range, point, capacity) flow-reversal edges from
    range layer j to point layer j+1.
    """

    point_layers: list
    range_layers: list
    forward: list
    backward: list
    feeders: list  # (point, unused supply) for layer 0
    drains: list  # (range, unmet demand) at level t_level - 1
    t_level: int

    @property
    def levels(self) -> list:
        out = [("s",)]
        for j, pts in enumerate(self.point_layers):
            out.append(tuple(pts))
            out.append(tuple(self.range_layers[j]))
        out.append(("t",))
        return out


def build_point_index(cover: BicliqueCover) -> list:
    """point index -> ids of the cover parts containing it."""
    index = [[] for _ in range(cover.left_count)]
    for i, (pts, _rngs) in enumerate(cover.parts):
        for p in pts:
            index[p].append(i)
    return index


def build_level_graph(
    f: PhaseState,
    c: BicliqueCover,
    sd: SupplyDemand,
    *,
    index: list | None = None,
    numeric: NumericContext = RATIONAL,
):
    """BFS layering of the residual graph, one layer set at a time.

    Cover parts are consumed whole the first time any of their points is
    leveled: every range of such a part lands on the very next level, so
    edges from later-leveled points through the same part can never advance
    the BFS distance and are dropped without loss.  Construction stops at
    the first range layer holding unmet demand (t is placed there) and
    reports Done if a layer empties out first.
    """
    pos = numeric.is_positive
    n_points = len(sd.supplies)
    n_ranges = len(sd.demands)
    if index is None:
        index = build_point_index(c)

    first = [p for p in range(n_points) if pos(sd.supplies[p] - f.used[p])]
    if not first:
        return Done
    p_done = bytearray(n_points)
    r_done = bytearray(n_ranges)
    i_done = bytearray(len(c.parts))
    for p in first:
        p_done[p] = 1

    support = {}  # range -> [(point, amount)], only built from nonzero flow
    for (p, r) in sorted(f.flow):
        support.setdefault(r, []).append((p, f.flow[(p, r)]))

    point_layers = [first]
    range_layers = []
    forward = []
    backward = []
    frontier, fset = first, set(first)

    while True:
        touched = []
        for p in frontier:
            for i in index[p]:
                if not i_done[i]:
                    i_done[i] = 1
                    touched.append(i)
        # all parts see the same not-yet-leveled snapshot: a range shared by
        # two parts of this step belongs to both restrictions
        step_parts = []
        layer_r = []
        seen_r = set()
        for i in touched:
            pts_i = [p for p in c.parts[i][0] if p in fset]
            rngs_i = [r for r in c.parts[i][1] if not r_done[r]]
            if pts_i and rngs_i:
                step_parts.append((i, pts_i, rngs_i))
                for r in rngs_i:
                    if r not in seen_r:
                        seen_r.add(r)
                        layer_r.append(r)
        if not layer_r:
            return Done
        for r in layer_r:
            r_done[r] = 1
        range_layers.append(layer_r)
        forward.append(step_parts)

        unmet = [r for r in layer_r if pos(sd.demands[r] - f.met[r])]
        if unmet:
            return LevelGraph(
                point_layers=point_layers,
                range_layers=range_layers,
                forward=forward,
                backward=backward,
                feeders=[(p, sd.supplies[p] - f.used[p]) for p in first],
                drains=[(r, sd.demands[r] - f.met[r]) for r in unmet],
                t_level=2 * len(range_layers) + 1,
            )

        new_pts = []
        new_set = set()
        for r in layer_r:
            for p, _amt in support.get(r, ()):
                if not p_done[p] and p not in new_set:
                    new_set.add(p)
                    new_pts.append(p)
        if not new_pts:
            return Done
        bk = [
            (r, p, amt)
            for r in layer_r
            for p, amt in support.get(r, ())
            if p in new_set
        ]
        for p in new_pts:
            p_done[p] = 1
        backward.append(bk)
        point_layers.append(new_pts)
        frontier, fset = new_pts, new_set


def expand_level_graph(L: LevelGraph) -> FlowNetwork:
    """Explicit flow network for one phase: every stored cover part becomes a
    middle vertex with uncapacitated edges, so the network has
    2 + #points + #ranges + #parts vertices and O(sigma) edges."""
    pid = {}
    rid = {}
    for layer in L.point_layers:
        for p in layer:
            pid[p] = 2 + len(pid)
    base = 2 + len(pid)
    for layer in L.range_layers:
        for r in layer:
            rid[r] = base + len(rid)
    n_mids = sum(len(step) for step in L.forward)
    net = FlowNetwork(base + len(rid) + n_mids, source=0, sink=1)

    for p, cap in L.feeders:
        net.add_edge(0, pid[p], cap, ("feeder", p))
    mid = base + len(rid)
    for j, step in enumerate(L.forward):
        for i, pts, rngs in step:
            for p in pts:
                net.add_edge(pid[p], mid, INF, ("min", i, p))
            for r in rngs:
                net.add_edge(mid, rid[r], INF, ("mout", i, r))
            mid += 1
        if j < len(L.backward):
            for r, p, cap in L.backward[j]:
                net.add_edge(rid[r], pid[p], cap, ("backward", r, p))
    for r, cap in L.drains:
        net.add_edge(rid[r], 1, cap, ("drain", r))
    return net


def blocking_flow(Lp: FlowNetwork, numeric: NumericContext = RATIONAL) -> Flow:
    """Blocking flow on a leveled DAG by depth-first search with dead-vertex
    retirement; reverse residual edges are never traversed, so every found
    path is a shortest one and every s-t path ends up saturated."""
    res = list(Lp.ecap)
    pos = numeric.is_positive
    s, t = Lp.source, Lp.sink
    dead = bytearray(Lp.n)
    it = [0] * Lp.n
    total = 0
    stack = []  # edge ids along the current path
    u = s
    while True:
        if u == t:
            bott = min(res[e] for e in stack)
            for e in stack:
                res[e] -= bott
                res[e ^ 1] += bott
            total = total + bott
            k = next(i for i, e in enumerate(stack) if not pos(res[e]))
            del stack[k:]
            u = Lp.eto[stack[-1]] if stack else s
            continue
        edges = Lp.head[u]
        i = it[u]
        moved = False
        while i < len(edges):
            e = edges[i]
            # odd ids are reverse slots, not part of the DAG
            if not (e & 1) and pos(res[e]) and not dead[Lp.eto[e]]:
                it[u] = i
                stack.append(e)
                u = Lp.eto[e]
                moved = True
                break
            i += 1
        if moved:
            continue
        it[u] = i
        dead[u] = 1
        if u == s:
            break
        e = stack.pop()
        u = Lp.eto[e ^ 1]
    values = [res[e + 1] for e in range(0, len(res), 2)]
    return Flow(values=values, value=total)


def _pair_part(lp: list, lr: list, numeric: NumericContext) -> list:
    # Lowest-index-first pairing of a middle vertex's in- and out-flows;
    # emits at most len(lp) + len(lr) - 1 triples.
    pos = numeric.is_positive
    out = []
    a = b = 0
    while a < len(lp) and b < len(lr):
        p, pa = lp[a]
        r, ra = lr[b]
        take = pa if pa <= ra else ra
        out.append((p, r, take))
        lp[a][1] = pa - take
        lr[b][1] = ra - take
        if not pos(lp[a][1]):
            a += 1
        if not pos(lr[b][1]):
            b += 1
    for _, rest in lp[a:]:
        if not numeric.is_zero(rest):
            raise InternalError("unpaired inflow at a middle vertex")
    for _, rest in lr[b:]:
        if not numeric.is_zero(rest):
            raise InternalError("unpaired outflow at a middle vertex")
    return out


def augment_and_project(
    f: PhaseState,
    g: Flow,
    L: LevelGraph,
    net: FlowNetwork | None = None,
    numeric: NumericContext = RATIONAL,
) -> PhaseState:
    """Fold a blocking flow back into (point, range) terms: per-part middle
    flows are re-paired, backward flows subtract from the stored pairs, and
    the feeder/drain totals update the supply/demand bookkeeping.  Mutates
    and returns ``f``."""
    if net is None:
        net = expand_level_graph(L)
    pos = numeric.is_positive
    ins = {}
    outs = {}
    subs = []
    for e in range(0, len(net.eto), 2):
        amt = g.values[e // 2]
        if not pos(amt):
            continue
        tag = net.einfo[e]
        kind = tag[0]
        if kind == "feeder":
            f.used[tag[1]] = f.used[tag[1]] + amt
        elif kind == "drain":
            f.met[tag[1]] = f.met[tag[1]] + amt
        elif kind == "min":
            ins.setdefault(tag[1], []).append([tag[2], amt])
        elif kind == "mout":
            outs.setdefault(tag[1], []).append([tag[2], amt])
        else:  # ("backward", r, p)
            subs.append((tag[2], tag[1], amt))

    for p, r, amt in subs:
        cur = f.flow.get((p, r))
        if cur is None:
            raise InternalError("backward flow on a pair with no stored flow")
        cur = cur - amt
        if numeric.mode == "rational" and cur < 0:
            raise InternalError("backward flow exceeds the stored pair flow")
        if pos(cur):
            f.flow[(p, r)] = cur
        else:
            del f.flow[(p, r)]
    if set(ins) != set(outs):
        raise InternalError("middle vertex with one-sided flow")
    for i in sorted(ins):
        for p, r, amt in _pair_part(ins[i], outs[i], numeric):
            key = (p, r)
            f.flow[key] = f.flow.get(key, 0) + amt

    f.phase += 1
    f.t_levels.append(L.t_level)
    return f


def max_matching_implicit(
    P,
    R,
    sd: SupplyDemand,
    c: BicliqueCover,
    *,
    numeric: NumericContext = RATIONAL,
    trace: list | None = None,
) -> Matching:
    """Maximum matching under the given supplies and demands.

    ``P`` and ``R`` are the point and range collections (or their counts).
    Runs build -> expand -> blocking flow -> project, pruning the support to
    a forest after every phase; the t-level strictly increases, so at most
    min(|P|, |R|) phases occur.  Pass a list as ``trace`` to receive one
    (t_level, pushed value, support size) triple per phase.
    """
    n_points = P if isinstance(P, int) else len(P)
    n_ranges = R if isinstance(R, int) else len(R)
    if n_points != len(sd.supplies) or n_ranges != len(sd.demands):
        raise InputError("supply/demand vectors do not match the point/range counts")
    if c.left_count != n_points or c.right_count != n_ranges:
        raise InputError("cover shape does not match the point/range counts")

    index = build_point_index(c)
    state = new_phase_state(n_points, n_ranges)
    max_phases = min(n_points, n_ranges)
    while True:
        L = build_level_graph(state, c, sd, index=index, numeric=numeric)
        if L is Done:
            break
        if state.t_levels and L.t_level <= state.t_levels[-1]:
            raise InternalError("t-level failed to increase between phases")
        net = expand_level_graph(L)
        g = blocking_flow(net, numeric)
        if not numeric.is_positive(g.value):
            raise InternalError("reachable t but empty blocking flow")
        augment_and_project(state, g, L, net=net, numeric=numeric)
        state = prune_to_forest(state, numeric)
        if trace is not None:
            trace.append((L.t_level, g.value, len(state.flow)))
        if state.phase > max_phases:
            raise InternalError("phase count exceeded the layer bound")
    return sorted((p, r, a) for (p, r), a in state.flow.items())
