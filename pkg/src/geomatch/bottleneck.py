"""Bottleneck matching distances between planar point sets, and the
bottleneck distance between persistence diagrams.

The optimum under L-infinity (and, after a 45-degree rotation, under L1) is
always a coordinate difference between the two sets, so the candidate values
form four implicitly sorted matrices; a rank bisection with randomized
selection pins the answer with O(log n) feasibility tests.  Each test builds
metric balls around one side, covers the incidences, and asks the flow module
whether the target value is reached.  L2 works on squared distances so
rational inputs stay exact.
"""

from __future__ import annotations

import math
import random
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction

from .cover import BicliqueCover, box_cover, trivial_cover
from .flow import (
    Matching,
    SupplyDemand,
    build_network,
    flow_to_matching,
    max_flow_dinitz,
)
from .geometry import Box, Disk, Metric, Point, rotate45, squared_distance
from .numeric import RATIONAL, InputError, InternalError, NumericContext

_L2_MATERIALIZE_LIMIT = 10**7


class SortedMatrix:
    """Implicit matrix entry(i, j) = rows[i] + sign * cols[j] over two
    ascending coordinate sequences; every row and column is monotone."""

    def __init__(self, rows, cols, sign: int = 1):
        if sign not in (1, -1):
            raise InputError("sign must be +1 or -1")
        self.rows = tuple(sorted(rows))
        self.cols = tuple(sorted(cols))
        self.sign = sign
        # normalized ascending form: entry multiset = {a[i] + b[j]}
        self._a = self.rows
        b = [sign * c for c in self.cols]
        self._b = tuple(sorted(b))

    @property
    def shape(self) -> tuple:
        return (len(self.rows), len(self.cols))

    @property
    def total(self) -> int:
        return len(self._a) * len(self._b)

    def entry(self, i: int, j: int):
        return self.rows[i] + self.sign * self.cols[j]

    def min_entry(self):
        return self._a[0] + self._b[0]

    def max_entry(self):
        return self._a[-1] + self._b[-1]

    def count_le(self, x) -> int:
        """Entries <= x, by one staircase walk."""
        a, b = self._a, self._b
        j = len(b) - 1
        n = 0
        for ai in a:
            while j >= 0 and ai + b[j] > x:
                j -= 1
            if j < 0:
                break
            n += j + 1
        return n

    def count_lt(self, x) -> int:
        a, b = self._a, self._b
        j = len(b) - 1
        n = 0
        for ai in a:
            while j >= 0 and ai + b[j] >= x:
                j -= 1
            if j < 0:
                break
            n += j + 1
        return n

    def _row_open_range(self, ai, lo, hi) -> tuple:
        # column index range whose entries fall strictly between lo and hi
        return bisect_right(self._b, lo - ai), bisect_left(self._b, hi - ai)

    def gather_open(self, lo, hi, out: list) -> None:
        for ai in self._a:
            jl, jr = self._row_open_range(ai, lo, hi)
            out.extend(ai + self._b[j] for j in range(jl, jr))

    def open_at(self, lo, hi, idx: int):
        """idx-th entry (row-major) among those strictly between lo and hi;
        returns None when idx runs past this matrix."""
        for ai in self._a:
            jl, jr = self._row_open_range(ai, lo, hi)
            cnt = jr - jl
            if idx < cnt:
                return ai + self._b[jl + idx]
            idx -= cnt
        return None


def build_sorted_matrices(Pset, Qset) -> dict:
    """The four candidate matrices of coordinate differences: D_x(i,j) =
    x_i - x'_j over ascending coordinates, Dbar_x(i,j) = x'_i - x_j, and the
    same for y.  Every L-infinity bottleneck value is an entry of one of
    them."""
    pp = [_as_point(p) for p in Pset]
    qq = [_as_point(q) for q in Qset]
    for p in pp + qq:
        if p.dim != 2:
            raise InputError("sorted matrices are built over planar points")
    px = [p.coords[0] for p in pp]
    py = [p.coords[1] for p in pp]
    qx = [q.coords[0] for q in qq]
    qy = [q.coords[1] for q in qq]
    return {
        "D_x": SortedMatrix(px, qx, -1),
        "Dbar_x": SortedMatrix(qx, px, -1),
        "D_y": SortedMatrix(py, qy, -1),
        "Dbar_y": SortedMatrix(qy, py, -1),
    }


def select_kth(matrices, k: int, rng: random.Random | None = None):
    """k-th smallest entry (1-based) of the union multiset of the given
    sorted matrices, by randomized pivoting with staircase rank counts."""
    mats = list(matrices.values()) if isinstance(matrices, dict) else list(matrices)
    total = sum(m.total for m in mats)
    if not 1 <= k <= total:
        raise InputError(f"rank {k} out of range 1..{total}")
    if rng is None:
        rng = random.Random(0)
    lo = min(m.min_entry() for m in mats) - 1  # sentinel strictly below all
    hi = max(m.max_entry() for m in mats)
    below_lo = 0  # sum of count_le(lo)
    while True:
        active = sum(m.count_lt(hi) for m in mats) - below_lo
        if active == 0:
            return hi
        if active <= 128:
            vals = []
            for m in mats:
                m.gather_open(lo, hi, vals)
            vals.sort()
            idx = k - below_lo - 1
            return vals[idx] if idx < len(vals) else hi
        pick = rng.randrange(active)
        x = None
        for m in mats:
            x = m.open_at(lo, hi, pick)
            if x is not None:
                break
            pick -= m.count_lt(hi) - m.count_le(lo)
        if x is None:
            raise InternalError("active entry sampling ran out of matrices")
        c_le = sum(m.count_le(x) for m in mats)
        c_lt = sum(m.count_lt(x) for m in mats)
        if c_lt < k <= c_le:
            return x
        if k <= c_lt:
            hi = x
        else:
            lo = x
            below_lo = c_le


def _as_point(p) -> Point:
    return p if isinstance(p, Point) else Point(tuple(p))


@dataclass
class DecideResult:
    feasible: bool
    matching: Matching | None = None


def decide(
    Pset,
    Qset,
    metric: Metric,
    lam,
    *,
    sd: SupplyDemand | None = None,
    numeric: NumericContext = RATIONAL,
    squared: bool = False,
    want_matching: bool = True,
) -> DecideResult:
    """Is there a matching of full target value using only pairs within
    distance lam?  Perfect matching by default; pass supplies/demands for the
    many-to-many variant.  With ``squared`` (L2 only) ``lam`` is taken as the
    squared radius, keeping rational decisions exact."""
    pp = [_as_point(p) for p in Pset]
    qq = [_as_point(q) for q in Qset]
    if sd is None:
        if len(pp) != len(qq):
            raise InputError("perfect matching needs equal-size point sets")
        if not pp:
            return DecideResult(True, [])
        sd = SupplyDemand.unit(len(pp), len(qq))
    if lam < 0:
        raise InputError("negative distance bound")
    if squared and metric is not Metric.L2:
        raise InputError("squared bounds apply to L2 only")

    if metric is Metric.L2:
        lam_sq = lam if squared else lam * lam
        for p in pp + qq:
            if p.dim != 2:
                raise InputError("L2 decisions are planar")
        ranges = [Disk(q, None, radius_sq=lam_sq) for q in qq]
        cover = trivial_cover(pp, ranges)
    else:
        if metric is Metric.L1:
            pp_d = [rotate45(p) for p in pp]
            qq_d = [rotate45(q) for q in qq]
        else:
            pp_d, qq_d = pp, qq
        boxes = [
            Box(
                Point(tuple(c - lam for c in q.coords)),
                Point(tuple(c + lam for c in q.coords)),
            )
            for q in qq_d
        ]
        cover = box_cover(pp_d, boxes)

    net = build_network(cover, sd)
    flow = max_flow_dinitz(net, numeric)
    feasible = numeric.is_zero(sd.target - flow.value)
    if not feasible or not want_matching:
        return DecideResult(feasible, None)
    return DecideResult(True, flow_to_matching(flow, net, cover, numeric))


@dataclass
class BottleneckResult:
    lambda_star: object
    metric: Metric
    matching: Matching
    lambda_star_sq: object = None  # exact squared optimum, L2 only


def _rank_bisect(total, value_of, feasible) -> object:
    """Smallest feasible value among ranks 1..total; rank `total` must be
    feasible.  `value_of` maps a rank to its candidate value."""
    lo, hi = 0, total
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if feasible(value_of(mid)):
            hi = mid
        else:
            lo = mid
    return value_of(hi)


def bottleneck_search(
    Pset,
    Qset,
    metric: Metric,
    *,
    sd: SupplyDemand | None = None,
    numeric: NumericContext = RATIONAL,
    rng: random.Random | None = None,
) -> BottleneckResult:
    """Minimum lam such that decide(..., lam) is feasible, with a witness
    matching.  L-infinity and L1 bisect ranks of the four coordinate-difference
    matrices; L2 bisects the multiset of squared pairwise distances."""
    pp = [_as_point(p) for p in Pset]
    qq = [_as_point(q) for q in Qset]
    if sd is None and len(pp) != len(qq):
        raise InputError("perfect matching needs equal-size point sets")
    if not pp or not qq:
        sq = 0 if metric is Metric.L2 else None
        return BottleneckResult(0, metric, [], lambda_star_sq=sq)
    if rng is None:
        rng = random.Random(0)

    if metric is Metric.L2:
        lam_sq = _l2_search(pp, qq, sd, numeric, rng)
        res = decide(pp, qq, metric, lam_sq, sd=sd, numeric=numeric, squared=True)
        if not res.feasible:
            raise InternalError("bisection landed on an infeasible bound")
        return BottleneckResult(
            math.sqrt(float(lam_sq)), metric, res.matching, lambda_star_sq=lam_sq
        )

    if metric is Metric.L1:
        mats = build_sorted_matrices([rotate45(p) for p in pp], [rotate45(q) for q in qq])
    else:
        mats = build_sorted_matrices(pp, qq)
    total = sum(m.total for m in mats.values())

    def feas(v) -> bool:
        if v < 0:
            return False
        return decide(
            pp, qq, metric, v, sd=sd, numeric=numeric, want_matching=False
        ).feasible

    lam = _rank_bisect(total, lambda r: select_kth(mats, r, rng), feas)
    res = decide(pp, qq, metric, lam, sd=sd, numeric=numeric)
    if not res.feasible:
        raise InternalError("bisection landed on an infeasible bound")
    return BottleneckResult(lam, metric, res.matching)


def _l2_search(pp, qq, sd, numeric, rng):
    def feas_sq(v) -> bool:
        return decide(
            pp, qq, Metric.L2, v, sd=sd, numeric=numeric, squared=True,
            want_matching=False,
        ).feasible

    if len(pp) * len(qq) <= _L2_MATERIALIZE_LIMIT:
        vals = sorted(squared_distance(p, q) for p in pp for q in qq)
        return _rank_bisect(len(vals), lambda r: vals[r - 1], feas_sq)

    # too many pairs to materialize: value bisection on reservoir-sampled
    # pivots, O(1) memory per pass
    lo = -1
    hi = max(squared_distance(p, q) for p in pp for q in qq)
    while True:
        seen = 0
        x = None
        for p in pp:
            for q in qq:
                d = squared_distance(p, q)
                if lo < d < hi:
                    seen += 1
                    if rng.randrange(seen) == 0:
                        x = d
        if x is None:
            return hi
        if feas_sq(x):
            hi = x
        else:
            lo = x


@dataclass(frozen=True)
class PersistenceDiagram:
    """Finite multiset of (birth, death) pairs strictly above the diagonal."""

    points: tuple

    def __post_init__(self) -> None:
        pts = tuple((b, d) for b, d in self.points)
        for b, d in pts:
            if not d > b:
                raise InputError(f"diagram point ({b}, {d}) is not above the diagonal")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)


def _diagram(x) -> PersistenceDiagram:
    return x if isinstance(x, PersistenceDiagram) else PersistenceDiagram(tuple(x))


def pd_bottleneck(
    X,
    Y,
    *,
    numeric: NumericContext = RATIONAL,
    rng: random.Random | None = None,
):
    """Bottleneck distance between two persistence diagrams.

    Each off-diagonal point may match a point of the other diagram within
    L-infinity distance lam or its own diagonal projection; projections match
    each other freely, contributed by one complete cover part.  The optimum is
    bisected over the coordinate-difference candidates, exactly in rational
    mode."""
    dgm_x, dgm_y = _diagram(X), _diagram(Y)
    conv = numeric.convert

    def half(v):
        v = conv(v)
        # int / 2 would fall back to float; keep rational mode exact
        return Fraction(v) / 2 if numeric.mode == "rational" else v / 2

    x0 = [Point((conv(b), conv(d))) for b, d in dgm_x.points]
    y0 = [Point((conv(b), conv(d))) for b, d in dgm_y.points]
    proj_x = [Point((half(b + d), half(b + d))) for b, d in dgm_x.points]
    proj_y = [Point((half(b + d), half(b + d))) for b, d in dgm_y.points]
    pp = x0 + proj_y
    qq = y0 + proj_x
    if not pp:
        return 0
    if rng is None:
        rng = random.Random(0)
    n = len(pp)
    sd = SupplyDemand.unit(n, n)

    def feasible(lam) -> bool:
        if lam < 0:
            return False
        boxes = [
            Box(
                Point(tuple(c - lam for c in q.coords)),
                Point(tuple(c + lam for c in q.coords)),
            )
            for q in qq
        ]
        parts = list(box_cover(x0, boxes).parts)
        if y0 and proj_y:
            shift = len(x0)
            for pts, rngs in box_cover(proj_y, boxes[: len(y0)]).parts:
                parts.append(([p + shift for p in pts], rngs))
        if proj_y and proj_x:
            parts.append(
                (
                    list(range(len(x0), n)),
                    list(range(len(y0), n)),
                )
            )
        cover = BicliqueCover(n, n, parts)
        net = build_network(cover, sd)
        flow = max_flow_dinitz(net, numeric)
        return numeric.is_zero(sd.target - flow.value)

    mats = build_sorted_matrices(pp, qq)
    total = sum(m.total for m in mats.values())
    lam = _rank_bisect(total, lambda r: select_kth(mats, r, rng), feasible)
    if not feasible(lam):
        raise InternalError("bisection landed on an infeasible bound")
    return lam
