"""Link-cut forest over red/blue bipartite trees with per-color path minima.

Each solid path is a splay tree whose in-order sequence alternates node
vertices and edge vertices (an edge vertex sits between its endpoints).  An
edge's color is the color of its parent endpoint, so it is not static: it
flips when the path through it is everted.

Per-color values are stored differentially.  For vertex v and color c:

    dmin_c(v)  = min_c(subtree v) - min_c(subtree parent(v)),
                 absolute at a solid root
    dcost_c(v) = cost_c(v) - min_c(subtree v)

where cost_c(v) is the edge value if v is an edge vertex of color c and
+infinity otherwise.  +infinity is represented by None with the conventions
None + x = None, None - x = None, None - None = None, min(None, x) = x; a
finite minus None never arises because only subtree minima are subtracted.
With this encoding, adding x to every c-colored edge of a whole path touches
only the root's dmin_c, and reversing a path swaps the blue and red fields.

The reverse flag on v applies to v's children: v's own fields and child
order are already current, so the effective orientation of any vertex is the
xor of the pending flags above it.
"""

from __future__ import annotations

from .numeric import RATIONAL, InputError, InternalError, NumericContext

RED = "red"
BLUE = "blue"


def _sadd(a, b):
    if a is None or b is None:
        return None
    return a + b


def _ssub(a, b):
    if a is None:
        return None
    if b is None:
        raise InternalError("finite minus infinity in field update")
    return a - b


def _smin(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return a if a <= b else b


class RbNode:
    __slots__ = (
        "left", "right", "parent", "rev",
        "dmin_b", "dcost_b", "dmin_r", "dcost_r",
        "is_edge", "color", "tag", "ends",
    )

    def __init__(self, is_edge: bool, color: str, tag=None):
        self.left = self.right = self.parent = None
        self.rev = False
        self.dmin_b = self.dcost_b = self.dmin_r = self.dcost_r = None
        self.is_edge = is_edge
        self.color = color  # node color; for edge vertices the creation color
        self.tag = tag
        self.ends = None

    def __repr__(self):  # debugging aid only
        kind = "edge" if self.is_edge else "node"
        return f"<{kind} {self.tag!r}>"


def _is_root(v: RbNode) -> bool:
    p = v.parent
    return p is None or (p.left is not v and p.right is not v)


def _apply_rev(v: RbNode) -> None:
    v.left, v.right = v.right, v.left
    v.dmin_b, v.dmin_r = v.dmin_r, v.dmin_b
    v.dcost_b, v.dcost_r = v.dcost_r, v.dcost_b
    v.rev = not v.rev


def _push(v: RbNode) -> None:
    if v.rev:
        if v.left is not None:
            _apply_rev(v.left)
        if v.right is not None:
            _apply_rev(v.right)
        v.rev = False


def _rotate(v: RbNode) -> None:
    # v and its parent must already be pushed
    u = v.parent
    g = u.parent
    left_case = u.left is v
    b = v.right if left_case else v.left
    a = v.left if left_case else v.right
    c2 = u.right if left_case else u.left

    for dmin, dcost in (("dmin_b", "dcost_b"), ("dmin_r", "dcost_r")):
        dm_v = getattr(v, dmin)
        dc_v = getattr(v, dcost)
        dm_u = getattr(u, dmin)
        dc_u = getattr(u, dcost)
        dm_b = getattr(b, dmin) if b is not None else None
        dm_c2 = getattr(c2, dmin) if c2 is not None else None
        # q = min over u's post-rotation subtree {u, b, c2}, relative to the
        # old subtree minimum (which the rotation preserves for v)
        q = _smin(_smin(dc_u, _sadd(dm_v, dm_b)), dm_c2)
        setattr(v, dmin, dm_u)
        setattr(v, dcost, _sadd(dm_v, dc_v))
        setattr(u, dmin, q)
        setattr(u, dcost, _ssub(dc_u, q))
        if b is not None:
            setattr(b, dmin, _ssub(_sadd(dm_v, dm_b), q))
        if a is not None:
            setattr(a, dmin, _sadd(dm_v, getattr(a, dmin)))
        if c2 is not None:
            setattr(c2, dmin, _ssub(dm_c2, q))

    if left_case:
        u.left = b
        v.right = u
    else:
        u.right = b
        v.left = u
    if b is not None:
        b.parent = u
    u.parent = v
    v.parent = g
    if g is not None:
        if g.left is u:
            g.left = v
        elif g.right is u:
            g.right = v


def _splay(v: RbNode) -> None:
    stack = [v]
    while not _is_root(stack[-1]):
        stack.append(stack[-1].parent)
    for x in reversed(stack):
        _push(x)
    while not _is_root(v):
        u = v.parent
        if _is_root(u):
            _rotate(v)
        else:
            g = u.parent
            if (g.left is u) == (u.left is v):
                _rotate(u)
                _rotate(v)
            else:
                _rotate(v)
                _rotate(v)


def _detach_right(v: RbNode) -> None:
    # v is a pushed solid root; the right subtree becomes its own solid path
    # (it keeps its parent pointer, now a path-parent)
    r = v.right
    v.right = None
    for dmin, dcost in (("dmin_b", "dcost_b"), ("dmin_r", "dcost_r")):
        m = getattr(v, dmin)
        cost_abs = _sadd(m, getattr(v, dcost))
        left = v.left
        ml_abs = _sadd(m, getattr(left, dmin)) if left is not None else None
        mr_abs = _sadd(m, getattr(r, dmin))
        m_new = _smin(cost_abs, ml_abs)
        setattr(v, dmin, m_new)
        setattr(v, dcost, _ssub(cost_abs, m_new))
        if left is not None:
            setattr(left, dmin, _ssub(ml_abs, m_new))
        setattr(r, dmin, mr_abs)


def _attach_right(v: RbNode, r: RbNode) -> None:
    # v is a pushed solid root with no right child; r is a solid root whose
    # path-parent is v
    v.right = r
    for dmin, dcost in (("dmin_b", "dcost_b"), ("dmin_r", "dcost_r")):
        m_v = getattr(v, dmin)
        m_r = getattr(r, dmin)
        cost_abs = _sadd(m_v, getattr(v, dcost))
        left = v.left
        ml_abs = _sadd(m_v, getattr(left, dmin)) if left is not None else None
        m_new = _smin(_smin(cost_abs, ml_abs), m_r)
        setattr(v, dmin, m_new)
        setattr(v, dcost, _ssub(cost_abs, m_new))
        if left is not None:
            setattr(left, dmin, _ssub(ml_abs, m_new))
        setattr(r, dmin, _ssub(m_r, m_new))


def _access(v: RbNode) -> None:
    # afterwards v is the solid root of the path from its tree root to v,
    # with v in-order last
    _splay(v)
    if v.right is not None:
        _detach_right(v)
    while v.parent is not None:
        w = v.parent
        _splay(w)
        if w.right is not None:
            _detach_right(w)
        _attach_right(w, v)
        _rotate(v)


def _leftmost(v: RbNode) -> RbNode:
    x = v
    while True:
        _push(x)
        if x.left is None:
            return x
        x = x.left


class RbForest:
    """Forest of red/blue trees supporting findroot, link, cut, evert,
    per-color path additions and minimum-blue-edge queries, all in amortized
    O(log n)."""

    def __init__(self, numeric: NumericContext = RATIONAL):
        self.numeric = numeric
        self._edges = {}  # edge vertex -> None, insertion ordered
        self.nodes = []

    def _check_node(self, v: RbNode) -> None:
        if not isinstance(v, RbNode) or v.is_edge:
            raise InputError("expected a node vertex handle")

    def maketree(self, color: str, tag=None) -> RbNode:
        if color not in (RED, BLUE):
            raise InputError(f"bad color {color!r}")
        node = RbNode(False, color, tag)
        self.nodes.append(node)
        return node

    def findroot(self, v: RbNode) -> RbNode:
        self._check_node(v)
        _access(v)
        root = _leftmost(v)
        _splay(root)
        return root

    def link(self, v: RbNode, w: RbNode, value) -> None:
        """Attach root v below w by an edge of the given value.  The new edge
        takes w's color (w is its parent endpoint)."""
        self._check_node(v)
        self._check_node(w)
        if v.color == w.color:
            raise InputError("link: endpoints share a color")
        if self.numeric.mode == "rational" and value < 0:
            raise InputError("link: negative edge value")
        if self.findroot(v) is not v:
            raise InputError("link: v is not a tree root")
        if self.findroot(w) is v:
            raise InputError("link: endpoints already connected")
        e = RbNode(True, w.color)
        e.ends = (v, w)
        if w.color == BLUE:
            e.dmin_b, e.dcost_b = value, value - value
        else:
            e.dmin_r, e.dcost_r = value, value - value
        _access(v)
        v.parent = e
        e.parent = w
        self._edges[e] = None

    def cut(self, v: RbNode) -> None:
        """Remove the edge between v and its parent."""
        self._check_node(v)
        _access(v)
        if v.left is None:
            raise InputError("cut: v is a tree root")
        upper = v.left
        v.left = None
        upper.parent = None
        for dmin, dcost in (("dmin_b", "dcost_b"), ("dmin_r", "dcost_r")):
            m = getattr(v, dmin)
            setattr(upper, dmin, _sadd(m, getattr(upper, dmin)))
            # v is a node vertex alone on its path now
            setattr(v, dmin, None)
            setattr(v, dcost, None)
        # the in-order predecessor of v is its parent edge vertex
        x = upper
        while True:
            _push(x)
            if x.right is None:
                break
            x = x.right
        e = x
        if not e.is_edge:
            raise InternalError("expected an edge vertex next to v")
        _splay(e)
        rest = e.left
        e.left = None
        rest.parent = None
        for dmin in ("dmin_b", "dmin_r"):
            setattr(rest, dmin, _sadd(getattr(e, dmin), getattr(rest, dmin)))
        del self._edges[e]

    def evert(self, v: RbNode) -> None:
        """Make v the root of its tree by reversing the path above it; edge
        colors along the path flip with their parent endpoints."""
        self._check_node(v)
        _access(v)
        _apply_rev(v)

    def findblue(self, v: RbNode):
        """Minimum blue edge value x on the path from v to its root, along
        with the last vertex w on that path (nearest the root) whose parent
        edge is blue with value x.  None when the path has no blue edge."""
        self._check_node(v)
        _access(v)
        if v.dmin_b is None:
            return None
        x = v
        acc = v.dmin_b  # min over x's subtree, absolute
        while True:
            _push(x)
            left, right = x.left, x.right
            ml = _sadd(acc, left.dmin_b) if left is not None else None
            own = _sadd(acc, x.dcost_b)
            mr = _sadd(acc, right.dmin_b) if right is not None else None
            # leftmost achiever = blue minimum nearest the tree root
            if ml is not None and _smin(ml, _smin(own, mr)) == ml:
                x, acc = left, ml
                continue
            if own is not None and _smin(own, mr) == own:
                break
            if mr is None:
                raise InternalError("blue minimum vanished during descent")
            x, acc = right, mr
        e = x
        value = _sadd(acc, e.dcost_b)
        _splay(e)
        if e.right is None:
            raise InternalError("blue edge vertex cannot end a path")
        w = _leftmost(e.right)
        _splay(w)
        return w, value

    def _add(self, v: RbNode, field: str, x) -> None:
        self._check_node(v)
        _access(v)
        m = getattr(v, field)
        if m is None:
            return
        if self.numeric.mode == "rational" and m + x < 0:
            raise InputError("path add would make an edge negative")
        setattr(v, field, m + x)

    def addblue(self, v: RbNode, x) -> None:
        """Add x to every blue edge between v and its root."""
        self._add(v, "dmin_b", x)

    def addred(self, v: RbNode, x) -> None:
        """Add x to every red edge between v and its root."""
        self._add(v, "dmin_r", x)

    def add_on_path(self, v: RbNode, color: str, x) -> None:
        if color == BLUE:
            self.addblue(v, x)
        elif color == RED:
            self.addred(v, x)
        else:
            raise InputError(f"bad color {color!r}")

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    def edges(self):
        """Live edges as (endpoint, endpoint, current value) triples."""
        out = []
        for e in self._edges:
            _splay(e)
            if e.dcost_b is not None:
                value = _sadd(e.dmin_b, e.dcost_b)
            else:
                value = _sadd(e.dmin_r, e.dcost_r)
            u, w = e.ends
            out.append((u, w, value))
        return out


def prune_to_forest(f, numeric: NumericContext = RATIONAL):
    """Cancel all cycles in the bipartite flow-support graph.

    ``f`` maps (point index, range index) to a positive amount; a phase-state
    object carrying such a mapping as ``f.flow`` is rewritten in place and
    returned.  The result's support is a forest over the same nodes, with
    every per-node total preserved: an edge that would close a cycle is
    instead pushed along the existing tree path (red edges up, blue edges
    down), and blue edges driven to zero are cut.
    """
    if hasattr(f, "flow"):
        f.flow = prune_to_forest(f.flow, numeric)
        return f
    flow_edges = f
    forest = RbForest(numeric)
    pnodes = {}
    rnodes = {}
    for (p, r) in sorted(flow_edges):
        value = flow_edges[(p, r)]
        if not numeric.is_positive(value):
            continue
        if p not in pnodes:
            pnodes[p] = forest.maketree(RED, ("p", p))
        if r not in rnodes:
            rnodes[r] = forest.maketree(BLUE, ("r", r))
        a, b = pnodes[p], rnodes[r]
        if forest.findroot(a) is not forest.findroot(b):
            forest.evert(b)
            forest.link(b, a, value)
            continue
        forest.evert(a)
        found = forest.findblue(b)
        if found is None:
            raise InternalError("cycle without a blue edge on the tree path")
        _w, delta = found
        push = value if value <= delta else delta
        forest.addred(b, push)
        forest.addblue(b, -push)
        while True:
            found = forest.findblue(b)
            if found is None or not numeric.is_zero(found[1]):
                break
            forest.cut(found[0])
        if value > delta:
            forest.evert(b)
            forest.link(b, a, value - delta)
    out = {}
    for u, w, value in forest.edges():
        p_tag = u.tag if u.tag[0] == "p" else w.tag
        r_tag = w.tag if w.tag[0] == "r" else u.tag
        if numeric.is_positive(value):
            out[(p_tag[1], r_tag[1])] = value
    return out
