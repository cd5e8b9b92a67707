"""Rooted phylogenetic trees: construction, LCA queries, restriction, and
rooted-triple queries.

A tree is compiled once from a mutable ``Node`` scaffold into immutable
parallel arrays.  During compilation children are put into canonical order
(sorted by the lexicographically smallest leaf label below them) and vertex
ids are assigned in preorder, so two equivalent trees always compile to
identical arrays and every id is stable and serializable.

LCA queries go through a lazily built Euler-tour / sparse-table index
(O(1) per pairwise query, O(n log n) to build).  Because ids are preorder,
each subtree occupies a contiguous id range and ancestor tests are two
integer comparisons.
"""

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import InputError

# Event labels carried by gene-tree vertices.  LOSS appears only in
# simulated "true" trees, never in observable documents.
SPECIATION = "speciation"
DUPLICATION = "duplication"
EXTANT = "extant"
LOSS = "loss"

INTERIOR_EVENTS = frozenset({SPECIATION, DUPLICATION})


class Node:
    """Mutable scaffold used to assemble trees before compilation."""

    __slots__ = ("label", "children", "length", "event", "species", "src")

    def __init__(self, label=None, children=None, length=None, event=None,
                 species=None):
        self.label = label
        self.children = children if children is not None else []
        self.length = length
        self.event = event
        self.species = species
        self.src = None

    def __repr__(self):
        return "Node(label=%r, children=%d)" % (self.label, len(self.children))


@dataclass(frozen=True, order=True)
class RootedTriple:
    """Rooted triple ((a,b),c): the ingroup pair {a,b} diverged after the
    outgroup c split off.  The ingroup is stored in sorted order, so
    ((a,b),c) and ((b,a),c) compare equal."""

    a: str
    b: str
    c: str

    def __post_init__(self):
        if len({self.a, self.b, self.c}) != 3:
            raise ValueError("triple labels must be pairwise distinct: %r"
                             % ((self.a, self.b, self.c),))
        if self.a > self.b:
            a, b = self.a, self.b
            object.__setattr__(self, "a", b)
            object.__setattr__(self, "b", a)

    @property
    def labels(self):
        return (self.a, self.b, self.c)

    def __str__(self):
        return "((%s,%s),%s)" % (self.a, self.b, self.c)


def _merge_length(upper, lower):
    if upper is None and lower is None:
        return None
    return (upper or 0.0) + (lower or 0.0)


class Tree:
    """Immutable rooted phylogenetic tree.

    Vertices are dense ints assigned in preorder over the canonical child
    order; the root is always vertex 0.  No vertex may have outdegree one
    except the root when ``allow_unary_root`` is set (used by
    :class:`SpeciesTree` for its synthetic top vertex).
    """

    def __init__(self, root, allow_unary_root=False):
        self._compile(root, allow_unary_root)
        self._index = None

    # ------------------------------------------------------------------ #
    # compilation
    # ------------------------------------------------------------------ #

    def _compile(self, root, allow_unary_root):
        # Postorder pass (children before parents) to find the smallest
        # leaf label below every node, which drives canonical child order.
        order = []
        stack = [root]
        while stack:
            nd = stack.pop()
            order.append(nd)
            stack.extend(nd.children)
        min_label = {}
        for nd in reversed(order):
            if not nd.children:
                if not nd.label:
                    raise InputError("every leaf needs a non-empty label")
                min_label[id(nd)] = nd.label
            else:
                if nd.label is not None:
                    raise InputError("interior vertices must be unlabeled")
                nd.children.sort(key=lambda ch: min_label[id(ch)])
                min_label[id(nd)] = min_label[id(nd.children[0])]

        # Preorder numbering over the canonical order.
        nodes = []
        parent = []
        stack = [(root, -1)]
        while stack:
            nd, par = stack.pop()
            vid = len(nodes)
            nodes.append(nd)
            parent.append(par)
            for ch in reversed(nd.children):
                stack.append((ch, vid))

        n = len(nodes)
        children = [[] for _ in range(n)]
        for v in range(1, n):
            children[parent[v]].append(v)
        children = [tuple(cs) for cs in children]

        labels = [nd.label for nd in nodes]
        lengths = [nd.length for nd in nodes]

        leaf_ids = {}
        leaves = []
        for v, nd in enumerate(nodes):
            k = len(children[v])
            if k == 0:
                if labels[v] in leaf_ids:
                    raise InputError("duplicate leaf label %r" % labels[v])
                leaf_ids[labels[v]] = v
                leaves.append(v)
            elif k == 1 and not (v == 0 and allow_unary_root):
                raise InputError("vertex with a single child is not allowed")

        # Subtree sizes; preorder ids make each subtree a contiguous range.
        size = [1] * n
        for v in range(n - 1, 0, -1):
            size[parent[v]] += size[v]

        self._nodes = tuple(nodes)
        self._node_vid = {id(nd): v for v, nd in enumerate(nodes)}
        self._parent = parent
        self._children = children
        self._labels = labels
        self._lengths = lengths
        self._size = size
        self._leaf_ids = leaf_ids
        self._leaves = leaves  # ascending vertex ids

    # ------------------------------------------------------------------ #
    # basic accessors
    # ------------------------------------------------------------------ #

    root = 0

    @property
    def n_vertices(self):
        return len(self._parent)

    @property
    def n_leaves(self):
        return len(self._leaves)

    @property
    def leaves(self):
        return self._leaves

    @property
    def leaf_labels(self):
        return [self._labels[v] for v in self._leaves]

    def parent(self, v):
        return self._parent[v]

    def children(self, v):
        return self._children[v]

    def is_leaf(self, v):
        return not self._children[v]

    def label(self, v):
        return self._labels[v]

    def length(self, v):
        """Length of the edge above ``v`` (None if absent)."""
        return self._lengths[v]

    def leaf_id(self, label):
        try:
            return self._leaf_ids[label]
        except KeyError:
            raise InputError("unknown leaf label %r" % (label,)) from None

    def has_leaf(self, label):
        return label in self._leaf_ids

    def vertex_of(self, node):
        """Vertex id assigned to a scaffold node used to build this tree."""
        return self._node_vid[id(node)]

    def interior_vertices(self):
        return [v for v in range(self.n_vertices) if self._children[v]]

    def is_ancestor_or_equal(self, u, w):
        """True iff ``u`` lies on the path from ``w`` to the root (u == w
        included)."""
        return u <= w < u + self._size[u]

    def leaves_below(self, v):
        """Leaf vertex ids in the subtree rooted at ``v`` (ascending)."""
        lo = bisect_left(self._leaves, v)
        hi = bisect_right(self._leaves, v + self._size[v] - 1)
        return self._leaves[lo:hi]

    def cluster(self, v):
        """Frozenset of leaf labels below ``v``."""
        return frozenset(self._labels[x] for x in self.leaves_below(v))

    # ------------------------------------------------------------------ #
    # LCA index
    # ------------------------------------------------------------------ #

    def _ensure_index(self):
        if self._index is None:
            self._index = _EulerIndex(self)
        return self._index

    def lca(self, vertices):
        """Most recent common ancestor of a non-empty set of vertex ids."""
        vs = list(vertices)
        if not vs:
            raise ValueError("lca of an empty vertex set is undefined")
        n = self.n_vertices
        for v in vs:
            if not 0 <= v < n:
                raise InputError("unknown vertex id %r" % (v,))
        if len(vs) == 1:
            return vs[0]
        idx = self._ensure_index()
        lo = hi = idx.first[vs[0]]
        for v in vs[1:]:
            f = idx.first[v]
            if f < lo:
                lo = f
            elif f > hi:
                hi = f
        return idx.query(lo, hi)

    def lca_labels(self, labels):
        return self.lca([self.leaf_id(lab) for lab in labels])

    def batch_lca(self, us, vs):
        """Vectorized pairwise LCA over two equal-length id arrays."""
        idx = self._ensure_index()
        return idx.batch(np.asarray(us), np.asarray(vs))

    def depths(self):
        """Array of edge-count depths, root = 0."""
        return self._ensure_index().depth

    # ------------------------------------------------------------------ #
    # restriction
    # ------------------------------------------------------------------ #

    def restrict_with_map(self, labels):
        """Restrict to a leaf-label subset; returns ``(tree, origin)`` where
        ``origin[new_vid] = old_vid`` for every surviving vertex.

        The result is the minimal subtree spanning the requested leaves with
        every degree-two vertex suppressed (suppressed edges have their
        lengths summed).
        """
        want = set(labels)
        if len(want) < 2:
            raise ValueError("restriction needs at least two leaf labels")
        for lab in want:
            if lab not in self._leaf_ids:
                raise InputError("unknown leaf label %r" % (lab,))

        kept = [None] * self.n_vertices
        for v in range(self.n_vertices - 1, -1, -1):
            if self.is_leaf(v):
                if self._labels[v] in want:
                    nd = Node(label=self._labels[v], length=self._lengths[v])
                    nd.src = v
                    kept[v] = nd
                continue
            subs = [kept[c] for c in self._children[v] if kept[c] is not None]
            if not subs:
                continue
            if len(subs) == 1:
                # suppress v: splice its only surviving child upward
                child = subs[0]
                child.length = _merge_length(self._lengths[v], child.length)
                kept[v] = child
            else:
                nd = Node(children=subs, length=self._lengths[v])
                nd.src = v
                kept[v] = nd

        new_root = kept[0]
        new_root.length = None
        out = Tree(new_root)
        origin = {out.vertex_of(nd): nd.src
                  for nd in out._nodes}
        return out, origin

    def restrict(self, labels):
        tree, _ = self.restrict_with_map(labels)
        return tree

    # ------------------------------------------------------------------ #
    # triples
    # ------------------------------------------------------------------ #

    def displays(self, triple):
        """True iff the triple's ingroup pair coalesces strictly below the
        common ancestor of all three leaves."""
        va = self.leaf_id(triple.a)
        vb = self.leaf_id(triple.b)
        vc = self.leaf_id(triple.c)
        lab = self.lca((va, vb))
        return lab != self.lca((lab, vc))

    def displayed_triples(self):
        """All rooted triples displayed by this tree, by enumeration of
        leaf 3-subsets (vectorized LCA classification)."""
        if self.n_leaves < 3:
            raise ValueError("triples need at least three leaves")
        leaf_arr = np.array(self._leaves)
        combos = np.array(list(combinations(range(len(leaf_arr)), 3)))
        xs = leaf_arr[combos[:, 0]]
        ys = leaf_arr[combos[:, 1]]
        zs = leaf_arr[combos[:, 2]]
        lxy = self.batch_lca(xs, ys)
        lxz = self.batch_lca(xs, zs)
        lyz = self.batch_lca(ys, zs)
        depth = self.depths()
        dxy, dxz, dyz = depth[lxy], depth[lxz], depth[lyz]
        out = set()
        lab = self._labels
        # exactly one pairwise LCA lies strictly deeper than the other two
        for i in np.nonzero(dxy > dxz)[0]:
            out.add(RootedTriple(lab[xs[i]], lab[ys[i]], lab[zs[i]]))
        for i in np.nonzero(dxz > dxy)[0]:
            out.add(RootedTriple(lab[xs[i]], lab[zs[i]], lab[ys[i]]))
        for i in np.nonzero(dyz > dxy)[0]:
            out.add(RootedTriple(lab[ys[i]], lab[zs[i]], lab[xs[i]]))
        return out

    # ------------------------------------------------------------------ #
    # comparison
    # ------------------------------------------------------------------ #

    def equivalent(self, other):
        """Topological equivalence (leaf-preserving isomorphism); canonical
        compilation makes this an array comparison.  Lengths are ignored."""
        return (self._children == other._children
                and self._labels == other._labels)


class _EulerIndex:
    """Euler tour + sparse-table RMQ for O(1) pairwise LCA."""

    def __init__(self, tree):
        n = tree.n_vertices
        m = 2 * n - 1
        tour = np.empty(m, dtype=np.int64)
        tdepth = np.empty(m, dtype=np.int64)
        first = np.empty(n, dtype=np.int64)
        depth = np.zeros(n, dtype=np.int64)

        pos = 0
        stack = [(0, 0)]
        first[0] = 0
        tour[0] = 0
        tdepth[0] = 0
        pos = 1
        while stack:
            v, ci = stack.pop()
            chs = tree.children(v)
            if ci < len(chs):
                stack.append((v, ci + 1))
                c = chs[ci]
                depth[c] = depth[v] + 1
                first[c] = pos
                tour[pos] = c
                tdepth[pos] = depth[c]
                pos += 1
                stack.append((c, 0))
            elif stack:
                pv = stack[-1][0]
                tour[pos] = pv
                tdepth[pos] = depth[pv]
                pos += 1

        logs = np.zeros(m + 1, dtype=np.int64)
        for i in range(2, m + 1):
            logs[i] = logs[i >> 1] + 1
        nlev = int(logs[m]) + 1
        st = np.empty((nlev, m), dtype=np.int64)
        st[0] = np.arange(m)
        for k in range(1, nlev):
            span = 1 << k
            half = span >> 1
            valid = m - span + 1
            if valid <= 0:
                st[k] = st[k - 1]
                continue
            left = st[k - 1, :valid]
            right = st[k - 1, half:half + valid]
            st[k, :valid] = np.where(tdepth[right] < tdepth[left], right, left)
            st[k, valid:] = st[k - 1, valid:]

        self.tour = tour
        self.tdepth = tdepth
        self.first = first
        self.depth = depth
        self.logs = logs
        self.st = st

    def query(self, lo, hi):
        k = int(self.logs[hi - lo + 1])
        a = int(self.st[k, lo])
        b = int(self.st[k, hi - (1 << k) + 1])
        best = a if self.tdepth[a] <= self.tdepth[b] else b
        return int(self.tour[best])

    def batch(self, us, vs):
        fu = self.first[us]
        fv = self.first[vs]
        return self.batch_positions(np.minimum(fu, fv), np.maximum(fu, fv))

    def batch_positions(self, lo, hi):
        """Vectorized LCA over [lo, hi] spans of first-occurrence positions."""
        k = self.logs[hi - lo + 1]
        a = self.st[k, lo]
        b = self.st[k, hi - (1 << k) + 1]
        idx = np.where(self.tdepth[b] < self.tdepth[a], b, a)
        return self.tour[idx]


class SpeciesTree(Tree):
    """Species tree on a label set B, carrying one synthetic top vertex with
    a single edge down to the common ancestor of B.  The synthetic vertex
    exists so duplications that predate the first divergence have an edge
    to map to; it is never written on output."""

    def __init__(self, root):
        super().__init__(root, allow_unary_root=True)
        if len(self.children(0)) != 1:
            raise InputError("species tree top vertex must have exactly one child")

    @classmethod
    def from_base(cls, base_node, origin_length=None):
        """Wrap an ordinary rooted tree scaffold with the synthetic top
        vertex; ``origin_length`` becomes the length of the synthetic edge."""
        base_node.length = origin_length
        return cls(Node(children=[base_node]))

    @property
    def rho(self):
        """The synthetic top vertex (never an image of anything)."""
        return 0

    @property
    def base(self):
        """Common ancestor of all species; child of the synthetic vertex."""
        return self._children[0][0]

    @property
    def species(self):
        return frozenset(self._leaf_ids)

    def edges(self):
        """All directed edges (parent, child), synthetic edge included."""
        return [(self._parent[v], v) for v in range(1, self.n_vertices)]

    def nontrivial_clusters(self):
        """Leaf-label sets of interior vertices, excluding the full set and
        the synthetic vertex."""
        out = set()
        for v in self.interior_vertices():
            if v in (self.rho, self.base):
                continue
            out.add(self.cluster(v))
        return out

    def interior_count(self):
        """Number of interior vertices, synthetic vertex excluded."""
        return sum(1 for v in self.interior_vertices() if v != self.rho)


@dataclass(frozen=True)
class GeneTreeDocument:
    """An observable gene tree: topology plus per-vertex event labels and a
    per-leaf species assignment."""

    tree: Tree
    events: dict = field(compare=False)
    species_of: dict = field(compare=False)

    def __post_init__(self):
        t = self.tree
        for v in range(t.n_vertices):
            ev = self.events.get(v)
            if t.is_leaf(v):
                if ev != EXTANT:
                    raise InputError("leaf %d must carry the extant event" % v)
                if not self.species_of.get(v):
                    raise InputError("leaf %d has no species assignment" % v)
            elif ev not in INTERIOR_EVENTS:
                raise InputError(
                    "interior vertex %d needs a speciation or duplication event" % v)

    @classmethod
    def from_nodes(cls, root):
        """Compile a scaffold whose nodes carry ``event`` and ``species``."""
        tree = Tree(root)
        events = {}
        species = {}
        for nd in tree._nodes:
            v = tree.vertex_of(nd)
            events[v] = nd.event if nd.children else EXTANT
            if not nd.children:
                species[v] = nd.species
        return cls(tree, events, species)

    @property
    def species(self):
        """The species set covered by the leaves (the image of sigma)."""
        return frozenset(self.species_of.values())

    def sigma(self, v):
        return self.species_of[v]

    def event(self, v):
        return self.events[v]

    def species_of_label(self, gene_label):
        return self.species_of[self.tree.leaf_id(gene_label)]

    def restrict(self, labels):
        """Restriction to a leaf subset; events survive on surviving
        vertices (suppressed vertices drop out with their events)."""
        sub, origin = self.tree.restrict_with_map(labels)
        events = {v: self.events[origin[v]] for v in range(sub.n_vertices)}
        species = {v: self.species_of[origin[v]] for v in sub.leaves}
        return GeneTreeDocument(sub, events, species)
