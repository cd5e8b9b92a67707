"""Triple-set consistency and supertree construction.

This is the classic BUILD recursion (Aho, Sagiv, Szymanski, Ullman): on the
current label set, link the ingroup pair of every triple whose outgroup is
also present, split into connected components, and recurse.  A single
component on more than one label proves inconsistency; the stuck label set
and its triples are reported as evidence.
"""

from .errors import InconsistentTriples, InputError
from .tree import Node, SpeciesTree


class UnionFind:
    """Disjoint sets over hashable items (path compression + union by size)."""

    def __init__(self, items):
        self.parent = {x: x for x in items}
        self.size = {x: 1 for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return
        if self.size[rx] < self.size[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        self.size[rx] += self.size[ry]


def build_species_tree(triples, species):
    """Construct a species tree on ``species`` displaying every triple, or
    raise :class:`InconsistentTriples`.

    The output is never resolved beyond what the recursion forces (an empty
    triple set yields the star tree), and identical inputs produce
    identical trees.
    """
    labels = sorted(set(species))
    if not labels:
        raise InputError("empty species set")
    universe = set(labels)
    triples = list(set(triples))
    for t in triples:
        for lab in t.labels:
            if lab not in universe:
                raise InputError("triple label %r outside the species set" % lab)

    holder = []
    stack = [(labels, triples, holder)]
    while stack:
        labs, trips, attach = stack.pop()
        if len(labs) == 1:
            attach.append(Node(label=labs[0]))
            continue
        uf = UnionFind(labs)
        for t in trips:
            uf.union(t.a, t.b)
        comps = {}
        for lab in labs:
            comps.setdefault(uf.find(lab), []).append(lab)
        if len(comps) == 1:
            raise InconsistentTriples(labs, trips)
        buckets = {root: [] for root in comps}
        for t in trips:
            root = uf.find(t.a)
            if uf.find(t.c) == root:
                buckets[root].append(t)
            # otherwise the triple is satisfied at this vertex: drop it
        nd = Node()
        attach.append(nd)
        for root in sorted(comps, key=lambda r: comps[r][0]):
            stack.append((comps[root], buckets[root], nd.children))

    return SpeciesTree.from_base(holder[0])


def is_consistent(triples, species=None):
    """True iff some tree displays every triple.  ``species`` defaults to
    the labels occurring in the triples (extra labels never affect the
    verdict)."""
    if species is None:
        species = {lab for t in triples for lab in t.labels}
        if not species:
            return True
    try:
        build_species_tree(triples, species)
        return True
    except InconsistentTriples:
        return False


def _contract_edge(stree, u, v):
    """Species tree with interior edge (u, v) contracted (v merged into u)."""
    nodes = {}
    for w in range(1, stree.n_vertices):  # skip the synthetic vertex
        if w == v:
            continue
        nodes[w] = Node(label=stree.label(w), length=stree.length(w))
    for w in range(1, stree.n_vertices):
        if w == stree.base:
            continue
        p = stree.parent(w)
        if w == v:
            continue
        if p == v:
            p = u
        if p == 0:
            continue
        nodes[p].children.append(nodes[w])
    base = nodes[stree.base] if stree.base != v else nodes[u]
    base.length = None
    return SpeciesTree.from_base(base)


def is_minor_minimal(stree, triples):
    """True iff contracting any single interior edge of ``stree`` loses at
    least one of the given (displayed) triples."""
    triples = list(triples)
    for t in triples:
        if not stree.displays(t):
            raise InputError("tree does not display %s" % t)
    for v in range(1, stree.n_vertices):
        u = stree.parent(v)
        if u == stree.rho or stree.is_leaf(v):
            continue
        smaller = _contract_edge(stree, u, v)
        if all(smaller.displays(t) for t in triples):
            return False
    return True
