"""Simulation: species trees, gene-family evolution along them, and exact
realization of arbitrary triple sets as gene-tree documents.

Species trees come from an age-weighted speciation process: at each unit
time step the lineage to split is drawn with probability inversely
proportional to its age (``model="yule"`` draws uniformly instead).  Leaves
are extended to a common horizon and all lengths divided by it, so every
root-to-leaf path has length exactly 1.

Gene families start as a single lineage on the synthetic edge above the
first divergence (length 0 by default, so nothing happens there unless a
positive ``origin_length`` is requested).  Per lineage and per species-tree
edge of length l, duplication and loss counts are Poisson with means
``dup_rate*l`` and ``loss_rate*l``, positions uniform along the edge and
processed in time order; a duplication forks the lineage (the fork draws
its own events over the rest of the edge), a loss ends it.  A loss that
would remove the last lineage on an edge is suppressed, which enforces the
constraint that every species keeps at least one gene copy.  Speciation
vertices split every surviving lineage.
"""

import heapq
from dataclasses import dataclass, field

import numpy as np

from .tree import (DUPLICATION, EXTANT, LOSS, SPECIATION, GeneTreeDocument,
                   Node, SpeciesTree, Tree)

_M64 = (1 << 64) - 1


def mix_seed(*parts):
    """Derive a child seed from integer parts, splitmix64-style: each part
    is added to the state, which is then finalized with the constants
    0xBF58476D1CE4E5B9, 0x94D049BB133111EB and shifts 30/27/31 (golden
    gamma 0x9E3779B97F4A7C15 as the initial increment)."""
    x = 0x9E3779B97F4A7C15
    for p in parts:
        x = (x + (int(p) & _M64)) & _M64
        x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _M64
        x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _M64
        x = x ^ (x >> 31)
    return x


def species_labels(n):
    """Deterministic species names S01..Sn, zero-padded so that
    lexicographic and numeric order agree."""
    width = len(str(n))
    return ["S%0*d" % (width, i + 1) for i in range(n)]


def generate_species_tree(n, seed, model="age", origin_length=0.0):
    """Random ultrametric binary species tree on ``n`` labeled species with
    every root-to-leaf path of length 1.0; deterministic per seed."""
    if n < 2:
        raise ValueError("need at least two species")
    if model not in ("age", "yule"):
        raise ValueError("unknown species-tree model %r" % (model,))
    rng = np.random.default_rng(seed)

    root = Node()
    first, second = Node(), Node()
    root.children = [first, second]
    births = {id(first): 0.0, id(second): 0.0}
    splits = {id(root): 0.0}
    active = [first, second]
    for k in range(2, n):
        t = float(k - 1)
        if model == "age":
            wts = np.array([1.0 / (t - births[id(x)]) for x in active])
        else:
            wts = np.ones(len(active))
        i = int(rng.choice(len(active), p=wts / wts.sum()))
        nd = active[i]
        a, b = Node(), Node()
        nd.children = [a, b]
        splits[id(nd)] = t
        births[id(a)] = births[id(b)] = t
        active[i:i + 1] = [a, b]

    horizon = float(n - 1)
    for lab, leaf in zip(species_labels(n), active):
        leaf.label = lab

    stack = [root]
    while stack:
        nd = stack.pop()
        for ch in nd.children:
            end = splits.get(id(ch), horizon)
            ch.length = (end - births[id(ch)]) / horizon
            stack.append(ch)
    return SpeciesTree.from_base(root, origin_length=origin_length)


@dataclass(frozen=True)
class Scenario:
    """One simulated gene family: the species tree it evolved along, the
    full gene tree including losses (with its implicit embedding), and the
    observable restriction to extant genes."""

    species_tree: SpeciesTree
    observable: GeneTreeDocument
    true_tree: Tree
    true_events: dict = field(repr=False)
    true_species_of: dict = field(repr=False)
    true_map: dict = field(repr=False)
    dup_rate: float = 0.0
    loss_rate: float = 0.0
    seed: int = 0

    @property
    def n_duplications(self):
        return sum(1 for e in self.true_events.values() if e == DUPLICATION)

    @property
    def n_losses(self):
        return sum(1 for e in self.true_events.values() if e == LOSS)


def evolve_gene_tree(stree, dup_rate, loss_rate, seed):
    """Simulate one gene family down ``stree``; see the module docstring
    for the event model.  Returns a :class:`Scenario`; every species is
    guaranteed at least one extant gene."""
    if dup_rate < 0 or loss_rate < 0:
        raise ValueError("rates must be non-negative")
    rng = np.random.default_rng(seed)
    counters = {"g": 0, "x": 0, "idx": 0, "seq": 0}
    embed = {}  # id(scaffold node) -> species vertex or edge

    def run_edge(sv, entries):
        """Evolve ``entries`` (stubs to grow under) down the edge above the
        species vertex ``sv``; returns the surviving stubs."""
        span_total = stree.length(sv) or 0.0
        edge = (stree.parent(sv), sv)
        heap = []
        active = {}

        def spawn(stub, start):
            idx = counters["idx"]
            counters["idx"] += 1
            active[idx] = stub
            rest = span_total - start
            if rest <= 0:
                return
            for pos in start + rest * rng.random(rng.poisson(dup_rate * rest)):
                counters["seq"] += 1
                heapq.heappush(heap, (pos, counters["seq"], idx, True))
            for pos in start + rest * rng.random(rng.poisson(loss_rate * rest)):
                counters["seq"] += 1
                heapq.heappush(heap, (pos, counters["seq"], idx, False))

        for stub in entries:
            spawn(stub, 0.0)
        while heap:
            pos, _, idx, is_dup = heapq.heappop(heap)
            if idx not in active:
                continue  # lineage already lost; its drawn events are void
            if is_dup:
                d = Node(event=DUPLICATION)
                embed[id(d)] = edge
                active[idx].children.append(d)
                active[idx] = d
                spawn(d, pos)
            else:
                if len(active) == 1:
                    continue  # keep the last copy on this edge
                counters["x"] += 1
                lost = Node(label="x%d" % counters["x"], event=LOSS)
                embed[id(lost)] = edge
                active[idx].children.append(lost)
                del active[idx]
        return list(active.values())

    def descend(sv, entries):
        survivors = run_edge(sv, entries)
        if stree.is_leaf(sv):
            for stub in survivors:
                counters["g"] += 1
                leaf = Node(label="g%d" % counters["g"], event=EXTANT,
                            species=stree.label(sv))
                embed[id(leaf)] = sv
                stub.children.append(leaf)
        else:
            forks = []
            for stub in survivors:
                s = Node(event=SPECIATION)
                embed[id(s)] = sv
                stub.children.append(s)
                forks.append(s)
            for c in stree.children(sv):
                descend(c, forks)

    holder = Node()
    descend(stree.base, [holder])
    true_tree = Tree(holder.children[0])

    true_events = {}
    true_species = {}
    true_map = {}
    for nd in true_tree._nodes:
        v = true_tree.vertex_of(nd)
        true_events[v] = nd.event
        true_map[v] = embed[id(nd)]
        if nd.event == EXTANT:
            true_species[v] = nd.species

    extant = [true_tree.label(v) for v in true_tree.leaves
              if true_events[v] == EXTANT]
    obs_tree, origin = true_tree.restrict_with_map(extant)
    obs_events = {v: true_events[origin[v]] for v in range(obs_tree.n_vertices)}
    obs_species = {v: true_species[origin[v]] for v in obs_tree.leaves}
    observable = GeneTreeDocument(obs_tree, obs_events, obs_species)

    return Scenario(stree, observable, true_tree, true_events, true_species,
                    true_map, float(dup_rate), float(loss_rate), int(seed))


def realize_triples(triples):
    """Build a gene-tree document whose informative species triples are
    exactly the given set, consistent or not: one speciation-labeled triple
    tree per element (with fresh genes), all joined under a duplication
    root.  A single triple is planted twice so the root keeps two children;
    an empty set yields three genes of one fresh species."""
    ts = sorted(set(triples))
    root = Node(event=DUPLICATION)
    if not ts:
        for tag in ("a", "b", "c"):
            root.children.append(Node(label="t0%s" % tag, event=EXTANT,
                                      species="Z"))
        return GeneTreeDocument.from_nodes(root)
    if len(ts) == 1:
        ts = [ts[0], ts[0]]
    for k, t in enumerate(ts):
        la = Node(label="t%da" % k, event=EXTANT, species=t.a)
        lb = Node(label="t%db" % k, event=EXTANT, species=t.b)
        lc = Node(label="t%dc" % k, event=EXTANT, species=t.c)
        inner = Node(event=SPECIATION, children=[la, lb])
        root.children.append(Node(event=SPECIATION, children=[inner, lc]))
    return GeneTreeDocument.from_nodes(root)
