"""Validation of the event labeling against the species assignment, and
extraction of the species-informative rooted triples of a gene tree.

A triple of genes is informative about the species tree when the common
ancestor of all three genes is a speciation vertex and the three genes live
in three distinct species; duplications that predate species divergences
make every other triple unreliable.  The species-level triple set is the
image of the gene-level one under the species assignment.

Two enumeration routes are provided: ``subsets`` walks all leaf 3-subsets
(the brute-force definition, kept as the oracle) and ``vertices`` groups
ingroup pairs under their speciation root (much faster on paralog-rich
trees).  They are tested for equality.
"""

from dataclasses import dataclass
from itertools import combinations

from .errors import LabelingError
from .tree import SPECIATION, RootedTriple

MAX_PAIR_REPORTS = 1000


@dataclass(frozen=True)
class LabelingViolation:
    """A speciation vertex whose children subtrees share species, or the
    pairwise consequence: two same-species genes whose common ancestor is
    not a duplication."""

    kind: str        # "children-overlap" | "same-species-pair"
    vertex: int      # the offending speciation vertex
    species: tuple   # shared species label(s)
    detail: tuple    # (child_a, child_b) or (leaf_x, leaf_y)

    def __str__(self):
        if self.kind == "children-overlap":
            return ("speciation vertex %d: children %d and %d both contain "
                    "species %s" % (self.vertex, self.detail[0], self.detail[1],
                                    ",".join(self.species)))
        return ("leaves %d and %d share species %s but coalesce in "
                "non-duplication vertex %d" % (self.detail[0], self.detail[1],
                                               self.species[0], self.vertex))


def _species_masks(doc):
    """Per-vertex bitmask of the species present below each vertex."""
    tree = doc.tree
    bit = {s: 1 << i for i, s in enumerate(sorted(doc.species))}
    masks = [0] * tree.n_vertices
    for v in range(tree.n_vertices - 1, -1, -1):
        if tree.is_leaf(v):
            masks[v] = bit[doc.species_of[v]]
        else:
            m = 0
            for c in tree.children(v):
                m |= masks[c]
            masks[v] = m
    names = sorted(doc.species)
    return masks, names


def validate_labeling(doc):
    """Check that distinct children of every speciation vertex cover
    disjoint species sets; also re-check the pairwise consequence that two
    same-species genes must coalesce in a duplication.  Returns the list of
    violations (empty iff the labeling is admissible)."""
    tree = doc.tree
    masks, names = _species_masks(doc)
    out = []
    for v in tree.interior_vertices():
        if doc.events[v] != SPECIATION:
            continue
        for ca, cb in combinations(tree.children(v), 2):
            shared = masks[ca] & masks[cb]
            if shared:
                sp = tuple(names[i] for i in range(len(names))
                           if shared >> i & 1)
                out.append(LabelingViolation("children-overlap", v, sp,
                                             (ca, cb)))

    # pairwise consequence (implied by the above, re-checked independently)
    by_species = {}
    for v in tree.leaves:
        by_species.setdefault(doc.species_of[v], []).append(v)
    reported = 0
    for sp, vs in sorted(by_species.items()):
        for x, y in combinations(vs, 2):
            if reported >= MAX_PAIR_REPORTS:
                break
            anc = tree.lca((x, y))
            if doc.events[anc] == SPECIATION:
                out.append(LabelingViolation("same-species-pair", anc, (sp,),
                                             (x, y)))
                reported += 1
    return out


def _require_admissible(doc, force):
    if force:
        return
    violations = validate_labeling(doc)
    if violations:
        raise LabelingError(violations)


def _outside_leaves(tree, v, c):
    """Leaves below v but not below c, using contiguous preorder ranges."""
    below_v = tree.leaves_below(v)
    below_c = tree.leaves_below(c)
    if not below_c:
        return below_v
    lo = below_v.index(below_c[0])
    hi = lo + len(below_c)
    return below_v[:lo] + below_v[hi:]


def informative_gene_triples(doc, force=False, method="vertices"):
    """Gene-leaf triples rooted in a speciation vertex whose three leaves
    live in pairwise distinct species.

    Only the root of the triple (the common ancestor of all three leaves)
    must be a speciation; the ingroup pair may well coalesce in a
    duplication below it.
    """
    _require_admissible(doc, force)
    if method == "vertices":
        return _gene_triples_by_vertices(doc)
    if method == "subsets":
        return _gene_triples_by_subsets(doc)
    raise ValueError("unknown method %r" % (method,))


def _gene_triples_by_vertices(doc):
    tree = doc.tree
    sig = doc.species_of
    lab = tree.label
    out = set()
    for v in tree.interior_vertices():
        if doc.events[v] != SPECIATION:
            continue
        for c in tree.children(v):
            inside = tree.leaves_below(c)
            if len(inside) < 2:
                continue
            outside = _outside_leaves(tree, v, c)
            for x, y in combinations(inside, 2):
                sx, sy = sig[x], sig[y]
                if sx == sy:
                    continue
                for z in outside:
                    if sig[z] != sx and sig[z] != sy:
                        out.add(RootedTriple(lab(x), lab(y), lab(z)))
    return out


def _gene_triples_by_subsets(doc):
    # Brute force straight from the definition; the oracle for the vertex
    # route, so it deliberately avoids sharing its enumeration.
    tree = doc.tree
    sig = doc.species_of
    lab = tree.label
    out = set()
    for x, y, z in combinations(tree.leaves, 3):
        root = tree.lca((x, y, z))
        if doc.events[root] != SPECIATION:
            continue
        if len({sig[x], sig[y], sig[z]}) != 3:
            continue
        lxy = tree.lca((x, y))
        lxz = tree.lca((x, z))
        lyz = tree.lca((y, z))
        if lxy != root and lxz == root and lyz == root:
            out.add(RootedTriple(lab(x), lab(y), lab(z)))
        elif lxz != root and lxy == root and lyz == root:
            out.add(RootedTriple(lab(x), lab(z), lab(y)))
        elif lyz != root and lxy == root and lxz == root:
            out.add(RootedTriple(lab(y), lab(z), lab(x)))
    return out


def species_image(doc, gene_triples):
    """Map a set of gene-leaf triples leaf-wise through the species
    assignment (set semantics: duplicates collapse)."""
    sig = doc.species_of_label
    return {RootedTriple(sig(t.a), sig(t.b), sig(t.c)) for t in gene_triples}


def informative_species_triples(doc, force=False, method="vertices"):
    """Species-level image of :func:`informative_gene_triples`.

    The ``vertices`` route enumerates directly at the species level
    (deduplicating repeated species-set combinations across paralogous
    vertices), which keeps paralog-rich trees cheap.
    """
    _require_admissible(doc, force)
    if method == "subsets":
        return species_image(doc, _gene_triples_by_subsets(doc))
    if method != "vertices":
        raise ValueError("unknown method %r" % (method,))

    tree = doc.tree
    masks, names = _species_masks(doc)

    def unpack(mask):
        return tuple(names[i] for i in range(len(names)) if mask >> i & 1)

    tasks = set()
    for v in tree.interior_vertices():
        if doc.events[v] != SPECIATION:
            continue
        chs = tree.children(v)
        for c in chs:
            if bin(masks[c]).count("1") < 2:
                continue
            rest = 0
            for c2 in chs:
                if c2 != c:
                    rest |= masks[c2]
            if rest:
                tasks.add((masks[c], rest))

    out = set()
    for inside_mask, outside_mask in tasks:
        inside = unpack(inside_mask)
        outside = unpack(outside_mask)
        for a, b in combinations(inside, 2):
            for c in outside:
                if c != a and c != b:
                    out.add(RootedTriple(a, b, c))
    return out
