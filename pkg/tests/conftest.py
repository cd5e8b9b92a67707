"""Shared test helpers: small random generators and independent oracles.

Everything here is deliberately naive (root-path walks, exhaustive
enumeration) so it can serve as an oracle for the library's fast paths.
"""

import random
from functools import lru_cache

import pytest

from triplerec import (DUPLICATION, EXTANT, SPECIATION, GeneTreeDocument,
                       Node, SpeciesTree, Tree)


# ---------------------------------------------------------------------- #
# random structures
# ---------------------------------------------------------------------- #

def random_tree(rng, labels, binary=True):
    """Random rooted tree scaffold on the given leaf labels."""
    nodes = [Node(label=lab) for lab in labels]
    rng.shuffle(nodes)
    while len(nodes) > 1:
        if binary or len(nodes) == 2:
            k = 2
        else:
            k = min(len(nodes), rng.choice((2, 2, 2, 3, 4)))
        picks = [nodes.pop(rng.randrange(len(nodes))) for _ in range(k)]
        nodes.append(Node(children=picks))
    root = nodes[0]
    if not root.children:  # single label: force a cherry upstream instead
        raise ValueError("need at least two labels")
    return root


def random_doc(rng, n_leaves, n_species, binary=True, speciation_bias=0.7):
    """Random admissible gene-tree document: random topology, random species
    assignment, events drawn speciation-biased and then forced to
    duplication wherever children species sets overlap."""
    genes = ["g%d" % i for i in range(n_leaves)]
    species = ["S%d" % i for i in range(n_species)]
    root = random_tree(rng, genes, binary=binary)
    tree = Tree(root)
    species_of = {v: rng.choice(species) for v in tree.leaves}
    # make sure every species name used is "real"; B is just the image
    events = {v: EXTANT for v in tree.leaves}
    cover = {}
    for v in range(tree.n_vertices - 1, -1, -1):
        if tree.is_leaf(v):
            cover[v] = {species_of[v]}
            continue
        sets = [cover[c] for c in tree.children(v)]
        cover[v] = set().union(*sets)
        disjoint = sum(len(s) for s in sets) == len(cover[v])
        if disjoint and rng.random() < speciation_bias:
            events[v] = SPECIATION
        else:
            events[v] = DUPLICATION
    return GeneTreeDocument(tree, events, species_of)


# ---------------------------------------------------------------------- #
# oracles
# ---------------------------------------------------------------------- #

def root_path(tree, v):
    path = [v]
    while tree.parent(path[-1]) >= 0:
        path.append(tree.parent(path[-1]))
    return path


def lca_walk(tree, vertices):
    """LCA by intersecting root paths; the oracle for the indexed lookup."""
    vertices = list(vertices)
    common = set(root_path(tree, vertices[0]))
    for v in vertices[1:]:
        common &= set(root_path(tree, v))
    return min(common, key=lambda u: -len(root_path(tree, u)))


def set_partitions(items):
    """All partitions of ``items`` into non-empty blocks."""
    items = list(items)
    if len(items) == 1:
        yield [items]
        return
    head, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[head] + part[i]] + part[i + 1:]
        yield [[head]] + part


@lru_cache(maxsize=None)
def tree_shapes(labels):
    """Every rooted phylogenetic tree on the labels, as nested tuples
    (leaf = label, interior = sorted tuple of child shapes); 26 shapes on
    4 labels."""
    labels = tuple(sorted(labels))
    if len(labels) == 1:
        return (labels[0],)
    out = []
    for part in set_partitions(list(labels)):
        if len(part) < 2:
            continue
        choices = [tree_shapes(tuple(block)) for block in part]
        stack = [((), 0)]
        while stack:
            chosen, i = stack.pop()
            if i == len(choices):
                out.append(tuple(sorted(chosen, key=repr)))
                continue
            for shape in choices[i]:
                stack.append((chosen + (shape,), i + 1))
    return tuple(sorted(set(out), key=repr))


def shape_to_nodes(shape):
    if isinstance(shape, str):
        return Node(label=shape)
    return Node(children=[shape_to_nodes(s) for s in shape])


def all_species_trees(labels):
    """Every species tree (synthetic vertex included) on the label set."""
    return [SpeciesTree.from_base(shape_to_nodes(s))
            for s in tree_shapes(tuple(sorted(labels)))]


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
