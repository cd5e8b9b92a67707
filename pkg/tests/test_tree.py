"""Core tree structure: LCA, restriction, display tests, triple sets."""

import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import lca_walk, random_tree
from triplerec import (InputError, Node, RootedTriple, Tree, parse_gene_tree,
                       parse_species_tree)


def tree_of(newick):
    """Plain topology from species-style Newick (synthetic vertex dropped)."""
    stree = parse_species_tree(newick)
    return stree.restrict(stree.leaf_labels)


class TestRootedTriple:
    def test_ingroup_is_unordered(self):
        assert RootedTriple("b", "a", "c") == RootedTriple("a", "b", "c")
        assert str(RootedTriple("b", "a", "c")) == "((a,b),c)"

    def test_labels_must_differ(self):
        with pytest.raises(ValueError):
            RootedTriple("a", "a", "c")


class TestLca:
    def test_cherry_pair(self):
        t = tree_of("((a,b),c);")
        cherry = t.lca((t.leaf_id("a"), t.leaf_id("b")))
        assert cherry != t.root
        assert t.cluster(cherry) == {"a", "b"}

    def test_pair_through_root(self):
        t = tree_of("((a,b),c);")
        assert t.lca((t.leaf_id("a"), t.leaf_id("c"))) == t.root

    def test_singleton_is_identity(self):
        t = tree_of("((a,b),c);")
        for v in range(t.n_vertices):
            assert t.lca((v,)) == v

    def test_empty_set_rejected(self):
        t = tree_of("((a,b),c);")
        with pytest.raises(ValueError):
            t.lca(())

    def test_unknown_vertex_rejected(self):
        t = tree_of("((a,b),c);")
        with pytest.raises(InputError):
            t.lca((0, 99))

    def test_matches_path_walk_oracle_on_random_trees(self):
        rng = random.Random(7)
        for trial in range(10):
            labels = ["L%d" % i for i in range(20)]
            t = Tree(random_tree(rng, labels, binary=bool(trial % 2)))
            for u, v in combinations(t.leaves, 2):
                assert t.lca((u, v)) == lca_walk(t, (u, v))

    def test_interior_vertex_is_lca_of_its_leaves(self):
        rng = random.Random(11)
        for _ in range(10):
            t = Tree(random_tree(rng, ["L%d" % i for i in range(12)]))
            for v in t.interior_vertices():
                assert t.lca(t.leaves_below(v)) == v

    def test_multi_vertex_lca_matches_oracle(self):
        rng = random.Random(13)
        t = Tree(random_tree(rng, ["L%d" % i for i in range(15)]))
        for _ in range(50):
            vs = rng.sample(range(t.n_vertices), rng.randint(2, 5))
            assert t.lca(vs) == lca_walk(t, vs)


class TestRestrict:
    def test_full_leaf_set_is_identity(self):
        t = tree_of("((a,b),c);")
        assert t.restrict({"a", "b", "c"}).equivalent(t)

    def test_two_leaves_give_the_cherry(self):
        t = tree_of("((a,b),c);")
        r = t.restrict({"a", "c"})
        assert r.n_leaves == 2 and r.n_vertices == 3
        assert set(r.leaf_labels) == {"a", "c"}

    def test_too_few_labels_rejected(self):
        t = tree_of("((a,b),c);")
        with pytest.raises(ValueError):
            t.restrict({"a"})

    def test_unknown_label_rejected(self):
        t = tree_of("((a,b),c);")
        with pytest.raises(InputError):
            t.restrict({"a", "zz"})

    def test_restriction_keeps_exactly_the_covered_triples(self):
        rng = random.Random(3)
        for _ in range(8):
            t = Tree(random_tree(rng, ["L%d" % i for i in range(10)]))
            keep = set(rng.sample(t.leaf_labels, 4))
            expected = {r for r in t.displayed_triples()
                        if set(r.labels) <= keep}
            assert Tree.displayed_triples(t.restrict(keep)) == expected

    def test_idempotent(self):
        rng = random.Random(5)
        t = Tree(random_tree(rng, ["L%d" % i for i in range(9)], binary=False))
        keep = set(t.leaf_labels[:5])
        once = t.restrict(keep)
        assert once.restrict(keep).equivalent(once)

    def test_origin_map_points_at_source_vertices(self):
        t = tree_of("((a,b),(c,d));")
        sub, origin = t.restrict_with_map({"a", "c"})
        assert origin[sub.root] == t.root
        assert t.label(origin[sub.leaf_id("a")]) == "a"

    def test_suppressed_edges_sum_lengths(self):
        stree = parse_species_tree("((A:1.0,B:2.0):0.5,C:4.0);")
        t = stree.restrict({"A", "C"})
        assert t.length(t.leaf_id("A")) == pytest.approx(1.5)
        assert t.length(t.leaf_id("C")) == pytest.approx(4.0)


class TestDisplays:
    def test_own_triple(self):
        t = tree_of("((a,b),c);")
        assert t.displays(RootedTriple("a", "b", "c"))

    def test_wrong_outgroup(self):
        t = tree_of("((a,b),c);")
        assert not t.displays(RootedTriple("a", "c", "b"))

    def test_star_displays_nothing(self):
        t = tree_of("(a,b,c);")
        assert not t.displays(RootedTriple("a", "b", "c"))

    def test_unknown_label(self):
        t = tree_of("((a,b),c);")
        with pytest.raises(InputError):
            t.displays(RootedTriple("a", "b", "zz"))


def brute_force_triples(tree):
    """Displayed triples straight from the definition, via restriction."""
    out = set()
    for labs in combinations(sorted(tree.leaf_labels), 3):
        sub = tree.restrict(set(labs))
        for a, b, c in ((labs[0], labs[1], labs[2]),
                        (labs[0], labs[2], labs[1]),
                        (labs[1], labs[2], labs[0])):
            pair = sub.lca((sub.leaf_id(a), sub.leaf_id(b)))
            if pair != sub.root:
                out.add(RootedTriple(a, b, c))
    return out


class TestDisplayedTriples:
    def test_single_triple_tree(self):
        assert tree_of("((a,b),c);").displayed_triples() == {
            RootedTriple("a", "b", "c")}

    def test_star_has_none(self):
        assert tree_of("(a,b,c);").displayed_triples() == set()

    def test_balanced_four_leaves(self):
        # brute-forced by hand over the four 3-subsets
        expected = {RootedTriple("a", "b", "c"), RootedTriple("a", "b", "d"),
                    RootedTriple("c", "d", "a"), RootedTriple("c", "d", "b")}
        assert tree_of("((a,b),(c,d));").displayed_triples() == expected

    def test_binary_tree_has_all_subsets_resolved(self):
        rng = random.Random(17)
        t = Tree(random_tree(rng, ["L%d" % i for i in range(8)]))
        n = t.n_leaves
        assert len(t.displayed_triples()) == n * (n - 1) * (n - 2) // 6

    def test_matches_restriction_brute_force(self):
        rng = random.Random(19)
        for _ in range(6):
            t = Tree(random_tree(rng, ["L%d" % i for i in range(7)],
                                 binary=False))
            assert t.displayed_triples() == brute_force_triples(t)


class TestCanonicalForm:
    def test_child_order_ignored(self):
        a = tree_of("((a,b),c);")
        b = tree_of("(c,(b,a));")
        assert a.equivalent(b)

    def test_different_topologies_differ(self):
        assert not tree_of("((a,b),c);").equivalent(tree_of("((a,c),b);"))

    def test_vertex_ids_are_preorder(self):
        t = tree_of("((a,b),c);")
        assert t.root == 0
        for v in range(1, t.n_vertices):
            assert t.parent(v) < v

    def test_unary_interior_rejected(self):
        with pytest.raises(InputError):
            Tree(Node(children=[Node(children=[Node(label="a")]),
                                Node(label="b")]))

    def test_duplicate_leaf_labels_rejected(self):
        with pytest.raises(InputError):
            Tree(Node(children=[Node(label="a"), Node(label="a")]))


@st.composite
def seeded_tree(draw):
    seed = draw(st.integers(0, 10**9))
    n = draw(st.integers(4, 12))
    binary = draw(st.booleans())
    rng = random.Random(seed)
    return Tree(random_tree(rng, ["L%d" % i for i in range(n)], binary=binary))


@settings(max_examples=40, deadline=None)
@given(seeded_tree(), st.randoms(use_true_random=False))
def test_property_restriction_preserves_triples(tree, hyprng):
    keep = set(hyprng.sample(tree.leaf_labels, 3))
    sub = tree.restrict(keep)
    expected = {r for r in tree.displayed_triples() if set(r.labels) <= keep}
    assert sub.displayed_triples() == expected


@settings(max_examples=40, deadline=None)
@given(seeded_tree())
def test_property_displayed_triples_are_displayed(tree):
    for r in tree.displayed_triples():
        assert tree.displays(r)
