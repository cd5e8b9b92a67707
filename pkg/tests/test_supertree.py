"""Supertree construction (BUILD) and triple-set consistency."""

import random
from itertools import combinations

import pytest

from conftest import all_species_trees, random_tree
from triplerec import (InconsistentTriples, InputError, RootedTriple, Tree,
                       build_species_tree, is_consistent, is_minor_minimal,
                       write_species_newick)


def T(a, b, c):
    return RootedTriple(a, b, c)


def brute_force_consistent(triples, labels):
    """Oracle: scan every rooted tree on the label set."""
    for stree in all_species_trees(tuple(sorted(labels))):
        if all(stree.displays(t) for t in triples):
            return True
    return False


class TestBuild:
    def test_single_triple(self):
        s = build_species_tree({T("A", "B", "C")}, {"A", "B", "C"})
        assert write_species_newick(s) == "((A,B),C);"

    def test_contradiction(self):
        with pytest.raises(InconsistentTriples) as err:
            build_species_tree({T("A", "B", "C"), T("B", "C", "A")},
                               {"A", "B", "C"})
        assert err.value.labels == {"A", "B", "C"}
        assert set(err.value.triples) == {T("A", "B", "C"), T("B", "C", "A")}

    def test_two_components(self):
        s = build_species_tree({T("A", "B", "C"), T("C", "D", "B")},
                               {"A", "B", "C", "D"})
        assert write_species_newick(s) == "((A,B),(C,D));"
        # cross-check against the exhaustive oracle
        assert brute_force_consistent({T("A", "B", "C"), T("C", "D", "B")},
                                      "ABCD")

    def test_empty_set_gives_star(self):
        s = build_species_tree(set(), {"A", "B", "C", "D"})
        assert write_species_newick(s) == "(A,B,C,D);"

    def test_singleton_universe(self):
        s = build_species_tree(set(), {"A"})
        assert write_species_newick(s) == "A;"

    def test_unknown_label_rejected(self):
        with pytest.raises(InputError):
            build_species_tree({T("A", "B", "C")}, {"A", "B"})

    def test_deterministic_under_input_order(self):
        trips = [T("A", "B", "E"), T("C", "D", "A"), T("A", "E", "C")]
        ref = write_species_newick(build_species_tree(trips, "ABCDE"))
        rng = random.Random(3)
        for _ in range(10):
            rng.shuffle(trips)
            assert write_species_newick(build_species_tree(trips, "ABCDE")) == ref

    def test_output_displays_every_input(self):
        rng = random.Random(5)
        for _ in range(100):
            labels = ["L%d" % i for i in range(7)]
            src = Tree(random_tree(rng, labels))
            pool = sorted(src.displayed_triples())
            sample = rng.sample(pool, rng.randint(0, min(12, len(pool))))
            stree = build_species_tree(sample, labels)  # consistent by origin
            assert all(stree.displays(t) for t in sample)

    def test_verdict_matches_brute_force_small(self):
        rng = random.Random(7)
        labels = ("A", "B", "C", "D")
        pool = [T(a, b, c)
                for a, b, c in combinations(labels, 3)] + \
               [T(a, c, b) for a, b, c in combinations(labels, 3)] + \
               [T(b, c, a) for a, b, c in combinations(labels, 3)]
        for _ in range(300):
            sample = rng.sample(pool, rng.randint(0, 6))
            assert is_consistent(sample, labels) == \
                brute_force_consistent(sample, labels)


class TestIsConsistent:
    def test_empty(self):
        assert is_consistent(set())

    def test_contradiction(self):
        assert not is_consistent({T("A", "B", "C"), T("B", "C", "A")})

    def test_subsets_of_a_displayed_set(self):
        rng = random.Random(11)
        src = Tree(random_tree(rng, ["L%d" % i for i in range(7)]))
        pool = sorted(src.displayed_triples())
        for _ in range(100):
            sample = rng.sample(pool, rng.randint(0, len(pool)))
            assert is_consistent(sample, src.leaf_labels)


class TestMinorMinimal:
    def test_single_triple_output_is_minimal(self):
        trips = {T("A", "B", "C")}
        assert is_minor_minimal(build_species_tree(trips, "ABC"), trips)

    def test_resolved_tree_with_no_triples_is_not(self):
        from triplerec import parse_species_tree
        stree = parse_species_tree("((A,B),(C,D));")
        assert not is_minor_minimal(stree, set())

    def test_requires_displaying_input(self):
        from triplerec import parse_species_tree
        stree = parse_species_tree("((A,B),(C,D));")
        with pytest.raises(InputError):
            is_minor_minimal(stree, {T("A", "C", "B")})

    def test_build_outputs_are_minor_minimal(self):
        rng = random.Random(13)
        for _ in range(200):
            labels = ["L%d" % i for i in range(6)]
            src = Tree(random_tree(rng, labels, binary=bool(rng.getrandbits(1))))
            pool = sorted(src.displayed_triples())
            sample = rng.sample(pool, rng.randint(0, min(10, len(pool))))
            stree = build_species_tree(sample, labels)
            assert is_minor_minimal(stree, sample)
