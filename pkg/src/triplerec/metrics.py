"""Agreement metrics between a reference species tree and an inferred one.

Both work on non-trivial clusters: the leaf-label sets of interior
vertices, excluding the full species set and the synthetic top vertex
(those are shared by every tree on the same species and would inflate
agreement).
"""

from .errors import InputError, NotAContraction


def _check_leaves(true_tree, inferred_tree):
    if true_tree.species != inferred_tree.species:
        raise InputError("trees are over different species sets")


def split_recovery(true_tree, inferred_tree):
    """Fraction of the reference tree's non-trivial clusters present in the
    inferred tree (1.0 when the reference has none)."""
    _check_leaves(true_tree, inferred_tree)
    truth = true_tree.nontrivial_clusters()
    if not truth:
        return 1.0
    found = inferred_tree.nontrivial_clusters()
    return len(truth & found) / len(truth)


def is_contraction_of(inferred_tree, reference_tree):
    """True iff ``inferred_tree`` can be obtained from ``reference_tree``
    by contracting interior edges (equivalently, its clusters are a subset
    of the reference's)."""
    _check_leaves(reference_tree, inferred_tree)
    return inferred_tree.nontrivial_clusters() <= reference_tree.nontrivial_clusters()


def interior_vertex_deficit(true_tree, inferred_tree):
    """Interior vertices lost going from the reference tree to the inferred
    one.  Requires the inferred tree to be a contraction of the reference
    (then the deficit equals the number of unrecovered clusters); raises
    :class:`NotAContraction` carrying both counts otherwise."""
    _check_leaves(true_tree, inferred_tree)
    truth = true_tree.nontrivial_clusters()
    found = inferred_tree.nontrivial_clusters()
    n_true = true_tree.interior_count()
    n_inferred = inferred_tree.interior_count()
    if not found <= truth:
        raise NotAContraction(n_true, n_inferred, len(truth ^ found))
    return n_true - n_inferred
