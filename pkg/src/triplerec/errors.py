"""Exception types shared across the package."""


class NewickError(ValueError):
    """Syntax error in a Newick or TSV document.

    ``position`` is the 0-based character offset of the offending token.
    """

    def __init__(self, message, position=None):
        if position is not None:
            message = "%s (position %d)" % (message, position)
        super().__init__(message)
        self.position = position


class InputError(ValueError):
    """Structurally well-formed input that violates a semantic requirement
    (duplicate ids, unknown labels, too few leaves, ...)."""


class LabelingError(InputError):
    """Gene-tree document whose event labeling is incompatible with its
    species assignment: some speciation vertex has two children subtrees
    that share a species.

    ``violations`` holds the offending (vertex, species, ...) records as
    produced by :func:`triplerec.triples.validate_labeling`.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__(
            "event labeling conflicts with species assignment: %d violation(s); "
            "first: %s" % (len(self.violations), self.violations[0],)
        )


class InconsistentTriples(Exception):
    """Raised by the supertree builder when no tree can display the input.

    ``labels`` is the label set of the stuck recursion step and ``triples``
    the input triples restricted to it (the minimal evidence of conflict).
    """

    def __init__(self, labels, triples):
        self.labels = frozenset(labels)
        self.triples = sorted(triples)
        super().__init__(
            "no tree on {%s} displays all %d triples"
            % (",".join(sorted(self.labels)), len(self.triples))
        )


class NoSpeciesTree(Exception):
    """The given species tree cannot host any reconciliation of the document.

    ``offending`` lists species triples derived from the gene tree that the
    species tree does not display (may be empty when the failure is caused
    by a labeling violation instead; see ``labeling_violations``).
    """

    def __init__(self, offending, labeling_violations=()):
        self.offending = sorted(offending)
        self.labeling_violations = list(labeling_violations)
        parts = ["species tree admits no reconciliation map"]
        if self.offending:
            parts.append(
                "%d undisplayed triple(s): %s"
                % (len(self.offending), ", ".join(str(t) for t in self.offending[:5]))
            )
        if self.labeling_violations:
            parts.append("%d labeling violation(s)" % len(self.labeling_violations))
        super().__init__("; ".join(parts))


class NotAContraction(Exception):
    """The inferred tree is not obtainable from the reference tree by edge
    contractions; carries both interior-vertex counts and the symmetric
    difference of the non-trivial cluster sets."""

    def __init__(self, true_interior, inferred_interior, cluster_symdiff):
        self.true_interior = true_interior
        self.inferred_interior = inferred_interior
        self.cluster_symdiff = cluster_symdiff
        super().__init__(
            "inferred tree is not a contraction of the reference tree "
            "(interior vertices %d vs %d, %d cluster(s) differ)"
            % (true_interior, inferred_interior, cluster_symdiff)
        )
