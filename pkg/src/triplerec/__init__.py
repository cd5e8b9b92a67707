"""triplerec: species trees and reconciliation maps from event-labeled
gene trees.

Pipeline: parse an event-labeled gene tree, extract the rooted triples that
are informative about the species tree, decide whether any species tree
displays them (and build one), and construct/validate reconciliation maps.
A simulator of duplication/loss evolution and split-recovery metrics
support the accompanying experiment.
"""

from .errors import (InconsistentTriples, InputError, LabelingError,
                     NewickError, NoSpeciesTree, NotAContraction)
from .tree import (DUPLICATION, EXTANT, LOSS, SPECIATION, GeneTreeDocument,
                   Node, RootedTriple, SpeciesTree, Tree)
from .newick import (parse_gene_tree, parse_species_tree,
                     read_reconciliation_tsv, read_species_map_tsv,
                     read_triples_tsv, write_debug_newick, write_gene_newick,
                     write_reconciliation_tsv, write_species_newick,
                     write_triples_tsv)
from .triples import (informative_gene_triples, informative_species_triples,
                      species_image, validate_labeling)
from .supertree import build_species_tree, is_consistent, is_minor_minimal
from .reconcile import (enumerate_reconciliations, reconcile,
                        species_lca_images, validate_reconciliation)
from .sim import (Scenario, evolve_gene_tree, generate_species_tree,
                  mix_seed, realize_triples, species_labels)
from .metrics import interior_vertex_deficit, is_contraction_of, split_recovery
from .experiment import ExperimentRow, run_experiment, run_replicate

__version__ = "0.1.0"

__all__ = [
    "DUPLICATION", "EXTANT", "LOSS", "SPECIATION",
    "ExperimentRow", "GeneTreeDocument", "InconsistentTriples", "InputError",
    "LabelingError", "NewickError", "NoSpeciesTree", "Node",
    "NotAContraction", "RootedTriple", "Scenario", "SpeciesTree", "Tree",
    "build_species_tree", "enumerate_reconciliations", "evolve_gene_tree",
    "generate_species_tree", "informative_gene_triples",
    "informative_species_triples", "interior_vertex_deficit",
    "is_consistent", "is_contraction_of", "is_minor_minimal", "mix_seed",
    "parse_gene_tree", "parse_species_tree", "read_reconciliation_tsv",
    "read_species_map_tsv", "read_triples_tsv", "realize_triples",
    "reconcile", "run_experiment", "run_replicate", "species_image",
    "species_labels", "species_lca_images", "split_recovery",
    "validate_labeling", "validate_reconciliation", "write_debug_newick",
    "write_gene_newick", "write_reconciliation_tsv", "write_species_newick",
    "write_triples_tsv",
]
