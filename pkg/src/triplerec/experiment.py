"""The end-to-end simulation study: simulate species trees and gene
families over a grid of duplication/loss rates, re-infer the species tree
from the informative triples, and score the recovery.

Replicate ``i`` of a run with master seed ``s`` derives its own seed as
``mix_seed(s, i)``; species-tree and gene-tree generation use further
derived seeds, so replicates are independent and can run in parallel
without changing any output.
"""

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import NotAContraction
from .metrics import interior_vertex_deficit, split_recovery
from .sim import evolve_gene_tree, generate_species_tree, mix_seed
from .supertree import build_species_tree
from .triples import informative_species_triples

COLUMNS = ("seed", "n_species", "dup_rate", "loss_rate",
           "n_dups", "n_losses", "split_recovery", "deficit")


@dataclass(frozen=True)
class ExperimentRow:
    seed: int
    n_species: int
    dup_rate: float
    loss_rate: float
    n_dups: int
    n_losses: int
    split_recovery: float
    deficit: int
    contraction: bool  # not part of the TSV; >95% of rows are expected True


def run_replicate(master_seed, index, min_species=10, max_species=100):
    seed = mix_seed(master_seed, index)
    rng = np.random.default_rng(seed)
    n = int(rng.integers(min_species, max_species + 1))
    dup_rate = float(rng.random())
    loss_rate = float(rng.random())
    stree = generate_species_tree(n, mix_seed(seed, 1))
    scenario = evolve_gene_tree(stree, dup_rate, loss_rate, mix_seed(seed, 2))
    triples = informative_species_triples(scenario.observable)
    inferred = build_species_tree(triples, stree.species)
    recovery = split_recovery(stree, inferred)
    try:
        deficit = interior_vertex_deficit(stree, inferred)
        contraction = True
    except NotAContraction as exc:
        deficit = exc.true_interior - exc.inferred_interior
        contraction = False
    return ExperimentRow(seed, n, dup_rate, loss_rate,
                         scenario.n_duplications, scenario.n_losses,
                         recovery, deficit, contraction)


def _replicate_task(args):
    return run_replicate(*args)


def run_experiment(replicates, master_seed, min_species=10, max_species=100,
                   threads=1):
    """All replicate rows, in replicate order regardless of ``threads``."""
    tasks = [(master_seed, i, min_species, max_species)
             for i in range(replicates)]
    if threads <= 1:
        return [run_replicate(*t) for t in tasks]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        chunk = max(1, replicates // (threads * 4))
        return list(pool.map(_replicate_task, tasks, chunksize=chunk))


def _row_values(row):
    return (row.seed, row.n_species, "%.6f" % row.dup_rate,
            "%.6f" % row.loss_rate, row.n_dups, row.n_losses,
            "%.6f" % row.split_recovery, row.deficit)


def rows_to_tsv(rows):
    lines = ["\t".join(COLUMNS)]
    for row in rows:
        lines.append("\t".join(str(x) for x in _row_values(row)))
    return "\n".join(lines) + "\n"


def rows_to_json(rows):
    out = [{"seed": row.seed, "n_species": row.n_species,
            "dup_rate": row.dup_rate, "loss_rate": row.loss_rate,
            "n_dups": row.n_dups, "n_losses": row.n_losses,
            "split_recovery": row.split_recovery, "deficit": row.deficit}
           for row in rows]
    return json.dumps(out, indent=2) + "\n"


def summary_grid(rows, bins=10):
    """Mean split recovery on a rate grid; the binning (equal-width cells
    over [0,1]^2, bin = floor(rate*bins)) is this tool's own choice."""
    cells = {}
    for row in rows:
        i = min(int(row.dup_rate * bins), bins - 1)
        j = min(int(row.loss_rate * bins), bins - 1)
        cells.setdefault((i, j), []).append(row.split_recovery)
    lines = ["# mean split recovery on a %dx%d duplication-rate x loss-rate "
             "grid (equal-width bins over [0,1], this tool's choice)" % (bins, bins),
             "dup_bin\tloss_bin\tn\tmean_split_recovery"]
    for (i, j) in sorted(cells):
        vals = cells[(i, j)]
        lines.append("%d\t%d\t%d\t%.6f" % (i, j, len(vals),
                                           sum(vals) / len(vals)))
    return "\n".join(lines) + "\n"
