"""Command-line interface.

Subcommands: ``simulate``, ``triples``, ``infer``, ``reconcile``,
``validate``, ``realize``, ``experiment``.  Exit codes: 0 success,
1 usage/parse/input error, 2 domain verdict (inconsistent triples,
no reconciliation, validation findings), 3 internal error.

The environment variable ``TRIPLEREC_SEED`` overrides the default seed;
an explicit ``--seed`` flag wins over both.
"""

import argparse
import os
import sys
import traceback
from itertools import islice

from . import experiment as exp
from .errors import (InconsistentTriples, InputError, LabelingError,
                     NewickError, NoSpeciesTree)
from .newick import (parse_gene_tree, parse_species_tree,
                     read_reconciliation_tsv, read_species_map_tsv,
                     read_triples_tsv, write_gene_newick,
                     write_debug_newick, write_reconciliation_tsv,
                     write_species_newick, write_triples_tsv)
from .reconcile import (enumerate_reconciliations, reconcile,
                        validate_reconciliation)
from .sim import evolve_gene_tree, generate_species_tree, mix_seed, realize_triples
from .supertree import build_species_tree
from .triples import (informative_gene_triples, informative_species_triples,
                      validate_labeling)

ENV_SEED = "TRIPLEREC_SEED"
DEFAULT_SEED = 1


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _default_seed():
    env = os.environ.get(ENV_SEED)
    if env:
        try:
            return int(env)
        except ValueError:
            raise _UsageError("%s must be an integer, got %r" % (ENV_SEED, env))
    return DEFAULT_SEED


def _read(path):
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _emit(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _load_gene_doc(args):
    species_map = None
    if getattr(args, "species_map", None):
        species_map = read_species_map_tsv(_read(args.species_map))
    return parse_gene_tree(_read(args.gene), species_map=species_map)


# ---------------------------------------------------------------------- #
# subcommands
# ---------------------------------------------------------------------- #

def _cmd_simulate(args):
    seed = args.seed if args.seed is not None else _default_seed()
    stree = generate_species_tree(args.species, mix_seed(seed, 1),
                                  model=args.model)
    scenario = evolve_gene_tree(stree, args.dup_rate, args.loss_rate,
                                mix_seed(seed, 2))
    species_text = write_species_newick(stree) + "\n"
    gene_text = write_gene_newick(scenario.observable) + "\n"
    _emit(species_text, args.out_species)
    _emit(gene_text, args.out_gene)
    if args.out_true_gene:
        _emit(write_debug_newick(scenario.true_tree, scenario.true_events,
                                 scenario.true_species_of) + "\n",
              args.out_true_gene)
    return 0


def _cmd_triples(args):
    doc = _load_gene_doc(args)
    if args.genes_level:
        trips = informative_gene_triples(doc, force=args.force)
    else:
        trips = informative_species_triples(doc, force=args.force)
    text = write_triples_tsv(trips)
    if args.force:
        violations = validate_labeling(doc)
        if violations:
            text = ("# warning: %d labeling violation(s); triples are "
                    "unreliable\n" % len(violations)) + text
    _emit(text, args.out)
    return 0


def _cmd_infer(args):
    doc = _load_gene_doc(args)
    trips = informative_species_triples(doc)
    stree = build_species_tree(trips, doc.species)
    for t in trips:  # self-check: the output must display its own input
        if not stree.displays(t):
            raise RuntimeError("inferred tree fails to display %s" % t)
    _emit(write_species_newick(stree, with_lengths=False) + "\n", args.out)
    return 0


def _cmd_reconcile(args):
    doc = _load_gene_doc(args)
    stree = parse_species_tree(_read(args.species))
    if args.enumerate is not None:
        maps = list(islice(enumerate_reconciliations(doc, stree),
                           args.enumerate))
        parts = []
        for i, mapping in enumerate(maps):
            parts.append("# map %d\n%s" % (i, write_reconciliation_tsv(mapping)))
        _emit("".join(parts), args.out)
    else:
        _emit(write_reconciliation_tsv(reconcile(doc, stree)), args.out)
    return 0


def _cmd_validate(args):
    if (args.species is None) != (args.map is None):
        raise _UsageError("--species and --map must be given together")
    doc = _load_gene_doc(args)
    if args.species is None:
        findings = [str(v) for v in validate_labeling(doc)]
    else:
        stree = parse_species_tree(_read(args.species))
        mapping = read_reconciliation_tsv(_read(args.map))
        findings = list(validate_reconciliation(doc, stree, mapping))
        findings = [str(v) for v in validate_labeling(doc)] + findings
    if findings:
        for line in findings:
            print(line)
        return 2
    print("no violations")
    return 0


def _cmd_realize(args):
    triples = read_triples_tsv(_read(args.triples))
    doc = realize_triples(triples)
    _emit(write_gene_newick(doc) + "\n", args.out)
    return 0


def _cmd_experiment(args):
    seed = args.seed if args.seed is not None else _default_seed()
    rows = exp.run_experiment(args.replicates, seed,
                              min_species=args.min_species,
                              max_species=args.max_species,
                              threads=args.threads)
    if args.format == "json":
        text = exp.rows_to_json(rows)
    else:
        text = exp.rows_to_tsv(rows)
    _emit(text, args.out)
    if args.summary_out:
        _emit(exp.summary_grid(rows), args.summary_out)
    weird = sum(1 for r in rows if not r.contraction)
    if weird:
        print("warning: %d/%d inferred trees were not contractions of the "
              "true species tree" % (weird, len(rows)), file=sys.stderr)
    return 0


# ---------------------------------------------------------------------- #

def build_parser():
    parser = _Parser(prog="triplerec",
                     description="Species trees and reconciliation maps "
                                 "from event-labeled gene trees.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate a species tree and a gene family")
    p.add_argument("--species", type=int, required=True)
    p.add_argument("--dup-rate", type=float, required=True)
    p.add_argument("--loss-rate", type=float, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--model", choices=("age", "yule"), default="age")
    p.add_argument("--out-species", default=None)
    p.add_argument("--out-gene", default=None)
    p.add_argument("--out-true-gene", default=None,
                   help="debug dump of the full gene tree incl. losses")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("triples", help="extract the informative triples")
    p.add_argument("--gene", required=True)
    p.add_argument("--species-map", default=None,
                   help="sidecar TSV assigning species to bare gene ids")
    p.add_argument("--genes-level", action="store_true",
                   help="emit gene-leaf triples instead of species triples")
    p.add_argument("--force", action="store_true",
                   help="proceed despite labeling violations")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_triples)

    p = sub.add_parser("infer", help="infer a species tree from a gene tree")
    p.add_argument("--gene", required=True)
    p.add_argument("--species-map", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_infer)

    p = sub.add_parser("reconcile", help="map a gene tree into a species tree")
    p.add_argument("--gene", required=True)
    p.add_argument("--species", required=True)
    p.add_argument("--species-map", default=None)
    p.add_argument("--enumerate", type=int, default=None, metavar="K",
                   help="emit up to K alternative duplication placements")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_reconcile)

    p = sub.add_parser("validate",
                       help="check a gene tree (and optionally a map)")
    p.add_argument("--gene", required=True)
    p.add_argument("--species-map", default=None)
    p.add_argument("--species", default=None)
    p.add_argument("--map", default=None)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("realize",
                       help="build a gene tree realizing a triple set")
    p.add_argument("--triples", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_realize)

    p = sub.add_parser("experiment", help="run the recovery experiment")
    p.add_argument("--replicates", type=int, required=True)
    p.add_argument("--min-species", type=int, default=10)
    p.add_argument("--max-species", type=int, default=100)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--format", choices=("tsv", "json"), default="tsv")
    p.add_argument("--out", default=None)
    p.add_argument("--summary-out", default=None,
                   help="also write the binned rate-grid summary")
    p.set_defaults(func=_cmd_experiment)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return 1
    except (NewickError, InputError, OSError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except InconsistentTriples as exc:
        print("inconsistent triples on {%s}:" % ",".join(sorted(exc.labels)),
              file=sys.stderr)
        for t in exc.triples:
            print("  %s" % t, file=sys.stderr)
        return 2
    except NoSpeciesTree as exc:
        print("no reconciliation: %s" % exc, file=sys.stderr)
        for t in exc.offending:
            print("  not displayed: %s" % t, file=sys.stderr)
        return 2
    except Exception:
        traceback.print_exc()
        return 3


if __name__ == "__main__":
    sys.exit(main())
