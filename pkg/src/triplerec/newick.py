"""Text formats: Newick trees, triple TSV, and reconciliation-map TSV.

Gene trees
    Leaves are ``geneId@speciesId`` tokens (charset ``[A-Za-z0-9_.-]``),
    interior vertices carry exactly ``S`` (speciation) or ``D``
    (duplication), the statement ends with ``;``.  Branch lengths are
    accepted and ignored.  Example: ``((a@A,b@B)S,c@C)S;``

Species trees
    Plain Newick over species labels with optional ``:length`` suffixes.
    The parsed tree is augmented with the synthetic top vertex; output is
    always the un-augmented tree, so parse/serialize round-trips.

Serialization is canonical: children ordered by smallest leaf label, float
lengths written with ``repr``.  Parsing a canonical string and serializing
it again is the identity.
"""

from .errors import InputError, NewickError
from .tree import (DUPLICATION, EXTANT, LOSS, SPECIATION, GeneTreeDocument,
                   Node, RootedTriple, SpeciesTree)

_NAME_CHARS = frozenset(
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_.-")

_EVENT_OF = {"S": SPECIATION, "D": DUPLICATION}
_CODE_OF = {SPECIATION: "S", DUPLICATION: "D"}


class _Scanner:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        t = self.text
        while self.pos < len(t) and t[self.pos] in " \t\r\n":
            self.pos += 1

    def peek(self):
        self.skip_ws()
        if self.pos >= len(self.text):
            return ""
        return self.text[self.pos]

    def take(self, ch):
        if self.peek() != ch:
            raise NewickError("expected %r" % ch, self.pos)
        self.pos += 1

    def name(self, what):
        self.skip_ws()
        start = self.pos
        t = self.text
        while self.pos < len(t) and t[self.pos] in _NAME_CHARS:
            self.pos += 1
        if self.pos == start:
            raise NewickError("expected %s" % what, start)
        return t[start:self.pos], start

    def number(self):
        self.skip_ws()
        start = self.pos
        t = self.text
        while self.pos < len(t) and (t[self.pos].isdigit()
                                     or t[self.pos] in "+-.eE"):
            self.pos += 1
        if self.pos == start:
            raise NewickError("expected a branch length", start)
        try:
            return float(t[start:self.pos])
        except ValueError:
            raise NewickError("bad branch length %r" % t[start:self.pos],
                              start) from None

    def finish(self):
        self.take(";")
        self.skip_ws()
        if self.pos != len(self.text):
            raise NewickError("trailing characters after ';'", self.pos)


def _parse_subtrees(sc, leaf_fn, interior_fn, lengths):
    """Iterative Newick descent; ``leaf_fn``/``interior_fn`` build Nodes."""
    stack = []  # open groups: lists of finished children
    while True:
        if sc.peek() == "(":
            sc.take("(")
            stack.append([])
            continue
        # a leaf token
        node = leaf_fn(sc)
        if sc.peek() == ":":
            sc.take(":")
            length = sc.number()
            if lengths:
                node.length = length
        # close as many groups as possible
        while True:
            if not stack:
                return node
            if sc.peek() == ",":
                sc.take(",")
                stack[-1].append(node)
                break
            if sc.peek() != ")":
                raise NewickError("expected ',' or ')'", sc.pos)
            close_pos = sc.pos
            sc.take(")")
            group = stack.pop()
            group.append(node)
            if len(group) < 2:
                raise NewickError("interior vertex needs at least two children",
                                  close_pos)
            node = interior_fn(sc, group, close_pos)
            if sc.peek() == ":":
                sc.take(":")
                length = sc.number()
                if lengths:
                    node.length = length


def parse_gene_tree(text, species_map=None):
    """Parse an event-labeled gene tree into a :class:`GeneTreeDocument`.

    ``species_map`` (gene id -> species id) supplies assignments for leaves
    written without the inline ``@species`` suffix; inline wins when both
    are present.
    """
    sc = _Scanner(text)

    def leaf(sc):
        gene, start = sc.name("a gene id")
        species = None
        if sc.peek() == "@":
            sc.take("@")
            species, _ = sc.name("a species id")
        elif species_map is not None:
            species = species_map.get(gene)
            if species is None:
                raise InputError("gene %r missing from the species mapping" % gene)
        else:
            raise NewickError("leaf %r lacks an @species suffix" % gene, start)
        return Node(label=gene, event=EXTANT, species=species)

    def interior(sc, children, close_pos):
        if sc.peek() not in _NAME_CHARS:
            raise NewickError("missing event label (expected S or D)", sc.pos)
        code, start = sc.name("an event label")
        event = _EVENT_OF.get(code)
        if event is None:
            raise NewickError("unknown event label %r" % code, start)
        return Node(children=children, event=event)

    root = _parse_subtrees(sc, leaf, interior, lengths=False)
    sc.finish()
    if not root.children:
        raise InputError("a gene tree needs at least 3 leaves")
    doc = GeneTreeDocument.from_nodes(root)
    if doc.tree.n_leaves < 3:
        raise InputError("a gene tree needs at least 3 leaves")
    return doc


def parse_species_tree(text, origin_length=None):
    """Parse a plain Newick species tree; the synthetic top vertex is added
    automatically (and never serialized back)."""
    sc = _Scanner(text)

    def leaf(sc):
        label, _ = sc.name("a species label")
        return Node(label=label)

    def interior(sc, children, close_pos):
        if sc.peek() in _NAME_CHARS:
            raise NewickError("species trees carry no interior labels", sc.pos)
        return Node(children=children)

    root = _parse_subtrees(sc, leaf, interior, lengths=True)
    sc.finish()
    root.length = None
    return SpeciesTree.from_base(root, origin_length=origin_length)


# ---------------------------------------------------------------------- #
# serialization
# ---------------------------------------------------------------------- #

def _write_newick(tree, top, leaf_token, interior_suffix, with_lengths):
    out = []
    stack = [("v", top)]
    while stack:
        kind, item = stack.pop()
        if kind == "t":
            out.append(item)
            continue
        v = item
        suffix = ""
        if with_lengths and v != top and tree.length(v) is not None:
            suffix = ":" + repr(tree.length(v))
        if tree.is_leaf(v):
            out.append(leaf_token(v) + suffix)
            continue
        out.append("(")
        stack.append(("t", ")" + interior_suffix(v) + suffix))
        chs = tree.children(v)
        for i in range(len(chs) - 1, -1, -1):
            stack.append(("v", chs[i]))
            if i > 0:
                stack.append(("t", ","))
    return "".join(out) + ";"


def write_gene_newick(doc):
    """Canonical gene-tree Newick with S/D labels and @species suffixes."""
    tree = doc.tree
    return _write_newick(
        tree, tree.root,
        lambda v: "%s@%s" % (tree.label(v), doc.species_of[v]),
        lambda v: _CODE_OF[doc.events[v]],
        with_lengths=False)


def write_species_newick(stree, with_lengths=True):
    """Canonical species-tree Newick, synthetic top vertex omitted."""
    return _write_newick(
        stree, stree.base,
        lambda v: stree.label(v),
        lambda v: "",
        with_lengths=with_lengths)


def write_debug_newick(tree, events, species_of):
    """Full simulated gene tree including losses; loss leaves are written as
    the bare token ``L``.  Debug output only: not parseable (loss tokens
    repeat and carry no species)."""

    def leaf(v):
        if events[v] == LOSS:
            return "L"
        return "%s@%s" % (tree.label(v), species_of[v])

    return _write_newick(tree, tree.root, leaf,
                         lambda v: _CODE_OF[events[v]], with_lengths=False)


# ---------------------------------------------------------------------- #
# TSV formats
# ---------------------------------------------------------------------- #

def write_triples_tsv(triples):
    """Three columns ``a b c`` meaning ((a,b),c); ingroup sorted within the
    row, rows sorted."""
    lines = ["%s\t%s\t%s" % t.labels for t in sorted(triples)]
    return "\n".join(lines) + ("\n" if lines else "")


def read_triples_tsv(text):
    out = set()
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 3:
            raise InputError("line %d: expected 3 tab-separated columns" % ln)
        try:
            out.add(RootedTriple(*cols))
        except ValueError as exc:
            raise InputError("line %d: %s" % (ln, exc)) from None
    return out


def write_reconciliation_tsv(mapping):
    """Rows ``geneVertex <TAB> V|E <TAB> speciesVertex[/childVertex]``."""
    lines = []
    for v in sorted(mapping):
        img = mapping[v]
        if isinstance(img, tuple):
            lines.append("%d\tE\t%d/%d" % (v, img[0], img[1]))
        else:
            lines.append("%d\tV\t%d" % (v, img))
    return "\n".join(lines) + ("\n" if lines else "")


def read_reconciliation_tsv(text):
    mapping = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 3 or cols[1] not in ("V", "E"):
            raise InputError("line %d: expected 'vertex V|E image'" % ln)
        try:
            v = int(cols[0])
            if cols[1] == "V":
                img = int(cols[2])
            else:
                u, w = cols[2].split("/")
                img = (int(u), int(w))
        except ValueError:
            raise InputError("line %d: malformed vertex id" % ln) from None
        if v in mapping:
            raise InputError("line %d: duplicate gene vertex %d" % (ln, v))
        mapping[v] = img
    return mapping


def read_species_map_tsv(text):
    """Sidecar gene-to-species mapping: two tab-separated columns."""
    out = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 2 or not cols[0] or not cols[1]:
            raise InputError("line %d: expected 'gene<TAB>species'" % ln)
        if cols[0] in out:
            raise InputError("line %d: duplicate gene id %r" % (ln, cols[0]))
        out[cols[0]] = cols[1]
    return out
