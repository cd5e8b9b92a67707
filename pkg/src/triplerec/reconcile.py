"""Reconciliation maps between event-labeled gene trees and species trees.

A map sends every gene-tree vertex to a species-tree vertex (speciations,
extant genes) or to a directed species-tree edge (duplications).  The
canonical construction is LCA-like: each vertex goes to the common species
ancestor of the species below it, duplications to the edge immediately
above that ancestor.  Speciation and leaf images admit no freedom at all;
duplications may be pushed onto any edge further up, which
:func:`enumerate_reconciliations` walks exhaustively.

Vertex/edge comparisons use the order extension where, for an edge
e = (u, v) running down into v:  ``x < e`` iff ``x <= v``;  ``e < x`` iff
``u <= x``;  and ``(u, v) <= (a, b)`` iff ``v <= b``.
"""

from itertools import islice

import numpy as np

from .errors import InputError, LabelingError, NoSpeciesTree
from .triples import informative_species_triples, validate_labeling
from .tree import DUPLICATION, EXTANT, SPECIATION

_MAX_REPORTS = 25  # per rule, to keep violation lists readable


def species_lca_images(doc, stree):
    """For every gene-tree vertex, the species-tree LCA of the species
    found below it.  One bottom-up pass plus one vectorized RMQ batch."""
    tree = doc.tree
    idx = stree._ensure_index()
    first = idx.first
    leaf_fo = {}
    for lab in stree.species:
        leaf_fo[lab] = int(first[stree.leaf_id(lab)])

    n = tree.n_vertices
    lo = np.empty(n, dtype=np.int64)
    hi = np.empty(n, dtype=np.int64)
    for v in range(n - 1, -1, -1):
        if tree.is_leaf(v):
            sp = doc.species_of[v]
            if sp not in leaf_fo:
                raise InputError("species %r not in the species tree" % sp)
            lo[v] = hi[v] = leaf_fo[sp]
        else:
            chs = tree.children(v)
            a = lo[chs[0]]
            b = hi[chs[0]]
            for c in chs[1:]:
                if lo[c] < a:
                    a = lo[c]
                if hi[c] > b:
                    b = hi[c]
            lo[v] = a
            hi[v] = b
    return idx.batch_positions(lo, hi)


def reconcile(doc, stree):
    """Construct the canonical reconciliation map, or prove none exists.

    Runs in time linear in the gene tree after the species-tree index is
    built.  Raises :class:`LabelingError` if the document's event labeling
    is inadmissible and :class:`NoSpeciesTree` (listing the undisplayed
    species triples) if the species tree cannot host any map.
    """
    violations = validate_labeling(doc)
    if violations:
        raise LabelingError(violations)

    tree = doc.tree
    imgs = species_lca_images(doc, stree)
    events = doc.events
    mapping = {}
    ok = True
    for v in range(tree.n_vertices):
        if tree.is_leaf(v):
            mapping[v] = stree.leaf_id(doc.species_of[v])
        elif events[v] == SPECIATION:
            w = int(imgs[v])
            mapping[v] = w
            if stree.is_leaf(w):
                ok = False
        else:
            w = int(imgs[v])
            mapping[v] = (stree.parent(w), w)

    # Ancestor order along edges.  Nested species sets already give weak
    # monotonicity everywhere; what can fail is strictness below a
    # speciation vertex, and only there.
    if ok:
        for x in range(1, tree.n_vertices):
            p = tree.parent(x)
            if events[p] != SPECIATION:
                continue
            wp = mapping[p]
            if events[x] == DUPLICATION:
                if mapping[x][1] == wp:
                    ok = False
                    break
            elif mapping[x] == wp:
                ok = False
                break

    if not ok:
        offending = [t for t in informative_species_triples(doc)
                     if not stree.displays(t)]
        raise NoSpeciesTree(offending)
    return mapping


def enumerate_reconciliations(doc, stree, limit=None):
    """Yield every valid reconciliation map, canonical one first.

    Leaf and speciation images are forced; each duplication ranges over the
    edges from its species LCA up to the synthetic edge, subject to the
    ancestor-order constraints (nested duplications may share an edge).
    """
    base = reconcile(doc, stree)
    tree = doc.tree
    events = doc.events
    dups = [v for v in range(tree.n_vertices) if events[v] == DUPLICATION]

    def candidates(v):
        out = []
        w = base[v][1]
        while w != stree.rho:
            out.append((stree.parent(w), w))
            w = stree.parent(w)
        return out

    cand = {v: candidates(v) for v in dups}
    assignment = dict(base)

    def admissible(v, edge):
        if v == 0:
            return True
        p = tree.parent(v)
        if events[p] == DUPLICATION:
            # below a duplication: weakly lower edge
            return stree.is_ancestor_or_equal(assignment[p][1], edge[1])
        # below a speciation vertex: strictly lower
        wp = assignment[p]
        return edge[1] != wp and stree.is_ancestor_or_equal(wp, edge[1])

    def walk(i):
        if i == len(dups):
            yield dict(assignment)
            return
        v = dups[i]
        for e in cand[v]:
            if admissible(v, e):
                assignment[v] = e
                yield from walk(i + 1)
        assignment[v] = base[v]

    gen = walk(0)
    if limit is not None:
        gen = islice(gen, limit)
    return gen


# ---------------------------------------------------------------------- #
# validation
# ---------------------------------------------------------------------- #

def _species_order_tables(stree):
    """(ancestor-or-equal matrix, all-pairs LCA table) over species vertices."""
    w = stree.n_vertices
    ids = np.arange(w)
    size = np.array(stree._size)
    high = ids + size - 1
    # aoe[u, x]: u lies on the path from x to the top (u == x included)
    aoe = (ids[None, :] >= ids[:, None]) & (ids[None, :] <= high[:, None])
    lca_tab = stree.batch_lca(np.repeat(ids, w), np.tile(ids, w)).reshape(w, w)
    return aoe, lca_tab


def _ext_leq(aoe, ka, la, ua, kb, lb, ub):
    """Vectorized a <= b over vertex-or-edge images (k: is-edge flag,
    l: lower endpoint / vertex, u: upper endpoint)."""
    base = aoe[lb, la]
    mask = ka & ~kb
    if np.any(mask):
        base = np.where(mask, aoe[lb, ua], base)
    return base


def _ext_lt(aoe, ka, la, ua, kb, lb, ub):
    same = (ka == kb) & (la == lb)
    return _ext_leq(aoe, ka, la, ua, kb, lb, ub) & ~same


def validate_reconciliation(doc, stree, mapping):
    """Check a candidate map against the full reconciliation axioms; the
    returned list of messages is empty iff the map is valid.

    Checked per vertex: (i) extant genes sit on their species, (ii)
    speciations on interior vertices, (iii) duplications on edges, (v)
    speciations exactly on the LCA of their species set, plus the derived
    forms: vertex images must equal that LCA, edge images must lie strictly
    above it.  Checked per vertex pair: ancestor order is preserved, weakly
    between duplications and strictly otherwise, and the LCA of any two
    images stays at or below the image of the corresponding gene-tree LCA.
    """
    tree = doc.tree
    events = doc.events
    n = tree.n_vertices
    msgs = []

    missing = [v for v in range(n) if v not in mapping]
    extra = sorted(k for k in mapping if not (isinstance(k, int) and 0 <= k < n))
    if extra:
        msgs.append("map mentions unknown gene vertices: %s" % extra[:_MAX_REPORTS])
    if missing:
        msgs.append("map is not total: gene vertices %s have no image"
                    % missing[:_MAX_REPORTS])
        return msgs

    w = stree.n_vertices
    kind = np.zeros(n, dtype=bool)
    low = np.zeros(n, dtype=np.int64)
    up = np.zeros(n, dtype=np.int64)
    malformed = False
    for v in range(n):
        img = mapping[v]
        if isinstance(img, tuple):
            if (len(img) != 2 or not 0 < img[1] < w
                    or stree.parent(img[1]) != img[0]):
                msgs.append("vertex %d: %r is not an edge of the species tree"
                            % (v, img))
                malformed = True
                continue
            kind[v] = True
            up[v], low[v] = img
        else:
            if not (isinstance(img, (int, np.integer)) and 0 <= img < w):
                msgs.append("vertex %d: %r is not a species vertex" % (v, img))
                malformed = True
                continue
            low[v] = up[v] = img
    if malformed:
        return msgs

    imgs0 = species_lca_images(doc, stree)

    def leq(a, b):  # a <=_S b over plain vertices
        return stree.is_ancestor_or_equal(b, a)

    for v in range(n):
        ev = events[v]
        if ev == EXTANT:
            want = stree.leaf_id(doc.species_of[v])
            if kind[v] or low[v] != want:
                msgs.append("(i) leaf %d must map to species leaf %r"
                            % (v, doc.species_of[v]))
        elif ev == SPECIATION:
            if kind[v]:
                msgs.append("(ii) speciation vertex %d maps to an edge" % v)
            elif stree.is_leaf(low[v]):
                msgs.append("(ii) speciation vertex %d maps to a leaf" % v)
            elif low[v] != imgs0[v]:
                msgs.append("(v) speciation vertex %d must map to the species "
                            "LCA of its leaf set (vertex %d)" % (v, imgs0[v]))
        else:
            if not kind[v]:
                msgs.append("(iii) duplication vertex %d maps to a vertex" % v)
        if not kind[v] and low[v] == stree.rho:
            msgs.append("vertex %d maps to the synthetic top vertex" % v)
        if not kind[v] and low[v] != imgs0[v] and ev == DUPLICATION:
            msgs.append("(D2.a) vertex image of %d differs from its species LCA"
                        % v)
        if kind[v] and not (leq(int(imgs0[v]), int(low[v]))):
            msgs.append("(D2.b) edge image of %d does not lie above its "
                        "species LCA" % v)

    aoe, lca_tab = _species_order_tables(stree)
    is_dup = np.fromiter((events[v] == DUPLICATION for v in range(n)),
                         dtype=bool, count=n)
    gsize = np.array(tree._size)
    ids = np.arange(n)
    ghigh = ids + gsize - 1

    order_bad = 0
    eq1_bad = 0
    chunk = max(1, min(n, 512))
    for start in range(0, n, chunk):
        xs_block = ids[start:start + chunk]
        # ---- ancestor-order preservation: pairs x strictly below y ----
        below = ((xs_block[:, None] >= ids[None, :])
                 & (xs_block[:, None] <= ghigh[None, :])
                 & (xs_block[:, None] != ids[None, :]))
        bi, bj = np.nonzero(below)
        if bi.size:
            xs = xs_block[bi]
            ys = ids[bj]
            both_dup = is_dup[xs] & is_dup[ys]
            ok_weak = _ext_leq(aoe, kind[xs], low[xs], up[xs],
                               kind[ys], low[ys], up[ys])
            ok_strict = _ext_lt(aoe, kind[xs], low[xs], up[xs],
                                kind[ys], low[ys], up[ys])
            ok = np.where(both_dup, ok_weak, ok_strict)
            for i in np.nonzero(~ok)[0]:
                order_bad += 1
                if order_bad <= _MAX_REPORTS:
                    rule = "(iv.1)" if both_dup[i] else "(iv.2)"
                    msgs.append("%s images of %d and its ancestor %d are not "
                                "order-compatible" % (rule, xs[i], ys[i]))
        # ---- image-LCA bound: all unordered pairs ----
        tri = ids[None, :] > xs_block[:, None]
        ti, tj = np.nonzero(tri)
        if ti.size:
            xs = xs_block[ti]
            ys = ids[tj]
            ka, la, ua = kind[xs], low[xs], up[xs]
            kb, lb, ub = kind[ys], low[ys], up[ys]
            ab = _ext_leq(aoe, ka, la, ua, kb, lb, ub)
            ba = _ext_leq(aoe, kb, lb, ub, ka, la, ua)
            kl = np.where(ab, kb, np.where(ba, ka, False))
            ll = np.where(ab, lb, np.where(ba, la, lca_tab[la, lb]))
            ul = np.where(ab, ub, np.where(ba, ua, ll))
            anc = tree.batch_lca(xs, ys)
            ok = _ext_leq(aoe, kl, ll, ul, kind[anc], low[anc], up[anc])
            for i in np.nonzero(~ok)[0]:
                eq1_bad += 1
                if eq1_bad <= _MAX_REPORTS:
                    msgs.append("image-LCA bound fails for vertices %d,%d "
                                "(gene LCA %d)" % (xs[i], ys[i], anc[i]))
    if order_bad > _MAX_REPORTS:
        msgs.append("... %d ancestor-order violations in total" % order_bad)
    if eq1_bad > _MAX_REPORTS:
        msgs.append("... %d image-LCA violations in total" % eq1_bad)
    return msgs
