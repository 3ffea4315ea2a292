"""Fundamental groups of compact bordered pieces.

A piece's group is presented from a spanning tree of its 1-skeleton: every
non-tree edge is a generator and every face a relator.  Generators occurring
exactly once in a relator are then eliminated, which for a surface with
nonempty boundary leaves a free group of rank ``1 - chi``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from hopfsurf import words as W
from hopfsurf.errors import HopfError

reduce = W.reduce


def _natural(s):
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", s)]


def spanning_tree(c, root):
    """BFS tree: maps each reached vertex to the path word from ``root``."""
    paths = {root: ()}
    frontier = [root]
    while frontier:
        nxt = []
        for v in frontier:
            for e in sorted(c.edges):
                s, t = c.edges[e]
                if s == v and t not in paths:
                    paths[t] = paths[v] + ((e, 1),)
                    nxt.append(t)
                elif t == v and s not in paths:
                    paths[s] = paths[v] + ((e, -1),)
                    nxt.append(s)
        frontier = nxt
    return paths


@dataclass
class Presentation:
    generators: tuple
    relators: tuple
    boundary_words: tuple
    root: str
    edge_words: dict = field(repr=False)
    paths: dict = field(repr=False)
    ends: dict = field(repr=False)

    @property
    def rank(self):
        return len(self.generators)

    @property
    def is_free(self):
        return not self.relators

    def edge_sum(self, w):
        return W.substitute(w, self.edge_words)

    def loop_word(self, w):
        """Group element of a loop (based at the root) in a free presentation."""
        if not self.is_free:
            raise HopfError("E_NOT_FREE", "presentation still has relators")
        if any(e not in self.edge_words for e, _ in w):
            raise HopfError("E_BASEPOINT", "loop leaves the presented piece")
        return self.edge_sum(w)

    def based(self, w):
        """Conjugate a loop by the tree path from the root to its start."""
        if not w:
            return ()
        e, s = w[0]
        to_start = self.paths[self.ends[e][0 if s == 1 else 1]]
        return W.reduce(to_start + tuple(w) + W.inverse(to_start))


def presentation_of(c, faces=None, root=None, allow_closed=False):
    """Free presentation of a connected piece with boundary."""
    if faces is not None:
        c = c.subcomplex(faces)
    if not c.is_connected():
        raise HopfError("E_DISCONNECTED", "piece is not connected")
    circles = c.boundary_circles()
    if not circles and not allow_closed:
        raise HopfError("E_CLOSED", "closed pieces are not presented")
    root = root if root is not None else c.vertices[0]
    paths = spanning_tree(c, root)
    tree = {p[-1][0] for p in paths.values() if p}
    gens = [e for e in c.edges if e not in tree]
    edge_words = {e: () if e in tree else ((e, 1),) for e in c.edges}
    relators = [W.cyclic_reduce(W.substitute(f.word, edge_words)) for f in c.faces.values()]
    relators = [r for r in relators if r]
    while relators:
        choice = None
        for i, r in enumerate(relators):
            counts = {}
            for s, _ in r:
                counts[s] = counts.get(s, 0) + 1
            once = sorted((s for s, n in counts.items() if n == 1), key=_natural)
            if once:
                choice = (i, once[-1])
                break
        if choice is None:
            break
        i, x = choice
        r = relators.pop(i)
        k = next(j for j, (s, _) in enumerate(r) if s == x)
        rot = r[k + 1:] + r[:k]
        eps = r[k][1]
        # x^eps * rot = 1
        value = W.inverse(rot) if eps == 1 else rot
        subst = {g: ((g, 1),) for g in gens}
        subst[x] = value
        gens.remove(x)
        edge_words = {e: W.substitute(w, subst) for e, w in edge_words.items()}
        relators = [W.cyclic_reduce(W.substitute(q, subst)) for q in relators]
        relators = [q for q in relators if q]
    pres = Presentation(tuple(sorted(gens, key=_natural)), tuple(relators), (), root,
                        edge_words, paths, dict(c.edges))
    pres.boundary_words = tuple(pres.edge_sum(pres.based(circ)) for circ in circles)
    return pres


def induced_hom(f, base, source=None, target=None):
    """Images of the source generators, as reduced words in the target's.

    ``source``/``target`` are presentations of pieces of the two complexes;
    by default the whole complexes are presented.
    """
    source = source or presentation_of(f.source, root=base, allow_closed=True)
    target = target or presentation_of(f.target, root=f.vmap.get(base), allow_closed=True)
    if source.root != base or f.vmap.get(base) != target.root:
        raise HopfError("E_BASEPOINT", "basepoint does not map to the target root")
    out = {}
    for g in source.generators:
        s, t = source.ends[g]
        loop = source.paths[s] + ((g, 1),) + W.inverse(source.paths[t])
        out[g] = target.loop_word(f.apply(loop))
    return out


def is_disk_label(label):
    """A complementary region is a disk when it has no genus and no ends."""
    from hopfsurf.endspace import EMPTY

    genus, ends = label
    return genus == 0 and ends is EMPTY


@dataclass(frozen=True)
class Verdict:
    nontrivial: bool
    reduced: tuple
    justification: str

    def __bool__(self):
        return self.nontrivial


def nontrivial_in_surface(w, c, complements, faces=None, root=None):
    """Decide whether a loop of a piece is nontrivial in the whole surface.

    ``complements`` maps an edge of each boundary circle of the piece to the
    (genus, ends) label of the region beyond it.  If no region beyond is a
    disk, the piece is incompressible and nontriviality in its free group
    carries over to the surface.
    """
    piece = c.subcomplex(faces) if faces is not None else c
    circles = piece.boundary_circles()
    matched = {}
    for key, label in complements.items():
        hits = [i for i, circ in enumerate(circles) if any(e == key for e, _ in circ)]
        if len(hits) != 1:
            raise HopfError("E_COMPRESSIBLE", f"{key} does not name a boundary circle")
        matched[hits[0]] = label
    if len(matched) != len(circles):
        raise HopfError("E_COMPRESSIBLE", "some boundary circle has no recorded complement")
    for i, label in matched.items():
        if is_disk_label(label):
            raise HopfError("E_COMPRESSIBLE", f"boundary circle {i} bounds a disk")
    root = root if root is not None else (piece.head(w[0]) if w else piece.vertices[0])
    if w and not piece.is_loop(w, root):
        raise HopfError("E_BASEPOINT", "witness is not a loop at the root")
    pres = presentation_of(piece, root=root)
    red = pres.loop_word(w)
    if red:
        why = (f"reduces to {W.fmt(red)} in a free group of rank {pres.rank}; "
               f"no complementary region is a disk, so the piece is incompressible")
    else:
        why = "trivial already in the piece"
    return Verdict(bool(red), red, why)
