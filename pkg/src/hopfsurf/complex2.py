"""Oriented combinatorial 2-complexes and cellular maps between them.

Edges are directed; a face is a cyclic word of signed edges together with
an orientation sign.  The oriented boundary of a face is its word raised to
its orientation; an interior edge is coherent when its oriented occurrences
cancel.  Degree is computed only from disk preimages: the sum of the
orientation signs of the faces mapping homeomorphically onto a target face.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass

from hopfsurf import words as W
from hopfsurf.errors import HopfError


@dataclass(frozen=True)
class Face:
    word: tuple
    orientation: int = 1


class Complex2:
    def __init__(self, vertices, edges, faces):
        self.vertices = tuple(sorted(vertices))
        self.edges = {e: tuple(st) for e, st in sorted(edges.items())}
        self.faces = {}
        for f, face in sorted(faces.items()):
            if not isinstance(face, Face):
                wd, o = face
                face = Face(W.word(*wd), o)
            self.faces[f] = face

    def __eq__(self, other):
        return (isinstance(other, Complex2) and self.vertices == other.vertices
                and self.edges == other.edges and self.faces == other.faces)

    def __hash__(self):
        return hash((self.vertices, tuple(self.edges), tuple(self.faces)))

    def __repr__(self):
        return f"Complex2(V={len(self.vertices)}, E={len(self.edges)}, F={len(self.faces)})"

    # -- paths -------------------------------------------------------------

    def head(self, x):
        s, t = self.edges[x[0]]
        return s if x[1] == 1 else t

    def tail(self, x):
        s, t = self.edges[x[0]]
        return t if x[1] == 1 else s

    def path_ends(self, w):
        """(start, end) of an edge path, or None if it is not a path."""
        for a, b in zip(w, w[1:]):
            if self.tail(a) != self.head(b):
                return None
        return (self.head(w[0]), self.tail(w[-1])) if w else None

    def is_loop(self, w, base=None):
        if not w:
            return True
        ends = self.path_ends(w)
        return ends is not None and ends[0] == ends[1] and (base is None or ends[0] == base)

    # -- structure ---------------------------------------------------------

    def occurrences(self):
        c = Counter()
        for face in self.faces.values():
            for e, _ in face.word:
                c[e] += 1
        return c

    def euler_characteristic(self):
        return len(self.vertices) - len(self.edges) + len(self.faces)

    def boundary_edges(self):
        occ = self.occurrences()
        return sorted(e for e in self.edges if occ[e] == 1)

    def boundary_circles(self):
        """Boundary components, each as a loop word starting at its least edge."""
        remaining = set(self.boundary_edges())
        circles = []
        while remaining:
            start = min(remaining)
            loop = [(start, 1)]
            remaining.discard(start)
            cur = self.edges[start][1]
            origin = self.edges[start][0]
            while cur != origin:
                nxt = None
                for e in sorted(remaining):
                    s, t = self.edges[e]
                    if s == cur:
                        nxt = (e, 1)
                    elif t == cur:
                        nxt = (e, -1)
                    if nxt:
                        break
                if nxt is None:
                    raise HopfError("E_INVALID", "boundary is not a union of circles")
                loop.append(nxt)
                remaining.discard(nxt[0])
                cur = self.tail(nxt)
            circles.append(tuple(loop))
        return circles

    def components(self):
        parent = {v: v for v in self.vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for s, t in self.edges.values():
            parent[find(s)] = find(t)
        return len({find(v) for v in self.vertices})

    def is_connected(self):
        return self.components() == 1

    def genus(self):
        """Genus of the orientable surface this complex presents."""
        b = len(self.boundary_circles())
        return (2 - self.euler_characteristic() - b) // 2

    def problems(self):
        out = []
        for e, (s, t) in self.edges.items():
            if s not in self.vertices or t not in self.vertices:
                out.append(f"edge {e} has unknown endpoint")
        if out:
            return out
        for f, face in self.faces.items():
            if face.orientation not in (1, -1):
                out.append(f"face {f} has orientation {face.orientation!r}")
            if not face.word:
                out.append(f"face {f} has empty boundary")
                continue
            if any(e not in self.edges or s not in (1, -1) for e, s in face.word):
                out.append(f"face {f} uses unknown edge")
                continue
            if not self.is_loop(face.word):
                out.append(f"face {f} boundary is not a closed path")
        if out:
            return out
        occ = self.occurrences()
        net = Counter()
        for face in self.faces.values():
            for e, s in face.word:
                net[e] += s * face.orientation
        for e in self.edges:
            if occ[e] > 2:
                out.append(f"edge {e} used {occ[e]} times")
            elif occ[e] == 2 and net[e] != 0:
                out.append(f"edge {e} incoherently oriented")
        return out

    def check(self):
        probs = self.problems()
        if probs:
            raise HopfError("E_INVALID", "; ".join(probs))
        return self

    def subcomplex(self, faces):
        faces = sorted(faces)
        edges = {e for f in faces for e, _ in self.faces[f].word}
        verts = {v for e in edges for v in self.edges[e]}
        return Complex2(verts, {e: self.edges[e] for e in edges},
                        {f: self.faces[f] for f in faces})

    def mirrored(self):
        return Complex2(self.vertices, self.edges,
                        {f: Face(x.word, -x.orientation) for f, x in self.faces.items()})

    # -- serialization -----------------------------------------------------

    def to_json(self):
        return {
            "vertices": list(self.vertices),
            "edges": {e: list(st) for e, st in self.edges.items()},
            "faces": {f: {"word": [list(x) for x in face.word], "orientation": face.orientation}
                      for f, face in self.faces.items()},
        }

    @classmethod
    def from_json(cls, d):
        return cls(d["vertices"], {e: tuple(st) for e, st in d["edges"].items()},
                   {f: Face(tuple((str(e), s) for e, s in x["word"]), x["orientation"])
                    for f, x in d["faces"].items()})


# -- cellular maps ---------------------------------------------------------

@dataclass(frozen=True)
class FaceImage:
    """A face maps onto ``target`` with ``sign``, or is null (target None)
    with an image that is null-homotopic inside the ``support`` faces."""

    target: object = None
    sign: int = 0
    support: tuple = ()

    @property
    def is_null(self):
        return self.target is None

    def to_json(self):
        if self.is_null:
            return {"null": list(self.support)}
        return {"to": self.target, "sign": self.sign}

    @classmethod
    def from_json(cls, d):
        if "null" in d:
            return cls(None, 0, tuple(d["null"]))
        return cls(d["to"], d["sign"])


def onto(target, sign=1):
    return FaceImage(target, sign)


def null(*support):
    return FaceImage(None, 0, tuple(sorted(support)))


class CellMap:
    def __init__(self, source, target, vmap, emap, fmap):
        self.source = source
        self.target = target
        self.vmap = dict(vmap)
        self.emap = {e: W.word(*w) for e, w in emap.items()}
        self.fmap = dict(fmap)

    def __repr__(self):
        return f"CellMap({self.source!r} -> {self.target!r})"

    def apply(self, w):
        """Image of an edge word, concatenated without reduction."""
        out = []
        for e, s in w:
            img = self.emap[e]
            out.extend(img if s == 1 else W.inverse(img))
        return tuple(out)

    def face_image_word(self, f):
        return self.apply(self.source.faces[f].word)

    def is_self_map(self):
        return self.source == self.target

    def problems(self):
        src, tgt = self.source, self.target
        out = []
        for v in src.vertices:
            if self.vmap.get(v) not in tgt.vertices:
                out.append(f"vertex {v} has no image")
        for e, (s, t) in src.edges.items():
            img = self.emap.get(e)
            if img is None or any(x[0] not in tgt.edges or x[1] not in (1, -1) for x in img):
                out.append(f"edge {e} has no valid image")
                continue
            if out:
                continue
            if img:
                ends = tgt.path_ends(img)
                if ends != (self.vmap[s], self.vmap[t]):
                    out.append(f"edge {e} image is not a path between vertex images")
            elif self.vmap[s] != self.vmap[t]:
                out.append(f"edge {e} collapsed between distinct vertices")
        if out:
            return out
        for f in src.faces:
            fi = self.fmap.get(f)
            if not isinstance(fi, FaceImage):
                out.append(f"face {f} has no image")
                continue
            image = self.face_image_word(f)
            if fi.is_null:
                if any(g not in tgt.faces for g in fi.support):
                    out.append(f"face {f} null support names unknown faces")
                elif not null_certified(tgt, image, fi.support):
                    out.append(f"face {f} image is not null-homotopic in its support")
            else:
                if fi.target not in tgt.faces or fi.sign not in (1, -1):
                    out.append(f"face {f} maps to unknown face")
                    continue
                want = tgt.faces[fi.target].word
                if fi.sign == -1:
                    want = W.inverse(want)
                if not W.is_rotation(W.cyclic_reduce(image), W.cyclic_reduce(want)):
                    out.append(f"face {f} boundary does not map onto {fi.target}")
        return out

    def check(self):
        probs = self.problems()
        if probs:
            raise HopfError("E_INVALID_MAP", "; ".join(probs))
        return self

    def to_json(self):
        return {
            "vertices": dict(sorted(self.vmap.items())),
            "edges": {e: [list(x) for x in w] for e, w in sorted(self.emap.items())},
            "faces": {f: fi.to_json() for f, fi in sorted(self.fmap.items())},
        }

    @classmethod
    def from_json(cls, d, source, target):
        return cls(source, target, d["vertices"],
                   {e: tuple((str(a), s) for a, s in w) for e, w in d["edges"].items()},
                   {f: FaceImage.from_json(x) for f, x in d["faces"].items()})


def null_certified(target, image, support):
    """Whether a face boundary image bounds inside the support faces."""
    if not W.reduce(image):
        return True
    if not support:
        return False
    sub = target.subcomplex(support)
    if any(e not in sub.edges for e, _ in image) or not sub.is_loop(image):
        return False
    if is_annulus(sub):
        return winding_number(sub, image) == 0
    from hopfsurf.pi1 import presentation_of

    pres = presentation_of(sub, root=sub.head(image[0]))
    return not pres.loop_word(image)


def identity(c):
    return CellMap(c, c, {v: v for v in c.vertices},
                   {e: ((e, 1),) for e in c.edges},
                   {f: onto(f) for f in c.faces})


def mirror_map(c):
    """The identity on cells, into the oppositely oriented complex."""
    m = identity(c)
    return CellMap(c, c.mirrored(), m.vmap, m.emap, m.fmap)


def compose(g, f):
    """``g . f``: first ``f``, then ``g``."""
    if f.target != g.source:
        raise HopfError("E_MISMATCH", "target of f is not the source of g")
    vmap = {v: g.vmap[w] for v, w in f.vmap.items()}
    emap = {e: W.reduce(g.apply(w)) for e, w in f.emap.items()}
    fmap = {}
    for face, fi in f.fmap.items():
        if fi.is_null:
            support = set()
            for h in fi.support:
                gi = g.fmap[h]
                support.update(gi.support if gi.is_null else (gi.target,))
            fmap[face] = null(*support)
        else:
            gi = g.fmap[fi.target]
            fmap[face] = gi if gi.is_null else onto(gi.target, gi.sign * fi.sign)
    return CellMap(f.source, g.target, vmap, emap, fmap)


@dataclass(frozen=True)
class DegreeEvidence:
    disk: str
    components: tuple  # ((source face, sign), ...)
    total: int

    def to_json(self):
        return {"disk": self.disk,
                "components": [{"face": f, "sign": s} for f, s in self.components],
                "total": self.total}

    @classmethod
    def from_json(cls, d):
        comps = tuple((c["face"], c["sign"]) for c in d["components"])
        return cls(d["disk"], comps, d["total"])


def degree_at_disk(f, disk):
    """Signed count of the faces mapping homeomorphically onto ``disk``."""
    tgt = f.target
    if disk not in tgt.faces:
        raise HopfError("E_NOT_REGULAR", f"{disk} is not a face of the target")
    want = W.cyclic_reduce(tgt.faces[disk].word)
    comps = []
    for face, fi in sorted(f.fmap.items()):
        if fi.is_null:
            if disk in fi.support:
                raise HopfError("E_NOT_REGULAR", f"null face {face} covers {disk}")
            continue
        if fi.target != disk:
            continue
        image = W.cyclic_reduce(f.face_image_word(face))
        if W.is_rotation(image, want):
            s = 1
        elif W.is_rotation(image, W.cyclic_reduce(W.inverse(want))):
            s = -1
        else:
            raise HopfError("E_NOT_REGULAR", f"{face} does not map bijectively onto {disk}")
        sign = f.source.faces[face].orientation * s * tgt.faces[disk].orientation
        comps.append((face, sign))
    return DegreeEvidence(disk, tuple(comps), sum(s for _, s in comps))


def regular_degrees(f):
    """Degree totals at every face where the disk criterion applies."""
    out = {}
    for disk in f.target.faces:
        try:
            out[disk] = degree_at_disk(f, disk).total
        except HopfError as exc:
            if exc.code != "E_NOT_REGULAR":
                raise
    return out


def collapse_subcomplex(c, piece, point="*"):
    """Pinch a connected subcomplex to a vertex; returns (quotient, map)."""
    piece = set(piece)
    faces = {x for x in piece if x in c.faces}
    edges = {x for x in piece if x in c.edges}
    verts = {x for x in piece if x in c.vertices}
    if not piece or len(faces) + len(edges) + len(verts) != len(piece):
        raise HopfError("E_DISCONNECTED", "piece must be a nonempty set of cells")
    for f in faces:
        edges.update(e for e, _ in c.faces[f].word)
    for e in edges:
        verts.update(c.edges[e])
    sub = Complex2(verts, {e: c.edges[e] for e in edges}, {})
    if not sub.is_connected():
        raise HopfError("E_DISCONNECTED", "piece is not connected")
    if point in c.vertices and point not in verts:
        raise HopfError("E_MISMATCH", f"vertex name {point!r} already in use")

    def v(x):
        return point if x in verts else x

    new_vertices = {v(x) for x in c.vertices}
    new_edges = {e: (v(s), v(t)) for e, (s, t) in c.edges.items() if e not in edges}
    new_faces = {}
    for f, face in c.faces.items():
        if f in faces:
            continue
        wd = tuple(x for x in face.word if x[0] not in edges)
        if not wd:
            raise HopfError("E_DISCONNECTED", f"face {f} would lose its whole boundary")
        new_faces[f] = Face(wd, face.orientation)
    quotient = Complex2(new_vertices, new_edges, new_faces)
    q = CellMap(c, quotient, {x: v(x) for x in c.vertices},
                {e: () if e in edges else ((e, 1),) for e in c.edges},
                {f: null() if f in faces else onto(f) for f in c.faces})
    return quotient, q


def is_annulus(c):
    return (c.is_connected() and c.euler_characteristic() == 0
            and len(c.boundary_circles()) == 2)


def winding_number(c, w):
    """Signed number of turns of a loop around the core of an annulus.

    The first boundary circle, read along its least edge, counts as +1.
    """
    if not is_annulus(c):
        raise HopfError("E_NOT_ANNULUS", "complex is not an annulus")
    if w and not c.is_loop(w):
        raise HopfError("E_NOT_ANNULUS", "word is not a loop in the annulus")
    from hopfsurf.pi1 import presentation_of

    pres = presentation_of(c)
    if len(pres.generators) != 1:
        raise HopfError("E_NOT_ANNULUS", "annulus group is not infinite cyclic")
    gen = pres.generators[0]
    ref = W.exponent_sum(pres.edge_sum(c.boundary_circles()[0]), gen)
    return ref * W.exponent_sum(pres.edge_sum(w), gen)


# -- standard complexes ----------------------------------------------------

def surface_complex(genus, nboundary):
    """One polygon presenting a genus-``genus`` surface with boundary circles.

    Boundary circle ``j`` is the loop edge ``c{j}``, joined to the base
    vertex ``v`` by the arc ``t{j}``.
    """
    if genus == 0 and nboundary == 0:
        raise HopfError("E_CLOSED", "the sphere needs more than one polygon")
    verts = ["v"] + [f"w{j}" for j in range(1, nboundary + 1)]
    edges, wd = {}, []
    for i in range(1, genus + 1):
        a, b = f"a{i}", f"b{i}"
        edges[a], edges[b] = ("v", "v"), ("v", "v")
        wd += [a, b, "-" + a, "-" + b]
    for j in range(nboundary, 0, -1):
        edges[f"t{j}"] = ("v", f"w{j}")
        edges[f"c{j}"] = (f"w{j}", f"w{j}")
        wd += [f"t{j}", f"-c{j}", f"-t{j}"]
    return Complex2(verts, edges, {"F": (wd, 1)})


def lune_sphere(n, prefix=""):
    """Sphere cut into ``n`` lunes between the poles ``N`` and ``S``."""
    verts = ["N", "S"]
    edges = {f"{prefix}m{i}": ("N", "S") for i in range(n)}
    faces = {}
    for i in range(n):
        a, b = f"{prefix}m{i}", f"{prefix}m{(i + 1) % n}"
        faces[f"{prefix}L{i}"] = ([a, "-" + b], 1)
    return Complex2(verts, edges, faces)


def wrap_map(k, n, src_prefix="s", tgt_prefix=""):
    """The k-fold branched cover of the n-lune sphere by the kn-lune sphere."""
    sp, tp = src_prefix, tgt_prefix
    src, tgt = lune_sphere(k * n, sp), lune_sphere(n, tp)
    emap = {f"{sp}m{i}": [f"{tp}m{i % n}"] for i in range(k * n)}
    fmap = {f"{sp}L{i}": onto(f"{tp}L{i % n}") for i in range(k * n)}
    return CellMap(src, tgt, {"N": "N", "S": "S"}, emap, fmap)


def refine(c, rng: random.Random, tag):
    """Randomly subdivide an edge or split a face; returns (finer, map back)."""
    vmap = {v: v for v in c.vertices}
    emap = {e: [(e, 1)] for e in c.edges}
    fmap = {f: onto(f) for f in c.faces}
    edges = dict(c.edges)
    faces = {f: x for f, x in c.faces.items()}
    verts = list(c.vertices)
    if rng.random() < 0.4:
        e = rng.choice(sorted(c.edges))
        s, t = c.edges[e]
        w, ea, eb = f"v{tag}", f"{e}a{tag}", f"{e}b{tag}"
        verts.append(w)
        del edges[e]
        edges[ea], edges[eb] = (s, w), (w, t)
        for f, x in c.faces.items():
            wd = []
            for a, sg in x.word:
                if a != e:
                    wd.append((a, sg))
                else:
                    wd.extend([(ea, 1), (eb, 1)] if sg == 1 else [(eb, -1), (ea, -1)])
            faces[f] = Face(tuple(wd), x.orientation)
        vmap[w] = t
        del emap[e]
        emap[ea], emap[eb] = [(e, 1)], []
        fine = Complex2(verts, edges, faces)
        return fine, CellMap(fine, c, vmap, emap, fmap)
    f = rng.choice(sorted(c.faces))
    x = c.faces[f]
    n = len(x.word)
    r = rng.randrange(n)
    wd = x.word[r:] + x.word[:r]
    j = rng.randint(1, n - 1) if n > 1 else 1
    part1, part2 = wd[:j], wd[j:]
    d = f"d{tag}"
    edges[d] = (c.head(wd[0]), c.tail(part1[-1]))
    del faces[f]
    f1, f2 = f"{f}x{tag}", f"{f}y{tag}"
    faces[f1] = Face(part1 + ((d, -1),), x.orientation)
    faces[f2] = Face(((d, 1),) + part2, x.orientation)
    del fmap[f]
    fmap[f1], fmap[f2] = null(), onto(f)
    emap[d] = list(part1)
    fine = Complex2(verts, edges, faces)
    return fine, CellMap(fine, c, vmap, emap, fmap)


def random_sphere_map(rng: random.Random, max_faces=64):
    """A random composite of wraps, refinements and (maybe) a mirror."""
    n = rng.randint(2, 4)
    k = rng.randint(1, 3)
    f = wrap_map(k, n)
    tag = 0
    while len(f.source.faces) < max_faces and rng.random() < 0.85:
        fine, back = refine(f.source, rng, tag)
        tag += 1
        f = compose(f, back)
    if rng.random() < 0.4:
        f = compose(mirror_map(f.target), f)
    return f
