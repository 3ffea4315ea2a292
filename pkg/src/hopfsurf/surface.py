"""Surface descriptors, classification and exhaustion models.

A noncompact orientable surface is determined by its genus and the pair
(end space, non-planar ends).  Descriptors carry exactly that data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from hopfsurf import endspace as es
from hopfsurf.errors import HopfError

INFINITE = math.inf


def genus_text(g):
    return "inf" if g == INFINITE else str(g)


def genus_json(g):
    return "inf" if g == INFINITE else g


def genus_from_json(v):
    if v == "inf":
        return INFINITE
    if isinstance(v, bool) or not isinstance(v, int) or v < 0:
        raise HopfError("E_GENUS", f"bad genus {v!r}")
    return v


@dataclass(frozen=True)
class SurfaceDesc:
    genus: object
    ends: es.EndExpr

    def __str__(self):
        return f"surface {{ genus = {genus_text(self.genus)}; ends = {es.to_text(self.ends)} }}"

    def to_json(self):
        return {"genus": genus_json(self.genus), "ends": es.to_text(self.ends)}


def validate(d):
    """Return None if ``d`` is a valid descriptor, else (code, message)."""
    if d.ends is es.EMPTY:
        return "E_EMPTY", "a noncompact surface has at least one end"
    if d.genus != INFINITE and (not isinstance(d.genus, int) or d.genus < 0):
        return "E_GENUS", f"bad genus {d.genus!r}"
    if (d.genus == INFINITE) != es.has_np(d.ends):
        if d.genus == INFINITE:
            return "E_NP_GENUS", "infinite genus requires at least one non-planar end"
        return "E_NP_GENUS", "finite genus surfaces have no non-planar ends"
    return None


def check(d):
    problem = validate(d)
    if problem:
        raise HopfError(*problem)


def is_finite_type(d):
    check(d)
    if d.genus == INFINITE:
        return False
    return all(isinstance(p, es.Pt) for p in es.parts(es.normalize(d.ends)))


def surfaces_homeomorphic(a, b):
    check(a)
    check(b)
    if a.genus != b.genus:
        return es.NotHomeomorphic("genus", genus_text(a.genus), genus_text(b.genus))
    return es.ends_homeomorphic(a.ends, b.ends)


@dataclass(frozen=True)
class CompactPiece:
    level: int
    genus_alloc: int
    boundary_circles: tuple  # ((circle id, residual EndExpr), ...)
    gluing: dict = field(default_factory=dict, hash=False)

    @property
    def residuals(self):
        return [r for _, r in self.boundary_circles]


@dataclass(frozen=True)
class Exhaustion:
    desc: SurfaceDesc
    levels: tuple

    def genus_through(self, k):
        return sum(p.genus_alloc for p in self.levels[:k])


def build_model(d, depth):
    """Exhaust ``d`` by compact bordered pieces, one refinement per level.

    Finite genus is placed entirely at level 1.  For infinite genus every
    residual containing a non-planar end receives one handle per level, so
    handles accumulate exactly at the non-planar ends.
    """
    check(d)
    if depth < 1:
        raise HopfError("E_DEPTH", "depth must be at least 1")
    levels = []
    prev = [(None, d.ends)]
    for k in range(1, depth + 1):
        circles, gluing = [], {}
        for parent, label in prev:
            for child in es.split(label):
                cid = f"c{k}.{len(circles)}"
                circles.append((cid, child))
                if parent is not None:
                    gluing.setdefault(parent, []).append(cid)
        if d.genus == INFINITE:
            alloc = sum(1 for _, r in circles if es.has_np(r))
        else:
            alloc = d.genus if k == 1 else 0
        levels.append(CompactPiece(k, alloc, tuple(circles),
                                   {p: tuple(cs) for p, cs in gluing.items()}))
        prev = circles
    return Exhaustion(d, tuple(levels))


def reconstruct(exh, k=None):
    """Descriptor read back from the first ``k`` levels of an exhaustion."""
    k = len(exh.levels) if k is None else k
    last = exh.levels[k - 1]
    ends = es.union(*last.residuals)
    genus = INFINITE if es.has_np(ends) else exh.genus_through(k)
    return SurfaceDesc(genus, ends)


def stabilizes(exh):
    """Some level has only point residuals and no genus beyond it."""
    for i, piece in enumerate(exh.levels):
        later = sum(p.genus_alloc for p in exh.levels[i + 1:])
        if later == 0 and not any(es.has_np(r) for r in piece.residuals) \
                and all(isinstance(r, es.Pt) for r in piece.residuals):
            return True
    return False


def model_complex(exh, k):
    """Cell complex of the union of levels 1..k: genus and boundary circles."""
    from hopfsurf.complex2 import surface_complex

    piece = exh.levels[k - 1]
    return surface_complex(exh.genus_through(k), len(piece.boundary_circles))
