"""Proper degree-one self-maps of infinite-type surfaces that kill a loop.

Three constructions, by case:

* infinite genus: pinch a one-holed torus to a point;
* finite genus, finitely many isolated ends: fold a sphere so that three
  disks cover one, and plant a Cantor set of ends in each;
* finite genus, infinitely many isolated ends: the same fold with single
  punctures, absorbed by the infinitely many isolated ends.

Each construction produces a draft that :mod:`hopfsurf.certificate` turns
into a self-contained certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from hopfsurf import complex2 as cx
from hopfsurf import endspace as es
from hopfsurf import words as W
from hopfsurf.errors import HopfError
from hopfsurf.pi1 import nontrivial_in_surface
from hopfsurf.surface import INFINITE, build_model, check, is_finite_type

INFINITE_GENUS = "InfiniteGenus"
FINITE_ISOLATED = "FiniteGenusFiniteIsolated"
INFINITE_ISOLATED = "FiniteGenusInfiniteIsolated"
CASES = (INFINITE_GENUS, FINITE_ISOLATED, INFINITE_ISOLATED)

DEFAULT_DEPTH = 3

HOPFIAN_MESSAGE = (
    "finite-type surface: every proper degree-one self-map is a homotopy "
    "equivalence (the surface group is finitely generated and residually "
    "finite, hence Hopfian)"
)


def classify_case(d):
    if is_finite_type(d):
        raise HopfError("E_FINITE_TYPE", HOPFIAN_MESSAGE)
    if d.genus == INFINITE:
        return INFINITE_GENUS
    if es.isolated_census(d.ends).is_omega:
        return INFINITE_ISOLATED
    return FINITE_ISOLATED


# -- the fold of the sphere ------------------------------------------------

@dataclass
class FoldData:
    source: cx.Complex2
    target: cx.Complex2
    fold: cx.CellMap
    gamma: tuple
    phi: tuple
    regions: dict
    basepoint: str = "p0"


PHI = ("th0", "g0", "th1l", "g1", "th2l", "g2", "th3",
       "-g2", "th2u", "-g1", "th1u", "-g0")
GAMMA = ("th1u", "th1l", "g1", "th2l", "th2u", "-g1")


def build_fold_sphere():
    """The folding map of a sphere with four round holes onto one with two.

    Holes B1 and B3 go onto B1 by the identity and a translation, B2 by a
    reflection; the arcs g1, g2 between them collapse.  Each hole B_k is a
    ring ``R..`` around an inner disk ``D..``; the disk in B3 is ``D11``, in
    B2 ``D12`` and in B1 ``D13``.
    """
    src = cx.Complex2(
        ["p0", "p1l", "p1r", "p2l", "p2r", "p3", "d0", "d11", "d12", "d13"],
        {
            "th0": ("p0", "p0"), "th1l": ("p1l", "p1r"), "th1u": ("p1r", "p1l"),
            "th2l": ("p2l", "p2r"), "th2u": ("p2r", "p2l"), "th3": ("p3", "p3"),
            "g0": ("p0", "p1l"), "g1": ("p1r", "p2l"), "g2": ("p2r", "p3"),
            "de0": ("d0", "d0"), "e0": ("p0", "d0"),
            "de13": ("d13", "d13"), "e13": ("p1r", "d13"),
            "de12": ("d12", "d12"), "e12": ("p2l", "d12"),
            "de11": ("d11", "d11"), "e11": ("p3", "d11"),
        },
        {
            "X": (PHI, -1),
            "R0": (["th0", "e0", "-de0", "-e0"], 1), "D0": (["de0"], 1),
            "R13": (["th1u", "th1l", "e13", "-de13", "-e13"], 1), "D13": (["de13"], 1),
            "R12": (["th2l", "th2u", "e12", "-de12", "-e12"], 1), "D12": (["de12"], 1),
            "R11": (["th3", "e11", "-de11", "-e11"], 1), "D11": (["de11"], 1),
        },
    ).check()
    tgt = _fold_target()
    f = cx.CellMap(
        src, tgt,
        {"p0": "q0", "p1l": "q1l", "p1r": "q1r", "p2l": "q1r", "p2r": "q1l",
         "p3": "q1l", "d0": "c0", "d13": "c1", "d12": "c1", "d11": "c1"},
        {
            "th0": ["th0"], "th1l": ["th1l"], "th1u": ["th1u"],
            "th2l": ["-th1l"], "th2u": ["-th1u"], "th3": ["th1l", "th1u"],
            "g0": ["G0"], "g1": [], "g2": [],
            "de0": ["de0"], "e0": ["e0"],
            "de13": ["de1"], "e13": ["e1"],
            "de12": ["-de1"], "e12": ["e1"],
            "de11": ["de1"], "e11": ["th1l", "e1"],
        },
        {
            "X": cx.null("Y"),
            "R0": cx.onto("R0"), "D0": cx.onto("D0"),
            "R13": cx.onto("R1"), "D13": cx.onto("D1"),
            "R12": cx.onto("R1", -1), "D12": cx.onto("D1", -1),
            "R11": cx.onto("R1"), "D11": cx.onto("D1"),
        },
    ).check()
    regions = {
        "B0": ("R0", "D0"), "B1": ("R13", "D13"), "B2": ("R12", "D12"), "B3": ("R11", "D11"),
        "D0": ("D0",), "D1,1": ("D11",), "D1,2": ("D12",), "D1,3": ("D13",), "X": ("X",),
    }
    phi = W.word(*PHI)
    gamma = W.word("g0", "th1l", *GAMMA, "-th1l", "-g0")
    return FoldData(src, tgt, f, gamma, phi, regions)


def _fold_target():
    return cx.Complex2(
        ["q0", "q1l", "q1r", "c0", "c1"],
        {
            "th0": ("q0", "q0"), "th1l": ("q1l", "q1r"), "th1u": ("q1r", "q1l"),
            "G0": ("q0", "q1l"), "de0": ("c0", "c0"), "e0": ("q0", "c0"),
            "de1": ("c1", "c1"), "e1": ("q1r", "c1"),
        },
        {
            "Y": (["th0", "G0", "th1l", "th1u", "-G0"], -1),
            "R0": (["th0", "e0", "-de0", "-e0"], 1), "D0": (["de0"], 1),
            "R1": (["th1u", "th1l", "e1", "-de1", "-e1"], 1), "D1": (["de1"], 1),
        },
    ).check()


def fold_reflection():
    """Orientation-reversing reflection of the fold's target sphere."""
    tgt = _fold_target()
    return cx.CellMap(
        tgt, tgt, {v: v for v in tgt.vertices},
        {"th0": ["-th0"], "th1l": ["-th1u"], "th1u": ["-th1l"], "G0": ["G0"],
         "de0": ["-de0"], "e0": ["e0"], "de1": ["-de1"], "e1": ["e1"]},
        {f: cx.onto(f, -1) for f in tgt.faces},
    ).check()


def fold_inclusion(fd):
    """Put the two-holed sphere back as B0, B1 of the four-holed one."""
    return cx.CellMap(
        fd.target, fd.source,
        {"q0": "p0", "q1l": "p1l", "q1r": "p1r", "c0": "d0", "c1": "d13"},
        {"th0": ["th0"], "th1l": ["th1l"], "th1u": ["th1u"], "G0": ["g0"],
         "de0": ["de0"], "e0": ["e0"], "de1": ["de13"], "e1": ["e13"]},
        {"Y": cx.null("X", "R12", "D12", "R11", "D11"),
         "R0": cx.onto("R0"), "D0": cx.onto("D0"), "R1": cx.onto("R13"), "D1": cx.onto("D13")},
    ).check()


# -- drafts ----------------------------------------------------------------

@dataclass
class Draft:
    """A construction in progress: the map and the evidence about it."""

    desc: object
    case: str
    depth: int
    source_plants: dict
    target_plants: dict
    cellmap: cx.CellMap
    evidence: cx.DegreeEvidence
    basepoint: str
    witness: tuple
    witness_image: tuple
    exhaustion: object = None
    choices: dict = field(default_factory=dict)

    @property
    def source(self):
        return self.cellmap.source

    @property
    def target(self):
        return self.cellmap.target

    def piece_faces(self):
        return sorted(f for f in self.source.faces if f not in self.source_plants)

    def complements(self):
        return {self.source.faces[f].word[0][0]: plant for f, plant in self.source_plants.items()}


def _witness_check(draft):
    verdict = nontrivial_in_surface(draft.witness, draft.source, draft.complements(),
                                    faces=draft.piece_faces(), root=draft.basepoint)
    if not verdict:
        raise HopfError("E_INTERNAL", "witness loop is trivial")
    if W.reduce(draft.witness_image):
        raise HopfError("E_INTERNAL", "witness image is not null-homotopic")
    return verdict


def _plant(genus, ends):
    return (genus, ends)


def _pinch_complex(genus, labels):
    """Closed surface of the given genus; handle 1 is the one-holed torus S.

    Each label gets a disk ``P{j}`` (to be replaced by the region beyond a
    circle) and one extra disk ``Q`` stays empty for degree evidence.
    """
    holes = [f"P{j}" for j in range(len(labels))] + ["Q"]
    verts = ["s"] + [f"h{j}" for j in range(len(holes))]
    edges = {"c": ("s", "s")}
    for i in range(1, genus + 1):
        edges[f"a{i}"] = ("s", "s")
        edges[f"b{i}"] = ("s", "s")
    outer = ["-c"]
    for i in range(2, genus + 1):
        outer += [f"a{i}", f"b{i}", f"-a{i}", f"-b{i}"]
    faces = {"S": (["a1", "b1", "-a1", "-b1", "c"], 1)}
    for j, hole in enumerate(holes):
        edges[f"t{j}"] = ("s", f"h{j}")
        edges[f"k{j}"] = (f"h{j}", f"h{j}")
        outer += [f"t{j}", f"-k{j}", f"-t{j}"]
        faces[hole] = ([f"k{j}"], 1)
    faces["R"] = (outer, 1)
    return cx.Complex2(verts, edges, faces).check(), holes[:-1]


def case1_pinch(d, depth=DEFAULT_DEPTH):
    if classify_case(d) != INFINITE_GENUS:
        raise HopfError("E_WRONG_CASE", "the pinch construction needs infinite genus")
    exh = build_model(d, depth)
    level1 = exh.levels[0]
    labels = level1.residuals
    source, holes = _pinch_complex(level1.genus_alloc, labels)
    plants = {h: _plant(INFINITE if es.has_np(lab) else 0, lab) for h, lab in zip(holes, labels)}
    quotient, q = cx.collapse_subcomplex(source, ["S"])
    q.check()
    witness = W.word("c")
    draft = Draft(d, INFINITE_GENUS, depth, plants, dict(plants), q,
                  cx.degree_at_disk(q, "Q"), "s", witness, q.apply(witness), exh,
                  {"pinched": "S", "pinched_level": 1, "handle": "a1 b1"})
    _witness_check(draft)
    return draft


def _fold_draft(d, case, depth, d0_plant, d1_plant):
    fd = build_fold_sphere()
    src_plants, tgt_plants = {}, {}
    if not (d0_plant[0] == 0 and d0_plant[1] is es.EMPTY):
        src_plants["D0"] = tgt_plants["D0"] = d0_plant
    for face in ("D11", "D12", "D13"):
        src_plants[face] = d1_plant
    tgt_plants["D1"] = d1_plant
    f = fd.fold
    draft = Draft(d, case, depth, src_plants, tgt_plants, f,
                  cx.degree_at_disk(f, "D0"), fd.basepoint, fd.gamma, f.apply(fd.gamma),
                  build_model(d, depth), {"evidence_disk": "D0"})
    _witness_check(draft)
    return draft


def case2_construct(d, depth=DEFAULT_DEPTH):
    if classify_case(d) != FINITE_ISOLATED:
        raise HopfError("E_WRONG_CASE", "needs finite genus and finitely many isolated ends")
    k = es.isolated_census(d.ends).n
    isolated = es.union(*([es.Pt()] * k))
    return _fold_draft(d, FINITE_ISOLATED, depth, _plant(d.genus, isolated), _plant(0, es.Cantor()))


def case3_construct(d, depth=DEFAULT_DEPTH):
    if classify_case(d) != INFINITE_ISOLATED:
        raise HopfError("E_WRONG_CASE", "needs finite genus and infinitely many isolated ends")
    return _fold_draft(d, INFINITE_ISOLATED, depth, _plant(d.genus, d.ends), _plant(0, es.Pt()))


def ensure_degree_plus_one(draft):
    """Square a degree -1 self-map; degree +1 drafts pass through."""
    total = draft.evidence.total
    if total == 1:
        return draft
    if total != -1:
        raise HopfError("E_BAD_DEGREE", f"degree {total} is not +1 or -1")
    f = draft.cellmap
    if not f.is_self_map():
        raise HopfError("E_MISMATCH", "only a self-map can be squared")
    ff = cx.compose(f, f)
    return replace(draft, cellmap=ff, evidence=cx.degree_at_disk(ff, draft.evidence.disk),
                   witness_image=ff.apply(draft.witness),
                   choices={**draft.choices, "squared": True})


CONSTRUCTIONS = {
    INFINITE_GENUS: case1_pinch,
    FINITE_ISOLATED: case2_construct,
    INFINITE_ISOLATED: case3_construct,
}


def build_draft(d, depth=DEFAULT_DEPTH):
    check(d)
    case = classify_case(d)
    return ensure_degree_plus_one(CONSTRUCTIONS[case](d, depth))


def build_hopf_map(d, depth=DEFAULT_DEPTH):
    """Certificate for a degree-one, non-pi1-injective proper self-map of ``d``."""
    from hopfsurf.certificate import assemble

    return assemble(build_draft(d, depth))
