"""Certificates: self-contained JSON evidence for a constructed map.

:func:`assemble` turns a construction draft into a certificate document.
:func:`verify` checks a document from scratch using only the primitive
layers (end-space rewriting, cell complexes, free reduction and
presentations); it never runs the constructions or the exhaustion builder.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from hopfsurf import __version__
from hopfsurf import complex2 as cx
from hopfsurf import endspace as es
from hopfsurf import words as W
from hopfsurf.dsl import parse_expr
from hopfsurf.errors import HopfError, ParseError
from hopfsurf.pi1 import nontrivial_in_surface
from hopfsurf.surface import INFINITE, SurfaceDesc, genus_from_json, genus_json, genus_text, validate

SCHEMA = "hopfcert/1"

CASES = ("InfiniteGenus", "FiniteGenusFiniteIsolated", "FiniteGenusInfiniteIsolated")


def _word_json(w):
    return [[s, e] for s, e in w]


def _trace_json(steps):
    return [st.to_json() for st in steps]


def _ends_record(e):
    nf, steps = es.normalize_with_trace(e)
    return {"expr": es.to_text(e), "normal_form": es.to_text(nf), "trace": _trace_json(steps)}


def _plants_json(plants):
    return {f: {"genus": genus_json(g), "ends": es.to_text(e)} for f, (g, e) in sorted(plants.items())}


def glued_descriptor(c, plants):
    """The surface obtained by replacing each plant face by its region."""
    genus = c.genus() + sum(g for g, _ in plants.values())
    ends = es.union(*(e for _, e in plants.values()))
    return SurfaceDesc(genus, ends)


def assemble(draft, seed=0):
    """Certificate document (a JSON-ready dict) for a finished draft."""
    f = draft.cellmap
    src_desc = glued_descriptor(f.source, draft.source_plants)
    tgt_desc = glued_descriptor(f.target, draft.target_plants)
    want = es.normalize(draft.desc.ends)
    for side, dd in (("source", src_desc), ("target", tgt_desc)):
        if es.normalize(dd.ends) != want or dd.genus != draft.desc.genus:
            raise HopfError("E_UNCERTIFIED",
                            f"{side} surface {dd} does not normalize to the input's form")
    verdict = nontrivial_in_surface(draft.witness, f.source, draft.complements(),
                                    faces=draft.piece_faces(), root=draft.basepoint)
    _, image_trace = W.reduce_with_trace(draft.witness_image)
    exh = draft.exhaustion
    return {
        "schema": SCHEMA,
        "tool_version": __version__,
        "seed": seed,
        "input": draft.desc.to_json(),
        "case": draft.case,
        "depth": draft.depth,
        "source": {"complex": f.source.to_json(), "plants": _plants_json(draft.source_plants)},
        "target": {"complex": f.target.to_json(), "plants": _plants_json(draft.target_plants)},
        "basepoint": draft.basepoint,
        "map": f.to_json(),
        "degree": draft.evidence.to_json(),
        "witness": {
            "word": _word_json(draft.witness),
            "piece": draft.piece_faces(),
            "reduced": _word_json(verdict.reduced),
            "justification": verdict.justification,
            "image": _word_json(draft.witness_image),
            "image_trace": image_trace,
        },
        "ends": {
            "input": _ends_record(draft.desc.ends),
            "source": _ends_record(src_desc.ends),
            "target": _ends_record(tgt_desc.ends),
        },
        "exhaustion": [
            {"level": p.level, "genus_alloc": p.genus_alloc,
             "circles": [{"id": cid, "ends": es.to_text(r)} for cid, r in p.boundary_circles]}
            for p in exh.levels
        ],
        "choices": dict(draft.choices),
    }


def dumps(cert):
    return json.dumps(cert, indent=2, sort_keys=True)


# -- verification ----------------------------------------------------------

@dataclass(frozen=True)
class Result:
    accepted: bool
    clause: str = ""
    reason: str = ""

    def __bool__(self):
        return self.accepted

    def __str__(self):
        return "Accepted" if self.accepted else f"Rejected({self.clause}): {self.reason}"


class _Reject(Exception):
    def __init__(self, clause, reason):
        super().__init__(reason)
        self.clause = clause
        self.reason = reason


def _need(cond, clause, reason):
    if not cond:
        raise _Reject(clause, reason)


def _schema_error(msg):
    return HopfError("E_SCHEMA", msg)


def _get(d, key, kind):
    if not isinstance(d, dict) or key not in d:
        raise _schema_error(f"missing field {key!r}")
    v = d[key]
    if not isinstance(v, kind) or (kind is int and isinstance(v, bool)):
        raise _schema_error(f"field {key!r} has the wrong type")
    return v


def _word(v):
    if not isinstance(v, list):
        raise _schema_error("word must be a list")
    out = []
    for x in v:
        if not (isinstance(x, list) and len(x) == 2 and isinstance(x[0], str) and x[1] in (1, -1)
                and not isinstance(x[1], bool)):
            raise _schema_error(f"bad letter {x!r}")
        out.append((x[0], x[1]))
    return tuple(out)


def _label(text, clause):
    try:
        return parse_expr(text, allow_empty=True)
    except ParseError as exc:
        raise _Reject(clause, f"unparsable end label {text!r}: {exc}") from exc


def _complex(d):
    try:
        faces = _get(d, "faces", dict)
        for x in faces.values():
            _word(_get(x, "word", list))
            _need(_get(x, "orientation", int) in (1, -1), "complex", "orientation must be +1 or -1")
        return cx.Complex2.from_json(d)
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise _schema_error(f"malformed complex: {exc}") from exc


def _plants(d, c, side):
    out = {}
    for face, x in _get(d, "plants", dict).items():
        _need(face in c.faces, "complex", f"{side} plant {face} is not a face")
        try:
            genus = genus_from_json(_get(x, "genus", (int, str)))
        except HopfError as exc:
            raise _Reject("complex", str(exc)) from exc
        ends = _label(_get(x, "ends", str), "complex")
        _need(not (genus == 0 and ends is es.EMPTY), "complex", f"{side} plant {face} is a disk")
        _need((genus == INFINITE) == es.has_np(ends), "complex",
              f"{side} plant {face} has genus {genus_text(genus)} but ends {es.to_text(ends)}")
        _need(len(c.faces[face].word) == 1 and c.is_loop(c.faces[face].word), "complex",
              f"{side} plant {face} is not a disk bounded by a single loop")
        out[face] = (genus, ends)
    return out


def _evidence(rec):
    disk, total = _get(rec, "disk", str), _get(rec, "total", int)
    comps = []
    for x in _get(rec, "components", list):
        sign = _get(x, "sign", int)
        if sign not in (1, -1):
            raise _schema_error(f"component sign {sign!r} is not +1 or -1")
        comps.append((_get(x, "face", str), sign))
    return cx.DegreeEvidence(disk, tuple(comps), total)


def _steps(v):
    try:
        return [es.RewriteStep.from_json(x) for x in v]
    except (KeyError, TypeError) as exc:
        raise _schema_error(f"malformed rewrite step: {exc}") from exc


def _replay_ends(rec, expected_expr, clause):
    _need(_get(rec, "expr", str) == es.to_text(expected_expr), clause,
          f"recorded expression {rec['expr']} is not {es.to_text(expected_expr)}")
    try:
        nf = es.replay(expected_expr, _steps(_get(rec, "trace", list)))
    except HopfError as exc:
        raise _Reject(clause, f"trace does not replay: {exc}") from exc
    _need(es.is_normal(nf), clause, "trace stops before a normal form")
    _need(es.to_text(nf) == _get(rec, "normal_form", str), clause, "recorded normal form differs")
    return nf


def _case_of(genus, ends):
    if genus == INFINITE:
        return CASES[0]
    return CASES[2] if es.isolated_census(ends).is_omega else CASES[1]


def _check_exhaustion(levels, genus, ends, depth):
    _need(len(levels) == depth, "ends", "level count differs from depth")
    prev = [ends]
    for k, lev in enumerate(levels, start=1):
        _need(_get(lev, "level", int) == k, "ends", f"level {k} out of order")
        labels = [_label(_get(c, "ends", str), "ends") for c in _get(lev, "circles", list)]
        want = [p for lab in prev for p in es.split(lab)]
        _need(labels == want, "ends", f"level {k} residuals are not the refinement of level {k - 1}")
        if genus == INFINITE:
            alloc = sum(1 for r in labels if es.has_np(r))
        else:
            alloc = genus if k == 1 else 0
        _need(_get(lev, "genus_alloc", int) == alloc, "ends", f"level {k} genus allocation")
        prev = labels
    return levels


def _verify(doc):
    if _get(doc, "schema", str) != SCHEMA:
        raise _schema_error(f"unknown schema {doc['schema']!r}")
    inp = _get(doc, "input", dict)
    try:
        genus = genus_from_json(_get(inp, "genus", (int, str)))
    except HopfError as exc:
        raise _Reject("input", str(exc)) from exc
    ends = _label(_get(inp, "ends", str), "input")
    problem = validate(SurfaceDesc(genus, ends))
    _need(problem is None, "input", problem and problem[1])

    # (1) complexes, plants and the cell map
    sides = {}
    for side in ("source", "target"):
        rec = _get(doc, side, dict)
        c = _complex(_get(rec, "complex", dict))
        probs = c.problems()
        _need(not probs, "complex", f"{side}: {probs[:1]}")
        _need(not c.boundary_edges(), "complex", f"{side} complex is not closed")
        _need(c.is_connected(), "complex", f"{side} complex is not connected")
        sides[side] = (c, _plants(rec, c, side))
    (src, src_plants), (tgt, tgt_plants) = sides["source"], sides["target"]
    try:
        f = cx.CellMap.from_json(_get(doc, "map", dict), src, tgt)
        for w in f.emap.values():
            _word([list(x) for x in w])
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise _schema_error(f"malformed map: {exc}") from exc
    probs = f.problems()
    _need(not probs, "complex", f"map: {probs[:1]}")
    for face, fi in f.fmap.items():
        if face in src_plants:
            _need(not fi.is_null and fi.target in tgt_plants, "complex",
                  f"plant {face} does not map onto a plant")
            _need(src_plants[face] == tgt_plants[fi.target], "complex",
                  f"plant {face} maps onto a plant with a different label")
        elif fi.is_null:
            _need(not set(fi.support) & set(tgt_plants), "complex", f"{face} collapses into a plant")
        else:
            _need(fi.target not in tgt_plants, "complex", f"{face} maps onto a plant")
    for p in tgt_plants:
        _need(any(fi.target == p for fi in f.fmap.values()), "complex", f"plant {p} is not hit")

    # (2) degree
    claimed = _evidence(_get(doc, "degree", dict))
    try:
        ev = cx.degree_at_disk(f, claimed.disk)
    except HopfError as exc:
        raise _Reject("degree", str(exc)) from exc
    _need(ev.components == claimed.components, "degree", "recorded preimage signs differ")
    _need(ev.total == claimed.total == 1, "degree", f"degree is {ev.total}, recorded {claimed.total}")

    # (3) the witness is nontrivial in the source surface
    wit = _get(doc, "witness", dict)
    base = _get(doc, "basepoint", str)
    w = _word(_get(wit, "word", list))
    _need(all(e in src.edges for e, _ in w), "witness", "witness uses unknown edges")
    _need(base in src.vertices and w and src.is_loop(w, base), "witness",
          "witness is not a loop at the basepoint")
    piece = _get(wit, "piece", list)
    _need(piece == sorted(x for x in src.faces if x not in src_plants), "witness",
          "piece is not the complement of the plants")
    complements = {src.faces[p].word[0][0]: lab for p, lab in src_plants.items()}
    try:
        verdict = nontrivial_in_surface(w, src, complements, faces=piece, root=base)
    except HopfError as exc:
        raise _Reject("witness", str(exc)) from exc
    _need(verdict.nontrivial, "witness", "witness is trivial")
    _need(verdict.reduced == _word(_get(wit, "reduced", list)), "witness", "recorded reduced word differs")

    # (4) ... and dies under the map
    image = _word(_get(wit, "image", list))
    _need(image == f.apply(w), "image", "recorded image is not the image of the witness")
    try:
        rest = W.replay_trace(image, _get(wit, "image_trace", list))
    except HopfError as exc:
        raise _Reject("image", str(exc)) from exc
    _need(not rest, "image", f"image reduces to {W.fmt(rest)}, not the identity")

    # (5) end spaces: the case, the exhaustion, and both sides glue up to the input
    ends_recs = _get(doc, "ends", dict)
    nf_in = _replay_ends(_get(ends_recs, "input", dict), ends, "ends")
    finite_type = genus != INFINITE and all(isinstance(p, es.Pt) for p in es.parts(nf_in))
    _need(not finite_type, "ends", "input surface has finite type")
    case = _get(doc, "case", str)
    _need(case == _case_of(genus, ends), "ends", f"case {case} does not match the input")
    depth = _get(doc, "depth", int)
    _need(depth >= 1, "ends", "depth must be positive")
    levels = _check_exhaustion(_get(doc, "exhaustion", list), genus, ends, depth)
    for side, (c, plants) in sides.items():
        glued = glued_descriptor(c, plants)
        _need(glued.genus == genus, "ends", f"{side} genus {genus_text(glued.genus)} differs")
        nf = _replay_ends(_get(ends_recs, side, dict), glued.ends, "ends")
        _need(nf == nf_in, "ends", f"{side} ends normalize to {es.to_text(nf)}, not {es.to_text(nf_in)}")
    if case == CASES[0]:
        level1 = sorted(c["ends"] for c in levels[0]["circles"])
        _need(level1 == sorted(es.to_text(e) for _, e in src_plants.values()),
              "ends", "source plants are not the level-1 residuals")


def verify(doc):
    """Check a certificate document.

    Returns a :class:`Result`; raises ``HopfError("E_SCHEMA")`` when the
    document is not shaped like a certificate at all.
    """
    if not isinstance(doc, dict):
        raise _schema_error("certificate must be a JSON object")
    try:
        _verify(doc)
    except _Reject as r:
        return Result(False, r.clause, r.reason)
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        # well-formed JSON whose names do not resolve against each other
        return Result(False, "reference", f"dangling reference: {exc!r}")
    return Result(True)


def loads(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise _schema_error(f"invalid JSON: {exc}") from exc
