import json

import pytest

from hopfsurf import complex2 as cx
from hopfsurf import endspace as es
from hopfsurf import words as W
from hopfsurf.certificate import glued_descriptor, verify
from hopfsurf.dsl import parse_expr
from hopfsurf.errors import HopfError
from hopfsurf.hopf import (
    FINITE_ISOLATED, INFINITE_GENUS, INFINITE_ISOLATED, PHI, Draft, build_draft,
    build_fold_sphere, build_hopf_map, case1_pinch, case2_construct, case3_construct,
    classify_case, ensure_degree_plus_one, fold_inclusion, fold_reflection,
)
from hopfsurf.pi1 import presentation_of
from hopfsurf.surface import INFINITE, SurfaceDesc, surfaces_homeomorphic


def D(genus, ends):
    return SurfaceDesc(genus, parse_expr(ends))


# -- case dispatch ---------------------------------------------------------

@pytest.mark.parametrize("d,case", [
    (D(INFINITE, "pt!"), INFINITE_GENUS),
    (D(0, "cantor"), FINITE_ISOLATED),
    (D(0, "seq(pt)"), INFINITE_ISOLATED),
    (D(2, "3*pt + cantor"), FINITE_ISOLATED),
    (D(1, "seq(seq(pt)) + pt"), INFINITE_ISOLATED),
])
def test_classify_case(d, case):
    assert classify_case(d) == case


def test_finite_type_refused_with_explanation():
    with pytest.raises(HopfError) as exc:
        classify_case(D(2, "3*pt"))
    assert exc.value.code == "E_FINITE_TYPE"
    assert "Hopfian" in str(exc.value)
    with pytest.raises(HopfError) as exc:
        build_hopf_map(D(2, "3*pt"))
    assert exc.value.code == "E_FINITE_TYPE"


@pytest.mark.parametrize("construct,d", [
    (case1_pinch, D(0, "cantor")),
    (case2_construct, D(0, "seq(pt)")),
    (case3_construct, D(0, "cantor")),
    (case2_construct, D(INFINITE, "pt!")),
])
def test_constructions_check_their_case(construct, d):
    with pytest.raises(HopfError) as exc:
        construct(d)
    assert exc.value.code == "E_WRONG_CASE"


# -- the fold --------------------------------------------------------------

def test_fold_is_deterministic():
    a, b = build_fold_sphere(), build_fold_sphere()
    assert json.dumps(a.fold.to_json()) == json.dumps(b.fold.to_json())
    assert a.source.to_json() == b.source.to_json()


def test_fold_complexes_are_spheres():
    fd = build_fold_sphere()
    for c in (fd.source, fd.target):
        assert not c.problems() and not c.boundary_edges()
        assert c.euler_characteristic() == 2


def test_fold_is_identity_on_d0():
    fd = build_fold_sphere()
    f = fd.fold
    assert f.fmap["D0"] == cx.onto("D0")
    assert f.emap["de0"] == W.word("de0")
    assert [face for face, fi in f.fmap.items() if fi.target == "D0"] == ["D0"]


def test_fold_preimage_of_d1():
    f = build_fold_sphere().fold
    assert sorted(face for face, fi in f.fmap.items() if fi.target == "D1") == ["D11", "D12", "D13"]


def test_fold_degrees():
    f = build_fold_sphere().fold
    d0 = cx.degree_at_disk(f, "D0")
    assert d0.components == (("D0", 1),) and d0.total == 1
    d1 = cx.degree_at_disk(f, "D1")
    assert d1.components == (("D11", 1), ("D12", -1), ("D13", 1))
    assert d1.total == 1
    assert set(cx.regular_degrees(f).values()) == {1}


def test_phi_is_the_attaching_word():
    fd = build_fold_sphere()
    assert len(PHI) == 12
    assert W.is_rotation(fd.source.faces["X"].word, W.word(*PHI))
    assert fd.phi == W.word(*PHI)


def test_phi_image_winds_zero_times():
    fd = build_fold_sphere()
    annulus = fd.target.subcomplex(["Y"])
    image = fd.fold.apply(fd.phi)
    assert cx.winding_number(annulus, image) == 0
    assert W.reduce(image) != ()


def test_gamma_nontrivial_but_killed():
    fd = build_fold_sphere()
    x = presentation_of(fd.source, faces=["X"], root=fd.basepoint)
    assert x.loop_word(fd.gamma)
    assert W.reduce(fd.fold.apply(fd.gamma)) == ()


def test_gamma_core():
    fd = build_fold_sphere()
    inner = W.word("th1u", "th1l", "g1", "th2l", "th2u", "-g1")
    assert fd.gamma[2:-2] == inner


def test_reflection_and_inclusion_are_maps():
    fd = build_fold_sphere()
    rho = fold_reflection()
    assert set(cx.regular_degrees(rho).values()) == {-1}
    assert cx.degree_at_disk(fold_inclusion(fd), "D0").total == 1


# -- degree normalization --------------------------------------------------

def degree_minus_one_draft():
    fd = build_fold_sphere()
    F = cx.compose(fold_inclusion(fd), cx.compose(fold_reflection(), fd.fold)).check()
    assert F.is_self_map()
    return Draft(D(0, "cantor"), FINITE_ISOLATED, 1, {}, {}, F,
                 cx.degree_at_disk(F, "D0"), fd.basepoint, fd.gamma, F.apply(fd.gamma))


def test_ensure_degree_keeps_plus_one():
    d = build_draft(D(0, "cantor"))
    assert ensure_degree_plus_one(d) is d


def test_ensure_degree_squares_minus_one():
    draft = degree_minus_one_draft()
    assert draft.evidence.total == -1
    fixed = ensure_degree_plus_one(draft)
    assert fixed.evidence.total == 1
    assert fixed.evidence.disk == "D0"
    assert W.reduce(fixed.witness_image) == ()
    assert fixed.choices["squared"]
    assert not fixed.cellmap.problems()


def test_ensure_degree_rejects_other_degrees():
    f = cx.wrap_map(2, 3)
    draft = Draft(D(0, "cantor"), FINITE_ISOLATED, 1, {}, {}, f,
                  cx.degree_at_disk(f, "L0"), "N", (), ())
    with pytest.raises(HopfError) as exc:
        ensure_degree_plus_one(draft)
    assert exc.value.code == "E_BAD_DEGREE"


def test_ensure_degree_needs_self_map():
    fd = build_fold_sphere()
    f = cx.compose(fold_reflection(), fd.fold)
    draft = Draft(D(0, "cantor"), FINITE_ISOLATED, 1, {}, {}, f,
                  cx.degree_at_disk(f, "D0"), "p0", fd.gamma, f.apply(fd.gamma))
    with pytest.raises(HopfError) as exc:
        ensure_degree_plus_one(draft)
    assert exc.value.code == "E_MISMATCH"


# -- the three constructions -----------------------------------------------

def sides_match(draft):
    for c, plants in ((draft.source, draft.source_plants), (draft.target, draft.target_plants)):
        glued = glued_descriptor(c, plants)
        assert surfaces_homeomorphic(glued, draft.desc).name == "Homeomorphic"


@pytest.mark.parametrize("ends", ["pt!", "cantor!", "seq(pt!) + cantor", "pt + pt!"])
def test_pinch(ends):
    d = D(INFINITE, ends)
    draft = case1_pinch(d)
    assert draft.case == INFINITE_GENUS
    assert draft.evidence.total == 1
    assert draft.target.genus() == draft.source.genus() - 1
    assert W.reduce(draft.witness_image) == ()
    assert draft.choices["pinched_level"] == 1
    sides_match(draft)


def test_case2_cantor_tree():
    draft = case2_construct(D(0, "cantor"))
    assert "D0" not in draft.source_plants
    assert {draft.source_plants[f][1] for f in ("D11", "D12", "D13")} == {es.Cantor()}
    for c, plants in ((draft.source, draft.source_plants), (draft.target, draft.target_plants)):
        assert es.normalize(glued_descriptor(c, plants).ends) == es.Cantor()
    assert draft.evidence.total == 1


def test_case2_genus_and_punctures():
    draft = case2_construct(D(3, "4*pt + cantor"))
    assert draft.source_plants["D0"] == (3, parse_expr("4*pt"))
    sides_match(draft)


@pytest.mark.parametrize("d", [D(0, "seq(pt)"), D(5, "seq(pt) + cantor")])
def test_case3(d):
    draft = case3_construct(d)
    assert draft.source_plants["D0"] == (d.genus, d.ends)
    assert draft.target_plants["D1"] == (0, es.Pt())
    sides_match(draft)


@pytest.mark.parametrize("d", [
    D(INFINITE, "cantor!"), D(0, "cantor + 2*pt"), D(INFINITE, "pt!"), D(0, "seq(pt)"),
])
def test_build_hopf_map_verifies(d):
    cert = build_hopf_map(d)
    assert verify(cert)
    assert cert["degree"]["total"] == 1
