import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopfsurf import complex2 as cx
from hopfsurf import endspace as es
from hopfsurf import words as W
from hopfsurf.errors import HopfError
from hopfsurf.hopf import build_fold_sphere, fold_reflection
from hopfsurf.pi1 import induced_hom, is_disk_label, nontrivial_in_surface, presentation_of

PT = (0, es.Pt())
DISK = (0, es.EMPTY)


def test_four_holed_sphere():
    p = presentation_of(cx.surface_complex(0, 4))
    assert p.rank == 3 and p.is_free
    x1, x2, x3 = (W.word(g) for g in p.generators)
    assert list(p.boundary_words) == [x1, x2, x3, W.inverse(x1 + x2 + x3)]


def test_one_holed_torus():
    p = presentation_of(cx.surface_complex(1, 1))
    assert p.generators == ("a1", "b1")
    assert p.boundary_words == (W.word("a1", "b1", "-a1", "-b1"),)


def test_disk():
    c = cx.Complex2(["v"], {"e": ("v", "v")}, {"F": (["e"], 1)})
    p = presentation_of(c)
    assert p.rank == 0
    assert p.boundary_words == ((),)


def test_closed_piece_rejected():
    with pytest.raises(HopfError) as exc:
        presentation_of(cx.surface_complex(2, 0))
    assert exc.value.code == "E_CLOSED"


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 3), st.integers(1, 5))
def test_rank_is_one_minus_euler_characteristic(g, b):
    c = cx.surface_complex(g, b)
    p = presentation_of(c)
    assert p.is_free
    assert p.rank == 2 * g + b - 1 == 1 - c.euler_characteristic()


def test_fold_pieces_are_free_of_expected_rank():
    fd = build_fold_sphere()
    x = presentation_of(fd.source, faces=["X"], root="p0")
    assert x.is_free and x.rank == 3
    y = presentation_of(fd.target, faces=["Y"], root="q0")
    assert y.is_free and y.rank == 1


def test_identity_induces_identity():
    c = cx.surface_complex(2, 2)
    hom = induced_hom(cx.identity(c), "v")
    assert hom == {g: W.word(g) for g in hom}


def test_pinch_kills_the_boundary_of_the_handle():
    c = cx.Complex2(
        ["s", "h"],
        {"a1": ("s", "s"), "b1": ("s", "s"), "a2": ("s", "s"), "b2": ("s", "s"),
         "c": ("s", "s"), "t": ("s", "h"), "k": ("h", "h")},
        {"S": (["a1", "b1", "-a1", "-b1", "c"], 1),
         "R": (["-c", "a2", "b2", "-a2", "-b2", "t", "-k", "-t"], 1)},
    ).check()
    quotient, q = cx.collapse_subcomplex(c, ["S"])
    hom = induced_hom(q, "s", target=presentation_of(quotient, root="*"))
    src = presentation_of(c, root="s")
    assert src.loop_word(W.word("c")) and hom
    assert W.reduce(q.apply(W.word("c"))) == ()
    image_of_c = W.substitute(src.loop_word(W.word("c")), hom)
    assert image_of_c == ()


def fold_hom():
    fd = build_fold_sphere()
    src = presentation_of(fd.source, faces=["X"], root="p0")
    tgt = presentation_of(fd.target, faces=["Y"], root="q0")
    return fd, src, tgt, induced_hom(fd.fold, "p0", source=src, target=tgt)


def test_fold_kills_gamma_and_fixes_theta0():
    fd, src, tgt, hom = fold_hom()
    gamma = src.loop_word(fd.gamma)
    assert gamma
    assert W.substitute(gamma, hom) == ()
    assert W.substitute(src.loop_word(W.word("th0")), hom) == tgt.loop_word(W.word("th0"))


def test_fold_boundary_coherence():
    fd, src, tgt, hom = fold_hom()
    for bw in src.boundary_words:
        image = W.substitute(bw, hom)
        assert any(W.is_conjugate(image, W.power(t, s))
                   for t in tgt.boundary_words for s in (1, -1)), W.fmt(image)


def test_induced_hom_respects_composition():
    fd, src, tgt, hom_f = fold_hom()
    rho = fold_reflection()
    hom_r = induced_hom(rho, "q0", source=tgt, target=tgt)
    hom_rf = induced_hom(cx.compose(rho, fd.fold), "p0", source=src, target=tgt)
    assert hom_rf == {g: W.substitute(w, hom_r) for g, w in hom_f.items()}


def test_basepoint_mismatch():
    fd, src, tgt, _ = fold_hom()
    with pytest.raises(HopfError) as exc:
        induced_hom(fd.fold, "p1l", source=src, target=tgt)
    assert exc.value.code == "E_BASEPOINT"


def sphere_four_holes():
    c = cx.surface_complex(0, 4)
    return c, {f"c{j}": PT for j in range(1, 5)}


def test_nontrivial_product_in_four_holed_sphere():
    c, comp = sphere_four_holes()
    p = presentation_of(c, root="v")
    w = W.word("t1", "-c1", "-t1", "t2", "-c2", "-t2")
    v = nontrivial_in_surface(w, c, comp, root="v")
    assert v.nontrivial and len(p.loop_word(w)) == 2
    assert "incompressible" in v.justification


def test_commutator_in_one_holed_torus():
    c = cx.surface_complex(1, 1)
    w = W.word("a1", "b1", "-a1", "-b1")
    assert nontrivial_in_surface(w, c, {"c1": (2, es.Cantor())}, root="v")


def test_empty_word_is_trivial():
    c, comp = sphere_four_holes()
    assert not nontrivial_in_surface((), c, comp, root="v")


def test_disk_complement_refused():
    c, comp = sphere_four_holes()
    comp["c3"] = DISK
    with pytest.raises(HopfError) as exc:
        nontrivial_in_surface(W.word("t1", "-c1", "-t1"), c, comp, root="v")
    assert exc.value.code == "E_COMPRESSIBLE"


def test_missing_complement_refused():
    c, comp = sphere_four_holes()
    del comp["c4"]
    with pytest.raises(HopfError) as exc:
        nontrivial_in_surface(W.word("t1", "-c1", "-t1"), c, comp, root="v")
    assert exc.value.code == "E_COMPRESSIBLE"


def test_disk_label():
    assert is_disk_label(DISK)
    assert not is_disk_label(PT)
    assert not is_disk_label((1, es.EMPTY))
