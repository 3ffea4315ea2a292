"""Acceptance criteria; each test prints one PASS/FAIL line."""

import random
import time

import pytest

from hopfsurf import certificate as C
from hopfsurf import complex2 as cx
from hopfsurf import endspace as es
from hopfsurf import words as W
from hopfsurf.dsl import parse_descriptor
from hopfsurf.errors import HopfError
from hopfsurf.hopf import build_fold_sphere, build_hopf_map
from hopfsurf.surface import INFINITE, SurfaceDesc, is_finite_type

from mutations import mutation_sites, mutate
from support import degree, random_map_pair, rule_applications


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}")
    return emit


def infinite_type_descriptors(seed=2024, extra=200):
    out = []
    for e in es.enumerate_exprs(3):
        for g in ([INFINITE] if es.has_np(e) else [0, 2]):
            d = SurfaceDesc(g, e)
            if not is_finite_type(d):
                out.append(d)
    exhaustive = len(out)
    rng = random.Random(seed)
    while len(out) < exhaustive + extra:
        e = es.random_expr(rng, 5)
        if es.depth(e) <= 3:
            continue
        d = SurfaceDesc(INFINITE if es.has_np(e) else rng.randint(0, 5), e)
        if not is_finite_type(d):
            out.append(d)
    return out, exhaustive


def test_1_pipeline(report):
    descs, exhaustive = infinite_type_descriptors()
    start = time.perf_counter()
    failures = []
    for d in descs:
        try:
            cert = build_hopf_map(d)
        except HopfError as exc:
            failures.append((str(d), str(exc)))
            continue
        result = C.verify(cert)
        wit = cert["witness"]
        image = tuple((s, e) for s, e in wit["image"])
        if not result or cert["degree"]["total"] != 1 or W.replay_trace(image, wit["image_trace"]):
            failures.append((str(d), str(result)))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 60
    report(1, ok, f"{len(descs)} descriptors ({exhaustive} exhaustive at depth<=3, "
                  f"{len(descs) - exhaustive} random deeper) built and verified in {elapsed:.1f}s "
                  f"(limit 60s); failures={len(failures)}")
    assert ok, failures[:5]


def test_2_hopfian_guard(report):
    descs = [SurfaceDesc(g, es.union(*([es.Pt()] * k))) for g in range(6) for k in range(1, 6)]
    descs += [SurfaceDesc(g, e) for e in es.enumerate_exprs(3) if not es.has_np(e)
              for g in range(6) if is_finite_type(SurfaceDesc(g, e))]
    wrong = []
    for d in descs:
        try:
            build_hopf_map(d)
            wrong.append(str(d))
        except HopfError as exc:
            if exc.code != "E_FINITE_TYPE":
                wrong.append(f"{d}: {exc.code}")
    report(2, not wrong, f"{len(descs)} finite-type descriptors (genus<=5, 1..5 punctures) "
                         f"refused with E_FINITE_TYPE; wrong={len(wrong)}")
    assert not wrong


def test_3_fold_microchecks(report):
    fd = build_fold_sphere()
    d0 = cx.degree_at_disk(fd.fold, "D0")
    d1 = cx.degree_at_disk(fd.fold, "D1")
    winding = cx.winding_number(fd.target.subcomplex(["Y"]), fd.fold.apply(fd.phi))
    from hopfsurf.pi1 import presentation_of

    gamma = presentation_of(fd.source, faces=["X"], root=fd.basepoint).loop_word(fd.gamma)
    image = W.reduce(fd.fold.apply(fd.gamma))
    checks = {
        "D1 signs (+1,-1,+1)": [s for _, s in d1.components] == [1, -1, 1],
        "D1 total +1": d1.total == 1,
        "D0 total +1": d0.total == 1 and len(d0.components) == 1,
        "winding(phi)=0": winding == 0,
        "gamma nonempty": bool(gamma),
        "image(gamma) empty": image == (),
    }
    ok = all(checks.values())
    report(3, ok, "; ".join(f"{k}: {'ok' if v else 'NO'}" for k, v in checks.items()))
    assert ok


def test_4_absorb_finite(report):
    rng = random.Random(35)
    tried = bad = 0
    while tried < 1000:
        e = es.random_expr(rng, 5)
        # absorbed points are planar: the census that matters is the planar one
        if not es.isolated_census(e, np=False).is_omega:
            continue
        tried += 1
        k = rng.choice((1, 2, 3))
        if es.normalize(es.union(e, *([es.Pt()] * k))) != es.normalize(e):
            bad += 1
    report(4, bad == 0, f"{tried} expressions with infinitely many planar isolated points: "
                        f"normalize(e + k*pt) == normalize(e) exactly; mismatches={bad}")
    assert bad == 0


def test_5_degree_oracle(report):
    rng = random.Random(5)
    disagree = checked_faces = 0
    for _ in range(500):
        f = cx.random_sphere_map(rng, max_faces=64)
        totals = cx.regular_degrees(f)
        checked_faces += len(totals)
        if len(set(totals.values())) != 1:
            disagree += 1
    mult_bad = 0
    for _ in range(100):
        f, g = random_map_pair(rng)
        if degree(cx.compose(g, f)) != degree(g) * degree(f):
            mult_bad += 1
    ok = disagree == 0 and mult_bad == 0
    report(5, ok, f"500 random sphere maps, {checked_faces} regular faces, disagreements={disagree}; "
                  f"100 composable pairs, multiplicativity failures={mult_bad}")
    assert ok


def test_6_rewrite_soundness(report):
    exprs = es.enumerate_exprs(4)
    applications = bad = 0
    for e in exprs:
        before = es.invariant_stream(e)
        for path, rule, arg in rule_applications(e):
            applications += 1
            after = es.replace_at(e, path, es.apply_rule(es.subexpr(e, path), rule, arg))
            if es.invariant_stream(after) != before:
                bad += 1
    report(6, bad == 0, f"{applications} rule applications over {len(exprs)} expressions "
                        f"(depth<=4): invariant streams differ in {bad}")
    assert bad == 0 and applications > 0


TAMPER_INPUTS = [
    "surface { genus = inf; ends = pt! }",
    "surface { genus = inf; ends = cantor! }",
    "surface { genus = inf; ends = seq(pt!) + cantor }",
    "surface { genus = inf; ends = pt + pt! }",
    "surface { genus = 0; ends = cantor }",
    "surface { genus = 3; ends = 4*pt + cantor }",
    "surface { genus = 0; ends = cantor + 2*pt }",
    "surface { genus = 0; ends = seq(pt) }",
    "surface { genus = 5; ends = seq(pt) + cantor }",
    "surface { genus = 1; ends = seq(seq(pt)) + pt }",
]


def test_7_tamper_fuzzing(report):
    rng = random.Random(7)
    total = accepted = 0
    per_kind = {}
    for text in TAMPER_INPUTS:
        cert = build_hopf_map(parse_descriptor(text))
        assert C.verify(cert)
        sites = mutation_sites(cert)
        for _ in range(1000):
            site = rng.choice(sites)
            doc = mutate(cert, site, rng)
            total += 1
            per_kind[site[0]] = per_kind.get(site[0], 0) + 1
            try:
                if C.verify(doc):
                    accepted += 1
            except HopfError:
                pass
    report(7, accepted == 0, f"{total} single-field mutations on {len(TAMPER_INPUTS)} certificates "
                             f"({', '.join(f'{k}={v}' for k, v in sorted(per_kind.items()))}); "
                             f"accepted={accepted}")
    assert accepted == 0 and total >= 1000
