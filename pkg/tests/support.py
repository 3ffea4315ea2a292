"""Generators shared by the test modules."""

import random

from hypothesis import strategies as st

from hopfsurf import complex2 as cx
from hopfsurf import endspace as es


def _leaves(np):
    flags = st.booleans() if np else st.just(False)
    return st.one_of(flags.map(es.Pt), flags.map(es.Cantor))


def end_exprs(np=True, max_leaves=12):
    """Hypothesis strategy for non-empty end expressions."""
    return st.recursive(
        _leaves(np),
        lambda kids: st.one_of(
            kids.map(es.Seq),
            st.lists(kids, min_size=2, max_size=4).map(lambda cs: es.union(*cs)),
        ),
        max_leaves=max_leaves,
    )


def subterms(e, path=()):
    yield path, e
    if isinstance(e, es.Seq):
        yield from subterms(e.body, path + (0,))
    elif isinstance(e, es.Union):
        for i, c in enumerate(e.children):
            yield from subterms(c, path + (i,))


def rule_applications(e):
    """Every (path, rule, arg) at which some rewrite rule applies to ``e``."""
    for path, sub in subterms(e):
        args = range(len(sub.children)) if isinstance(sub, es.Union) else [None]
        for rule in es.RULES:
            for arg in args:
                try:
                    es.apply_rule(sub, rule, arg)
                except Exception:
                    continue
                yield path, rule, arg


def random_map_pair(rng: random.Random, max_faces=64):
    """A composable pair (f, g) of sphere maps with known degrees."""
    n = rng.randint(2, 4)
    k1, k2 = rng.randint(1, 3), rng.randint(1, 3)
    g = cx.wrap_map(k2, n, "s", "")
    f = cx.wrap_map(k1, k2 * n, "t", "s")
    tag = 0
    while len(f.source.faces) < max_faces and rng.random() < 0.8:
        fine, back = cx.refine(f.source, rng, tag)
        tag += 1
        f = cx.compose(f, back)
    if rng.random() < 0.5:
        g = cx.compose(cx.mirror_map(g.target), g)
    return f, g


def degree(f):
    """The common total over all regular faces (asserts they agree)."""
    totals = set(cx.regular_degrees(f).values())
    assert len(totals) == 1, totals
    return totals.pop()
