"""Symbolic end spaces of surfaces.

An expression denotes a compact, totally disconnected metrizable space
together with a closed subset of non-planar points:

    Pt(np)        a single point
    Cantor(np)    a Cantor set, every point non-planar iff ``np``
    Union(...)    a finite clopen disjoint union (flattened, sorted)
    Seq(body)     countably many copies of ``body`` converging to a limit

The limit of a ``Seq`` is non-planar iff the body has a non-planar point,
since the non-planar set is closed.  ``EMPTY`` only arises as a derivative.

Normalization is a rewrite system whose steps are recorded so that an
independent checker can replay them with :func:`apply_rule`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from hopfsurf.errors import HopfError

STEP_BUDGET = 10**6


@dataclass(frozen=True, order=False)
class Cardinality:
    """Either ``Fin(n)`` or ``Omega``; ``n is None`` encodes Omega."""

    n: Optional[int]

    @property
    def is_omega(self):
        return self.n is None

    def _key(self):
        return (1, 0) if self.n is None else (0, self.n)

    def __lt__(self, other):
        return self._key() < other._key()

    def __le__(self, other):
        return self._key() <= other._key()

    def __add__(self, other):
        if self.n is None or other.n is None:
            return OMEGA
        return Cardinality(self.n + other.n)

    def __str__(self):
        return "Omega" if self.n is None else f"Fin({self.n})"

    __repr__ = __str__


def Fin(n):
    return Cardinality(n)


OMEGA = Cardinality(None)


class EndExpr:
    __slots__ = ()

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True, repr=False)
class Pt(EndExpr):
    np: bool = False

    def __repr__(self):
        return "Pt!" if self.np else "Pt"


@dataclass(frozen=True, repr=False)
class Cantor(EndExpr):
    np: bool = False

    def __repr__(self):
        return "Cantor!" if self.np else "Cantor"


@dataclass(frozen=True, repr=False)
class Seq(EndExpr):
    body: EndExpr

    def __post_init__(self):
        if self.body is EMPTY or not isinstance(self.body, EndExpr):
            raise ValueError("Seq body must be a non-empty expression")

    def __repr__(self):
        return f"Seq({self.body!r})"


@dataclass(frozen=True, repr=False)
class Union(EndExpr):
    children: tuple

    def __post_init__(self):
        cs = self.children
        if len(cs) < 2:
            raise ValueError("Union needs at least two children")
        for c in cs:
            if c is EMPTY or isinstance(c, Union):
                raise ValueError("Union children must be flattened and non-empty")
        if list(cs) != sorted(cs, key=sort_key):
            raise ValueError("Union children must be sorted")

    def __repr__(self):
        return "Union{" + ", ".join(map(repr, self.children)) + "}"


class _Empty(EndExpr):
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Empty"

    def __reduce__(self):
        return (_Empty, ())


EMPTY = _Empty()


@lru_cache(maxsize=None)
def sort_key(e):
    if isinstance(e, Pt):
        return (0, e.np)
    if isinstance(e, Cantor):
        return (1, e.np)
    if isinstance(e, Seq):
        return (2, sort_key(e.body))
    if isinstance(e, Union):
        return (3, tuple(sort_key(c) for c in e.children))
    return (-1,)


def union(*children):
    """Clopen disjoint union; flattens, drops EMPTY and sorts."""
    flat = []
    for c in children:
        if isinstance(c, Union):
            flat.extend(c.children)
        elif c is not EMPTY:
            flat.append(c)
    if not flat:
        return EMPTY
    if len(flat) == 1:
        return flat[0]
    return Union(tuple(sorted(flat, key=sort_key)))


def parts(e):
    return e.children if isinstance(e, Union) else (e,)


def depth(e):
    if isinstance(e, Seq):
        return 1 + depth(e.body)
    if isinstance(e, Union):
        return 1 + max(depth(c) for c in e.children)
    return 0 if e is EMPTY else 1


@lru_cache(maxsize=None)
def has_np(e):
    if isinstance(e, (Pt, Cantor)):
        return e.np
    if isinstance(e, Seq):
        return has_np(e.body)
    if isinstance(e, Union):
        return any(has_np(c) for c in e.children)
    return False


def _check_nonempty(e):
    if e is EMPTY:
        raise HopfError("E_EMPTY", "the empty expression is not an end space")


@lru_cache(maxsize=None)
def isolated_census(e, np=None):
    """Number of isolated points; with ``np`` set, only points of that flag."""
    _check_nonempty(e)
    if isinstance(e, Pt):
        return Fin(1 if np is None or e.np == np else 0)
    if isinstance(e, Cantor):
        return Fin(0)
    if isinstance(e, Union):
        total = Fin(0)
        for c in e.children:
            total = total + isolated_census(c, np)
        return total
    return OMEGA if isolated_census(e.body, np).n != 0 else Fin(0)


@lru_cache(maxsize=None)
def derive(e):
    """Cantor-Bendixson derivative: the subspace of non-isolated points."""
    if e is EMPTY or isinstance(e, Pt):
        return EMPTY
    if isinstance(e, Cantor):
        return e
    if isinstance(e, Union):
        return union(*(derive(c) for c in e.children))
    db = derive(e.body)
    if db is EMPTY:
        return Pt(has_np(e.body))
    return Seq(db)


@lru_cache(maxsize=None)
def point_profile(e):
    """Counts of points by (Cantor-Bendixson rank, np flag) plus kernel flags.

    Computed on the expression itself, so the np flag of every Seq limit is
    exact even where :func:`derive` has to re-derive it.
    """
    if isinstance(e, Pt):
        return {(0, e.np): Fin(1)}, frozenset()
    if isinstance(e, Cantor):
        return {}, frozenset([e.np])
    if isinstance(e, Union):
        counts, kernel = {}, frozenset()
        for c in e.children:
            cc, ck = point_profile(c)
            for k, v in cc.items():
                counts[k] = counts.get(k, Fin(0)) + v
            kernel |= ck
        return counts, kernel
    bc, bk = point_profile(e.body)
    counts = {k: OMEGA for k in bc}
    limit_np = has_np(e.body)
    if bk:
        return counts, bk | {limit_np}
    rank = max(r for r, _ in bc) + 1
    counts[(rank, limit_np)] = counts.get((rank, limit_np), Fin(0)) + Fin(1)
    return counts, bk


@lru_cache(maxsize=None)
def embeds(x, y):
    """Whether ``x`` is syntactically a clopen piece of the space ``y``."""
    if x == y:
        return True
    if isinstance(y, Union):
        return any(embeds(x, c) for c in y.children)
    if isinstance(y, Seq):
        return embeds(x, y.body)
    return False


# -- rewriting -------------------------------------------------------------

RULES = {
    "R2": "merge equal Cantor children",
    "R3": "a sequence of Cantor sets is a Cantor set",
    "R4": "absorb an isolated point into infinitely many of its kind",
    "R6": "absorb a copy of a clopen piece of a sibling sequence",
    "R7": "absorb a Cantor set into a sibling containing one",
}


@dataclass(frozen=True)
class RewriteStep:
    rule: str
    path: tuple
    arg: Optional[int]
    before: str
    after: str

    def to_json(self):
        return {"rule": self.rule, "path": list(self.path), "arg": self.arg,
                "before": self.before, "after": self.after}

    @classmethod
    def from_json(cls, d):
        return cls(d["rule"], tuple(d["path"]), d["arg"], d["before"], d["after"])


def _drop(node, i):
    cs = list(node.children)
    del cs[i]
    return union(*cs)


def _side_condition(node, rule, arg):
    if rule == "R3":
        return isinstance(node, Seq) and isinstance(node.body, Cantor) and arg is None
    if not isinstance(node, Union) or not isinstance(arg, int):
        return False
    cs = node.children
    if not 0 <= arg < len(cs):
        return False
    x = cs[arg]
    others = cs[:arg] + cs[arg + 1:]
    if rule == "R2":
        return isinstance(x, Cantor) and x in others
    if rule == "R7":
        return (isinstance(x, Cantor) and x not in others
                and any(embeds(x, y) for y in others))
    if rule == "R4":
        return isinstance(x, Pt) and isolated_census(union(*others), x.np).is_omega
    if rule == "R6":
        return isinstance(x, Seq) and any(
            isinstance(y, Seq) and embeds(x, y.body) for y in others)
    return False


def apply_rule(node, rule, arg=None):
    """Apply one rewrite at the root of ``node``, checking its side condition."""
    if rule not in RULES:
        raise HopfError("E_RULE", f"unknown rule {rule!r}")
    if not _side_condition(node, rule, arg):
        raise HopfError("E_RULE", f"{rule} does not apply to {to_text(node)} at {arg}")
    if rule == "R3":
        return Cantor(node.body.np)
    return _drop(node, arg)


def _local_redex(node):
    if isinstance(node, Seq):
        return ("R3", None) if isinstance(node.body, Cantor) else None
    if not isinstance(node, Union):
        return None
    n = len(node.children)
    for rule in ("R2", "R7", "R4", "R6"):
        for i in range(n):
            if _side_condition(node, rule, i):
                return rule, i
    return None


def _find_redex(node, path=()):
    if isinstance(node, Seq):
        found = _find_redex(node.body, path + (0,))
        if found:
            return found
    elif isinstance(node, Union):
        for i, c in enumerate(node.children):
            found = _find_redex(c, path + (i,))
            if found:
                return found
    local = _local_redex(node)
    return (path,) + local if local else None


def subexpr(e, path):
    for i in path:
        if isinstance(e, Seq) and i == 0:
            e = e.body
        elif isinstance(e, Union) and 0 <= i < len(e.children):
            e = e.children[i]
        else:
            raise HopfError("E_PATH", f"bad path {list(path)}")
    return e


def replace_at(e, path, new):
    if not path:
        return new
    i, rest = path[0], path[1:]
    if isinstance(e, Seq):
        return Seq(replace_at(e.body, rest, new))
    cs = list(e.children)
    cs[i] = replace_at(cs[i], rest, new)
    return union(*cs)


@lru_cache(maxsize=None)
def normalize_with_trace(e):
    """Innermost-first rewriting to a fixpoint; returns (normal form, steps)."""
    _check_nonempty(e)
    steps = []
    cur = e
    for _ in range(STEP_BUDGET):
        found = _find_redex(cur)
        if found is None:
            return cur, tuple(steps)
        path, rule, arg = found
        sub = subexpr(cur, path)
        new = apply_rule(sub, rule, arg)
        steps.append(RewriteStep(rule, path, arg, to_text(sub), to_text(new)))
        cur = replace_at(cur, path, new)
    raise HopfError("E_BUDGET", "rewrite step budget exhausted")


def normalize(e):
    return normalize_with_trace(e)[0]


def replay(e, steps):
    """Replay recorded steps from ``e``; raises HopfError on any mismatch."""
    cur = e
    for st in steps:
        sub = subexpr(cur, st.path)
        if to_text(sub) != st.before:
            raise HopfError("E_REPLAY", f"step {st.rule} expected {st.before}, found {to_text(sub)}")
        new = apply_rule(sub, st.rule, st.arg)
        if to_text(new) != st.after:
            raise HopfError("E_REPLAY", f"step {st.rule} produced {to_text(new)}, recorded {st.after}")
        cur = replace_at(cur, st.path, new)
    return cur


def is_normal(e):
    return _find_redex(e) is None


# -- homeomorphism ---------------------------------------------------------

@dataclass(frozen=True)
class Homeomorphic:
    normal_form: EndExpr
    trace: tuple = ()
    name = "Homeomorphic"


@dataclass(frozen=True)
class NotHomeomorphic:
    invariant: str
    left: str
    right: str
    name = "NotHomeomorphic"


@dataclass(frozen=True)
class Unknown:
    name = "Unknown"


def invariant_stream(e):
    """Homeomorphism invariants of the pair (space, non-planar subset)."""
    _check_nonempty(e)
    stream = []
    cur, k = e, 0
    while True:
        if cur is EMPTY:
            stream.append((f"isolated_census(derive^{k})", "empty"))
            break
        c = isolated_census(cur)
        stream.append((f"isolated_census(derive^{k})", str(c)))
        if c.n == 0:
            break
        cur, k = derive(cur), k + 1
    counts, kernel = point_profile(e)
    stream.append(("perfect_kernel", str(bool(kernel))))
    stream.append(("np_kernel", str(sorted(kernel))))
    stream.append(("np_profile", str(sorted((r, f, str(v)) for (r, f), v in counts.items()))))
    return stream


def ends_homeomorphic(a, b):
    na, ta = normalize_with_trace(a)
    nb, tb = normalize_with_trace(b)
    if na == nb:
        return Homeomorphic(na, (ta, tb))
    sa, sb = invariant_stream(a), invariant_stream(b)
    for (name_a, va), (name_b, vb) in zip(sa, sb):
        if name_a != name_b:
            return NotHomeomorphic(name_a, va, f"{name_b}={vb}")
        if va != vb:
            name = "isolated_census" if name_a == "isolated_census(derive^0)" else name_a
            return NotHomeomorphic(name, va, vb)
    if len(sa) != len(sb):
        return NotHomeomorphic("cantor_bendixson_rank", str(len(sa)), str(len(sb)))
    return Unknown()


# -- truncation ------------------------------------------------------------

def split(e):
    """Refine one level: the pieces lying beyond one more ring of circles."""
    if isinstance(e, Pt):
        return [e]
    if isinstance(e, Cantor):
        return [e, e]
    if isinstance(e, Seq):
        return [e.body, e]
    out = []
    for c in e.children:
        out.extend(split(c))
    return out


def truncate(e, depth):
    _check_nonempty(e)
    labels = [e]
    for _ in range(depth):
        labels = [p for lab in labels for p in split(lab)]
    return labels


# -- text ------------------------------------------------------------------

def to_text(e):
    if e is EMPTY:
        return "empty"
    if isinstance(e, Pt):
        return "pt!" if e.np else "pt"
    if isinstance(e, Cantor):
        return "cantor!" if e.np else "cantor"
    if isinstance(e, Seq):
        return f"seq({to_text(e.body)})"
    out = []
    cs = e.children
    i = 0
    while i < len(cs):
        j = i
        while j < len(cs) and cs[j] == cs[i]:
            j += 1
        t = to_text(cs[i])
        out.append(t if j - i == 1 else f"{j - i}*{t}")
        i = j
    return " + ".join(out)


# -- enumeration -----------------------------------------------------------

LEAVES = (Pt(False), Pt(True), Cantor(False), Cantor(True))


def enumerate_exprs(max_depth, np=True):
    """All expressions of nesting depth <= max_depth built from binary unions."""
    leaves = [x for x in LEAVES if np or not x.np]
    levels = [list(leaves)]
    for _ in range(max_depth - 1):
        prev = levels[-1]
        seen = set(prev)
        out = list(prev)
        for b in prev:
            s = Seq(b)
            if s not in seen:
                seen.add(s)
                out.append(s)
        for i, x in enumerate(prev):
            for y in prev[i:]:
                u = union(x, y)
                if u not in seen:
                    seen.add(u)
                    out.append(u)
        levels.append(out)
    return levels[-1]


def random_expr(rng: random.Random, max_depth, np=True, width=3):
    if max_depth <= 1 or rng.random() < 0.25:
        leaves = [x for x in LEAVES if np or not x.np]
        return rng.choice(leaves)
    if rng.random() < 0.5:
        return Seq(random_expr(rng, max_depth - 1, np, width))
    k = rng.randint(2, width)
    return union(*(random_expr(rng, max_depth - 1, np, width) for _ in range(k)))
