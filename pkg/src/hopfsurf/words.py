"""Words in free groups: tuples of ``(symbol, +1 | -1)`` letters."""

from hopfsurf.errors import HopfError


def letter(s):
    """Parse ``"a"`` or ``"-a"`` into a letter."""
    return (s[1:], -1) if s.startswith("-") else (s, 1)


def word(*letters):
    return tuple(letter(x) if isinstance(x, str) else tuple(x) for x in letters)


def fmt(w):
    if not w:
        return "1"
    return " ".join(s if e == 1 else f"{s}^-1" for s, e in w)


def inverse(w):
    return tuple((s, -e) for s, e in reversed(w))


def reduce_with_trace(w):
    """Free reduction; the trace lists, per cancellation, the index ``i`` in
    the current word such that letters ``i`` and ``i+1`` cancel."""
    stack, trace = [], []
    for x in w:
        if stack and stack[-1][0] == x[0] and stack[-1][1] == -x[1]:
            trace.append(len(stack) - 1)
            stack.pop()
        else:
            stack.append(tuple(x))
    return tuple(stack), trace


def reduce(w):
    return reduce_with_trace(w)[0]


def replay_trace(w, trace):
    cur = [tuple(x) for x in w]
    for i in trace:
        if not (isinstance(i, int) and 0 <= i < len(cur) - 1):
            raise HopfError("E_TRACE", f"cancellation index {i!r} out of range")
        a, b = cur[i], cur[i + 1]
        if a[0] != b[0] or a[1] != -b[1]:
            raise HopfError("E_TRACE", f"letters at {i} do not cancel")
        del cur[i:i + 2]
    return tuple(cur)


def cyclic_reduce(w):
    w = list(reduce(w))
    while len(w) >= 2 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
        w = w[1:-1]
    return tuple(w)


def is_rotation(u, v):
    if len(u) != len(v):
        return False
    if not u:
        return True
    doubled = u + u
    return any(doubled[i:i + len(v)] == v for i in range(len(u)))


def is_conjugate(u, v):
    return is_rotation(cyclic_reduce(u), cyclic_reduce(v))


def power(w, n):
    if n < 0:
        return inverse(w) * -n
    return tuple(w) * n


def substitute(w, images):
    """Replace each symbol by its image word, inverting for negative letters."""
    out = []
    for s, e in w:
        img = images[s]
        out.extend(img if e == 1 else inverse(img))
    return reduce(out)


def exponent_sum(w, symbol):
    return sum(e for s, e in w if s == symbol)
