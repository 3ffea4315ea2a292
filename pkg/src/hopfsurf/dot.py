"""Graphviz DOT output for end trees and cell complexes."""

from hopfsurf import endspace as es


def _q(s):
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def ends_to_dot(e, name="ends"):
    """Expression tree of an end space; non-planar leaves are double circles."""
    lines = [f"digraph {_q(name)} {{", "  node [fontname=Helvetica];"]
    counter = [0]

    def visit(x):
        nid = f"n{counter[0]}"
        counter[0] += 1
        if isinstance(x, es.Pt):
            shape = "doublecircle" if x.np else "circle"
            lines.append(f"  {nid} [label=\"pt\", shape={shape}];")
        elif isinstance(x, es.Cantor):
            shape = "doubleoctagon" if x.np else "octagon"
            lines.append(f"  {nid} [label=\"cantor\", shape={shape}];")
        elif isinstance(x, es.Seq):
            peri = 2 if es.has_np(x) else 1
            lines.append(f"  {nid} [label=\"seq\", shape=box, peripheries={peri}];")
            lines.append(f"  {nid} -> {visit(x.body)};")
        elif x is es.EMPTY:
            lines.append(f"  {nid} [label=\"empty\", shape=plaintext];")
        else:
            lines.append(f"  {nid} [label=\"+\", shape=diamond];")
            for c in x.children:
                lines.append(f"  {nid} -> {visit(c)};")
        return nid

    visit(e)
    lines.append("}")
    return "\n".join(lines) + "\n"


def _complex_body(c, prefix, plants=()):
    lines = []
    for v in c.vertices:
        lines.append(f"    {_q(prefix + v)} [label={_q(v)}, shape=point, xlabel={_q(v)}];")
    for e, (s, t) in c.edges.items():
        lines.append(f"    {_q(prefix + s)} -> {_q(prefix + t)} [label={_q(e)}];")
    for f, face in c.faces.items():
        shape = "doubleoctagon" if f in plants else "box"
        sign = "+" if face.orientation > 0 else "-"
        lines.append(f"    {_q(prefix + 'face:' + f)} [label={_q(f'{f} ({sign})')}, shape={shape}];")
        first = face.word[0][0]
        s, _ = c.edges[first]
        lines.append(f"    {_q(prefix + 'face:' + f)} -> {_q(prefix + s)} [style=dotted, arrowhead=none];")
    return lines


def complex_to_dot(c, name="complex", plants=()):
    """1-skeleton with edge labels; faces are boxes tied to their base vertex."""
    lines = [f"digraph {_q(name)} {{", "  node [fontname=Helvetica];"]
    lines += [x[2:] for x in _complex_body(c, "")]
    lines.append("}")
    return "\n".join(lines) + "\n"


def certificate_to_dot(cert):
    """Source and target complexes of a certificate, side by side."""
    from hopfsurf.complex2 import Complex2

    lines = ["digraph certificate {", "  node [fontname=Helvetica];", "  compound=true;"]
    for side in ("source", "target"):
        c = Complex2.from_json(cert[side]["complex"])
        lines.append(f"  subgraph cluster_{side} {{")
        lines.append(f"    label={_q(side)};")
        lines += _complex_body(c, side + ":", set(cert[side]["plants"]))
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
