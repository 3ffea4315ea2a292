from hopfsurf import complex2 as cx
from hopfsurf.dot import complex_to_dot, ends_to_dot
from hopfsurf.dsl import parse_expr


def test_np_nodes_double_circled():
    text = ends_to_dot(parse_expr("pt + pt! + seq(cantor!)"))
    assert text.count("doublecircle") == 1
    assert "doubleoctagon" in text and "peripheries=2" in text
    assert text.strip().endswith("}")


def test_planar_tree_has_single_outlines():
    text = ends_to_dot(parse_expr("seq(pt) + cantor"))
    assert "double" not in text and "peripheries=1" in text


def test_complex_dot_lists_every_cell():
    c = cx.surface_complex(1, 2)
    text = complex_to_dot(c)
    for e in c.edges:
        assert f'label="{e}"' in text
    assert '"F (+)"' in text
