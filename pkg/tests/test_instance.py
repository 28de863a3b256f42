import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import tfimprod as tp
from tfimprod.instance import Edge, Instance, InstanceError

TRIANGLE_DOC = json.dumps({
    "n": 3,
    "edges": [
        {"u": 0, "v": 1, "w": 1.0, "J": 1},
        {"u": 1, "v": 2, "w": 1.0, "J": 1},
        {"u": 0, "v": 2, "w": 1.0, "J": 1},
    ],
    "fields": [0.6, 0.6, 0.6],
})


def test_parse_triangle_document():
    inst = tp.parse_instance(TRIANGLE_DOC)
    W, H = tp.shift_constants(inst)
    assert W == pytest.approx(3.0, abs=1e-9)
    assert H == pytest.approx(9 / 5, abs=1e-9)
    assert inst.n == 3 and inst.m == 3


def test_parse_single_vertex_no_edges():
    inst = tp.parse_instance('{"n": 1, "edges": [], "fields": [2.5]}')
    assert tp.shift_constants(inst) == (0.0, 2.5)


def test_parse_uniform_field_shorthand():
    inst = tp.parse_instance('{"n": 3, "edges": [], "fields": 0.25}')
    assert inst.fields == (0.25, 0.25, 0.25)


def test_parse_normalizes_edge_orientation():
    inst = tp.parse_instance('{"n": 2, "edges": [{"u": 1, "v": 0, "w": 0.5, "J": -1}], "fields": 0}')
    assert inst.edges[0] == Edge(0, 1, 0.5, -1)


@pytest.mark.parametrize(
    "doc,path_piece",
    [
        ('{"n": 2, "edges": [{"u": 0, "v": 0, "w": 1, "J": 1}], "fields": 0}', "edges[0]"),
        ('{"n": 2, "edges": [{"u": 0, "v": 1, "w": 1, "J": 1}, {"u": 1, "v": 0, "w": 2, "J": -1}], "fields": 0}', "edges[1]"),
        ('{"n": 2, "edges": [{"u": 0, "v": 1, "w": -1, "J": 1}], "fields": 0}', "edges[0].w"),
        ('{"n": 2, "edges": [{"u": 0, "v": 1, "w": 1, "J": 2}], "fields": 0}', "edges[0].J"),
        ('{"n": 2, "edges": [{"u": 0, "v": 1, "w": 1, "J": true}], "fields": 0}', "edges[0].J"),
        ('{"n": 2, "edges": [{"u": 0, "v": 3, "w": 1, "J": 1}], "fields": 0}', "edges[0].v"),
        ('{"n": 2, "edges": [{"u": 0.5, "v": 1, "w": 1, "J": 1}], "fields": 0}', "edges[0].u"),
        ('{"n": 2, "edges": [{"u": 0, "v": 1, "J": 1}], "fields": 0}', "edges[0].w"),
        ('{"n": 2, "edges": [], "fields": [-0.5, 1]}', "fields[0]"),
        ('{"n": 2, "edges": [], "fields": [1]}', "fields"),
        ('{"n": -1, "edges": [], "fields": []}', "n"),
        ('{"edges": [], "fields": []}', "n"),
        ("not json", "$"),
        ("[1, 2]", "$"),
    ],
)
def test_parse_rejections_carry_field_path(doc, path_piece):
    with pytest.raises(InstanceError) as err:
        tp.parse_instance(doc)
    assert err.value.path == path_piece


def test_zero_weight_edge_is_retained():
    inst = tp.parse_instance('{"n": 2, "edges": [{"u": 0, "v": 1, "w": 0.0, "J": 1}], "fields": 0}')
    assert inst.m == 1 and inst.W == 0.0


def test_instance_is_immutable():
    inst = tp.triangle_instance()
    with pytest.raises(Exception):
        inst.n = 5


def test_shift_constants_direct_sums():
    inst = Instance(2, (Edge(0, 1, 2.0, 1),), (0.5, 0.5))
    assert tp.shift_constants(inst) == (2.0, 1.0)
    empty = Instance(2, (), (0.0, 0.0))
    assert tp.shift_constants(empty) == (0.0, 0.0)


@st.composite
def instances(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    edges = tuple(
        Edge(u, v, draw(st.floats(0, 5, allow_nan=False)), draw(st.sampled_from((1, -1))))
        for u, v in chosen
    )
    fields = tuple(draw(st.lists(st.floats(0, 3, allow_nan=False), min_size=n, max_size=n)))
    return Instance(n, edges, fields)


@settings(max_examples=60, deadline=None)
@given(instances())
def test_serialize_parse_round_trip(inst):
    assert tp.parse_instance(tp.serialize_instance(inst)) == inst


@settings(max_examples=40, deadline=None)
@given(instances(max_n=5), instances(max_n=5))
def test_shift_constants_additive_under_disjoint_union(a, b):
    shifted = tuple(Edge(e.u + a.n, e.v + a.n, e.w, e.J) for e in b.edges)
    union = Instance(a.n + b.n, a.edges + shifted, a.fields + b.fields)
    assert union.W == pytest.approx(a.W + b.W, abs=1e-12)
    assert union.H == pytest.approx(a.H + b.H, abs=1e-12)


def test_frustration_triangle_all_plus():
    assert tp.is_frustrated(tp.triangle_instance()) is True


def test_frustration_four_cycle_single_negative():
    # sign product around the only cycle is -1: frustrated
    edges = (Edge(0, 1, 1.0, 1), Edge(1, 2, 1.0, 1), Edge(2, 3, 1.0, 1), Edge(0, 3, 1.0, -1))
    assert tp.is_frustrated(Instance(4, edges, (0.0,) * 4)) is True
    # all +1 around an even cycle is 2-colorable: not frustrated
    even = (Edge(0, 1, 1.0, 1), Edge(1, 2, 1.0, 1), Edge(2, 3, 1.0, 1), Edge(0, 3, 1.0, 1))
    assert tp.is_frustrated(Instance(4, even, (0.0,) * 4)) is False


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 8), st.data())
def test_frustration_false_on_paths(n, data):
    signs = data.draw(st.lists(st.sampled_from((1, -1)), min_size=n - 1, max_size=n - 1))
    edges = tuple(Edge(i, i + 1, 1.0, signs[i]) for i in range(n - 1))
    assert tp.is_frustrated(Instance(n, edges, (0.0,) * n)) is False


def test_frustration_gauge_invariance():
    rng = np.random.default_rng(5)
    for trial in range(25):
        inst = tp.random_instance(int(rng.integers(3, 9)), 0.6, seed=300 + trial)
        base = tp.is_frustrated(inst)
        flips = rng.random(inst.n) < 0.5
        gauged = tuple(
            Edge(e.u, e.v, e.w, e.J * (-1 if flips[e.u] ^ flips[e.v] else 1))
            for e in inst.edges
        )
        assert tp.is_frustrated(Instance(inst.n, gauged, inst.fields)) == base


def test_random_instance_is_deterministic():
    a = tp.random_instance(7, 0.5, seed=11)
    b = tp.random_instance(7, 0.5, seed=11)
    assert a == b
