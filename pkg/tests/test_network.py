import json
from pathlib import Path

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_force_trees, dense_impedance, random_connected_network
from wangnet.network import (
    Element,
    Network,
    NetlistError,
    PoleError,
    cotrees,
    count_trees,
    duality_check,
    joint_impedance,
    load_network,
    mesh_determinant,
    mesh_matrix,
    net_impedance,
    network_to_json,
    node_determinant,
    parse_network,
    spanning_trees,
)

NETLISTS = Path(__file__).parent.parent / "netlists"
BRIDGED_T = NETLISTS / "bridged_t.json"


def _doc():
    return json.loads(BRIDGED_T.read_text())


def test_bridged_t_determinants():
    net = load_network(BRIDGED_T)
    assert str(mesh_determinant(net)) == "abc+abe+acd+ace+ade+bcd+bde+cde"
    assert str(node_determinant(net)) == "ABD+ABE+ACD+ACE+ADE+BCD+BCE+CDE"
    assert str(mesh_determinant(net, include_source=False)) == "ab+ad+ae+bc+bd+be+cd+ce"
    assert [str(r) for r in mesh_matrix(net).rows()] == ["a+d", "a+b+c", "b+d+e"]


def test_bridged_t_trees():
    net = load_network(BRIDGED_T)
    assert count_trees(net) == 8
    assert spanning_trees(net) == brute_force_trees(net)
    assert frozenset("cd") in cotrees(net)
    assert duality_check(net)


def test_bridged_t_unit_impedance_matches_dense_solve():
    net = load_network(BRIDGED_T)
    assert joint_impedance(net, 1j) == pytest.approx(dense_impedance(net, 1j), rel=1e-12)
    assert joint_impedance(net, 1j) == pytest.approx(1.0)


def test_bridged_t_without_declared_loops():
    doc = _doc()
    del doc["loops"]
    net = parse_network(json.dumps(doc))
    assert str(mesh_determinant(net)) == "abc+abe+acd+ace+ade+bcd+bde+cde"
    assert len(mesh_matrix(net).rows()) == 3


def test_reversed_loop_orientation_is_normalized():
    doc = _doc()
    doc["loops"] = [["c", "b", "a"], ["d", "e", "b"]]
    net = parse_network(json.dumps(doc))
    assert str(mesh_determinant(net)) == "abc+abe+acd+ace+ade+bcd+bde+cde"


def test_small_graphs():
    assert str(node_determinant(load_network(NETLISTS / "resistor_50.json"))) == "A"
    k4 = load_network(NETLISTS / "k4.json")
    assert count_trees(k4) == 16 == len(spanning_trees(k4))
    path = Network.create(["a", "b", "c"], [("p", "a", "b", Element("R", 1.0)),
                                             ("q", "b", "c", Element("R", 1.0))], reference="a")
    assert count_trees(path) == 1


@pytest.mark.parametrize("graph", [nx.complete_graph(5), nx.complete_bipartite_graph(3, 3),
                                   nx.petersen_graph()])
def test_nonplanar_duality(graph):
    nodes = [str(n) for n in graph.nodes]
    edges = [(f"e{k}", str(u), str(v), Element("R", 1.0)) for k, (u, v) in enumerate(graph.edges)]
    net = Network.create(nodes, edges, reference=nodes[0])
    assert duality_check(net)
    assert count_trees(net) == round(nx.number_of_spanning_trees(graph))


def test_parallel_edges():
    net = Network.create(["g", "x"], [("p", "x", "g", Element("R", 2.0)),
                                      ("q", "g", "x", Element("R", 2.0))], reference="g", input="x")
    assert str(mesh_determinant(net, include_source=False)) == "p+q"
    assert joint_impedance(net, 1.0) == pytest.approx(1.0)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_impedance_against_dense_solve(seed):
    rng = np.random.default_rng(seed)
    net = random_connected_network(rng, 8)
    kinds = rng.choice(["R", "L", "C"], size=len(net.edges))
    edges = [(e.id, e.u, e.v, Element(k, float(rng.uniform(0.5, 2.0)))) for e, k in zip(net.edges, kinds)]
    net = Network.create(net.nodes, edges, net.reference, net.input)
    s = complex(rng.uniform(0.1, 3), rng.uniform(0.1, 3))
    assert joint_impedance(net, s) == pytest.approx(dense_impedance(net, s), rel=1e-9)


def test_vectorized_impedance():
    net = load_network(NETLISTS / "k4.json")
    s = 1j * np.logspace(6, 12, 7)
    z = joint_impedance(net, s)
    assert z.shape == (7,)
    for k, x in enumerate(s):
        assert z[k] == pytest.approx(dense_impedance(net, x), rel=1e-9)


def test_pole_detection():
    net = Network.create(["g", "x"], [("l", "x", "g", Element("L", 1.0)),
                                      ("c", "x", "g", Element("C", 1.0))], reference="g", input="x")
    with pytest.raises(PoleError):
        joint_impedance(net, 1j)
    z = net_impedance(net)(np.array([1j, 2j]), strict=False)
    assert np.isnan(z[0]) and np.isfinite(z[1])


def test_json_round_trip():
    net = load_network(NETLISTS / "k4.json")
    again = parse_network(network_to_json(net))
    assert str(node_determinant(again)) == str(node_determinant(net))
    assert again.to_dict() == net.to_dict()


@pytest.mark.parametrize("mutate, where", [
    (lambda d: d.update(extra=1), "unknown field"),
    (lambda d: d["edges"].append(dict(d["edges"][0])), "duplicate edge id"),
    (lambda d: d["edges"][0].update({"to": "zz"}), "edges[0].to"),
    (lambda d: d["edges"][0].update({"to": "n1"}), "self-loop"),
    (lambda d: d["edges"][0]["element"].update(value=-1.0), "positive"),
    (lambda d: d["edges"][0]["element"].update(kind="Q"), "kind"),
    (lambda d: d["edges"][0]["element"].update(allow_negative=True), "allow_negative"),
    (lambda d: d.update(loops=[["a", "b", "c"]]), "independent loops"),
    (lambda d: d.update(loops=[["a", "b"], ["b", "e", "d"]]), "loops[0]"),
    (lambda d: d.update(reference="nope"), "reference"),
    (lambda d: d.update(input="n0"), "input"),
    (lambda d: d.update(nodes=d["nodes"] + ["n9"]), "not connected"),
])
def test_validation_errors(mutate, where):
    doc = _doc()
    mutate(doc)
    with pytest.raises(NetlistError, match=None) as info:
        parse_network(json.dumps(doc))
    assert where in str(info.value)


def test_syntax_error_has_location():
    with pytest.raises(NetlistError, match="line 2 column"):
        parse_network('{\n  "nodes": [,]}')


def test_negative_inductor_needs_flag():
    with pytest.raises(NetlistError):
        Element("L", -1e-9)
    assert Element("L", -1e-9, allow_negative=True).value < 0


def test_name_clash_uses_prefixed_admittances():
    net = Network.create(["g", "x", "y"], [("a", "x", "g", Element("R", 1.0)),
                                           ("A", "x", "y", Element("R", 1.0)),
                                           ("b", "y", "g", Element("R", 1.0))], reference="g")
    assert {e.admittance_symbol.name for e in net.edges} == {"Ya", "YA", "B"}
