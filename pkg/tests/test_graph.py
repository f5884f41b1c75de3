from pathlib import Path

import pytest

from src.certificates import CertificateKind
from src.degeneration import DegenerationWitness, ZERO_FAMILY
from src.graph import (
    EXPECTED_CLOSURES, DegenerationGraph, battery_violations, build_and_verify, build_graph,
    component_dimensions, component_roots, conflicts, node_name, restrict, rigid_nodes,
)
from src.models import load_graph_dir
from src.scalar import Scalar
from src.utils.literals import parse_literal

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="module")
def graph():
    store = load_graph_dir(DATA_DIR)
    assert not store.errors
    quick = [c for c in store.certificates if c.kind != CertificateKind.CLOSED_SET]
    return build_graph(store.witnesses, quick, n_jobs=1)


def test_everything_verifies(graph):
    assert graph.failures == []


@pytest.mark.parametrize("root", sorted(EXPECTED_CLOSURES))
def test_closures(graph, root):
    assert graph.reported_closure(root) == EXPECTED_CLOSURES[root]


def test_closure_is_reflexive(graph):
    for n in graph.nodes(members=True):
        assert n in graph.closure(n)


def test_every_node_reaches_the_zero_algebra(graph):
    for n in graph.nodes():
        assert ZERO_FAMILY in graph.closure(n)


def test_rigid_and_roots(graph):
    assert rigid_nodes(graph) == {"N5", "bN2"}
    assert component_roots(graph) == {"A1", "N5", "bN2"}


def test_restrictions(graph):
    three = restrict(graph, 3)
    assert component_roots(three) == {"A1", "N5"}
    assert rigid_nodes(three) == {"N5"}
    assert "rN1" not in three.graph
    assert component_roots(restrict(graph, 4)) == {"A1", "N5", "rN2"}


def test_dimensions(graph):
    dims = component_dimensions(graph, ["A1", "N5", ZERO_FAMILY])
    assert dims == {"A1": 9, "N5": 8, ZERO_FAMILY: 0}
    assert max(component_dimensions(graph).values()) == 9


def test_member_vertices(graph):
    data = graph.graph.nodes["g3(0)"]
    assert data["member"] and data["family"] == "g3"
    assert graph.graph.edges["g3", "g3(0)"]["kind"] == "member"
    assert graph.graph.edges["A1(1)", "A3"]["kind"] == "witness"


def test_edge_semantics(graph):
    assert graph.graph.edges["A1", "g3"]["semantics"] == "matching parameter"
    assert graph.graph.edges["N3", "g3(0)"]["semantics"] == "fixed algebras"
    assert graph.graph.edges["N5", ZERO_FAMILY]["provenance"] == "derived"


def test_no_conflicts_and_no_battery_violations(graph):
    assert conflicts(graph) == []
    assert battery_violations(graph) == []


def test_conflict_is_reported():
    G = DegenerationGraph.from_nodes(["N5", "N2"])
    G.graph.add_edge("N5", "N2", kind="witness")
    G.non_edges.append({"source": "N5", "target": "N2", "valid": True})
    assert conflicts(G) == [("N5", "N2")]


def test_single_vertex():
    G = DegenerationGraph.from_nodes(["N5"])
    assert G.closure("N5") == {"N5"}
    assert rigid_nodes(G) == {"N5"}


def test_failed_witness_stays_out():
    bad = DegenerationWitness("N2", "N3", [[parse_literal(x) for x in row] for row in
                                           (["1", "0", "-1"], ["0", "0", "1"], ["0", "0", "t"])])
    G = build_graph([bad], n_jobs=1, with_scaling=False)
    assert not G.graph.has_edge("N2", "N3")
    assert G.failures[0]["edge"] == ["N2", "N3"]
    assert "NotABasis" in G.failures[0]["reason"]


def test_node_names():
    assert node_name("N5") == "N5"
    assert node_name("g3", Scalar(0)) == "g3(0)"
    assert node_name("g3", parse_literal("0")) == "g3(0)"
    assert node_name("A1", parse_literal("alpha")) == "A1"


@pytest.mark.slow
def test_stored_graph_report():
    _, out = build_and_verify(DATA_DIR, n_jobs=1)
    assert out["failures"] == []
    assert all(out["expected_closures_match"].values())
    assert out["rigid"] == ["N5", "bN2"]
    assert out["dimension"] == 9
    assert out["conflicts"] == []
    assert out["restricted"]["3"]["roots"] == ["A1", "N5"]
    assert len(out["non_edges"]) == 6
