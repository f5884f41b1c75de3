import logging
from dataclasses import dataclass, field
from itertools import permutations

import networkx as nx
from joblib import Parallel, delayed
from tqdm import tqdm

from src import config
from src.catalog import FAMILIES, CatalogLabel, family, instantiate, symbolic
from src.certificates import (
    NonDegenerationCertificate, battery_from_profiles, profile, verify_certificate,
)
from src.degeneration import DegenerationWitness, ZERO_FAMILY, scaling_witness, verify_degeneration
from src.invariants import derivation_dim
from src.models import load_graph_dir
from src.scalar import Scalar
from src.symbolic import RationalFunction

logger = logging.getLogger(__name__)

AMBIENT_DIMENSION = 9

EXPECTED_CLOSURES = {
    "A1": {"A1", "A2", "A3", "g1", "g2", "g3", "g4", ZERO_FAMILY},
    "N5": {"N1", "N2", "N3", "N4", "N5", "N6", "g1", "g3(0)", ZERO_FAMILY},
    "bN2": {"bN2", "bN1", "rN1", "rN2", "N1", "N4", "N6", "g1", ZERO_FAMILY},
}


def node_name(family_id: str, param=None) -> str:
    """A family node unless ``param`` is a concrete value."""
    if isinstance(param, RationalFunction) and param.is_constant():
        param = param.constant_value()
    if isinstance(param, Scalar):
        return str(CatalogLabel(family_id, param))
    return family_id


def _source_node(w: DegenerationWitness) -> str:
    return node_name(w.source, None if w.index is not None else w.source_param)


def _target_node(w: DegenerationWitness) -> str:
    return node_name(w.target, w.target_param)


def _cert_nodes(cert: NonDegenerationCertificate) -> tuple:
    return node_name(cert.source, cert.source_param), node_name(cert.target, cert.target_param)


@dataclass
class DegenerationGraph:
    """Verified edges and certified non-edges over the catalog.

    ``graph`` has one vertex per catalog family plus one per family member
    that a witness mentions; a family points to each of its member vertices.
    """

    graph: nx.DiGraph
    non_edges: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @classmethod
    def from_nodes(cls, nodes) -> "DegenerationGraph":
        g = nx.DiGraph()
        for n in nodes:
            _add_node(g, n)
        return cls(g)

    def closure(self, node: str) -> set:
        return nx.descendants(self.graph, node) | {node}

    def reported_closure(self, node: str) -> set:
        """The closure with members folded into their family when it is present."""
        reach = self.closure(node)
        return {n for n in reach
                if not (self.graph.nodes[n]["member"] and self.graph.nodes[n]["family"] in reach)}

    def nodes(self, members: bool = False) -> list:
        return [n for n, data in self.graph.nodes(data=True) if members or not data["member"]]


def _add_node(g: nx.DiGraph, name: str):
    if name in g:
        return
    if "(" in name:
        fam = name.split("(", 1)[0]
        g.add_node(name, family=fam, member=True, parametric=False,
                   nil_index=family(fam).nil_index)
        _add_node(g, fam)
        g.add_edge(fam, name, kind="member")
    else:
        fam = family(name)
        g.add_node(name, family=name, member=False, parametric=fam.parametric,
                   nil_index=fam.nil_index)


def node_algebra(name: str):
    if "(" in name:
        return instantiate(name)
    return symbolic(name)


def _verify_all(items, check, n_jobs: int, desc: str) -> list:
    n_jobs = n_jobs or config.N_JOBS
    if n_jobs == 1:
        return [check(item) for item in tqdm(items, desc=desc, disable=None)]
    return Parallel(n_jobs=n_jobs)(delayed(check)(item) for item in tqdm(items, desc=desc, disable=None))


def build_graph(witnesses, certificates=(), n_jobs: int = None, budget: int = None,
                with_scaling: bool = True) -> DegenerationGraph:
    """Verify every stored item and assemble the graph.

    Items that fail verification are kept out of the graph and listed in
    ``failures``. The E_i = t e_i witness is added for every family.
    """
    witnesses = list(witnesses)
    if with_scaling:
        witnesses += [scaling_witness(fid) for fid in FAMILIES if fid != ZERO_FAMILY]
    g = nx.DiGraph()
    for fid in FAMILIES:
        _add_node(g, fid)
    result = DegenerationGraph(g)

    verdicts = _verify_all(witnesses, verify_degeneration, n_jobs, "witnesses")
    for w, verdict in zip(witnesses, verdicts):
        src, dst = _source_node(w), _target_node(w)
        if not verdict:
            logger.error(f"witness {w.describe()} failed: {verdict}")
            result.failures.append({"item": "witness", "edge": [src, dst], "reason": str(verdict)})
            continue
        _add_node(g, src)
        _add_node(g, dst)
        if src != dst:
            g.add_edge(src, dst, kind="witness", provenance=w.provenance,
                       semantics=_semantics(w))

    certificates = list(certificates)
    checks = _verify_all(certificates, lambda c: verify_certificate(c, budget), n_jobs,
                         "certificates")
    for cert, check in zip(certificates, checks):
        src, dst = _cert_nodes(cert)
        entry = {"source": src, "target": dst, "kind": cert.kind.value,
                 "nonzero_alpha": cert.nonzero_alpha, "valid": check.valid,
                 "details": check.details, "provenance": cert.provenance}
        if not check:
            logger.error(f"certificate {cert.describe()} failed: {'; '.join(check.details)}")
            result.failures.append({"item": "certificate", "edge": [src, dst],
                                    "reason": "; ".join(check.details)})
        result.non_edges.append(entry)
    logger.info(f"graph has {g.number_of_nodes()} vertices and {g.number_of_edges()} edges, "
                f"{len(result.failures)} failures")
    return result


def _semantics(w: DegenerationWitness) -> str:
    if w.index is not None:
        return f"family source along alpha = {w.index}"
    src_family = family(w.source).parametric and w.source_param is None
    dst_family = family(w.target).parametric and "(" not in _target_node(w)
    if src_family and dst_family:
        return "matching parameter" if w.target_param is None else f"target parameter {w.target_param}"
    if src_family:
        return "every member"
    if dst_family:
        return "every target member"
    return "fixed algebras"


def rigid_nodes(G: DegenerationGraph) -> set:
    """Single algebras with no incoming proper degeneration."""
    return {n for n in G.nodes()
            if not G.graph.nodes[n]["parametric"] and G.graph.in_degree(n) == 0}


def component_roots(G: DegenerationGraph) -> set:
    return {n for n in G.nodes() if G.graph.in_degree(n) == 0}


def restrict(G: DegenerationGraph, max_nil_index: int) -> DegenerationGraph:
    keep = [n for n, data in G.graph.nodes(data=True) if data["nil_index"] <= max_nil_index]
    non_edges = [e for e in G.non_edges if e["source"] in keep and e["target"] in keep]
    return DegenerationGraph(G.graph.subgraph(keep).copy(), non_edges, list(G.failures))


def component_dimensions(G: DegenerationGraph, nodes=None) -> dict:
    """9 - dim Der for an orbit closure, one more for a one-parameter family."""
    dims = {}
    for n in nodes or G.nodes():
        extra = 1 if G.graph.nodes[n]["parametric"] else 0
        dims[n] = AMBIENT_DIMENSION - derivation_dim(node_algebra(n)) + extra
    return dims


def coverage(G: DegenerationGraph) -> list:
    """Ordered pairs with neither a degeneration nor an obstruction."""
    profiles = {n: profile(node_algebra(n)) for n in G.nodes()}
    certified = {(e["source"], e["target"]) for e in G.non_edges if e["valid"]}
    uncovered = []
    for u, v in permutations(G.nodes(), 2):
        if v in G.closure(u) or (u, v) in certified:
            continue
        blocked = battery_from_profiles(profiles[u], profiles[v],
                                        family=G.graph.nodes[u]["parametric"])
        if not blocked:
            uncovered.append((u, v))
    return uncovered


def conflicts(G: DegenerationGraph) -> list:
    """Pairs that are both reachable and certified non-degenerations."""
    return [(e["source"], e["target"]) for e in G.non_edges
            if e["valid"] and e["target"] in G.closure(e["source"])]


def battery_violations(G: DegenerationGraph) -> list:
    """Witnessed edges that the semicontinuity battery claims impossible."""
    profiles = {}
    out = []
    for u, v, data in G.graph.edges(data=True):
        if data.get("kind") != "witness":
            continue
        for n in (u, v):
            if n not in profiles:
                profiles[n] = profile(node_algebra(n))
        battery = battery_from_profiles(profiles[u], profiles[v],
                                        family=G.graph.nodes[u]["parametric"])
        if battery:
            out.append((u, v, battery.reasons))
    return out


def report(G: DegenerationGraph, with_coverage: bool = True) -> dict:
    closures = {root: sorted(G.reported_closure(root)) for root in sorted(component_roots(G))}
    matches = {root: set(closures.get(root, ())) == expected
               for root, expected in EXPECTED_CLOSURES.items()}
    roots = sorted(component_roots(G))
    dims = component_dimensions(G, roots)
    out = {
        "nodes": sorted(G.nodes(members=True)),
        "edges": [
            {"source": u, "target": v, "provenance": d.get("provenance"),
             "semantics": d.get("semantics")}
            for u, v, d in sorted(G.graph.edges(data=True)) if d.get("kind") == "witness"
        ],
        "non_edges": G.non_edges,
        "closures": closures,
        "expected_closures_match": matches,
        "rigid": sorted(rigid_nodes(G)),
        "roots": roots,
        "dimensions": dims,
        "dimension": max(dims.values()) if dims else 0,
        "conflicts": [list(p) for p in conflicts(G)],
        "failures": G.failures,
        "restricted": {
            str(k): {"roots": sorted(component_roots(restrict(G, k))),
                     "rigid": sorted(rigid_nodes(restrict(G, k)))}
            for k in (3, 4)
        },
    }
    if with_coverage:
        out["uncovered"] = [list(p) for p in coverage(G)]
    return out


def build_and_verify(graph_dir=None, n_jobs: int = None, budget: int = None) -> tuple:
    """Load a graph directory, verify everything in it and report.

    Returns the graph and the report dict; files that fail to load count as
    failures.
    """
    store = load_graph_dir(graph_dir or config.GRAPH_DIR)
    G = build_graph(store.witnesses, store.certificates, n_jobs=n_jobs, budget=budget)
    G.failures.extend({"item": "file", **e} for e in store.errors)
    out = report(G)
    for root, ok in out["expected_closures_match"].items():
        if not ok:
            logger.warning(f"closure of {root} differs from {sorted(EXPECTED_CLOSURES[root])}")
    if out.get("uncovered"):
        logger.warning(f"{len(out['uncovered'])} pairs have neither a witness nor an obstruction")
    return G, out
