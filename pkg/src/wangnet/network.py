"""Electrical networks, their node/mesh systems, trees and joint impedance.

Every edge carries two interned symbols: its impedance symbol (the edge id,
used in mesh systems) and its admittance symbol (used in node systems).  The
admittance symbol is the upper-cased edge id when that is unambiguous
(``a`` -> ``A``), otherwise ``Y`` + edge id.

Netlists are JSON documents::

    {"nodes": ["n0", "n1", "n2"], "reference": "n0", "input": "n1",
     "edges": [{"id": "a", "from": "n1", "to": "n2",
                "element": {"kind": "R", "value": 50.0}}, ...],
     "loops": [["a", "b", "c"], ...]}

``input`` and ``loops`` are optional.  Element kinds are ``R`` (ohm),
``L`` (henry), ``C`` (farad), ``Z`` (complex ohm, a number or ``[re, im]``)
and ``SYM`` (no numeric value).  An ``L`` element may be negative when it
carries ``"allow_negative": true``.
"""
from __future__ import annotations

import cmath
import itertools
import json
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import networkx as nx
import numpy as np

from .algebra import Symbol, WangPoly, intern_symbol, wang_product
from .determinant import StructuredSymMatrix, bareiss_det, wang_det

POLE_THRESHOLD = 1e-300
ELEMENT_KINDS = ("R", "L", "C", "Z", "SYM")
SOURCE_EDGE = "__source__"


class NetlistError(ValueError):
    """Invalid netlist document or network description."""

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class LoopBasisError(ValueError):
    """A loop set is dependent, not closed, or cannot be put in structured form."""


class PoleError(ZeroDivisionError):
    """The node determinant vanished at the requested frequency."""


@dataclass(frozen=True)
class Element:
    kind: str
    value: complex | float | None = None
    allow_negative: bool = False

    def __post_init__(self):
        if self.kind not in ELEMENT_KINDS:
            raise NetlistError(f"unknown element kind {self.kind!r}")
        if self.kind == "SYM":
            if self.value is not None:
                raise NetlistError("SYM elements carry no value")
            return
        if self.value is None:
            raise NetlistError(f"{self.kind} element needs a value")
        if self.kind == "Z":
            if not cmath.isfinite(complex(self.value)) or self.value == 0:
                raise NetlistError("Z value must be finite and non-zero")
            return
        v = self.value
        if isinstance(v, complex) or not math.isfinite(v):
            raise NetlistError(f"{self.kind} value must be a finite real number")
        if self.allow_negative and self.kind != "L":
            raise NetlistError("only inductors may be flagged allow_negative")
        if v == 0 or (v < 0 and not self.allow_negative):
            raise NetlistError(f"{self.kind} value must be positive, got {v!r}")

    def admittance(self, s):
        """Admittance at complex frequency ``s`` (scalar or array)."""
        s = np.asarray(s, dtype=complex)
        if self.kind == "R":
            return np.full_like(s, 1.0 / self.value)
        if self.kind == "L":
            return 1.0 / (s * self.value)
        if self.kind == "C":
            return s * self.value
        if self.kind == "Z":
            return np.full_like(s, 1.0 / complex(self.value))
        raise ValueError("SYM elements have no numeric admittance")

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.value is not None:
            if isinstance(self.value, complex):
                d["value"] = [self.value.real, self.value.imag]
            else:
                d["value"] = self.value
        if self.allow_negative:
            d["allow_negative"] = True
        return d


@dataclass(frozen=True)
class Edge:
    id: str
    u: str
    v: str
    element: Element
    symbol: Symbol
    admittance_symbol: Symbol


def _admittance_names(ids: Sequence[str]) -> dict[str, str]:
    taken = set(ids)
    out = {}
    for eid in ids:
        up = eid.upper()
        if up != eid and up not in taken and up not in out.values():
            out[eid] = up
        else:
            out[eid] = "Y" + eid
    return out


def _orient(edges: Mapping[str, Edge], ids: Sequence[str], start: str, end: str | None,
            where: str) -> dict[str, int]:
    """Walk ``ids`` from ``start``; return net traversal direction per edge.

    ``end`` is None for a closed walk (must return to ``start``).
    """
    node = start
    net: dict[str, int] = {}
    for eid in ids:
        if eid not in edges:
            raise LoopBasisError(f"{where}: unknown edge {eid!r}")
        e = edges[eid]
        if node == e.u:
            net[eid] = net.get(eid, 0) + 1
            node = e.v
        elif node == e.v:
            net[eid] = net.get(eid, 0) - 1
            node = e.u
        else:
            raise LoopBasisError(f"{where}: edge {eid!r} does not continue the walk at {node!r}")
    target = start if end is None else end
    if node != target:
        raise LoopBasisError(f"{where}: walk ends at {node!r}, expected {target!r}")
    if any(abs(d) > 1 for d in net.values()):
        raise LoopBasisError(f"{where}: edge traversed twice in the same direction")
    return {k: d for k, d in net.items() if d}


def _closed_walk(edges: Mapping[str, Edge], ids: Sequence[str], where: str) -> dict[str, int]:
    if not ids:
        raise LoopBasisError(f"{where}: empty loop")
    first = edges.get(ids[0])
    if first is None:
        raise LoopBasisError(f"{where}: unknown edge {ids[0]!r}")
    errors = []
    for start in (first.u, first.v):
        try:
            return _orient(edges, ids, start, None, where)
        except LoopBasisError as exc:
            errors.append(exc)
    raise errors[0]


def _gf2_rank(vectors: Iterable[int]) -> int:
    basis: list[int] = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    return len(basis)


def _structure(loops: Sequence[dict[str, int]]) -> list[dict[str, int]]:
    """Flip loop orientations so every shared edge is traversed oppositely.

    Raises LoopBasisError when an edge lies in three or more loops or no
    consistent orientation exists.
    """
    owners: dict[str, list[int]] = {}
    for k, loop in enumerate(loops):
        for eid in loop:
            owners.setdefault(eid, []).append(k)
    adj: dict[int, list[tuple[int, int]]] = {k: [] for k in range(len(loops))}
    for eid, ks in owners.items():
        if len(ks) > 2:
            raise LoopBasisError(f"edge {eid!r} lies in {len(ks)} loops")
        if len(ks) == 2:
            i, j = ks
            same = loops[i][eid] == loops[j][eid]
            adj[i].append((j, int(same)))
            adj[j].append((i, int(same)))
    flip: dict[int, int] = {}
    for root in range(len(loops)):
        if root in flip:
            continue
        flip[root] = 0
        queue = deque([root])
        while queue:
            i = queue.popleft()
            for j, need in adj[i]:
                want = flip[i] ^ need
                if j not in flip:
                    flip[j] = want
                    queue.append(j)
                elif flip[j] != want:
                    raise LoopBasisError("no loop orientation gives opposite currents on all shared edges")
    return [{e: (-d if flip[k] else d) for e, d in loop.items()} for k, loop in enumerate(loops)]


@dataclass(frozen=True, eq=False)
class Network:
    """Validated, immutable network.

    Use :meth:`create` to build one programmatically.
    """

    nodes: tuple[str, ...]
    edges: tuple[Edge, ...]
    reference: str
    input: str | None = None
    loops: tuple[tuple[str, ...], ...] | None = None

    @classmethod
    def create(cls, nodes: Sequence[str], edges: Sequence[tuple[str, str, str, Element]],
               reference: str, input: str | None = None,
               loops: Sequence[Sequence[str]] | None = None) -> "Network":
        nodes = tuple(nodes)
        if len(set(nodes)) != len(nodes):
            raise NetlistError("duplicate node ids", "nodes")
        ids = [e[0] for e in edges]
        seen: set[str] = set()
        for k, eid in enumerate(ids):
            if not isinstance(eid, str) or not eid:
                raise NetlistError("edge id must be a non-empty string", f"edges[{k}].id")
            if eid in seen:
                raise NetlistError(f"duplicate edge id {eid!r}", f"edges[{k}].id")
            seen.add(eid)
        if SOURCE_EDGE in seen:
            raise NetlistError(f"edge id {SOURCE_EDGE!r} is reserved")
        yname = _admittance_names(ids)
        if set(yname.values()) & seen:
            # an admittance name would shadow an impedance name
            yname = {eid: "Y" + eid for eid in ids}
        node_set = set(nodes)
        built = []
        for k, (eid, u, v, el) in enumerate(edges):
            for key, n in (("from", u), ("to", v)):
                if n not in node_set:
                    raise NetlistError(f"undeclared node {n!r}", f"edges[{k}].{key}")
            if u == v:
                raise NetlistError("self-loop edges are not allowed", f"edges[{k}]")
            built.append(Edge(eid, u, v, el, intern_symbol(eid), intern_symbol(yname[eid])))
        if reference not in node_set:
            raise NetlistError(f"reference node {reference!r} not declared", "reference")
        if input is not None:
            if input not in node_set:
                raise NetlistError(f"input node {input!r} not declared", "input")
            if input == reference:
                raise NetlistError("input node must differ from the reference", "input")
        net = cls(nodes, tuple(built), reference, input,
                  None if loops is None else tuple(tuple(l) for l in loops))
        net._validate()
        return net

    def _validate(self) -> None:
        g = nx.MultiGraph()
        g.add_nodes_from(self.nodes)
        g.add_edges_from((e.u, e.v) for e in self.edges)
        if not nx.is_connected(g):
            raise NetlistError("network is not connected")
        if self.loops is not None:
            rank = len(self.edges) - len(self.nodes) + 1
            vecs = []
            for k, ids in enumerate(self.loops):
                try:
                    loop = _closed_walk(self.edge_map, ids, f"loops[{k}]")
                except LoopBasisError as exc:
                    raise NetlistError(str(exc), f"loops[{k}]") from None
                if not loop:
                    raise NetlistError("loop has no net edges", f"loops[{k}]")
                vecs.append(sum(1 << self.edge_index[e] for e in loop))
            if len(vecs) != rank or _gf2_rank(vecs) != rank:
                raise NetlistError(
                    f"loop set must be {rank} independent loops (E - N + 1)", "loops")

    # lookups ------------------------------------------------------------
    @cached_property
    def edge_map(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def edge_index(self) -> dict[str, int]:
        return {e.id: k for k, e in enumerate(self.edges)}

    @cached_property
    def edge_of_symbol(self) -> dict[int, str]:
        out = {e.symbol.id: e.id for e in self.edges}
        out.update({e.admittance_symbol.id: e.id for e in self.edges})
        return out

    @cached_property
    def node_order(self) -> tuple[str, ...]:
        """Non-reference nodes, input first."""
        rest = [n for n in self.nodes if n != self.reference and n != self.input]
        return ((self.input,) if self.input else ()) + tuple(rest)

    def edge_set(self, poly_monomial: Iterable[Symbol]) -> frozenset[str]:
        return frozenset(self.edge_of_symbol[s.id] for s in poly_monomial)

    # loop systems -------------------------------------------------------
    @cached_property
    def _loop_system(self) -> tuple[dict[str, int] | None, list[dict[str, int]], bool]:
        """(source loop, internal loops, structured?) shared by all mesh queries."""
        if self.loops is not None:
            internal = [_closed_walk(self.edge_map, ids, f"loops[{k}]")
                        for k, ids in enumerate(self.loops)]
            if self.input is None:
                try:
                    return None, _structure(internal), True
                except LoopBasisError:
                    return None, internal, False
            first = None
            for path in self._simple_paths(self.input, self.reference):
                src = _orient(self.edge_map, path, self.input, self.reference, "source loop")
                first = first or src
                try:
                    loops = _structure([src] + internal)
                    return loops[0], loops[1:], True
                except LoopBasisError:
                    continue
            return first, internal, False
        src, internal = self._fundamental_cycles()
        try:
            loops = _structure(([src] if src else []) + internal)
            return (loops[0], loops[1:], True) if src else (None, loops, True)
        except LoopBasisError:
            pass
        faces = self._planar_faces()
        if faces is not None:
            return faces[0], faces[1], True
        return src, internal, False

    def _simple_paths(self, a: str, b: str, limit: int = 20000):
        adj: dict[str, list[tuple[str, str]]] = {n: [] for n in self.nodes}
        for e in self.edges:
            adj[e.u].append((e.id, e.v))
            adj[e.v].append((e.id, e.u))
        found: list[list[str]] = []

        def walk(node, visited, path):
            if len(found) >= limit:
                return
            if node == b:
                found.append(list(path))
                return
            for eid, nxt in adj[node]:
                if nxt not in visited:
                    visited.add(nxt)
                    path.append(eid)
                    walk(nxt, visited, path)
                    path.pop()
                    visited.discard(nxt)

        walk(a, {a}, [])
        found.sort(key=len)
        return found

    def _fundamental_cycles(self):
        adj: dict[str, list[Edge]] = {n: [] for n in self.nodes}
        for e in self.edges:
            adj[e.u].append(e)
            adj[e.v].append(e)
        parent: dict[str, tuple[str, str] | None] = {self.reference: None}
        queue = deque([self.reference])
        tree: set[str] = set()
        while queue:
            n = queue.popleft()
            for e in adj[n]:
                m = e.v if e.u == n else e.u
                if m not in parent:
                    parent[m] = (e.id, n)
                    tree.add(e.id)
                    queue.append(m)

        def to_root(n):
            path = []
            while parent[n] is not None:
                eid, up = parent[n]
                path.append((eid, n))
                n = up
            return path

        def tree_path(a, b):
            pa, pb = to_root(a), to_root(b)
            na = [n for _, n in pa] + [self.reference]
            nb = [n for _, n in pb] + [self.reference]
            common = next(n for n in na if n in set(nb))
            up = [eid for eid, n in pa[:na.index(common)]]
            down = [eid for eid, n in pb[:nb.index(common)]]
            return up + down[::-1]

        internal = []
        for e in self.edges:
            if e.id in tree:
                continue
            ids = [e.id] + tree_path(e.v, e.u)
            internal.append(_orient(self.edge_map, ids, e.u, None, f"cycle of {e.id}"))
        src = None
        if self.input is not None:
            src = _orient(self.edge_map, tree_path(self.input, self.reference),
                          self.input, self.reference, "source loop")
        return src, internal

    def _planar_faces(self):
        g = nx.Graph()
        mids = {}
        for e in self.edges:
            mid = ("mid", e.id)
            mids[mid] = e
            g.add_edge(e.u, mid)
            g.add_edge(mid, e.v)
        if self.input is not None:
            g.add_edge(self.input, ("mid", SOURCE_EDGE))
            g.add_edge(("mid", SOURCE_EDGE), self.reference)
        ok, emb = nx.check_planarity(g)
        if not ok:
            return None
        seen: set = set()
        faces = []
        for u, v in emb.edges():
            if (u, v) in seen:
                continue
            walk = emb.traverse_face(u, v, mark_half_edges=seen)
            net: dict[str, int] = {}
            for i, node in enumerate(walk):
                if isinstance(node, tuple) and node[0] == "mid":
                    a, b = walk[i - 1], walk[(i + 1) % len(walk)]
                    eid = node[1]
                    if eid == SOURCE_EDGE:
                        d = 1 if (a, b) == (self.input, self.reference) else -1
                    else:
                        e = mids[node]
                        d = 1 if (a, b) == (e.u, e.v) else -1
                    net[eid] = net.get(eid, 0) + d
            faces.append({k: d for k, d in net.items() if d})
        faces = [f for f in faces if f]
        if self.input is None:
            faces.sort(key=len)
            return None, faces[:-1]
        with_src = sorted((f for f in faces if SOURCE_EDGE in f), key=len)
        keep = with_src[0]
        src = {k: d for k, d in keep.items() if k != SOURCE_EDGE}
        internal = [f for f in faces if SOURCE_EDGE not in f]
        return src, internal

    def loop_basis(self, include_source: bool = False) -> list[dict[str, int]]:
        """Oriented loops as ``{edge id: +1/-1}``; the source loop comes first.

        The source loop is the path from the input node to the reference,
        closed through the (zero-impedance) driving source.
        """
        src, internal, _ = self._loop_system
        if include_source:
            if self.input is None:
                raise LoopBasisError("network has no input node")
            return [src] + internal
        return list(internal)

    @cached_property
    def has_structured_loops(self) -> bool:
        return self._loop_system[2]

    def to_dict(self) -> dict:
        d: dict = {"nodes": list(self.nodes), "reference": self.reference}
        if self.input is not None:
            d["input"] = self.input
        d["edges"] = [{"id": e.id, "from": e.u, "to": e.v, "element": e.element.to_dict()}
                      for e in self.edges]
        if self.loops is not None:
            d["loops"] = [list(l) for l in self.loops]
        return d


# ---------------------------------------------------------------------------
# netlist documents
# ---------------------------------------------------------------------------

_TOP_FIELDS = {"nodes", "reference", "input", "edges", "loops"}
_EDGE_FIELDS = {"id", "from", "to", "element"}
_ELEMENT_FIELDS = {"kind", "value", "allow_negative"}


def _parse_element(d, where: str) -> Element:
    if not isinstance(d, dict):
        raise NetlistError("element must be an object", where)
    extra = set(d) - _ELEMENT_FIELDS
    if extra:
        raise NetlistError(f"unknown field(s) {sorted(extra)}", where)
    kind = d.get("kind")
    if kind not in ELEMENT_KINDS:
        raise NetlistError(f"unknown element kind {kind!r}", f"{where}.kind")
    value = d.get("value")
    if isinstance(value, list):
        if kind != "Z" or len(value) != 2:
            raise NetlistError("only Z values may be [re, im] pairs", f"{where}.value")
        value = complex(value[0], value[1])
    elif value is not None and (isinstance(value, bool) or not isinstance(value, (int, float))):
        raise NetlistError("value must be a number", f"{where}.value")
    elif isinstance(value, int):
        value = float(value)
    neg = d.get("allow_negative", False)
    if not isinstance(neg, bool):
        raise NetlistError("allow_negative must be a boolean", f"{where}.allow_negative")
    try:
        return Element(kind, value, neg)
    except NetlistError as exc:
        raise NetlistError(str(exc), where) from None


def network_from_dict(doc) -> Network:
    if not isinstance(doc, dict):
        raise NetlistError("netlist must be a JSON object")
    extra = set(doc) - _TOP_FIELDS
    if extra:
        raise NetlistError(f"unknown field(s) {sorted(extra)}")
    for key in ("nodes", "reference", "edges"):
        if key not in doc:
            raise NetlistError("missing field", key)
    nodes = doc["nodes"]
    if not isinstance(nodes, list) or not all(isinstance(n, str) for n in nodes):
        raise NetlistError("nodes must be a list of strings", "nodes")
    if not isinstance(doc["edges"], list):
        raise NetlistError("edges must be a list", "edges")
    edges = []
    for k, e in enumerate(doc["edges"]):
        where = f"edges[{k}]"
        if not isinstance(e, dict):
            raise NetlistError("edge must be an object", where)
        extra = set(e) - _EDGE_FIELDS
        if extra:
            raise NetlistError(f"unknown field(s) {sorted(extra)}", where)
        missing = _EDGE_FIELDS - set(e)
        if missing:
            raise NetlistError(f"missing field(s) {sorted(missing)}", where)
        edges.append((e["id"], e["from"], e["to"], _parse_element(e["element"], f"{where}.element")))
    loops = doc.get("loops")
    if loops is not None and (not isinstance(loops, list)
                              or not all(isinstance(l, list) for l in loops)):
        raise NetlistError("loops must be a list of edge-id lists", "loops")
    return Network.create(nodes, edges, doc["reference"], doc.get("input"), loops)


def parse_network(text: str) -> Network:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetlistError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return network_from_dict(doc)


def load_network(path) -> Network:
    with open(path, encoding="utf-8") as fh:
        return parse_network(fh.read())


def network_to_json(net: Network) -> str:
    return json.dumps(net.to_dict(), indent=2)


# ---------------------------------------------------------------------------
# systems and determinants
# ---------------------------------------------------------------------------

def node_matrix(net: Network) -> StructuredSymMatrix:
    """Kirchhoff current-law system in admittance symbols."""
    index = {n: k for k, n in enumerate(net.node_order)}
    off: dict[tuple[int, int], WangPoly] = {}
    diag: dict[int, WangPoly] = {}
    for e in net.edges:
        y = WangPoly.symbol(e.admittance_symbol)
        if e.u == net.reference or e.v == net.reference:
            k = index[e.v if e.u == net.reference else e.u]
            diag[k] = diag.get(k, WangPoly()) + y
        else:
            key = tuple(sorted((index[e.u], index[e.v])))
            off[key] = off.get(key, WangPoly()) + y
    return StructuredSymMatrix(len(index), off, diag, net.node_order)


def mesh_matrix(net: Network, include_source: bool = True) -> StructuredSymMatrix:
    """Kirchhoff voltage-law system in impedance symbols.

    With ``include_source`` (and an input node) the first row is the loop
    through the driving source.
    """
    if not net.has_structured_loops:
        raise LoopBasisError("loop basis cannot be put in structured symmetric form")
    loops = net.loop_basis(include_source=include_source and net.input is not None)
    owners: dict[str, list[int]] = {}
    for k, loop in enumerate(loops):
        for eid in loop:
            owners.setdefault(eid, []).append(k)
    off: dict[tuple[int, int], WangPoly] = {}
    diag: dict[int, WangPoly] = {}
    for eid, ks in owners.items():
        z = WangPoly.symbol(net.edge_map[eid].symbol)
        if len(ks) == 1:
            diag[ks[0]] = diag.get(ks[0], WangPoly()) + z
        else:
            off[tuple(ks)] = off.get(tuple(ks), WangPoly()) + z
    return StructuredSymMatrix(len(loops), off, diag)


def mesh_forms(net: Network, include_source: bool = False) -> list[WangPoly]:
    """Loop linear forms (sum of member edge symbols); valid for any basis mod 2."""
    loops = net.loop_basis(include_source=include_source)
    return [WangPoly.linear(net.edge_map[e].symbol for e in loop) for loop in loops]


def node_determinant(net: Network) -> WangPoly:
    return wang_det(node_matrix(net))


def mesh_determinant(net: Network, include_source: bool = True) -> WangPoly:
    """Wang product of the loop forms (the full mesh system by default)."""
    return wang_product(mesh_forms(net, include_source=include_source and net.input is not None))


def _is_spanning_tree(net: Network, ids: Iterable[str]) -> bool:
    ids = list(ids)
    if len(ids) != len(net.nodes) - 1:
        return False
    parent = {n: n for n in net.nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for eid in ids:
        e = net.edge_map[eid]
        a, b = find(e.u), find(e.v)
        if a == b:
            return False
        parent[a] = b
    return True


def spanning_trees(net: Network) -> set[frozenset[str]]:
    """Edge sets of all spanning trees, read off the node determinant."""
    trees = {net.edge_set(m) for m in node_determinant(net).monomials()}
    for t in trees:
        if not _is_spanning_tree(net, t):
            raise AssertionError(f"node-determinant term {sorted(t)} is not a spanning tree")
    return trees


def cotrees(net: Network) -> set[frozenset[str]]:
    every = frozenset(e.id for e in net.edges)
    return {every - t for t in spanning_trees(net)}


def count_trees(net: Network) -> int:
    """Reduced-Laplacian determinant (all admittances set to 1)."""
    m = node_matrix(net)
    ones = {s: 1 for s in m.symbols()}
    return bareiss_det(m.instantiate(ones))


def duality_check(net: Network) -> bool:
    """Mesh-determinant terms are exactly the complements of tree terms."""
    mesh_terms = {net.edge_set(m) for m in mesh_determinant(net, include_source=False).monomials()}
    return mesh_terms == cotrees(net)


# ---------------------------------------------------------------------------
# numeric joint impedance
# ---------------------------------------------------------------------------

def _term_array(net: Network, poly: WangPoly) -> np.ndarray:
    rows = [[net.edge_index[net.edge_of_symbol[s.id]] for s in mono] for mono in poly.monomials()]
    width = len(rows[0]) if rows else 0
    if any(len(r) != width for r in rows):
        raise ValueError("determinant terms must share one degree")
    return np.array(rows, dtype=np.intp).reshape(len(rows), width)


@dataclass(frozen=True, eq=False)
class RationalImpedance:
    """Driving-point impedance ``det(S_1) / det(S)`` of a network.

    The tree polynomials are built once; calls substitute per-edge numeric
    admittances (R -> 1/R, L -> 1/(sL), C -> sC, Z -> 1/Z).
    """

    net: Network
    numerator: WangPoly = field(init=False)
    denominator: WangPoly = field(init=False)

    def __post_init__(self):
        if self.net.input is None:
            raise NetlistError("network has no input node", "input")
        s_mat = node_matrix(self.net)
        object.__setattr__(self, "denominator", wang_det(s_mat))
        object.__setattr__(self, "numerator", wang_det(s_mat.without([0])))
        object.__setattr__(self, "_num", _term_array(self.net, self.numerator))
        object.__setattr__(self, "_den", _term_array(self.net, self.denominator))

    def admittances(self, s) -> np.ndarray:
        s = np.atleast_1d(np.asarray(s, dtype=complex))
        return np.array([e.element.admittance(s) for e in self.net.edges]).reshape(len(self.net.edges), s.size)

    def parts(self, s) -> tuple[np.ndarray, np.ndarray]:
        y = self.admittances(s)
        num = np.prod(y[self._num], axis=1).sum(axis=0)
        den = np.prod(y[self._den], axis=1).sum(axis=0)
        return num, den

    def __call__(self, s, strict: bool = True):
        scalar = np.ndim(s) == 0
        num, den = self.parts(s)
        pole = np.abs(den) < POLE_THRESHOLD
        if strict and pole.any():
            raise PoleError(f"node determinant vanishes at s={np.atleast_1d(s)[pole][0]}")
        with np.errstate(divide="ignore", invalid="ignore"):
            z = np.where(pole, complex(np.nan, np.nan), num / np.where(pole, 1, den))
        return complex(z[0]) if scalar else z


def joint_impedance(net: Network, s):
    """Driving-point impedance between ``net.input`` and the reference at ``s``."""
    return net_impedance(net)(s)


def net_impedance(net: Network) -> RationalImpedance:
    cached = net.__dict__.get("_impedance")
    if cached is None:
        cached = RationalImpedance(net)
        object.__setattr__(net, "_impedance", cached)
    return cached
