"""Metric dual graph of the minimal regular model and its Frobenius action.

Vertices are attached to principal clusters (two of them, ``+`` and ``-``,
for an uebereven cluster).  Chains of rational curves become edges with an
integer length:

========================  =====================  ==================
child ``s'`` of ``s``     chains                 length
========================  =====================  ==================
principal, odd            ``v(s') -> v(s)``      ``delta(s') / 2``
principal, even           ``v(s')+ -> v(s)+``    ``delta(s')``
                          ``v(s')- -> v(s)-``    ``delta(s')``
twin ``t``                ``v(s)- -> v(s)+``     ``2 * delta(t)``
========================  =====================  ==================
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .branch_data import GaloisDatum
from .clusters import Cluster, ClusterPicture, apply_label_permutation, is_uebereven
from .errors import GraphError


@dataclass(frozen=True)
class Chain:
    id: str
    a: str
    b: str
    length: int
    cluster: str     # canonical id of the originating cluster
    tag: str         # "odd", "+", "-", "twin" or "extra"

    @property
    def is_loop(self) -> bool:
        return self.a == self.b


@dataclass(frozen=True)
class MetricGraph:
    vertices: tuple[str, ...]
    chains: tuple[Chain, ...]
    # (cluster id, sign) -> vertex id; both signs alias one vertex for non-uebereven clusters
    vertex_of: Mapping[tuple[str, int], str] = field(default_factory=dict)

    def chain(self, cid: str) -> Chain:
        for c in self.chains:
            if c.id == cid:
                return c
        raise KeyError(cid)

    @property
    def betti_number(self) -> int:
        return len(self.chains) - len(self.vertices) + 1

    def is_connected(self) -> bool:
        return _connected(self.vertices, [(c.a, c.b) for c in self.chains])


@dataclass(frozen=True)
class GraphAutomorphism:
    vertex_map: Mapping[str, str]
    chain_map: Mapping[str, tuple[str, int]]   # chain id -> (image id, orientation sign)

    def compose(self, other: "GraphAutomorphism") -> "GraphAutomorphism":
        """``self`` after ``other``."""
        vmap = {v: self.vertex_map[w] for v, w in other.vertex_map.items()}
        cmap = {}
        for c, (d, s) in other.chain_map.items():
            e, t = self.chain_map[d]
            cmap[c] = (e, s * t)
        return GraphAutomorphism(vmap, cmap)

    def inverse(self) -> "GraphAutomorphism":
        vmap = {w: v for v, w in self.vertex_map.items()}
        cmap = {d: (c, s) for c, (d, s) in self.chain_map.items()}
        return GraphAutomorphism(vmap, cmap)

    @classmethod
    def identity(cls, gr: MetricGraph) -> "GraphAutomorphism":
        return cls({v: v for v in gr.vertices}, {c.id: (c.id, 1) for c in gr.chains})


@dataclass(frozen=True)
class UnitGraph:
    """Multigraph with unit-length oriented edges ``(id, tail, head)``."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, str], ...]

    def is_connected(self) -> bool:
        return _connected(self.vertices, [(u, v) for _, u, v in self.edges])


@dataclass(frozen=True)
class UnitAutomorphism:
    vertex_map: Mapping[str, str]
    edge_map: Mapping[str, tuple[str, int]]

    def inverse(self) -> "UnitAutomorphism":
        return UnitAutomorphism({w: v for v, w in self.vertex_map.items()},
                                {f: (e, s) for e, (f, s) in self.edge_map.items()})

    def compose(self, other: "UnitAutomorphism") -> "UnitAutomorphism":
        """``self`` after ``other``."""
        vmap = {v: self.vertex_map[w] for v, w in other.vertex_map.items()}
        emap = {}
        for e, (f, s) in other.edge_map.items():
            g, t = self.edge_map[f]
            emap[e] = (g, s * t)
        return UnitAutomorphism(vmap, emap)

    @classmethod
    def identity(cls, ug: "UnitGraph") -> "UnitAutomorphism":
        return cls({v: v for v in ug.vertices}, {e: (e, 1) for e, _, _ in ug.edges})


def _connected(vertices, pairs) -> bool:
    if not vertices:
        return True
    adj: dict[str, list[str]] = {v: [] for v in vertices}
    for u, v in pairs:
        adj[u].append(v)
        adj[v].append(u)
    seen = {vertices[0]}
    todo = deque([vertices[0]])
    while todo:
        u = todo.popleft()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return len(seen) == len(vertices)


def _integral(x: Fraction, what: str) -> int:
    if x.denominator != 1 or x <= 0:
        raise GraphError(f"{what} has non-integral or non-positive length {x}")
    return int(x)


def build_dual_graph(pic: ClusterPicture) -> MetricGraph:
    principal = pic.principal()
    if not principal:
        v = f"v[{pic.root.id}]"
        return MetricGraph((v,), (), {(pic.root.id, 1): v, (pic.root.id, -1): v})

    vertex_of: dict[tuple[str, int], str] = {}
    vertices: list[str] = []
    for s in principal:
        if is_uebereven(pic, s):
            for sign, suffix in ((1, "+"), (-1, "-")):
                vertex_of[(s.id, sign)] = f"v[{s.id}]{suffix}"
                vertices.append(vertex_of[(s.id, sign)])
        else:
            vid = f"v[{s.id}]"
            vertex_of[(s.id, 1)] = vertex_of[(s.id, -1)] = vid
            vertices.append(vid)

    chains: list[Chain] = []
    for s in pic.clusters:
        if s.parent is None:
            continue
        par = s.parent
        if not par.is_principal:
            raise GraphError(f"cluster {s.id} has a non-principal parent {par.id}")
        if s.is_principal and not s.is_even:
            n = _integral(s.delta / 2, f"chain L[{s.id}]")
            chains.append(Chain(f"L[{s.id}]", vertex_of[(s.id, 1)], vertex_of[(par.id, 1)],
                                n, s.id, "odd"))
        elif s.is_principal:
            n = _integral(s.delta, f"chain L[{s.id}]")
            for sign, suffix in ((1, "+"), (-1, "-")):
                chains.append(Chain(f"L[{s.id}]{suffix}", vertex_of[(s.id, sign)],
                                    vertex_of[(par.id, sign)], n, s.id, suffix))
        else:
            n = _integral(2 * s.delta, f"twin chain L[{s.id}]")
            chains.append(Chain(f"L[{s.id}]", vertex_of[(par.id, -1)], vertex_of[(par.id, 1)],
                                n, s.id, "twin"))
    gr = MetricGraph(tuple(sorted(vertices)), tuple(sorted(chains, key=lambda c: c.id)), vertex_of)
    if not gr.is_connected():
        raise GraphError("dual graph is not connected")
    return gr


def _eps_table(pic: ClusterPicture, g: GaloisDatum) -> dict[str, int]:
    even = {s.id for s in pic.even()}
    if g.eps is None:
        return {cid: 1 for cid in even}
    given = set(g.eps)
    missing = sorted(even - given)
    if missing:
        raise GraphError(f"eps missing for even cluster(s): {'; '.join(missing)}")
    extra = sorted(given - even)
    if extra:
        raise GraphError(f"eps given for non-even or unknown cluster(s): {'; '.join(extra)}")
    return dict(g.eps)


def check_automorphism(gr: MetricGraph, aut: GraphAutomorphism) -> None:
    """Raise :class:`GraphError` unless ``aut`` is a length- and incidence-preserving bijection."""
    if set(aut.vertex_map) != set(gr.vertices) or set(aut.vertex_map.values()) != set(gr.vertices):
        raise GraphError("vertex map is not a bijection")
    ids = {c.id for c in gr.chains}
    if set(aut.chain_map) != ids or {d for d, _ in aut.chain_map.values()} != ids:
        raise GraphError("chain map is not a bijection")
    by_id = {c.id: c for c in gr.chains}
    for c in gr.chains:
        d_id, sign = aut.chain_map[c.id]
        d = by_id[d_id]
        if d.length != c.length:
            raise GraphError(f"chain {c.id} (length {c.length}) sent to {d.id} (length {d.length})")
        ends = (aut.vertex_map[c.a], aut.vertex_map[c.b])
        want = (d.a, d.b) if sign > 0 else (d.b, d.a)
        if ends != want:
            raise GraphError(
                f"endpoint mismatch: {c.id} maps to {'' if sign > 0 else '-'}{d.id} but its ends "
                f"go to {ends}, expected {want} (inconsistent eps?)")


def frobenius_automorphism(gr: MetricGraph, pic: ClusterPicture, g: GaloisDatum) -> GraphAutomorphism:
    """Action of Frobenius on the dual graph.

    Vertices ``v(s)^{+-}`` go to ``v(frob s)^{+-eps_s}``, even chains swap
    sign with ``eps`` of the child cluster, and a twin chain is reversed when
    ``eps_t = -1``.  ``eps`` is +1 on every non-even cluster.
    """
    cmap = apply_label_permutation(pic, g.frobenius)
    eps = _eps_table(pic, g)

    def e(s: Cluster) -> int:
        return eps.get(s.id, 1)

    vmap: dict[str, str] = {}
    if not pic.principal():
        vmap = {v: v for v in gr.vertices}
    for s in pic.principal():
        t = cmap[s]
        for sign in (1, -1):
            vmap[gr.vertex_of[(s.id, sign)]] = gr.vertex_of[(t.id, sign * e(s))]

    chain_map: dict[str, tuple[str, int]] = {}
    for c in gr.chains:
        if c.tag == "extra":
            continue
        s = pic[c.cluster]
        t = cmap[s]
        if c.tag == "odd":
            chain_map[c.id] = (f"L[{t.id}]", 1)
        elif c.tag in "+-":
            sign = (1 if c.tag == "+" else -1) * e(s)
            chain_map[c.id] = (f"L[{t.id}]{'+' if sign > 0 else '-'}", 1)
        else:
            chain_map[c.id] = (f"L[{t.id}]", e(s))
    aut = GraphAutomorphism(vmap, chain_map)
    if any(c.tag == "extra" for c in gr.chains):
        raise GraphError("graph carries extra chains; use add_self_chain to extend the action")
    check_automorphism(gr, aut)
    return aut


def add_self_chain(gr: MetricGraph, aut: GraphAutomorphism, vertex: str
                   ) -> tuple[MetricGraph, GraphAutomorphism]:
    """Attach a length-1 loop at every vertex in the orbit of ``vertex``.

    The loops are permuted along the orbit so the action stays an automorphism.
    """
    orbit = [vertex]
    while aut.vertex_map[orbit[-1]] != vertex:
        orbit.append(aut.vertex_map[orbit[-1]])
    n = sum(1 for c in gr.chains if c.tag == "extra")
    new = {u: Chain(f"X{n}[{u}]", u, u, 1, "", "extra") for u in orbit}
    chains = tuple(sorted(gr.chains + tuple(new.values()), key=lambda c: c.id))
    cmap = dict(aut.chain_map)
    for u, c in new.items():
        cmap[c.id] = (new[aut.vertex_map[u]].id, 1)
    gr2 = MetricGraph(gr.vertices, chains, gr.vertex_of)
    aut2 = GraphAutomorphism(dict(aut.vertex_map), cmap)
    check_automorphism(gr2, aut2)
    return gr2, aut2


def _unit_nodes(c: Chain) -> list[str]:
    return [c.a] + [f"{c.id}#{k}" for k in range(1, c.length)] + [c.b]


def subdivide(gr: MetricGraph) -> UnitGraph:
    """Replace each chain of length ``n`` by ``n`` unit edges through ``n-1`` new vertices."""
    vertices = list(gr.vertices)
    edges = []
    for c in gr.chains:
        nodes = _unit_nodes(c)
        vertices.extend(nodes[1:-1])
        for k in range(c.length):
            edges.append((f"{c.id}:{k}", nodes[k], nodes[k + 1]))
    return UnitGraph(tuple(vertices), tuple(edges))


def lift_automorphism(gr: MetricGraph, aut: GraphAutomorphism) -> UnitAutomorphism:
    """Lift to the subdivision; a reversed chain sends node ``k`` to node ``n - k``."""
    vmap = dict(aut.vertex_map)
    emap: dict[str, tuple[str, int]] = {}
    by_id = {c.id: c for c in gr.chains}
    for c in gr.chains:
        d_id, sign = aut.chain_map[c.id]
        d = by_id[d_id]
        n = c.length
        src, dst = _unit_nodes(c), _unit_nodes(d)
        for k in range(1, n):
            vmap[src[k]] = dst[k] if sign > 0 else dst[n - k]
        for k in range(n):
            emap[f"{c.id}:{k}"] = (f"{d.id}:{k}", 1) if sign > 0 else (f"{d.id}:{n - 1 - k}", -1)
    return UnitAutomorphism(vmap, emap)


def chain_table(gr: MetricGraph) -> str:
    rows = [f"{'chain':<28} {'from':<24} {'to':<24} length"]
    for c in gr.chains:
        rows.append(f"{c.id:<28} {c.a:<24} {c.b:<24} {c.length}")
    return "\n".join(rows)


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(gr: MetricGraph) -> str:
    """Deterministic Graphviz document: vertices then chains, sorted by id."""
    lines = ["graph dual_graph {"]
    for v in sorted(gr.vertices):
        if v.endswith("+"):
            attrs = 'shape=box, style=filled, fillcolor="#dddddd"'
        elif v.endswith("-"):
            attrs = "shape=box"
        else:
            attrs = "shape=circle"
        lines.append(f"  {_dot_quote(v)} [{attrs}];")
    for c in sorted(gr.chains, key=lambda c: c.id):
        lines.append(f"  {_dot_quote(c.a)} -- {_dot_quote(c.b)} "
                     f"[label={_dot_quote(str(c.length))}, id={_dot_quote(c.id)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def reorient(ug: UnitGraph, aut: UnitAutomorphism | None, flipped
             ) -> tuple[UnitGraph, UnitAutomorphism | None]:
    """Reverse the edges whose ids are in ``flipped`` and fix up the action's signs."""
    flipped = set(flipped)
    edges = tuple((e, v, u) if e in flipped else (e, u, v) for e, u, v in ug.edges)
    if aut is None:
        return UnitGraph(ug.vertices, edges), None
    sign = {e: (-1 if e in flipped else 1) for e, _, _ in ug.edges}
    emap = {e: (f, s * sign[e] * sign[f]) for e, (f, s) in aut.edge_map.items()}
    return UnitGraph(ug.vertices, edges), UnitAutomorphism(dict(aut.vertex_map), emap)
