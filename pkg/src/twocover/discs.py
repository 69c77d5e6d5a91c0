"""Admissible disc collection with its tree and special-fibre descriptors.

Every non-root cluster ``s`` contributes the integral discs strictly between
its parent's depth and its own, plus the defining disc ``D(s)`` when ``d_s``
is an integer.  A chain disc ``(s, d)`` with ``d < d_s`` has the same member
set as ``s``.  "Smaller" discs are deeper: ``D < D'`` means ``D`` is a subset
of ``D'`` with larger depth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .branch_data import GaloisDatum
from .clusters import Cluster, ClusterPicture, is_uebereven
from .errors import NotSemistableError
from .semistability import check_semistable


@dataclass(frozen=True)
class Disc:
    members: frozenset[str]
    depth: int
    defining: bool
    origin: Cluster = field(compare=False, hash=False)

    @property
    def id(self) -> str:
        return f"D[{self.origin.id}]@{self.depth}"

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def is_even(self) -> bool:
        return len(self.members) % 2 == 0

    def __repr__(self):
        return f"Disc({self.origin.id}, {self.depth}{', defining' if self.defining else ''})"


class DiscCollection:
    def __init__(self, pic: ClusterPicture, discs: list[Disc], parent: dict[Disc, Disc]):
        self.pic = pic
        self.discs = tuple(sorted(discs, key=lambda D: (D.depth, D.origin.id)))
        self.parent = parent
        self.root = self.discs[0]
        kids: dict[Disc, list[Disc]] = {D: [] for D in self.discs}
        for D, P in parent.items():
            kids[P].append(D)
        self._children = {D: tuple(sorted(v, key=lambda x: x.id)) for D, v in kids.items()}

    def __iter__(self):
        return iter(self.discs)

    def __len__(self):
        return len(self.discs)

    def children(self, D: Disc) -> tuple[Disc, ...]:
        return self._children[D]

    def find(self, members, depth: int) -> Disc:
        members = frozenset(members)
        for D in self.discs:
            if D.members == members and D.depth == depth:
                return D
        raise KeyError((sorted(members), depth))


@dataclass(frozen=True)
class DiscTree:
    root: Disc
    vertices: tuple[Disc, ...]
    edges: tuple[tuple[Disc, Disc], ...]   # (parent, child)


@dataclass(frozen=True)
class FiberDescriptor:
    kind: int
    component_count: int
    multiplicity: int
    self_chains: int
    exceptional: bool


def build_disc_collection(pic: ClusterPicture) -> DiscCollection:
    for s in pic.principal():
        if s.depth.denominator != 1:
            raise NotSemistableError(f"principal cluster {s.id} has non-integral depth {s.depth}")

    root = Disc(pic.root.members, 0, True, pic.root)
    discs = [root]
    parent: dict[Disc, Disc] = {}
    top_disc = {pic.root.id: root}
    # clusters come root-first, so a parent's defining disc exists before its children
    for s in pic.clusters[1:]:
        prev = top_disc[s.parent.id]
        lo = int(s.parent.depth)
        hi = math.ceil(s.depth)
        for d in range(lo + 1, hi):
            D = Disc(s.members, d, False, s)
            discs.append(D)
            parent[D] = prev
            prev = D
        if s.depth.denominator == 1:
            D = Disc(s.members, int(s.depth), True, s)
            discs.append(D)
            parent[D] = prev
            prev = D
        top_disc[s.id] = prev
    return DiscCollection(pic, discs, parent)


def disc_tree(dc: DiscCollection) -> DiscTree:
    edges = tuple((dc.parent[D], D) for D in dc.discs if D in dc.parent)
    return DiscTree(dc.root, dc.discs, edges)


def disc_invariant_v(dc: DiscCollection, D: Disc) -> int:
    pic = dc.pic
    total = Fraction(pic.source.v_phi)
    if D.depth == 0:
        return int(total)
    for r in pic.labels:
        t = pic.smallest_containing(D.members | {r})
        if t is not pic.root:
            total += min(Fraction(D.depth), t.depth)
    if total.denominator != 1:
        raise ValueError(f"v of {D.id} is not an integer: {total}")
    return int(total)


def disc_is_uebereven(dc: DiscCollection, D: Disc) -> bool:
    if D.defining:
        return is_uebereven(dc.pic, D.origin)
    return D.is_even


def classify_fiber(dc: DiscCollection, pic: ClusterPicture, D: Disc) -> FiberDescriptor:
    """Describe the preimage of the component attached to ``D``.

    Cases are tried in order (1) to (7); the first that applies sets
    ``kind``.  Inertia is not re-checked here.
    """
    verdict = check_semistable(pic, GaloisDatum.trivial(pic.labels))
    if not verdict.semistable:
        raise NotSemistableError("fibre description needs semi-stable input", verdict.violations)

    v = disc_invariant_v(dc, D)
    ueber = disc_is_uebereven(dc, D)
    half = Fraction(1, 2)
    self_chains = sum(
        1 for t in pic.twins() if t.members <= D.members and t.depth == D.depth + half)

    if D == dc.root:
        kind = 2 if ueber else 1
    elif D.defining and D.origin.is_principal:
        kind = 3 if ueber else 4
    elif D.defining:
        kind = 4
    elif D.origin.is_twin and D.members == D.origin.members and D.origin.depth == D.depth + half:
        kind = 5
    elif v % 2:
        kind = 6
    else:
        kind = 7
    return FiberDescriptor(
        kind=kind,
        component_count=2 if ueber else 1,
        multiplicity=2 if v % 2 else 1,
        self_chains=self_chains,
        exceptional=bool(v % 2),
    )


def render_disc_tree(dc: DiscCollection) -> str:
    lines = []

    def walk(D: Disc, indent: int):
        v = disc_invariant_v(dc, D)
        tag = " defining" if D.defining else ""
        lines.append(f"{'  ' * indent}{D.id} v={v}{tag}")
        for c in dc.children(D):
            walk(c, indent + 1)

    walk(dc.root, 0)
    return "\n".join(lines)
