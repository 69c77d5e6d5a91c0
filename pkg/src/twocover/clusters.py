"""Cluster pictures: nested threshold balls of the branch locus.

A cluster is a set ``{r' : depth(r, r') >= c}`` with at least two members.
Its depth is the minimum pairwise depth inside it, except for the top
cluster ``s0`` (all labels), whose depth is always 0.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterator, Mapping

from .branch_data import (
    BranchDatum,
    cluster_id,
    format_rational,
    parse_rational,
    validate_branch_datum,
)
from .errors import NotAnAutomorphism, ParseError, ValidationError


@dataclass(frozen=True, eq=False)
class Cluster:
    members: frozenset[str]
    depth: Fraction
    parent: "Cluster | None" = field(default=None, repr=False)
    v: Fraction = Fraction(0)
    delta: Fraction | None = None

    @property
    def id(self) -> str:
        return cluster_id(self.members)

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def is_root(self) -> bool:
        return self.parent is None

    @property
    def is_principal(self) -> bool:
        return len(self.members) >= 3

    @property
    def is_twin(self) -> bool:
        return len(self.members) == 2

    @property
    def is_even(self) -> bool:
        return len(self.members) % 2 == 0

    def __eq__(self, other):
        if not isinstance(other, Cluster):
            return NotImplemented
        return self.members == other.members

    def __hash__(self):
        return hash(self.members)

    def __lt__(self, other):
        return self.id < other.id

    def __repr__(self):
        return f"Cluster({self.id}, d={self.depth})"


@dataclass(frozen=True)
class ClassificationFlags:
    principal: bool
    twin: bool
    even: bool
    uebereven: bool
    maximal: bool


class ClusterPicture:
    """Rooted tree of clusters built from a :class:`BranchDatum`."""

    def __init__(self, source: BranchDatum, clusters: list[Cluster], root: Cluster,
                 children: Mapping[str, tuple[Cluster, ...]]):
        self.source = source
        self.root = root
        self._clusters = tuple(sorted(clusters, key=lambda s: (-s.size, s.id)))
        self._by_id = {s.id: s for s in self._clusters}
        self._children = dict(children)

    @property
    def clusters(self) -> tuple[Cluster, ...]:
        """All clusters, root first, then by decreasing size."""
        return self._clusters

    @property
    def labels(self) -> tuple[str, ...]:
        return self.source.labels

    def __iter__(self) -> Iterator[Cluster]:
        return iter(self._clusters)

    def __len__(self):
        return len(self._clusters)

    def __getitem__(self, key) -> Cluster:
        if isinstance(key, Cluster):
            key = key.id
        elif not isinstance(key, str):
            key = cluster_id(key)
        return self._by_id[key]

    def __contains__(self, s) -> bool:
        return isinstance(s, Cluster) and s.id in self._by_id

    def children(self, s: Cluster) -> tuple[Cluster, ...]:
        return self._children[s.id]

    def singleton_children(self, s: Cluster) -> tuple[str, ...]:
        covered = set().union(*(c.members for c in self.children(s))) if self.children(s) else set()
        return tuple(sorted(s.members - covered))

    def principal(self) -> list[Cluster]:
        return [s for s in self._clusters if s.is_principal]

    def twins(self) -> list[Cluster]:
        return [s for s in self._clusters if s.is_twin]

    def even(self) -> list[Cluster]:
        return [s for s in self._clusters if s.is_even]

    def smallest_containing(self, members) -> Cluster:
        members = frozenset(members)
        best = self.root
        for s in self._clusters:
            if members <= s.members and s.size < best.size:
                best = s
        return best

    def only_root(self) -> bool:
        return len(self._clusters) == 1


def _threshold_balls(b: BranchDatum) -> set[frozenset[str]]:
    balls = {frozenset(b.labels)}
    for r in b.labels:
        others = [x for x in b.labels if x != r]
        for c in {b.depth(r, x) for x in others}:
            balls.add(frozenset([r] + [x for x in others if b.depth(r, x) >= c]))
    return {s for s in balls if len(s) >= 2}


def build_cluster_picture(b: BranchDatum, *, check: bool = True) -> ClusterPicture:
    """Enumerate threshold balls and assemble the cluster tree with ``v`` and ``delta``."""
    if check:
        problems = validate_branch_datum(b)
        if problems:
            raise ValidationError(problems)

    sets = sorted(_threshold_balls(b), key=lambda s: (-len(s), cluster_id(s)))
    all_labels = frozenset(b.labels)

    def min_depth(s):
        items = sorted(s)
        return min(b.depth(x, y) for i, x in enumerate(items) for y in items[i + 1:])

    top_min = min_depth(all_labels)
    if top_min > 0:
        warnings.warn(f"all pairwise depths are >= {top_min}; top cluster depth forced to 0",
                      stacklevel=2)

    parent_of: dict[frozenset, frozenset | None] = {all_labels: None}
    for i, s in enumerate(sets):
        if s == all_labels:
            continue
        parent_of[s] = min((t for t in sets[:i] if s < t), key=len)

    depth = {s: (Fraction(0) if s == all_labels else min_depth(s)) for s in sets}

    def join_depth(r, s):
        t = s
        while r not in t:
            t = parent_of[t]
        return depth[t]

    built: dict[frozenset, Cluster] = {}
    for s in sets:
        par = parent_of[s]
        v = Fraction(b.v_phi) + sum((join_depth(r, s) for r in b.labels), Fraction(0))
        delta = None if par is None else depth[s] - depth[par]
        built[s] = Cluster(s, depth[s], built[par] if par is not None else None, v, delta)

    children: dict[str, list[Cluster]] = {built[s].id: [] for s in sets}
    for s in sets:
        par = parent_of[s]
        if par is not None:
            children[built[par].id].append(built[s])
    frozen = {k: tuple(sorted(v)) for k, v in children.items()}
    return ClusterPicture(b, list(built.values()), built[all_labels], frozen)


def join(pic: ClusterPicture, r: str, s: Cluster) -> Cluster:
    """Smallest cluster containing ``r`` and ``s``."""
    if r not in pic.source.labels:
        raise KeyError(f"unknown label {r!r}")
    t = pic[s]
    while r not in t.members:
        t = t.parent
    return t


def v_of_cluster(pic: ClusterPicture, s: Cluster) -> Fraction:
    """``v_phi + sum_r depth(join(r, s))`` over all labels."""
    s = pic[s]
    total = Fraction(pic.source.v_phi)
    for r in pic.labels:
        t = join(pic, r, s)
        if t is not pic.root:
            total += t.depth
    return total


def classify_cluster(pic: ClusterPicture, s: Cluster) -> ClassificationFlags:
    s = pic[s]
    kids = pic.children(s)
    uebereven = (
        s.is_even
        and all(c.is_even for c in kids)
        and not pic.singleton_children(s)
    )
    return ClassificationFlags(
        principal=s.is_principal,
        twin=s.is_twin,
        even=s.is_even,
        uebereven=uebereven,
        maximal=s.parent is not None and s.parent.parent is None,
    )


def is_uebereven(pic: ClusterPicture, s: Cluster) -> bool:
    return classify_cluster(pic, s).uebereven


def relative_depth(pic: ClusterPicture, s: Cluster) -> Fraction:
    s = pic[s]
    if s.parent is None:
        raise ValueError("relative depth is undefined for the top cluster")
    return s.depth - s.parent.depth


# -- ASCII notation ---------------------------------------------------------
#
#   cluster := "(" item (" " item)* ")" "_" depth
#   item    := cluster | label
#
# Child clusters come first (ordered by canonical id), then bare labels (sorted).

def render_ascii(pic: ClusterPicture) -> str:
    def render(s: Cluster) -> str:
        parts = [render(c) for c in pic.children(s)]
        parts.extend(pic.singleton_children(s))
        return "(" + " ".join(parts) + ")_" + format_rational(s.depth)
    return render(pic.root)


_TOKEN = re.compile(r"\s*(?:(\()|(\))_([-0-9/]+)|([^\s()]+))")


def parse_ascii(text: str, **kwargs) -> ClusterPicture:
    """Inverse of :func:`render_ascii`.

    Builds a depth matrix realising the tree (depth of a pair = depth of the
    smallest cluster containing it) and returns its cluster picture.  Extra
    keyword arguments are forwarded to :meth:`BranchDatum.from_matrix`.
    """
    pos = 0
    stack: list[list] = []
    root = None
    labels: list[str] = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at offset {pos}: {text[pos:pos + 10]!r}")
        pos = m.end()
        if m.group(1):
            if root is not None:
                raise ParseError(f"trailing input at offset {m.start()}")
            stack.append([])
        elif m.group(2):
            if not stack:
                raise ParseError(f"unbalanced ')' at offset {m.start()}")
            try:
                d = parse_rational(m.group(3))
            except ValueError:
                raise ParseError(f"bad depth token {m.group(3)!r}") from None
            items = stack.pop()
            node = ("cluster", d, items)
            if stack:
                stack[-1].append(node)
            else:
                root = node
        else:
            if not stack:
                raise ParseError(f"label {m.group(4)!r} outside any cluster")
            labels.append(m.group(4))
            stack[-1].append(("label", m.group(4)))
    if stack or root is None:
        raise ParseError("unbalanced '('")
    if len(set(labels)) != len(labels):
        raise ParseError("duplicate label in cluster notation")
    if root[1] != 0:
        raise ParseError("top cluster must have depth 0")

    pair_depth: dict[tuple[str, str], Fraction] = {}

    def walk(node, parent_depth) -> list[str]:
        _, d, items = node
        if parent_depth is not None and d <= parent_depth:
            raise ParseError(f"cluster depth {d} not greater than parent depth {parent_depth}")
        groups = []
        for it in items:
            groups.append([it[1]] if it[0] == "label" else walk(it, d))
        members = [x for g in groups for x in g]
        if len(members) < 2 or len(groups) < 2:
            raise ParseError("a cluster needs at least two children or labels")
        for i, g in enumerate(groups):
            for h in groups[i + 1:]:
                for x in g:
                    for y in h:
                        pair_depth[(x, y)] = d
        return members

    walk(root, None)
    denominators = [d.denominator for d in pair_depth.values()] or [1]
    kwargs.setdefault("e", lcm(*denominators))
    index = {r: i for i, r in enumerate(labels)}
    mat = [[Fraction(0)] * len(labels) for _ in labels]
    for (x, y), d in pair_depth.items():
        mat[index[x]][index[y]] = mat[index[y]][index[x]] = d
    return build_cluster_picture(BranchDatum.from_matrix(labels, mat, **kwargs))


def apply_label_permutation(pic: ClusterPicture, perm: Mapping[str, str]) -> dict[Cluster, Cluster]:
    """Induced map on clusters of a depth-preserving label permutation.

    Raises :class:`NotAnAutomorphism` with the deepest violated pair
    (ties broken lexicographically) as witness.
    """
    labels = pic.labels
    if set(perm) != set(labels) or set(perm.values()) != set(labels):
        raise ValueError("permutation is not a bijection of the labels")
    b = pic.source
    pairs = sorted(
        ((x, y) for i, x in enumerate(sorted(labels)) for y in sorted(labels)[i + 1:]),
        key=lambda xy: (-b.depth(*xy), xy),
    )
    for x, y in pairs:
        if b.depth(x, y) != b.depth(perm[x], perm[y]):
            raise NotAnAutomorphism(
                (x, y),
                f"depth({x},{y}) = {b.depth(x, y)} but depth({perm[x]},{perm[y]}) = "
                f"{b.depth(perm[x], perm[y])}")
    return {s: pic[frozenset(perm[r] for r in s.members)] for s in pic}
