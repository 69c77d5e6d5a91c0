"""Random inputs and brute-force oracles shared by the test modules."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from twocover.branch_data import BranchDatum, GaloisDatum
from twocover.clusters import build_cluster_picture
from twocover.semistability import check_semistable


def _split(rng: random.Random, items: list[str]) -> list[list[str]]:
    """Random set partition into at least two blocks."""
    while True:
        k = rng.randint(2, len(items))
        blocks = [[] for _ in range(k)]
        for x in items:
            blocks[rng.randrange(k)].append(x)
        blocks = [b for b in blocks if b]
        if len(blocks) >= 2:
            return blocks


def random_tree_depths(rng: random.Random, n: int, max_depth: int = 5
                       ) -> tuple[list[str], dict[tuple[str, str], Fraction]]:
    labels = [f"r{i + 1}" for i in range(n)]
    depths: dict[tuple[str, str], Fraction] = {}

    def grow(members: list[str], d: Fraction):
        blocks = _split(rng, members)
        for i, b in enumerate(blocks):
            for c in blocks[i + 1:]:
                for x in b:
                    for y in c:
                        depths[tuple(sorted((x, y)))] = d
        for b in blocks:
            if len(b) == 1:
                continue
            room = max_depth - d
            if len(b) == 2:
                steps = [Fraction(k, 2) for k in range(1, int(2 * room) + 1)]
            else:
                steps = [Fraction(k) for k in range(1, int(room) + 1)]
            if not steps:
                # no room left: flatten into singletons at this depth
                for x, y in itertools.combinations(b, 2):
                    depths[tuple(sorted((x, y)))] = d
                continue
            grow(b, d + rng.choice(steps))

    grow(labels, Fraction(0))
    return labels, depths


def random_branch_datum(rng: random.Random, max_points: int = 10, max_depth: int = 5,
                        v_phi: int = 0, min_points: int = 2) -> BranchDatum:
    n = rng.choice(range(min_points, max_points + 1, 2))
    labels, depths = random_tree_depths(rng, n, max_depth)
    e = 2 if any(d.denominator == 2 for d in depths.values()) else 1
    return BranchDatum(tuple(labels), depths, v_phi, e, min(e, 2), 3, 1)


def random_semistable_datum(rng: random.Random, max_points: int = 10, max_depth: int = 5,
                            min_points: int = 2) -> BranchDatum:
    while True:
        b = random_branch_datum(rng, max_points, max_depth, min_points=min_points)
        pic = build_cluster_picture(b)
        if check_semistable(pic, GaloisDatum.trivial(b.labels)).semistable:
            return b


def brute_force_fixed(act) -> int:
    """Count fixed elements by listing the whole group."""
    count = 0
    for x in itertools.product(*(range(d) for d in act.moduli)):
        if act.apply(x) == tuple(x):
            count += 1
    return count


def random_symmetry(rng, pic):
    """Random product of depth-preserving transpositions and twin-block swaps."""
    labels = list(pic.labels)
    b = pic.source

    def ok(perm):
        return all(b.depth(x, y) == b.depth(perm[x], perm[y]) for x in labels for y in labels)

    moves = []
    for i, x in enumerate(labels):
        for y in labels[i + 1:]:
            t = {r: r for r in labels}
            t[x], t[y] = y, x
            if ok(t):
                moves.append(t)
    twins = pic.twins()
    for i, s in enumerate(twins):
        for t in twins[i + 1:]:
            m = {r: r for r in labels}
            for x, y in zip(sorted(s.members), sorted(t.members)):
                m[x], m[y] = y, x
            if ok(m):
                moves.append(m)
    perm = {r: r for r in labels}
    for _ in range(rng.randint(0, 4)):
        if moves:
            m = rng.choice(moves)
            perm = {r: m[perm[r]] for r in labels}
    return perm


def random_galois(rng: random.Random, pic) -> GaloisDatum:
    """Random symmetry with random eps signs; may be inconsistent on uebereven clusters."""
    perm = random_symmetry(rng, pic)
    eps = {s.id: rng.choice((1, -1)) for s in pic.even()}
    return GaloisDatum(perm, eps)
