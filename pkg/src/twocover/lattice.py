"""Graph Jacobian of the dual graph and the Frobenius-fixed subgroup.

Everything is exact integer arithmetic.  The cycle lattice ``L`` of a
unit-length multigraph carries the pairing ``<c, c'>`` = signed number of
shared edges; the component group is ``L^dual / L``, presented as
``Z^r / gram Z^r`` in dual coordinates.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Sequence

from . import kernels
from .dual_graph import UnitAutomorphism, UnitGraph
from .errors import EnumerationLimitError, GraphError, LatticeError

Matrix = list[list[int]]

DEFAULT_MAX_ENUM = 10 ** 7


def identity_matrix(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)]
            for i in range(len(a))]


def transpose(a: Matrix) -> Matrix:
    return [list(r) for r in zip(*a)] if a else []


def integer_inverse(a: Matrix) -> Matrix:
    """Inverse of a unimodular integer matrix (raises if it is not integral)."""
    inv = rational_inverse(a)
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise LatticeError("matrix is not unimodular")
        out.append([int(x) for x in row])
    return out


def rational_inverse(a: Matrix) -> list[list[Fraction]]:
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise LatticeError("matrix is singular")
        m[c], m[piv] = m[piv], m[c]
        p = m[c][c]
        m[c] = [x / p for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[n:] for row in m]


def bareiss_determinant(a: Matrix) -> int:
    """Fraction-free Gaussian elimination; exact for integer input."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


# -- Smith normal form -------------------------------------------------------

def smith_normal_form(M: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(U, D, V)`` with ``U M V = D`` diagonal, ``d_1 | d_2 | ...``, ``d_i >= 0``.

    The pivot is always the smallest nonzero entry (first in row-major order),
    so the output is a deterministic function of the input.
    """
    a = [list(map(int, row)) for row in M]
    m = len(a)
    n = len(a[0]) if m else 0
    U = identity_matrix(m)
    V = identity_matrix(n)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):     # row_dst += q * row_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return U, a, V
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = a[t][t]
            clean = True
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    clean = clean and a[t][j] == 0
            if not clean:
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
    return U, a, V


# -- cycle lattice -----------------------------------------------------------

@dataclass(frozen=True)
class CycleLattice:
    graph: UnitGraph
    tree_edges: tuple[str, ...]
    nontree_edges: tuple[str, ...]
    basis: tuple[dict, ...]        # edge id -> signed multiplicity
    gram: Matrix

    @property
    def rank(self) -> int:
        return len(self.basis)


def cycle_basis(ug: UnitGraph) -> CycleLattice:
    """Fundamental cycles of a breadth-first spanning tree rooted at the least vertex.

    The cycle of a non-tree edge ``u -> v`` is that edge followed by the tree
    path from ``v`` back to ``u``; it has coefficient +1 on its own edge.
    """
    if not ug.vertices:
        raise GraphError("empty graph")
    adj: dict[str, list[tuple[str, str, int]]] = {v: [] for v in ug.vertices}
    for e, u, v in ug.edges:
        adj[u].append((e, v, 1))
        if u != v:
            adj[v].append((e, u, -1))

    start = min(ug.vertices)
    path: dict[str, dict[str, int]] = {start: {}}   # signed tree path start -> x
    tree: list[str] = []
    todo = deque([start])
    while todo:
        x = todo.popleft()
        for e, y, s in adj[x]:
            if y not in path:
                path[y] = dict(path[x])
                path[y][e] = s
                tree.append(e)
                todo.append(y)
    if len(path) != len(ug.vertices):
        raise GraphError("graph is not connected")

    tree_set = set(tree)
    nontree = [e for e, _, _ in ug.edges if e not in tree_set]
    ends = {e: (u, v) for e, u, v in ug.edges}
    basis = []
    for e in nontree:
        u, v = ends[e]
        cyc: dict[str, int] = {e: 1}
        for f, s in path[u].items():
            cyc[f] = cyc.get(f, 0) + s
        for f, s in path[v].items():
            cyc[f] = cyc.get(f, 0) - s
        basis.append({f: c for f, c in cyc.items() if c})
    gram = [[sum(c * d.get(f, 0) for f, c in b.items()) for d in basis] for b in basis]
    return CycleLattice(ug, tuple(tree), tuple(nontree), tuple(basis), gram)


def spanning_tree_count(ug: UnitGraph) -> int:
    """Kirchhoff: any cofactor of the Laplacian; loops contribute nothing."""
    verts = sorted(ug.vertices)
    idx = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    lap = [[0] * n for _ in range(n)]
    for _, u, v in ug.edges:
        if u == v:
            continue
        i, j = idx[u], idx[v]
        lap[i][i] += 1
        lap[j][j] += 1
        lap[i][j] -= 1
        lap[j][i] -= 1
    minor = [row[1:] for row in lap[1:]]
    return bareiss_determinant(minor)


# -- component group ---------------------------------------------------------

@dataclass(frozen=True)
class AbelianGroup:
    """``Z^r / gram Z^r``; coordinates are changed by ``x -> U x``."""

    invariant_factors: tuple[int, ...]    # nontrivial ones, d_1 | d_2 | ...
    diagonal: tuple[int, ...]             # full SNF diagonal, 1's included
    U: Matrix
    V: Matrix
    U_inv: Matrix

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    def describe(self) -> str:
        if not self.invariant_factors:
            return "0"
        return " + ".join(f"Z/{d}" for d in self.invariant_factors)


def _check_positive_definite(gram: Matrix) -> None:
    n = len(gram)
    if any(gram[i][j] != gram[j][i] for i in range(n) for j in range(n)):
        raise LatticeError("gram matrix is not symmetric")
    for k in range(1, n + 1):
        if bareiss_determinant([row[:k] for row in gram[:k]]) <= 0:
            raise LatticeError("gram matrix is not positive definite")


def component_group(cl: CycleLattice | Matrix) -> AbelianGroup:
    gram = cl.gram if isinstance(cl, CycleLattice) else [list(r) for r in cl]
    _check_positive_definite(gram)
    U, D, V = smith_normal_form(gram)
    diag = tuple(D[i][i] for i in range(len(D)))
    return AbelianGroup(tuple(d for d in diag if d > 1), diag, U, V, integer_inverse(U))


@dataclass(frozen=True)
class InducedAction:
    on_lattice: Matrix          # A, columns = images of basis cycles
    on_dual: Matrix             # B = gram A gram^-1
    on_group: Matrix            # rows/cols indexed by the nontrivial invariant factors
    moduli: tuple[int, ...]

    def apply(self, x: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(c * y for c, y in zip(row, x)) % d
                     for row, d in zip(self.on_group, self.moduli))


def _push_cycle(cyc: dict, aut: UnitAutomorphism) -> dict:
    out: dict[str, int] = {}
    for e, c in cyc.items():
        f, s = aut.edge_map[e]
        out[f] = out.get(f, 0) + s * c
    return {f: c for f, c in out.items() if c}


def induced_action(cl: CycleLattice, G: AbelianGroup, aut: UnitAutomorphism) -> InducedAction:
    """Matrix of ``aut`` on the cycle lattice, its dual and the component group."""
    r = cl.rank
    A = [[0] * r for _ in range(r)]
    for j, cyc in enumerate(cl.basis):
        img = _push_cycle(cyc, aut)
        coords = [img.get(e, 0) for e in cl.nontree_edges]
        recon: dict[str, int] = {}
        for c, b in zip(coords, cl.basis):
            for e, x in b.items():
                recon[e] = recon.get(e, 0) + c * x
        if {e: x for e, x in recon.items() if x} != img:
            raise LatticeError("image of a cycle is not a cycle; automorphism is invalid")
        for i in range(r):
            A[i][j] = coords[i]
    gram = cl.gram
    if matmul(matmul(transpose(A), gram), A) != gram:
        raise LatticeError("action does not preserve the length pairing")

    if r:
        Bq = matmul(matmul(gram, A), rational_inverse(gram))
        if any(x.denominator != 1 for row in Bq for x in row):
            raise LatticeError("dual action is not integral")
        B = [[int(x) for x in row] for row in Bq]
    else:
        B = []
    C = matmul(matmul(G.U, B), G.U_inv) if r else []
    keep = [i for i, d in enumerate(G.diagonal) if d > 1]
    moduli = tuple(G.diagonal[i] for i in keep)
    on_group = [[C[i][j] % G.diagonal[i] for j in keep] for i in keep]
    return InducedAction(A, B, on_group, moduli)


def _fixed_by_enumeration(act: InducedAction) -> int:
    n = len(act.moduli)
    delta = [[(act.on_group[i][k] - (i == k)) % act.moduli[i] for k in range(n)]
             for i in range(n)]
    return kernels.count_fixed_points(list(act.moduli), delta)


def _fixed_by_congruence(act: InducedAction) -> int:
    # |ker(C - I)| on a finite group equals |coker|, i.e. the index of
    # (C - I) Z^n + D Z^n in Z^n.
    n = len(act.moduli)
    if n == 0:
        return 1
    m = [[act.on_group[i][k] - (i == k) for k in range(n)]
         + [act.moduli[i] * (i == k) for k in range(n)] for i in range(n)]
    _, D, _ = smith_normal_form(m)
    return prod(D[i][i] for i in range(n))


def fixed_point_count(G: AbelianGroup, act: InducedAction, *,
                      max_enum: int = DEFAULT_MAX_ENUM, method: str = "enumerate") -> int:
    """Number of elements of the component group fixed by ``act``.

    ``method`` is ``"enumerate"`` (brute force, refuses groups larger than
    ``max_enum``), ``"congruence"`` (second Smith form) or ``"auto"``
    (enumerate when small enough, otherwise congruence).
    """
    if method not in ("enumerate", "congruence", "auto"):
        raise ValueError(f"unknown method {method!r}")
    if method == "congruence":
        return _fixed_by_congruence(act)
    if G.order > max_enum:
        if method == "auto":
            return _fixed_by_congruence(act)
        raise EnumerationLimitError(
            f"|Phi| = {G.order} exceeds the enumeration bound {max_enum}; "
            "raise --max-enum or use the congruence method")
    return _fixed_by_enumeration(act)
