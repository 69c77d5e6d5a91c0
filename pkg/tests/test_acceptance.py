"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run directly (``python3 tests/test_acceptance.py``) for just the summary.
"""

import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import ALL_FIXTURES, CP_A_POINTS, cp_a, cp_b, cp_c, cp_d  # noqa: E402
from generators import brute_force_fixed, random_semistable_datum  # noqa: E402
from twocover.branch_data import (  # noqa: E402
    BranchDatum,
    CoverSpec,
    GaloisDatum,
    branch_datum_from_points,
    parse_cover_spec,
    render_cover_spec,
)
from twocover.clusters import build_cluster_picture, parse_ascii, render_ascii  # noqa: E402
from twocover.discs import build_disc_collection, disc_invariant_v  # noqa: E402
from twocover.dual_graph import add_self_chain, lift_automorphism, reorient, subdivide  # noqa: E402
from twocover.lattice import (  # noqa: E402
    component_group,
    cycle_basis,
    fixed_point_count,
    induced_action,
    spanning_tree_count,
)
from twocover.pipeline import run_pipeline  # noqa: E402
from twocover.semistability import check_semistable  # noqa: E402


def report(capsys, number, title, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f" ({detail})" if detail else "")
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            print("\n" + line)
    assert ok, line


def criterion_1():
    t0 = time.perf_counter()
    b = branch_datum_from_points(CP_A_POINTS, 3)
    res = run_pipeline(CoverSpec(b))
    dc = build_disc_collection(res.picture)
    elapsed = time.perf_counter() - t0
    pic = res.picture
    clusters = {(s.id, s.depth) for s in pic}
    ok = (
        clusters == {("r1,r2,r3,r4,r5,r6,r7,r8", 0), ("r1,r5,r6,r7", 1), ("r1,r6,r7", 3),
                     ("r2,r3,r4", 2)}
        and (pic["r1,r5,r6,r7"].v, pic["r1,r6,r7"].v, pic["r2,r3,r4"].v) == (4, 10, 6)
        and res.verdict.semistable
        and len(dc) == 6
        and sorted(disc_invariant_v(dc, D) for D in dc) == [0, 3, 4, 6, 7, 10]
        and res.graph.betti_number == 1
        and res.group.invariant_factors == (2,)
        and res.tamagawa == 2
        and elapsed < 0.1
    )
    return ok, f"{elapsed * 1000:.1f} ms"


def _sweep(count=60, seed=2024):
    rng = random.Random(seed)
    return [random_semistable_datum(rng, max_points=10, max_depth=5, min_points=4) for _ in range(count)]


def criterion_2():
    t0 = time.perf_counter()
    data = _sweep()
    mismatches = 0
    for b in data:
        res = run_pipeline(CoverSpec(b))
        if res.group.order != spanning_tree_count(res.unit_graph):
            mismatches += 1
    elapsed = time.perf_counter() - t0
    return mismatches == 0 and elapsed < 10, f"{len(data)} pictures, {mismatches} mismatches, {elapsed:.2f} s"


def criterion_3():
    specs = [f() for f in ALL_FIXTURES.values()] + [CoverSpec(b) for b in _sweep()]
    checked = bad = 0
    for spec in specs:
        pic = build_cluster_picture(spec.branch)
        dc = build_disc_collection(pic)
        v = {D: disc_invariant_v(dc, D) for D in dc}
        for D in dc:
            checked += 1
            P = dc.parent.get(D)
            if P is not None and (v[D] - v[P] - D.size) % 2:
                bad += 1
            if v[D] % 2 and (D.size % 2 == 0 or D.defining):
                bad += 1
    return bad == 0, f"{checked} discs, {bad} failures"


def criterion_4():
    counts = {}
    for e in (1, -1):
        res = run_pipeline(cp_c(e))
        counts[e] = (res.tamagawa, brute_force_fixed(res.action), res.group.invariant_factors)
    ok = counts == {1: (4, 4, (4,)), -1: (2, 2, (4,))}
    return ok, f"eps=+1 -> {counts[1][0]}, eps=-1 -> {counts[-1][0]}"


def criterion_5():
    swap, ident = run_pipeline(cp_d(True)), run_pipeline(cp_d(False))
    gr = swap.graph
    ok = (
        len(gr.vertices) == 2
        and [c.length for c in gr.chains] == [2, 2]
        and swap.group.invariant_factors == (4,)
        and (swap.tamagawa, brute_force_fixed(swap.action)) == (2, 2)
        and (ident.tamagawa, brute_force_fixed(ident.action)) == (4, 4)
    )
    return ok, f"swap -> {swap.tamagawa}, identity -> {ident.tamagawa}"


def criterion_6():
    a = cp_a().branch
    moved = {r: r for r in a.labels}
    moved["r1"], moved["r2"] = "r2", "r1"
    ram3 = BranchDatum(a.labels, a.depths, 0, 1, 3, 3, 1)
    cases = {
        "V_PHI_ODD": (cp_b(v_phi=1).branch, ()),
        "RAM_INDEX_GT_2": (ram3, ()),
        "PRINCIPAL_NOT_INERTIA_INVARIANT": (a, (moved,)),
        "V_S_ODD": (parse_ascii("((r1 r2 r3)_1 r4 r5 r6)_0").source, ()),
        "D_S_NON_INTEGRAL": (parse_ascii("((r1 r2 r3 r4)_1/2 r5 r6)_0", ram_index=2).source, ()),
    }
    wrong = []
    for code, (b, inertia) in cases.items():
        pic = build_cluster_picture(b)
        v = check_semistable(pic, GaloisDatum({r: r for r in b.labels}, None, inertia))
        if set(v.codes) != {code}:
            wrong.append(f"{code}: got {v.codes}")
    return not wrong, "; ".join(wrong) or "5 conditions"


def _summary(gr, aut):
    ug = subdivide(gr)
    cl = cycle_basis(ug)
    G = component_group(cl)
    return G.invariant_factors, fixed_point_count(G, induced_action(cl, G, lift_automorphism(gr, aut)))


def criterion_7():
    checked = bad = 0
    for name, make in sorted(ALL_FIXTURES.items()):
        res = run_pipeline(make())
        base = (res.group.invariant_factors, res.tamagawa)
        for v in res.graph.vertices:
            gr2, aut2 = add_self_chain(res.graph, res.automorphism, v)
            checked += 1
            if _summary(gr2, aut2) != base:
                bad += 1
    return bad == 0, f"{checked} loop insertions, {bad} changes"


def criterion_8():
    rng = random.Random(8)
    checked = bad = 0
    for name, make in sorted(ALL_FIXTURES.items()):
        res = run_pipeline(make())
        for _ in range(20):
            flips = {e for e, _, _ in res.unit_graph.edges if rng.random() < 0.5}
            ug, uaut = reorient(res.unit_graph, res.unit_automorphism, flips)
            cl = cycle_basis(ug)
            G = component_group(cl)
            n = fixed_point_count(G, induced_action(cl, G, uaut))
            checked += 1
            if (G.invariant_factors, n) != (res.group.invariant_factors, res.tamagawa):
                bad += 1
    return bad == 0, f"{checked} reorientations, {bad} changes"


def criterion_9():
    bad = []
    for name, make in sorted(ALL_FIXTURES.items()):
        spec = make()
        text = render_cover_spec(spec)
        again = parse_cover_spec(text)
        if again != spec or render_cover_spec(again) != text:
            bad.append(f"{name}: json")
        ascii_text = render_ascii(build_cluster_picture(spec.branch))
        if render_ascii(parse_ascii(ascii_text)) != ascii_text:
            bad.append(f"{name}: ascii")
    return not bad, ", ".join(bad) or f"{len(ALL_FIXTURES)} fixtures"


CRITERIA = [
    (1, "worked example fixture (CP-A)", criterion_1),
    (2, "matrix-tree oracle sweep", criterion_2),
    (3, "parity law on disc collections", criterion_3),
    (4, "twin-loop fixture (CP-C)", criterion_4),
    (5, "uebereven fixture (CP-D)", criterion_5),
    (6, "semistability unit suite", criterion_6),
    (7, "loop insensitivity", criterion_7),
    (8, "orientation independence", criterion_8),
    (9, "JSON and ASCII round trips", criterion_9),
]


@pytest.mark.parametrize("number,title,fn", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(number, title, fn, capsys):
    if number == 1:
        run_pipeline(cp_a())   # warm caches so the timing measures the computation
    ok, detail = fn()
    report(capsys, number, title, ok, detail)


if __name__ == "__main__":
    failed = 0
    for number, title, fn in CRITERIA:
        ok, detail = fn()
        failed += not ok
        print(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})")
    sys.exit(1 if failed else 0)
