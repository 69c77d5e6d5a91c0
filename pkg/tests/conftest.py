from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import settings

from twocover.branch_data import INF, BranchDatum, CoverSpec, GaloisDatum, branch_datum_from_points
from twocover.clusters import parse_ascii

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

FIXTURES = Path(__file__).parent / "fixtures"

CP_A_POINTS = [0, 1, 10, -8, 3, 27, -27, INF]
CP_C_ROOT = "r1,r2,r3,r4,r5,r6"
CP_D_ROOT = "r1,r2,r3,r4"
SWAP = {"r1": "r3", "r2": "r4", "r3": "r1", "r4": "r2"}


def cp_a() -> CoverSpec:
    return CoverSpec(branch_datum_from_points(CP_A_POINTS, 3))


def cp_b(v_phi: int = 0) -> CoverSpec:
    labels = ["r1", "r2", "r3", "r4"]
    return CoverSpec(BranchDatum(tuple(labels), {}, v_phi, 1, 1, 3, 1))


def cp_c(eps_t: int | None = None) -> CoverSpec:
    b = parse_ascii("((r5 r6)_2 r1 r2 r3 r4)_0").source
    eps = None if eps_t is None else {CP_C_ROOT: 1, "r5,r6": eps_t}
    return CoverSpec(b, GaloisDatum({r: r for r in b.labels}, eps))


def cp_d(swap: bool = False) -> CoverSpec:
    b = parse_ascii("((r1 r2)_1 (r3 r4)_1)_0").source
    frob = SWAP if swap else {r: r for r in b.labels}
    eps = {CP_D_ROOT: 1, "r1,r2": 1, "r3,r4": 1} if swap else None
    return CoverSpec(b, GaloisDatum(dict(frob), eps))


ALL_FIXTURES = {
    "cp_a": cp_a,
    "cp_b": cp_b,
    "cp_c_plus": lambda: cp_c(1),
    "cp_c_minus": lambda: cp_c(-1),
    "cp_d": cp_d,
    "cp_d_swap": lambda: cp_d(True),
}


@pytest.fixture(params=sorted(ALL_FIXTURES))
def fixture_spec(request) -> CoverSpec:
    return ALL_FIXTURES[request.param]()
