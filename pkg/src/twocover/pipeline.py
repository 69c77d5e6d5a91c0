"""End-to-end computation: cover data to Tamagawa number and normalized volume."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .branch_data import INF, CoverSpec, is_prime
from .clusters import ClusterPicture, build_cluster_picture
from .dual_graph import (
    GraphAutomorphism,
    MetricGraph,
    UnitAutomorphism,
    UnitGraph,
    build_dual_graph,
    chain_table,
    frobenius_automorphism,
    lift_automorphism,
    subdivide,
)
from .errors import NotSemistableError
from .lattice import (
    DEFAULT_MAX_ENUM,
    AbelianGroup,
    CycleLattice,
    InducedAction,
    component_group,
    cycle_basis,
    fixed_point_count,
    induced_action,
)
from .semistability import ReductionType, Verdict, check_semistable, reduction_type


@dataclass(frozen=True)
class PipelineResult:
    picture: ClusterPicture
    verdict: Verdict
    reduction: ReductionType
    graph: MetricGraph
    automorphism: GraphAutomorphism
    unit_graph: UnitGraph
    unit_automorphism: UnitAutomorphism
    lattice: CycleLattice
    group: AbelianGroup
    action: InducedAction
    tamagawa: int


def run_pipeline(spec: CoverSpec, *, max_enum: int = DEFAULT_MAX_ENUM,
                 method: str = "enumerate") -> PipelineResult:
    pic = build_cluster_picture(spec.branch)
    verdict = check_semistable(pic, spec.galois)
    if not verdict.semistable:
        raise NotSemistableError(str(verdict), verdict.violations)
    red = reduction_type(pic, spec.galois, verdict=verdict)
    gr = build_dual_graph(pic)
    aut = frobenius_automorphism(gr, pic, spec.galois)
    ug = subdivide(gr)
    uaut = lift_automorphism(gr, aut)
    cl = cycle_basis(ug)
    G = component_group(cl)
    act = induced_action(cl, G, uaut)
    tam = fixed_point_count(G, act, max_enum=max_enum, method=method)
    return PipelineResult(pic, verdict, red, gr, aut, ug, uaut, cl, G, act, tam)


def tamagawa_number(spec: CoverSpec, **kwargs) -> int:
    return run_pipeline(spec, **kwargs).tamagawa


@dataclass(frozen=True)
class NormalizationInputs:
    q: int
    dim_d: int
    identity_component_points: int
    conductor_c: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "conductor_c", Fraction(self.conductor_c))
        if not _is_prime_power(self.q):
            raise ValueError(f"q must be a prime power, got {self.q}")
        if self.dim_d <= 0 or self.identity_component_points <= 0 or self.conductor_c <= 0:
            raise ValueError("dim_d, identity_component_points and conductor_c must be positive")


def _is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    p = next(d for d in range(2, q + 1) if q % d == 0)
    while q % p == 0:
        q //= p
    return q == 1 and is_prime(p)


def normalized_volume(tam: int, n: NormalizationInputs) -> Fraction:
    return n.conductor_c * n.identity_component_points * tam / Fraction(n.q) ** n.dim_d


@dataclass(frozen=True)
class VolumeReport:
    tamagawa: int
    volume: Fraction | None
    verdict: Verdict
    reduction: ReductionType
    graph_summary: str
    invariant_factors: tuple[int, ...] = ()

    def to_text(self) -> str:
        lines = [
            f"verdict: {self.verdict}",
            f"reduction: {self.reduction}",
            f"Phi = {_group_text(self.invariant_factors)}",
            f"tamagawa: {self.tamagawa}",
            f"volume: {'-' if self.volume is None else self.volume}",
            "graph:",
            self.graph_summary,
        ]
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "verdict": {"semistable": self.verdict.semistable,
                        "violations": [str(v) for v in self.verdict.violations]},
            "reduction": str(self.reduction),
            "invariant_factors": list(self.invariant_factors),
            "tamagawa": self.tamagawa,
            "volume": None if self.volume is None else str(self.volume),
        }


def _group_text(factors: Sequence[int]) -> str:
    return " + ".join(f"Z/{d}" for d in factors) if factors else "0"


def volume_report(spec: CoverSpec, norm: NormalizationInputs | None = None,
                  **kwargs) -> VolumeReport:
    res = run_pipeline(spec, **kwargs)
    vol = normalized_volume(res.tamagawa, norm) if norm is not None else None
    return VolumeReport(res.tamagawa, vol, res.verdict, res.reduction,
                        chain_table(res.graph), res.group.invariant_factors)


def hitchin_discriminant_points(points: Sequence, alpha2_data: Sequence = (), p: int = 3) -> list:
    """Validate the zero locus of ``alpha_1^2 - 4 alpha_2`` given as rational points.

    With ``alpha_1`` shifted to zero the spectral cover is ``z^2 = -4 alpha_2``,
    so its branch points are the given points.  ``alpha2_data`` is only
    checked to be rational; the points are returned unchanged.
    """
    if p % 2 == 0 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    pts = list(points)
    if not pts:
        raise ValueError("no branch points: a ramified double cover needs at least two")
    for x in alpha2_data:
        Fraction(x)
    seen = set()
    for x in pts:
        key = INF if x is INF else Fraction(x)
        if key in seen:
            raise ValueError(f"repeated branch point {x}: the branch divisor is not reduced")
        seen.add(key)
    return pts
