"""Semi-stability verdict and reduction type of the double cover."""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field
from math import gcd

from .branch_data import BranchDatum, GaloisDatum
from .clusters import ClusterPicture
from .errors import HypothesisError

V_PHI_ODD = "V_PHI_ODD"
RAM_INDEX_GT_2 = "RAM_INDEX_GT_2"
PRINCIPAL_NOT_INERTIA_INVARIANT = "PRINCIPAL_NOT_INERTIA_INVARIANT"
V_S_ODD = "V_S_ODD"
D_S_NON_INTEGRAL = "D_S_NON_INTEGRAL"


@dataclass(frozen=True, order=True)
class ConditionFailure:
    code: str
    cluster: str | None = None

    def __str__(self):
        return self.code if self.cluster is None else f"{self.code}({self.cluster})"


@dataclass(frozen=True)
class Verdict:
    semistable: bool
    violations: tuple[ConditionFailure, ...] = field(default=())

    @property
    def codes(self) -> list[str]:
        return [v.code for v in self.violations]

    def __str__(self):
        if self.semistable:
            return "semistable"
        return "not semistable: " + ", ".join(str(v) for v in self.violations)


class ReductionKind(str, enum.Enum):
    GOOD = "GOOD"
    SEMISTABLE = "SEMISTABLE"
    POTENTIALLY_TAME_GOOD = "POTENTIALLY_TAME_GOOD"
    POTENTIALLY_TAME_SEMISTABLE = "POTENTIALLY_TAME_SEMISTABLE"
    WILD = "WILD"


@dataclass(frozen=True)
class ReductionType:
    kind: ReductionKind
    note: str | None = None

    def __str__(self):
        return self.kind.value if not self.note else f"{self.kind.value} ({self.note})"


def check_semistable(pic: ClusterPicture, g: GaloisDatum, b: BranchDatum | None = None) -> Verdict:
    """Evaluate the four conditions of the criterion and collect every failure.

    Condition (4) only looks at principal clusters; twins may have
    half-integral depth in a semi-stable picture.
    """
    b = b if b is not None else pic.source
    if b.genus_Y < 1:
        raise HypothesisError(
            "semi-stability criterion requires genus_Y >= 1 (it fails for rational Y)")

    found: list[ConditionFailure] = []
    if b.v_phi % 2:
        found.append(ConditionFailure(V_PHI_ODD))
    if b.ram_index > 2:
        found.append(ConditionFailure(RAM_INDEX_GT_2))
    for s in pic.principal():
        for h in g.inertia:
            if frozenset(h[r] for r in s.members) != s.members:
                found.append(ConditionFailure(PRINCIPAL_NOT_INERTIA_INVARIANT, s.id))
                break
    for s in pic.principal():
        # v at the top cluster is v_phi itself, already reported above
        if s is not pic.root and (s.v.denominator != 1 or s.v.numerator % 2):
            found.append(ConditionFailure(V_S_ODD, s.id))
        if s.depth.denominator != 1:
            found.append(ConditionFailure(D_S_NON_INTEGRAL, s.id))

    verdict = Verdict(not found, tuple(found))
    if verdict.semistable:
        for t in pic.twins():
            if (2 * t.depth).denominator != 1:
                warnings.warn(f"twin {t.id} has depth {t.depth} outside (1/2)Z", stacklevel=2)
    return verdict


def reduction_type(pic: ClusterPicture, g: GaloisDatum, b: BranchDatum | None = None,
                   verdict: Verdict | None = None) -> ReductionType:
    b = b if b is not None else pic.source
    if verdict is None:
        verdict = check_semistable(pic, g, b)
    single = pic.only_root()
    if single and b.field_degree_e == 1 and b.v_phi % 2 == 0:
        return ReductionType(ReductionKind.GOOD)
    if verdict.semistable:
        return ReductionType(ReductionKind.SEMISTABLE)
    if single:
        note = "good after a degree two extension" if b.v_phi % 2 else None
        return ReductionType(ReductionKind.POTENTIALLY_TAME_GOOD, note)
    if gcd(b.field_degree_e, b.residue_char) == 1:
        return ReductionType(ReductionKind.POTENTIALLY_TAME_SEMISTABLE)
    return ReductionType(ReductionKind.WILD)
