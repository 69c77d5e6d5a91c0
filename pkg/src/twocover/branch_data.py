"""Input model: branch-point depths, field invariants and Galois data.

The branch locus is presented as a symmetric matrix of pairwise depths
(valuations of differences, normalised so that the base field has value
group ``Z``).  Depths are exact :class:`fractions.Fraction` values; nothing
in the package uses floating point.

The JSON document format::

    {
      "labels": ["r1", "r2", ...],
      "depths": [["r1", "r2", "3/2"], ...],     # unlisted pairs are 0
      "v_phi": 0, "e": 2, "ram_index": 2, "residue_char": 3, "genus_Y": 1,
      "frobenius": {"r1": "r2", ...},           # optional, default identity
      "eps": {"r1,r2": -1, ...},                # optional, see GaloisDatum
      "inertia": [{"r1": "r2", ...}, ...]       # optional, default []
    }
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ParseError, ValidationError

REQUIRED_KEYS = ("labels", "depths", "v_phi", "e", "ram_index", "residue_char", "genus_Y")
OPTIONAL_KEYS = ("frobenius", "eps", "inertia")


class _Infinity:
    """Marker for the point at infinity in :func:`depths_from_rational_points`."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"


INF = _Infinity()


def cluster_id(members: Iterable[str]) -> str:
    """Canonical identifier of a set of labels: sorted, comma-joined."""
    return ",".join(sorted(members))


def _pair(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


def parse_rational(token) -> Fraction:
    """Parse ``"num/den"``, ``"n"`` or a JSON integer into a Fraction."""
    if isinstance(token, bool):
        raise ValueError(f"not a rational: {token!r}")
    if isinstance(token, int):
        return Fraction(token)
    if not isinstance(token, str):
        raise ValueError(f"not a rational: {token!r}")
    text = token.strip()
    num, sep, den = text.partition("/")
    try:
        if sep:
            d = int(den)
            if d <= 0:
                raise ValueError
            return Fraction(int(num), d)
        return Fraction(int(num))
    except ValueError:
        raise ValueError(f"not a rational: {token!r}") from None


def format_rational(q: Fraction) -> str:
    return str(Fraction(q))


@dataclass(frozen=True, eq=False)
class BranchDatum:
    """Branch labels with their pairwise depths and field invariants.

    ``depths`` only stores non-zero entries, keyed by sorted label pairs;
    use :meth:`depth` for lookups.
    """

    labels: tuple[str, ...]
    depths: Mapping[tuple[str, str], Fraction]
    v_phi: int
    field_degree_e: int
    ram_index: int
    residue_char: int
    genus_Y: int

    def __post_init__(self):
        clean = {}
        for (a, b), d in dict(self.depths).items():
            d = Fraction(d)
            if d != 0:
                clean[_pair(a, b)] = d
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "depths", clean)

    def depth(self, a: str, b: str) -> Fraction:
        return self.depths.get(_pair(a, b), Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, BranchDatum):
            return NotImplemented
        return (
            self.labels == other.labels
            and self.depths == other.depths
            and self.v_phi == other.v_phi
            and self.field_degree_e == other.field_degree_e
            and self.ram_index == other.ram_index
            and self.residue_char == other.residue_char
            and self.genus_Y == other.genus_Y
        )

    def __hash__(self):
        return hash((self.labels, frozenset(self.depths.items()), self.v_phi))

    @classmethod
    def from_matrix(cls, labels: Sequence[str], matrix, *, v_phi=0, e=1,
                    ram_index=1, residue_char=3, genus_Y=1) -> "BranchDatum":
        """Build from a square matrix indexed like ``labels`` (diagonal ignored)."""
        depths = {}
        for i, a in enumerate(labels):
            for j in range(i + 1, len(labels)):
                depths[(a, labels[j])] = Fraction(matrix[i][j])
        return cls(tuple(labels), depths, v_phi, e, ram_index, residue_char, genus_Y)


@dataclass(frozen=True)
class GaloisDatum:
    """Frobenius permutation, epsilon signs and inertia generators.

    ``eps`` maps canonical cluster ids of even clusters to +1/-1.  ``None``
    means the trivial choice (+1 on every even cluster); an explicit mapping
    must cover the even clusters exactly (checked by the dual-graph stage).
    """

    frobenius: Mapping[str, str]
    eps: Mapping[str, int] | None = None
    inertia: tuple[Mapping[str, str], ...] = ()

    @classmethod
    def trivial(cls, labels: Iterable[str]) -> "GaloisDatum":
        return cls({r: r for r in labels}, None, ())

    def is_identity(self) -> bool:
        return all(k == v for k, v in self.frobenius.items())


@dataclass(frozen=True)
class CoverSpec:
    branch: BranchDatum
    galois: GaloisDatum = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.galois is None:
            object.__setattr__(self, "galois", GaloisDatum.trivial(self.branch.labels))


@dataclass(frozen=True)
class Violation:
    kind: str
    where: tuple[str, ...]
    message: str

    def __str__(self):
        return f"{self.kind}: {self.message}"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, math.isqrt(n) + 1))


def validate_branch_datum(b: BranchDatum) -> list[Violation]:
    """Return every invariant violation of ``b`` (empty when valid)."""
    out: list[Violation] = []
    labels = b.labels
    n = len(labels)
    if len(set(labels)) != n:
        dups = sorted({r for r in labels if labels.count(r) > 1})
        out.append(Violation("duplicate_label", tuple(dups), f"duplicate labels {dups}"))
    if n < 2:
        out.append(Violation("too_few", (), f"need at least 2 branch points, got {n}"))
    if n % 2:
        out.append(Violation("parity", (), f"branch locus of a double cover has even size, got {n}"))
    if b.field_degree_e < 1:
        out.append(Violation("field_degree", (), f"e must be positive, got {b.field_degree_e}"))
    if b.ram_index < 1:
        out.append(Violation("ram_index", (), f"ram_index must be positive, got {b.ram_index}"))
    if b.residue_char % 2 == 0 or not is_prime(b.residue_char):
        out.append(Violation("residue_char", (), f"residue characteristic must be an odd prime, got {b.residue_char}"))
    if b.genus_Y < 0:
        out.append(Violation("genus", (), f"genus_Y must be non-negative, got {b.genus_Y}"))

    known = set(labels)
    for (x, y), d in sorted(b.depths.items()):
        if x not in known or y not in known:
            out.append(Violation("unknown_label", (x, y), f"depth given for unknown pair ({x}, {y})"))
        elif x == y:
            continue
        if d < 0:
            out.append(Violation("negative", (x, y), f"depth({x},{y}) = {d} is negative"))
        if b.field_degree_e >= 1 and b.field_degree_e % d.denominator:
            out.append(Violation(
                "denominator", (x, y),
                f"depth({x},{y}) = {d} has denominator not dividing e = {b.field_degree_e}"))

    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                a, c, e = labels[i], labels[j], labels[k]
                ds = (b.depth(a, c), b.depth(c, e), b.depth(a, e))
                m = min(ds)
                if ds.count(m) < 2:
                    out.append(Violation(
                        "ultrametric", (a, c, e),
                        f"minimum of depths {tuple(str(x) for x in ds)} on ({a},{c},{e}) attained once"))
    return out


def _check_permutation(perm: Mapping[str, str], labels: Sequence[str], what: str) -> None:
    if set(perm) != set(labels) or set(perm.values()) != set(labels):
        raise ParseError(f"{what} is not a bijection of the labels")


def _from_document(doc) -> CoverSpec:
    if not isinstance(doc, dict):
        raise ParseError("top-level value must be an object")
    unknown = sorted(set(doc) - set(REQUIRED_KEYS) - set(OPTIONAL_KEYS))
    if unknown:
        raise ParseError(f"unknown fields: {', '.join(unknown)}")
    missing = [k for k in REQUIRED_KEYS if k not in doc]
    if missing:
        raise ParseError(f"missing required field(s): {', '.join(missing)}")

    labels = doc["labels"]
    if not isinstance(labels, list) or not all(isinstance(r, str) for r in labels):
        raise ParseError("'labels' must be an array of strings")
    seen = set()
    for r in labels:
        if r in seen:
            raise ParseError(f"duplicate label {r!r}")
        seen.add(r)

    ints = {}
    for key in ("v_phi", "e", "ram_index", "residue_char", "genus_Y"):
        val = doc[key]
        if isinstance(val, bool) or not isinstance(val, int):
            raise ParseError(f"'{key}' must be an integer")
        ints[key] = val

    depths: dict[tuple[str, str], Fraction] = {}
    if not isinstance(doc["depths"], list):
        raise ParseError("'depths' must be an array of [label, label, rational] triples")
    for entry in doc["depths"]:
        if not (isinstance(entry, list) and len(entry) == 3):
            raise ParseError(f"bad depth entry {entry!r}")
        a, c, tok = entry
        if a not in seen or c not in seen:
            raise ParseError(f"depth entry names unknown label: {entry!r}")
        if a == c:
            raise ParseError(f"depth entry on the diagonal: {entry!r}")
        try:
            d = parse_rational(tok)
        except ValueError as exc:
            raise ParseError(str(exc)) from None
        key = _pair(a, c)
        if key in depths and depths[key] != d:
            raise ParseError(f"depth matrix is not symmetric: depth({a},{c}) given as {depths[key]} and {d}")
        depths[key] = d

    branch = BranchDatum(tuple(labels), depths, ints["v_phi"], ints["e"],
                         ints["ram_index"], ints["residue_char"], ints["genus_Y"])

    frob = doc.get("frobenius")
    if frob is None:
        frob = {r: r for r in labels}
    if not isinstance(frob, dict):
        raise ParseError("'frobenius' must be an object")
    _check_permutation(frob, labels, "frobenius")

    eps = doc.get("eps")
    if eps is not None:
        if not isinstance(eps, dict):
            raise ParseError("'eps' must be an object")
        for k, v in eps.items():
            if v not in (1, -1) or isinstance(v, bool):
                raise ParseError(f"eps[{k!r}] must be +1 or -1")
        eps = {cluster_id(k.split(",")): v for k, v in eps.items()}

    inertia = doc.get("inertia", [])
    if not isinstance(inertia, list):
        raise ParseError("'inertia' must be an array")
    for g in inertia:
        if not isinstance(g, dict):
            raise ParseError("inertia elements must be objects")
        _check_permutation(g, labels, "inertia element")

    return CoverSpec(branch, GaloisDatum(dict(frob), eps, tuple(dict(g) for g in inertia)))


def parse_cover_spec(text: str, *, validate: bool = True) -> CoverSpec:
    """Parse a JSON cover document.

    Raises :class:`ParseError` on syntax/structure problems and
    :class:`ValidationError` when ``validate`` is set and an invariant of
    :func:`validate_branch_datum` fails.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"syntax error: {exc.msg}", exc.lineno, exc.colno) from None
    spec = _from_document(doc)
    if validate:
        problems = validate_branch_datum(spec.branch)
        if problems:
            raise ValidationError(problems)
    return spec


def to_document(spec: CoverSpec) -> dict:
    b, g = spec.branch, spec.galois
    doc = {
        "labels": list(b.labels),
        "depths": [[x, y, format_rational(d)] for (x, y), d in sorted(b.depths.items())],
        "v_phi": b.v_phi,
        "e": b.field_degree_e,
        "ram_index": b.ram_index,
        "residue_char": b.residue_char,
        "genus_Y": b.genus_Y,
        "frobenius": {r: g.frobenius[r] for r in b.labels},
        "inertia": [{r: h[r] for r in b.labels} for h in g.inertia],
    }
    if g.eps is not None:
        doc["eps"] = {k: g.eps[k] for k in sorted(g.eps)}
    return doc


def render_cover_spec(spec: CoverSpec) -> str:
    """Canonical JSON writer; ``parse_cover_spec(render_cover_spec(s)) == s``."""
    return json.dumps(to_document(spec), indent=2) + "\n"


def p_adic_valuation(q: Fraction, p: int) -> int:
    """Valuation of a non-zero rational at ``p``."""
    q = Fraction(q)
    if q == 0:
        raise ValueError("valuation of zero is infinite")
    v = 0
    num, den = q.numerator, q.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def depths_from_rational_points(points: Sequence, p: int) -> list[list[Fraction]]:
    """Pairwise depth matrix ``v_p(x - y)`` of rational points.

    ``INF`` is at depth 0 from everything.  Negative valuations are clamped
    to 0 with a warning.  The diagonal is 0 and carries no meaning.
    """
    if p % 2 == 0 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    pts = []
    for x in points:
        pts.append(INF if x is INF else Fraction(x))
    if sum(1 for x in pts if x is INF) > 1:
        raise ValueError("at most one point at infinity")
    finite = [x for x in pts if x is not INF]
    if len(set(finite)) != len(finite):
        raise ValueError("duplicate points")

    n = len(pts)
    mat = [[Fraction(0)] * n for _ in range(n)]
    clamped = []
    for i in range(n):
        for j in range(i + 1, n):
            if pts[i] is INF or pts[j] is INF:
                continue
            v = p_adic_valuation(pts[i] - pts[j], p)
            if v < 0:
                clamped.append((i, j))
                v = 0
            mat[i][j] = mat[j][i] = Fraction(v)
    if clamped:
        warnings.warn(f"{len(clamped)} pair(s) with negative valuation clamped to depth 0",
                      stacklevel=2)
    return mat


def branch_datum_from_points(points: Sequence, p: int, labels: Sequence[str] | None = None,
                             **kwargs) -> BranchDatum:
    """Convenience wrapper: labels default to ``r1, r2, ...`` in input order."""
    if labels is None:
        labels = [f"r{i + 1}" for i in range(len(points))]
    kwargs.setdefault("residue_char", p)
    return BranchDatum.from_matrix(labels, depths_from_rational_points(points, p), **kwargs)
