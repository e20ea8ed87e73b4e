"""Region signs, total signs, sensitivity bounds, and reversibility.

Fix a base point z (one truth value per input block). The region of interest
is the set of points of the simplex product whose base coordinate is nonzero
in every block; the free coordinates are the remaining ones, listed block by
block in input order with the base coordinate skipped. Their count is the
reduced dimension N.

For a scalar multilinear form, the sign over the region is decided exactly
from the coefficient tensor: the form is identically 0 iff all coefficients
are 0; strictly positive iff all coefficients are >= 0 and the all-base
coefficient is > 0 (every region point gives positive weight to the all-base
monomial, and every coefficient is a limit of region values); strictly
negative symmetrically; otherwise the sign is UNDETERMINED ("u").

The total sign of a projection w at z collects the region signs of the N
reduced partial derivatives of w composed with the expansion. Total signs
eliminate sign vectors; the union of eliminated sets over a projection family
is a lower approximation of the sensitive directions at z, and

    score(S) = 3**N - 2 * |eliminated set of (all canonical vectors not in S)|

is monotone in S, equals 3**N exactly when S is everything, and its base-3
logarithm is the sensitivity value reported by this module. Scores from the
lower approximation are lower bounds; collision data gives upper bounds.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .errors import DomainError, ResourceLimitError, ValidationError
from .gates import (
    Gate,
    MultilinearExpansion,
    apply_functional,
    base_points,
    expand,
    parse_rational,
    reduced_dimension,
    reduced_partial,
    validate_base_point,
)
from .signvec import (
    UNDETERMINED,
    canonical_sign_vectors,
    canonicalize,
    eliminated_count,
    eliminated_set,
    enumeration_key,
    is_canonical,
)

__all__ = [
    "ProjectionFamily",
    "ScorePair",
    "BasePointReport",
    "Certificate",
    "GateAnalysis",
    "DataBound",
    "ExperimentRecord",
    "BooleanSensitivity",
    "ENV_BASE_POINT_CAP",
    "DEFAULT_BASE_POINT_CAP",
    "default_family",
    "sign_over_region",
    "total_sign",
    "reduced_coordinates",
    "sensitivity_lower_set",
    "sensitivity_score",
    "log3_value",
    "format_log3",
    "analyze_gate",
    "reversibility_certificate",
    "verify_certificate",
    "boolean_sensitivity",
    "parse_experiment_csv",
    "data_upper_bound",
]

DEFAULT_BASE_POINT_CAP = 4096
ENV_BASE_POINT_CAP = "SIGNELIM_BASE_POINT_CAP"

Index = tuple[int, ...]
Vector = tuple[Fraction, ...]


def _base_point_cap() -> int:
    raw = os.environ.get(ENV_BASE_POINT_CAP)
    if raw is None:
        return DEFAULT_BASE_POINT_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ResourceLimitError(
            f"{ENV_BASE_POINT_CAP} must be an integer, got {raw!r}"
        )
    if cap < 1:
        raise ResourceLimitError(f"{ENV_BASE_POINT_CAP} must be >= 1, got {cap}")
    return cap


def _check_base_point_count(expansion: MultilinearExpansion) -> int:
    count = 1
    for a in expansion.arities:
        count *= a
    cap = _base_point_cap()
    if count > cap:
        raise ResourceLimitError(
            f"{count} base points exceed the cap {cap}; "
            f"set {ENV_BASE_POINT_CAP} to raise it"
        )
    return count


@dataclass(frozen=True)
class ProjectionFamily:
    """Nonzero rational output functionals, one representative per +- class."""

    functionals: tuple[Vector, ...]
    output_dim: int

    def __post_init__(self) -> None:
        if self.output_dim < 1:
            raise DomainError("output_dim must be >= 1")
        if not self.functionals:
            raise DomainError("a projection family must be nonempty")
        for w in self.functionals:
            if len(w) != self.output_dim:
                raise DomainError(
                    f"functional {w!r} must have {self.output_dim} components"
                )

    @classmethod
    def from_vectors(cls, vectors: Iterable[Sequence], output_dim: int) -> "ProjectionFamily":
        """Normalize sign (first nonzero component positive) and deduplicate."""
        seen = []
        for raw in vectors:
            w = tuple(Fraction(v) for v in raw)
            if len(w) != output_dim:
                raise DomainError(
                    f"functional {raw!r} must have {output_dim} components"
                )
            lead = next((c for c in w if c != 0), None)
            if lead is None:
                raise DomainError("functionals must be nonzero")
            if lead < 0:
                w = tuple(-c for c in w)
            if w not in seen:
                seen.append(w)
        return cls(functionals=tuple(seen), output_dim=output_dim)


def default_family(output_dim: int) -> ProjectionFamily:
    """All {-1, 0, +1} functionals, one per +- class, in enumeration order."""
    vectors = canonical_sign_vectors(output_dim)
    return ProjectionFamily.from_vectors(vectors, output_dim)


def reduced_coordinates(arities: Sequence[int], z: Sequence[int]) -> list[tuple[int, int]]:
    """The free (block, coordinate) pairs at base point z, in report order."""
    return [
        (i, j)
        for i, arity in enumerate(arities)
        for j in range(arity)
        if j != z[i]
    ]


def sign_over_region(form: MultilinearExpansion, base: Sequence[int]) -> int:
    """Exact sign of a scalar form over the region anchored at `base`.

    Returns +1, -1, 0, or UNDETERMINED. Exactness rests on multilinearity:
    region values are convex combinations of coefficients with strictly
    positive weight on the all-base coefficient.
    """
    if form.output_dim != 1:
        raise DomainError("sign_over_region expects a scalar form")
    anchor = validate_base_point(form, base)
    base_value = form.coefficients[anchor][0]
    has_pos = has_neg = False
    for vec in form.coefficients.values():
        if vec[0] > 0:
            has_pos = True
        elif vec[0] < 0:
            has_neg = True
    if not has_pos and not has_neg:
        return 0
    if not has_neg and base_value > 0:
        return 1
    if not has_pos and base_value < 0:
        return -1
    return UNDETERMINED


def _total_sign_of_scalar(scalar: MultilinearExpansion, z: Index) -> tuple[int, ...]:
    out = []
    for i, j in reduced_coordinates(scalar.arities, z):
        form = reduced_partial(scalar, z, i, j)
        rest_base = z[:i] + z[i + 1 :]
        out.append(sign_over_region(form, rest_base))
    return tuple(out)


def total_sign(
    expansion: MultilinearExpansion, z: Sequence[int], w: Sequence
) -> tuple[int, ...]:
    """Region signs of the N reduced partials of w composed with the expansion."""
    base = validate_base_point(expansion, z)
    scalar = apply_functional(expansion, w)
    return _total_sign_of_scalar(scalar, base)


def witness_signs(
    expansion: MultilinearExpansion, z: Sequence[int], family: ProjectionFamily
) -> tuple[tuple[Vector, tuple[int, ...]], ...]:
    """(functional, total sign) for every family member, in family order."""
    base = validate_base_point(expansion, z)
    if family.output_dim != expansion.output_dim:
        raise DomainError(
            f"family works on dimension {family.output_dim}, "
            f"gate outputs have dimension {expansion.output_dim}"
        )
    out = []
    for w in family.functionals:
        scalar = apply_functional(expansion, w)
        out.append((w, _total_sign_of_scalar(scalar, base)))
    return tuple(out)


def sensitivity_lower_set(
    expansion: MultilinearExpansion, z: Sequence[int], family: ProjectionFamily
) -> frozenset[tuple[int, ...]]:
    """Canonical vectors eliminated by some witness total sign at z.

    A subset of the true sensitive set: every vector in it is certified
    sensitive by an explicit projection, so downstream scores are lower
    bounds.
    """
    signs = [ts for _, ts in witness_signs(expansion, z, family)]
    n_reduced = reduced_dimension(expansion)
    return eliminated_set(signs, n_reduced)


@dataclass(frozen=True)
class ScorePair:
    """An exact sensitivity score and its base-3 logarithm."""

    value: int
    log3: float


def log3_value(value: int) -> float:
    """Base-3 logarithm, exact at integer powers of 3."""
    if value < 1:
        raise DomainError(f"score must be >= 1, got {value}")
    exponent = round(math.log(value) / math.log(3)) if value > 1 else 0
    if exponent >= 0 and 3**exponent == value:
        return float(exponent)
    return math.log(value) / math.log(3)


def format_log3(value: int) -> str:
    """12-digit decimal rendering used in machine output."""
    return f"{log3_value(value):.12f}"


def sensitivity_score(n_reduced: int, sens_subset: Iterable[Sequence[int]]) -> ScorePair:
    """score(S) = 3**N - 2 * |eliminated set of the complement of S|.

    S must consist of canonical vectors of length N. Monotone in S, 1 when S
    is empty, 3**N when S is everything, so log3 ranges over [0, N].
    """
    subset = set()
    for v in sens_subset:
        vec = tuple(v)
        if len(vec) != n_reduced or not is_canonical(vec):
            raise DomainError(
                f"{vec!r} is not a canonical vector of length {n_reduced}"
            )
        subset.add(vec)
    complement = [
        v for v in canonical_sign_vectors(n_reduced) if v not in subset
    ]
    value = 3**n_reduced - 2 * eliminated_count(complement, n_reduced)
    return ScorePair(value=value, log3=log3_value(value))


@dataclass(frozen=True)
class Certificate:
    """A replayable injectivity witness: base point plus covering projections.

    Valid when the recorded total signs match a recomputation and their
    eliminated sets jointly cover every canonical vector of the reduced
    dimension; verify_certificate replays exactly that.
    """

    base_point: Index
    witnesses: tuple[tuple[Vector, tuple[int, ...]], ...]
    n_reduced: int


def _greedy_certificate(
    z: Index,
    signs: Sequence[tuple[Vector, tuple[int, ...]]],
    n_reduced: int,
) -> Optional[Certificate]:
    universe = frozenset(canonical_sign_vectors(n_reduced))
    pool = [
        (w, ts, eliminated_set([ts], n_reduced)) for w, ts in signs
    ]
    covered: frozenset = frozenset()
    chosen: list[tuple[Vector, tuple[int, ...], frozenset]] = []
    while covered != universe:
        best = None
        best_gain = 0
        for item in pool:
            gain = len(item[2] - covered)
            if gain > best_gain:
                best = item
                best_gain = gain
        if best is None:
            return None
        chosen.append(best)
        covered = covered | best[2]
    # prune to an irredundant witness list, keeping insertion order
    pruned = list(chosen)
    for item in list(chosen):
        trial = [other for other in pruned if other is not item]
        if trial and frozenset().union(*(t[2] for t in trial)) == universe:
            pruned = trial
    return Certificate(
        base_point=z,
        witnesses=tuple((w, ts) for w, ts, _ in pruned),
        n_reduced=n_reduced,
    )


def verify_certificate(
    expansion: MultilinearExpansion, certificate: Certificate
) -> bool:
    """Replay the certificate: recompute total signs and coverage."""
    n_reduced = reduced_dimension(expansion)
    if certificate.n_reduced != n_reduced:
        return False
    try:
        z = validate_base_point(expansion, certificate.base_point)
    except DomainError:
        return False
    covered: set = set()
    for w, recorded in certificate.witnesses:
        actual = total_sign(expansion, z, w)
        if actual != tuple(recorded):
            return False
        covered |= eliminated_set([actual], n_reduced)
    return len(covered) == (3**n_reduced - 1) // 2


@dataclass(frozen=True)
class BasePointReport:
    """Everything computed at one base point."""

    base_point: Index
    witnesses: tuple[tuple[Vector, tuple[int, ...]], ...]
    sens_lower: frozenset
    score: ScorePair
    certificate: Optional[Certificate]
    data_upper: Optional[ScorePair]


@dataclass(frozen=True)
class DataBound:
    """Upper bound extracted from output collisions in experiment records."""

    score: ScorePair
    base_point: Index
    collisions: int
    heuristic: bool


@dataclass(frozen=True)
class GateAnalysis:
    """Per-base-point reports plus the gate-level extremes."""

    reports: tuple[BasePointReport, ...]
    lower: ScorePair
    lower_base_point: Index
    certificate: Optional[Certificate]
    data: Optional[DataBound]
    n_reduced: int


@dataclass(frozen=True)
class ExperimentRecord:
    """One observation: a point of the simplex product and the gate output."""

    point: tuple[Vector, ...]
    output: Vector


def _validate_records(
    records: Sequence[ExperimentRecord],
    expansion: MultilinearExpansion,
    delta: Fraction,
) -> None:
    if delta < 0:
        raise DomainError("delta must be >= 0")
    rejected = []
    for pos, record in enumerate(records, start=1):
        if len(record.point) != expansion.block_count:
            raise ValidationError(
                f"record {pos}: expected {expansion.block_count} blocks"
            )
        for i, block in enumerate(record.point):
            if len(block) != expansion.arities[i]:
                raise ValidationError(
                    f"record {pos}: block {i} must have {expansion.arities[i]} coordinates"
                )
            if sum(block) != 1:
                raise ValidationError(
                    f"record {pos}: block {i} coordinates must sum to 1"
                )
            if any(c <= 0 for c in block) or (
                delta > 0 and any(c < delta for c in block)
            ):
                rejected.append(pos)
                break
        if len(record.output) != expansion.output_dim:
            raise ValidationError(
                f"record {pos}: output must have {expansion.output_dim} components"
            )
    if rejected:
        raise ValidationError(
            "records not strictly interior (every coordinate must exceed "
            f"{delta if delta > 0 else 0}): positions {rejected}"
        )


def _collision_pairs(
    records: Sequence[ExperimentRecord], eps: Fraction
) -> list[tuple[ExperimentRecord, ExperimentRecord]]:
    if eps < 0:
        raise DomainError("eps must be >= 0")
    pairs = []
    for a, b in combinations(records, 2):
        if a.point == b.point:
            continue
        if eps == 0:
            if a.output == b.output:
                pairs.append((a, b))
        elif all(abs(p - q) <= eps for p, q in zip(a.output, b.output)):
            pairs.append((a, b))
    return pairs


def _collision_signs_at(
    pairs: Sequence[tuple[ExperimentRecord, ExperimentRecord]],
    arities: Sequence[int],
    z: Index,
) -> set[tuple[int, ...]]:
    coords = reduced_coordinates(arities, z)
    out = set()
    for a, b in pairs:
        diff = tuple(b.point[i][j] - a.point[i][j] for i, j in coords)
        if all(d == 0 for d in diff):
            continue
        canonical, _ = canonicalize(diff)
        out.add(canonical)
    return out


def data_upper_bound(
    records: Sequence[ExperimentRecord],
    expansion: MultilinearExpansion,
    eps: Fraction = Fraction(0),
    delta: Fraction = Fraction(0),
) -> Optional[DataBound]:
    """Upper bound on the gate sensitivity from output collisions.

    Two records with (near-)equal outputs witness a direction the gate cannot
    separate; the canonical signs of their reduced-coordinate differences are
    collected per base point, and the reported bound is the maximum of the
    per-base-point scores, matching the gate score's maximum over base
    points. Exact for eps = 0; eps > 0 marks the bound heuristic. Returns
    None when no two records collide at distinct points.
    """
    eps = Fraction(eps)
    delta = Fraction(delta)
    _validate_records(records, expansion, delta)
    _check_base_point_count(expansion)
    pairs = _collision_pairs(records, eps)
    if not pairs:
        return None
    n_reduced = reduced_dimension(expansion)
    best: Optional[tuple[int, Index]] = None
    for z in base_points(expansion):
        signs = _collision_signs_at(pairs, expansion.arities, z)
        value = 3**n_reduced - 2 * eliminated_count(signs, n_reduced)
        if best is None or value > best[0]:
            best = (value, z)
    value, z = best
    return DataBound(
        score=ScorePair(value=value, log3=log3_value(value)),
        base_point=z,
        collisions=len(pairs),
        heuristic=eps > 0,
    )


def analyze_gate(
    expansion: MultilinearExpansion,
    family: Optional[ProjectionFamily] = None,
    records: Optional[Sequence[ExperimentRecord]] = None,
    eps: Fraction = Fraction(0),
    delta: Fraction = Fraction(0),
) -> GateAnalysis:
    """Full sweep over base points: witnesses, bounds, and certificates."""
    if family is None:
        family = default_family(expansion.output_dim)
    _check_base_point_count(expansion)
    n_reduced = reduced_dimension(expansion)
    universe_size = (3**n_reduced - 1) // 2
    pairs = None
    if records is not None:
        eps = Fraction(eps)
        delta = Fraction(delta)
        _validate_records(records, expansion, delta)
        pairs = _collision_pairs(records, eps)

    scalars = [apply_functional(expansion, w) for w in family.functionals]
    reports = []
    lower_best: Optional[tuple[ScorePair, Index]] = None
    data_best: Optional[tuple[int, Index, int]] = None
    certificate: Optional[Certificate] = None
    for z in base_points(expansion):
        signs = tuple(
            (w, _total_sign_of_scalar(scalar, z))
            for w, scalar in zip(family.functionals, scalars)
        )
        sens = eliminated_set([ts for _, ts in signs], n_reduced)
        score = sensitivity_score(n_reduced, sens)
        cert = None
        if len(sens) == universe_size:
            cert = _greedy_certificate(z, signs, n_reduced)
        data_upper = None
        if pairs:
            collision = _collision_signs_at(pairs, expansion.arities, z)
            value = 3**n_reduced - 2 * eliminated_count(collision, n_reduced)
            data_upper = ScorePair(value=value, log3=log3_value(value))
            if data_best is None or value > data_best[0]:
                data_best = (value, z, len(pairs))
        reports.append(
            BasePointReport(
                base_point=z,
                witnesses=signs,
                sens_lower=sens,
                score=score,
                certificate=cert,
                data_upper=data_upper,
            )
        )
        if lower_best is None or score.value > lower_best[0].value:
            lower_best = (score, z)
        if certificate is None and cert is not None:
            certificate = cert
    data = None
    if data_best is not None:
        value, z, collisions = data_best
        data = DataBound(
            score=ScorePair(value=value, log3=log3_value(value)),
            base_point=z,
            collisions=collisions,
            heuristic=Fraction(eps) > 0,
        )
    lower_score, lower_z = lower_best
    return GateAnalysis(
        reports=tuple(reports),
        lower=lower_score,
        lower_base_point=lower_z,
        certificate=certificate,
        data=data,
        n_reduced=n_reduced,
    )


def reversibility_certificate(
    expansion: MultilinearExpansion, family: Optional[ProjectionFamily] = None
) -> Optional[Certificate]:
    """First certificate found sweeping base points, or None."""
    analysis = analyze_gate(expansion, family=family)
    return analysis.certificate


@dataclass(frozen=True)
class BooleanSensitivity:
    """Classical sensitivity data of a two-valued gate."""

    per_point: dict
    value: int
    insensitive: dict


def boolean_sensitivity(gate: Gate) -> BooleanSensitivity:
    """s(gate, z) for every vertex z, the maximum, and the flip-invariant sets.

    Requires every arity to be 2 and at most two distinct output vectors.
    """
    if any(a != 2 for a in gate.arities):
        raise DomainError("boolean sensitivity needs all arities equal to 2")
    if len(set(gate.table.values())) > 2:
        raise DomainError("boolean sensitivity needs outputs in a 2-point set")
    per_point = {}
    insensitive = {}
    for z in base_points(expand(gate)):
        flips = 0
        stable = []
        for i in range(len(gate.arities)):
            flipped = z[:i] + (1 - z[i],) + z[i + 1 :]
            if gate.table[flipped] != gate.table[z]:
                flips += 1
            else:
                stable.append(i)
        per_point[z] = flips
        insensitive[z] = frozenset(stable)
    return BooleanSensitivity(
        per_point=per_point,
        value=max(per_point.values()),
        insensitive=insensitive,
    )


# ---------------------------------------------------------------------------
# experiment CSV
# ---------------------------------------------------------------------------


def experiment_header(arities: Sequence[int], output_dim: int) -> list[str]:
    """Column names: b<block>_<coordinate> groups, then y<component>."""
    head = [
        f"b{i + 1}_{j}" for i, arity in enumerate(arities) for j in range(arity)
    ]
    head += [f"y{c + 1}" for c in range(output_dim)]
    return head


def parse_experiment_csv(path, gate: Gate | MultilinearExpansion) -> list[ExperimentRecord]:
    """Read experiment records; exact rationals, header checked strictly."""
    expected = experiment_header(gate.arities, gate.output_dim)
    records = []
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ValidationError(f"{path}: empty file")
        if [h.strip() for h in header] != expected:
            raise ValidationError(
                f"{path}: header must be {','.join(expected)}, "
                f"got {','.join(header)}"
            )
        for line, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(expected):
                raise ValidationError(
                    f"{path}:{line}: expected {len(expected)} fields, got {len(row)}"
                )
            try:
                values = [parse_rational(cell.strip()) for cell in row]
            except ValidationError as exc:
                raise ValidationError(f"{path}:{line}: {exc}")
            blocks = []
            cursor = 0
            for arity in gate.arities:
                blocks.append(tuple(values[cursor : cursor + arity]))
                cursor += arity
            output = tuple(values[cursor:])
            for i, block in enumerate(blocks):
                if sum(block) != 1:
                    raise ValidationError(
                        f"{path}:{line}: block {i + 1} coordinates must sum to 1"
                    )
                if any(c < 0 for c in block):
                    raise ValidationError(
                        f"{path}:{line}: block {i + 1} has a negative coordinate"
                    )
            records.append(ExperimentRecord(point=tuple(blocks), output=output))
    return records


def sorted_signs(vectors: Iterable[Sequence[int]]) -> list[tuple[int, ...]]:
    """Deterministic listing order for sets of sign vectors."""
    return sorted((tuple(v) for v in vectors), key=enumeration_key)
