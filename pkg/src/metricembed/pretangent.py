"""The infinitesimal layer: rescaled limits at a marked point.

Point sequences converging to a marked point ``p``, rescaled by a
normalizing sequence ``r_m -> 0``, induce a pseudometric on families of
sequences (``mutual_stability`` / ``pseudometric_matrix``) whose metric
identification (``metric_identification``) is a rescaled-limit space at
``p``. Whether every such limit space embeds in E^n is equivalent to
sign/vanishing conditions on two normalized determinant functionals:

* ``theta``: the signed Cayley-Menger determinant of a (k+1)-tuple divided
  by ``delta^(2k)``, where ``delta`` is the largest distance to ``p``;
* ``s_functional``: the Schoenberg determinant with the same normalization.

``liminf_scan`` estimates the liminf/limsup of those functionals over
tuples shrinking toward ``p`` on a geometric scale ladder;
``transfer_check`` aggregates the scans for a target dimension, and
``blumenthal_sequence_scan`` tests the sequence-wise conditions for the
existence of a limit space of exact dimension n.

Scans sample; they can refute (persistent violation) or support, never
prove. All scans are deterministic for a fixed seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Any, Callable, Sequence

import numpy as np

from .determinants import DEFAULT_TOL_DET, bordered_matrix, tau_from_matrix
from .errors import (
    ArityMismatchError,
    DegenerateNormalizerError,
    DimensionOutOfRangeError,
    EmptySampleError,
    MergeInconsistencyError,
    NonconvergentSequenceError,
    NonpositiveExponentError,
    SamplerScaleMismatchError,
    TupleTooShortError,
    UnstableInputError,
)
from .metric import FiniteMetricSpace, validate_metric
from .spaces import MarkedSpace

#: Stability window: verdicts are read off the last half of the depth;
#: instability needs oscillation above 10x the tolerance that also
#: persists over the last quarter.
STABILITY_WINDOW = 0.5
INSTABILITY_FACTOR = 10.0

#: Scan verdict thresholds. Sign conditions support when the running
#: liminf stays above -SIGN_TOL and refute when every tail rung's infimum
#: sits below -REFUTE_LEVEL. Vanishing conditions support either at the
#: numerical noise floor (10 * tol_det) or through a fitted decay with
#: exponent above DECAY_EXPONENT_MIN and a tail magnitude down by
#: DECAY_DROP; they refute when tail magnitudes stay above REFUTE_LEVEL
#: with no decay trend.
SIGN_TOL = 1e-6
REFUTE_LEVEL = 1e-3
DECAY_EXPONENT_MIN = 0.5
FLAT_EXPONENT_MAX = 0.1
DECAY_DROP = 0.1


# ---------------------------------------------------------------------------
# Normalizing and point sequences


@dataclass(frozen=True)
class NormalizingSequence:
    """Positive reals strictly decreasing to zero, indexed from 0."""

    fn: Callable[[int], float]
    label: str = "custom"

    @classmethod
    def geometric(cls, r0: float = 0.5, q: float = 0.5) -> "NormalizingSequence":
        if not (r0 > 0 and 0 < q < 1):
            raise ValueError("need r0 > 0 and 0 < q < 1")
        return cls(fn=lambda m: r0 * q**m, label=f"geometric(r0={r0}, q={q})")

    def __call__(self, m: int) -> float:
        r = float(self.fn(m))
        if not (r > 0) or not math.isfinite(r) or r < 1e-300:
            raise DegenerateNormalizerError(f"r_{m} = {r!r} degenerate")
        return r

    def values(self, depth: int) -> np.ndarray:
        vals = np.array([self(m) for m in range(depth)])
        if np.any(np.diff(vals) >= 0):
            m = int(np.argmax(np.diff(vals) >= 0))
            raise ValueError(f"normalizing sequence not strictly decreasing at m={m}")
        return vals


PointSequence = Callable[[int], Any]


def constant_sequence(point) -> PointSequence:
    return lambda m: point


def marked_family(space: MarkedSpace, *seqs: PointSequence) -> tuple[PointSequence, ...]:
    """Family with the constant-p sequence structurally at index 0."""
    return (constant_sequence(space.p),) + tuple(seqs)


# ---------------------------------------------------------------------------
# Scales and functionals


def delta_scale(space: MarkedSpace, t: Sequence) -> float:
    """Largest distance from the tuple's points to the marked point."""
    if len(t) == 0:
        raise ValueError("delta_scale needs a nonempty tuple")
    return float(max(space.metric(x, space.p) for x in t))


def epsilon_scale(space: MarkedSpace, t: Sequence, s: float) -> float:
    """s-norm of the distances to p; within a factor n^(1/s) of delta."""
    if not s > 0:
        raise NonpositiveExponentError(f"exponent must be > 0, got {s}")
    if len(t) == 0:
        raise ValueError("epsilon_scale needs a nonempty tuple")
    d = np.array([space.metric(x, space.p) for x in t])
    return float(np.sum(d**s) ** (1.0 / s))


@dataclass(frozen=True)
class HomogeneousFunctional:
    """Continuous functional on distance matrices, homogeneous of positive
    degree: f(lam * m) = lam**degree * f(m)."""

    name: str
    arity: int
    degree: float
    evaluator: Callable[[np.ndarray], float]


def cm_functional(k: int) -> HomogeneousFunctional:
    """Signed Cayley-Menger determinant of a (k+1)-point distance matrix."""
    if k < 1:
        raise TupleTooShortError("cm functional needs k >= 1")
    sign = (-1.0) ** (k + 1)

    def evaluate(dm: np.ndarray) -> float:
        return float(sign * np.linalg.det(bordered_matrix(dm)))

    return HomogeneousFunctional(name=f"signed_cm_{k}", arity=k + 1, degree=2 * k, evaluator=evaluate)


def sch_functional(k: int) -> HomogeneousFunctional:
    """Schoenberg determinant of a (k+1)-point distance matrix (base = 0)."""
    if k < 1:
        raise TupleTooShortError("sch functional needs k >= 1")

    def evaluate(dm: np.ndarray) -> float:
        return float(np.linalg.det(tau_from_matrix(dm)))

    return HomogeneousFunctional(name=f"sch_{k}", arity=k + 1, degree=2 * k, evaluator=evaluate)


def ultra_triangle_functional() -> HomogeneousFunctional:
    """max(t13, t32) - t12: nonnegative exactly on ultrametric triples."""

    def evaluate(dm: np.ndarray) -> float:
        return float(max(dm[0, 2], dm[2, 1]) - dm[0, 1])

    return HomogeneousFunctional(name="ultra_triangle", arity=3, degree=1, evaluator=evaluate)


def star_transform(f: HomogeneousFunctional, space: MarkedSpace, t: Sequence) -> float:
    """f evaluated on the delta-normalized distance matrix; 0 at the all-p
    tuple. Normalized entries are bounded by 2 via the triangle inequality."""
    if len(t) != f.arity:
        raise ArityMismatchError(f"functional {f.name} has arity {f.arity}, tuple has {len(t)}")
    delta = delta_scale(space, t)
    if delta == 0.0:
        return 0.0
    return float(f.evaluator(space.matrix(t) / delta))


def theta(space: MarkedSpace, t: Sequence) -> float:
    """Normalized signed Cayley-Menger functional of a (k+1)-tuple."""
    if len(t) < 2:
        raise TupleTooShortError(f"theta needs >= 2 points, got {len(t)}")
    return star_transform(cm_functional(len(t) - 1), space, t)


def s_functional(space: MarkedSpace, t: Sequence) -> float:
    """Normalized Schoenberg functional of a (k+1)-tuple."""
    if len(t) < 2:
        raise TupleTooShortError(f"s_functional needs >= 2 points, got {len(t)}")
    return star_transform(sch_functional(len(t) - 1), space, t)


# ---------------------------------------------------------------------------
# Mutual stability and metric identification


@dataclass(frozen=True)
class StabilityVerdict:
    """Convergence verdict for rescaled distances of a sequence pair."""

    status: str  # "stable" | "unstable" | "undetermined"
    limit: float | None
    depth_used: int
    oscillation: float

    @property
    def is_stable(self) -> bool:
        return self.status == "stable"


def mutual_stability(
    space: MarkedSpace,
    x: PointSequence,
    y: PointSequence,
    r: NormalizingSequence,
    depth: int = 64,
    tol: float = 1e-3,
) -> StabilityVerdict:
    """Judge convergence of d(x_m, y_m) / r_m over a tail window.

    Stable when the tail oscillation (max - min over the last half) stays
    within ``tol``. Unstable needs the oscillation to exceed 10x ``tol``
    *persistently*: the last-quarter window must also exceed it without
    shrinking below half of the last-half amplitude (slowly convergent
    ratios shrink on deeper windows, genuine oscillation does not).
    Everything else is undetermined.

    Depth is limited by double precision: points at index m must stay
    resolvable against p (with q = 0.5 and p away from the origin, prefer
    depth <= 40 or a slower normalizer).
    """
    if depth < 16:
        raise ValueError(f"depth must be >= 16, got {depth}")
    rv = r.values(depth)
    ratios = np.array([space.metric(x(m), y(m)) for m in range(depth)]) / rv
    half = ratios[int(depth * STABILITY_WINDOW):]
    quarter = ratios[int(depth * 0.75):]
    osc_half = float(np.max(half) - np.min(half))
    osc_quarter = float(np.max(quarter) - np.min(quarter))
    if osc_half <= tol:
        return StabilityVerdict("stable", float(np.mean(half)), depth, osc_half)
    persistent = osc_quarter > INSTABILITY_FACTOR * tol and osc_quarter >= 0.5 * osc_half
    if osc_half > INSTABILITY_FACTOR * tol and persistent:
        return StabilityVerdict("unstable", None, depth, osc_half)
    return StabilityVerdict("undetermined", None, depth, osc_half)


@dataclass(frozen=True)
class PseudometricMatrix:
    """Pairwise stability verdicts for a family of sequences (p-first)."""

    verdicts: tuple[tuple[StabilityVerdict, ...], ...]

    @property
    def all_stable(self) -> bool:
        return all(v.is_stable for row in self.verdicts for v in row)

    @property
    def limits(self) -> np.ndarray:
        if not self.all_stable:
            raise UnstableInputError("pseudometric matrix has non-stable entries")
        return np.array([[v.limit for v in row] for row in self.verdicts])


def pseudometric_matrix(
    space: MarkedSpace,
    family: Sequence[PointSequence],
    r: NormalizingSequence,
    depth: int = 64,
    tol: float = 1e-3,
) -> PseudometricMatrix:
    """Pairwise mutual-stability verdicts; family[0] is the constant-p
    sequence by convention."""
    if not family:
        raise ValueError("family must be nonempty")
    n = len(family)
    grid: list[list[StabilityVerdict]] = [[None] * n for _ in range(n)]  # type: ignore[list-item]
    for i in range(n):
        grid[i][i] = StabilityVerdict("stable", 0.0, depth, 0.0)
        for j in range(i + 1, n):
            v = mutual_stability(space, family[i], family[j], r, depth, tol)
            grid[i][j] = grid[j][i] = v
    return PseudometricMatrix(tuple(tuple(row) for row in grid))


@dataclass(frozen=True)
class QuotientSpace:
    """Metric identification: zero-distance classes and the quotient metric."""

    classes: tuple[tuple[int, ...], ...]
    rho: FiniteMetricSpace


def metric_identification(pm: PseudometricMatrix, merge_tol: float = 1e-9) -> QuotientSpace:
    """Quotient a stable pseudometric matrix by its near-zero relation.

    Classes are connected components of { (i,j) : limit <= merge_tol };
    a component whose internal distance exceeds 10x merge_tol means a
    near-zero chain linked genuinely distant points and raises
    MergeInconsistencyError. Representative distances are validated as a
    finite metric space.
    """
    limits = pm.limits  # raises UnstableInputError when not all stable
    n = limits.shape[0]
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(n):
        for j in range(i + 1, n):
            if limits[i, j] <= merge_tol:
                parent[find(i)] = find(j)

    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    classes = tuple(tuple(sorted(g)) for g in sorted(groups.values(), key=lambda g: g[0]))

    for cls in classes:
        for a, b in combinations(cls, 2):
            if limits[a, b] > INSTABILITY_FACTOR * merge_tol:
                raise MergeInconsistencyError(
                    f"indices {a} and {b} merged through a near-zero chain but sit at {limits[a, b]!r}"
                )

    reps = [cls[0] for cls in classes]
    rho = limits[np.ix_(reps, reps)].copy()
    rho = (rho + rho.T) / 2.0
    np.fill_diagonal(rho, 0.0)
    max_osc = max(v.oscillation for row in pm.verdicts for v in row)
    vtol = max(3.0 * max_osc, merge_tol, 1e-12 * float(np.max(rho)) if rho.size else 0.0)
    labels = ["{" + ",".join(str(i) for i in cls) + "}" for cls in classes]
    space = validate_metric({"labels": labels, "distances": rho.tolist()}, tol=vtol)
    return QuotientSpace(classes=classes, rho=space)


# ---------------------------------------------------------------------------
# Sampled scanners


def scale_ladder(r0: float = 0.5, q: float = 0.5, rungs: int = 12) -> list[float]:
    """Geometric scale ladder r0 * q^j, j = 0..rungs-1."""
    if not (r0 > 0 and 0 < q < 1 and rungs >= 1):
        raise ValueError("need r0 > 0, 0 < q < 1, rungs >= 1")
    return [r0 * q**j for j in range(rungs)]


@dataclass(frozen=True)
class ScanWitness:
    """Extreme sample seen by a scan: rung, value and the tuple itself."""

    rung: int
    scale: float
    value: float
    points: tuple


@dataclass(frozen=True)
class ScanReport:
    """Per-scale infima/suprema of a normalized functional near p."""

    k: int
    mode: str  # "theta" | "s"
    condition: str  # "sign" | "vanishing"
    scales: tuple[float, ...]
    per_scale_inf: tuple[float, ...]
    per_scale_sup: tuple[float, ...]
    running_liminf: float
    running_limsup: float
    trend: float
    verdict: str  # "supports" | "refutes" | "inconclusive"
    samples_per_scale: int
    seed: int
    tol_det: float
    witness_inf: ScanWitness | None = None
    witness_sup: ScanWitness | None = None

    def to_json_dict(self, point_repr=lambda x: x) -> dict:
        def wit(w: ScanWitness | None):
            if w is None:
                return None
            return {"rung": w.rung, "scale": w.scale, "value": w.value,
                    "points": [point_repr(x) for x in w.points]}

        return {
            "k": self.k,
            "mode": self.mode,
            "condition": self.condition,
            "scales": list(self.scales),
            "per_scale_inf": list(self.per_scale_inf),
            "per_scale_sup": list(self.per_scale_sup),
            "running_liminf": self.running_liminf,
            "running_limsup": self.running_limsup,
            "trend": self.trend if math.isfinite(self.trend) else "inf",
            "verdict": self.verdict,
            "samples_per_scale": self.samples_per_scale,
            "seed": self.seed,
            "tol_det": self.tol_det,
            "witness_inf": wit(self.witness_inf),
            "witness_sup": wit(self.witness_sup),
        }


def _fit_trend(scales: np.ndarray, magnitudes: np.ndarray, floor: float) -> float:
    """Power-law exponent of magnitude vs scale, ignoring the noise floor.

    Returns +inf when fewer than two rungs rise above the floor (the
    signal decayed straight into numerical zero)."""
    usable = magnitudes > floor
    if int(np.sum(usable)) < 2:
        return math.inf
    slope, _ = np.polyfit(np.log(scales[usable]), np.log(magnitudes[usable]), 1)
    return float(slope)


def liminf_scan(
    space: MarkedSpace,
    k: int,
    sampler=None,
    scales: Sequence[float] | None = None,
    samples_per_scale: int = 128,
    mode: str = "theta",
    condition: str = "sign",
    seed: int = 0,
    tol_det: float = DEFAULT_TOL_DET,
) -> ScanReport:
    """Estimate liminf/limsup of Theta_{k+1} or S_{k+1} as tuples shrink to p.

    Per rung of a decreasing scale ladder, the sampler draws (k+1)-tuples
    with delta in [scale/2, scale] (an all-p tuple contributes 0); the
    report records per-scale infima/suprema, the tail-window liminf and
    limsup, and a fitted decay exponent. Sample shapes reuse the same
    seeds across rungs, which pins the trend fit down to the geometry
    instead of sampling noise. The verdict judges ``condition``:

    * "sign": liminf >= 0 expected. Supports when the tail liminf stays
      above -1e-6; refutes when every tail rung's infimum is below -1e-3.
    * "vanishing": limit = 0 expected. Supports at the noise floor
      (everything within 10*tol_det) or with decay exponent > 0.5 and a
      10x tail drop; refutes when tail magnitudes exceed 1e-3 with a flat
      trend (exponent <= 0.1).
    """
    if k < 1:
        raise TupleTooShortError(f"scan needs k >= 1, got {k}")
    if condition not in ("sign", "vanishing"):
        raise ValueError(f"unknown condition {condition!r}")
    if mode not in ("theta", "s"):
        raise ValueError(f"unknown mode {mode!r}")
    if sampler is None:
        sampler = space.sampler
    if scales is None:
        scales = scale_ladder()
    scales = [float(s) for s in scales]
    if len(scales) < 2 or any(b >= a for a, b in zip(scales, scales[1:])) or scales[-1] <= 0:
        raise ValueError("scales must be strictly decreasing positive values")
    if samples_per_scale < 1:
        raise EmptySampleError("samples_per_scale must be >= 1")
    functional = theta if mode == "theta" else s_functional

    inf_list: list[float] = []
    sup_list: list[float] = []
    witness_inf: ScanWitness | None = None
    witness_sup: ScanWitness | None = None
    for j, s in enumerate(scales):
        values = np.empty(samples_per_scale)
        tuples: list[tuple] = []
        for i in range(samples_per_scale):
            t = sampler(s, k, np.random.SeedSequence(entropy=seed, spawn_key=(i,)))
            delta = delta_scale(space, t)
            if delta > 0 and not (s / 4 <= delta <= 2 * s):
                raise SamplerScaleMismatchError(
                    f"sampler delta {delta!r} off requested scale {s!r} by more than 2x"
                )
            values[i] = functional(space, t)
            tuples.append(t)
        lo, hi = int(np.argmin(values)), int(np.argmax(values))
        inf_list.append(float(values[lo]))
        sup_list.append(float(values[hi]))
        if witness_inf is None or values[lo] < witness_inf.value:
            witness_inf = ScanWitness(j, s, float(values[lo]), tuples[lo])
        if witness_sup is None or values[hi] > witness_sup.value:
            witness_sup = ScanWitness(j, s, float(values[hi]), tuples[hi])

    infs = np.array(inf_list)
    sups = np.array(sup_list)
    tail = slice(len(scales) // 2, None)
    running_liminf = float(np.min(infs[tail]))
    running_limsup = float(np.max(sups[tail]))
    magnitudes = np.maximum(np.abs(infs), np.abs(sups))
    floor = INSTABILITY_FACTOR * tol_det
    trend = _fit_trend(np.array(scales), magnitudes, floor)

    if condition == "sign":
        if running_liminf >= -SIGN_TOL:
            verdict = "supports"
        elif float(np.max(infs[tail])) <= -REFUTE_LEVEL:
            verdict = "refutes"
        else:
            verdict = "inconclusive"
    else:
        at_floor = bool(np.all(magnitudes <= floor))
        decays = (
            math.isinf(trend)
            or (trend > DECAY_EXPONENT_MIN and magnitudes[-1] <= DECAY_DROP * float(np.max(magnitudes)))
        )
        if at_floor or decays:
            verdict = "supports"
        elif float(np.min(magnitudes[tail])) >= REFUTE_LEVEL and trend <= FLAT_EXPONENT_MAX:
            verdict = "refutes"
        else:
            verdict = "inconclusive"

    return ScanReport(
        k=k,
        mode=mode,
        condition=condition,
        scales=tuple(scales),
        per_scale_inf=tuple(inf_list),
        per_scale_sup=tuple(sup_list),
        running_liminf=running_liminf,
        running_limsup=running_limsup,
        trend=trend,
        verdict=verdict,
        samples_per_scale=samples_per_scale,
        seed=seed,
        tol_det=tol_det,
        witness_inf=witness_inf,
        witness_sup=witness_sup,
    )


@dataclass(frozen=True)
class TransferReport:
    """Aggregate of the scans behind the transfer-principle conditions."""

    n: int
    verdict: str  # "consistent-with-embeddable" | "refuted" | "inconclusive"
    scans: tuple[ScanReport, ...]
    witness_scan: int | None = None

    def to_json_dict(self, point_repr=lambda x: x) -> dict:
        return {
            "n": self.n,
            "verdict": self.verdict,
            "witness_scan": self.witness_scan,
            "scans": [s.to_json_dict(point_repr) for s in self.scans],
        }


def transfer_check(
    space: MarkedSpace,
    n: int,
    sampler=None,
    budget: int | None = None,
    scales: Sequence[float] | None = None,
    seed: int = 0,
    tol_det: float = DEFAULT_TOL_DET,
    modes: Sequence[str] = ("theta", "s"),
) -> TransferReport:
    """Scan the embeddability conditions for all rescaled limit spaces at p.

    Runs sign scans for k = 1..n and vanishing scans for k = n+1, n+2, in
    both functional modes (the two determinant engines cross-check each
    other). Refuted as soon as any scan refutes; consistent only when all
    scans support. The equality conditions are checked two-sided (liminf
    and limsup both pinned to 0) in both modes.
    """
    if n < 1:
        raise DimensionOutOfRangeError(f"target dimension must be >= 1, got {n}")
    if scales is None:
        scales = scale_ladder()
    jobs = [(k, "sign") for k in range(1, n + 1)] + [(k, "vanishing") for k in (n + 1, n + 2)]
    n_scans = len(jobs) * len(modes)
    if budget is None:
        samples = 128
    else:
        samples = max(8, budget // (n_scans * len(scales)))

    scans: list[ScanReport] = []
    witness: int | None = None
    verdict = "consistent-with-embeddable"
    for mode in modes:
        for k, condition in jobs:
            report = liminf_scan(
                space, k, sampler=sampler, scales=scales, samples_per_scale=samples,
                mode=mode, condition=condition, seed=seed, tol_det=tol_det,
            )
            scans.append(report)
            if report.verdict == "refutes" and witness is None:
                witness = len(scans) - 1
                verdict = "refuted"
            elif report.verdict == "inconclusive" and verdict != "refuted":
                verdict = "inconclusive"
    return TransferReport(n=n, verdict=verdict, scans=tuple(scans), witness_scan=witness)


# ---------------------------------------------------------------------------
# Sequence-wise conditions (exact-dimension witnesses)


def build_probe_battery(space: MarkedSpace, r: NormalizingSequence) -> list[PointSequence]:
    """Default probe sequences for cube-like Euclidean regions: one per
    axis, a diagonal, and a super-slow probe with d(y_m, p)/r_m -> inf."""
    desc = space.description
    region = desc.get("region") or {}
    if desc.get("type") not in ("euclidean", "snowflake") or region.get("kind") != "cube":
        raise ValueError("default probe battery needs a cube-region space; pass probes explicitly")
    p = np.asarray(space.p, dtype=float)
    low = np.asarray(region["low"], dtype=float)
    high = np.asarray(region["high"], dtype=float)
    dim = p.shape[0]

    def clipped(vector_of_m: Callable[[int], np.ndarray]) -> PointSequence:
        return lambda m: np.clip(p + vector_of_m(m), low, high)

    battery: list[PointSequence] = []
    for axis in range(dim):
        e = np.zeros(dim)
        e[axis] = 1.0
        battery.append(clipped(lambda m, e=e: r(m) * e))
    diag = np.ones(dim) / math.sqrt(dim)
    battery.append(clipped(lambda m: r(m) * diag))
    e0 = np.zeros(dim)
    e0[0] = 1.0
    battery.append(clipped(lambda m: math.sqrt(r(m)) * e0))
    return battery


@dataclass(frozen=True)
class BlumenthalReport:
    """Tail values of the sequence-wise conditions for exact dimension n."""

    n: int
    depth: int
    #: per k = 1..n: (k, tail min, tail max) of Theta_{k+1} over the x-sequences
    condition_i: tuple[tuple[int, float, float], ...]
    #: per probe evaluation: (order, probe label, tail min |Theta|, tail max |Theta|)
    condition_ii: tuple[tuple[int, str, float, float], ...]
    verdict: str  # "supports" | "refutes" | "inconclusive"
    tangent_assumed: bool = True

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "depth": self.depth,
            "condition_i": [list(x) for x in self.condition_i],
            "condition_ii": [list(x) for x in self.condition_ii],
            "verdict": self.verdict,
            "tangent_assumed": self.tangent_assumed,
        }


def blumenthal_sequence_scan(
    space: MarkedSpace,
    x_seqs: Sequence[PointSequence],
    probes: Sequence[tuple[PointSequence, PointSequence]] | None = None,
    r: NormalizingSequence | None = None,
    depth: int = 64,
    tol_det: float = DEFAULT_TOL_DET,
    pos_tol: float = 1e-9,
    tangent_assumed: bool = True,
) -> BlumenthalReport:
    """Test n+1 point sequences as witnesses of a limit space of exact
    dimension n.

    Condition (i): for k = 1..n the tail of Theta_{k+1} over the first
    k+1 sequences must stay strictly positive. Condition (ii): appending
    one probe (order n+1) or a probe pair (order n+2) must drive the
    functional to zero. Probes default to the axis/diagonal/super-slow
    battery on cube regions. Sequences must converge to p
    (NonconvergentSequenceError otherwise); the tangency hypothesis of
    the forward direction is recorded as a flag, never verified.
    """
    n = len(x_seqs) - 1
    if n < 1:
        raise DimensionOutOfRangeError("need at least two sequences (n >= 1)")
    if depth < 16:
        raise ValueError(f"depth must be >= 16, got {depth}")
    if r is None:
        r = NormalizingSequence.geometric()

    for idx, seq in enumerate(x_seqs):
        dists = np.array([space.metric(seq(m), space.p) for m in range(depth)])
        top = float(np.max(dists))
        if top > 0 and float(np.max(dists[int(depth * 0.75):])) > 0.05 * top:
            raise NonconvergentSequenceError(f"sequence {idx} does not converge to p")

    tail = range(depth // 2, depth)
    cond_i: list[tuple[int, float, float]] = []
    for k in range(1, n + 1):
        vals = [theta(space, tuple(x_seqs[i](m) for i in range(k + 1))) for m in tail]
        cond_i.append((k, float(np.min(vals)), float(np.max(vals))))

    if probes is None:
        battery = build_probe_battery(space, r)
        probes = list(combinations(battery, 2))
        probe_names = {id(seq): f"probe{i}" for i, seq in enumerate(battery)}
    else:
        probe_names = {}
        for pair in probes:
            for seq in pair:
                probe_names.setdefault(id(seq), f"probe{len(probe_names)}")

    singles: list[PointSequence] = []
    for pair in probes:
        for seq in pair:
            if all(seq is not s for s in singles):
                singles.append(seq)

    band = INSTABILITY_FACTOR * tol_det
    cond_ii: list[tuple[int, str, float, float]] = []
    for seq in singles:
        vals = [abs(theta(space, tuple(x(m) for x in x_seqs) + (seq(m),))) for m in tail]
        cond_ii.append((n + 1, probe_names[id(seq)], float(np.min(vals)), float(np.max(vals))))
    for y, u in probes:
        vals = [abs(theta(space, tuple(x(m) for x in x_seqs) + (y(m), u(m)))) for m in tail]
        label = f"{probe_names[id(y)]}+{probe_names[id(u)]}"
        cond_ii.append((n + 2, label, float(np.min(vals)), float(np.max(vals))))

    i_ok = all(tmin > pos_tol for _, tmin, _ in cond_i)
    ii_ok = all(tmax <= band for _, _, _, tmax in cond_ii)
    if i_ok and ii_ok:
        verdict = "supports"
    elif any(tmax <= pos_tol for _, _, tmax in cond_i) or any(tmin > band for _, _, tmin, _ in cond_ii):
        verdict = "refutes"
    else:
        verdict = "inconclusive"
    return BlumenthalReport(
        n=n,
        depth=depth,
        condition_i=tuple(cond_i),
        condition_ii=tuple(cond_ii),
        verdict=verdict,
        tangent_assumed=tangent_assumed,
    )
