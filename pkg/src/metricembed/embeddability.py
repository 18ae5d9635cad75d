"""Isometric embeddability of finite metric spaces into E^n.

Three decision routes over the same space:

* ``menger_check``: sign conditions ``(-1)^(k+1) D_k >= 0`` for all
  (k+1)-tuples with k <= n, plus ``D_k = 0`` for k = n+1, n+2. Subsets of
  at most n+3 points suffice, so enumeration stops there.
* ``schoenberg_check``: the same tuple ranges with ``Sch >= 0`` / ``= 0``,
  evaluated for every choice of base point within each subset.
* ``blumenthal_basis_search``: hunts for n+1 points with strictly positive
  signed determinants at every prefix order, then verifies that adding any
  one or two further points keeps the order n+1 / n+2 determinants at zero.
  Success pins the minimal embedding dimension to exactly n.

``min_embedding_dimension`` and ``realize_coordinates`` use the base-point
quadratic form: PSD rank gives the dimension, spectral factorization of
tau/2 gives coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .determinants import (
    DEFAULT_TOL_DET,
    PsdReport,
    psd_check,
    tau_from_matrix,
)
from .errors import (
    DimensionOutOfRangeError,
    NotEmbeddableError,
    RankExceedsRequestedError,
)
from .metric import FiniteMetricSpace

#: Exhaustive subset enumeration above this point count switches to seeded
#: random sampling (verdicts then carry exhaustive=False).
MAX_EXHAUSTIVE_POINTS = 24
DEFAULT_SAMPLE_BUDGET = 5000


@dataclass(frozen=True)
class Witness:
    """A tuple of point indices violating (or grazing) a criterion."""

    indices: tuple[int, ...]
    k: int
    value: float
    #: "sign" for the k <= n conditions, "vanishing" for orders n+1 / n+2
    kind: str
    base: int | None = None


@dataclass(frozen=True)
class EmbedVerdict:
    """Outcome of an embeddability check against a target dimension."""

    embeddable: str  # "yes" | "no" | "undetermined"
    dim_tested: int
    criterion: str
    witness: Witness | None = None
    exhaustive: bool = True
    borderline_count: int = 0
    tol_det: float = DEFAULT_TOL_DET

    def to_json_dict(self) -> dict:
        kind = None
        if self.witness:
            kind = self.witness.kind
            if kind == "vanishing":
                kind = f"vanishing(order {self.witness.k})"
            else:
                kind = f"sign(k={self.witness.k})"
        return {
            "criterion": self.criterion,
            "n": self.dim_tested,
            "verdict": self.embeddable,
            "witness_tuple": list(self.witness.indices) if self.witness else None,
            "witness_value": self.witness.value if self.witness else None,
            "witness_kind": kind,
            "exhaustive": self.exhaustive,
            "borderline_count": self.borderline_count,
            "residual": None,
        }


@dataclass(frozen=True)
class Realization:
    """Coordinates realizing a space in R^m, with the worst distance error."""

    coords: np.ndarray
    m: int
    max_residual: float

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=float)
        c.flags.writeable = False
        object.__setattr__(self, "coords", c)


@dataclass(frozen=True)
class MinDimResult:
    """Minimal embedding dimension, or infeasibility with a PSD witness."""

    feasible: bool
    dim: int | None
    psd: PsdReport
    base: int
    verified: EmbedVerdict | None = None


def _subsets(n_points: int, size: int, seed: int, budget: int) -> tuple[np.ndarray, bool]:
    """Index arrays of distinct-point subsets; sampled when too many."""
    total = math.comb(n_points, size)
    if n_points <= MAX_EXHAUSTIVE_POINTS or total <= budget:
        return np.array(list(combinations(range(n_points), size)), dtype=int), True
    rng = np.random.default_rng(np.random.SeedSequence([seed, size]))
    combos = np.array([rng.choice(n_points, size=size, replace=False) for _ in range(budget)])
    return combos, False


def _cm_batch(sq: np.ndarray, combos: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Signed CM determinants and zero bands for a stack of index tuples."""
    sub = sq[combos[:, :, None], combos[:, None, :]]
    c, s = combos.shape
    b = np.ones((c, s + 1, s + 1))
    b[:, 0, 0] = 0.0
    b[:, 1:, 1:] = sub
    dets = np.linalg.det(b)
    k = s - 1
    signed = (-1.0) ** (k + 1) * dets
    max_entry = np.maximum(1.0, sub.reshape(c, -1).max(axis=1))
    return signed, max_entry ** (s + 1)


def _sch_batch(sq: np.ndarray, combos: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sch determinants for every base choice within each index tuple.

    Returns (values, band_scale, tuples) where tuples[i] is the rolled
    index tuple whose first entry is the base. The zero band mirrors the
    Cayley-Menger one: the two determinants carry the same magnitude, and
    sharing the band keeps the two criteria's tolerance semantics aligned.
    """
    c, s = combos.shape
    rolled = np.concatenate([np.roll(combos, -r, axis=1) for r in range(s)], axis=0)
    sub = sq[rolled[:, :, None], rolled[:, None, :]]
    s0 = sub[:, 0, 1:]
    tau = s0[:, :, None] + s0[:, None, :] - sub[:, 1:, 1:]
    dets = np.linalg.det(tau)
    max_entry = np.maximum(1.0, sub.reshape(sub.shape[0], -1).max(axis=1))
    return dets, max_entry ** (s + 1), rolled


def _scan_criterion(
    space: FiniteMetricSpace,
    n: int,
    engine: str,
    tol_det: float,
    seed: int,
    sample_budget: int,
) -> EmbedVerdict:
    if n < 1:
        raise DimensionOutOfRangeError(f"target dimension must be >= 1, got {n}")
    npts = space.n_points
    sq = space.dist * space.dist
    exhaustive = True
    borderline = 0
    worst_borderline: Witness | None = None

    def evaluate(size: int):
        nonlocal exhaustive
        combos, exact = _subsets(npts, size, seed, sample_budget)
        exhaustive = exhaustive and exact
        if combos.size == 0:
            return None
        if engine == "menger":
            signed, scale = _cm_batch(sq, combos)
            return signed, tol_det * scale, combos
        values, scale, rolled = _sch_batch(sq, combos)
        return values, tol_det * scale, rolled

    # Sign conditions for k = 1 .. n (tuple sizes 2 .. n+1).
    for size in range(2, min(n + 1, npts) + 1):
        out = evaluate(size)
        if out is None:
            continue
        values, bands, tuples = out
        hard = values < -bands
        if np.any(hard):
            i = int(np.argmax(hard))
            w = Witness(tuple(int(x) for x in tuples[i]), size - 1, float(values[i]), "sign",
                        base=int(tuples[i][0]) if engine == "schoenberg" else None)
            return EmbedVerdict("no", n, engine, w, exhaustive, borderline, tol_det)
        soft = values < 0
        if np.any(soft):
            borderline += int(np.sum(soft))
            i = int(np.argmin(values))
            worst_borderline = Witness(tuple(int(x) for x in tuples[i]), size - 1, float(values[i]), "sign",
                                       base=int(tuples[i][0]) if engine == "schoenberg" else None)

    # Vanishing conditions at orders k = n+1 and n+2 (sizes n+2, n+3).
    for size in (n + 2, n + 3):
        if size > npts:
            continue
        out = evaluate(size)
        if out is None:
            continue
        values, bands, tuples = out
        hard = np.abs(values) > bands
        if np.any(hard):
            i = int(np.argmax(hard))
            # report the raw determinant that failed to vanish (the menger
            # engine computes the embeddability-signed variant internally)
            raw = float(values[i] * (-1.0) ** size) if engine == "menger" else float(values[i])
            w = Witness(tuple(int(x) for x in tuples[i]), size - 1, raw, "vanishing",
                        base=int(tuples[i][0]) if engine == "schoenberg" else None)
            return EmbedVerdict("no", n, engine, w, exhaustive, borderline, tol_det)

    if borderline:
        return EmbedVerdict("undetermined", n, engine, worst_borderline, exhaustive, borderline, tol_det)
    return EmbedVerdict("yes", n, engine, None, exhaustive, 0, tol_det)


def menger_check(
    space: FiniteMetricSpace,
    n: int,
    tol_det: float = DEFAULT_TOL_DET,
    seed: int = 0,
    sample_budget: int = DEFAULT_SAMPLE_BUDGET,
) -> EmbedVerdict:
    """Cayley-Menger embeddability test against E^n."""
    return _scan_criterion(space, n, "menger", tol_det, seed, sample_budget)


def schoenberg_check(
    space: FiniteMetricSpace,
    n: int,
    tol_det: float = DEFAULT_TOL_DET,
    seed: int = 0,
    sample_budget: int = DEFAULT_SAMPLE_BUDGET,
) -> EmbedVerdict:
    """Schoenberg-determinant embeddability test against E^n."""
    return _scan_criterion(space, n, "schoenberg", tol_det, seed, sample_budget)


def _stability_base(space: FiniteMetricSpace) -> int:
    """Base point for the quadratic form: minimizes the maximum distance."""
    return int(np.argmin(np.max(space.dist, axis=1)))


def full_tau(space: FiniteMetricSpace, base: int | None = None) -> tuple[np.ndarray, int, list[int]]:
    """tau matrix over all points relative to a base; returns (tau, base, order)."""
    if base is None:
        base = _stability_base(space)
    others = [i for i in range(space.n_points) if i != base]
    order = [base] + others
    ix = np.asarray(order)
    dm = space.dist[np.ix_(ix, ix)]
    return tau_from_matrix(dm), base, order


def min_embedding_dimension(space: FiniteMetricSpace, tol: float = 1e-9) -> MinDimResult:
    """Minimal E^m admitting the space, via PSD rank of the full tau matrix."""
    if space.n_points == 0:
        raise ValueError("empty space")
    if space.n_points == 1:
        return MinDimResult(True, 0, PsdReport(psd=True, rank=0, mode="spectral"), base=0)
    tau, base, _ = full_tau(space)
    report = psd_check(tau, tol=tol)
    if not report.psd:
        return MinDimResult(False, None, report, base)
    m = report.rank
    verified = schoenberg_check(space, max(m, 1))
    if verified.embeddable == "no":
        return MinDimResult(False, None, report, base, verified)
    return MinDimResult(True, m, report, base, verified)


def realize_coordinates(
    space: FiniteMetricSpace,
    n: int,
    tol: float = 1e-9,
    check: EmbedVerdict | None = None,
) -> Realization:
    """Coordinates in R^m (m <= n) reproducing the distance matrix.

    Factors tau/2 spectrally, discarding eigenvalues below ``tol * ||G||``.
    Point 0 ends up at the origin. ``check`` may carry a precomputed
    schoenberg verdict; otherwise one is run (and "no" raises).
    """
    if n < 1:
        raise DimensionOutOfRangeError(f"target dimension must be >= 1, got {n}")
    npts = space.n_points
    if npts == 1:
        return Realization(coords=np.zeros((1, 0)), m=0, max_residual=0.0)
    if check is None:
        check = schoenberg_check(space, n)
    if check.embeddable == "no":
        raise NotEmbeddableError(f"space is not embeddable in E^{n}: witness {check.witness}")

    tau, base, order = full_tau(space)
    gram = tau / 2.0
    eigs, vecs = np.linalg.eigh(gram)
    norm = float(np.max(np.abs(eigs))) if eigs.size else 0.0
    keep = eigs > tol * max(norm, 1e-300)
    m = int(np.sum(keep))
    if m > n:
        raise RankExceedsRequestedError(f"gram rank {m} exceeds requested dimension {n}")
    rest = vecs[:, keep] * np.sqrt(eigs[keep])

    coords = np.zeros((npts, m))
    for row, point in enumerate(order[1:]):
        coords[point] = rest[row]
    coords = coords - coords[0]

    diff = coords[:, None, :] - coords[None, :, :]
    realized = np.sqrt(np.sum(diff * diff, axis=-1))
    residual = float(np.max(np.abs(realized - space.dist)))
    return Realization(coords=coords, m=m, max_residual=residual)


def _signed_cm_of(sq: np.ndarray, idx: Sequence[int]) -> tuple[float, float]:
    """Signed CM determinant and zero band for one index tuple."""
    combos = np.asarray([list(idx)], dtype=int)
    signed, scale = _cm_batch(sq, combos)
    return float(signed[0]), float(scale[0])


def _verify_vanishing(sq: np.ndarray, basis: Sequence[int], npts: int, tol_det: float) -> bool:
    """D at orders n+1 and n+2 must vanish for every extension of the basis."""
    rest = [i for i in range(npts) if i not in set(basis)]
    for y in rest:
        signed, scale = _signed_cm_of(sq, list(basis) + [y])
        if abs(signed) > tol_det * scale:
            return False
    for y, z in combinations(rest, 2):
        signed, scale = _signed_cm_of(sq, list(basis) + [y, z])
        if abs(signed) > tol_det * scale:
            return False
    return True


def blumenthal_basis_search(
    space: FiniteMetricSpace,
    n: int,
    tol_det: float = DEFAULT_TOL_DET,
) -> tuple[int, ...] | None:
    """Search for n+1 points witnessing embeddability with rank exactly n.

    Greedy growth by the largest signed determinant, falling back to
    exhaustive (n+1)-subset enumeration for spaces of at most 16 points.
    Returns None when no basis exists (including when the space has fewer
    than n+1 points, where the required points cannot exist at all).
    """
    if n < 1:
        raise DimensionOutOfRangeError(f"target dimension must be >= 1, got {n}")
    npts = space.n_points
    if npts < n + 1:
        return None
    sq = space.dist * space.dist

    def grow_greedy() -> tuple[int, ...] | None:
        pairs = np.array(list(combinations(range(npts), 2)), dtype=int)
        signed, scale = _cm_batch(sq, pairs)
        best = int(np.argmax(signed))
        if signed[best] <= tol_det * scale[best]:
            return None
        current = [int(pairs[best][0]), int(pairs[best][1])]
        while len(current) < n + 1:
            cands = [i for i in range(npts) if i not in current]
            if not cands:
                return None
            combos = np.array([current + [c] for c in cands], dtype=int)
            signed, scale = _cm_batch(sq, combos)
            best = int(np.argmax(signed))
            if signed[best] <= tol_det * scale[best]:
                return None
            current.append(cands[best])
        return tuple(current)

    basis = grow_greedy()
    if basis is not None and _verify_vanishing(sq, basis, npts, tol_det):
        return basis

    if npts > 16:
        return None
    for combo in combinations(range(npts), n + 1):
        ok = True
        for k in range(1, n + 1):
            signed, scale = _signed_cm_of(sq, combo[: k + 1])
            if signed <= tol_det * scale:
                ok = False
                break
        if ok and _verify_vanishing(sq, combo, npts, tol_det):
            return combo
    return None
