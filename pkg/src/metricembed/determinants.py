"""Cayley-Menger and Schoenberg determinant engines.

Two independent determinant routes over the same distance data:

* ``cm_*``: the bordered Cayley-Menger determinant ``D_k`` of a
  (k+1)-point tuple, whose sign pattern characterizes Euclidean
  realizability and whose magnitude encodes squared simplex volume.
* ``sch_*``: the determinant of the base-point quadratic form with
  entries ``tau_ij = d^2(x0,xi) + d^2(x0,xj) - d^2(xi,xj)``.

The two agree as ``Sch = (-1)^(k+1) D_k`` for arbitrary symmetric
zero-diagonal data; the test suite verifies that identity by brute force
rather than assuming it, and the embeddability module keeps both routes
alive as mutual cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import MinorModeTooLargeError, NotSymmetricError, TupleTooShortError
from .metric import FiniteMetricSpace, submatrix

#: Relative tolerance for calling a determinant zero. The zero band for a
#: determinant of an order-m matrix with largest |entry| a is
#: ``tol_det * max(1, a)**m`` (determinants scale like entry^order, so an
#: absolute threshold would be meaningless).
DEFAULT_TOL_DET = 1e-8

#: all-minors PSD checking is exponential in the order; hard refusal above.
MINOR_MODE_MAX_ORDER = 20


def zero_band(matrix: np.ndarray, tol_det: float = DEFAULT_TOL_DET) -> float:
    """Width of the "counts as zero" band for ``det(matrix)``."""
    m = matrix.shape[0]
    if m == 0:
        return tol_det
    a = float(np.max(np.abs(matrix)))
    return tol_det * max(1.0, a) ** m


@dataclass(frozen=True)
class CMValue:
    """A Cayley-Menger determinant with its embeddability-signed variant."""

    k: int
    value: float

    @property
    def signed_value(self) -> float:
        """``(-1)^(k+1) * value``; >= 0 on Euclidean-realizable tuples."""
        return float((-1.0) ** (self.k + 1) * self.value)


@dataclass(frozen=True)
class TauMatrix:
    """Matrix of the base-point quadratic form for a tuple with base x0."""

    base: int
    entries: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=float)
        e.flags.writeable = False
        object.__setattr__(self, "entries", e)


def bordered_matrix(dm: np.ndarray) -> np.ndarray:
    """(k+2)x(k+2) bordered matrix of squared distances for a (k+1)-tuple."""
    dm = np.asarray(dm, dtype=float)
    n = dm.shape[0] + 1
    b = np.ones((n, n))
    b[0, 0] = 0.0
    b[1:, 1:] = dm * dm
    return b


def cm_value(dm: np.ndarray) -> CMValue:
    """Cayley-Menger determinant of a (k+1)x(k+1) distance matrix."""
    dm = np.asarray(dm, dtype=float)
    if dm.shape[0] < 2:
        raise TupleTooShortError("Cayley-Menger determinant needs at least 2 points")
    k = dm.shape[0] - 1
    return CMValue(k=k, value=float(np.linalg.det(bordered_matrix(dm))))


def cm_determinant(space: FiniteMetricSpace, t: Sequence[int]) -> CMValue:
    """``D_k`` for a tuple of k+1 point indices (repeats allowed)."""
    if len(t) < 2:
        raise TupleTooShortError(f"tuple of {len(t)} points; need >= 2")
    return cm_value(submatrix(space, t))


def simplex_volume_sq(space: FiniteMetricSpace, t: Sequence[int]) -> float:
    """Squared k-simplex volume ``(-1)^(k+1) D_k / (2^k (k!)^2)``.

    Returned raw (possibly negative): a negative value is the caller's
    signal that the distance data is not Euclidean-realizable.
    """
    cm = cm_determinant(space, t)
    k = cm.k
    return cm.signed_value / (2.0**k * float(math.factorial(k)) ** 2)


def tau_from_matrix(dm: np.ndarray) -> np.ndarray:
    """tau matrix (k x k) of a (k+1)x(k+1) distance matrix, base = row 0."""
    dm = np.asarray(dm, dtype=float)
    if dm.shape[0] < 2:
        raise TupleTooShortError("tau matrix needs at least 2 points")
    sq = dm * dm
    s0 = sq[0, 1:]
    return s0[:, None] + s0[None, :] - sq[1:, 1:]


def tau_matrix(space: FiniteMetricSpace, t: Sequence[int]) -> TauMatrix:
    """tau matrix for a tuple whose first entry is the base point."""
    if len(t) < 2:
        raise TupleTooShortError(f"tuple of {len(t)} points; need >= 2")
    return TauMatrix(base=int(t[0]), entries=tau_from_matrix(submatrix(space, t)))


def sch_value(dm: np.ndarray) -> float:
    """Schoenberg determinant det(tau) of a (k+1)x(k+1) distance matrix."""
    tau = tau_from_matrix(dm)
    return float(np.linalg.det(tau))


def sch_determinant(space: FiniteMetricSpace, t: Sequence[int]) -> float:
    """``Sch(x_0, ..., x_k)`` with ``t[0]`` as the base point."""
    if len(t) < 2:
        raise TupleTooShortError(f"tuple of {len(t)} points; need >= 2")
    return sch_value(submatrix(space, t))


@dataclass(frozen=True)
class PsdReport:
    """Outcome of a positive-semidefiniteness check."""

    psd: bool
    rank: int
    mode: str
    #: violating principal-minor index subset (all-minors mode) or None
    witness_subset: tuple[int, ...] | None = None
    #: value of the violating minor / the most negative eigenvalue
    witness_value: float | None = None


def psd_check(
    m: np.ndarray,
    mode: str | None = None,
    tol: float = 1e-9,
) -> PsdReport:
    """Decide positive semidefiniteness and rank of a symmetric matrix.

    ``mode="all-minors"`` checks every principal minor (the classical
    criterion; exhaustive, refused above order 20), ``mode="spectral"``
    checks the smallest eigenvalue against ``-tol * ||m||``. Default is
    all-minors up to order 8, spectral above. Rank is always counted
    spectrally: eigenvalues above ``tol * ||m||``.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSymmetricError(f"matrix must be square, got shape {m.shape}")
    n = m.shape[0]
    if n == 0:
        return PsdReport(psd=True, rank=0, mode=mode or "spectral")
    scale = float(np.max(np.abs(m)))
    if float(np.max(np.abs(m - m.T))) > tol * max(1.0, scale):
        raise NotSymmetricError("matrix is not symmetric")
    if mode is None:
        mode = "all-minors" if n <= 8 else "spectral"
    if mode not in ("all-minors", "spectral"):
        raise ValueError(f"unknown psd mode {mode!r}")

    eigs = np.linalg.eigvalsh((m + m.T) / 2.0)
    norm = float(np.max(np.abs(eigs))) if n else 0.0
    rank = int(np.sum(eigs > tol * max(norm, 1e-300)))

    if mode == "spectral":
        lam_min = float(eigs[0])
        psd = lam_min >= -tol * norm
        return PsdReport(psd=psd, rank=rank, mode=mode, witness_value=None if psd else lam_min)

    if n > MINOR_MODE_MAX_ORDER:
        raise MinorModeTooLargeError(f"all-minors mode refused for order {n} > {MINOR_MODE_MAX_ORDER}")
    for size in range(1, n + 1):
        band = tol * max(1.0, scale) ** size
        for subset in combinations(range(n), size):
            ix = np.asarray(subset)
            minor = float(np.linalg.det(m[np.ix_(ix, ix)]))
            if minor < -band:
                return PsdReport(psd=False, rank=rank, mode=mode, witness_subset=subset, witness_value=minor)
    return PsdReport(psd=True, rank=rank, mode=mode)
