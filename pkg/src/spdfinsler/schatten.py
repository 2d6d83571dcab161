"""Singular spectra, Schatten p-norms, and (log-)majorization predicates.

Spectra are canonically stored sorted descending, so permutation questions
reduce to elementwise comparisons.  Majorization verdicts carry the full
vector of prefix slacks so callers can distinguish tight and strict prefixes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .matcore import HermitianMatrix, SpdMatrix, eigh

__all__ = [
    "Spectrum",
    "MajorizationVerdict",
    "eigenvalue_spectrum",
    "singular_values",
    "schatten_norm",
    "weak_majorizes",
    "majorizes",
    "weak_log_majorizes",
    "log_majorizes",
    "power_sum",
    "is_permutation_of",
]

_KINDS = ("eigenvalue", "singular")

# Additive tolerance on prefix sums is 1e-10 * (1 + ||b||_1); on summed logs
# it is the bare 1e-10.  Ties at the boundary count as satisfied.
MAJORIZATION_RTOL = 1e-10
LOG_MAJORIZATION_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Real vector sorted descending, tagged eigenvalue or singular.

    Singular spectra must be nonnegative.  Input order is irrelevant; values
    are sorted at construction.
    """

    values: np.ndarray
    kind: str = "eigenvalue"

    def __post_init__(self):
        vals = np.sort(np.asarray(self.values, dtype=np.float64))[::-1].copy()
        if vals.ndim != 1 or vals.size < 1:
            raise ValueError("spectrum must be a nonempty 1-D real vector")
        if not np.all(np.isfinite(vals)):
            raise ValueError("spectrum values must be finite")
        if self.kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}, got {self.kind!r}")
        if self.kind == "singular" and vals[-1] < 0.0:
            raise ValueError("singular spectrum must be nonnegative")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return self.values.size

    def __iter__(self):
        return iter(self.values)


@dataclass(frozen=True, eq=False)
class MajorizationVerdict:
    """Outcome of a (log-)majorization comparison a vs b.

    Attributes
    ----------
    holds : bool
        Full (log-)majorization: every prefix inequality plus final equality.
    weak : bool
        All prefix inequalities hold.
    tight_at_end : bool
        The final prefix comparison is an equality within tolerance.
    first_violation_index : int or None
        0-based index of the first violated prefix, None when weak holds.
    slack : ndarray
        Per-prefix slack, oriented so nonnegative means satisfied; for the
        log variants this lives in summed-log space.  The final entry is the
        total-sum (or total-log) difference b - a.
    """

    holds: bool
    weak: bool
    tight_at_end: bool
    first_violation_index: int | None
    slack: np.ndarray


def _spectrum_values(a, kind: str = "eigenvalue") -> np.ndarray:
    if isinstance(a, Spectrum):
        return a.values
    return Spectrum(np.asarray(a, dtype=np.float64), kind=kind).values


def eigenvalue_spectrum(H) -> Spectrum:
    """Descending eigenvalues of a Hermitian matrix as a Spectrum."""
    return Spectrum(eigh(H).eigenvalues, kind="eigenvalue")


def singular_values(M) -> Spectrum:
    """Descending singular values of any rectangular complex matrix.

    Hermitian/SPD wrapper inputs use their (cached) eigendecomposition:
    the singular values are the sorted absolute eigenvalues.
    """
    if isinstance(M, (HermitianMatrix, SpdMatrix)):
        vals = np.abs(eigh(M).eigenvalues)
    else:
        arr = np.asarray(M, dtype=np.complex128)
        if arr.ndim != 2:
            raise ValueError(f"expected a matrix, got ndim {arr.ndim}")
        vals = np.linalg.svd(arr, compute_uv=False)
    return Spectrum(vals, kind="singular")


def _validate_p(p) -> float:
    p = float(p)
    if math.isnan(p) or p < 1.0:
        raise ValueError(f"Schatten order must satisfy p >= 1 or p = inf, got {p}")
    return p


def _lp(values: np.ndarray, p: float) -> float:
    """l^p norm of a real vector, p in [1, inf]."""
    mags = np.abs(values)
    if math.isinf(p):
        return float(mags.max())
    if p == 1.0:
        return float(mags.sum())
    return float((mags**p).sum() ** (1.0 / p))


def schatten_norm(M, p) -> float:
    """Schatten p-norm: the l^p norm of the singular values.

    ``p = inf`` gives the spectral norm; ``p = 2`` coincides with the
    Frobenius norm.
    """
    p = _validate_p(p)
    return _lp(singular_values(M).values, p)


def _prefix_verdict(a: np.ndarray, b: np.ndarray, tol: float) -> MajorizationVerdict:
    slack = np.cumsum(b) - np.cumsum(a)
    slack.flags.writeable = False
    violated = slack < -tol
    weak = not bool(violated.any())
    first = None if weak else int(np.argmax(violated))
    tight = bool(abs(slack[-1]) <= tol)
    return MajorizationVerdict(
        holds=weak and tight,
        weak=weak,
        tight_at_end=tight,
        first_violation_index=first,
        slack=slack,
    )


def weak_majorizes(a, b) -> MajorizationVerdict:
    """Compare descending prefix sums of a against b (a ≺ b orientation).

    The returned verdict's ``weak`` field answers weak majorization; the
    ``holds`` field answers full majorization (final sums equal).
    Tolerance is ``1e-10 * (1 + ||b||_1)`` per prefix.
    """
    av = _spectrum_values(a)
    bv = _spectrum_values(b)
    if av.size != bv.size:
        raise ValueError(f"length mismatch: {av.size} vs {bv.size}")
    tol = MAJORIZATION_RTOL * (1.0 + float(np.abs(bv).sum()))
    return _prefix_verdict(av, bv, tol)


def majorizes(a, b) -> MajorizationVerdict:
    """Full majorization verdict a ≺ b; read the ``holds`` field."""
    return weak_majorizes(a, b)


def _log_prefix_verdict(a: np.ndarray, b: np.ndarray, tol: float) -> MajorizationVerdict:
    n = a.size
    # Descending nonnegative vectors put zeros in trailing positions, so a
    # prefix product is positive iff it ends before the first zero.
    pos_a = int(np.searchsorted(-a, 0.0))  # count of strictly positive entries
    pos_b = int(np.searchsorted(-b, 0.0))
    log_a = np.cumsum(np.log(a[:pos_a])) if pos_a else np.empty(0)
    log_b = np.cumsum(np.log(b[:pos_b])) if pos_b else np.empty(0)
    slack = np.empty(n)
    for k in range(n):
        a_pos = k < pos_a
        b_pos = k < pos_b
        if a_pos and b_pos:
            slack[k] = log_b[k] - log_a[k]
        elif not a_pos and not b_pos:
            slack[k] = 0.0  # both prefix products are exactly zero
        elif not a_pos:
            slack[k] = np.inf  # 0 <= positive product
        else:
            slack[k] = -np.inf  # positive product vs zero: violated
    slack.flags.writeable = False
    violated = slack < -tol
    weak = not bool(violated.any())
    first = None if weak else int(np.argmax(violated))
    tight = bool(abs(slack[-1]) <= tol)
    return MajorizationVerdict(
        holds=weak and tight,
        weak=weak,
        tight_at_end=tight,
        first_violation_index=first,
        slack=slack,
    )


def weak_log_majorizes(a, b) -> MajorizationVerdict:
    """Prefix-product comparison of nonnegative spectra in log space.

    Entries must be nonnegative (zeros are permitted; being sorted
    descending they are necessarily trailing).  Tolerance is 1e-10 on
    summed logs.
    """
    av = _spectrum_values(a)
    bv = _spectrum_values(b)
    if av.size != bv.size:
        raise ValueError(f"length mismatch: {av.size} vs {bv.size}")
    if av[-1] < 0.0 or bv[-1] < 0.0:
        raise ValueError("log majorization requires nonnegative spectra")
    return _log_prefix_verdict(av, bv, LOG_MAJORIZATION_TOL)


def log_majorizes(a, b) -> MajorizationVerdict:
    """Full log-majorization verdict a ≺_log b; read the ``holds`` field."""
    return weak_log_majorizes(a, b)


def power_sum(a, p) -> float:
    """Sum of |a_i|^p for p > 1 (the strictly convex power family)."""
    p = float(p)
    if not p > 1.0:
        raise ValueError(f"power_sum requires p > 1, got {p}")
    av = _spectrum_values(a)
    return float((np.abs(av) ** p).sum())


def is_permutation_of(a, b, tol: float = 1e-8) -> bool:
    """Whether two spectra agree entrywise within tol.

    Spectra are stored sorted, so agreement of the sorted vectors is
    exactly existence of a permutation matching.
    """
    av = _spectrum_values(a)
    bv = _spectrum_values(b)
    if av.size != bv.size:
        raise ValueError(f"length mismatch: {av.size} vs {bv.size}")
    return bool(np.abs(av - bv).max() <= tol)
