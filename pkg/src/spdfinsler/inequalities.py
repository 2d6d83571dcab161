"""Oriented-gap checkers for every implemented norm and distance inequality.

Each checker recomputes its inequality from raw inputs and returns an
InequalityReport whose gap is oriented so that nonnegative means satisfied,
matching the inequality exactly as conventionally printed.  p-range gates
are hard errors: a checker never silently coerces an out-of-range order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .matcore import HermitianMatrix, SpdMatrix, as_matrix, commutator_defect, mat_exp
from .schatten import MajorizationVerdict, Spectrum, majorizes, schatten_norm
from .geodesic import (
    SPHERE_TOL,
    delta_p,
    delta_p_to_identity,
    gamma_commute,
    geometric_mean,
    log_euclidean_dist,
    on_unit_sphere,
)

__all__ = [
    "InequalityReport",
    "CheckerRangeError",
    "UnprovenRangeError",
    "check_clarkson_mccarthy",
    "check_two_uniform_convexity_norm",
    "check_distance_lower_bound",
    "check_conde_2uc",
    "check_sphere_2uc",
    "check_p_convexity_high",
    "check_sphere_high",
    "check_p_convexity_low",
    "check_sphere_low",
    "check_log_majorization_lemma",
    "check_hanner_matrix",
]

# A report is satisfied when gap >= -REPORT_RTOL * max(1, |lhs|, |rhs|).
REPORT_RTOL = 1e-9

HANNER_PROVEN_UPPER = 4.0 / 3.0
HANNER_EXTRA_POINT = 1.5


class CheckerRangeError(ValueError):
    """The requested Schatten order is outside the checker's valid range."""


class UnprovenRangeError(CheckerRangeError):
    """The matrix Hanner inequality is unproven at the requested order."""


@dataclass(frozen=True)
class InequalityReport:
    """One evaluated inequality instance with an oriented gap.

    ``gap`` is (greater side) - (lesser side) in the inequality's
    conventional orientation, so ``gap >= 0`` means satisfied;
    ``satisfied`` allows the slack ``REPORT_RTOL * max(1, |lhs|, |rhs|)``.
    ``lhs`` and ``rhs`` are the two sides as conventionally printed.
    """

    name: str
    p: float
    lhs: float
    rhs: float
    gap: float
    satisfied: bool
    diagnostics: dict[str, float] = field(default_factory=dict)


def _report(name: str, p: float, lhs: float, rhs: float, gap: float,
            diagnostics: dict[str, float] | None = None) -> InequalityReport:
    satisfied = gap >= -REPORT_RTOL * max(1.0, abs(lhs), abs(rhs))
    return InequalityReport(
        name=name,
        p=float(p),
        lhs=float(lhs),
        rhs=float(rhs),
        gap=float(gap),
        satisfied=bool(satisfied),
        diagnostics=dict(diagnostics or {}),
    )


def _gate(p, low: float, high: float, name: str,
          low_open: bool = False, high_open: bool = False) -> float:
    p = float(p)
    if math.isnan(p):
        raise CheckerRangeError(f"{name}: p must be a number")
    below = p <= low if low_open else p < low
    above = p >= high if high_open else p > high
    if below or above:
        lo = "(" if low_open else "["
        hi = ")" if high_open else "]"
        raise CheckerRangeError(f"{name}: p = {p} outside valid range {lo}{low}, {high}{hi}")
    return p


def check_clarkson_mccarthy(X, Y, p) -> tuple[InequalityReport, InequalityReport]:
    """Both Clarkson-McCarthy bounds on ||X+Y||_p^p + ||X-Y||_p^p.

    For p >= 2 the sum is bounded below by 2(||X||^p + ||Y||^p) and above
    by 2^{p-1}(||X||^p + ||Y||^p); both bounds reverse for 1 <= p <= 2.
    Returns (lower_report, upper_report).
    """
    p = _gate(p, 1.0, math.inf, "clarkson_mccarthy", high_open=True)
    Xa, Ya = as_matrix(X), as_matrix(Y)
    if Xa.shape != Ya.shape:
        raise ValueError(f"dimension mismatch: {Xa.shape} vs {Ya.shape}")
    combined = schatten_norm(Xa + Ya, p) ** p + schatten_norm(Xa - Ya, p) ** p
    separate = schatten_norm(Xa, p) ** p + schatten_norm(Ya, p) ** p
    diagnostics = {"combined_power_sum": combined, "separate_power_sum": separate}
    if p >= 2.0:
        lower = _report("clarkson_mccarthy_lower_p_ge_2", p,
                        2.0 * separate, combined, combined - 2.0 * separate, diagnostics)
        upper = _report("clarkson_mccarthy_upper_p_ge_2", p,
                        combined, 2.0 ** (p - 1.0) * separate,
                        2.0 ** (p - 1.0) * separate - combined, diagnostics)
    else:
        lower = _report("clarkson_mccarthy_lower_p_le_2", p,
                        2.0 * separate, combined, 2.0 * separate - combined, diagnostics)
        upper = _report("clarkson_mccarthy_upper_p_le_2", p,
                        combined, 2.0 ** (p - 1.0) * separate,
                        combined - 2.0 ** (p - 1.0) * separate, diagnostics)
    return lower, upper


def check_two_uniform_convexity_norm(X, Y, p) -> InequalityReport:
    """2-uniform convexity at the norm level, 1 < p <= 2:

    (||X+Y||_p^2 + ||X-Y||_p^2) / 2  >=  ||X||_p^2 + (p-1) ||Y||_p^2.
    """
    p = _gate(p, 1.0, 2.0, "two_uniform_convexity", low_open=True)
    Xa, Ya = as_matrix(X), as_matrix(Y)
    if Xa.shape != Ya.shape:
        raise ValueError(f"dimension mismatch: {Xa.shape} vs {Ya.shape}")
    norm_plus = schatten_norm(Xa + Ya, p)
    norm_minus = schatten_norm(Xa - Ya, p)
    norm_x = schatten_norm(Xa, p)
    norm_y = schatten_norm(Ya, p)
    lhs = 0.5 * (norm_plus**2 + norm_minus**2)
    rhs = norm_x**2 + (p - 1.0) * norm_y**2
    return _report("two_uniform_convexity", p, lhs, rhs, lhs - rhs,
                   {"norm_plus": norm_plus, "norm_minus": norm_minus,
                    "norm_x": norm_x, "norm_y": norm_y})


def check_distance_lower_bound(A: SpdMatrix, B: SpdMatrix, p) -> InequalityReport:
    """delta_p(A, B) >= ||log A - log B||_p, equality iff [A, B] = 0."""
    lhs = delta_p(A, B, p)
    rhs = log_euclidean_dist(A, B, p)
    return _report("distance_lower_bound", float(p), lhs, rhs, lhs - rhs,
                   {"commutator_defect": commutator_defect(A, B)})


def _gamma_diagnostics(A: SpdMatrix, B: SpdMatrix, C: SpdMatrix) -> dict[str, float]:
    report = gamma_commute(A, B, C)
    return {
        "gamma_defect_product": report.defect_product,
        "gamma_defect_bracket": report.defect_bracket,
    }


def check_conde_2uc(A: SpdMatrix, B: SpdMatrix, C: SpdMatrix, p) -> InequalityReport:
    """2-uniform convexity of delta_p, 1 < p <= 2:

    (delta_p(A,C)^2 + delta_p(B,C)^2) / 2
        >=  delta_p(A#B, C)^2 + (p-1)/4 * delta_p(A,B)^2.

    Equality only at p = 2 with a commuting pair; strict unless the triple
    Gamma-commutes.
    """
    p = _gate(p, 1.0, 2.0, "conde_2uc", low_open=True)
    mid = geometric_mean(A, B)
    d_ac = delta_p(A, C, p)
    d_bc = delta_p(B, C, p)
    d_ab = delta_p(A, B, p)
    d_mid = delta_p(mid, C, p)
    lhs = 0.5 * (d_ac**2 + d_bc**2)
    rhs = d_mid**2 + (p - 1.0) / 4.0 * d_ab**2
    diagnostics = _gamma_diagnostics(A, B, C)
    diagnostics.update({"d_ac": d_ac, "d_bc": d_bc, "d_ab": d_ab, "d_mid": d_mid})
    return _report("conde_2uc", p, lhs, rhs, lhs - rhs, diagnostics)


def _require_on_sphere(U: SpdMatrix, p: float, name: str, label: str) -> None:
    if not on_unit_sphere(U, p, SPHERE_TOL):
        raise ValueError(
            f"{name}: {label} is off the exponential unit sphere by more than {SPHERE_TOL:.0e} "
            f"(delta_p to identity = {delta_p_to_identity(U, p):.12g})"
        )


def check_sphere_2uc(A: SpdMatrix, B: SpdMatrix, p) -> InequalityReport:
    """Unit-sphere form of 2-uniform convexity, 1 < p <= 2:

    1 - delta_p(A#B, I)  >=  (p-1)/8 * delta_p(A,B)^2    for A, B on the sphere.
    """
    p = _gate(p, 1.0, 2.0, "sphere_2uc", low_open=True)
    _require_on_sphere(A, p, "sphere_2uc", "A")
    _require_on_sphere(B, p, "sphere_2uc", "B")
    d_mid = delta_p_to_identity(geometric_mean(A, B), p)
    d_ab = delta_p(A, B, p)
    lhs = 1.0 - d_mid
    rhs = (p - 1.0) / 8.0 * d_ab**2
    return _report("sphere_2uc", p, lhs, rhs, lhs - rhs,
                   {"d_mid_identity": d_mid, "d_ab": d_ab})


def check_p_convexity_high(A: SpdMatrix, B: SpdMatrix, C: SpdMatrix, p) -> InequalityReport:
    """p-uniform convexity of delta_p for p >= 2:

    (delta_p(A,C)^p + delta_p(B,C)^p) / 2
        >=  2^{-p} delta_p(A,B)^p + delta_p(A#B, C)^p.
    """
    p = _gate(p, 2.0, math.inf, "p_convexity_high", high_open=True)
    mid = geometric_mean(A, B)
    d_ac = delta_p(A, C, p)
    d_bc = delta_p(B, C, p)
    d_ab = delta_p(A, B, p)
    d_mid = delta_p(mid, C, p)
    lhs = 0.5 * (d_ac**p + d_bc**p)
    rhs = 2.0 ** (-p) * d_ab**p + d_mid**p
    diagnostics = _gamma_diagnostics(A, B, C)
    diagnostics.update({"d_ac": d_ac, "d_bc": d_bc, "d_ab": d_ab, "d_mid": d_mid})
    return _report("p_convexity_high", p, lhs, rhs, lhs - rhs, diagnostics)


def check_sphere_high(A: SpdMatrix, B: SpdMatrix, p) -> InequalityReport:
    """Unit-sphere form for p >= 2:

    1 - delta_p(A#B, I)^p  >=  2^{-p} delta_p(A,B)^p    for A, B on the sphere.
    """
    p = _gate(p, 2.0, math.inf, "sphere_high", high_open=True)
    _require_on_sphere(A, p, "sphere_high", "A")
    _require_on_sphere(B, p, "sphere_high", "B")
    d_mid = delta_p_to_identity(geometric_mean(A, B), p)
    d_ab = delta_p(A, B, p)
    lhs = 1.0 - d_mid**p
    rhs = 2.0 ** (-p) * d_ab**p
    return _report("sphere_high", p, lhs, rhs, lhs - rhs,
                   {"d_mid_identity": d_mid, "d_ab": d_ab})


def check_p_convexity_low(A: SpdMatrix, B: SpdMatrix, C: SpdMatrix, p) -> InequalityReport:
    """p-uniform convexity of delta_p for 1 < p <= 2:

    delta_p(A,C)^p + delta_p(B,C)^p
        >=  delta_p(A,B)^p / 2 + 2^{p-1} delta_p(A#B, C)^p.
    """
    p = _gate(p, 1.0, 2.0, "p_convexity_low", low_open=True)
    mid = geometric_mean(A, B)
    d_ac = delta_p(A, C, p)
    d_bc = delta_p(B, C, p)
    d_ab = delta_p(A, B, p)
    d_mid = delta_p(mid, C, p)
    lhs = d_ac**p + d_bc**p
    rhs = 0.5 * d_ab**p + 2.0 ** (p - 1.0) * d_mid**p
    diagnostics = _gamma_diagnostics(A, B, C)
    diagnostics.update({"d_ac": d_ac, "d_bc": d_bc, "d_ab": d_ab, "d_mid": d_mid})
    return _report("p_convexity_low", p, lhs, rhs, lhs - rhs, diagnostics)


def check_sphere_low(A: SpdMatrix, B: SpdMatrix, p) -> InequalityReport:
    """Unit-sphere form for 1 < p <= 2:

    1 - 2^{p-2} delta_p(A#B, I)^p  >=  delta_p(A,B)^p / 4   on the sphere.
    """
    p = _gate(p, 1.0, 2.0, "sphere_low", low_open=True)
    _require_on_sphere(A, p, "sphere_low", "A")
    _require_on_sphere(B, p, "sphere_low", "B")
    d_mid = delta_p_to_identity(geometric_mean(A, B), p)
    d_ab = delta_p(A, B, p)
    lhs = 1.0 - 2.0 ** (p - 2.0) * d_mid**p
    rhs = 0.25 * d_ab**p
    return _report("sphere_low", p, lhs, rhs, lhs - rhs,
                   {"d_mid_identity": d_mid, "d_ab": d_ab})


def check_log_majorization_lemma(H: HermitianMatrix, K: HermitianMatrix) -> MajorizationVerdict:
    """Majorization of eigenvalue vectors:

    lambda(H + K)  ≺  lambda(log(e^{K/2} e^H e^{K/2})).

    Both sides share their total sum (the trace), so the verdict's final
    slack entry is the trace difference and must vanish; the verdict is
    tight everywhere exactly when H and K commute.
    """
    Ha = as_matrix(H)
    Ka = as_matrix(K)
    if Ha.shape != Ka.shape:
        raise ValueError(f"dimension mismatch: {Ha.shape} vs {Ka.shape}")
    Ha = 0.5 * (Ha + Ha.conj().T)
    Ka = 0.5 * (Ka + Ka.conj().T)
    sum_spectrum = Spectrum(np.linalg.eigvalsh(Ha + Ka))
    # lambda(e^{K/2} e^H e^{K/2}) = sigma(e^{H/2} e^{K/2})^2; the half-factor
    # product halves the condition-number amplification of the formed matrix.
    half_product = (
        mat_exp(HermitianMatrix(0.5 * Ha)).array @ mat_exp(HermitianMatrix(0.5 * Ka)).array
    )
    sing = np.linalg.svd(half_product, compute_uv=False)
    if sing[-1] <= 0.0:
        raise ValueError("exponential product lost rank numerically")
    bch_spectrum = Spectrum(2.0 * np.log(sing))
    return majorizes(sum_spectrum, bch_spectrum)


def check_hanner_matrix(X, Y, p) -> InequalityReport:
    """Matrix Hanner inequality on its proven range p in [1, 4/3] or p = 3/2:

    ||X+Y||_p^p + ||X-Y||_p^p
        >=  (||X||_p + ||Y||_p)^p + | ||X||_p - ||Y||_p |^p.
    """
    p = float(p)
    in_proven = 1.0 <= p <= HANNER_PROVEN_UPPER
    at_extra = abs(p - HANNER_EXTRA_POINT) <= 1e-12
    if not (in_proven or at_extra):
        raise UnprovenRangeError(
            f"hanner_matrix: unproven-range: p = {p} outside [1, 4/3] and p != 3/2"
        )
    Xa, Ya = as_matrix(X), as_matrix(Y)
    if Xa.shape != Ya.shape:
        raise ValueError(f"dimension mismatch: {Xa.shape} vs {Ya.shape}")
    norm_x = schatten_norm(Xa, p)
    norm_y = schatten_norm(Ya, p)
    lhs = schatten_norm(Xa + Ya, p) ** p + schatten_norm(Xa - Ya, p) ** p
    rhs = (norm_x + norm_y) ** p + abs(norm_x - norm_y) ** p
    return _report("hanner_matrix", p, lhs, rhs, lhs - rhs,
                   {"norm_x": norm_x, "norm_y": norm_y})
