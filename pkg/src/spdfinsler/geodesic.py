"""Geodesics, weighted geometric means, and the Schatten-p distance delta_p.

The unique geodesic from A to B is ``gamma(t) = A^{1/2} M^t A^{1/2}`` with
``M = A^{-1/2} B A^{-1/2}``, giving distance
``delta_p(A, B) = ||log M||_p``.  When A and B commute this reduces to
``gamma(t) = A^{1-t} B^t`` and ``delta_p = ||log A - log B||_p``; in general
``delta_p >= ||log A - log B||_p``, strictly for noncommuting pairs and p > 1.

Note the inner sandwich uses B itself, not B^{1/2}: only that choice makes
the commuting reduction and the endpoint conditions identities.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .matcore import (
    HermitianMatrix,
    SpdMatrix,
    as_matrix,
    commutator_defect,
    mat_pow,
)
from .schatten import _lp, _validate_p, schatten_norm

__all__ = [
    "GeodesicCurve",
    "GammaCommuteReport",
    "weighted_mean",
    "geometric_mean",
    "delta_p",
    "delta_p_to_identity",
    "log_euclidean_dist",
    "geodesic_speed",
    "arc_length",
    "gamma_commute",
    "on_unit_sphere",
    "project_to_unit_sphere",
]

GAMMA_COMMUTE_TOL = 1e-8
SPHERE_TOL = 1e-8
# Central-difference step for curves without an analytic derivative.
FINITE_DIFF_STEP = 1e-5


def _check_same_dim(A: SpdMatrix, B: SpdMatrix) -> None:
    if A.dim != B.dim:
        raise ValueError(f"dimension mismatch: {A.dim} vs {B.dim}")


def _spectral_array(dec, values: np.ndarray) -> np.ndarray:
    out = (dec.unitary * values) @ dec.unitary.conj().T
    return 0.5 * (out + out.conj().T)


def _inv_sqrt_array(A: SpdMatrix) -> np.ndarray:
    dec = A.eig()
    return _spectral_array(dec, dec.eigenvalues ** -0.5)


def _sqrt_array(A: SpdMatrix) -> np.ndarray:
    dec = A.eig()
    return _spectral_array(dec, dec.eigenvalues**0.5)


def _sandwich_log_eigs(A: SpdMatrix, B: SpdMatrix) -> np.ndarray:
    """log of the eigenvalues of A^{-1/2} B A^{-1/2}, descending."""
    S = _inv_sqrt_array(A)
    M = S @ B.array @ S
    w = np.linalg.eigvalsh(0.5 * (M + M.conj().T))
    if w[0] <= 0.0:
        raise ValueError(
            "congruence sandwich lost positivity numerically; "
            "inputs are too ill-conditioned"
        )
    return np.log(w[::-1])


class GeodesicCurve:
    """The geodesic t -> A^{1/2} (A^{-1/2} B A^{-1/2})^t A^{1/2}.

    Factor matrices are cached eagerly at construction, after which the
    curve is immutable.  ``eval`` accepts any real t; values outside [0, 1]
    extrapolate the geodesic line.
    """

    __slots__ = ("_a", "_b", "_sqrt_a", "_inv_sqrt_a", "_mid_dec")

    def __init__(self, A: SpdMatrix, B: SpdMatrix):
        _check_same_dim(A, B)
        self._a = A
        self._b = B
        self._sqrt_a = _sqrt_array(A)
        self._inv_sqrt_a = _inv_sqrt_array(A)
        M = self._inv_sqrt_a @ B.array @ self._inv_sqrt_a
        self._mid_dec = SpdMatrix(0.5 * (M + M.conj().T)).eig()

    @property
    def endpoint_a(self) -> SpdMatrix:
        return self._a

    @property
    def endpoint_b(self) -> SpdMatrix:
        return self._b

    @property
    def sqrt_a(self) -> HermitianMatrix:
        return HermitianMatrix(self._sqrt_a)

    @property
    def inv_sqrt_a(self) -> HermitianMatrix:
        return HermitianMatrix(self._inv_sqrt_a)

    @property
    def log_m(self) -> HermitianMatrix:
        """log(A^{-1/2} B A^{-1/2}); its p-norm is delta_p(A, B)."""
        return HermitianMatrix(
            _spectral_array(self._mid_dec, np.log(self._mid_dec.eigenvalues))
        )

    def eval(self, t: float) -> SpdMatrix:
        """Point on the geodesic at parameter t (SPD for every real t)."""
        inner = _spectral_array(self._mid_dec, self._mid_dec.eigenvalues ** float(t))
        out = self._sqrt_a @ inner @ self._sqrt_a
        return SpdMatrix(0.5 * (out + out.conj().T))

    __call__ = eval

    def derivative(self, t: float) -> HermitianMatrix:
        """Analytic velocity A^{1/2} M^t log(M) A^{1/2} at parameter t."""
        lam = self._mid_dec.eigenvalues
        inner = _spectral_array(self._mid_dec, lam ** float(t) * np.log(lam))
        out = self._sqrt_a @ inner @ self._sqrt_a
        return HermitianMatrix(0.5 * (out + out.conj().T))


def weighted_mean(A: SpdMatrix, B: SpdMatrix, t: float) -> SpdMatrix:
    """Weighted geometric mean: the geodesic point A #_t B.

    ``t = 0`` gives A and ``t = 1`` gives B; values outside [0, 1]
    extrapolate the geodesic line.
    """
    return GeodesicCurve(A, B).eval(t)


def geometric_mean(A: SpdMatrix, B: SpdMatrix) -> SpdMatrix:
    """Geodesic midpoint A # B, the matrix geometric mean."""
    return weighted_mean(A, B, 0.5)


def delta_p(A: SpdMatrix, B: SpdMatrix, p) -> float:
    """Geodesic distance ||log(A^{-1/2} B A^{-1/2})||_p, p in [1, inf].

    Symmetric in (A, B) and zero exactly when A = B.
    """
    p = _validate_p(p)
    _check_same_dim(A, B)
    return _lp(_sandwich_log_eigs(A, B), p)


def delta_p_to_identity(U: SpdMatrix, p) -> float:
    """delta_p(U, I) = ||log U||_p, via the cached spectrum of U."""
    p = _validate_p(p)
    return _lp(np.log(U.eig().eigenvalues), p)


def log_euclidean_dist(A: SpdMatrix, B: SpdMatrix, p) -> float:
    """The log-Euclidean lower bound ||log(A) - log(B)||_p."""
    p = _validate_p(p)
    _check_same_dim(A, B)
    dec_a, dec_b = A.eig(), B.eig()
    diff = _spectral_array(dec_a, np.log(dec_a.eigenvalues)) - _spectral_array(
        dec_b, np.log(dec_b.eigenvalues)
    )
    return _lp(np.linalg.eigvalsh(diff), p)


def _speed_from_arrays(point: SpdMatrix, velocity: np.ndarray, p: float) -> float:
    S = _inv_sqrt_array(point)
    tangent = S @ velocity @ S
    return schatten_norm(HermitianMatrix(0.5 * (tangent + tangent.conj().T)), p)


def geodesic_speed(curve: GeodesicCurve, t: float, p) -> float:
    """Finsler speed ||gamma^{-1/2} gamma' gamma^{-1/2}||_p at parameter t.

    Constant along a geodesic and equal to delta_p of the endpoints.
    """
    p = _validate_p(p)
    return _speed_from_arrays(curve.eval(t), curve.derivative(t).array, p)


CurveLike = Union[GeodesicCurve, Callable[[float], SpdMatrix]]


def arc_length(curve: CurveLike, p, intervals: int = 64) -> float:
    """Composite-Simpson arc length of a smooth SPD-valued curve on [0, 1].

    GeodesicCurve inputs use the analytic velocity; other callables use
    central differences with step 1e-5 (the curve must evaluate to an SPD
    matrix slightly outside [0, 1]).  A non-SPD evaluation at any grid
    point raises.
    """
    p = _validate_p(p)
    if intervals < 2 or intervals % 2 != 0:
        raise ValueError(f"Simpson rule needs an even interval count >= 2, got {intervals}")

    if isinstance(curve, GeodesicCurve):
        def speed(t: float) -> float:
            return geodesic_speed(curve, t, p)
    else:
        h = FINITE_DIFF_STEP

        def eval_spd(t: float) -> SpdMatrix:
            point = curve(t)
            return point if isinstance(point, SpdMatrix) else SpdMatrix(as_matrix(point))

        def speed(t: float) -> float:
            point = eval_spd(t)
            velocity = (eval_spd(t + h).array - eval_spd(t - h).array) / (2.0 * h)
            return _speed_from_arrays(point, velocity, p)

    step = 1.0 / intervals
    total = speed(0.0) + speed(1.0)
    for k in range(1, intervals):
        total += (4.0 if k % 2 else 2.0) * speed(k * step)
    return total * step / 3.0


@dataclass(frozen=True)
class GammaCommuteReport:
    """Both defect characterizations of simultaneous congruence-commuting.

    ``defect_product`` is ||A B^{-1} C - C B^{-1} A||_F normalized by
    ||A||_F ||B^{-1}||_F ||C||_F;  ``defect_bracket`` is the normalized
    commutator of the two A-sandwiches.  ``holds`` requires both defects
    at or below ``tolerance``.
    """

    defect_product: float
    defect_bracket: float
    holds: bool
    tolerance: float


def gamma_commute(A: SpdMatrix, B: SpdMatrix, C: SpdMatrix,
                  tol: float = GAMMA_COMMUTE_TOL) -> GammaCommuteReport:
    """Test whether A, B, C commute after congruence by a common invertible X.

    Equivalent characterizations: ``A B^{-1} C = C B^{-1} A`` and
    ``[A^{-1/2} B A^{-1/2}, A^{-1/2} C A^{-1/2}] = 0``.  Both normalized
    defects are reported; with ``C = I`` the predicate reduces to ordinary
    commuting of A and B.
    """
    _check_same_dim(A, B)
    _check_same_dim(A, C)
    dec_b = B.eig()
    b_inv = _spectral_array(dec_b, 1.0 / dec_b.eigenvalues)
    product = A.array @ b_inv @ C.array
    defect_product = float(np.linalg.norm(product - product.conj().T)) / (
        float(np.linalg.norm(A.array))
        * float(np.linalg.norm(b_inv))
        * float(np.linalg.norm(C.array))
    )
    S = _inv_sqrt_array(A)
    X = S @ B.array @ S
    Y = S @ C.array @ S
    defect_bracket = commutator_defect(X, Y) / (
        float(np.linalg.norm(X)) * float(np.linalg.norm(Y))
    )
    return GammaCommuteReport(
        defect_product=defect_product,
        defect_bracket=defect_bracket,
        holds=bool(defect_product <= tol and defect_bracket <= tol),
        tolerance=float(tol),
    )


def on_unit_sphere(U: SpdMatrix, p, tol: float = SPHERE_TOL) -> bool:
    """Whether U lies on the exponential unit sphere: |delta_p(U, I) - 1| <= tol."""
    return abs(delta_p_to_identity(U, p) - 1.0) <= tol


def project_to_unit_sphere(A: SpdMatrix, p) -> SpdMatrix:
    """Radially project A != I onto the exponential unit sphere.

    Returns ``A^(1 / ||log A||_p)``, which satisfies the sphere predicate
    up to roundoff.  Raises for A = I, where no direction exists.
    """
    radius = delta_p_to_identity(A, p)
    if radius <= 1e-12:
        raise ValueError("cannot project the identity onto the unit sphere (no direction)")
    return mat_pow(A, 1.0 / radius)
