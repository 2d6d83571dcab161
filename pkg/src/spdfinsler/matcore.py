"""Dense Hermitian / SPD matrices and spectral matrix functions.

All types are immutable value objects backed by read-only ``complex128``
numpy arrays, and every operation is pure, so everything here can be shared
freely across threads.  The eigensolver contract is: descending eigenvalues,
and within degenerate clusters a deterministic eigenvector phase fixed by
making each vector's largest-magnitude component real and positive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "HermitianMatrix",
    "SpdMatrix",
    "EigenDecomposition",
    "EigenConvergenceError",
    "MatrixFunctionDomainError",
    "eigh",
    "mat_fn",
    "mat_log",
    "mat_exp",
    "mat_pow",
    "mat_sqrt",
    "mat_inv_sqrt",
    "conjugate",
    "commutator_defect",
    "is_commuting",
    "identity",
]

# Absolute Hermiticity tolerance, relative to the largest entry magnitude.
HERMITICITY_RTOL = 1e-12
# Constructor gate: lambda_min must exceed this fraction of lambda_max.
SPD_EIGENVALUE_FLOOR = 1e-10
# Conjugation rejects X whose 2-norm condition estimate reaches this.
CONDITION_LIMIT = 1e12


class EigenConvergenceError(RuntimeError):
    """The Hermitian eigensolver hit its iteration cap without converging."""


class MatrixFunctionDomainError(ValueError):
    """A scalar function was undefined (non-finite or non-real) at an eigenvalue."""


def as_matrix(value) -> np.ndarray:
    """Entries of a HermitianMatrix / SpdMatrix / array-like as complex128."""
    if isinstance(value, SpdMatrix):
        return value.array
    if isinstance(value, HermitianMatrix):
        return value.array
    arr = np.asarray(value, dtype=np.complex128)
    if arr.ndim != 2:
        raise ValueError(f"expected a matrix, got array of ndim {arr.ndim}")
    return arr


def _symmetrized(arr: np.ndarray) -> np.ndarray:
    sym = 0.5 * (arr + arr.conj().T)
    sym.flags.writeable = False
    return sym


class HermitianMatrix:
    """Dense complex Hermitian matrix, exactly symmetrized at construction.

    Parameters
    ----------
    entries : array-like, shape (dim, dim)
        Square complex matrix.  Must satisfy
        ``entries[i][j] == conj(entries[j][i])`` within an absolute
        tolerance of ``1e-12`` times the largest entry magnitude; the
        stored array is ``(entries + entries^H) / 2``.

    Raises
    ------
    ValueError
        If the input is not square, has dim < 1, or is not Hermitian
        within tolerance.
    """

    __slots__ = ("_array", "_eig")

    def __init__(self, entries):
        arr = np.array(entries, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {arr.shape}")
        if arr.shape[0] < 1:
            raise ValueError("matrix dimension must be at least 1")
        if not np.all(np.isfinite(arr)):
            raise ValueError("matrix entries must be finite")
        scale = float(np.abs(arr).max())
        asym = float(np.abs(arr - arr.conj().T).max())
        if asym > HERMITICITY_RTOL * scale:
            raise ValueError(
                f"input is not Hermitian: max |A - A^H| = {asym:.3e} exceeds "
                f"{HERMITICITY_RTOL:.0e} * max|entry| = {HERMITICITY_RTOL * scale:.3e}"
            )
        self._array = _symmetrized(arr)
        self._eig = None

    @property
    def array(self) -> np.ndarray:
        """Read-only complex128 entries."""
        return self._array

    @property
    def dim(self) -> int:
        return self._array.shape[0]

    def eig(self) -> "EigenDecomposition":
        """Cached eigendecomposition (descending eigenvalues)."""
        if self._eig is None:
            self._eig = _eigh_array(self._array)
        return self._eig

    def frobenius(self) -> float:
        return float(np.linalg.norm(self._array))

    def __add__(self, other):
        if isinstance(other, (HermitianMatrix, SpdMatrix)):
            return HermitianMatrix(self._array + as_matrix(other))
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, (HermitianMatrix, SpdMatrix)):
            return HermitianMatrix(self._array - as_matrix(other))
        return NotImplemented

    def __neg__(self):
        return HermitianMatrix(-self._array)

    def __mul__(self, scalar):
        if isinstance(scalar, (int, float)):
            return HermitianMatrix(self._array * scalar)
        return NotImplemented

    __rmul__ = __mul__

    def __repr__(self):
        return f"HermitianMatrix(dim={self.dim})"


class SpdMatrix:
    """Hermitian matrix verified strictly positive definite at construction.

    The positivity gate requires ``lambda_min > 1e-10 * lambda_max``;
    ill-conditioned inputs are rejected rather than regularized.  The
    eigendecomposition computed for the gate is cached and reused by the
    spectral functions.
    """

    __slots__ = ("_base", "_eigdec")

    def __init__(self, entries):
        base = entries if isinstance(entries, HermitianMatrix) else HermitianMatrix(entries)
        dec = base.eig()
        lam_max = float(dec.eigenvalues[0])
        lam_min = float(dec.eigenvalues[-1])
        if not (lam_max > 0.0 and lam_min > SPD_EIGENVALUE_FLOOR * lam_max):
            raise ValueError(
                f"matrix is not safely positive definite: lambda_min = {lam_min:.6e}, "
                f"lambda_max = {lam_max:.6e} (gate: lambda_min > 1e-10 * lambda_max)"
            )
        self._base = base
        self._eigdec = dec

    @property
    def base(self) -> HermitianMatrix:
        return self._base

    @property
    def array(self) -> np.ndarray:
        return self._base.array

    @property
    def dim(self) -> int:
        return self._base.dim

    def eig(self) -> "EigenDecomposition":
        return self._eigdec

    def frobenius(self) -> float:
        return self._base.frobenius()

    def __repr__(self):
        return f"SpdMatrix(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Spectral factorization H = U diag(eigenvalues) U^H.

    Attributes
    ----------
    eigenvalues : ndarray, shape (dim,)
        Real eigenvalues sorted descending.
    unitary : ndarray, shape (dim, dim)
        Columns are the corresponding eigenvectors; each column's
        largest-magnitude component is real and positive.
    """

    eigenvalues: np.ndarray
    unitary: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]


def _eigh_array(arr: np.ndarray) -> EigenDecomposition:
    try:
        w, v = np.linalg.eigh(arr)
    except np.linalg.LinAlgError as exc:
        raise EigenConvergenceError(
            f"Hermitian eigensolver did not converge within the LAPACK iteration cap "
            f"(30 sweeps per off-diagonal element) on a {arr.shape[0]}x{arr.shape[0]} input"
        ) from exc
    w = np.ascontiguousarray(w[::-1])
    v = np.ascontiguousarray(v[:, ::-1])
    # Deterministic phase: make each column's largest-|.| component real positive.
    pivot_rows = np.argmax(np.abs(v), axis=0)
    pivots = v[pivot_rows, np.arange(v.shape[1])]
    mags = np.abs(pivots)
    phases = np.where(mags > 0, pivots / np.where(mags > 0, mags, 1.0), 1.0)
    v = v * phases.conj()
    w.flags.writeable = False
    v.flags.writeable = False
    return EigenDecomposition(eigenvalues=w, unitary=v)


def eigh(H) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, descending and phase-fixed.

    Accepts a HermitianMatrix, SpdMatrix, or Hermitian array-like.
    Deterministic for identical input bits.

    Raises
    ------
    EigenConvergenceError
        If the underlying solver fails to converge.
    """
    if isinstance(H, SpdMatrix):
        return H.eig()
    if isinstance(H, HermitianMatrix):
        return H.eig()
    return HermitianMatrix(H).eig()


def _assemble(dec: EigenDecomposition, values: np.ndarray) -> np.ndarray:
    return (dec.unitary * values) @ dec.unitary.conj().T


def mat_fn(A, f) -> HermitianMatrix:
    """Apply a scalar real function to a Hermitian/SPD matrix spectrally.

    Returns ``U diag(f(lambda_i)) U^H``.  The callable should accept a 1-D
    float array; plain scalar callables are applied elementwise.

    Raises
    ------
    MatrixFunctionDomainError
        If ``f`` is undefined (raises, or yields a non-finite or non-real
        value) at any eigenvalue.
    """
    dec = eigh(A)
    eigs = dec.eigenvalues
    with np.errstate(all="ignore"):
        try:
            vals = np.asarray(f(eigs))
            if vals.shape != eigs.shape:
                raise TypeError
        except (TypeError, ValueError):
            try:
                vals = np.asarray([f(float(x)) for x in eigs])
            except (ValueError, ZeroDivisionError, OverflowError) as exc:
                raise MatrixFunctionDomainError(
                    f"scalar function undefined on spectrum {eigs}: {exc}"
                ) from exc
    if np.iscomplexobj(vals):
        if np.abs(vals.imag).max() > 0.0:
            raise MatrixFunctionDomainError(
                f"scalar function produced non-real values on spectrum {eigs}"
            )
        vals = vals.real
    vals = vals.astype(np.float64)
    if not np.all(np.isfinite(vals)):
        bad = eigs[~np.isfinite(vals)]
        raise MatrixFunctionDomainError(
            f"scalar function undefined (non-finite) at eigenvalue(s) {bad}"
        )
    return HermitianMatrix(_assemble(dec, vals))


def mat_log(A) -> HermitianMatrix:
    """Matrix logarithm of a positive-definite matrix."""
    return mat_fn(A, np.log)


def mat_exp(H) -> SpdMatrix:
    """Matrix exponential of a Hermitian matrix; always SPD."""
    return SpdMatrix(mat_fn(H, np.exp))


def mat_pow(A, t: float) -> SpdMatrix:
    """Real matrix power A^t of an SPD matrix."""
    t = float(t)
    return SpdMatrix(mat_fn(A, lambda x: x**t))


def mat_sqrt(A) -> SpdMatrix:
    """Principal square root of an SPD matrix."""
    return mat_pow(A, 0.5)


def mat_inv_sqrt(A) -> SpdMatrix:
    """Inverse principal square root of an SPD matrix."""
    return mat_pow(A, -0.5)


def conjugate(X, A) -> SpdMatrix:
    """Congruence X A X^H of an SPD matrix by an invertible X.

    Parameters
    ----------
    X : array-like, shape (dim, dim)
        Square matrix with 2-norm condition estimate below 1e12.
    A : SpdMatrix

    Raises
    ------
    ValueError
        If X is singular or too ill-conditioned, or dimensions mismatch.
    """
    Xa = as_matrix(X)
    Aa = as_matrix(A)
    if Xa.shape != Aa.shape:
        raise ValueError(f"dimension mismatch: X is {Xa.shape}, A is {Aa.shape}")
    cond = np.linalg.cond(Xa)
    if not np.isfinite(cond) or cond >= CONDITION_LIMIT:
        raise ValueError(
            f"conjugating matrix is singular or ill-conditioned (cond estimate {cond:.3e})"
        )
    product = Xa @ Aa @ Xa.conj().T
    return SpdMatrix(0.5 * (product + product.conj().T))


def commutator_defect(A, B) -> float:
    """Frobenius norm of the commutator AB - BA.

    Zero exactly when A and B commute; symmetric in its arguments.
    """
    Aa = as_matrix(A)
    Ba = as_matrix(B)
    if Aa.shape != Ba.shape:
        raise ValueError(f"dimension mismatch: {Aa.shape} vs {Ba.shape}")
    return float(np.linalg.norm(Aa @ Ba - Ba @ Aa))


def is_commuting(A, B, tol: float | None = None) -> bool:
    """Whether ||AB - BA||_F <= tol, defaulting tol to 1e-9 ||A||_F ||B||_F."""
    Aa = as_matrix(A)
    Ba = as_matrix(B)
    if tol is None:
        tol = 1e-9 * float(np.linalg.norm(Aa)) * float(np.linalg.norm(Ba))
    return commutator_defect(Aa, Ba) <= tol


def identity(dim: int) -> SpdMatrix:
    """The dim x dim identity as an SpdMatrix."""
    return SpdMatrix(np.eye(dim, dtype=np.complex128))
