"""Validated positive-semidefinite and density operator wrappers.

Construction eigendecomposes once and caches the spectral data; eigenvalues
inside the PSD noise band are clamped to zero and eigenvalues below the
support threshold are snapped to exact zero.  Support decisions made from the
snapped spectrum are therefore deterministic, and every infinite branch
downstream is decided by ranks rather than by numeric blow-up.
"""

from __future__ import annotations

import numpy as np

from . import matrixcore as mc

TRACE_TOL = 1e-10


class ValidationError(ValueError):
    """An operator failed the validation of its declared class."""


class PositiveOperator:
    """A positive semidefinite operator with cached spectral data."""

    def __init__(self, matrix, *, psd_tol: float = mc.PSD_TOL,
                 supp_tol: float = mc.SUPP_TOL):
        m = mc.as_complex_matrix(matrix)
        if not mc.is_hermitian(m):
            raise ValidationError("operator is not Hermitian within tolerance")
        m = mc.hermitian_part(m)
        evals, vecs = mc.eig_hermitian(m)
        norm2 = float(np.max(np.abs(evals)))
        if evals[0] < -psd_tol * max(norm2, 1e-300):
            raise ValidationError(
                f"operator is not PSD: min eigenvalue {evals[0]:.3e}"
            )
        evals = np.clip(evals, 0.0, None)
        top = float(evals[-1])
        evals[evals <= supp_tol * top] = 0.0
        m.flags.writeable = False
        evals.flags.writeable = False
        vecs.flags.writeable = False
        self._matrix = m
        self._evals = evals
        self._vecs = vecs
        self._clusters = None
        self._support = None

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    @property
    def eigenvalues(self) -> np.ndarray:
        """Ascending eigenvalues, PSD-clamped and support-snapped."""
        return self._evals

    @property
    def eigenvectors(self) -> np.ndarray:
        return self._vecs

    @property
    def trace(self) -> float:
        return float(np.trace(self._matrix).real)

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self._evals > 0.0))

    @property
    def definite(self) -> bool:
        return self.rank == self.dim

    @property
    def clusters(self) -> mc.SpectralDecomposition:
        if self._clusters is None:
            self._clusters = mc.cluster_eigendata(self._evals, self._vecs)
        return self._clusters

    @property
    def support_basis(self) -> np.ndarray:
        """Columns spanning the support (eigenvectors of nonzero eigenvalues)."""
        return self._vecs[:, self._evals > 0.0]

    @property
    def support_projection(self) -> np.ndarray:
        if self._support is None:
            b = self.support_basis
            p = mc.hermitian_part(b @ b.conj().T)
            p.flags.writeable = False
            self._support = p
        return self._support

    def spectral_fn(self, phi) -> np.ndarray:
        """Apply a scalar function over the cached eigensystem."""
        vals = np.array([phi(v) for v in self._evals])
        return mc.hermitian_part((self._vecs * vals) @ self._vecs.conj().T)

    def pseudo_power(self, p: float) -> np.ndarray:
        """Power taken on the support: zero eigenvalues map to zero."""
        vals = np.where(self._evals > 0.0, self._evals, 1.0) ** p
        vals[self._evals == 0.0] = 0.0
        return mc.hermitian_part((self._vecs * vals) @ self._vecs.conj().T)

    def sqrt(self) -> np.ndarray:
        return self.pseudo_power(0.5)

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim}, rank={self.rank})"


class DensityOperator(PositiveOperator):
    """A PSD operator of unit trace."""

    def __init__(self, matrix, *, trace_tol: float = TRACE_TOL, **kwargs):
        super().__init__(matrix, **kwargs)
        if abs(self.trace - 1.0) > trace_tol:
            raise ValidationError(f"trace {self.trace!r} is not 1 within tolerance")


def as_positive(x) -> PositiveOperator:
    return x if isinstance(x, PositiveOperator) else PositiveOperator(x)


def as_density(x) -> DensityOperator:
    if isinstance(x, DensityOperator):
        return x
    if isinstance(x, PositiveOperator):
        return DensityOperator(x.matrix)
    return DensityOperator(x)
