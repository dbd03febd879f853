"""Per-image color PCA: covariance of pixel RGB vectors and projection onto
the principal axes.

The first principal coefficient is the channel with the largest color
variance, which is what the gradient stage of the cascade consumes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, NumericError
from .image import RasterImage, to_grayscale

__all__ = [
    "PcaModel",
    "jacobi_eig",
    "fit_pca",
    "principal_coefficients",
    "reconstruct",
    "project",
    "enhanced_channel",
]

_OFFDIAG_TOL = 1e-12
_MAX_SWEEPS = 100
_SYMMETRY_TOL = 1e-9


def _fix_sign(v: list[float]) -> list[float]:
    mags = [abs(c) for c in v]
    top = max(mags)
    for c, m in zip(v, mags):
        if m >= top - 1e-12 * max(top, 1.0):
            return v if c >= 0 else [-x for x in v]
    return v


def jacobi_eig(a) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decompose a symmetric 3x3 matrix with cyclic Jacobi rotations.

    Returns ``(eigvals, eigvecs)`` with eigenvalues in descending order and
    eigenvectors as the columns of ``eigvecs``. Each vector is signed so
    its largest-magnitude component (first one on ties) is positive.
    """
    m = np.asarray(a, dtype=np.float64)
    if m.shape != (3, 3):
        raise InvalidArgumentError(f"jacobi_eig expects a 3x3 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidArgumentError("jacobi_eig: non-finite entries")
    if np.max(np.abs(m - m.T)) > _SYMMETRY_TOL:
        raise InvalidArgumentError("jacobi_eig: matrix is not symmetric")

    # plain floats: far cheaper than numpy for 3x3 work
    A = [[float(m[i][j] + m[j][i]) / 2.0 for j in range(3)] for i in range(3)]
    V = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]

    for _ in range(_MAX_SWEEPS):
        if max(abs(A[0][1]), abs(A[0][2]), abs(A[1][2])) <= _OFFDIAG_TOL:
            break
        for p, q in ((0, 1), (0, 2), (1, 2)):
            apq = A[p][q]
            if apq == 0.0:
                continue
            app, aqq = A[p][p], A[q][q]
            if abs(apq) < 1e-18 * abs(app) and abs(apq) < 1e-18 * abs(aqq):
                A[p][q] = A[q][p] = 0.0
                continue
            theta = (aqq - app) / (2.0 * apq)
            t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
            c = 1.0 / math.sqrt(t * t + 1.0)
            s = t * c
            A[p][p] = app - t * apq
            A[q][q] = aqq + t * apq
            A[p][q] = A[q][p] = 0.0
            r = 3 - p - q
            arp, arq = A[r][p], A[r][q]
            A[r][p] = A[p][r] = c * arp - s * arq
            A[r][q] = A[q][r] = s * arp + c * arq
            for k in range(3):
                vkp, vkq = V[k][p], V[k][q]
                V[k][p] = c * vkp - s * vkq
                V[k][q] = s * vkp + c * vkq
    else:
        if max(abs(A[0][1]), abs(A[0][2]), abs(A[1][2])) > _OFFDIAG_TOL:
            raise NumericError("jacobi_eig did not converge in 100 sweeps")

    order = sorted(range(3), key=lambda i: -A[i][i])
    vals = np.array([A[i][i] for i in order])
    vecs = np.array([_fix_sign([V[k][i] for k in range(3)]) for i in order]).T
    return vals, vecs


@dataclass(frozen=True, eq=False)
class PcaModel:
    mean: np.ndarray  # (3,)
    cov: np.ndarray  # (3, 3)
    eigvals: np.ndarray  # (3,), descending
    eigvecs: np.ndarray  # (3, 3), columns
    b: int


def _pixels(img) -> np.ndarray:
    data = img.data if isinstance(img, RasterImage) else np.asarray(img, dtype=np.float64)
    if data.ndim != 3 or data.shape[2] != 3:
        raise InvalidArgumentError("PCA needs a 3-channel image")
    return data


def fit_pca(img) -> PcaModel:
    """Fit mean and (1/b)-normalized covariance over all pixels of ``img``."""
    data = _pixels(img)
    g = data.reshape(-1, 3)
    b = g.shape[0]
    if b < 2:
        raise InvalidArgumentError("PCA needs at least two pixels")
    mean = g.sum(axis=0) / b
    phi = g - mean
    cov = (phi.T @ phi) / b
    cov = (cov + cov.T) / 2.0
    vals, vecs = jacobi_eig(cov)
    return PcaModel(mean=mean, cov=cov, eigvals=vals, eigvecs=vecs, b=b)


def _check_k(k: int):
    if not isinstance(k, (int, np.integer)) or not 1 <= k <= 3:
        raise InvalidArgumentError(f"k must be an integer in 1..3, got {k!r}")


def principal_coefficients(img, model: PcaModel, k: int = 1) -> np.ndarray:
    """Coefficients ``Y_k^T (pixel - mean)`` as an ``(H, W, k)`` array."""
    _check_k(k)
    data = _pixels(img)
    return (data - model.mean) @ model.eigvecs[:, :k]


def reconstruct(img, model: PcaModel, k: int = 3) -> RasterImage:
    """Rank-``k`` reconstruction ``Y_k Y_k^T (pixel - mean) + mean``."""
    coeffs = principal_coefficients(img, model, k)
    return RasterImage(coeffs @ model.eigvecs[:, :k].T + model.mean)


def project(img, model: PcaModel, k: int = 1):
    """``k == 1``: first-coefficient gray image; otherwise the rank-k reconstruction."""
    if k == 1:
        return principal_coefficients(img, model, 1)[:, :, 0]
    return reconstruct(img, model, k)


def enhanced_channel(img, model: PcaModel, k: int = 1) -> np.ndarray:
    """Scalar channel fed to the gradient stage.

    The first principal coefficient for ``k == 1``; for larger ``k`` the luma
    of the rank-k reconstruction.
    """
    if k == 1:
        return project(img, model, 1)
    return to_grayscale(reconstruct(img, model, k))
