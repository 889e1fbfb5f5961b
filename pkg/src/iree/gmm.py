"""Three-dimensional Gaussian mixtures for traffic and capacity densities.

Besides density evaluation this module holds the pairwise Gaussian kernel
``exp(-KL(g || h))`` that every closed-form divergence is built from, and a
deterministic moment-matching fit that turns per-station capacity fields into
one mixture component per station.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING, Sequence

import numpy as np
from scipy.linalg import solve_triangular

from .errors import EmptyFieldError, InvalidCovarianceError, InvalidMixtureError

if TYPE_CHECKING:
    from .field import GridField

_LOG_2PI = np.log(2.0 * np.pi)
WEIGHT_TOL = 1e-9
SYMMETRY_TOL = 1e-9
REGULARIZATION_SCALE = 1e-6


def _cholesky(cov: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise InvalidCovarianceError(f"covariance is not positive definite:\n{cov}") from exc


@dataclass(frozen=True, eq=False)
class Gaussian3:
    """Trivariate normal ``N(mean, cov)``; mean in m, covariance in m^2."""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.array(self.mean, dtype=float).reshape(3)
        cov = np.array(self.cov, dtype=float)
        if cov.shape != (3, 3):
            raise InvalidCovarianceError(f"covariance must be 3x3, got shape {cov.shape}")
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(cov))):
            raise InvalidCovarianceError("mean and covariance must be finite")
        scale = np.max(np.abs(cov))
        if np.max(np.abs(cov - cov.T)) > SYMMETRY_TOL * scale:
            raise InvalidCovarianceError(f"covariance is not symmetric:\n{cov}")
        cov = 0.5 * (cov + cov.T)
        chol = _cholesky(cov)
        for arr in (mean, cov, chol):
            arr.flags.writeable = False
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)
        # cached factor; every determinant and inverse below goes through it
        self.__dict__["chol"] = chol

    @classmethod
    def isotropic(cls, mean, variance: float) -> Gaussian3:
        return cls(mean, variance * np.eye(3))

    @cached_property
    def log_det(self) -> float:
        return float(2.0 * np.sum(np.log(np.diag(self.chol))))

    def logpdf(self, loc) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(loc, dtype=float))
        z = solve_triangular(self.chol, (pts - self.mean).T, lower=True, check_finite=False)
        maha = np.einsum("ij,ij->j", z, z)
        return -0.5 * (maha + self.log_det + 3 * _LOG_2PI)

    def translated(self, shift) -> Gaussian3:
        return Gaussian3(self.mean + np.asarray(shift, dtype=float), self.cov)

    def __eq__(self, other):
        return (
            isinstance(other, Gaussian3)
            and np.array_equal(self.mean, other.mean)
            and np.array_equal(self.cov, other.cov)
        )

    def __hash__(self):
        return hash((self.mean.tobytes(), self.cov.tobytes()))


@dataclass(frozen=True)
class SpatialGMM:
    """Weighted mixture of :class:`Gaussian3` components.

    ``components`` is a tuple of ``(weight, gaussian)`` pairs. Weights must be
    nonnegative and sum to one.
    """

    components: tuple[tuple[float, Gaussian3], ...]

    def __post_init__(self):
        comps = tuple((float(w), g) for w, g in self.components)
        if not comps:
            raise InvalidMixtureError("mixture needs at least one component")
        weights = np.array([w for w, _ in comps])
        if np.any(~np.isfinite(weights)) or np.any(weights < 0):
            raise InvalidMixtureError(f"weights must be nonnegative, got {weights.tolist()}")
        if abs(weights.sum() - 1.0) > WEIGHT_TOL:
            raise InvalidMixtureError(f"weights sum to {weights.sum():.12g}, expected 1")
        for _, g in comps:
            if not isinstance(g, Gaussian3):
                raise InvalidMixtureError(f"component {g!r} is not a Gaussian3")
        object.__setattr__(self, "components", comps)

    @classmethod
    def single(cls, gaussian: Gaussian3) -> SpatialGMM:
        return cls(((1.0, gaussian),))

    @classmethod
    def from_arrays(cls, weights, means, covs) -> SpatialGMM:
        weights = np.asarray(weights, dtype=float).reshape(-1)
        means = np.asarray(means, dtype=float).reshape(-1, 3)
        covs = np.asarray(covs, dtype=float).reshape(-1, 3, 3)
        if not (len(weights) == len(means) == len(covs)):
            raise InvalidMixtureError("weights, means and covs must have equal length")
        return cls(tuple((w, Gaussian3(m, c)) for w, m, c in zip(weights, means, covs)))

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.components])

    @property
    def gaussians(self) -> tuple[Gaussian3, ...]:
        return tuple(g for _, g in self.components)

    def __len__(self) -> int:
        return len(self.components)

    def nonzero(self) -> SpatialGMM:
        """Same mixture without zero-weight components."""
        kept = tuple((w, g) for w, g in self.components if w > 0)
        return self if len(kept) == len(self.components) else SpatialGMM(kept)

    def with_covariance(self, cov) -> SpatialGMM:
        """Every component's covariance replaced by ``cov``."""
        return SpatialGMM(tuple((w, Gaussian3(g.mean, cov)) for w, g in self.components))

    def translated(self, shift) -> SpatialGMM:
        return SpatialGMM(tuple((w, g.translated(shift)) for w, g in self.components))


def pdf(gmm: SpatialGMM, loc) -> np.ndarray | float:
    """Mixture density at ``loc`` (a 3-vector or an ``(n, 3)`` array), per m^3."""
    pts = np.asarray(loc, dtype=float)
    out = np.zeros(np.atleast_2d(pts).shape[0])
    for w, g in gmm.components:
        if w > 0:
            out += w * np.exp(g.logpdf(pts))
    return float(out[0]) if pts.ndim == 1 else out


def exp_mutual_divergence(g: Gaussian3, h: Gaussian3) -> float:
    """``exp(-KL(g || h))`` for two trivariate Gaussians.

    The exponent is ``-1/2 [ln(|S_h|/|S_g|) + tr(S_h^-1 S_g)
    + (m_h - m_g)^T S_h^-1 (m_h - m_g) - 3]``. The result lies in ``(0, 1]``
    up to underflow for very distant pairs.
    """
    for x in (g, h):
        if not isinstance(x, Gaussian3):
            raise InvalidCovarianceError(f"{x!r} is not a Gaussian3")
    a = solve_triangular(h.chol, g.chol, lower=True, check_finite=False)
    b = solve_triangular(h.chol, h.mean - g.mean, lower=True, check_finite=False)
    kl2 = h.log_det - g.log_det + np.sum(a * a) + float(b @ b) - 3.0
    return float(min(1.0, np.exp(-0.5 * kl2)))


def kernel_matrix(left: Sequence[Gaussian3], right: Sequence[Gaussian3]) -> np.ndarray:
    """Matrix ``M[i, j] = exp_mutual_divergence(left[i], right[j])``."""
    return np.array([[exp_mutual_divergence(g, h) for h in right] for g in left]).reshape(
        len(left), len(right)
    )


def fit_gmm_moment_match(field: GridField, partition: Sequence[GridField]) -> SpatialGMM:
    """One Gaussian per sub-field, matched to its mass, centroid and spatial covariance.

    Sub-fields with zero mass are dropped and the remaining weights
    renormalized. Covariances with an eigenvalue below
    ``1e-6 * max_edge**2`` get that floor added on the diagonal.
    """
    centers = field.grid.centers
    eps = REGULARIZATION_SCALE * field.grid.region.max_edge ** 2
    masses, gaussians = [], []
    for sub in partition:
        if sub.grid != field.grid:
            raise ValueError("sub-field grid differs from the reference field grid")
        m = sub.values.ravel()
        if np.any(m < 0):
            raise ValueError("sub-fields must be nonnegative")
        mass = float(m.sum())
        if mass <= 0:
            continue
        mean = m @ centers / mass
        d = centers - mean
        cov = (d * m[:, None]).T @ d / mass
        cov = 0.5 * (cov + cov.T)
        if np.linalg.eigvalsh(cov).min() < eps:
            cov = cov + eps * np.eye(3)
        masses.append(mass)
        gaussians.append(Gaussian3(mean, cov))
    if not masses:
        raise EmptyFieldError("every sub-field has zero mass")
    weights = np.array(masses) / sum(masses)
    return SpatialGMM(tuple(zip(weights, gaussians)))
