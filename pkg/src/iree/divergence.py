"""Jensen-Shannon divergence between capacity and traffic distributions.

Two independent routes:

* :func:`js_numeric` sums the base-2 JS integrand over a shared grid and is
  the reference.
* :func:`js_closed_form` and its mixture variants use the variational
  Gaussian-mixture approximation built from :func:`exp_mutual_divergence`.
  They are not exact. Raw values outside ``[0, 1]`` are clamped and flagged.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DegenerateMixtureError, GridMismatchError
from .field import GridField
from .gmm import SpatialGMM, kernel_matrix

Method = Literal["numeric-grid", "closed-form-variational", "jensen-upper"]

NORMALIZATION_TOL = 1e-9


@dataclass(frozen=True)
class DivergenceResult:
    value: float
    method: Method
    clamped: bool = False
    raw: float | None = None

    def __float__(self):
        return self.value


def _clamp(raw: float, method: Method) -> DivergenceResult:
    value = min(1.0, max(0.0, raw))
    return DivergenceResult(value, method, clamped=value != raw, raw=raw)


def js_bits(p: np.ndarray, q: np.ndarray) -> float:
    """``1/2 sum[p log2(2p/(p+q)) + q log2(2q/(p+q))]`` with ``0 log 0 = 0``."""
    p = np.asarray(p, dtype=float).ravel()
    q = np.asarray(q, dtype=float).ravel()
    m = p + q
    out = 0.0
    for a in (p, q):
        nz = a > 0
        out += float(np.sum(a[nz] * np.log2(2.0 * a[nz] / m[nz])))
    return 0.5 * out


def js_numeric(p: GridField, q: GridField) -> DivergenceResult:
    """Grid JS divergence of two normalized fields on the same grid."""
    if p.grid != q.grid:
        raise GridMismatchError(f"grids differ: {p.grid.dims} vs {q.grid.dims}")
    for name, f in (("p", p), ("q", q)):
        if abs(f.total() - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"{name} must sum to 1, sums to {f.total():.12g}")
    raw = js_bits(p.values, q.values)
    # round-off only; the grid sum is bounded by construction
    return DivergenceResult(min(1.0, max(0.0, raw)), "numeric-grid", raw=raw)


def _self_terms(a: SpatialGMM, b: SpatialGMM):
    """Per-component ratios ``sum_b w_b I(a_i|b_j) / sum_a w_a I(a_i|a_j)``."""
    cross = kernel_matrix(a.gaussians, b.gaussians) @ b.weights
    own = kernel_matrix(a.gaussians, a.gaussians) @ a.weights
    return cross / own


def _log_term(a: SpatialGMM, ratios: np.ndarray) -> float:
    return float(np.sum(a.weights * np.log2(1.0 + ratios)))


def js_closed_form(c: SpatialGMM, d: SpatialGMM) -> DivergenceResult:
    """Variational closed-form JS divergence between two mixtures.

    ``xi = 1 - 1/2 [sum_l w_l log2(1 + iota_cd^l) + sum_k w_k log2(1 + iota_dc^k)]``
    where ``iota_cd^l`` is the kernel-weighted mass of ``d`` seen from
    component ``l`` of ``c`` relative to the mass of ``c`` itself.
    """
    c, d = c.nonzero(), d.nonzero()
    term_c = _log_term(c, _self_terms(c, d))
    term_d = _log_term(d, _self_terms(d, c))
    return _clamp(1.0 - 0.5 * (term_c + term_d), "closed-form-variational")


def js_ris_mixture(
    c: SpatialGMM, r: SpatialGMM, d: SpatialGMM, c_tot: float, dc_ris_tot: float
) -> DivergenceResult:
    """Closed-form JS divergence of the pooled ``c`` + ``r`` capacity against ``d``.

    The pooled capacity density is ``a f_c + b f_r`` with
    ``a = c_tot / (c_tot + dc_ris_tot)`` and ``b = 1 - a``.
    """
    if c_tot < 0 or dc_ris_tot < 0:
        raise ValueError("capacity totals must be nonnegative")
    if c_tot + dc_ris_tot <= 0:
        raise DegenerateMixtureError("both capacity totals are zero")
    a = c_tot / (c_tot + dc_ris_tot)
    b = dc_ris_tot / (c_tot + dc_ris_tot)
    c, r, d = c.nonzero(), r.nonzero(), d.nonzero()
    iota_cd = _self_terms(c, d)
    iota_rd = _self_terms(r, d)
    iota_dc = _self_terms(d, c)
    iota_dr = _self_terms(d, r)
    capacity_side = a * _log_term(c, iota_cd) + b * _log_term(r, iota_rd)
    traffic_side = _log_term(d, a * iota_dc + b * iota_dr)
    return _clamp(1.0 - 0.5 * (capacity_side + traffic_side), "closed-form-variational")


def js_jensen_upper(
    base: SpatialGMM, added: SpatialGMM, d: SpatialGMM, base_tot: float, added_tot: float
) -> float:
    """Capacity-weighted average of the two closed-form divergences.

    By convexity of JS divergence this bounds the divergence of the pooled
    capacity from above.
    """
    if base_tot < 0 or added_tot < 0:
        raise ValueError("capacity totals must be nonnegative")
    total = base_tot + added_tot
    if total <= 0:
        raise DegenerateMixtureError("both capacity totals are zero")
    if added_tot == 0:
        return js_closed_form(base, d).value
    if base_tot == 0:
        return js_closed_form(added, d).value
    return (base_tot / total) * js_closed_form(base, d).value + (added_tot / total) * js_closed_form(
        added, d
    ).value
