"""Reference laws the samplers are checked against.

* the joint eigenvalue density of the Laguerre ensemble (normalised for
  beta = 2, unnormalised otherwise),
* the exact smallest-eigenvalue density for square complex Wishart (R = n),
* the centring/scaling of the largest eigenvalue and the limiting
  Tracy-Widom (beta = 2) distribution, computed as the Fredholm
  determinant det(I - K_Ai) on (s, inf) by Nystrom discretisation.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from . import _airy
from .errors import InvalidParameterError, SolverError
from .structures import EnsembleParams

TW_SUPPORT = (-10.0, 6.0)
PDF_STEP = 2e-3


class LogDensity(NamedTuple):
    value: float
    normalized: bool


def log_normalization_beta2(n: int, R: float) -> float:
    """log of 1 / prod_{j=0}^{n-1} Gamma(j + 1) Gamma(j + R - n + 1).

    This is the constant for ordered eigenvalues lambda_1 > ... > lambda_n.
    """
    a = R - n
    return -sum(math.lgamma(j + 1) + math.lgamma(j + a + 1) for j in range(n))


def log_joint_density(lambdas, params: EnsembleParams) -> LogDensity:
    """Log joint eigenvalue density at ``lambdas`` (any order).

    For beta = 2 the density of the ordered eigenvalues is returned fully
    normalised. For other beta only the functional form
    exp(-beta sum(l)/2) prod(l^(beta a/2)) prod|l_k - l_j|^beta is
    evaluated, with a = R - n + 1 - 2/beta, and ``normalized`` is False.
    """
    lam = np.asarray(lambdas, dtype=float).reshape(-1)
    if lam.size != params.n:
        raise InvalidParameterError(f"expected {params.n} eigenvalues, got {lam.size}")
    if np.any(lam <= 0) or not np.all(np.isfinite(lam)):
        raise InvalidParameterError("eigenvalues must be finite and > 0")
    if params.is_spiked:
        raise InvalidParameterError("joint density is only provided for sigma1 = 1")
    beta = params.beta
    diffs = np.abs(lam[:, None] - lam[None, :])[np.triu_indices(lam.size, 1)]
    with np.errstate(divide="ignore"):
        log_vdm = float(np.sum(np.log(diffs)))
    body = -0.5 * beta * lam.sum() + 0.5 * beta * params.a * np.log(lam).sum() + beta * log_vdm
    if beta == 2.0:
        return LogDensity(float(body + log_normalization_beta2(params.n, params.R)), True)
    return LogDensity(float(body), False)


def pmin_exact(x, n: int):
    """Density n exp(-n x) of the smallest eigenvalue for R = n, beta = 2."""
    x = np.asarray(x, dtype=float)
    out = np.where(x >= 0, n * np.exp(-n * np.clip(x, 0, None)), 0.0)
    return float(out) if out.ndim == 0 else out


def pmin_cdf(x, n: int):
    """Distribution function 1 - exp(-n x) matching :func:`pmin_exact`."""
    x = np.asarray(x, dtype=float)
    out = np.where(x >= 0, -np.expm1(-n * np.clip(x, 0, None)), 0.0)
    return float(out) if out.ndim == 0 else out


def tw_rescale(lambda1, N: float, a: float):
    """Centre and scale the largest eigenvalue: (l - 4N - 2a) / (2 (2N)^(1/3))."""
    if N <= 0:
        raise InvalidParameterError(f"N must be > 0, got {N}")
    return (np.asarray(lambda1, dtype=float) - 4.0 * N - 2.0 * a) / (2.0 * (2.0 * N) ** (1.0 / 3.0))


def airy_ai(x):
    """Ai(x) for x >= -40 (absolute error below 1e-10)."""
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < _airy.X_MIN):
        raise InvalidParameterError("Ai is only evaluated for x >= -40")
    ai, _ = _airy.airy(x_arr)
    return float(ai) if ai.ndim == 0 else ai


def airy_ai_prime(x):
    """Ai'(x) for x >= -40."""
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < _airy.X_MIN):
        raise InvalidParameterError("Ai' is only evaluated for x >= -40")
    _, aip = _airy.airy(x_arr)
    return float(aip) if aip.ndim == 0 else aip


@dataclass(frozen=True)
class TWGrid:
    """Nystrom rule for the Airy-kernel determinant.

    Gauss-Legendre nodes t on (-1, 1) are mapped to (s, inf) by
    x = s + scale * tan(pi (t + 1) / 4).
    """

    order: int = 64
    scale: float = 6.0

    def __post_init__(self):
        if self.order < 4:
            raise InvalidParameterError(f"quadrature order must be >= 4, got {self.order}")
        if self.scale <= 0:
            raise InvalidParameterError(f"scale must be > 0, got {self.scale}")

    @cached_property
    def reference_rule(self):
        t, w = np.polynomial.legendre.leggauss(self.order)
        angle = 0.25 * np.pi * (t + 1.0)
        offsets = self.scale * np.tan(angle)
        weights = w * self.scale * 0.25 * np.pi / np.cos(angle) ** 2
        return offsets, weights

    def refined(self) -> TWGrid:
        return TWGrid(2 * self.order, self.scale)


DEFAULT_GRID = TWGrid()


def _airy_kernel_matrix(s, grid):
    offsets, weights = grid.reference_rule
    x = s + offsets
    ai, aip = _airy.airy(x)
    dx = x[:, None] - x[None, :]
    np.fill_diagonal(dx, 1.0)
    K = (ai[:, None] * aip[None, :] - aip[:, None] * ai[None, :]) / dx
    np.fill_diagonal(K, aip**2 - x * ai**2)
    root_w = np.sqrt(weights)
    return root_w[:, None] * K * root_w[None, :]


def tw2_cdf(s, grid: TWGrid = DEFAULT_GRID):
    """Tracy-Widom beta = 2 distribution function F2(s) = det(I - K_Ai)|_(s, inf)."""
    s_arr = np.asarray(s, dtype=float)
    out = np.empty(s_arr.shape)
    for idx, value in np.ndenumerate(s_arr):
        if value < _airy.X_MIN:
            out[idx] = 0.0
            continue
        K = _airy_kernel_matrix(value, grid)
        if not np.all(np.isfinite(K)):
            raise SolverError("non-finite Airy kernel entries", s=float(value), order=grid.order)
        det = np.linalg.det(np.eye(grid.order) - K)
        out[idx] = min(max(det, 0.0), 1.0)
    return float(out) if out.ndim == 0 else out


def tw2_pdf(s, grid: TWGrid = DEFAULT_GRID, step: float = PDF_STEP):
    """Density of F2 by a centred difference of :func:`tw2_cdf`."""
    s_arr = np.asarray(s, dtype=float)
    pdf = (tw2_cdf(s_arr + step, grid) - tw2_cdf(s_arr - step, grid)) / (2.0 * step)
    pdf = np.asarray(pdf)
    if np.any(pdf < -1e-8):
        raise SolverError("negative Tracy-Widom density beyond roundoff", min=float(pdf.min()))
    pdf = np.clip(pdf, 0.0, None)
    return float(pdf) if pdf.ndim == 0 else pdf


def tw2_moments(grid: TWGrid = DEFAULT_GRID, nodes: int = 96) -> tuple[float, float]:
    """Mean and variance of F2, integrating the distribution function.

    On [lo, hi] with F(lo) ~ 0 and F(hi) ~ 1:
    E X = hi - int F ds and E X^2 = hi^2 - 2 int s F ds.
    """
    lo, hi = TW_SUPPORT
    t, w = np.polynomial.legendre.leggauss(nodes)
    s = 0.5 * (hi - lo) * t + 0.5 * (hi + lo)
    w = 0.5 * (hi - lo) * w
    F = tw2_cdf(s, grid)
    mean = hi - np.sum(w * F)
    second = hi**2 - 2.0 * np.sum(w * s * F)
    return float(mean), float(second - mean**2)


class TWTable:
    """Tabulated F2 with linear interpolation, for fast repeated CDF queries."""

    def __init__(self, s, F, order):
        self.s = np.asarray(s, dtype=float)
        self.F = np.asarray(F, dtype=float)
        self.order = int(order)

    @classmethod
    def compute(cls, grid: TWGrid = DEFAULT_GRID, step: float = 0.02) -> TWTable:
        lo, hi = TW_SUPPORT
        s = np.linspace(lo, hi, int(round((hi - lo) / step)) + 1)
        return cls(s, tw2_cdf(s, grid), grid.order)

    def cdf(self, x):
        return np.interp(x, self.s, self.F, left=0.0, right=1.0)

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["s", "F2", "order"])
            for s, F in zip(self.s, self.F):
                writer.writerow([repr(float(s)), repr(float(F)), self.order])

    @classmethod
    def read_csv(cls, path) -> TWTable:
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        if not rows:
            raise InvalidParameterError(f"empty Tracy-Widom table {path}")
        return cls([float(r["s"]) for r in rows], [float(r["F2"]) for r in rows], int(rows[0]["order"]))
