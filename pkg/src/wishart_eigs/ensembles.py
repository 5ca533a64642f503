"""Random structured matrices whose spectra follow the Laguerre laws.

Three routes draw the same eigenvalue law when ``sigma1 == 1``:

* the bidiagonal factor B (2n - 1 chi variates), whose Gram matrix is the
  symmetric tridiagonal T,
* the bidiagonal pencil (L, M) built from 2n - 1 scaled chi-squared
  variates, whose generalised eigenvalues are the roots of a three-term
  recurrence,
* the dense Gaussian construction W = H^H H, kept as an oracle.

For n = 2 there is also a closed form through the trace and a Beta variate.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .eigensolve import (
    DEFAULT_TOL,
    Spectrum,
    dense_hermitian_eigen,
    pencil_eigen_all,
    tridiag_eigen_all,
    tridiag_eigen_extreme,
)
from .errors import InvalidParameterError
from .randstream import RngStream
from .structures import (
    BidiagonalFactor,
    BidiagonalPencil,
    DenseHermitian,
    EnsembleParams,
    SymTridiagonal,
)

__all__ = [
    "EnsembleParams",
    "BidiagonalFactor",
    "SymTridiagonal",
    "BidiagonalPencil",
    "DenseHermitian",
    "METHODS",
    "build_bidiagonal",
    "to_tridiagonal",
    "sample_spectrum_tridiagonal",
    "build_pencil",
    "sample_spectrum_pencil",
    "sample_closed_form_n2",
    "build_dense",
    "sample_dense_oracle",
    "sample_rank_one_oracle",
    "variates_per_sample",
    "draw_samples",
]

METHODS = ("tridiagonal", "pencil", "dense", "closed2")


def build_bidiagonal(params: EnsembleParams, rng: RngStream) -> BidiagonalFactor:
    """Draw the lower bidiagonal factor.

    ``diag[k] = chi_{beta (R - k)} / sqrt(beta)`` and
    ``sub[k] = chi_{beta (n - 1 - k)} / sqrt(beta)``; the spike multiplies
    ``diag[0]`` by ``sigma1``.
    """
    n, R, beta = params.n, params.R, params.beta
    dofs = np.concatenate([beta * (R - np.arange(n)), beta * (n - 1 - np.arange(n - 1))])
    entries = rng.chi(dofs) / math.sqrt(beta)
    diag, sub = entries[:n], entries[n:]
    diag[0] *= params.sigma1
    return BidiagonalFactor(diag, sub)


def to_tridiagonal(B: BidiagonalFactor) -> SymTridiagonal:
    """Coefficients of B B^T with the a_n entry in the top-left corner.

    a_n = x_R^2, a_i = y_i^2 + x_{R-n+i}^2 and b_i = y_i x_{R-n+i+1}. This
    is B B^T rather than B^T B, which has the same spectrum.
    """
    a = B.diag**2
    a[1:] += B.sub**2
    b = B.sub * B.diag[:-1]
    return SymTridiagonal(a, b)


def sample_spectrum_tridiagonal(
    params: EnsembleParams, rng: RngStream, tol: float = DEFAULT_TOL
) -> Spectrum:
    return tridiag_eigen_all(to_tridiagonal(build_bidiagonal(params, rng)), tol)


def build_pencil(params: EnsembleParams, rng: RngStream) -> BidiagonalPencil:
    """Draw the pencil variables.

    a~_j = chi^2_{beta (R + 1 - j)} / beta for j = 1..n and
    b~_j = chi^2_{beta j} / beta for j = 1..n-1, with a~_n and b~_{n-1}
    multiplied by sigma1**2.
    """
    n, R, beta = params.n, params.R, params.beta
    j = np.arange(1, n + 1)
    dofs = np.concatenate([beta * (R + 1 - j), beta * j[:-1]])
    draws = rng.chi_squared(dofs) / beta
    at, bt = draws[:n], draws[n:]
    s2 = params.sigma1**2
    at[-1] *= s2
    if n > 1:
        bt[-1] *= s2
    return BidiagonalPencil(at, bt)


def sample_spectrum_pencil(
    params: EnsembleParams, rng: RngStream, tol: float = DEFAULT_TOL
) -> Spectrum:
    return pencil_eigen_all(build_pencil(params, rng), tol)


def sample_closed_form_n2(R: float, beta: int, rng: RngStream) -> Spectrum:
    """Both eigenvalues of a 2 x 2 complex (beta=2) or real (beta=1) Wishart matrix.

    The trace t and s = 1 - 4 det / t^2 are independent; for beta = 2,
    t ~ Gamma(2R, 1) and s ~ Beta(3/2, R - 1), for beta = 1, t ~ chi^2_{2R}
    and s ~ Beta(1, (R - 1)/2). The eigenvalues are t (1 +- sqrt(s)) / 2.
    """
    if beta not in (1, 2):
        raise InvalidParameterError(f"closed form exists for beta in {{1, 2}}, got {beta}")
    if not R >= 2:
        raise InvalidParameterError(f"closed form needs R >= 2, got {R}")
    if beta == 2:
        t = rng.gamma(2.0 * R, 1.0)
        s = rng.beta(1.5, R - 1.0)
    else:
        t = rng.chi_squared(2.0 * R)
        s = rng.beta(1.0, (R - 1.0) / 2.0)
    root = math.sqrt(s)
    values = np.array([0.5 * t * (1.0 + root), 0.5 * t * (1.0 - root)])
    return Spectrum(values, solver="closed-form", metadata={"t": t, "s": s})


def _check_dense(params):
    if params.beta not in (1.0, 2.0):
        raise InvalidParameterError(f"dense construction needs beta in {{1, 2}}, got {params.beta}")
    if params.R != int(params.R):
        raise InvalidParameterError(f"dense construction needs integer R, got {params.R}")


def _gaussian(rng, rows, cols, beta):
    if beta == 1.0:
        return rng.standard_normal((rows, cols))
    re, im = rng.complex_standard_normal((rows, cols))
    return re + 1j * im


def build_dense(params: EnsembleParams, rng: RngStream) -> DenseHermitian:
    """W = H^H H for an R x n Gaussian H whose first column has variance sigma1**2."""
    _check_dense(params)
    H = _gaussian(rng, int(params.R), params.n, params.beta)
    H[:, 0] *= params.sigma1
    return DenseHermitian(H.conj().T @ H)


def sample_dense_oracle(
    params: EnsembleParams, rng: RngStream, tol: float = DEFAULT_TOL, solver: str = "jacobi"
) -> Spectrum:
    """Spectrum of the dense Wishart matrix; consumes beta * R * n variates.

    ``solver="lapack"`` swaps the Jacobi oracle for ``numpy.linalg.eigvalsh``,
    which is what the timing comparison uses for large n.
    """
    W = build_dense(params, rng)
    if solver == "jacobi":
        return dense_hermitian_eigen(W, tol)
    if solver == "lapack":
        values = np.clip(np.linalg.eigvalsh(W.matrix), 0.0, None)[::-1].copy()
        return Spectrum(values, solver="lapack")
    raise InvalidParameterError(f"unknown dense solver {solver!r}")


def sample_rank_one_oracle(
    params: EnsembleParams, rng: RngStream, tol: float = DEFAULT_TOL
) -> Spectrum:
    """Spiked spectrum built as a diagonal plus a rank-one update.

    Splitting off the spiked column gives
    W ~ diag(mu_1, ..., mu_{n-1}, 0) + sigma1^2 x x^H, where the mu are the
    eigenvalues of the R x (n - 1) unspiked Gram matrix and only |x_j|^2
    matters: |x_j|^2 ~ chi^2_beta / beta for j < n, and the last entry
    collects the R - n + 1 directions orthogonal to the unspiked columns,
    |x_n|^2 ~ chi^2_{beta (R - n + 1)} / beta.
    """
    _check_dense(params)
    n, beta = params.n, params.beta
    if n > 1:
        rest = EnsembleParams(n - 1, params.R, beta)
        mu = dense_hermitian_eigen(build_dense(rest, rng), tol).values
    else:
        mu = np.empty(0)
    dofs = np.full(n, beta)
    dofs[-1] = beta * (params.R - n + 1)
    x = np.sqrt(rng.chi_squared(dofs) / beta)
    W = np.diag(np.append(mu, 0.0)) + params.sigma1**2 * np.outer(x, x)
    spectrum = dense_hermitian_eigen(DenseHermitian(W), tol)
    return Spectrum(spectrum.values, solver="rank-one+jacobi", iterations=spectrum.iterations)


def variates_per_sample(params: EnsembleParams, method: str) -> int:
    """Number of real random variates one draw of ``method`` consumes."""
    if method in ("tridiagonal", "pencil"):
        return 2 * params.n - 1
    if method == "dense":
        return int(params.beta * params.R * params.n)
    if method == "closed2":
        return 2
    raise InvalidParameterError(f"unknown method {method!r}")


def _draw_one(params, method, which, rng, tol, dense_solver):
    if method == "tridiagonal" and which in ("min", "max"):
        T = to_tridiagonal(build_bidiagonal(params, rng))
        return np.array([tridiag_eigen_extreme(T, "smallest" if which == "min" else "largest", tol)])
    if method == "tridiagonal":
        values = sample_spectrum_tridiagonal(params, rng, tol).values
    elif method == "pencil":
        values = sample_spectrum_pencil(params, rng, tol).values
    elif method == "dense":
        values = sample_dense_oracle(params, rng, tol, solver=dense_solver).values
    elif method == "closed2":
        values = sample_closed_form_n2(params.R, int(params.beta), rng).values
    else:
        raise InvalidParameterError(f"unknown method {method!r}")
    if which == "min":
        return values[-1:]
    if which == "max":
        return values[:1]
    return values


def draw_samples(
    params: EnsembleParams,
    method: str,
    count: int,
    seed: int,
    which: str = "all",
    threads: int = 1,
    tol: float = DEFAULT_TOL,
    dense_solver: str = "jacobi",
    start_index: int = 0,
) -> np.ndarray:
    """Draw ``count`` independent spectra; row i uses stream index ``start_index + i``.

    Returns an array of shape ``(count, n)`` (descending rows) for
    ``which="all"`` and ``(count, 1)`` for ``"min"``/``"max"``. The result
    does not depend on ``threads``.
    """
    if method not in METHODS:
        raise InvalidParameterError(f"method must be one of {METHODS}, got {method!r}")
    if which not in ("all", "min", "max"):
        raise InvalidParameterError(f"which must be all, min or max, got {which!r}")
    if method == "closed2" and params.n != 2:
        raise InvalidParameterError("closed2 requires n = 2")
    if method == "closed2" and params.is_spiked:
        raise InvalidParameterError("closed2 has no spiked variant")
    if method == "dense":
        _check_dense(params)
    if count < 1:
        raise InvalidParameterError(f"count must be >= 1, got {count}")
    width = params.n if which == "all" else 1
    out = np.empty((count, width))

    def work(lo, hi):
        for i in range(lo, hi):
            rng = RngStream(seed, start_index + i)
            out[i] = _draw_one(params, method, which, rng, tol, dense_solver)

    threads = max(1, min(int(threads), count))
    if threads == 1:
        work(0, count)
    else:
        bounds = np.linspace(0, count, threads + 1).astype(int)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(work, lo, hi) for lo, hi in zip(bounds[:-1], bounds[1:])]
            for f in futures:
                f.result()
    return out
