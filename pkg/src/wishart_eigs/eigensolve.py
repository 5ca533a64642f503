"""Eigenvalues of the structured matrices and of the dense oracle.

All spectra come back as :class:`Spectrum` objects sorted in descending
order (largest eigenvalue first). Small negative eigenvalues produced by
roundoff on a Gram spectrum are clamped to zero; anything further below
zero than the tolerance allows is treated as corrupted input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .structures import BidiagonalPencil, DenseHermitian, SymTridiagonal
from .errors import InvalidParameterError, SolverError

DEFAULT_TOL = 1e-12
QL_MAX_ITER = 50
JACOBI_MAX_SWEEPS = 100
BISECTION_MAX_ITER = 200
DENSE_MAX_ORDER = 128


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of one draw, largest first."""

    values: np.ndarray
    solver: str = ""
    iterations: int = 0
    metadata: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.values)

    @property
    def largest(self) -> float:
        return float(self.values[0])

    @property
    def smallest(self) -> float:
        return float(self.values[-1])


@dataclass(frozen=True)
class CharPolyEval:
    """Characteristic polynomial value held as ``mantissa * 2**exponent``.

    Keeps values that would overflow a double (large n) representable.
    """

    mantissa: float
    exponent: int

    @property
    def sign(self) -> int:
        return int(np.sign(self.mantissa))

    @property
    def value(self) -> float:
        """Plain float value; may be +-inf or 0 when out of double range."""
        try:
            return math.ldexp(self.mantissa, self.exponent)
        except OverflowError:
            return math.copysign(math.inf, self.mantissa)

    @property
    def log_abs(self) -> float:
        if self.mantissa == 0.0:
            return -math.inf
        return math.log(abs(self.mantissa)) + self.exponent * math.log(2.0)


def _check_tol(tol):
    if not 0.0 < tol <= 1e-6:
        raise InvalidParameterError(f"tol must lie in (0, 1e-6], got {tol}")


def _clamp_sorted(values, scale, tol, solver):
    floor = -tol * scale
    low = values.min() if values.size else 0.0
    if low < floor:
        raise SolverError(
            "eigenvalue below the roundoff floor; input is not a Gram matrix",
            solver=solver,
            value=float(low),
            floor=float(floor),
        )
    values = np.where(values < 0.0, 0.0, values)
    return np.sort(values, kind="stable")[::-1].copy()


def _tridiag_norm(T: SymTridiagonal) -> float:
    lo, hi = _kernels.gershgorin(T.a, T.b)
    return max(abs(lo), abs(hi), np.finfo(float).tiny)


def tridiag_eigen_all(T: SymTridiagonal, tol: float = DEFAULT_TOL) -> Spectrum:
    """All eigenvalues of ``T`` by implicit-shift QL."""
    _check_tol(tol)
    values, iterations, status, index = _kernels.tql_eigenvalues(T.a, T.b, tol, QL_MAX_ITER)
    if status != _kernels.OK:
        raise SolverError(
            "QL iteration budget exhausted",
            index=int(index),
            budget=QL_MAX_ITER,
            iterations=int(iterations),
        )
    values = _clamp_sorted(values, _tridiag_norm(T), tol, "tql")
    return Spectrum(values, solver="tql", iterations=int(iterations))


def tridiag_eigen_extreme(T: SymTridiagonal, which: str, tol: float = DEFAULT_TOL) -> float:
    """Smallest or largest eigenvalue by Sturm-count bisection.

    The bracket starts at the Gershgorin interval and is narrowed to an
    absolute width of ``tol * ||T||``.
    """
    _check_tol(tol)
    if which not in ("smallest", "largest"):
        raise InvalidParameterError(f"which must be 'smallest' or 'largest', got {which!r}")
    norm = _tridiag_norm(T)
    value, _ = _kernels.bisect_extreme(T.a, T.b, which == "largest", tol * norm)
    if -tol * norm <= value < 0.0:
        value = 0.0
    return float(value)


def sturm_count(T: SymTridiagonal, x: float) -> int:
    """Number of eigenvalues of ``T`` strictly less than ``x``."""
    return int(_kernels.sturm_count(T.a, T.b, float(x), _kernels.pivot_floor(T.b)))


def charpoly_tridiag(T: SymTridiagonal, lam: float) -> CharPolyEval:
    """det(lam I - T) via the bottom-up three-term recurrence."""
    m, e = _kernels.charpoly_tridiag(T.a, T.b, float(lam))
    return CharPolyEval(float(m), int(e))


def charpoly_pencil(P: BidiagonalPencil, x: float, degree: int | None = None) -> CharPolyEval:
    """B_j(x) = det(x M_j - L_j) for the leading j x j blocks of the pencil."""
    j = P.n if degree is None else int(degree)
    if not 0 <= j <= P.n:
        raise InvalidParameterError(f"degree must lie in [0, {P.n}], got {degree}")
    m, e = _kernels.charpoly_pencil(P.a_tilde, P.b_tilde, float(x), j)
    return CharPolyEval(float(m), int(e))


def _solve_pencil(P, tol):
    _check_tol(tol)
    if np.any(P.a_tilde <= 0) or np.any(P.b_tilde <= 0):
        raise InvalidParameterError("pencil entries must all be positive")
    levels, iterations, status, j, k, lo, hi = _kernels.pencil_root_levels(
        P.a_tilde, P.b_tilde, tol, BISECTION_MAX_ITER
    )
    if status != _kernels.OK:
        raise SolverError(
            "interlacing bracket has no sign change",
            level=int(j),
            bracket=int(k),
            lo=float(lo),
            hi=float(hi),
        )
    return levels, int(iterations)


def pencil_root_levels(P: BidiagonalPencil, tol: float = DEFAULT_TOL) -> list[np.ndarray]:
    """Ascending roots of B_1, ..., B_n, each level bracketed by the previous."""
    levels, _ = _solve_pencil(P, tol)
    return [levels[j, : j + 1].copy() for j in range(P.n)]


def pencil_eigen_all(P: BidiagonalPencil, tol: float = DEFAULT_TOL) -> Spectrum:
    """Generalised eigenvalues of the pencil (L, M), i.e. the n roots of B_n.

    B_j has real, simple, positive roots when every pencil entry is
    positive, and the roots of B_{j-1} separate those of B_j. Each level is
    therefore solved by bisection inside the brackets
    ``(0, r_1), (r_1, r_2), ..., (r_{j-1}, trace_j]`` built from the level
    below, where ``trace_j`` (the sum of the roots) bounds the largest root.
    """
    levels, iterations = _solve_pencil(P, tol)
    values = levels[P.n - 1][::-1].copy()
    return Spectrum(values, solver="pencil-bisection", iterations=iterations)


def dense_hermitian_eigen(W: DenseHermitian, tol: float = DEFAULT_TOL) -> Spectrum:
    """Full spectrum of a small Hermitian matrix by cyclic Jacobi rotations."""
    _check_tol(tol)
    n = W.n
    if n > DENSE_MAX_ORDER:
        raise InvalidParameterError(f"dense oracle is limited to n <= {DENSE_MAX_ORDER}, got {n}")
    values, sweeps, status = _kernels.jacobi_hermitian(W.matrix, tol, JACOBI_MAX_SWEEPS)
    if status != _kernels.OK:
        raise SolverError("Jacobi sweep budget exhausted", sweeps=int(sweeps), n=n)
    norm = max(float(np.linalg.norm(W.matrix)), np.finfo(float).tiny)
    values = _clamp_sorted(values, norm, max(tol, 1e-12), "jacobi")
    return Spectrum(values, solver="jacobi", iterations=int(sweeps))
