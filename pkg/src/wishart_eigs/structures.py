"""Plain containers for ensemble parameters and the structured matrices."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError


@dataclass(frozen=True)
class EnsembleParams:
    """Parameters of a (possibly single-spiked) beta-Laguerre ensemble.

    ``R`` and ``beta`` may be non-integer; ``sigma1`` scales the variance of
    the first data column (the spike).
    """

    n: int
    R: float
    beta: float = 2.0
    sigma1: float = 1.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise InvalidParameterError(f"n must be a positive integer, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        for name in ("R", "beta", "sigma1"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise InvalidParameterError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if self.R < self.n:
            raise InvalidParameterError(f"need R >= n, got R={self.R}, n={self.n}")
        if self.beta <= 0:
            raise InvalidParameterError(f"beta must be > 0, got {self.beta}")
        if self.sigma1 <= 0:
            raise InvalidParameterError(f"sigma1 must be > 0, got {self.sigma1}")

    @property
    def a(self) -> float:
        """Exponent parameter R - n + 1 - 2/beta of the joint density."""
        return self.R - self.n + 1.0 - 2.0 / self.beta

    @property
    def is_spiked(self) -> bool:
        return self.sigma1 != 1.0


@dataclass(frozen=True)
class BidiagonalFactor:
    """Lower bidiagonal factor: ``diag`` = (x_R, ..., x_{R-n+1}), ``sub`` = (y_{n-1}, ..., y_1)."""

    diag: np.ndarray
    sub: np.ndarray

    def __post_init__(self):
        diag = np.asarray(self.diag, dtype=float)
        sub = np.asarray(self.sub, dtype=float)
        if diag.ndim != 1 or sub.shape != (max(diag.size - 1, 0),):
            raise InvalidParameterError("need len(sub) == len(diag) - 1")
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "sub", sub)

    @property
    def n(self) -> int:
        return self.diag.size

    def matrix(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.sub, -1)


@dataclass(frozen=True)
class SymTridiagonal:
    """Symmetric tridiagonal with diagonal ``a`` (a_n first) and off-diagonal ``b`` (b_{n-1} first)."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.ascontiguousarray(self.a, dtype=float)
        b = np.ascontiguousarray(self.b, dtype=float)
        if a.ndim != 1 or a.size < 1 or b.shape != (a.size - 1,):
            raise InvalidParameterError("need len(b) == len(a) - 1 >= 0")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return self.a.size

    def matrix(self) -> np.ndarray:
        return np.diag(self.a) + np.diag(self.b, 1) + np.diag(self.b, -1)


@dataclass(frozen=True)
class BidiagonalPencil:
    """Pencil (L, M): L = diag(a_tilde) + unit superdiagonal, M = I - subdiag(b_tilde)."""

    a_tilde: np.ndarray
    b_tilde: np.ndarray

    def __post_init__(self):
        at = np.ascontiguousarray(self.a_tilde, dtype=float)
        bt = np.ascontiguousarray(self.b_tilde, dtype=float)
        if at.ndim != 1 or at.size < 1 or bt.shape != (at.size - 1,):
            raise InvalidParameterError("need len(b_tilde) == len(a_tilde) - 1 >= 0")
        object.__setattr__(self, "a_tilde", at)
        object.__setattr__(self, "b_tilde", bt)

    @property
    def n(self) -> int:
        return self.a_tilde.size

    def matrices(self) -> tuple[np.ndarray, np.ndarray]:
        n = self.n
        L = np.diag(self.a_tilde) + np.diag(np.ones(n - 1), 1)
        M = np.eye(n) - np.diag(self.b_tilde, -1)
        return L, M


@dataclass(frozen=True)
class DenseHermitian:
    """Dense Hermitian (or real symmetric) matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        W = np.ascontiguousarray(self.matrix, dtype=np.complex128)
        if W.ndim != 2 or W.shape[0] != W.shape[1]:
            raise InvalidParameterError("matrix must be square")
        if not np.allclose(W, W.conj().T, rtol=0, atol=1e-12 * max(1.0, np.abs(W).max(initial=0))):
            raise InvalidParameterError("matrix is not Hermitian")
        object.__setattr__(self, "matrix", 0.5 * (W + W.conj().T))

    @property
    def n(self) -> int:
        return self.matrix.shape[0]
