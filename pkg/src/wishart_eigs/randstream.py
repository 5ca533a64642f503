"""Seedable random streams and the variate generators built on them.

Bits come from numpy's PCG64 bit generator (seeded through ``SeedSequence``
with the stream index as spawn key), whose raw output is stable across numpy
releases. Everything above the raw 64-bit words is implemented here so the
variate sequence does not depend on numpy's distribution code:

* uniforms use the top 53 bits of each word,
* normals use Box-Muller, consuming uniforms in pairs,
* gamma variates use Marsaglia-Tsang rejection, with the
  ``Gamma(a) = Gamma(a + 1) * U**(1/a)`` boost for shapes below one.

Every public draw increments :attr:`RngStream.variates`, which counts real
variates handed to the caller (not the uniforms burnt internally).
"""

from __future__ import annotations

import copy
import math

import numpy as np

from .errors import InvalidParameterError

GENERATOR_NAME = "pcg64-seedseq/box-muller/marsaglia-tsang"
GENERATOR_VERSION = "1"
GENERATOR_ID = f"{GENERATOR_NAME} v{GENERATOR_VERSION} (numpy {np.__version__})"

_TWO_POW_M53 = 2.0**-53


def _check_positive(name, value):
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise InvalidParameterError(f"{name} must be finite and > 0, got {value!r}")
    return arr


def _shape_of(size, *params):
    if size is not None:
        return (size,) if np.isscalar(size) else tuple(size)
    return np.broadcast(*params).shape if params else ()


def _finish(arr, scalar):
    return float(arr.reshape(-1)[0]) if scalar else arr


class RngStream:
    """Independent, reproducible stream of random variates.

    Parameters
    ----------
    seed : int
        64-bit unsigned seed shared by a family of streams.
    stream_index : int
        Non-negative stream selector. Distinct indices give independent
        sequences for the same seed.
    """

    def __init__(self, seed: int, stream_index: int = 0):
        if not 0 <= int(seed) < 2**64:
            raise InvalidParameterError(f"seed must fit in 64 unsigned bits, got {seed}")
        if int(stream_index) < 0:
            raise InvalidParameterError(f"stream_index must be >= 0, got {stream_index}")
        self.seed = int(seed)
        self.stream_index = int(stream_index)
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_index,))
        self._bitgen = np.random.PCG64(ss)
        self.variates = 0

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_index={self.stream_index})"

    def copy(self) -> RngStream:
        """Return an independent stream in the same state as this one."""
        return copy.deepcopy(self)

    # -- raw material, not counted ------------------------------------------

    def _uniforms(self, count):
        raw = self._bitgen.random_raw(int(count))
        return (raw >> np.uint64(11)).astype(np.float64) * _TWO_POW_M53

    def _normals(self, count):
        pairs = (count + 1) // 2
        u = self._uniforms(2 * pairs)
        radius = np.sqrt(-2.0 * np.log1p(-u[0::2]))
        angle = 2.0 * np.pi * u[1::2]
        out = np.empty(2 * pairs)
        out[0::2] = radius * np.cos(angle)
        out[1::2] = radius * np.sin(angle)
        return out[:count]

    def _standard_gamma(self, shape):
        shape = np.asarray(shape, dtype=float).reshape(-1)
        boosted = shape < 1.0
        d = np.where(boosted, shape + 1.0, shape) - 1.0 / 3.0
        c = 1.0 / np.sqrt(9.0 * d)
        out = np.empty(shape.size)
        pending = np.arange(shape.size)
        while pending.size:
            x = self._normals(pending.size)
            u = self._uniforms(pending.size)
            dp, cp = d[pending], c[pending]
            v = (1.0 + cp * x) ** 3
            positive = v > 0
            logv = np.log(np.where(positive, v, 1.0))
            accept = positive & (np.log1p(-u) < 0.5 * x * x + dp - dp * v + dp * logv)
            out[pending[accept]] = dp[accept] * v[accept]
            pending = pending[~accept]
        if boosted.any():
            u = self._uniforms(int(boosted.sum()))
            out[boosted] *= (1.0 - u) ** (1.0 / shape[boosted])
        return out

    # -- public variates ------------------------------------------------------

    def uniform01(self, size=None):
        """Uniform variate(s) on [0, 1)."""
        shape = _shape_of(size)
        count = math.prod(shape)
        self.variates += count
        return _finish(self._uniforms(count).reshape(shape), size is None)

    def standard_normal(self, size=None):
        """N(0, 1) variate(s)."""
        shape = _shape_of(size)
        count = math.prod(shape)
        self.variates += count
        return _finish(self._normals(count).reshape(shape), size is None)

    def complex_standard_normal(self, size=None):
        """Standard complex normal(s) as ``(real, imag)``, each part N(0, 1/2).

        Counts as two real variates per complex number.
        """
        shape = _shape_of(size)
        count = math.prod(shape)
        self.variates += 2 * count
        z = self._normals(2 * count) * math.sqrt(0.5)
        re, im = z[0::2].reshape(shape), z[1::2].reshape(shape)
        if size is None:
            return float(re.reshape(-1)[0]), float(im.reshape(-1)[0])
        return re, im

    def gamma(self, shape, scale=1.0, size=None):
        """Gamma(shape, scale) variate(s); valid for any shape > 0."""
        shape_arr = _check_positive("shape", shape)
        scale_arr = _check_positive("scale", scale)
        out_shape = _shape_of(size, shape_arr, scale_arr)
        shape_b = np.broadcast_to(shape_arr, out_shape)
        scale_b = np.broadcast_to(scale_arr, out_shape)
        draws = self._standard_gamma(shape_b).reshape(out_shape) * scale_b
        self.variates += draws.size
        scalar = size is None and shape_arr.ndim == 0 and scale_arr.ndim == 0
        return _finish(draws, scalar)

    def chi_squared(self, dof, size=None):
        """Chi-squared variate(s) with (possibly non-integer) ``dof`` > 0."""
        dof_arr = _check_positive("dof", dof)
        return self.gamma(dof_arr / 2.0, 2.0, size=size)

    def chi(self, dof, size=None):
        """Square root of a chi-squared variate."""
        draws = self.chi_squared(dof, size=size)
        return np.sqrt(draws) if isinstance(draws, np.ndarray) else math.sqrt(draws)

    def beta(self, a, b, size=None):
        """Beta(a, b) variate(s) as ``g_a / (g_a + g_b)``."""
        a_arr = _check_positive("a", a)
        b_arr = _check_positive("b", b)
        out_shape = _shape_of(size, a_arr, b_arr)
        ga = self._standard_gamma(np.broadcast_to(a_arr, out_shape)).reshape(out_shape)
        gb = self._standard_gamma(np.broadcast_to(b_arr, out_shape)).reshape(out_shape)
        draws = ga / (ga + gb)
        self.variates += draws.size
        scalar = size is None and a_arr.ndim == 0 and b_arr.ndim == 0
        return _finish(draws, scalar)
