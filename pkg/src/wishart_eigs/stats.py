"""Empirical distributions, Kolmogorov-Smirnov tests, histograms, moments."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import InvalidParameterError


@dataclass(frozen=True)
class EmpiricalSample:
    """Sorted sample plus whatever labelling the caller wants to keep with it."""

    values: np.ndarray
    label: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.sort(np.asarray(self.values, dtype=float).reshape(-1))
        if v.size < 1:
            raise InvalidParameterError("sample must not be empty")
        if not np.all(np.isfinite(v)):
            raise InvalidParameterError("sample contains non-finite values")
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.values.size


def _as_sample(sample) -> EmpiricalSample:
    return sample if isinstance(sample, EmpiricalSample) else EmpiricalSample(sample)


class ECDF:
    """Right-continuous empirical distribution function."""

    def __init__(self, sample):
        self.values = _as_sample(sample).values

    def __call__(self, x):
        out = np.searchsorted(self.values, x, side="right") / self.values.size
        return float(out) if np.ndim(out) == 0 else out


def ecdf(sample) -> ECDF:
    return ECDF(sample)


@dataclass(frozen=True)
class KsReport:
    statistic: float
    sizes: tuple
    alpha: float
    critical: float
    passed: bool
    kind: str

    def to_dict(self) -> dict:
        d = asdict(self)
        d["sizes"] = list(self.sizes)
        return d

    @classmethod
    def from_dict(cls, d) -> KsReport:
        return cls(
            statistic=float(d["statistic"]),
            sizes=tuple(int(v) for v in d["sizes"]),
            alpha=float(d["alpha"]),
            critical=float(d["critical"]),
            passed=bool(d["passed"]),
            kind=str(d["kind"]),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text) -> KsReport:
        return cls.from_dict(json.loads(text))


def _check_alpha(alpha):
    if not 0.0 < alpha < 1.0:
        raise InvalidParameterError(f"alpha must lie in (0, 1), got {alpha}")


def ks_one_sample(sample, cdf, alpha: float = 0.01) -> KsReport:
    """One-sample KS test against a continuous distribution function.

    The critical value is the asymptotic sqrt(-ln(alpha/2) / (2N)).
    """
    _check_alpha(alpha)
    x = _as_sample(sample).values
    N = x.size
    F = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, N + 1)
    D = float(max(np.max(i / N - F), np.max(F - (i - 1) / N)))
    critical = math.sqrt(-math.log(alpha / 2.0) / (2.0 * N))
    return KsReport(D, (N,), alpha, critical, D < critical, "one-sample")


def ks_two_sample(sample_a, sample_b, alpha: float = 0.01) -> KsReport:
    """Two-sample KS test with the asymptotic critical value."""
    _check_alpha(alpha)
    a = _as_sample(sample_a).values
    b = _as_sample(sample_b).values
    na, nb = a.size, b.size
    grid = np.concatenate([a, b])
    Fa = np.searchsorted(a, grid, side="right") / na
    Fb = np.searchsorted(b, grid, side="right") / nb
    D = float(np.max(np.abs(Fa - Fb)))
    critical = math.sqrt(-math.log(alpha / 2.0) * (na + nb) / (2.0 * na * nb))
    return KsReport(D, (na, nb), alpha, critical, D < critical, "two-sample")


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray
    densities: np.ndarray
    count: int

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[1:] + self.edges[:-1])

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    def to_dict(self) -> dict:
        return {"edges": self.edges.tolist(), "densities": self.densities.tolist(), "count": self.count}

    @classmethod
    def from_dict(cls, d) -> Histogram:
        return cls(np.asarray(d["edges"], dtype=float), np.asarray(d["densities"], dtype=float), int(d["count"]))

    def to_csv(self, extra_columns: dict | None = None) -> str:
        """CSV text with columns left, right, density, bin_count and any extra per-bin columns."""
        extra_columns = extra_columns or {}
        bin_counts = np.rint(self.densities * self.widths * self.count).astype(int)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["left", "right", "density", "bin_count", *extra_columns])
        for k in range(self.densities.size):
            row = [repr(float(self.edges[k])), repr(float(self.edges[k + 1])), repr(float(self.densities[k]))]
            row.append(int(bin_counts[k]))
            row += [repr(float(col[k])) for col in extra_columns.values()]
            writer.writerow(row)
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text) -> Histogram:
        rows = list(csv.DictReader(io.StringIO(text)))
        edges = np.asarray([float(r["left"]) for r in rows] + [float(rows[-1]["right"])])
        densities = np.asarray([float(r["density"]) for r in rows])
        return cls(edges, densities, sum(int(r["bin_count"]) for r in rows))


def histogram(sample, bins=None) -> Histogram:
    """Density-normalised histogram; bin edges default to Freedman-Diaconis."""
    x = np.asarray(sample.values if isinstance(sample, EmpiricalSample) else sample, dtype=float).reshape(-1)
    if not np.all(np.isfinite(x)):
        raise InvalidParameterError("histogram input contains non-finite values")
    if bins is None:
        bins = "fd"
    elif np.isscalar(bins) and int(bins) < 1:
        raise InvalidParameterError(f"bins must be >= 1, got {bins}")
    counts, edges = np.histogram(x, bins=bins)
    total = int(counts.sum())
    densities = counts / (total * np.diff(edges)) if total else np.zeros(counts.size)
    return Histogram(edges.astype(float), densities, total)


def moments(sample) -> tuple[float, float, float]:
    """Mean, unbiased variance and sample skewness (0 for a constant sample)."""
    x = np.asarray(sample.values if isinstance(sample, EmpiricalSample) else sample, dtype=float).reshape(-1)
    if x.size < 2:
        raise InvalidParameterError("moments need at least two values")
    mean = float(x.mean())
    centred = x - mean
    m2 = float(np.mean(centred**2))
    m3 = float(np.mean(centred**3))
    skew = m3 / m2**1.5 if m2 > 0 else 0.0
    return mean, float(m2 * x.size / (x.size - 1)), skew
