"""Distribution similarity and paired significance tests on scalar samples."""
from __future__ import annotations

import math

import numpy as np
from scipy import stats

HIST_SMOOTHING = 1e-9
DEFAULT_BINS = 50


def _as_samples(x, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=float).ravel()
    if x.size == 0:
        raise ValueError(f"{name} must be nonempty")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} contains non-finite values")
    return x


def kl_divergence_hist(p_samples, q_samples, n_bins: int = DEFAULT_BINS) -> float:
    """KL(P || Q) between histograms over the shared union range.

    Both sample sets are binned into `n_bins` equal-width bins spanning the
    union of their ranges; each bin gets additive smoothing before
    normalization so the divergence stays finite on disjoint supports.
    """
    p = _as_samples(p_samples, "p_samples")
    q = _as_samples(q_samples, "q_samples")
    if n_bins < 1:
        raise ValueError("n_bins must be >= 1")
    lo = min(p.min(), q.min())
    hi = max(p.max(), q.max())
    if hi == lo:
        hi = lo + 1.0  # all mass in one bin either way; divergence is 0
    p_hist = np.histogram(p, bins=n_bins, range=(lo, hi))[0] + HIST_SMOOTHING
    q_hist = np.histogram(q, bins=n_bins, range=(lo, hi))[0] + HIST_SMOOTHING
    p_hist /= p_hist.sum()
    q_hist /= q_hist.sum()
    return float(np.sum(p_hist * np.log(p_hist / q_hist)))


def wasserstein_1d(p_samples, q_samples) -> float:
    """Exact first Wasserstein distance between two 1-D empirical distributions."""
    p = _as_samples(p_samples, "p_samples")
    q = _as_samples(q_samples, "q_samples")
    return float(stats.wasserstein_distance(p, q))


def paired_t_test(a_samples, b_samples) -> tuple[float, float]:
    """Two-sided paired t-test; returns (t statistic, p-value).

    Zero difference variance does not error: all-equal pairs give (0, 1), a
    constant nonzero difference gives (signed inf, 0).
    """
    a = _as_samples(a_samples, "a_samples")
    b = _as_samples(b_samples, "b_samples")
    if a.size != b.size:
        raise ValueError(f"paired samples differ in length: {a.size} vs {b.size}")
    if a.size < 2:
        raise ValueError("paired t-test needs at least 2 pairs")
    d = a - b
    mean = d.mean()
    sd = d.std(ddof=1)
    if sd == 0.0:
        if mean == 0.0:
            return 0.0, 1.0
        return math.copysign(math.inf, mean), 0.0
    t = mean / (sd / math.sqrt(d.size))
    p = 2.0 * float(stats.t.sf(abs(t), df=d.size - 1))
    return float(t), p
