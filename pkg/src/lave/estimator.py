"""Adaptive interval-of-homogeneity scan and pointwise volatility estimation.

At each time tau the estimator examines nested candidate windows ending at
tau whose lengths are multiples of a grid step m0. A candidate window I is
kept when no split of I into a right-end test window J and the remaining
left part I \\ J shows a difference of sub-window means exceeding lambda
times the combined estimated noise scale. The scan stops at the first
rejected candidate; the longest surviving window supplies the estimate
theta_hat (its mean) and sigma_hat = (theta_hat / c_gamma)^(1/gamma).

`select_interval` is the readable single-time reference implementation and
keeps a full trace of every comparison. The module-private scan kernel
reproduces its decisions from cumulative sums, vectorized across Monte
Carlo replications; the test suite pins the two routes to each other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateWindowError
from .series import PowerParams, ReturnSeries, TransformedSeries, VolEstimate, theta_to_sigma
from .transform import power_constants, power_transform

__all__ = [
    "IntervalGrid",
    "HomogeneityTest",
    "TestRecord",
    "SelectionResult",
    "EstimatorConfig",
    "EstimatePath",
    "interval_mean",
    "estimated_std",
    "homogeneity_test",
    "select_interval",
    "estimate_path",
    "forecast_next",
]


@dataclass(frozen=True)
class IntervalGrid:
    """Candidate window lengths available at time tau: m0, 2*m0, ... <= tau."""

    m0: int
    tau: int
    interval_lengths: tuple[int, ...]

    def __post_init__(self):
        if not (self.m0 >= 1 and int(self.m0) == self.m0):
            raise ValueError("m0 must be a positive integer")
        if not (self.tau >= self.m0):
            raise ValueError("tau must be at least m0")
        lens = tuple(int(v) for v in self.interval_lengths)
        if not lens:
            raise ValueError("interval_lengths must be nonempty")
        prev = 0
        for v in lens:
            if v % self.m0 != 0 or v <= prev or v > self.tau:
                raise ValueError("interval_lengths must be increasing multiples of m0, each <= tau")
            prev = v
        object.__setattr__(self, "interval_lengths", lens)

    @classmethod
    def for_time(cls, tau: int, m0: int, max_len: int | None = None) -> "IntervalGrid":
        if not (m0 >= 1):
            raise ValueError("m0 must be a positive integer")
        if tau < m0:
            raise ValueError(f"tau={tau} is below the smallest window length m0={m0}")
        top = tau if max_len is None else min(tau, int(max_len))
        ks = range(1, top // m0 + 1)
        return cls(m0=int(m0), tau=int(tau), interval_lengths=tuple(k * m0 for k in ks))


@dataclass(frozen=True)
class HomogeneityTest:
    statistic: float
    threshold: float
    reject: bool


@dataclass(frozen=True)
class TestRecord:
    """One comparison from the selection scan (reject iff statistic > threshold)."""

    candidate_len: int
    test_len: int
    statistic: float
    threshold: float

    @property
    def reject(self) -> bool:
        return self.statistic > self.threshold


@dataclass(frozen=True, eq=False)
class SelectionResult:
    """Outcome of the interval scan at one time point.

    chosen_len : length of the selected interval of homogeneity.
    theta_hat : mean of the transformed series over that interval.
    v_tilde : estimated standard deviation of theta_hat.
    rejected_at : length of the first rejected candidate, None if the scan
        exhausted all candidates without a rejection.
    test_trace : every comparison performed, in scan order.
    """

    chosen_len: int
    theta_hat: float
    v_tilde: float
    rejected_at: int | None
    test_trace: tuple[TestRecord, ...]

    def to_estimate(self, params: PowerParams) -> VolEstimate:
        return VolEstimate(
            theta_hat=self.theta_hat,
            sigma_hat=theta_to_sigma(self.theta_hat, params),
            interval_len=self.chosen_len,
            v_tilde=self.v_tilde,
        )


@dataclass(frozen=True)
class EstimatorConfig:
    """Bundle of estimator settings shared by path estimation and forecasting.

    t0 defaults to 2*m0, the first time at which the scan has two candidate
    windows to compare. max_len caps the candidate length (None = up to tau).
    """

    gamma: float
    m0: int
    lam: float
    t0: int | None = None
    max_len: int | None = None

    def __post_init__(self):
        if not (self.gamma > 0.0):
            raise ValueError("gamma must be positive")
        if not (self.m0 >= 1 and int(self.m0) == self.m0):
            raise ValueError("m0 must be a positive integer")
        if not (self.lam > 0.0):
            raise ValueError("lam must be positive")
        if self.t0 is not None and self.t0 < self.m0:
            raise ValueError("t0 must be at least m0")
        if self.max_len is not None and self.max_len < self.m0:
            raise ValueError("max_len must be at least m0")

    @property
    def start_time(self) -> int:
        return self.t0 if self.t0 is not None else 2 * self.m0


@dataclass(frozen=True, eq=False)
class EstimatePath:
    """Per-time volatility estimates over taus = t0, t0+1, ..., n.

    A degenerate window at some tau is recorded as a gap: NaN in theta_hat
    and sigma_hat, 0 in interval_len.
    """

    taus: np.ndarray
    theta_hat: np.ndarray
    sigma_hat: np.ndarray
    interval_len: np.ndarray
    config: EstimatorConfig

    def __len__(self) -> int:
        return int(self.taus.size)

    def forecasts(self) -> list[tuple[int, float]]:
        """One-step-ahead variance forecasts (t, sigma_sq): the local-constant
        extrapolation predicts the variance at t+1 by sigma_hat_t squared.
        Gap entries are omitted."""
        out = []
        for t, s in zip(self.taus, self.sigma_hat):
            if np.isfinite(s):
                out.append((int(t), float(s * s)))
        return out


def interval_mean(y: TransformedSeries, lo: int, hi: int) -> float:
    """Mean of y over the half-open index window [lo, hi).

    Raises DegenerateWindowError when the window is all zeros (the scale of
    such a window is not estimable and every test on it is ill-defined).
    """
    n = len(y)
    if not (0 <= lo < hi <= n):
        raise ValueError(f"window [{lo}, {hi}) is not a valid range for n={n}")
    m = float(y.values[lo:hi].mean())
    if m == 0.0:
        raise DegenerateWindowError(f"window [{lo}, {hi}) contains only zeros")
    return m


def estimated_std(theta_tilde: float, length: int, params: PowerParams) -> float:
    """Plug-in standard deviation of a window mean: s_gamma * theta / sqrt(len)."""
    if not (theta_tilde > 0.0):
        raise ValueError("theta_tilde must be positive")
    if not (length >= 1):
        raise ValueError("length must be at least 1")
    return params.s_gamma * theta_tilde / float(np.sqrt(length))


def homogeneity_test(
    y: TransformedSeries,
    candidate_len: int,
    test_len: int,
    tau: int,
    lam: float,
    params: PowerParams,
) -> HomogeneityTest:
    """Compare the last test_len observations against the preceding part.

    With J the final test_len points before tau and I \\ J the
    candidate_len - test_len points before J, the statistic is the absolute
    difference of the two window means and the threshold is lam times the
    combined plug-in standard deviation. reject = statistic > threshold
    (strict).
    """
    if not (0 < test_len < candidate_len <= tau):
        raise ValueError(
            f"need 0 < test_len < candidate_len <= tau, got {test_len}, {candidate_len}, {tau}"
        )
    if tau > len(y):
        raise ValueError(f"tau={tau} exceeds series length {len(y)}")
    if not (lam > 0.0):
        raise ValueError("lam must be positive")
    theta_test = interval_mean(y, tau - test_len, tau)
    theta_rest = interval_mean(y, tau - candidate_len, tau - test_len)
    statistic = abs(theta_rest - theta_test)
    v_test = estimated_std(theta_test, test_len, params)
    v_rest = estimated_std(theta_rest, candidate_len - test_len, params)
    threshold = lam * float(np.sqrt(v_test * v_test + v_rest * v_rest))
    return HomogeneityTest(statistic=statistic, threshold=threshold, reject=statistic > threshold)


def select_interval(
    y: TransformedSeries,
    tau: int,
    m0: int,
    lam: float,
    params: PowerParams,
    max_len: int | None = None,
) -> SelectionResult:
    """Scan candidate windows at time tau and pick the interval of homogeneity.

    Candidates of length m0, 2*m0, ... are taken in increasing order. The
    shortest candidate is accepted without testing. Each longer candidate is
    tested against every split with test_len in {m0, ..., candidate_len - m0};
    the first candidate with any rejecting split stops the scan and the
    previous candidate is selected. All comparisons are recorded in
    test_trace (test_len ascending within each candidate).
    """
    if tau > len(y):
        raise ValueError(f"tau={tau} exceeds series length {len(y)}")
    grid = IntervalGrid.for_time(tau, m0, max_len)
    trace: list[TestRecord] = []
    chosen = grid.interval_lengths[0]
    rejected_at = None
    for candidate in grid.interval_lengths[1:]:
        candidate_rejected = False
        for test_len in range(m0, candidate, m0):
            ht = homogeneity_test(y, candidate, test_len, tau, lam, params)
            trace.append(TestRecord(candidate, test_len, ht.statistic, ht.threshold))
            candidate_rejected = candidate_rejected or ht.reject
        if candidate_rejected:
            rejected_at = candidate
            break
        chosen = candidate
    theta_hat = interval_mean(y, tau - chosen, tau)
    v_tilde = estimated_std(theta_hat, chosen, params)
    return SelectionResult(
        chosen_len=chosen,
        theta_hat=theta_hat,
        v_tilde=v_tilde,
        rejected_at=rejected_at,
        test_trace=tuple(trace),
    )


def _prefix_sums(values: np.ndarray) -> np.ndarray:
    """Row-wise prefix sums with a leading zero: out[:, t] = sum of first t."""
    rows = np.atleast_2d(np.asarray(values, dtype=float))
    out = np.zeros((rows.shape[0], rows.shape[1] + 1))
    np.cumsum(rows, axis=1, out=out[:, 1:])
    return out


def _scan_at_tau(
    prefix: np.ndarray,
    tau: int,
    m0: int,
    lam: float,
    s_gamma: float,
    max_len: int | None = None,
):
    """Vectorized replica of select_interval's decisions at a single tau.

    prefix : (R, n+1) row-wise prefix sums of the transformed series.
    Returns arrays over the R rows: chosen length, theta_hat, rejected
    candidate length (0 when no rejection), and a degeneracy flag marking
    rows where an examined window had zero mean (select_interval would have
    raised on those rows).
    """
    top = tau if max_len is None else min(tau, int(max_len))
    n_cand = top // m0
    lengths = m0 * np.arange(1, n_cand + 1)
    # suffix[:, k-1] = sum of the last k*m0 values before tau
    suffix = prefix[:, tau, None] - prefix[:, tau - lengths]
    means = suffix / lengths

    n_rows = prefix.shape[0]
    first_reject = np.zeros(n_rows, dtype=np.int64)  # candidate index k, 0 = none
    alive = np.ones(n_rows, dtype=bool)
    degenerate = np.zeros(n_rows, dtype=bool)
    for k in range(2, n_cand + 1):
        mk = k * m0
        test_lens = m0 * np.arange(1, k)
        theta_test = means[:, : k - 1]
        theta_rest = (suffix[:, k - 1 : k] - suffix[:, : k - 1]) / (mk - test_lens)
        statistic = np.abs(theta_rest - theta_test)
        threshold = (lam * s_gamma) * np.sqrt(
            theta_test**2 / test_lens + theta_rest**2 / (mk - test_lens)
        )
        reject_any = (statistic > threshold).any(axis=1)
        zero_any = ((theta_test == 0.0) | (theta_rest == 0.0)).any(axis=1)
        degenerate |= alive & zero_any
        first_reject[alive & reject_any] = k
        alive &= ~reject_any

    chosen_k = np.where(first_reject > 0, first_reject - 1, n_cand)
    theta_hat = means[np.arange(n_rows), chosen_k - 1]
    degenerate |= theta_hat == 0.0
    return chosen_k * m0, theta_hat, first_reject * m0, degenerate


def estimate_path(r: ReturnSeries, config: EstimatorConfig) -> EstimatePath:
    """Run the interval scan at every time tau from t0 through the end.

    Estimates at tau use only the first tau observations. Degenerate windows
    become gaps (NaN estimate, interval length 0) rather than errors.
    """
    params = power_constants(config.gamma)
    y = power_transform(r, config.gamma)
    n = len(y)
    t0 = config.start_time
    if t0 < config.m0:
        raise ValueError("t0 must be at least m0")
    if t0 > n:
        raise ValueError(f"t0={t0} exceeds series length {n}")
    prefix = _prefix_sums(y.values)

    taus = np.arange(t0, n + 1, dtype=np.int64)
    theta = np.empty(taus.size)
    lens = np.empty(taus.size, dtype=np.int64)
    for i, tau in enumerate(taus):
        chosen_len, theta_hat, _, degenerate = _scan_at_tau(
            prefix, int(tau), config.m0, config.lam, params.s_gamma, config.max_len
        )
        if degenerate[0]:
            theta[i] = np.nan
            lens[i] = 0
        else:
            theta[i] = theta_hat[0]
            lens[i] = chosen_len[0]
    sigma = np.where(np.isnan(theta), np.nan, (theta / params.c_gamma) ** (1.0 / config.gamma))
    return EstimatePath(taus=taus, theta_hat=theta, sigma_hat=sigma, interval_len=lens, config=config)


def forecast_next(r: ReturnSeries, t: int, config: EstimatorConfig) -> float:
    """One-step-ahead volatility forecast: sigma_hat at t extrapolated to t+1.

    Uses observations up to and including t only.
    """
    if t < config.start_time:
        raise ValueError(f"t={t} is before the first estimation time {config.start_time}")
    if t > len(r):
        raise ValueError(f"t={t} exceeds series length {len(r)}")
    params = power_constants(config.gamma)
    y = power_transform(r, config.gamma)
    sel = select_interval(y, t, config.m0, config.lam, params, config.max_len)
    return theta_to_sigma(sel.theta_hat, params)
