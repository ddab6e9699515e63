"""
The rolling GARCH(1,1) benchmark
================================

The adaptive estimator's natural competitor is a GARCH(1,1) model refit
on a rolling window. This script simulates from a known GARCH process,
recovers the parameters by maximum likelihood, runs the rolling
forecaster, and then scores both methods head to head on a series with
recurring volatility regime shifts.
"""

import numpy as np

from lave.estimator import EstimatorConfig
from lave.evaluation import compare_forecasters
from lave.garch import GarchParams, garch_fit, garch_simulate, rolling_forecast
from lave.simulation import ChangePointSpec, generate_change_point_series

true = GarchParams(omega=0.05, alpha=0.10, beta=0.85)
print(f"1. Simulate 3000 points from GARCH(1,1) {true}")
r = garch_simulate(true, 3000, seed=0)
print(f"   sample variance {np.var(r.values):.4f}"
      f" vs long-run variance {true.long_run_variance():.4f}")
print()

print("2. Maximum likelihood recovery")
fit = garch_fit(r)
print(f"   omega {fit.omega:.4f} (true {true.omega})")
print(f"   alpha {fit.alpha:.4f} (true {true.alpha})")
print(f"   beta  {fit.beta:.4f} (true {true.beta})")
print()

print("3. Rolling one-step-ahead variance forecasts")
short = garch_simulate(true, 600, seed=3)
rf = rolling_forecast(short, window=350)
times = [t for t, _ in rf.forecasts]
print(f"   {len(rf.forecasts)} forecasts from t = {times[0]} to {times[-1]},"
      f" {len(rf.fallback_times)} refit fallbacks")
print()

print("4. Head to head on a regime-shifting series")
segments = tuple((60, 1.0) if k % 2 == 0 else (60, 3.0) for k in range(10))
series, _ = generate_change_point_series(ChangePointSpec(segments, seed=0))
for gamma, lam in ((0.5, 2.74), (2.0, 2.18)):
    cfg = EstimatorConfig(gamma=gamma, m0=10, lam=lam, t0=20)
    comp = compare_forecasters(series, cfg, garch_window=350)
    verdict = "adaptive wins" if comp.ratio < 1 else "GARCH wins"
    print(f"   gamma {gamma:3.1f}: adaptive {comp.lave_score:.4f}"
          f"  GARCH {comp.garch_score:.4f}  ratio {comp.ratio:.4f}  ({verdict})")
print()
print("On data whose volatility jumps between levels, the 350-point GARCH")
print("window always straddles several regimes while the adaptive window")
print("resets after each one; the half-power transform gives the lower")
print("forecast criterion here.")
