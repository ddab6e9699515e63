"""
Calibrating the rejection threshold
===================================

The scan's only tuning knob is lambda. Too small and homogeneous data
gets chopped into short windows; too large and real jumps slip through.
The calibration fixes lambda so that on a fully homogeneous series of
length M the full-length candidate is falsely rejected with probability
alpha. Everything here is seeded Monte Carlo plus bisection.
"""

from lave.calibration import (
    CalibrationSpec,
    calibrate_lambda,
    conservative_lambda,
    rejection_frequency,
)

spec = CalibrationSpec(gamma=0.5, M=80, m0=10, target_alpha=0.05,
                       replications=2000, seed=0)

print("1. The false-alarm rate is monotone in lambda")
print()
print("   lambda   rejection rate")
for lam in (1.5, 2.0, 2.5, 3.0, 3.5):
    print(f"   {lam:5.2f}    {rejection_frequency(lam, spec):.4f}")
print()

print("2. Bisection to the 5% point")
res = calibrate_lambda(spec)
print(f"   calibrated lambda = {res.lam:.6f}")
print(f"   achieved rate     = {res.achieved_rate:.4f}"
      f"  (binomial half-width {res.ci_halfwidth:.4f} at {res.replications} draws)")
print()

print("3. Round trip on fresh draws")
fresh = CalibrationSpec(gamma=0.5, M=80, m0=10, target_alpha=0.05,
                        replications=2000, seed=99)
print(f"   rate at the calibrated lambda, new seed: {rejection_frequency(res.lam, fresh):.4f}")
print()

print("4. The closed-form conservative threshold, for comparison")
cons = conservative_lambda(M=80, m0=10, alpha=0.05, a_gamma=1.005)
print(f"   sub-Gaussian bound gives lambda = {cons:.4f}")
print()
print("The closed-form value is a guaranteed-coverage ceiling; calibration")
print("buys back most of the gap (here from about 3.19 down to 2.73) by")
print("targeting the exact finite-sample scan instead of a tail bound.")
