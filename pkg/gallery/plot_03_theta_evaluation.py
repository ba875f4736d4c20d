"""
Evaluating theta functions with error bounds
============================================

Each value comes with a rigorous bound on truncation plus rounding error.
The heat equation ties Omega-derivatives to z-Hessians, and reindexing the
series relates a shifted characteristic to the zero one.
"""

import math

import numpy as np
from scipy.special import gamma

from thetalocus.charalg import Characteristic, enumerate_characteristics
from thetalocus.siegel import PeriodMatrix, sample_generic
from thetalocus.thetanum import (
    TruncationError,
    eval_theta,
    heat_residual,
    jet_at_zero,
    shift_multiplier_check,
    shift_ratio_check,
)

# Genus 1 at tau = i has a closed form
v = eval_theta(Characteristic("0", "0"), PeriodMatrix([[1j]]))
print(f"theta(i) = {v.value.real:.15f}, closed form {math.pi ** 0.25 / gamma(0.75):.15f}, bound {v.tail_bound:.1e}")

# Genus 3, with a z argument
omega = sample_generic(3, 5)
z = np.array([0.1, -0.2j, 0.05 + 0.1j])
v = eval_theta(Characteristic.parse("[110|100]"), omega, z)
print(f"theta = {v.value:.12f}  radius {v.radius}  terms {v.n_terms}  bound {v.tail_bound:.1e}")

# Tolerances beyond double precision are refused rather than faked
try:
    eval_theta(Characteristic.zero(3), omega, tol=1e-30)
except TruncationError as exc:
    print("refused:", exc)

# Odd thetanulls vanish
print("max |odd thetanull|:", max(abs(eval_theta(d, omega).value) for d in enumerate_characteristics(3, "odd")))

# Heat equation residuals
for j, k in [(0, 0), (0, 2), (1, 2)]:
    res = heat_residual(Characteristic.parse("[011|001]"), omega, j, k)
    print(f"heat residual ({j},{k}): {res:.2e}")

# The jet at the origin for an odd characteristic starts at order one
jet = jet_at_zero(Characteristic.parse("[100|100]"), omega)
print("normalized |value|, |gradient|, |hessian|:", jet.normalized())

# The plain ratio against theta_0 at z + delta' + delta'' Omega is not constant in z,
# while the reindexed form with its exponential factor is
delta = Characteristic.parse("[101|011]")
zs = [np.array([0.1, 0.0, 0.0]), np.array([0.0, 0.2j, 0.0]), np.array([-0.1, 0.1, 0.1j])]
print("plain ratio spread:", shift_ratio_check(delta, omega, zs))
print("reindexed ratio spread:", shift_multiplier_check(delta, omega, zs))
