# Functions for comparing sampled fields and convergence sequences

# Modules
import math
import numpy as np


# Largest relative deviation of vals from ref
def max_rel_diff(vals, ref, floor=1e-300):
    vals, ref = np.asarray(vals, dtype=float), np.asarray(ref, dtype=float)
    return float(np.max(np.abs(vals - ref) / np.maximum(np.abs(ref), floor)))


# Trapezoidal L1 norm of samples vals at nodes x
def l1_norm(x, vals):
    x, vals = np.asarray(x, dtype=float), np.abs(np.asarray(vals, dtype=float))
    return math.fsum(0.5 * (vals[1:] + vals[:-1]) * np.diff(x))


# L1 difference of two sampled curves, the second interpolated onto the first's nodes
def l1_diff(x_1, vals_1, x_2, vals_2):
    return l1_norm(x_1, np.asarray(vals_1) - np.interp(x_1, x_2, vals_2))


# Observed order p from errors at successively halved steps, err ~ h^p
def observed_order(errors):
    errors = np.asarray(errors, dtype=float)
    return np.log2(errors[:-1] / errors[1:])
