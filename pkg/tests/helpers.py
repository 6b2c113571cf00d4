"""Shared numeric helpers for the test suite.

Finite differences are implemented here independently of the package's own
gradcheck module so that analytic derivatives get checked against a second,
separately written numerical scheme.
"""

import numpy as np

from blasius_net import NetworkParams

# classical tabulated wall curvature f''(0) of the Blasius profile
SIGMA_REF = 0.332056697280


def central_diff(fn, x, step=1e-5):
    """Second-order central difference of a scalar function of one variable."""
    return (fn(x + step) - fn(x - step)) / (2.0 * step)


def random_params(rng, hidden, scale=1.0):
    """NetworkParams with entries drawn uniformly from [-scale, scale)."""
    return NetworkParams(
        rng.uniform(-scale, scale, hidden),
        rng.uniform(-scale, scale, hidden),
        rng.uniform(-scale, scale, hidden),
    )


def perturb(params, group, index, delta):
    """Copy of params with one entry shifted; group 0/1/2 = v/u/w."""
    arrays = [
        params.output_weights.copy(),
        params.hidden_biases.copy(),
        params.input_weights.copy(),
    ]
    arrays[group][index] += delta
    return NetworkParams(*arrays)


def fd_param_entry(fn, params, group, index, step=1e-6):
    """Central difference of fn(params) with respect to one parameter entry."""
    up = fn(perturb(params, group, index, +step))
    down = fn(perturb(params, group, index, -step))
    return (up - down) / (2.0 * step)


def fd_param_triple(fn, params, step=1e-6):
    """Central-difference gradient of fn(params), one array per group."""
    h = params.hidden_count
    return tuple(
        np.array([fd_param_entry(fn, params, group, i, step) for i in range(h)])
        for group in range(3)
    )


def max_normalized_diff(analytic_triple, numeric_triple, floor=1e-6):
    """Worst per-component difference over the larger vector max-norm."""
    worst = 0.0
    for a, n in zip(analytic_triple, numeric_triple):
        a = np.asarray(a, dtype=float)
        n = np.asarray(n, dtype=float)
        scale = max(np.max(np.abs(a)), np.max(np.abs(n)), floor)
        worst = max(worst, float(np.max(np.abs(a - n))) / scale)
    return worst


def gradient_triple(grad):
    """ParamGradient as a (v, u, w) tuple of arrays."""
    return (grad.d_output_weights, grad.d_hidden_biases, grad.d_input_weights)
