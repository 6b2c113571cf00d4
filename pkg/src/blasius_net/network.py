"""Single-hidden-layer sigmoid network with closed-form derivatives.

The network is N(x) = sum_i v_i * sigmoid(w_i * x + u_i), a 1-H-1 feed-forward
map.  Because the logistic sigmoid satisfies s' = s(1 - s), every derivative of
N with respect to the input x, and every gradient of those derivatives with
respect to the parameters (v, u, w), has a short closed form in the activation
values themselves.  No autodiff is involved anywhere.

With t = s(1 - s) the derivative chain used below is

    s'    = t
    s''   = t (1 - 2s)
    s'''  = t (1 - 6t)
    s'''' = t (1 - 2s)(1 - 12t)

The fourth derivative never leaves this module: it only feeds the parameter
gradients of the third input derivative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "NetworkParams",
    "ParamGradient",
    "sigmoid_derivative",
    "forward",
    "input_derivative",
    "param_gradient",
]

MAX_DERIVATIVE_ORDER = 3


def _locked_vector(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be a one-dimensional vector")
    if arr.size == 0:
        raise ValueError(f"{name} must not be empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class NetworkParams:
    """Weights of the network: output weights v, hidden biases u, input weights w.

    All three vectors share one length H (the hidden-unit count).  Arrays are
    copied and locked read-only on construction; build a new instance to change
    anything.
    """

    output_weights: np.ndarray
    hidden_biases: np.ndarray
    input_weights: np.ndarray

    def __post_init__(self):
        v = _locked_vector(self.output_weights, "output_weights")
        u = _locked_vector(self.hidden_biases, "hidden_biases")
        w = _locked_vector(self.input_weights, "input_weights")
        if not (v.shape == u.shape == w.shape):
            raise ValueError("output_weights, hidden_biases and input_weights must share one length")
        object.__setattr__(self, "output_weights", v)
        object.__setattr__(self, "hidden_biases", u)
        object.__setattr__(self, "input_weights", w)

    @property
    def hidden_count(self) -> int:
        return int(self.output_weights.shape[0])


@dataclass(frozen=True)
class ParamGradient:
    """Gradient of some scalar with respect to (v, u, w), in that order."""

    d_output_weights: np.ndarray
    d_hidden_biases: np.ndarray
    d_input_weights: np.ndarray

    def __post_init__(self):
        dv = _locked_vector(self.d_output_weights, "d_output_weights")
        du = _locked_vector(self.d_hidden_biases, "d_hidden_biases")
        dw = _locked_vector(self.d_input_weights, "d_input_weights")
        if not (dv.shape == du.shape == dw.shape):
            raise ValueError("gradient components must share one length")
        object.__setattr__(self, "d_output_weights", dv)
        object.__setattr__(self, "d_hidden_biases", du)
        object.__setattr__(self, "d_input_weights", dw)


def _sigmoid(z):
    # tanh form: overflow-free for any z, agrees with 1/(1+exp(-z)) to the ulp level.
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def _sigmoid_stack(z: np.ndarray, max_order: int) -> list[np.ndarray]:
    """Return [sigma, sigma', ..., sigma^(max_order)] evaluated elementwise on z."""
    s = _sigmoid(z)
    stack = [s]
    if max_order >= 1:
        t = s * (1.0 - s)
        stack.append(t)
    if max_order >= 2:
        stack.append(t * (1.0 - 2.0 * s))
    if max_order >= 3:
        stack.append(t * (1.0 - 6.0 * t))
    if max_order >= 4:
        stack.append(t * (1.0 - 2.0 * s) * (1.0 - 12.0 * t))
    return stack


def sigmoid_derivative(z: float, order: int) -> float:
    """k-th derivative of the logistic sigmoid at z, for order k in 0..3."""
    if not isinstance(order, int) or isinstance(order, bool):
        raise TypeError("order must be an integer")
    if not 0 <= order <= MAX_DERIVATIVE_ORDER:
        raise ValueError(f"order must be in 0..{MAX_DERIVATIVE_ORDER}, got {order}")
    s = 0.5 * (1.0 + math.tanh(0.5 * z))
    if order == 0:
        return s
    t = s * (1.0 - s)
    if order == 1:
        return t
    if order == 2:
        return t * (1.0 - 2.0 * s)
    return t * (1.0 - 6.0 * t)


def _check_order(order: int, top: int) -> None:
    if not isinstance(order, int) or isinstance(order, bool):
        raise TypeError("order must be an integer")
    if not 0 <= order <= top:
        raise ValueError(f"order must be in 0..{top}, got {order}")


def forward(params: NetworkParams, x: float) -> float:
    """Network output N(x) = sum_i v_i * sigmoid(w_i x + u_i)."""
    z = params.input_weights * x + params.hidden_biases
    return float(np.dot(params.output_weights, _sigmoid(z)))


def input_derivative(params: NetworkParams, x: float, order: int) -> float:
    """d^k N / dx^k at x: sum_i v_i w_i^k sigma^(k)(w_i x + u_i), k in 0..3."""
    _check_order(order, MAX_DERIVATIVE_ORDER)
    w = params.input_weights
    z = w * x + params.hidden_biases
    sk = _sigmoid_stack(z, order)[order]
    return float(np.dot(params.output_weights * w**order, sk))


def param_gradient(params: NetworkParams, x: float, order: int) -> ParamGradient:
    """Gradient of the k-th input derivative with respect to every parameter.

    For z_i = w_i x + u_i:

        d/dv_i = w_i^k sigma^(k)(z_i)
        d/du_i = v_i w_i^k sigma^(k+1)(z_i)
        d/dw_i = v_i (k w_i^(k-1) sigma^(k)(z_i) + w_i^k x sigma^(k+1)(z_i))

    and the k w^(k-1) term is identically zero for k = 0 (never evaluated as
    a negative power).
    """
    _check_order(order, MAX_DERIVATIVE_ORDER)
    v = params.output_weights
    w = params.input_weights
    z = w * x + params.hidden_biases
    stack = _sigmoid_stack(z, order + 1)
    sk = stack[order]
    sk1 = stack[order + 1]
    wk = w**order
    d_v = wk * sk
    d_u = v * wk * sk1
    if order == 0:
        slope = 0.0
    else:
        slope = order * w ** (order - 1) * sk
    d_w = v * (slope + wk * x * sk1)
    return ParamGradient(d_v, d_u, d_w)
