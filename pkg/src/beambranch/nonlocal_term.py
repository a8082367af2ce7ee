"""Interaction term theta_w(x) = int_0^1 f(x,y) |w(y)|^sigma dy and friends.

Quadrature is tensor-product trapezoid with weights w_j = h; with the
boundary values pinned to zero this is exact for the sine-product identities
used throughout the tests (h * sum sin^2(k pi x_j) = 1/2 for 1 <= k <= n).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, SingularDerivative


def signed_power(u: np.ndarray, r: float) -> np.ndarray:
    """sign(u)|u|^r: equals u^r on u >= 0, stays finite for stray negatives."""
    return np.sign(u) * np.abs(u) ** r


@dataclass(frozen=True)
class NonlocalEvaluator:
    """Sampled kernel, quadrature weights, and the two exponents."""

    kernel: np.ndarray
    weights: np.ndarray
    rho: float
    sigma: float

    @classmethod
    def from_spec(cls, spec) -> "NonlocalEvaluator":
        n, h = spec.grid.n, spec.grid.h
        weights = np.full(n, h)
        weights.flags.writeable = False
        return cls(kernel=spec.f.samples, weights=weights, rho=spec.rho, sigma=spec.sigma)


def _check_len(ev: NonlocalEvaluator, w: np.ndarray) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.shape != (ev.kernel.shape[0],):
        raise DimensionMismatch(
            f"vector of length {w.shape} does not match kernel size {ev.kernel.shape}"
        )
    return w


def theta(ev: NonlocalEvaluator, w: np.ndarray) -> np.ndarray:
    """theta_i = sum_j weights_j * F[i,j] * |w_j|^sigma.

    Satisfies the sup-norm bound ||theta|| <= ||F|| * ||w||^sigma since the
    weights sum to n/(n+1) < 1.
    """
    w = _check_len(ev, w)
    return ev.kernel @ (ev.weights * np.abs(w) ** ev.sigma)


def theta_jacobian(ev: NonlocalEvaluator, u: np.ndarray) -> np.ndarray:
    """Derivative of u -> u^rho * theta(u) on the positive cone.

    D = rho * diag(u^(rho-1) * theta_u)
      + sigma * diag(u^rho) @ F @ diag(weights * u^(sigma-1)).

    For sigma < 1 the second factor is singular at u_j = 0, so strictly
    positive data is required there.
    """
    u = _check_len(ev, u)
    if ev.sigma < 1.0 and np.min(u) <= 0.0:
        raise SingularDerivative(
            "sigma < 1 requires strictly positive data (derivative singular at 0)"
        )
    th = theta(ev, u)
    diag_part = ev.rho * np.abs(u) ** (ev.rho - 1.0) * th
    outer = signed_power(u, ev.rho)[:, None] * ev.kernel
    column_scale = ev.sigma * ev.weights * signed_power(u, ev.sigma - 1.0)
    D = outer * column_scale[None, :]
    D[np.diag_indices_from(D)] += diag_part
    return D


def energy(ev: NonlocalEvaluator, w: np.ndarray) -> float:
    """Interaction energy Phi(w) = sum_i weights_i * w_i^(rho+1) * theta(w)_i.

    Nonnegative for entrywise nonnegative w; zero only when w is numerically
    zero wherever the kernel couples it to itself.
    """
    w = _check_len(ev, w)
    return float(np.sum(ev.weights * signed_power(w, ev.rho + 1.0) * theta(ev, w)))
