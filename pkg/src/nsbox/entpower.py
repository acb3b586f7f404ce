"""Entangling power of the coherent box family and the trade-off curve.

The box output is a rank-two Bell-diagonal state with largest eigenvalue
1 - alpha*p, so its relative entropy of entanglement is 1 - H(alpha*p);
averaging over Haar product inputs reduces to a two-dimensional integral
over the square [0, sqrt(alpha)]^2.  All logarithms are base 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from .chsh import i_m_analytic


def shannon_h(x):
    """Binary Shannon entropy in bits, with 0 log 0 = 0; accepts arrays."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr < -1e-15) or np.any(arr > 1 + 1e-15):
        raise ValueError("argument must lie in [0, 1]")
    arr = np.clip(arr, 0.0, 1.0)
    out = np.zeros_like(arr)
    inner = (arr > 0.0) & (arr < 1.0)
    a = arr[inner]
    out[inner] = -a * np.log2(a) - (1.0 - a) * np.log2(1.0 - a)
    return float(out) if np.isscalar(x) or arr.ndim == 0 else out


def e_r_bell_diag(lambda_max: float) -> float:
    """Relative entropy of entanglement of a rank-two Bell-diagonal state."""
    if not -1e-15 <= lambda_max <= 1 + 1e-15:
        raise ValueError("eigenvalue must lie in [0, 1]")
    if lambda_max <= 0.5:
        return 0.0
    return 1.0 - shannon_h(lambda_max)


def _neg_h(t: np.ndarray) -> np.ndarray:
    """t log2 t + (1 - t) log2(1 - t) on (0, 1), zero at the endpoints."""
    out = np.zeros_like(t)
    m = (t > 0.0) & (t < 1.0)
    tm = t[m]
    out[m] = tm * np.log2(tm) + (1.0 - tm) * np.log2(1.0 - tm)
    return out


def _gl_sin2(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre rule on [0, 1] composed with the endpoint-vanishing
    substitution x -> sin^2(pi x / 2); nodes stay interior."""
    x, w = leggauss(nodes)
    xx = (x + 1.0) / 2.0
    ww = w / 2.0
    u = np.sin(np.pi * xx / 2.0) ** 2
    du = (np.pi / 2.0) * np.sin(np.pi * xx) * ww
    return u, du


def _e_pow_at(alpha: float, nodes: int) -> float:
    s = np.sqrt(alpha)
    u, du = _gl_sin2(nodes)
    u = s * u
    du = s * du
    grid = np.outer(u, u)
    weights = np.outer(du, du)
    return 1.0 + float(np.sum(weights * _neg_h(grid))) / alpha


def e_pow_quadrature(alpha: float, nodes: int = 64) -> tuple[float, float]:
    """Average output entanglement by tensor-product Gaussian quadrature.

    Returns (value, error_estimate); the estimate compares the rule against
    its half-resolution version.  alpha = 0 is the exact limit 1.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    if nodes < 8:
        raise ValueError("need at least 8 nodes")
    if alpha == 0.0:
        return 1.0, 0.0
    value = _e_pow_at(alpha, nodes)
    coarse = _e_pow_at(alpha, max(nodes // 2, 4))
    return value, abs(value - coarse)


def e_pow_bloch_quadrature(alpha: float, nodes: int = 64) -> float:
    """Independent discretization: integrate 1 - H(alpha sin^2 sin^2) over
    the Bloch polar angles with the sin(theta) measure."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    if alpha == 0.0:
        return 1.0
    x, w = leggauss(nodes)
    theta = np.pi * (x + 1.0) / 2.0
    wt = w * np.pi / 2.0
    s2 = np.sin(theta / 2.0) ** 2
    weights = np.outer(wt * np.sin(theta), wt * np.sin(theta)) / 4.0
    vals = shannon_h(alpha * np.outer(s2, s2))
    return 1.0 - float(np.sum(weights * vals))


def e_pow_monte_carlo(
    alpha: float, samples: int, rng: np.random.Generator
) -> tuple[float, float]:
    """Monte Carlo mean and standard error of the output entanglement over
    Haar product inputs (full Bloch angles sampled; only the polar angles
    enter the value)."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    if samples < 1000:
        raise ValueError("need at least 1000 samples")
    theta1 = np.arccos(1.0 - 2.0 * rng.random(samples))
    theta2 = np.arccos(1.0 - 2.0 * rng.random(samples))
    rng.random(2 * samples)  # azimuthal angles; the integrand is independent of them
    p = np.sin(theta1 / 2.0) ** 2 * np.sin(theta2 / 2.0) ** 2
    vals = 1.0 - shannon_h(alpha * p)
    mean = float(np.mean(vals))
    stderr = float(np.std(vals, ddof=1) / np.sqrt(samples)) if samples > 1 else 0.0
    return mean, stderr


@dataclass(frozen=True)
class TradeoffPoint:
    alpha: float
    i_m: float
    e_pow: float
    quadrature_error_estimate: float


def tradeoff_curve(alphas: Sequence[float], nodes: int = 64) -> list[TradeoffPoint]:
    """Nonlocality vs entangling power along an alpha grid."""
    points = []
    for alpha in alphas:
        value, err = e_pow_quadrature(float(alpha), nodes)
        points.append(TradeoffPoint(float(alpha), i_m_analytic(float(alpha)), value, err))
    return points
