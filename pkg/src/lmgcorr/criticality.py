"""Critical-point expansions, finite-size scaling and divergence-slope fits."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, InvalidPartition

LN2 = math.log(2.0)

# log-spaced window h - 1 in [1e-6, 1e-3] used for every slope fit
FIT_WINDOW = tuple(float(x) for x in np.logspace(-6.0, -3.0, 7))
LEADING_COEFFICIENT = -0.25


@dataclass(frozen=True)
class ExpansionResult:
    value: float
    unit: str
    validity_window: tuple[float, float] = (FIT_WINDOW[0], FIT_WINDOW[-1])


@dataclass(frozen=True)
class SlopeFit:
    """Least-squares line ``value = slope * ln(h - 1) + intercept``."""

    slope: float
    intercept: float
    residual: float  # RMS of the fit residuals
    window: tuple[float, ...]


def _require_above_critical(h: float) -> float:
    if not h > 1.0:
        raise DomainError(f"expansion needs h > 1, got {h!r}")
    return math.log(h - 1.0)


def expansion_cc_qd_bipartite(gamma: float, tau1: float, h: float) -> float:
    """Leading behaviour of bipartite CC = QD for h -> 1+, nats (printed form)."""
    log_eps = _require_above_critical(h)
    return (
        -0.25 * log_eps
        + 0.25 * math.log(1.0 - gamma)
        + 0.5 * math.log(tau1 * (1.0 - tau1))
        - LN2
    )


def expansion_eof_bipartite(gamma: float, tau1: float, h: float) -> float:
    """Leading behaviour of bipartite EoF for h -> 1+, bits (printed form)."""
    log_eps = _require_above_critical(h)
    return (
        -0.25 * log_eps / LN2
        + 0.25 * math.log2(1.0 - gamma)
        + 0.5 * math.log2(tau1 * (1.0 - tau1))
        - 1.0
    )


def finite_size_scaling(gamma: float, tau1: float, n: float) -> float:
    """CC = QD at h = 1 for N spins, up to an N-independent constant, nats."""
    if n < 2:
        raise DomainError(f"N must be >= 2, got {n!r}")
    return math.log(n) / 6.0 + math.log(1.0 - gamma) / 6.0 + 0.5 * math.log(tau1 * (1.0 - tau1))


def scaling_substitution(gamma: float, tau1: float, n: float, kappa: float = 1.0) -> float:
    """Bipartite expansion evaluated at the finite-size critical window.

    The expansion is taken at ``h - 1 = kappa N^(-2/3) (1 - gamma)^(1/3)``;
    its difference from :func:`finite_size_scaling` is ``-ln(kappa)/4 - ln 2``
    for every ``N`` and ``gamma``.
    """
    eps = kappa * n ** (-2.0 / 3.0) * (1.0 - gamma) ** (1.0 / 3.0)
    return expansion_cc_qd_bipartite(gamma, tau1, 1.0 + eps)


def scaling_coefficients(gamma: float, tau1: float, n: float, kappa: float = 1.0) -> tuple[float, float]:
    """Coefficients of ``ln N`` and ``ln(1 - gamma)`` in :func:`scaling_substitution`.

    Obtained by differencing the substituted expansion in ``ln N`` and in
    ``ln(1 - gamma)``; the expansion is linear in both, so the differences
    are exact up to rounding.
    """
    step = 0.5
    base = scaling_substitution(gamma, tau1, n, kappa)
    c_n = (scaling_substitution(gamma, tau1, n * math.exp(step), kappa) - base) / step
    g2 = 1.0 - (1.0 - gamma) * math.exp(-step)
    c_g = (base - scaling_substitution(g2, tau1, n, kappa)) / step
    return c_n, c_g


def _ratio_factor(tau: float) -> tuple[float, float]:
    s = math.sqrt(2.0 * (1.0 - tau))
    return s, (s + 1.0) / (s - 1.0)


def critical_qd_tripartite(tau: float) -> float:
    """QD between the outer groups of an equal tripartition at h = 1, nats.

    Finite for tau < 1/2 and independent of gamma.
    """
    if not 0.0 < tau < 0.5:
        raise InvalidPartition(f"tau must lie in (0, 1/2), got {tau!r}")
    s, ratio = _ratio_factor(tau)
    return math.log(math.sqrt(1.0 - tau) / (2.0 * math.sqrt(2.0))) + 0.5 * s * math.log(ratio)


def expansion_cc_tripartite(gamma: float, tau: float, h: float) -> float:
    """Leading behaviour of tripartite CC for h -> 1+, nats (printed form)."""
    if not 0.0 < tau < 0.5:
        raise InvalidPartition(f"tau must lie in (0, 1/2), got {tau!r}")
    log_eps = _require_above_critical(h)
    s, ratio = _ratio_factor(tau)
    inner = math.log(tau * (1.0 - tau) / (1.0 - 2.0 * tau)) - s * math.log(ratio)
    return -0.25 * log_eps + 0.25 * math.log(1.0 - gamma) + 0.5 * inner


def expansion(measure: str, partition: str, gamma: float, tau: float, h: float) -> ExpansionResult:
    """Dispatch to the closed-form asymptote of ``measure``; KeyError if none exists."""
    table = {
        ("cc", "bi"): (expansion_cc_qd_bipartite, "nats"),
        ("qd", "bi"): (expansion_cc_qd_bipartite, "nats"),
        ("eof", "bi"): (expansion_eof_bipartite, "bits"),
        ("cc", "tri"): (expansion_cc_tripartite, "nats"),
    }
    if (measure, partition) == ("qd", "tri"):
        return ExpansionResult(critical_qd_tripartite(tau), "nats")
    fn, unit = table[(measure, partition)]
    return ExpansionResult(fn(gamma, tau, h), unit)


def divergence_slope_fit(h_values: Sequence[float], values: Sequence[float]) -> SlopeFit:
    """Fit ``values`` linearly against ``ln(h - 1)``.

    The grid must lie strictly inside (1, 1.01] with at least six points.
    """
    h = np.asarray(h_values, dtype=float)
    y = np.asarray(values, dtype=float)
    if h.shape != y.shape or h.ndim != 1:
        raise ValueError("h_values and values must be 1-d sequences of equal length")
    if h.size < 6:
        raise ValueError(f"need at least 6 points, got {h.size}")
    if not np.all((h > 1.0) & (h <= 1.01)):
        raise ValueError("h grid must lie inside (1, 1.01]")
    if not np.all(np.isfinite(y)):
        raise ValueError("measure values must be finite")
    x = np.log(h - 1.0)
    design = np.column_stack([x, np.ones_like(x)])
    (slope, intercept), *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - (slope * x + intercept)
    rms = float(np.sqrt(np.mean(resid**2)))
    return SlopeFit(float(slope), float(intercept), rms, tuple(float(v) for v in h))
