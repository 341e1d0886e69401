"""LMG model parameters, mean-field frame and Bogoliubov quantities.

The collective Hamiltonian is ``H = -(Sx^2 + gamma Sy^2)/N - h Sz``.  After a
rotation by the mean-field angle and a Holstein-Primakoff expansion to
quadratic order, the ground state is a Gaussian state fixed by a single
number ``alpha``: the covariance matrices of any partition follow from it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from .errors import ConsistencyError, InvalidParameter, InvalidPartition, SingularPoint

Partition = Literal["bi", "tri"]


@dataclass(frozen=True)
class ModelPoint:
    """One evaluation point: LMG parameters plus the partition of the spins.

    ``tau`` is the fraction of spins in the first group.  For a bipartition
    the second group holds ``1 - tau``.  For a tripartition the first and
    third groups both hold ``tau`` and the traced-out middle group holds
    ``1 - 2 tau``.
    """

    gamma: float
    h: float
    tau: float = 0.5
    partition: Partition = "bi"
    tau3: float | None = None

    def __post_init__(self):
        g, h, t = self.gamma, self.h, self.tau
        if not (math.isfinite(g) and 0.0 <= g < 1.0):
            raise InvalidParameter(f"gamma must lie in [0, 1), got {g!r}")
        if not (math.isfinite(h) and h >= 0.0):
            raise InvalidParameter(f"h must be finite and >= 0, got {h!r}")
        if self.partition == "bi":
            if self.tau3 is not None:
                raise InvalidPartition("tau3 is only meaningful for a tripartition")
            if not (0.0 < t < 1.0):
                raise InvalidPartition(f"bipartition fraction must lie in (0, 1), got {t!r}")
        elif self.partition == "tri":
            if not (0.0 < t < 0.5):
                raise InvalidPartition(f"tripartition fraction must lie in (0, 1/2), got {t!r}")
            if self.tau3 is not None and self.tau3 != t:
                raise InvalidPartition("only equal outer groups (tau1 == tau3) are supported")
        else:
            raise InvalidPartition(f"unknown partition kind {self.partition!r}")

    @classmethod
    def bipartite(cls, gamma: float, h: float, tau1: float) -> ModelPoint:
        return cls(gamma, h, tau1, "bi")

    @classmethod
    def tripartite(cls, gamma: float, h: float, tau: float, tau3: float | None = None) -> ModelPoint:
        return cls(gamma, h, tau, "tri", tau3)

    @property
    def fractions(self) -> tuple[float, ...]:
        """Group fractions in order; the middle entry of a tripartition is traced out."""
        if self.partition == "bi":
            return (self.tau, 1.0 - self.tau)
        return (self.tau, 1.0 - 2.0 * self.tau, self.tau)

    @property
    def outer_fractions(self) -> tuple[float, float]:
        """Fractions of the two groups whose correlations are measured."""
        if self.partition == "bi":
            return (self.tau, 1.0 - self.tau)
        return (self.tau, self.tau)

    def with_h(self, h: float) -> ModelPoint:
        return ModelPoint(self.gamma, h, self.tau, self.partition, self.tau3)


@dataclass(frozen=True)
class MeanFieldFrame:
    """Mean-field angle plus the coefficients of the quadratic boson Hamiltonian.

    ``r`` and ``s`` are None when only the angle has been computed.
    """

    theta0: float
    m: float
    r: float | None = None
    s: float | None = None
    Theta: float | None = None
    Delta1: float | None = None
    Delta2: float | None = None


def mean_field_angle(point: ModelPoint) -> MeanFieldFrame:
    """Rotation angle that minimises the mean-field energy."""
    if point.h >= 1.0:
        return MeanFieldFrame(theta0=0.0, m=1.0)
    return MeanFieldFrame(theta0=math.acos(point.h), m=point.h)


def quadratic_params(point: ModelPoint) -> MeanFieldFrame:
    """Full mean-field frame: ``s``, ``r``, Bogoliubov angle and both gaps.

    Raises :class:`SingularPoint` when ``|s/r| >= 1``, which happens only at
    ``h = 1`` where the lower gap closes.
    """
    frame = mean_field_angle(point)
    m, g, h = frame.m, point.gamma, point.h
    s = g - m * m
    r = 2.0 * h * m - 3.0 * m * m + 2.0 - g
    if r <= 0.0 or abs(s) >= r:
        raise SingularPoint(f"Bogoliubov angle undefined at h={h!r} (s={s!r}, r={r!r})")
    Theta = math.atanh(-s / r)
    Delta1 = 0.5 * (r * math.cosh(Theta) - (m * m - g) * math.sinh(Theta))
    Delta2 = 0.5 * r
    return MeanFieldFrame(frame.theta0, m, r, s, Theta, Delta1, Delta2)


def _alpha_squared_and_gap(point: ModelPoint) -> tuple[float, float]:
    # returns (alpha^2, 1 - alpha^2) with the complement formed without cancellation
    g, h = point.gamma, point.h
    if h == 1.0:
        raise SingularPoint("alpha vanishes at the critical point h = 1")
    if h > 1.0:
        return (h - 1.0) / (h - g), (1.0 - g) / (h - g)
    return (1.0 - h * h) / (1.0 - g), (h * h - g) / (1.0 - g)


def alpha(point: ModelPoint) -> float:
    """Squeezing prefactor ``alpha`` of the ground-state covariance matrix.

    Equal to ``sqrt((r+s)/(r-s))``; both routes are evaluated and must agree.
    """
    a2, _ = _alpha_squared_and_gap(point)
    value = math.sqrt(a2)
    frame = quadratic_params(point)
    other = math.sqrt((frame.r + frame.s) / (frame.r - frame.s))
    if abs(other - value) > 1e-10 * max(1.0, value):
        raise ConsistencyError(f"alpha branches disagree: {value!r} vs {other!r}")
    return value


def alpha_parts(point: ModelPoint) -> tuple[float, float]:
    """Return ``(alpha, 1 - alpha)`` with the second entry accurate near alpha = 1."""
    a2, gap = _alpha_squared_and_gap(point)
    a = math.sqrt(a2)
    return a, gap / (1.0 + a)


def alpha_excess(point: ModelPoint) -> float:
    """``(1 - alpha)^2 / alpha``, the strength of all mode correlations.

    Every invariant of the covariance matrices is a polynomial in this
    quantity and the partition fractions; it is zero at the factorization
    point ``h = sqrt(gamma)`` and diverges at ``h = 1``.
    """
    a, beta = alpha_parts(point)
    return beta * beta / a
