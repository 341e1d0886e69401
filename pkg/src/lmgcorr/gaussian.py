"""Two-mode covariance matrices of the LMG ground state and their invariants.

Conventions: quadrature ordering ``(x1, p1, x2, p2)``, ``Gamma_ij = <{R_i, R_j}>``
so that the vacuum is the identity and physical states have symplectic
eigenvalues ``>= 1``.

Precision note.  Bipartite states are pure, so their invariants sit exactly
on the branch points of the square roots in the symplectic spectrum and in
``E^min``.  Evaluating ``A = det G1`` and then ``A - 1`` would leave rounding
noise of order 1e-16 under those square roots and produce errors of order
1e-8 in the measures.  Every :class:`StandardForm` therefore carries the
excesses ``A - 1``, ``B - 1`` and ``D - 1`` computed from closed forms that
contain no cancellation, and the radicands are assembled from them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Literal

import numpy as np

from .errors import ConsistencyError, InvalidPartition, NonPhysical
from .model import ModelPoint, alpha_parts

PartitionKind = Literal["bi", "tri"]

# relative size below which a radicand is treated as rounding noise
RADICAND_RTOL = 1e-12
PHYSICAL_TOL = 1e-10


@dataclass(frozen=True)
class TwoModeCovariance:
    """A 4x4 covariance matrix plus, for model states, the data it was built from."""

    gamma_matrix: np.ndarray
    partition_kind: PartitionKind | None = None
    tau: float | None = None
    alpha: float | None = None
    alpha_gap: float | None = None  # 1 - alpha, accurate near the factorization point
    fractions: tuple[float, float] | None = None

    @classmethod
    def from_matrix(cls, matrix) -> TwoModeCovariance:
        m = np.array(matrix, dtype=float)
        if m.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
        if not np.array_equal(m, m.T):
            raise ValueError("covariance matrix must be symmetric")
        return cls(m)

    @property
    def is_model_state(self) -> bool:
        return self.alpha is not None


def _model_covariance(point: ModelPoint, t1: float, t3: float, kind: PartitionKind) -> TwoModeCovariance:
    a, beta = alpha_parts(point)
    A1 = beta / a  # 1/alpha - 1
    B1 = -beta  # alpha - 1
    cross = math.sqrt(t1 * t3)
    m = np.zeros((4, 4))
    m[0, 0] = A1 * t1 + 1.0
    m[1, 1] = B1 * t1 + 1.0
    m[2, 2] = A1 * t3 + 1.0
    m[3, 3] = B1 * t3 + 1.0
    m[0, 2] = m[2, 0] = A1 * cross
    m[1, 3] = m[3, 1] = B1 * cross
    return TwoModeCovariance(m, kind, point.tau, a, beta, (t1, t3))


def bipartite_covariance(point: ModelPoint) -> TwoModeCovariance:
    """Ground-state covariance of the two complementary spin groups."""
    if point.partition != "bi":
        raise InvalidPartition("bipartite_covariance needs a bipartite ModelPoint")
    t1, t2 = point.outer_fractions
    return _model_covariance(point, t1, t2, "bi")


def tripartite_covariance(point: ModelPoint) -> TwoModeCovariance:
    """Covariance of groups one and three after tracing out the middle group."""
    if point.partition != "tri":
        raise InvalidPartition("tripartite_covariance needs a tripartite ModelPoint")
    t1, t3 = point.outer_fractions
    return _model_covariance(point, t1, t3, "tri")


def covariance(point: ModelPoint) -> TwoModeCovariance:
    if point.partition == "bi":
        return bipartite_covariance(point)
    return tripartite_covariance(point)


@dataclass(frozen=True)
class StandardForm:
    """Local-symplectic invariants of a two-mode covariance matrix.

    ``dA``, ``dB`` and ``dD`` are ``A - 1``, ``B - 1`` and ``D - 1`` carried
    separately to full relative precision.
    """

    a: float
    b: float
    c1: float
    c2: float
    A: float
    B: float
    C: float
    D: float
    dA: float
    dB: float
    dD: float
    sum_defect: float | None = None  # D - M + 1 when known in closed form
    partition_kind: PartitionKind | None = None
    source: TwoModeCovariance | None = field(default=None, repr=False, compare=False)

    @property
    def M(self) -> float:
        return self.A + self.B + 2.0 * self.C

    @property
    def defect(self) -> float:
        """``D - M + 1``, zero for every pure reduced model state."""
        if self.sum_defect is not None:
            return self.sum_defect
        return self.dD - (self.dA + self.dB + 2.0 * self.C)

    @cached_property
    def _spectrum(self) -> tuple[float, float, float, float]:
        return _symplectic_parts(self)

    @property
    def nu_minus(self) -> float:
        return self._spectrum[0]

    @property
    def nu_plus(self) -> float:
        return self._spectrum[1]

    @property
    def nu_squared_excess(self) -> tuple[float, float]:
        """``(nu_-^2 - 1, nu_+^2 - 1)`` without cancellation."""
        return self._spectrum[2], self._spectrum[3]

    @cached_property
    def nu_tilde_minus(self) -> float:
        return ptranspose_eigenvalue(self)

    def matrix(self) -> np.ndarray:
        """The standard-form covariance matrix itself."""
        a, b, c1, c2 = self.a, self.b, self.c1, self.c2
        return np.array(
            [[a, 0.0, c1, 0.0], [0.0, a, 0.0, c2], [c1, 0.0, b, 0.0], [0.0, c2, 0.0, b]]
        )


def invariants_from_matrix(m: np.ndarray) -> tuple[float, float, float, float]:
    """``(det G1, det G2, det C1, det Gamma)`` by direct evaluation."""
    A = float(np.linalg.det(m[:2, :2]))
    B = float(np.linalg.det(m[2:, 2:]))
    C = float(np.linalg.det(m[:2, 2:]))
    D = float(np.linalg.det(m))
    return A, B, C, D


def printed_invariants(alpha: float, tau: float, kind: PartitionKind) -> tuple[float, float, float, float]:
    """Closed-form ``A, B, C, D`` written directly in terms of ``alpha`` and ``tau``.

    Used only as a cross-check: the forms lose precision near alpha = 1.
    """
    a, t = alpha, tau
    if kind == "bi":
        A = (a * t + (1.0 - t)) * (t + a * (1.0 - t)) / a
        C = (2.0 - a - 1.0 / a) * (1.0 - t) * t
        return A, A, C, 1.0
    A = (a * t + (1.0 - t)) * (t + a * (1.0 - t)) / a
    C = -((a - 1.0) ** 2) * t * t / a
    D = (a + 2.0 * (a - 1.0) ** 2 * (t - 2.0 * t * t)) / a
    return A, A, C, D


def _excess_det2(e: np.ndarray) -> float:
    # det(I + E) - 1 for a 2x2 block
    return e[0, 0] + e[1, 1] + e[0, 0] * e[1, 1] - e[0, 1] * e[1, 0]


def _check_close(name: str, got: float, want: float, rtol: float) -> None:
    if abs(got - want) > rtol * max(1.0, abs(want)):
        raise ConsistencyError(f"{name}: {got!r} disagrees with {want!r} (rtol {rtol:g})")


def standard_form(cov: TwoModeCovariance) -> StandardForm:
    """Reduce a covariance matrix with ``x``-``p`` block structure to standard form.

    ``c1`` belongs to the ``x`` quadratures and ``c2`` to the ``p``
    quadratures.  Raises :class:`NonPhysical` for states violating the
    uncertainty principle.
    """
    m = cov.gamma_matrix
    if any(m[i, j] != 0.0 for i, j in ((0, 1), (0, 3), (1, 2), (2, 3))):
        raise ValueError("only covariance matrices without x-p correlations are supported")

    A_det, B_det, C_det, D_det = invariants_from_matrix(m)
    if cov.is_model_state:
        beta, al = cov.alpha_gap, cov.alpha
        delta = beta * beta / al
        t1, t3 = cov.fractions
        s = 1.0 if cov.partition_kind == "bi" else t1 + t3
        dA = delta * t1 * (1.0 - t1) if cov.partition_kind == "tri" else delta * t1 * t3
        dB = delta * t3 * (1.0 - t3) if cov.partition_kind == "tri" else dA
        C = -delta * t1 * t3
        dD = delta * s * (1.0 - s)
        A, B, D = 1.0 + dA, 1.0 + dB, 1.0 + dD
        # M = 1 + D holds identically here; the combinations built on it are
        # higher order in delta and drown in rounding if formed by subtraction
        defect = 0.0
        terms = abs(dD) + abs(dA) + abs(dB) + 2.0 * abs(C)
        if abs(dD - (dA + dB + 2.0 * C)) > RADICAND_RTOL * terms:
            raise ConsistencyError("model invariants violate D - M + 1 = 0")

        # determinant of a matrix with entries ~1/alpha loses ~cond digits
        cond = float(np.linalg.cond(m))
        rtol = max(1e-10, 64 * np.finfo(float).eps * cond)
        for name, got, want in (("A", A_det, A), ("B", B_det, B), ("C", C_det, C), ("D", D_det, D)):
            _check_close(f"det route {name}", got, want, rtol)
        if cov.tau is not None:
            pA, pB, pC, pD = printed_invariants(al, cov.tau, cov.partition_kind)
            ptol = max(1e-10, 64 * np.finfo(float).eps / min(al, 1.0) ** 2)
            for name, got, want in (("A", pA, A), ("B", pB, B), ("C", pC, C), ("D", pD, D)):
                _check_close(f"closed form {name}", got, want, ptol)
    else:
        e = m - np.eye(4)
        dA = _excess_det2(e[:2, :2])
        dB = _excess_det2(e[2:, 2:])
        C = C_det
        D = D_det
        dD = D - 1.0
        A, B = 1.0 + dA, 1.0 + dB
        defect = None

    if A <= 0.0 or B <= 0.0 or m[0, 0] <= 0.0 or m[1, 1] <= 0.0 or m[2, 2] <= 0.0 or m[3, 3] <= 0.0:
        raise NonPhysical("local covariance blocks must be positive definite")

    a, b = math.sqrt(A), math.sqrt(B)
    # local squeezing that equalises the diagonal of each mode
    sx = (m[1, 1] * m[3, 3] / (m[0, 0] * m[2, 2])) ** 0.25
    c1 = m[0, 2] * sx
    c2 = m[1, 3] / sx

    scale = max(1.0, a * b) ** 2
    _check_close("c1*c2 = C", c1 * c2, C, 1e-10 * scale)
    _check_close("(ab-c1^2)(ab-c2^2) = D", (a * b - c1 * c1) * (a * b - c2 * c2), D, 1e-10 * scale)

    sf = StandardForm(a, b, c1, c2, A, B, C, D, dA, dB, dD, defect, cov.partition_kind, cov)
    sf.nu_minus  # physicality check
    return sf


def _clamped_sqrt(value: float, scale: float, what: str) -> float:
    tol = RADICAND_RTOL * scale
    if value < -tol:
        raise NonPhysical(f"negative radicand in {what}: {value!r} (scale {scale!r})")
    if value <= tol:
        return 0.0
    return math.sqrt(value)


def _sqrt_excess(d: float) -> float:
    # sqrt(1 + d) - 1 without cancellation
    return d / (1.0 + math.sqrt(1.0 + d))


def _split_radicand(se: float, linear: float, linear_terms: float, M_excess: float, sf: StandardForm, what: str) -> float:
    """``sqrt(M^2 - 4D)`` from ``M - 2 sqrt(D) = se^2 - linear`` and ``M_excess = M - 2``.

    ``se`` is ``sqrt(D) - 1``; ``linear_terms`` bounds the parts of ``linear``.
    """
    terms = linear_terms
    if sf.sum_defect is None:
        # a defect formed by subtraction carries rounding of the first-order terms
        terms += abs(sf.dA) + abs(sf.dB) + 2.0 * abs(sf.C) + abs(sf.dD)
    # scale before squaring: se can be far below sqrt(tiny)
    k = max(abs(se), math.sqrt(terms))
    if k == 0.0:
        return 0.0
    sek = se / k
    gap = sek * sek - linear / k / k
    scale = sek * sek + terms / k / k
    return k * _clamped_sqrt(gap, scale, what) * math.sqrt(2.0 + M_excess + 2.0 * math.sqrt(sf.D))


def _symplectic_parts(sf: StandardForm) -> tuple[float, float, float, float]:
    # (nu_-, nu_+, nu_-^2 - 1, nu_+^2 - 1)
    defect = sf.defect
    m_exc = sf.dD - defect
    # M - 2 sqrt(D) = (sqrt(D) - 1)^2 - defect
    root = _split_radicand(_sqrt_excess(sf.dD), defect, abs(defect), m_exc, sf, "symplectic spectrum")
    M = 2.0 + m_exc
    nu_plus = math.sqrt((M + root) / 2.0)
    nu_minus = math.sqrt(2.0 * sf.D / (M + root))
    if nu_minus < 1.0 - PHYSICAL_TOL:
        raise NonPhysical(f"smallest symplectic eigenvalue {nu_minus!r} < 1")
    return nu_minus, nu_plus, (sf.dD + defect - root) / (M + root), (m_exc + root) / 2.0


def symplectic_eigenvalues(sf: StandardForm) -> tuple[float, float]:
    """``(nu_minus, nu_plus)`` from ``nu^2 = (M +- sqrt(M^2 - 4D)) / 2``."""
    return sf._spectrum[:2]


def _ptranspose_parts(sf: StandardForm) -> tuple[float, float]:
    defect = sf.defect
    m_exc = sf.dD - defect - 4.0 * sf.C
    linear = defect + 4.0 * sf.C
    root = _split_radicand(_sqrt_excess(sf.dD), linear, abs(defect) + 4.0 * abs(sf.C), m_exc, sf, "partial transpose")
    denom = 2.0 + m_exc + root
    # nu~^2 - 1 = (2D - M~ - root) / (M~ + root)
    return 2.0 * sf.D / denom, (sf.dD + defect + 4.0 * sf.C - root) / denom


def ptranspose_eigenvalue(sf: StandardForm) -> float:
    """Smallest symplectic eigenvalue of the partially transposed state."""
    nu2, _ = _ptranspose_parts(sf)
    return math.sqrt(nu2)


def ptranspose_log_eigenvalue(sf: StandardForm) -> float:
    """``ln`` of :func:`ptranspose_eigenvalue`, accurate when it is close to 1."""
    _, excess = _ptranspose_parts(sf)
    return 0.5 * math.log1p(excess)
