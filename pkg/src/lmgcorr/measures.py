"""Classical correlation, Gaussian discord, EoF and negativity of two-mode states.

Discord and classical correlation use the Gaussian-measurement optimum
``E^min`` (measurement on the second mode) and natural logarithms.
Entanglement of formation is reported in bits, as in its usual closed form
for symmetric Gaussian states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import ClassVar

from .errors import ConsistencyError, DomainError
from .gaussian import (
    StandardForm,
    _clamped_sqrt,
    bipartite_covariance,
    covariance,
    ptranspose_log_eigenvalue,
    standard_form,
    tripartite_covariance,
)
from .model import ModelPoint, alpha_parts

LN2 = math.log(2.0)
F_DOMAIN_TOL = 1e-10
TIE_RTOL = 1e-9
BRANCH_AGREEMENT = 1e-8
NEGATIVE_FLOOR = 1e-10


def _f_excess(u: float) -> float:
    # f(1 + u), accurate for small u
    if u <= 0.0:
        return 0.0
    half = 0.5 * u
    return (1.0 + half) * math.log1p(half) - half * math.log(half)


def _sqrt_excess(d: float) -> float:
    # sqrt(1 + d) - 1 without cancellation
    return d / (1.0 + math.sqrt(1.0 + d))


def entropy_f(x: float) -> float:
    """Von Neumann entropy (nats) of a single mode with symplectic eigenvalue ``x``."""
    if x < 1.0 - F_DOMAIN_TOL:
        raise DomainError(f"entropy function needs x >= 1, got {x!r}")
    return _f_excess(x - 1.0)


@dataclass(frozen=True)
class Emin:
    value: float
    excess: float  # value - 1
    branch: str


def _emin(sf: StandardForm) -> Emin:
    x, y, z, C = sf.dA, sf.dB, sf.dD, sf.C
    B, D = sf.B, sf.D
    if C == 0.0:
        return Emin(sf.A, x, "uncorrelated")

    # the excesses and C can be tiny; products are formed after dividing by s
    s = max(abs(x), abs(y), abs(z), abs(C))
    xs, ys, zs, Cs = x / s, y / s, z / s, C / s
    fs = sf.defect / s  # D - M + 1, exactly 0 for model states
    ac = abs(Cs)
    # branch choice: sign of (D - AB)^2 - (B + 1) C^2 (A + D), written with
    # D - AB - 2C = defect - xy so that its leading orders cancel analytically
    e_minus = fs - x * ys  # (D - AB - 2C) / s
    e_plus = e_minus + 4.0 * Cs  # (D - AB + 2C) / s
    tail = Cs * Cs * (2.0 * (x + y + z) + y * (x + z))
    diff = e_minus * e_plus - tail
    tie = abs(diff) <= TIE_RTOL * (abs(e_minus * e_plus) + abs(tail))
    use_first = diff <= 0.0 and y != 0.0

    def first() -> Emin:
        cross = ys * (zs - xs)
        root = _clamped_sqrt(Cs * Cs + cross, Cs * Cs + abs(cross), "E^min (first branch)")
        top = ac + root
        # numerator 2C^2 + (B-1)(D-A) + 2|C| sqrt(...) is the perfect square (s top)^2
        return Emin((top / ys) ** 2, ((top - abs(ys)) / ys) * ((top + abs(ys)) / ys), "branch1")

    def second() -> Emin:
        c2 = C * C
        q = _sqrt_excess(x + y + x * y)  # sqrt(AB) - 1
        # (D - AB - C^2)^2 - 4 AB C^2 = F G
        f = e_minus + 2.0 * (Cs + ac) - C * Cs + 2.0 * ac * q
        g = e_minus + 2.0 * (Cs - ac) - C * Cs - 2.0 * ac * q
        # C +- |C| is exact; only a subtracted defect brings first-order rounding
        common = abs(fs) + abs(x * ys) + abs(C * Cs) + 2.0 * ac * abs(q)
        if sf.sum_defect is None:
            common += abs(xs) + abs(ys) + abs(zs) + 2.0 * ac
        f_terms = common + 2.0 * abs(Cs + ac)
        g_terms = common + 2.0 * abs(Cs - ac)
        root = s * _clamped_sqrt(f * g, f_terms * g_terms, "E^min (second branch)")
        ab = 1.0 + x + y + x * y
        return Emin((ab - c2 + D - root) / (2.0 * B), (x - y + x * y + z - c2 - root) / (2.0 * B), "branch2")

    if tie and y != 0.0:
        e1, e2 = first(), second()
        if abs(e1.value - e2.value) > BRANCH_AGREEMENT * max(1.0, e1.value):
            raise ConsistencyError(f"E^min branches disagree at crossover: {e1.value!r} vs {e2.value!r}")
        chosen = e1 if use_first else e2
        result = Emin(chosen.value, chosen.excess, "tie")
    else:
        result = first() if use_first else second()
    if result.value < 1.0 - F_DOMAIN_TOL:
        raise ConsistencyError(f"E^min = {result.value!r} < 1")
    return result


def emin(sf: StandardForm) -> tuple[float, str]:
    """Optimal conditional determinant ``E^min`` and the branch that produced it.

    ``branch`` is ``"branch1"`` or ``"branch2"`` for the two closed forms,
    ``"tie"`` on their crossover surface (both evaluated and required to
    agree) and ``"uncorrelated"`` when ``C = 0``, where ``E^min = A``.
    """
    e = _emin(sf)
    return e.value, e.branch


def emin_tripartite_specialized(alpha: float, tau: float) -> float:
    """``E^min`` of the equal tripartition written directly in ``alpha`` and ``tau``."""
    a, t = alpha, tau
    if a == 1.0:
        return 1.0
    d = (a - 1.0) ** 2
    mu = 2.0 * a * (a * (t - 1.0) - t) * (1.0 + (a - 1.0) * t)
    num = (
        -2.0 * a * a
        - 4.0 * d * a * t
        - d * (1.0 + (a - 8.0) * a) * t * t
        + 2.0 * d * d * t**3
        + abs(d**1.5) * (a + 1.0) * t * t * (1.0 - 2.0 * t)
    )
    return num / mu


def _f_sqrt(d: float) -> float:
    return _f_excess(_sqrt_excess(d))


def _floor(value: float, name: str) -> float:
    if value < 0.0:
        if value < -NEGATIVE_FLOOR:
            raise ConsistencyError(f"{name} = {value!r} is negative")
        return 0.0
    return value


def classical_correlation(sf: StandardForm) -> float:
    """CC = f(sqrt A) - f(sqrt E^min), nats."""
    e = _emin(sf)
    return _floor(_f_sqrt(sf.dA) - _f_sqrt(e.excess), "classical correlation")


def quantum_discord(sf: StandardForm) -> float:
    """QD = f(sqrt B) - f(nu_-) - f(nu_+) + f(sqrt E^min), nats."""
    e = _emin(sf)
    ex_minus, ex_plus = sf.nu_squared_excess
    value = _f_sqrt(sf.dB) - _f_sqrt(ex_minus) - _f_sqrt(ex_plus) + _f_sqrt(e.excess)
    return _floor(value, "quantum discord")


def mutual_information(sf: StandardForm) -> float:
    """Total correlation S(A) + S(B) - S(AB), nats."""
    ex_minus, ex_plus = sf.nu_squared_excess
    value = _f_sqrt(sf.dA) + _f_sqrt(sf.dB) - _f_sqrt(ex_minus) - _f_sqrt(ex_plus)
    return _floor(value, "mutual information")


def log_negativity(sf: StandardForm) -> float:
    """``max(0, -ln nu~_-)``, nats."""
    return max(0.0, -ptranspose_log_eigenvalue(sf))


def bipartite_closed_form(point: ModelPoint) -> float:
    """CC = QD of a bipartition, f(sqrt A) with A from its closed form."""
    if point.partition != "bi":
        raise ValueError("closed form applies to bipartitions only")
    sf = standard_form(bipartite_covariance(point))
    return _f_sqrt(sf.dA)


def _eof_from_deficit(u: float) -> float:
    # EoF in bits from u = 1 - delta, which is known more accurately than delta
    if u <= 0.0:
        return 0.0
    c_minus = u * u / (4.0 * (1.0 - u))
    if c_minus == 0.0:  # u below ~1e-154
        return 0.0
    c_plus = 1.0 + c_minus
    return (c_plus * math.log1p(c_minus) - c_minus * math.log(c_minus)) / LN2


def eof_function(delta: float) -> float:
    """EoF in bits of a symmetric two-mode state with parameter ``delta`` in (0, 1]."""
    if not delta > 0.0:
        raise DomainError(f"EoF parameter must be positive, got {delta!r}")
    return _eof_from_deficit(1.0 - delta)


def _eof_bipartite(point: ModelPoint, sf: StandardForm) -> float:
    a, beta = alpha_parts(point)
    t = point.tau
    c = abs(beta) * math.sqrt((1.0 - t) * t / a)
    # delta = a - c = (A - c^2)/(a + c) and A - c^2 = 1 up to rounding
    excess = sf.dA - c * c
    deficit = (_sqrt_excess(sf.dA) + c - excess) / (sf.a + c)
    if deficit >= 1.0:
        raise DomainError(f"EoF parameter a - c = {1.0 - deficit!r} is not positive")
    return _eof_from_deficit(deficit)


def _tripartite_eof_terms(point: ModelPoint, sf: StandardForm) -> tuple[float, float]:
    a, beta = alpha_parts(point)
    t = point.tau
    bt = beta * t
    k1 = math.sqrt(bt * bt * (1.0 - bt) / (a * (a + bt)))
    k2 = bt * bt / (a * k1) if k1 > 0.0 else 0.0
    delta = math.sqrt((sf.a - k1) * (sf.a - k2))
    # 1 - delta^2 = a (k1 + k2) - k1 k2 - (A - 1), free of cancellation
    deficit = (sf.a * (k1 + k2) - k1 * k2 - sf.dA) / (1.0 + delta)
    return delta, deficit


def tripartite_eof_parameter(point: ModelPoint, sf: StandardForm | None = None) -> float:
    """``Delta = sqrt((sqrt A - k1)(sqrt A - k2))`` for the equal tripartition."""
    if sf is None:
        sf = standard_form(tripartite_covariance(point))
    return _tripartite_eof_terms(point, sf)[0]


def _eof_tripartite(point: ModelPoint, sf: StandardForm) -> float:
    delta, deficit = _tripartite_eof_terms(point, sf)
    # separable reduced state: no entanglement to form
    if deficit <= 0.0 or ptranspose_log_eigenvalue(sf) >= 0.0:
        return 0.0
    return _eof_from_deficit(deficit)


def eof_bipartite(point: ModelPoint) -> float:
    """Entanglement of formation between complementary groups, bits."""
    if point.partition != "bi":
        raise ValueError("eof_bipartite needs a bipartite ModelPoint")
    return _eof_bipartite(point, standard_form(bipartite_covariance(point)))


def eof_tripartite(point: ModelPoint) -> float:
    """Entanglement of formation between the outer groups of a tripartition, bits."""
    if point.partition != "tri":
        raise ValueError("eof_tripartite needs a tripartite ModelPoint")
    return _eof_tripartite(point, standard_form(tripartite_covariance(point)))


@dataclass(frozen=True)
class CorrelationReport:
    cc: float
    qd: float
    mutual_information: float
    eof: float
    ln_neg: float
    e_min: float
    branch: str

    units: ClassVar[dict[str, str]] = {
        "cc": "nats",
        "qd": "nats",
        "mutual_information": "nats",
        "eof": "bits",
        "ln_neg": "nats",
    }

    def converted(self, units: str = "paper") -> dict[str, float]:
        """Measure values in ``"paper"`` (mixed), ``"nats"`` or ``"bits"`` units."""
        out = {}
        for name, unit in self.units.items():
            value = getattr(self, name)
            if units == "nats" and unit == "bits":
                value *= LN2
            elif units == "bits" and unit == "nats":
                value /= LN2
            elif units not in ("paper", "nats", "bits"):
                raise ValueError(f"unknown unit system {units!r}")
            out[name] = value
        return out


def correlations(point: ModelPoint) -> CorrelationReport:
    """Every correlation measure of the ground state at ``point``."""
    sf = standard_form(covariance(point))
    e = _emin(sf)
    if point.partition == "bi":
        eof = _eof_bipartite(point, sf)
    else:
        eof = _eof_tripartite(point, sf)
    return CorrelationReport(
        cc=classical_correlation(sf),
        qd=quantum_discord(sf),
        mutual_information=mutual_information(sf),
        eof=eof,
        ln_neg=log_negativity(sf),
        e_min=e.value,
        branch=e.branch,
    )
