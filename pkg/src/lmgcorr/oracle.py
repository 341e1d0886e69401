"""Exact finite-N ground states in the maximal-spin sector and their correlations.

Basis states are labelled by the excitation number ``k = N/2 - M`` (number of
flipped spins).  A Dicke state of ``N`` spins splits over groups of sizes
``N1 + N2 = N`` as

    |N, k> = sum_k1 sqrt(C(N1, k1) C(N2, k - k1) / C(N, k)) |N1, k1>|N2, k - k1>

so every reduced state is built from the ground-state amplitudes and
log-binomial weights, never from the 2^N-dimensional space.

The Hamiltonian conserves the parity of ``k`` (it changes ``M`` by 0 or 2),
so the pentadiagonal matrix splits into two tridiagonal blocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln

from .errors import ConsistencyError, DimensionTooLarge, InvalidParameter, InvalidPartition

MAX_SPINS = 2048
MAX_DENSE_BLOCK = 4096
MAX_FULL_SPINS = 10
RESIDUAL_TOL = 1e-10


def _log_binom(n, k):
    n = np.asarray(n, dtype=float)
    k = np.asarray(k, dtype=float)
    return gammaln(n + 1.0) - gammaln(k + 1.0) - gammaln(n - k + 1.0)


def _entropy(p: np.ndarray) -> float:
    p = p[p > 0.0]
    return float(-(p * np.log(p)).sum())


@dataclass(frozen=True)
class DickeGroundState:
    """Lowest eigenstate of the collective Hamiltonian in the S = N/2 sector.

    ``amplitudes[i]`` belongs to ``M = -N/2 + i``.
    """

    n_spins: int
    amplitudes: np.ndarray
    energy: float
    gamma: float
    h: float

    @property
    def by_excitation(self) -> np.ndarray:
        """Amplitudes indexed by ``k = N/2 - M``."""
        return self.amplitudes[::-1]

    @cached_property
    def parity(self) -> int | None:
        """Parity of ``k`` shared by all nonzero amplitudes, or None if mixed."""
        psi = self.by_excitation
        even = np.any(psi[0::2] != 0.0)
        odd = np.any(psi[1::2] != 0.0)
        if even and odd:
            return None
        return 0 if even else 1


def _sector_matrix(n: int, gamma: float, h: float) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and second off-diagonal of H in the k basis."""
    S = n / 2.0
    k = np.arange(n + 1, dtype=float)
    M = S - k
    cas = S * (S + 1.0)
    diag = -(1.0 + gamma) / (2.0 * n) * (cas - M * M) - h * M
    # <M+2| S+^2 |M> for M = S - k, k = 2..n
    Mk = M[2:]
    lift = np.sqrt((cas - Mk * (Mk + 1.0)) * (cas - (Mk + 1.0) * (Mk + 2.0)))
    off2 = -(1.0 - gamma) / (4.0 * n) * lift
    return diag, off2


def _apply(diag: np.ndarray, off2: np.ndarray, v: np.ndarray) -> np.ndarray:
    out = diag * v
    out[:-2] += off2 * v[2:]
    out[2:] += off2 * v[:-2]
    return out


def exact_ground_state(n: int, gamma: float, h: float) -> DickeGroundState:
    """Lowest eigenpair of ``-(Sx^2 + gamma Sy^2)/N - h Sz`` for ``n`` spins.

    The two parity sectors are diagonalised separately; the even sector
    wins exact ties.
    """
    if not (isinstance(n, (int, np.integer)) and n >= 2):
        raise InvalidParameter(f"need an integer N >= 2, got {n!r}")
    if n > MAX_SPINS:
        raise DimensionTooLarge(f"N = {n} exceeds the cap of {MAX_SPINS}")
    if not (0.0 <= gamma < 1.0 and h >= 0.0):
        raise InvalidParameter(f"need 0 <= gamma < 1 and h >= 0, got {gamma!r}, {h!r}")
    n = int(n)
    diag, off2 = _sector_matrix(n, gamma, h)

    best = None
    for parity in (0, 1):
        d = diag[parity::2]
        e = off2[parity::2]
        if d.size == 0:
            continue
        if d.size == 1:
            w, v = d[:1].copy(), np.ones((1, 1))
        else:
            w, v = eigh_tridiagonal(d, e[: d.size - 1], select="i", select_range=(0, 0))
        if best is None or w[0] < best[0]:
            best = (w[0], parity, v[:, 0])

    energy, parity, vec = best
    psi = np.zeros(n + 1)
    psi[parity::2] = vec
    # off-diagonals are <= 0, so the ground state can be taken nonnegative
    if psi.sum() < 0.0:
        psi = -psi
    psi /= np.linalg.norm(psi)

    residual = np.linalg.norm(_apply(diag, off2, psi) - energy * psi)
    scale = max(1.0, float(np.abs(diag).max()))
    if residual > RESIDUAL_TOL * scale:
        raise ConsistencyError(f"eigenpair residual {residual:.3e} exceeds tolerance")
    return DickeGroundState(n, psi[::-1].copy(), float(energy), float(gamma), float(h))


def mean_field_energy_per_spin(gamma: float, h: float) -> float:
    """Classical (N -> infinity) ground-state energy per spin."""
    if h >= 1.0:
        return -h / 2.0
    return -(1.0 + h * h) / 4.0


def split_dicke(n: int, n1: int, k_total: int) -> np.ndarray:
    """Weights of ``|n1, k1>|n - n1, k_total - k1>`` in the Dicke state ``|n, k_total>``.

    Entry ``i`` belongs to ``k1 = max(0, k_total - (n - n1)) + i``; the
    squares sum to one.
    """
    if not 1 <= n1 < n:
        raise InvalidPartition(f"need 1 <= N1 < N, got N1={n1}, N={n}")
    if not 0 <= k_total <= n:
        raise ValueError(f"need 0 <= k <= N, got k={k_total}")
    n2 = n - n1
    k1 = np.arange(max(0, k_total - n2), min(k_total, n1) + 1)
    logw = _log_binom(n1, k1) + _log_binom(n2, k_total - k1) - _log_binom(n, k_total)
    return np.exp(0.5 * logw)


def _bipartite_amplitudes(state: DickeGroundState, n1: int) -> np.ndarray:
    """Matrix ``Psi[k1, k2]`` of the ground state across groups (n1, N - n1)."""
    n = state.n_spins
    if not 1 <= n1 < n:
        raise InvalidPartition(f"need 1 <= N1 < N, got N1={n1}, N={n}")
    n2 = n - n1
    k1 = np.arange(n1 + 1)[:, None]
    k2 = np.arange(n2 + 1)[None, :]
    k = k1 + k2
    weight = np.exp(0.5 * (_log_binom(n1, k1) + _log_binom(n2, k2) - _log_binom(n, k)))
    return state.by_excitation[k] * weight


def schmidt_spectrum(state: DickeGroundState, n1: int) -> np.ndarray:
    """Schmidt probabilities across the cut (n1, N - n1), descending."""
    s = np.linalg.svd(_bipartite_amplitudes(state, n1), compute_uv=False)
    return s * s


def bipartite_entropy_exact(state: DickeGroundState, n1: int) -> float:
    """Entanglement entropy (nats) between the first ``n1`` spins and the rest."""
    return _entropy(schmidt_spectrum(state, n1))


@dataclass
class PartitionedState:
    """Reduced state of groups one and three of a tripartition of a Dicke ground state."""

    group_sizes: tuple[int, int, int]
    rho1: np.ndarray
    rho3: np.ndarray
    rho13_spectrum: np.ndarray
    ptranspose_spectrum: np.ndarray
    _weights: np.ndarray = field(repr=False)
    _gram: np.ndarray = field(repr=False)

    def rho13(self) -> np.ndarray:
        """Dense reduced matrix over ``|k1>|k3>`` (row index ``k1 * (N3 + 1) + k3``)."""
        n1, _, n3 = self.group_sizes
        i = np.repeat(np.arange(n1 + 1), n3 + 1)
        j = np.tile(np.arange(n3 + 1), n1 + 1)
        s = i + j
        return np.outer(self._weights, self._weights) * self._gram[np.ix_(s, s)]

    @property
    def entropy1(self) -> float:
        return _entropy(np.linalg.eigvalsh(self.rho1))

    @property
    def entropy3(self) -> float:
        return _entropy(np.linalg.eigvalsh(self.rho3))

    @property
    def entropy13(self) -> float:
        return _entropy(self.rho13_spectrum)

    @property
    def mutual_information(self) -> float:
        """``S1 + S3 - S13``, nats."""
        return self.entropy1 + self.entropy3 - self.entropy13

    @property
    def log_negativity(self) -> float:
        """``ln`` of the trace norm of the partial transpose, nats."""
        return float(math.log(np.abs(self.ptranspose_spectrum).sum()))


def tripartite_reduced_exact(state: DickeGroundState, n1: int, n3: int) -> PartitionedState:
    """Trace out the middle ``N - n1 - n3`` spins and analyse the rest."""
    n = state.n_spins
    n2 = n - n1 - n3
    if n1 < 1 or n3 < 1 or n2 < 1:
        raise InvalidPartition(f"need N1, N3 >= 1 and N1 + N3 < N, got {n1}, {n3}, N={n}")
    dim = (n1 + 1) * (n3 + 1)
    largest_block = dim if state.parity is None else (dim + 1) // 2
    if largest_block > MAX_DENSE_BLOCK:
        raise DimensionTooLarge(f"reduced block dimension {largest_block} exceeds {MAX_DENSE_BLOCK}")

    psi = state.by_excitation
    # T[k1, k2, k3] = g1(k1) g3(k3) F[k2, k1 + k3]
    k2 = np.arange(n2 + 1)[:, None]
    s = np.arange(n1 + n3 + 1)[None, :]
    F = psi[k2 + s] * np.exp(0.5 * (_log_binom(n2, k2) - _log_binom(n, k2 + s)))
    g1 = np.exp(0.5 * _log_binom(n1, np.arange(n1 + 1)))
    g3 = np.exp(0.5 * _log_binom(n3, np.arange(n3 + 1)))
    gram = F.T @ F  # G[s, s'] = sum_k2 F[k2, s] F[k2, s']

    i = np.repeat(np.arange(n1 + 1), n3 + 1)
    j = np.tile(np.arange(n3 + 1), n1 + 1)
    w = g1[i] * g3[j]

    # rho13[(i,j),(i',j')] = w w' G[i+j, i'+j'];  its nonzero spectrum is that of
    # the (N2+1)-dimensional Gram matrix of T over k2
    T = (g1[:, None, None] * g3[None, None, :]) * F[:, (np.arange(n1 + 1)[:, None] + np.arange(n3 + 1)[None, :])].transpose(1, 0, 2)
    mat = T.transpose(0, 2, 1).reshape(dim, n2 + 1)
    rho13_spectrum = np.clip(np.linalg.eigvalsh(mat.T @ mat), 0.0, None)

    rho1 = np.einsum("akc,bkc->ab", T, T)
    rho3 = np.einsum("cka,ckb->ab", T, T)

    # partial transpose on group three: (i,j),(i',j') -> G[i+j', i'+j]
    blocks = [np.arange(dim)] if state.parity is None else [
        np.flatnonzero((i + j) % 2 == 0),
        np.flatnonzero((i + j) % 2 == 1),
    ]
    eigs = []
    for idx in blocks:
        if idx.size == 0:
            continue
        bi, bj = i[idx], j[idx]
        cross = bi[:, None] + bj[None, :]
        block = np.outer(w[idx], w[idx]) * gram[cross, cross.T]
        eigs.append(np.linalg.eigvalsh(block))
    pt_spectrum = np.concatenate(eigs)

    trace = float(np.trace(rho1))
    if abs(trace - 1.0) > 1e-12 or abs(rho13_spectrum.sum() - 1.0) > 1e-12:
        raise ConsistencyError(f"reduced states lost normalisation (trace {trace!r})")
    return PartitionedState((n1, n2, n3), rho1, rho3, rho13_spectrum, pt_spectrum, w, gram)


def _pauli_collective(n: int):
    sx = np.array([[0.0, 1.0], [1.0, 0.0]])
    sy = np.array([[0.0, -1j], [1j, 0.0]])
    sz = np.diag([1.0, -1.0])
    eye = np.eye(2)

    def total(op):
        acc = np.zeros((2**n, 2**n), dtype=complex)
        for site in range(n):
            term = np.ones((1, 1))
            for other in range(n):
                term = np.kron(term, op if other == site else eye)
            acc += term
        return acc / 2.0

    return total(sx), total(sy), total(sz)


def full_space_hamiltonian(n: int, gamma: float, h: float) -> np.ndarray:
    """Dense ``2^n`` matrix of the collective Hamiltonian, for validating the sector restriction."""
    if n > MAX_FULL_SPINS:
        raise DimensionTooLarge(f"full 2^N matrix capped at N = {MAX_FULL_SPINS}")
    Sx, Sy, Sz = _pauli_collective(n)
    H = -(Sx @ Sx + gamma * (Sy @ Sy)) / n - h * Sz
    return H
