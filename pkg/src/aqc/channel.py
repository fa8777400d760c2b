"""Amplitude damping plus dephasing on one qubit, its Pauli twirl, and the
asymmetric Pauli channels driven by a total error probability p and ratio A.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from aqc.errors import ValidationError

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (I2, X, Y, Z)


@dataclass(frozen=True)
class RelaxationParams:
    T1: float
    T2: float
    t: float

    def __post_init__(self) -> None:
        if not (self.T1 > 0 and self.T2 > 0 and self.t > 0):
            raise ValidationError(f"T1, T2, t must be positive, got {self}")
        if self.T2 > 2 * self.T1 * (1 + 1e-12):
            raise ValidationError(f"T2 = {self.T2} exceeds 2*T1 = {2 * self.T1}: the channel is not CP")

    @property
    def gamma(self) -> float:
        return -math.expm1(-self.t / self.T1)

    @property
    def lam(self) -> float:
        # 1 - lambda - gamma = exp(-2t/T2)
        return max(0.0, math.exp(-self.t / self.T1) - math.exp(-2 * self.t / self.T2))


@dataclass(frozen=True)
class KrausSet:
    ops: tuple[np.ndarray, ...]
    gamma: float
    lam: float

    def completeness_error(self) -> float:
        S = sum(A.conj().T @ A for A in self.ops)
        return float(np.abs(S - I2).max())


@dataclass(frozen=True)
class PauliChannel:
    p_x: float
    p_y: float
    p_z: float

    def __post_init__(self) -> None:
        for v in (self.p_x, self.p_y, self.p_z, self.p_i):
            if not -1e-12 <= v <= 1 + 1e-12:
                raise ValidationError(f"probabilities out of range: {self}")

    @property
    def p_i(self) -> float:
        return 1.0 - self.p_x - self.p_y - self.p_z

    @property
    def A(self) -> float:
        if self.p_x == 0:
            raise ValidationError("asymmetry undefined when p_x = 0")
        return self.p_z / self.p_x

    def probabilities(self) -> np.ndarray:
        """(p_i, p_x, p_y, p_z)."""
        return np.array([self.p_i, self.p_x, self.p_y, self.p_z])


def kraus_ops(params: RelaxationParams) -> KrausSet:
    g, lam = params.gamma, params.lam
    # sqrt(1 - lambda - gamma) taken from its defining relation; the square root of
    # the computed difference loses ~8 digits when exp(-2t/T2) is tiny
    a0 = np.array([[1, 0], [0, math.exp(-params.t / params.T2)]], dtype=complex)
    a1 = np.array([[0, 0], [0, math.sqrt(lam)]], dtype=complex)
    a2 = np.array([[0, math.sqrt(g)], [0, 0]], dtype=complex)
    return KrausSet((a0, a1, a2), g, lam)


def apply_channel(k: KrausSet, rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    return sum(A @ rho @ A.conj().T for A in k.ops)


def twirl(channel: Callable[[np.ndarray], np.ndarray]) -> Callable[[np.ndarray], np.ndarray]:
    """rho -> 1/4 sum_P P^dag E(P rho P^dag) P."""
    def twirled(rho: np.ndarray) -> np.ndarray:
        return sum(P.conj().T @ channel(P @ rho @ P.conj().T) @ P for P in PAULIS) / 4
    return twirled


def chi_matrix(channel: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Process matrix chi_ab with E(rho) = sum_ab chi_ab P_a rho P_b^dag (order I, X, Y, Z)."""
    J = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            E = np.zeros((2, 2), dtype=complex)
            E[i, j] = 1
            J += np.kron(channel(E), E)
    V = np.stack([P.reshape(-1) for P in PAULIS], axis=1)
    return V.conj().T @ J @ V / 4


def pauli_twirl_numeric(k: KrausSet, return_chi: bool = False):
    chi = chi_matrix(twirl(lambda rho: apply_channel(k, rho)))
    d = chi.diagonal().real
    ch = PauliChannel(float(d[1]), float(d[2]), float(d[3]))
    return (ch, chi) if return_chi else ch


def pauli_twirl_closed(params: RelaxationParams) -> PauliChannel:
    px = -math.expm1(-params.t / params.T1) / 4
    pz = 0.5 - px - 0.5 * math.exp(-params.t / params.T2)
    return PauliChannel(px, px, pz)


def asymmetry_exact(params: RelaxationParams) -> float:
    """p_z/p_x in the closed form 1 + 2(1 - e^{t/T1 (1 - T1/T2)})/(e^{t/T1} - 1)."""
    r = params.t / params.T1
    return 1 + 2 * (-math.expm1(r * (1 - params.T1 / params.T2))) / math.expm1(r)


def asymmetry_approx(params: RelaxationParams) -> float:
    """Small-t limit 2 T1/T2 - 1."""
    return 2 * params.T1 / params.T2 - 1


def _check_pA(p: float, A: float) -> None:
    if not 0 <= p <= 1:
        raise ValidationError(f"total error probability must lie in [0, 1], got {p}")
    if not A >= 0 or math.isinf(A):
        raise ValidationError(f"asymmetry must be finite and >= 0, got {A}")


def pauli_from_total(p: float, A: float) -> PauliChannel:
    _check_pA(p, A)
    return PauliChannel(p / (A + 2), p / (A + 2), p * A / (A + 2))


def bsc_crossovers(p: float, A: float) -> tuple[float, float]:
    """(eps_x, eps_z) = (p_x + p_y, p_y + p_z)."""
    _check_pA(p, A)
    return 2 * p / (A + 2), p * (A + 1) / (A + 2)
