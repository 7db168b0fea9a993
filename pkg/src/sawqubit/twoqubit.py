"""Coulomb-coupled two-dot gate construction.

Pipeline: per-dot position matrix elements -> Pauli decomposition of the
quadratic inter-channel Coulomb coupling -> interaction-picture Hamiltonian
(with counter-rotating terms) -> rotating-wave closed-form iSWAP propagator
and a numerically time-ordered full propagator for fidelity comparison.

Basis ordering everywhere: |11>, |10>, |01>, |00> (upper qubit first).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .constants import PhysicalConstants, CONSTANTS
from .eigensolver import EigenPair, Grid, matrix_element

UNITARITY_TOL = 1e-10

# Single-qubit operators in the (|1>, |0>) basis.
_SZ = np.array([[1.0, 0.0], [0.0, -1.0]])
_SX = np.array([[0.0, 1.0], [1.0, 0.0]])
_SP = np.array([[0.0, 1.0], [0.0, 0.0]])  # |1><0|
_SM = np.array([[0.0, 0.0], [1.0, 0.0]])  # |0><1|
_ID = np.eye(2)


def _upper(op):
    return np.kron(op, _ID)


def _lower(op):
    return np.kron(_ID, op)


class RwaDetuningWarning(UserWarning):
    """Interaction-picture frequencies differ beyond the configured threshold."""


class QuadraticExpansionWarning(UserWarning):
    """Dot displacement too large for the quadratic Coulomb expansion."""


@dataclass(frozen=True)
class ZMatrixElements:
    """Per-dot position matrix elements in the two-level subspace (m)."""

    z00: float
    z11: float
    z01: float


def dot_matrix_elements(psi0: EigenPair, psi1: EigenPair,
                        grid: Grid) -> ZMatrixElements:
    """<0|z|0>, <1|z|1>, <0|z|1> in the grid's length unit."""
    def ident(z):
        return z

    return ZMatrixElements(
        z00=matrix_element(psi0, psi0, ident, grid),
        z11=matrix_element(psi1, psi1, ident, grid),
        z01=matrix_element(psi0, psi1, ident, grid),
    )


@dataclass(frozen=True)
class PauliCoefficients:
    """The eight Coulomb-coupling coefficients (J) and effective frequencies."""

    cu_z: float
    cl_z: float
    cu_x: float
    cl_x: float
    c_zz: float
    c_xx: float
    c_zx: float
    c_xz: float
    lambda_u: float  # hbar*omega_u/2 + C_u^z (J)
    lambda_l: float


def coulomb_pauli_coefficients(zu: ZMatrixElements, zl: ZMatrixElements,
                               d: float, constants: PhysicalConstants = CONSTANTS,
                               omega_u: float = 0.0, omega_l: float = 0.0,
                               expansion_guard: float = 0.3) -> PauliCoefficients:
    """Pauli decomposition of the quadratic inter-channel Coulomb coupling.

    ``omega_u``/``omega_l`` are the qubit transition frequencies (rad/s)
    entering the interaction-picture frequencies lambda_j.
    """
    if not (d > 0):
        raise ValueError("channel separation d must be positive")
    span = max(abs(zu.z00), abs(zu.z11), abs(zl.z00), abs(zl.z11))
    if 2.0 * span > expansion_guard * d:
        warnings.warn(
            f"dot displacements (~{span:.3e} m) approach the channel "
            f"separation d={d:.3e} m; quadratic Coulomb expansion degrades",
            QuadraticExpansionWarning, stacklevel=2)
    q = constants.elementary_charge**2 / (
        4.0 * math.pi * constants.vacuum_permittivity * d**3)
    su = zu.z00 + zu.z11
    sl = zl.z00 + zl.z11
    du = zu.z11 - zu.z00
    dl = zl.z11 - zl.z00
    cu_z = (q / 4.0) * (su - sl) * du
    cl_z = (q / 4.0) * (sl - su) * dl
    cu_x = (q / 2.0) * (su - sl) * zu.z01
    cl_x = (q / 2.0) * (sl - su) * zl.z01
    c_zz = -(q / 4.0) * du * dl
    c_xx = -q * zu.z01 * zl.z01
    c_zx = -(q / 2.0) * du * zl.z01
    c_xz = -(q / 2.0) * dl * zu.z01
    hbar = constants.hbar
    return PauliCoefficients(
        cu_z=cu_z, cl_z=cl_z, cu_x=cu_x, cl_x=cl_x,
        c_zz=c_zz, c_xx=c_xx, c_zx=c_zx, c_xz=c_xz,
        lambda_u=hbar * omega_u / 2.0 + cu_z,
        lambda_l=hbar * omega_l / 2.0 + cl_z,
    )


@dataclass(frozen=True)
class TwoQubitPropagator:
    """4x4 unitary in the |11>, |10>, |01>, |00> basis."""

    matrix: np.ndarray
    method: str  # "rwa_closed_form" | "time_ordered_full"

    def unitarity_defect(self) -> float:
        u = self.matrix
        return float(np.max(np.abs(u.conj().T @ u - np.eye(4))))


def rwa_hamiltonian(coeffs: PauliCoefficients,
                    detuning_threshold: float = 1e-3) -> np.ndarray:
    """Rotating-wave effective coupling C^xx (s+ s- + s- s+), as a 4x4 matrix.

    Warns (RwaDetuningWarning) when lambda_u and lambda_l differ enough that
    the surviving exchange term is itself detuned.
    """
    lu, ll = coeffs.lambda_u, coeffs.lambda_l
    denom = min(abs(lu), abs(ll))
    if denom > 0 and abs(lu - ll) / denom > detuning_threshold:
        warnings.warn(
            f"interaction-picture detuning |lambda_u-lambda_l|/min="
            f"{abs(lu - ll) / denom:.3e} exceeds {detuning_threshold:.1e}; "
            "the exchange term is not exactly co-rotating",
            RwaDetuningWarning, stacklevel=2)
    return coeffs.c_xx * (_upper(_SP) @ _lower(_SM) + _upper(_SM) @ _lower(_SP))


def iswap_propagator(coeffs: PauliCoefficients, t: float,
                     constants: PhysicalConstants = CONSTANTS) -> TwoQubitPropagator:
    """Closed-form propagator of the rotating-wave exchange coupling.

    xi = t C^xx / hbar; the |10>/|01> block is [[cos xi, -i sin xi],
    [-i sin xi, cos xi]], the |11> and |00> amplitudes are untouched.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    xi = t * coeffs.c_xx / constants.hbar
    u = np.eye(4, dtype=complex)
    u[1, 1] = u[2, 2] = math.cos(xi)
    u[1, 2] = u[2, 1] = -1j * math.sin(xi)
    return TwoQubitPropagator(matrix=u, method="rwa_closed_form")


def gate_time_for_iswap(coeffs: PauliCoefficients,
                        constants: PhysicalConstants = CONSTANTS) -> float:
    """Time at which |xi| reaches pi/2 (the iSWAP point)."""
    if coeffs.c_xx == 0:
        raise ValueError("c_xx is zero; no exchange coupling, no iSWAP")
    return (math.pi / 2.0) * constants.hbar / abs(coeffs.c_xx)


# Constant two-qubit operators for the interaction Hamiltonian.
_SZZ = _upper(_SZ) @ _lower(_SZ)
_SPU = _upper(_SP)
_SMU = _upper(_SM)
_SPL = _lower(_SP)
_SML = _lower(_SM)
_SPSP = _SPU @ _SPL
_SPSM = _SPU @ _SML
_SMSM = _SPSP.conj().T
_SMSP = _SPSM.conj().T
_SZU_SPL = _upper(_SZ) @ _SPL
_SZU_SML = _upper(_SZ) @ _SML
_SPU_SZL = _SPU @ _lower(_SZ)
_SMU_SZL = _SMU @ _lower(_SZ)


class StepSizeViolation(ValueError):
    """Propagator step too coarse for the interaction-picture frequencies."""


def _reunitarize(u: np.ndarray) -> np.ndarray:
    """Nearest unitary (polar projection); curbs float drift over long
    step-product accumulations."""
    w, _, vh = np.linalg.svd(u)
    return w @ vh


def interaction_hamiltonian(coeffs: PauliCoefficients, t,
                            constants: PhysicalConstants = CONSTANTS) -> np.ndarray:
    """Full interaction-picture Hamiltonian, counter-rotating terms included.

    ``t`` may be a scalar (returns 4x4) or an array (returns stacked
    (len(t), 4, 4)).
    """
    hbar = constants.hbar
    t = np.asarray(t, dtype=float)
    tt = t[..., None, None]
    eu = np.exp(2j * coeffs.lambda_u / hbar * tt)
    el = np.exp(2j * coeffs.lambda_l / hbar * tt)
    h = coeffs.c_zz * _SZZ + np.zeros_like(eu)
    h = h + coeffs.cu_x * (eu * _SPU + eu.conj() * _SMU)
    h = h + coeffs.cl_x * (el * _SPL + el.conj() * _SML)
    h = h + coeffs.c_xx * (eu * el * _SPSP + eu * el.conj() * _SPSM
                           + (eu * el).conj() * _SMSM + eu.conj() * el * _SMSP)
    h = h + coeffs.c_zx * (el * _SZU_SPL + el.conj() * _SZU_SML)
    h = h + coeffs.c_xz * (eu * _SPU_SZL + eu.conj() * _SMU_SZL)
    return h


def full_interaction_propagator(coeffs: PauliCoefficients, t: float, dt: float,
                                constants: PhysicalConstants = CONSTANTS,
                                chunk: int = 65536) -> TwoQubitPropagator:
    """Time-ordered product of midpoint-step exponentials of the full Hamiltonian.

    Each step uses the exact unitary exponential of the 4x4 Hermitian matrix
    (batched eigendecomposition).
    """
    hbar = constants.hbar
    lmax = max(abs(coeffs.lambda_u), abs(coeffs.lambda_l))
    if lmax > 0 and dt > hbar / (200.0 * lmax):
        raise StepSizeViolation(
            f"dt={dt:.3e} exceeds hbar/(200*max|lambda|)={hbar / (200.0 * lmax):.3e}")
    n_steps = max(1, int(math.ceil(t / dt)))
    dt = t / n_steps
    u = np.eye(4, dtype=complex)
    for start in range(0, n_steps, chunk):
        stop = min(start + chunk, n_steps)
        mids = (np.arange(start, stop) + 0.5) * dt
        hs = interaction_hamiltonian(coeffs, mids, constants)
        w, v = np.linalg.eigh(hs)
        phases = np.exp(-1j * w * dt / hbar)
        steps = np.einsum("nij,nj,nkj->nik", v, phases, v.conj())
        for s in steps:
            u = s @ u
        u = _reunitarize(u)
    prop = TwoQubitPropagator(matrix=u, method="time_ordered_full")
    defect = prop.unitarity_defect()
    if defect > UNITARITY_TOL:
        raise StepSizeViolation(
            f"accumulated propagator lost unitarity: defect {defect:.3e}")
    return prop


def fidelity_sweep(coeffs: PauliCoefficients, times, dt: float,
                   constants: PhysicalConstants = CONSTANTS) -> np.ndarray:
    """Fidelity of the full propagator against the closed form at each time.

    One cumulative time-ordered propagation with snapshots at the requested
    times (rounded to step boundaries), so the sweep costs the same as a
    single propagation to max(times).
    """
    hbar = constants.hbar
    lmax = max(abs(coeffs.lambda_u), abs(coeffs.lambda_l))
    if lmax > 0 and dt > hbar / (200.0 * lmax):
        raise StepSizeViolation(
            f"dt={dt:.3e} exceeds hbar/(200*max|lambda|)={hbar / (200.0 * lmax):.3e}")
    times = np.asarray(times, dtype=float)
    if times.size == 0 or np.any(times < 0) or not np.all(np.diff(times) > 0):
        raise ValueError("times must be nonempty, nonnegative, increasing")
    t_max = float(times[-1])
    n_steps = max(1, int(math.ceil(t_max / dt)))
    dt = t_max / n_steps
    snap_steps = np.rint(times / dt).astype(int)
    mids = (np.arange(n_steps) + 0.5) * dt
    hs = interaction_hamiltonian(coeffs, mids, constants)
    w, v = np.linalg.eigh(hs)
    phases = np.exp(-1j * w * dt / hbar)
    steps = np.einsum("nij,nj,nkj->nik", v, phases, v.conj())
    u = np.eye(4, dtype=complex)
    out = np.empty(times.size)
    cursor = 0
    for k in range(times.size):
        target = snap_steps[k]
        while cursor < target:
            u = steps[cursor] @ u
            cursor += 1
            if cursor % 65536 == 0:
                u = _reunitarize(u)
        full = TwoQubitPropagator(matrix=u, method="time_ordered_full")
        out[k] = gate_fidelity(full, iswap_propagator(coeffs, cursor * dt,
                                                      constants))
    return out


def gate_fidelity(U_a: TwoQubitPropagator, U_b: TwoQubitPropagator) -> float:
    """Global-phase-invariant overlap |Tr(Ua^dag Ub)| / 4."""
    return float(abs(np.trace(U_a.matrix.conj().T @ U_b.matrix)) / 4.0)
