"""Potential-energy functions of the moving-dot model.

All functions are pure, accept scalars or numpy arrays (SI units:
meters, seconds) and return SI energies (J) or their derivatives.
Grid sampling lives in :mod:`sawqubit.eigensolver`.
"""
from __future__ import annotations

import numpy as np

from .constants import PhysicalConstants, CONSTANTS
from .params import DerivedScales


def gate_potential(z, scales: DerivedScales, a: float):
    """Electrostatic split-gate barrier V0 / cosh^2(z/a)."""
    return scales.V0 / np.cosh(z / a) ** 2


def saw_potential(z, t, scales: DerivedScales):
    """Traveling piezoelectric wave V_S cos(k z - omega t)."""
    return scales.V_S * np.cos(scales.k * z - scales.omega_saw * t)


def effective_potential(z, t, scales: DerivedScales, a: float):
    """Gate barrier plus traveling SAW corrugation."""
    return gate_potential(z, scales, a) + saw_potential(z, t, scales)


def drive_potential(z, t, V_e: float, omega_drive: float, a: float):
    """Microwave drive V_e cos(omega t) / cosh^2(z/a)."""
    return V_e * np.cos(omega_drive * t) / np.cosh(z / a) ** 2


def saw_potential_time_derivative(z, t, scales: DerivedScales):
    """Analytic d/dt of the SAW potential: V_S omega sin(k z - omega t)."""
    return scales.V_S * scales.omega_saw * np.sin(scales.k * z - scales.omega_saw * t)


def coulomb_force(z_u, z_l, d: float,
                  constants: PhysicalConstants = CONSTANTS):
    """Longitudinal Coulomb force between the two channel electrons.

    Antisymmetric in (z_u, z_l); d > 0 keeps it singularity-free.
    """
    if not (d > 0):
        raise ValueError("channel separation d must be positive")
    dz = np.asarray(z_l, dtype=float) - np.asarray(z_u, dtype=float)
    pref = constants.elementary_charge**2 / (4.0 * np.pi * constants.vacuum_permittivity)
    out = pref * dz / (d**2 + dz**2) ** 1.5
    return out if out.shape else float(out)


def coulomb_potential_exact(z, d: float,
                            constants: PhysicalConstants = CONSTANTS):
    """Exact inter-channel Coulomb potential as a function of z = z_l - z_u.

    Zero at z = 0, saturating at e^2/(4 pi eps0 d) for |z| -> infinity.
    """
    if not (d > 0):
        raise ValueError("channel separation d must be positive")
    z = np.asarray(z, dtype=float)
    pref = constants.elementary_charge**2 / (4.0 * np.pi * constants.vacuum_permittivity * d)
    out = -pref * (1.0 / np.sqrt(1.0 + (z / d) ** 2) - 1.0)
    return out if out.shape else float(out)


def coulomb_potential_quadratic(z, d: float,
                                constants: PhysicalConstants = CONSTANTS):
    """Small-displacement quadratic form e^2 z^2 / (8 pi eps0 d^3)."""
    if not (d > 0):
        raise ValueError("channel separation d must be positive")
    z = np.asarray(z, dtype=float)
    out = constants.elementary_charge**2 * z**2 / (
        8.0 * np.pi * constants.vacuum_permittivity * d**3)
    return out if out.shape else float(out)
