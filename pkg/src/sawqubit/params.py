"""Device configuration, derived scales, and the internal unit system.

All heavy numerics run in a dimensionless "natural" unit system:
hbar = 1, length unit = the channel half-length ``a``, energy unit
``E_a = hbar^2 / (2 m* a^2)``, time unit ``hbar / E_a``.  SI values
appear only at I/O boundaries.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, asdict

from .constants import PhysicalConstants, CONSTANTS


class ConfigError(ValueError):
    """Invalid device configuration; carries the offending field name."""

    def __init__(self, fieldname: str, message: str):
        self.fieldname = fieldname
        super().__init__(f"{fieldname}: {message}")


# Mapping between config-file keys and DeviceConfig attributes.
CONFIG_FILE_KEYS = {
    "a_m": "a",
    "l0_m": "l0",
    "gamma": "gamma",
    "saw_wavelength_m": "saw_wavelength",
    "saw_velocity_mps": "saw_velocity",
    "effective_mass_ratio": "effective_mass_ratio",
    "drive_ratio": "drive_ratio",
    "channel_separation_m": "channel_separation",
    "temperature_K": "temperature",
}


@dataclass(frozen=True)
class DeviceConfig:
    """Physical and model parameters of the SAW/channel device.

    ``l0`` defaults to 0.04 * a when not given explicitly.
    """

    a: float = 0.5e-6  # channel half-length (m)
    l0: float | None = None  # effective channel width (m)
    gamma: float = 0.5  # V_S / V0
    saw_wavelength: float = 1.0e-6  # m
    saw_velocity: float = 2981.0  # m/s
    effective_mass_ratio: float = 0.0067  # m*/m_e
    drive_ratio: float = 0.1  # V_e / V_S
    channel_separation: float = 1.0e-6  # inter-channel distance d (m)
    temperature: float = 0.27  # K

    def __post_init__(self):
        if self.l0 is None:
            object.__setattr__(self, "l0", 0.04 * self.a)
        self.validate()

    def validate(self):
        positive = ("a", "l0", "saw_wavelength", "saw_velocity",
                    "effective_mass_ratio", "channel_separation")
        for name in positive:
            if not (getattr(self, name) > 0):
                raise ConfigError(name, "must be strictly positive")
        if not (self.gamma >= 0) or not math.isfinite(self.gamma):
            raise ConfigError("gamma", "must be finite and >= 0")
        if self.gamma < 0:
            raise ConfigError("gamma", "must be >= 0")
        if not (self.drive_ratio >= 0):
            raise ConfigError("drive_ratio", "must be >= 0")
        if not (self.temperature >= 0):
            raise ConfigError("temperature", "must be >= 0")

    def as_file_dict(self) -> dict:
        """Config echoed in file-key form (all keys, no hidden defaults)."""
        return {key: getattr(self, attr) for key, attr in CONFIG_FILE_KEYS.items()}


def load_config(path: str) -> DeviceConfig:
    """Read a flat key->value JSON config file; missing keys take defaults."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError("<file>", f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError("<file>", f"config file is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("<file>", "config must be a flat JSON object")
    kwargs = {}
    for key, value in raw.items():
        if key not in CONFIG_FILE_KEYS:
            raise ConfigError(key, "unknown configuration key")
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ConfigError(key, "value must be a number")
        kwargs[CONFIG_FILE_KEYS[key]] = float(value)
    return DeviceConfig(**kwargs)


@dataclass(frozen=True)
class DerivedScales:
    """Scalar quantities derived from a DeviceConfig.

    Carries both SI scales (V0, V_S, k, omega_saw, T_period, m_star) and
    the natural-unit system (natural_length, natural_energy, natural_time)
    plus the dimensionless parameters the solvers consume.
    """

    V0: float  # gate barrier height (J)
    V_S: float  # SAW amplitude (J)
    k: float  # SAW wavenumber (1/m)
    omega_saw: float  # SAW angular frequency (rad/s)
    T_period: float  # SAW period (s)
    m_star: float  # effective mass (kg)
    natural_length: float  # m
    natural_energy: float  # J
    natural_time: float  # s

    # Dimensionless counterparts used by the eigensolver and dynamics.
    @property
    def V0_nat(self) -> float:
        return self.V0 / self.natural_energy

    @property
    def V_S_nat(self) -> float:
        return self.V_S / self.natural_energy

    @property
    def k_nat(self) -> float:
        return self.k * self.natural_length

    @property
    def omega_saw_nat(self) -> float:
        return self.omega_saw * self.natural_time

    # --- unit conversions (SI <-> natural) ---
    def energy_to_natural(self, e_si):
        return e_si / self.natural_energy

    def energy_to_si(self, e_nat):
        return e_nat * self.natural_energy

    def length_to_natural(self, z_si):
        return z_si / self.natural_length

    def length_to_si(self, z_nat):
        return z_nat * self.natural_length

    def time_to_natural(self, t_si):
        return t_si / self.natural_time

    def time_to_si(self, t_nat):
        return t_nat * self.natural_time

    def as_dict(self) -> dict:
        return asdict(self)


def derive_scales(config: DeviceConfig,
                  constants: PhysicalConstants = CONSTANTS) -> DerivedScales:
    """Compute all derived scalar quantities from a validated config.

    Pure and deterministic: identical inputs give bit-identical outputs.
    """
    config.validate()
    hbar = constants.hbar
    m_star = config.effective_mass_ratio * constants.electron_mass
    V0 = hbar**2 / (2.0 * m_star * config.l0**2)
    V_S = config.gamma * V0
    k = 2.0 * math.pi / config.saw_wavelength
    omega_saw = config.saw_velocity * k
    T_period = config.saw_wavelength / config.saw_velocity
    natural_length = config.a
    natural_energy = hbar**2 / (2.0 * m_star * config.a**2)
    natural_time = hbar / natural_energy
    return DerivedScales(
        V0=V0, V_S=V_S, k=k, omega_saw=omega_saw, T_period=T_period,
        m_star=m_star, natural_length=natural_length,
        natural_energy=natural_energy, natural_time=natural_time,
    )


@dataclass(frozen=True)
class ThermalCheck:
    """Thermal-excitation check: k_B T against the qubit splitting."""

    thermal_energy: float  # k_B T (J)
    ratio: float  # k_B T / splitting


def thermal_ratio(config: DeviceConfig, qubit_splitting: float,
                  constants: PhysicalConstants = CONSTANTS) -> ThermalCheck:
    """k_B T / splitting; small values mean thermal excitation is negligible."""
    if not (qubit_splitting > 0):
        raise ValueError("qubit_splitting must be positive")
    kbt = constants.boltzmann * config.temperature
    return ThermalCheck(thermal_energy=kbt, ratio=kbt / qubit_splitting)
