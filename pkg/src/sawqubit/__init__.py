"""Surface-acoustic-wave moving-quantum-dot flying-qubit simulator.

Instantaneous bound-level spectra of the traveling dot, adiabaticity
analysis, microwave Rabi dynamics, and Coulomb-mediated two-qubit gate
construction, with a CLI frontend (``sawqubit``).
"""
from .constants import CONSTANTS, PhysicalConstants
from .params import (ConfigError, DeviceConfig, DerivedScales, ThermalCheck,
                     derive_scales, load_config, thermal_ratio)

__version__ = "0.1.0"

__all__ = [
    "CONSTANTS",
    "PhysicalConstants",
    "ConfigError",
    "DeviceConfig",
    "DerivedScales",
    "ThermalCheck",
    "derive_scales",
    "load_config",
    "thermal_ratio",
    "__version__",
]
