"""Physical constants (CODATA 2018)."""
from dataclasses import dataclass


@dataclass(frozen=True)
class PhysicalConstants:
    """SI physical constants used throughout the simulator."""

    hbar: float = 1.054571817e-34  # J s
    electron_mass: float = 9.1093837015e-31  # kg
    elementary_charge: float = 1.602176634e-19  # C
    vacuum_permittivity: float = 8.8541878128e-12  # F/m
    boltzmann: float = 1.380649e-23  # J/K

    def __post_init__(self):
        for name in ("hbar", "electron_mass", "elementary_charge",
                     "vacuum_permittivity", "boltzmann"):
            if getattr(self, name) <= 0:
                raise ValueError(f"constant {name} must be positive")


CONSTANTS = PhysicalConstants()
