"""Self-contained analytic oracles for the numerical machinery.

Each oracle builds its own reference value from a closed form (sech^2 well
spectrum, particle in a box, harmonic oscillator, two-level rotating-wave
solution, finite-difference derivative checks) and compares the production
code against it.  The validation subcommand and the test suite both run
these; keeping them in one place means the shipped binary can re-verify
itself on any machine.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import dynamics, potential
from .constants import CONSTANTS
from .eigensolver import NATURAL_MASS, build_grid, build_hamiltonian, solve_lowest
from .params import DeviceConfig, derive_scales

SPECTRUM_RTOL = 1e-4
CONVERGENCE_ORDER_TOL = 0.1
RWA_ATOL = 1e-3
DERIVATIVE_RTOL = 1e-6
FORCE_RTOL = 1e-8
SLOPE_TOL = 0.05


@dataclass
class OracleResult:
    name: str
    passed: bool
    measured: dict = field(default_factory=dict)


def _solve_energies(v, z_half: float, n_points: int, count: int) -> np.ndarray:
    grid = build_grid(-z_half, z_half, n_points)
    H = build_hamiltonian(grid, v, NATURAL_MASS)
    pairs = solve_lowest(H, count, grid=grid)
    return np.array([p.energy for p in pairs])


def sech_well_energies(depth: float, count: int) -> np.ndarray:
    """Closed-form bound energies of V = -depth / cosh^2(z).

    In units hbar = 1, mass 1/2: E_n = -(s - n)^2 with
    s = (-1 + sqrt(1 + 4 depth)) / 2.
    """
    s = 0.5 * (-1.0 + math.sqrt(1.0 + 4.0 * depth))
    n_bound = int(math.floor(s)) + 1
    if count > n_bound:
        raise ValueError(f"well of depth {depth} holds only {n_bound} levels")
    return -np.array([(s - n) ** 2 for n in range(count)])


def check_sech_well(depth: float = 25.0, count: int = 3,
                    n_points: int = 4096) -> OracleResult:
    exact = sech_well_energies(depth, count)
    num = _solve_energies(lambda z: -depth / np.cosh(z) ** 2,
                          12.0, n_points, count)
    rel = np.abs(num - exact) / np.abs(exact)
    return OracleResult(
        name="sech_well_spectrum",
        passed=bool(rel.max() <= SPECTRUM_RTOL),
        measured={"max_rel_error": float(rel.max()),
                  "tolerance": SPECTRUM_RTOL,
                  "energies": num.tolist(),
                  "exact": exact.tolist()})


def check_box(length: float = 1.0, count: int = 3,
              n_points: int = 4096) -> OracleResult:
    """Particle in a box; the grid places the hard walls exactly on the
    Dirichlet boundary one spacing outside the first/last node."""
    h = length / (n_points + 1)
    grid = build_grid(h, length - h, n_points)
    H = build_hamiltonian(grid, lambda z: 0.0 * z, NATURAL_MASS)
    num = np.array([p.energy for p in solve_lowest(H, count, grid=grid)])
    exact = np.array([(n * math.pi / length) ** 2 for n in range(1, count + 1)])
    rel = np.abs(num - exact) / exact
    return OracleResult(
        name="particle_in_box",
        passed=bool(rel.max() <= SPECTRUM_RTOL),
        measured={"max_rel_error": float(rel.max()),
                  "tolerance": SPECTRUM_RTOL})


def check_harmonic(count: int = 5, n_points: int = 4096) -> OracleResult:
    """V = z^2 with mass 1/2 gives omega0 = 2 and levels 2n + 1."""
    num = _solve_energies(lambda z: z ** 2, 10.0, n_points, count)
    exact = np.array([2.0 * n + 1.0 for n in range(count)])
    rel = np.abs(num - exact) / exact
    spacings = np.diff(num)
    return OracleResult(
        name="harmonic_spectrum",
        passed=bool(rel.max() <= SPECTRUM_RTOL
                    and np.abs(spacings - 2.0).max() <= 2.0 * SPECTRUM_RTOL),
        measured={"max_rel_error": float(rel.max()),
                  "max_spacing_error": float(np.abs(spacings - 2.0).max()),
                  "tolerance": SPECTRUM_RTOL})


def check_convergence_order(depth: float = 25.0) -> OracleResult:
    """Ground-energy error of the sech^2 well under grid halving."""
    exact = sech_well_energies(depth, 1)[0]
    errs = []
    for n_points in (512, 1024, 2048):
        e = _solve_energies(lambda z: -depth / np.cosh(z) ** 2,
                            12.0, n_points, 1)[0]
        errs.append(abs(e - exact))
    orders = [math.log2(errs[i] / errs[i + 1]) for i in range(len(errs) - 1)]
    order = float(np.mean(orders))
    return OracleResult(
        name="grid_convergence_order",
        passed=bool(abs(order - 2.0) <= CONVERGENCE_ORDER_TOL),
        measured={"observed_order": order, "expected": 2.0,
                  "tolerance": CONVERGENCE_ORDER_TOL,
                  "errors": errs})


def check_rwa_integration(omega0: float = 0.0, omega1: float = 1e6,
                          coupling_ratio: float = 1e-3) -> OracleResult:
    """Resonant two-level run vs the analytic rotating-wave population."""
    d01 = coupling_ratio * (omega1 - omega0)
    params = dynamics.RabiParameters(
        omega0=omega0, omega1=omega1, omega_drive=omega1 - omega0,
        D=np.array([[0.0, d01], [d01, 0.0]]))
    t_end = 2.0 * math.pi / d01  # one full flip cycle
    dt = dynamics.suggested_step(params)
    traj = dynamics.integrate_rabi(params, (0.0, t_end), dt, (1.0, 0.0))
    ref = dynamics.rwa_population(d01, 0.0, traj.times)
    dev = float(np.max(np.abs(traj.p1 - ref)))
    return OracleResult(
        name="rwa_two_level",
        passed=bool(dev <= RWA_ATOL and traj.norm_drift <= 1e-8),
        measured={"max_abs_deviation": dev, "tolerance": RWA_ATOL,
                  "norm_drift": traj.norm_drift})


def check_saw_time_derivative(config: DeviceConfig | None = None) -> OracleResult:
    """Analytic d/dt of the traveling wave vs a central difference."""
    config = config or DeviceConfig()
    scales = derive_scales(config, CONSTANTS)
    dt = scales.T_period / 1e6
    z = np.linspace(-1.5 * config.saw_wavelength, 1.5 * config.saw_wavelength, 7)
    t = 0.37 * scales.T_period
    analytic = potential.saw_potential_time_derivative(z, t, scales)
    fd = (potential.saw_potential(z, t + dt, scales)
          - potential.saw_potential(z, t - dt, scales)) / (2.0 * dt)
    rel = np.abs(analytic - fd) / np.max(np.abs(analytic))
    return OracleResult(
        name="saw_time_derivative",
        passed=bool(rel.max() <= DERIVATIVE_RTOL),
        measured={"max_rel_error": float(rel.max()),
                  "tolerance": DERIVATIVE_RTOL})


def check_coulomb_force_consistency(d: float = 1e-6) -> OracleResult:
    """Numerical -d/dz of the exact pair potential vs the closed-form force.

    The potential is a function of the relative coordinate z = z_l - z_u, so
    its derivative equals the force on the lower electron with sign flipped.
    """
    z = np.linspace(-0.5 * d, 0.5 * d, 11)
    z = z[np.abs(z) > 1e-12 * d]
    dz = 1e-7 * d
    dv = (potential.coulomb_potential_exact(z + dz, d, CONSTANTS)
          - potential.coulomb_potential_exact(z - dz, d, CONSTANTS)) / (2.0 * dz)
    force = potential.coulomb_force(np.zeros_like(z), z, d, CONSTANTS)
    rel = np.abs(dv - force) / np.max(np.abs(force))
    return OracleResult(
        name="coulomb_force_consistency",
        passed=bool(rel.max() <= FORCE_RTOL),
        measured={"max_rel_error": float(rel.max()),
                  "tolerance": FORCE_RTOL})


def check_quadratic_coulomb_slope(d: float = 1e-6) -> OracleResult:
    """log-log slope of the quadratic-expansion error over z/d in [1e-3, 1e-1]."""
    ratios = np.logspace(-3, -1, 9)
    z = ratios * d
    exact = potential.coulomb_potential_exact(z, d, CONSTANTS)
    quad = potential.coulomb_potential_quadratic(z, d, CONSTANTS)
    rel_err = np.abs(quad - exact) / exact
    slope, _ = np.polyfit(np.log(ratios), np.log(rel_err), 1)
    return OracleResult(
        name="quadratic_coulomb_slope",
        passed=bool(abs(slope - 2.0) <= SLOPE_TOL),
        measured={"observed_slope": float(slope), "expected": 2.0,
                  "tolerance": SLOPE_TOL})


def run_all(n_points: int = 4096) -> list[OracleResult]:
    """The full oracle suite at production resolution."""
    return [
        check_sech_well(n_points=n_points),
        check_box(n_points=n_points),
        check_harmonic(n_points=n_points),
        check_convergence_order(),
        check_rwa_integration(),
        check_saw_time_derivative(),
        check_coulomb_force_consistency(),
        check_quadratic_coulomb_slope(),
    ]
