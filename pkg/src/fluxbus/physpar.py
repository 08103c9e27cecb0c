"""Closed-form parameter and coupling-strength calculators.

Model frequencies are ordinary frequencies in MHz with hbar = 1, so an
energy and a frequency are interchangeable. SI quantities (tesla, ampere,
henry, metre) appear only at the boundary of the geometric calculators.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Literal

from .errors import RegimeError, SqueezedFrameError, UnphysicalParameterError

# Physical constants. Everything a run depends on is listed in CONSTANTS so
# the CLI manifest can echo it.
G_E = 2.0  # NV Lande factor
MU_MHZ_PER_MT = 14.0  # Bohr magneton, MHz / mT
MU_0 = 4e-7 * math.pi  # vacuum permeability, N A^-2
PLANCK_H = 6.62607015e-34  # J s
D_ZFS_MHZ = 2870.0  # NV ground-state zero-field splitting

# Cited single-spin couplings (configuration defaults, not derived physics).
G_SINGLE_HYBRID_MHZ = 12e-3  # NV center to flux qubit, 12 kHz
G_SINGLE_DIRECT_MHZ = 10e-6  # NV center to resonator, 10 Hz

CONSTANTS = {
    "g_e": G_E,
    "mu_mhz_per_mt": MU_MHZ_PER_MT,
    "mu_0_n_per_a2": MU_0,
    "planck_h_j_s": PLANCK_H,
    "d_zfs_mhz": D_ZFS_MHZ,
    "g_single_hybrid_mhz": G_SINGLE_HYBRID_MHZ,
    "g_single_direct_mhz": G_SINGLE_DIRECT_MHZ,
}

Regime = Literal["rwa-dispersive", "nonrwa-dispersive"]


@dataclass(frozen=True)
class SystemParams:
    """The five model frequencies (qubit, resonator, spin mode, two couplings)."""

    omega_q: float
    omega_r: float
    omega_s: float
    g_qr: float
    g_qs: float
    unit: str = "MHz"

    def __post_init__(self):
        for name in ("omega_q", "omega_r", "omega_s"):
            if not getattr(self, name) > 0:
                raise UnphysicalParameterError(f"{name} must be > 0, got {getattr(self, name)}")
        for name in ("g_qr", "g_qs"):
            if not getattr(self, name) >= 0:
                raise UnphysicalParameterError(f"{name} must be >= 0, got {getattr(self, name)}")

    @property
    def delta_r(self) -> float:
        return self.omega_q - self.omega_r

    @property
    def delta_s(self) -> float:
        return self.omega_q - self.omega_s

    @property
    def eta_r(self) -> float:
        return self.omega_q + self.omega_r

    @property
    def eta_s(self) -> float:
        return self.omega_q + self.omega_s

    def replace(self, **changes) -> "SystemParams":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class LoopGeometry:
    """Rectangular flux-qubit loop with an NV layer inside it (SI units).

    ``aspect`` is the loop's length-to-width ratio; ``density`` is the NV
    volume density in m^-3 and ``thickness`` the NV layer thickness in m.
    """

    area: float
    aspect: float
    thickness: float
    persistent_current: float
    density: float

    def __post_init__(self):
        for name in ("area", "aspect", "thickness", "persistent_current", "density"):
            if not getattr(self, name) > 0:
                raise UnphysicalParameterError(f"{name} must be > 0, got {getattr(self, name)}")


@dataclass(frozen=True)
class EffectiveParams:
    g_eff: float
    omega_r_prime: float
    omega_s_prime: float
    alpha_r: float
    alpha_s: float
    regime: Regime


def flux_qubit_splitting(epsilon: float, tunneling: float) -> float:
    """Level splitting sqrt(eps^2 + lambda^2) of the flux qubit; equals lambda at eps = 0."""
    return math.hypot(epsilon, tunneling)


def nv_transition_frequency(d_zfs: float, b_parallel: float) -> float:
    """Splitting between m_s = 0 and m_s = -1 for a field ``b_parallel`` (mT) along the NV axis."""
    omega = d_zfs - G_E * MU_MHZ_PER_MT * b_parallel
    if omega <= 0:
        raise UnphysicalParameterError(
            f"field {b_parallel} mT closes the NV transition (omega_s = {omega} MHz)"
        )
    return omega


def loop_geometry_factor(aspect: float) -> float:
    return 8.0 * math.sqrt(aspect + 1.0 / aspect)


def loop_center_field(geom: LoopGeometry) -> float:
    """Biot-Savart field (tesla) at the centre of the rectangular loop."""
    alpha = loop_geometry_factor(geom.aspect)
    return alpha * MU_0 * geom.persistent_current / (4.0 * math.pi * math.sqrt(geom.area))


def single_spin_coupling(b_fq: float) -> float:
    """Coupling (MHz) of one NV center to a flux-qubit field ``b_fq`` in tesla."""
    if b_fq < 0:
        raise UnphysicalParameterError(f"field magnitude must be >= 0, got {b_fq}")
    return G_E * MU_MHZ_PER_MT * (b_fq * 1e3) / math.sqrt(2.0)


def ensemble_coupling_from_count(n_spins: int, g_s: float) -> float:
    if n_spins < 1:
        raise UnphysicalParameterError(f"need at least one spin, got {n_spins}")
    return math.sqrt(n_spins) * g_s


def ensemble_coupling_from_density(geom: LoopGeometry) -> float:
    """Collective qubit-ensemble coupling (MHz) for spins filling volume area x thickness.

    The loop area cancels: only density, thickness, aspect and current matter.
    """
    volume = geom.area * geom.thickness
    return math.sqrt(geom.density * volume) * single_spin_coupling(loop_center_field(geom))


def zero_point_current(omega_r: float, inductance: float) -> float:
    """Resonator zero-point current in ampere; ``omega_r`` in MHz, inductance in henry."""
    if omega_r <= 0 or inductance <= 0:
        raise UnphysicalParameterError("omega_r and inductance must be > 0")
    return math.sqrt(PLANCK_H * omega_r * 1e6 / inductance)


def qubit_resonator_coupling(mutual: float, i_p: float, i_r0: float) -> float:
    """Mutual-inductance coupling M I_p I_r0, converted from joules to MHz."""
    if mutual < 0 or i_p < 0 or i_r0 < 0:
        raise UnphysicalParameterError("mutual inductance and currents must be >= 0")
    return mutual * i_p * i_r0 / PLANCK_H / 1e6


def effective_coupling(g_qr: float, g_qs: float, alpha_r: float, alpha_s: float) -> float:
    return -0.5 * (alpha_r + alpha_s) * g_qr * g_qs


def require_dispersive(params: SystemParams):
    if params.delta_r <= 0 or params.delta_s <= 0:
        raise RegimeError(
            "dispersive elimination needs omega_q above both modes: "
            f"delta_r = {params.delta_r:g}, delta_s = {params.delta_s:g}"
        )


def effective_rwa(params: SystemParams) -> EffectiveParams:
    """Resonator-ensemble coupling mediated by a far-detuned qubit (rotating-wave)."""
    require_dispersive(params)
    alpha_r = 1.0 / params.delta_r
    alpha_s = 1.0 / params.delta_s
    return EffectiveParams(
        g_eff=effective_coupling(params.g_qr, params.g_qs, alpha_r, alpha_s),
        omega_r_prime=params.omega_r - alpha_r * params.g_qr**2,
        omega_s_prime=params.omega_s - alpha_s * params.g_qs**2,
        alpha_r=alpha_r,
        alpha_s=alpha_s,
        regime="rwa-dispersive",
    )


def effective_nonrwa(params: SystemParams) -> EffectiveParams:
    """As :func:`effective_rwa`, with counter-rotating (1/eta) contributions kept."""
    require_dispersive(params)
    alpha_r = 1.0 / params.delta_r + 1.0 / params.eta_r
    alpha_s = 1.0 / params.delta_s + 1.0 / params.eta_s
    return EffectiveParams(
        g_eff=effective_coupling(params.g_qr, params.g_qs, alpha_r, alpha_s),
        omega_r_prime=params.omega_r - alpha_r * params.g_qr**2,
        omega_s_prime=params.omega_s - alpha_s * params.g_qs**2,
        alpha_r=alpha_r,
        alpha_s=alpha_s,
        regime="nonrwa-dispersive",
    )


def squeezing_beta(params: SystemParams) -> float:
    """``2 omega_r / (alpha_r g_qr^2) - 2``; infinite when g_qr = 0."""
    eff = effective_nonrwa(params)
    kappa = eff.alpha_r * params.g_qr**2
    if kappa == 0:
        return math.inf
    return 2.0 * params.omega_r / kappa - 2.0


def squeeze_parameter(params: SystemParams) -> float:
    """Magnitude r >= 0 of the Bogoliubov angle that removes the photon pair terms."""
    beta = squeezing_beta(params)
    if math.isinf(beta):
        return 0.0
    if not beta > 2.0:
        raise SqueezedFrameError(beta)
    root = math.sqrt(beta * beta - 4.0)
    sinh2 = 2.0 / (root * (root + beta))
    return math.asinh(math.sqrt(sinh2))


def direct_ensemble_resonator_coupling(
    n_spins: int, g_single: float = G_SINGLE_DIRECT_MHZ
) -> float:
    """Collective coupling (MHz) of N spins to the resonator field without a qubit bus."""
    return ensemble_coupling_from_count(n_spins, g_single)
