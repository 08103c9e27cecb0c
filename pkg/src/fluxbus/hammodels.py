"""Hamiltonian builders for the qubit-mediated resonator/spin-ensemble circuit.

Full models live on ``(qubit, photon, spin)``; the effective models obtained
by eliminating the qubit live on ``(photon, spin)``. The exact multi-spin
reference model replaces the collective spin mode by ``n`` explicit spin-1/2
factors ``spin0 ... spin{n-1}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import physpar
from .errors import InvalidDimensionError
from .physpar import SystemParams
from .qalgebra import Operator, SpaceLabel, embed, fock_ladder, identity, pauli

MAX_EXACT_SPINS = 6


@dataclass(frozen=True)
class Cutoffs:
    """Fock-space truncation dimensions for the photon and collective-spin modes."""

    n_photon: int
    n_spinmode: int

    def __post_init__(self):
        for name in ("n_photon", "n_spinmode"):
            value = getattr(self, name)
            if int(value) != value or value < 2:
                raise InvalidDimensionError(f"{name} must be an integer >= 2, got {value}")

    @classmethod
    def default_for(cls, params: SystemParams) -> "Cutoffs":
        """6 levels per mode up to g = 0.1 omega_r, 14 beyond (pair terms fill higher states)."""
        g = max(params.g_qr, params.g_qs) / params.omega_r
        n = 6 if g <= 0.1 + 1e-12 else 14
        return cls(n, n)

    def doubled(self, cap: int) -> "Cutoffs":
        return Cutoffs(min(2 * self.n_photon, cap), min(2 * self.n_spinmode, cap))


class HamiltonianKind(str, Enum):
    RABI_FULL = "rabi_full"
    JAYNES_CUMMINGS = "jaynes_cummings"
    EFF_STRONG = "eff_strong"
    EFF_ULTRA = "eff_ultra"
    EFF_SQUEEZED = "eff_squeezed"
    EFF_MIXED = "eff_mixed"
    EXACT_SPINS = "exact_spins"

    @property
    def has_qubit(self) -> bool:
        return self in _QUBIT_KINDS


_QUBIT_KINDS = {
    HamiltonianKind.RABI_FULL,
    HamiltonianKind.JAYNES_CUMMINGS,
    HamiltonianKind.EFF_MIXED,
    HamiltonianKind.EXACT_SPINS,
}


def full_space(cut: Cutoffs) -> SpaceLabel:
    return SpaceLabel.of(qubit=2, photon=cut.n_photon, spin=cut.n_spinmode)


def mode_space(cut: Cutoffs) -> SpaceLabel:
    return SpaceLabel.of(photon=cut.n_photon, spin=cut.n_spinmode)


def exact_spin_space(n_spins: int, cut: Cutoffs) -> SpaceLabel:
    spins = tuple((f"spin{j}", 2) for j in range(n_spins))
    return SpaceLabel((("qubit", 2), ("photon", cut.n_photon)) + spins)


def lowering(space: SpaceLabel, factor: str) -> Operator:
    return embed(fock_ladder(space.dim_of(factor)), space, factor)


def qubit_op(space: SpaceLabel, kind: str, factor: str = "qubit") -> Operator:
    return embed(pauli(kind), space, factor)


def is_two_level_factor(name: str) -> bool:
    """The qubit and the explicit spins ``spin0, spin1, ...`` are two-level; the rest are modes."""
    return name == "qubit" or (name.startswith("spin") and name[4:].isdigit())


def total_excitation(space: SpaceLabel) -> Operator:
    """Sum of excitation numbers of every factor (qubit/spin-1/2 factors count |e>)."""
    n = Operator(space, np.zeros((space.dim, space.dim)))
    for name in space.names:
        if is_two_level_factor(name):
            n = n + qubit_op(space, "plus", name) @ qubit_op(space, "minus", name)
        else:
            b = lowering(space, name)
            n = n + b.dag() @ b
    return n


def build_free(params: SystemParams, cut: Cutoffs) -> Operator:
    """Uncoupled part: qubit splitting plus the two oscillators."""
    space = full_space(cut)
    a = lowering(space, "photon")
    s = lowering(space, "spin")
    return (
        0.5 * params.omega_q * qubit_op(space, "z")
        + params.omega_r * (a.dag() @ a)
        + params.omega_s * (s.dag() @ s)
    )


def build_interaction(params: SystemParams, cut: Cutoffs, form: str = "full") -> Operator:
    """Qubit-mode interaction.

    ``form`` is ``"full"`` (both couplings with counter-rotating terms),
    ``"rwa"`` (both rotating-wave) or ``"mixed"`` (full photon coupling,
    rotating-wave spin coupling).
    """
    space = full_space(cut)
    a = lowering(space, "photon")
    s = lowering(space, "spin")
    sp = qubit_op(space, "plus")
    sm = qubit_op(space, "minus")
    sx = sp + sm

    def exchange(b):
        return sp @ b + sm @ b.dag()

    if form == "full":
        return params.g_qr * (sx @ (a + a.dag())) + params.g_qs * (sx @ (s + s.dag()))
    if form == "rwa":
        return params.g_qr * exchange(a) + params.g_qs * exchange(s)
    if form == "mixed":
        return params.g_qr * (sx @ (a + a.dag())) + params.g_qs * exchange(s)
    raise ValueError(f"unknown interaction form {form!r}")


def build_rabi_full(params: SystemParams, cut: Cutoffs) -> Operator:
    return build_free(params, cut) + build_interaction(params, cut, "full")


def build_jc(params: SystemParams, cut: Cutoffs) -> Operator:
    return build_free(params, cut) + build_interaction(params, cut, "rwa")


def _mode_ops(cut: Cutoffs):
    space = mode_space(cut)
    return space, lowering(space, "photon"), lowering(space, "spin")


def build_eff_strong(params: SystemParams, cut: Cutoffs, include_offset: bool = False) -> Operator:
    """Beam-splitter Hamiltonian left after eliminating a far-detuned qubit (rotating-wave).

    With ``include_offset`` the constant qubit ground-state energy ``-omega_q/2`` is
    added, which is what a direct projection of the transformed Hamiltonian yields.
    """
    eff = physpar.effective_rwa(params)
    space, a, s = _mode_ops(cut)
    h = (
        eff.omega_r_prime * (a.dag() @ a)
        + eff.omega_s_prime * (s.dag() @ s)
        + eff.g_eff * (a.dag() @ s + a @ s.dag())
    )
    if include_offset:
        h = h + (-0.5 * params.omega_q) * identity(space)
    return h


def build_eff_ultra(params: SystemParams, cut: Cutoffs, include_offset: bool = False) -> Operator:
    """Effective photon-spin Hamiltonian with counter-rotating and pair-creation terms.

    ``include_offset`` adds the constant ``-omega_q/2 - g_qr^2/eta_r - g_qs^2/eta_s``
    that the second-order elimination produces but which does not affect dynamics.
    """
    eff = physpar.effective_nonrwa(params)
    space, a, s = _mode_ops(cut)
    ad, sd = a.dag(), s.dag()
    h = (
        eff.omega_r_prime * (ad @ a)
        + eff.omega_s_prime * (sd @ s)
        + eff.g_eff * ((ad + a) @ (sd + s))
        - 0.5 * eff.alpha_r * params.g_qr**2 * (ad @ ad + a @ a)
        - 0.5 * eff.alpha_s * params.g_qs**2 * (sd @ sd + s @ s)
    )
    if include_offset:
        shift = -0.5 * params.omega_q - params.g_qr**2 / params.eta_r - params.g_qs**2 / params.eta_s
        h = h + shift * identity(space)
    return h


def squeezed_photon_frequency(params: SystemParams) -> float:
    """Dressed photon frequency once the photon pair terms are absorbed by squeezing."""
    eff = physpar.effective_nonrwa(params)
    kappa = eff.alpha_r * params.g_qr**2
    # The Bogoliubov angle that cancels -kappa/2 (a^2 + a^dag^2) is negative in
    # the exp(r a^2/2 - r a^dag^2/2) parametrisation; r itself is its magnitude.
    rf = -physpar.squeeze_parameter(params)
    sh, ch = math.sinh(rf), math.cosh(rf)
    return eff.omega_r_prime * (sh**2 + ch**2) + 2 * kappa * sh * ch


def build_eff_squeezed(params: SystemParams, cut: Cutoffs) -> Operator:
    """Effective Hamiltonian in the frame where the photon mode is a squeezed oscillator.

    The photon pair terms are absorbed into a dressed frequency
    ``sqrt(w'^2 - kappa^2)`` (``kappa = alpha_r g_qr^2``) and the photon-spin
    coupling is rescaled by ``exp(r)``; the spin pair terms are kept.
    """
    eff = physpar.effective_nonrwa(params)
    rf = -physpar.squeeze_parameter(params)
    space, a, s = _mode_ops(cut)
    ad, sd = a.dag(), s.dag()
    return (
        squeezed_photon_frequency(params) * (ad @ a)
        + eff.omega_s_prime * (sd @ s)
        - 0.5 * eff.alpha_s * params.g_qs**2 * (sd @ sd + s @ s)
        + eff.g_eff * (math.cosh(rf) - math.sinh(rf)) * ((ad + a) @ (sd + s))
    )


def build_eff_mixed(params: SystemParams, cut: Cutoffs) -> Operator:
    """Ultrastrong photon coupling with a rotating-wave spin coupling, third order kept.

    The qubit stays in the model because the retained third-order terms
    exchange energy between it and the resonator, including three-photon
    processes.
    """
    physpar.require_dispersive(params)
    g_r, g_s = params.g_qr, params.g_qs
    d_r, d_s, e_r = params.delta_r, params.delta_s, params.eta_r
    alpha_r = 1.0 / d_r + 1.0 / e_r
    w_r = params.omega_r - alpha_r * g_r**2
    w_s = params.omega_s - g_s**2 / d_s
    c_eta = alpha_r * 2 * g_r**3 / (3 * e_r)
    c_delta = alpha_r * 2 * g_r**3 / (3 * d_r)

    space = full_space(cut)
    a = lowering(space, "photon")
    s = lowering(space, "spin")
    ad, sd = a.dag(), s.dag()
    sp, sm = qubit_op(space, "plus"), qubit_op(space, "minus")

    h = 0.5 * params.omega_q * qubit_op(space, "z") + w_r * (ad @ a) + w_s * (sd @ s)
    h = h - (g_r * g_s / (2 * d_s)) * ((ad + a) @ (sd + s))
    h = h - (g_r * g_s / (2 * d_r)) * (ad @ s + a @ sd)
    h = h - (g_r * g_s / (2 * e_r)) * (ad @ sd + a @ s)
    h = h - c_eta * (sp @ a + sm @ ad + 2 * (sp @ ad) + 2 * (sm @ a))
    h = h - c_delta * (sp @ ad + sm @ a + 2 * (sp @ a) + 2 * (sm @ ad))
    h = h - c_eta * (
        sp @ ad @ ad @ ad + sp @ ad @ a @ a + 2 * (sp @ ad @ ad @ a)
        + sm @ a @ a @ a + sm @ ad @ ad @ a + 2 * (sm @ ad @ a @ a)
    )
    h = h - c_delta * (
        sm @ ad @ ad @ ad + sm @ ad @ a @ a + 2 * (sm @ ad @ ad @ a)
        + sp @ a @ a @ a + sp @ ad @ ad @ a + 2 * (sp @ ad @ a @ a)
    )
    return h


# Hadamard: maps the flux basis (sigma_x eigenstates at the degeneracy point)
# onto the (e, g) energy eigenbasis, so sigma_x -> sigma_z and sigma_z -> sigma_x.
QUBIT_EIGENBASIS_ROTATION = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def build_exact_spins(
    params: SystemParams, n_spins: int, cut: Cutoffs, rotating_wave: bool = False
) -> Operator:
    """Qubit, resonator and ``n_spins`` individual NV spins (no bosonization).

    The model is assembled in the flux basis of the qubit at the degeneracy
    point, where the tunneling term is ``omega_q sigma_x / 2`` and every
    coupling goes through ``sigma_z``; it is then rotated into the qubit
    eigenbasis. The single-spin coupling is ``g_qs / sqrt(n_spins)`` so the
    collective coupling equals ``g_qs``. With ``rotating_wave`` the
    counter-rotating terms are dropped after the rotation.
    """
    if not 1 <= n_spins <= MAX_EXACT_SPINS:
        raise InvalidDimensionError(
            f"exact spin model supports 1..{MAX_EXACT_SPINS} spins, got {n_spins}"
        )
    space = exact_spin_space(n_spins, cut)
    g_s = params.g_qs / math.sqrt(n_spins)
    a = lowering(space, "photon")
    free_modes = params.omega_r * (a.dag() @ a)
    for j in range(n_spins):
        free_modes = free_modes + 0.5 * params.omega_s * qubit_op(space, "z", f"spin{j}")

    if rotating_wave:
        sp, sm = qubit_op(space, "plus"), qubit_op(space, "minus")
        h = 0.5 * params.omega_q * qubit_op(space, "z") + free_modes
        h = h + params.g_qr * (sp @ a + sm @ a.dag())
        for j in range(n_spins):
            tp, tm = qubit_op(space, "plus", f"spin{j}"), qubit_op(space, "minus", f"spin{j}")
            h = h + g_s * (sp @ tm + sm @ tp)
        return h

    sz_flux = qubit_op(space, "z")
    h_flux = 0.5 * params.omega_q * qubit_op(space, "x") + free_modes
    h_flux = h_flux + params.g_qr * (sz_flux @ (a + a.dag()))
    for j in range(n_spins):
        h_flux = h_flux + g_s * (sz_flux @ qubit_op(space, "x", f"spin{j}"))
    w = embed(QUBIT_EIGENBASIS_ROTATION, space, "qubit")
    return w @ h_flux @ w.dag()


_BUILDERS = {
    HamiltonianKind.RABI_FULL: build_rabi_full,
    HamiltonianKind.JAYNES_CUMMINGS: build_jc,
    HamiltonianKind.EFF_STRONG: build_eff_strong,
    HamiltonianKind.EFF_ULTRA: build_eff_ultra,
    HamiltonianKind.EFF_SQUEEZED: build_eff_squeezed,
    HamiltonianKind.EFF_MIXED: build_eff_mixed,
}


def build(kind: HamiltonianKind | str, params: SystemParams, cut: Cutoffs, n_spins: int = 3) -> Operator:
    kind = HamiltonianKind(kind)
    if kind is HamiltonianKind.EXACT_SPINS:
        return build_exact_spins(params, n_spins, cut)
    return _BUILDERS[kind](params, cut)
