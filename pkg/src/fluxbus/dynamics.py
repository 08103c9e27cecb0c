"""State-transfer dynamics, fidelity and the coupling/ensemble-size sweeps.

Times are reported as the dimensionless ``gamma * t`` with ``gamma = |g_eff|``
taken from the counter-rotating-aware effective coupling, so transfer peaks
of different regimes land at comparable abscissae (``pi/2`` for an ideal
beam splitter).
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Mapping, Sequence, Union

import numpy as np

from . import physpar
from .hammodels import Cutoffs, HamiltonianKind, build, is_two_level_factor
from .physpar import SystemParams
from .qalgebra import QUBIT_LEVELS, Operator, SpaceLabel, SpectralPropagator, StateVector
from .errors import SpaceMismatchError

log = logging.getLogger(__name__)

Levels = Mapping[str, Union[int, str]]
# A basis state given by one level per factor, or a superposition written as
# (amplitude, levels) pairs. Both survive a change of cutoffs.
StateSpec = Union[Levels, Sequence[tuple[complex, Levels]]]

SPIN_TO_PHOTON_INITIAL = {"qubit": "g", "photon": 0, "spin": 1}
SPIN_TO_PHOTON_TARGET = {"qubit": "g", "photon": 1, "spin": 0}

CONVERGENCE_TOL = 1e-4
CUTOFF_CAP = 40
PEAK_WINDOW = 4.0
DEFAULT_STEPS = 2001


@dataclass(frozen=True)
class TransferConfig:
    params: SystemParams
    hamiltonian_kind: HamiltonianKind = HamiltonianKind.RABI_FULL
    cut: Cutoffs | None = None  # None: Cutoffs.default_for(params)
    t_max: float = PEAK_WINDOW
    n_steps: int = DEFAULT_STEPS
    initial: StateSpec = field(default_factory=lambda: dict(SPIN_TO_PHOTON_INITIAL))
    target: StateSpec = field(default_factory=lambda: dict(SPIN_TO_PHOTON_TARGET))
    gamma_def: str = "g_eff_nonrwa"
    n_spins: int = 3
    converge: bool = True
    tol: float = CONVERGENCE_TOL
    cap: int = CUTOFF_CAP

    def __post_init__(self):
        object.__setattr__(self, "hamiltonian_kind", HamiltonianKind(self.hamiltonian_kind))
        if self.n_steps < 2:
            raise ValueError(f"n_steps must be >= 2, got {self.n_steps}")
        if not self.t_max > 0:
            raise ValueError(f"t_max must be > 0, got {self.t_max}")
        if self.gamma_def != "g_eff_nonrwa":
            raise ValueError(f"unsupported time unit definition {self.gamma_def!r}")

    @property
    def cutoffs(self) -> Cutoffs:
        return self.cut if self.cut is not None else Cutoffs.default_for(self.params)


@dataclass(frozen=True)
class TransferResult:
    times: np.ndarray  # gamma * t
    fidelity: np.ndarray
    peak_time: float
    peak_fidelity: float
    cutoffs_used: Cutoffs
    converged: bool | None  # None when the convergence loop was skipped
    kind: HamiltonianKind
    gamma: float


def _dicke(space: SpaceLabel, levels: dict, excitations: int) -> np.ndarray:
    spins = [n for n in space.names if is_two_level_factor(n) and n != "qubit"]
    if not 0 <= excitations <= len(spins):
        raise ValueError(f"{excitations} excitations do not fit in {len(spins)} spins")
    v = np.zeros(space.dim, dtype=complex)
    for excited in combinations(spins, excitations):
        lv = dict(levels)
        lv.update({n: ("e" if n in excited else "g") for n in spins})
        v[space.flat_index(lv)] = 1.0
    return v / np.linalg.norm(v)


def _basis_vector(space: SpaceLabel, levels: Levels) -> np.ndarray:
    lv = dict(levels)
    if "qubit" in lv and "qubit" not in space.names:
        # Effective models have the qubit eliminated in its ground state.
        q = lv.pop("qubit")
        if q not in ("g", QUBIT_LEVELS["g"]):
            raise SpaceMismatchError("qubit level must be 'g' for a model without a qubit")
    if "spin" in lv and "spin" not in space.names:
        # Collective-mode occupation k maps to the symmetric k-excitation spin state.
        k = int(lv.pop("spin"))
        return _dicke(space, lv, k)
    v = np.zeros(space.dim, dtype=complex)
    v[space.flat_index(lv)] = 1.0
    return v


def resolve_state(spec: StateSpec, space: SpaceLabel) -> StateVector:
    if isinstance(spec, Mapping):
        return StateVector(space, _basis_vector(space, spec))
    v = np.zeros(space.dim, dtype=complex)
    for amplitude, levels in spec:
        v = v + complex(amplitude) * _basis_vector(space, levels)
    return StateVector(space, v)


def evolve(h: Operator, psi0: StateVector, times: Sequence[float]) -> list[StateVector]:
    """Exact Schroedinger evolution ``exp(-iHt) psi0`` for every time in ``times``."""
    rows = SpectralPropagator(h).evolve(psi0, times)
    return [StateVector(psi0.space, row) for row in rows]


def fidelity(target: StateVector, psi: StateVector) -> float:
    return abs(target.inner(psi)) ** 2


def gamma_for(params: SystemParams) -> float:
    """Time unit ``|g_eff|``; falls back to ``omega_r`` when the effective coupling vanishes."""
    gamma = abs(physpar.effective_nonrwa(params).g_eff)
    if gamma == 0.0:
        log.warning("g_eff = 0: measuring time in units of 1/omega_r instead")
        return params.omega_r
    return gamma


def time_grid(cfg: TransferConfig) -> np.ndarray:
    return np.linspace(0.0, cfg.t_max, cfg.n_steps)


def _fidelity_trajectory(cfg: TransferConfig, cut: Cutoffs, gamma: float) -> np.ndarray:
    h = build(cfg.hamiltonian_kind, cfg.params, cut, cfg.n_spins)
    psi0 = resolve_state(cfg.initial, h.space)
    target = resolve_state(cfg.target, h.space)
    amps = SpectralPropagator(h).overlaps(target, psi0, time_grid(cfg) / gamma)
    return np.abs(amps) ** 2


def _converge(cfg: TransferConfig, gamma: float):
    cut = cfg.cutoffs
    cap = max(cfg.cap, cut.n_photon, cut.n_spinmode)
    fid = _fidelity_trajectory(cfg, cut, gamma)
    while True:
        bigger = cut.doubled(cap)
        if bigger == cut:
            return cut, False, fid
        fid_bigger = _fidelity_trajectory(cfg, bigger, gamma)
        if np.max(np.abs(fid_bigger - fid)) < cfg.tol:
            return cut, True, fid
        cut, fid = bigger, fid_bigger


def cutoff_convergence(cfg: TransferConfig) -> tuple[Cutoffs, bool]:
    """Double both cutoffs until the fidelity trajectory moves by less than ``cfg.tol``.

    Returns the smallest accepted cutoffs and whether convergence was reached
    before the per-mode cap.
    """
    cut, ok, _ = _converge(cfg, gamma_for(cfg.params))
    return cut, ok


def transfer_experiment(cfg: TransferConfig) -> TransferResult:
    gamma = gamma_for(cfg.params)
    if cfg.converge:
        cut, converged, fid = _converge(cfg, gamma)
        if not converged:
            log.warning("fidelity not converged at cutoffs %s (cap %d)", cut, cfg.cap)
    else:
        cut, converged = cfg.cutoffs, None
        fid = _fidelity_trajectory(cfg, cut, gamma)
    times = time_grid(cfg)
    k = int(np.argmax(fid))
    return TransferResult(
        times=times,
        fidelity=fid,
        peak_time=float(times[k]),
        peak_fidelity=float(fid[k]),
        cutoffs_used=cut,
        converged=converged,
        kind=cfg.hamiltonian_kind,
        gamma=gamma,
    )


def coupling_config(base: TransferConfig, g: float, window: float = PEAK_WINDOW) -> TransferConfig:
    """``base`` with both couplings set to ``g * omega_r`` over a ``[0, window]`` grid."""
    w = base.params.omega_r
    return replace(base, params=base.params.replace(g_qr=g * w, g_qs=g * w), t_max=window)


def sweep_coupling(
    base: TransferConfig,
    g_values: Sequence[float],
    window: float = PEAK_WINDOW,
    workers: int = 1,
) -> list[tuple[float, float]]:
    """Peak transfer fidelity for each coupling ``g`` (in units of omega_r).

    Rows come back in input order regardless of ``workers``.
    """
    if any(not g > 0 for g in g_values):
        raise ValueError("coupling values must be positive")

    def peak(g):
        return transfer_experiment(coupling_config(base, g, window)).peak_fidelity

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            peaks = list(pool.map(peak, g_values))
    else:
        peaks = [peak(g) for g in g_values]
    return [(float(g), p) for g, p in zip(g_values, peaks)]


def sweep_ensemble_size(
    n_values: Sequence[float],
    g_single_hybrid: float = physpar.G_SINGLE_HYBRID_MHZ,
    g_single_direct: float = physpar.G_SINGLE_DIRECT_MHZ,
    g_qr: float = 100.0,
    delta: float = 1000.0,
) -> list[tuple[float, float, float]]:
    """Rows ``(N, |g_eff| via the qubit bus, direct g_RS)`` in MHz.

    Both detunings equal ``delta``; ``|g_eff|`` is reported because the curve
    is a coupling strength, the sign being a phase convention.
    """
    if min(g_single_hybrid, g_single_direct, g_qr, delta) <= 0:
        raise ValueError("all sweep inputs must be positive")
    rows = []
    for n in n_values:
        g_qs = math.sqrt(n) * g_single_hybrid
        g_eff = physpar.effective_coupling(g_qr, g_qs, 1.0 / delta, 1.0 / delta)
        rows.append((float(n), abs(g_eff), math.sqrt(n) * g_single_direct))
    return rows


@dataclass(frozen=True)
class ConservationReport:
    max_norm_error: float
    max_energy_drift: float  # relative to max|H|


def check_conservation(h: Operator, psi0: StateVector, times: Sequence[float]) -> ConservationReport:
    """Norm and energy drift along the exact trajectory, evaluated state by state."""
    rows = SpectralPropagator(h).evolve(psi0, times)
    norms = np.linalg.norm(rows, axis=1)
    energies = np.sum(rows.conj() * (rows @ h.matrix.T), axis=1).real
    return ConservationReport(
        max_norm_error=float(np.max(np.abs(norms - 1.0))),
        max_energy_drift=float(np.max(np.abs(energies - energies[0])) / h.max_norm()),
    )


@dataclass(frozen=True)
class BosonizationReport:
    times: np.ndarray
    fidelity_exact: np.ndarray
    fidelity_bosonized: np.ndarray

    @property
    def max_deviation(self) -> float:
        return float(np.max(np.abs(self.fidelity_exact - self.fidelity_bosonized)))


def bosonization_check(
    params: SystemParams,
    n_spins: int = 3,
    cut: Cutoffs | None = None,
    t_max: float = PEAK_WINDOW,
    n_steps: int = DEFAULT_STEPS,
    rotating_wave: bool = False,
) -> BosonizationReport:
    """Transfer trajectories of the explicit-spin model and of its bosonized counterpart.

    The explicit model starts in the symmetric single-spin excitation; the
    bosonized model (``build_rabi_full``, or ``build_jc`` with
    ``rotating_wave``) starts with one quantum in the collective mode.
    """
    from .hammodels import build_exact_spins, build_jc, build_rabi_full

    cut = cut or Cutoffs.default_for(params)
    times = np.linspace(0.0, t_max, n_steps)
    t_phys = times / gamma_for(params)
    curves = []
    for h in (
        build_exact_spins(params, n_spins, cut, rotating_wave=rotating_wave),
        (build_jc if rotating_wave else build_rabi_full)(params, cut),
    ):
        psi0 = resolve_state(SPIN_TO_PHOTON_INITIAL, h.space)
        target = resolve_state(SPIN_TO_PHOTON_TARGET, h.space)
        curves.append(np.abs(SpectralPropagator(h).overlaps(target, psi0, t_phys)) ** 2)
    return BosonizationReport(times, curves[0], curves[1])
