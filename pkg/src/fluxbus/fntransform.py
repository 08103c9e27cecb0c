"""Froehlich-Nakajima (Schrieffer-Wolff) elimination of the flux qubit, done numerically.

The generator ``V`` is anti-Hermitian and satisfies ``H_I + [H_0, V] = 0``;
``exp(-V) H exp(V) = H_0 + [H_I, V]/2 + O(g^3)``. Projecting on the qubit
ground state gives an effective photon-spin Hamiltonian that can be compared
element by element with the closed-form builders in :mod:`fluxbus.hammodels`.

Truncated ladder operators break the bosonic algebra only in the top Fock
levels, so comparisons are made on the *restricted subspace* that drops the
top ``margin`` (default 2) levels of every bosonic factor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .errors import RegimeError, ResidualTooLargeError
from .hammodels import (
    Cutoffs,
    build_eff_strong,
    build_eff_ultra,
    build_free,
    build_interaction,
    full_space,
    is_two_level_factor,
    lowering,
    qubit_op,
)
from .physpar import SystemParams
from .qalgebra import (
    HERMITIAN_RTOL,
    Operator,
    SpaceLabel,
    commutator,
    expm_hermitian,
    project_qubit_ground,
)

Regime = Literal["rwa", "nonrwa", "mixed"]

RESIDUAL_TOL = 1e-8
BOUNDARY_MARGIN = 2

# Which qubit-mode interaction each generator is built to cancel.
INTERACTION_FORM = {"rwa": "rwa", "nonrwa": "full", "mixed": "mixed"}


@dataclass(frozen=True)
class Generator:
    v: Operator
    regime: Regime
    coefficients: dict[str, float] = field(default_factory=dict)

    def anti_hermiticity_defect(self) -> float:
        m = self.v.matrix
        scale = float(np.max(np.abs(m))) if m.size else 0.0
        if scale == 0.0:
            return 0.0
        return float(np.max(np.abs(m + m.conj().T))) / scale


def build_generator(params: SystemParams, cut: Cutoffs, regime: Regime) -> Generator:
    """Generator cancelling the first-order qubit-mode coupling for ``regime``.

    ``rwa`` cancels the Jaynes-Cummings interaction; ``nonrwa`` also the
    counter-rotating terms of both modes; ``mixed`` the counter-rotating
    photon terms but only the rotating spin terms.
    """
    if regime not in INTERACTION_FORM:
        raise ValueError(f"unknown regime {regime!r}")
    detunings = {"delta_r": params.delta_r, "delta_s": params.delta_s}
    if regime != "rwa":
        detunings.update(eta_r=params.eta_r, eta_s=params.eta_s)
    for name, value in detunings.items():
        if value == 0:
            raise RegimeError(f"{name} = 0: the generator is singular on resonance")

    space = full_space(cut)
    a = lowering(space, "photon")
    s = lowering(space, "spin")
    sp, sm = qubit_op(space, "plus"), qubit_op(space, "minus")

    coeffs = {"xi_r": params.g_qr / params.delta_r, "xi_s": params.g_qs / params.delta_s}
    v = coeffs["xi_r"] * (sm @ a.dag() - sp @ a) + coeffs["xi_s"] * (sm @ s.dag() - sp @ s)
    if regime in ("nonrwa", "mixed"):
        coeffs["zeta_r"] = params.g_qr / params.eta_r
        v = v + coeffs["zeta_r"] * (sm @ a - sp @ a.dag())
    if regime == "nonrwa":
        coeffs["zeta_s"] = params.g_qs / params.eta_s
        v = v + coeffs["zeta_s"] * (sm @ s - sp @ s.dag())
    return Generator(v=v, regime=regime, coefficients=coeffs)


def restricted_indices(space: SpaceLabel, margin: int = BOUNDARY_MARGIN) -> np.ndarray:
    """Flat indices whose bosonic levels all lie below ``dim - margin``.

    Two-level factors (the qubit and individual spins) are never restricted.
    """
    grids = np.indices(space.dims).reshape(len(space.dims), -1)
    keep = np.ones(space.dim, dtype=bool)
    for axis, (name, dim) in enumerate(space.factors):
        if not is_two_level_factor(name):
            keep &= grids[axis] < dim - margin
    return np.flatnonzero(keep)


def restricted_block(op: Operator, margin: int = BOUNDARY_MARGIN) -> np.ndarray:
    idx = restricted_indices(op.space, margin)
    return op.matrix[np.ix_(idx, idx)]


def restricted_max_norm(op: Operator, margin: int = BOUNDARY_MARGIN) -> float:
    block = restricted_block(op, margin)
    return float(np.max(np.abs(block))) if block.size else 0.0


def generator_residual(
    h0: Operator, hi: Operator, gen: Generator, margin: int | None = BOUNDARY_MARGIN
) -> float:
    """``max|H_I + [H_0, V]|``, on the restricted subspace unless ``margin`` is None."""
    r = hi + commutator(h0, gen.v)
    return r.max_norm() if margin is None else restricted_max_norm(r, margin)


def second_order(h0: Operator, hi: Operator, gen: Generator) -> Operator:
    """``H_0 + [H_I, V]/2`` on the full space (qubit still present)."""
    return h0 + 0.5 * commutator(hi, gen.v)


def numeric_effective(
    h0: Operator, hi: Operator, gen: Generator, tol: float = RESIDUAL_TOL
) -> Operator:
    """Second-order effective Hamiltonian projected on the qubit ground state."""
    residual = generator_residual(h0, hi, gen)
    if residual > tol:
        raise ResidualTooLargeError(residual, tol)
    return project_qubit_ground(second_order(h0, hi, gen))


@dataclass(frozen=True)
class ExactEffective:
    transformed: Operator
    ground_block: Operator
    dropped_norm: float


def exact_unitary_effective(
    h: Operator, gen: Generator, margin: int = BOUNDARY_MARGIN
) -> ExactEffective:
    """Conjugate ``h`` by the exact ``exp(-V)`` with no series truncation.

    Returns the transformed operator, its qubit-ground block and the max-norm
    of the ground/excited coupling block that a projection discards
    (restricted subspace).
    """
    # V is anti-Hermitian, so K = -iV is Hermitian and exp(-V) = exp(-iK).
    k = Operator(gen.v.space, -1j * gen.v.matrix)
    k.require_hermitian(HERMITIAN_RTOL * 10)
    u = expm_hermitian(k, 1.0)
    transformed = u @ h @ u.dag()

    space = h.space
    qi = space.index("qubit")
    idx = restricted_indices(space, margin)
    levels = np.unravel_index(idx, space.dims)[qi]
    ground = idx[levels == 1]
    excited = idx[levels == 0]
    off = transformed.matrix[np.ix_(ground, excited)]
    dropped = float(np.max(np.abs(off))) if off.size else 0.0
    return ExactEffective(transformed, project_qubit_ground(transformed), dropped)


def remainder_norm(h0: Operator, hi: Operator, gen: Generator, margin: int = BOUNDARY_MARGIN) -> float:
    """``max|exp(-V) H exp(V) - (H_0 + [H_I, V]/2)|`` on the restricted subspace."""
    exact = exact_unitary_effective(h0 + hi, gen, margin).transformed
    return restricted_max_norm(exact - second_order(h0, hi, gen), margin)


# Closed-form counterparts of the projected second-order Hamiltonian.
_CLOSED_FORM = {"rwa": build_eff_strong, "nonrwa": build_eff_ultra}


@dataclass(frozen=True)
class EliminationCheck:
    regime: Regime
    residual: float  # restricted max|H_I + [H_0, V]|
    interaction_norm: float  # max|H_I|
    closed_form_diff: float  # restricted max|numeric - closed form|; nan without one

    @property
    def relative_residual(self) -> float:
        return self.residual / self.interaction_norm if self.interaction_norm else self.residual


def check_elimination(
    params: SystemParams, cut: Cutoffs, regime: Regime, margin: int = BOUNDARY_MARGIN
) -> EliminationCheck:
    """Generator residual and, where a closed form exists, its elementwise mismatch."""
    h0 = build_free(params, cut)
    hi = build_interaction(params, cut, INTERACTION_FORM[regime])
    gen = build_generator(params, cut, regime)
    residual = generator_residual(h0, hi, gen, margin)
    diff = float("nan")
    if regime in _CLOSED_FORM:
        numeric = project_qubit_ground(second_order(h0, hi, gen))
        closed = _CLOSED_FORM[regime](params, cut, include_offset=True)
        diff = restricted_max_norm(numeric - closed, margin)
    return EliminationCheck(regime, residual, hi.max_norm(), diff)


def random_dispersive_params(rng: np.random.Generator, n: int) -> list[SystemParams]:
    """``n`` parameter sets with both modes below the qubit and weak couplings."""
    out = []
    for _ in range(n):
        omega_r, omega_s = rng.uniform(0.5, 1.5, size=2)
        omega_q = max(omega_r, omega_s) + rng.uniform(0.5, 3.0)
        g_qr, g_qs = rng.uniform(0.005, 0.1, size=2)
        out.append(SystemParams(omega_q, omega_r, omega_s, g_qr, g_qs))
    return out
