"""Hybrid-circuit simulator: a flux qubit mediating coupling between a
transmission-line resonator and an NV spin ensemble.

Modules
-------
qalgebra     labelled tensor-product operators and the spectral propagator
physpar      closed-form couplings and effective parameters
hammodels    full, effective and explicit-spin Hamiltonians
fntransform  numerical Froehlich-Nakajima elimination of the qubit
dynamics     state-transfer fidelity, cutoff convergence and sweeps
cli          command-line front end
"""

__version__ = "0.1.0"

from .hammodels import Cutoffs, HamiltonianKind, build  # noqa: E402
from .physpar import SystemParams, effective_nonrwa, effective_rwa  # noqa: E402

__all__ = [
    "Cutoffs",
    "HamiltonianKind",
    "SystemParams",
    "build",
    "effective_nonrwa",
    "effective_rwa",
    "__version__",
]
