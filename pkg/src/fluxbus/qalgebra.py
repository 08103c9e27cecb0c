"""Dense operator algebra on labeled tensor-product Hilbert spaces.

Conventions
-----------
* The qubit factor is always ordered ``(e, g)``: index 0 is the excited
  state, index 1 the ground state, so ``sigma_z = diag(1, -1)`` and
  ``sigma_+ = |e><g|``.
* Bosonic factors use the Fock ordering ``|0>, |1>, ..., |d-1>``.
* Kronecker products follow the factor order of the :class:`SpaceLabel`.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    HermiticityError,
    InvalidDimensionError,
    NormalizationError,
    SpaceMismatchError,
)

__all__ = [
    "QUBIT_LEVELS",
    "HERMITIAN_RTOL",
    "UNITARY_ATOL",
    "SpaceLabel",
    "Operator",
    "StateVector",
    "SpectralPropagator",
    "fock_ladder",
    "pauli",
    "identity",
    "embed",
    "commutator",
    "expm_hermitian",
    "project_qubit_ground",
]

QUBIT = "qubit"
QUBIT_LEVELS = {"e": 0, "g": 1}

HERMITIAN_RTOL = 1e-12
UNITARY_ATOL = 1e-10
NORM_ATOL = 1e-10


@dataclass(frozen=True)
class SpaceLabel:
    """Ordered list of named tensor factors, e.g. ``(qubit:2, photon:6, spin:6)``."""

    factors: tuple[tuple[str, int], ...]

    def __post_init__(self):
        factors = tuple((str(name), int(dim)) for name, dim in self.factors)
        names = [name for name, _ in factors]
        if len(set(names)) != len(names):
            raise ValueError(f"factor names must be unique, got {names}")
        for name, dim in factors:
            if dim < 1:
                raise InvalidDimensionError(f"factor {name!r} has dimension {dim}")
        object.__setattr__(self, "factors", factors)

    @classmethod
    def of(cls, **dims: int) -> "SpaceLabel":
        """Build a space from keyword arguments, keeping their order."""
        return cls(tuple(dims.items()))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.factors)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(dim for _, dim in self.factors)

    @property
    def dim(self) -> int:
        return prod(self.dims)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise SpaceMismatchError(
                f"unknown factor {name!r}; space has {self.names}"
            ) from None

    def dim_of(self, name: str) -> int:
        return self.dims[self.index(name)]

    def without(self, name: str) -> "SpaceLabel":
        i = self.index(name)
        return SpaceLabel(self.factors[:i] + self.factors[i + 1 :])

    def flat_index(self, levels: Mapping[str, int | str]) -> int:
        """Flat basis index of the product state given one level per factor.

        Qubit levels may be given as ``"e"``/``"g"``.
        """
        missing = set(self.names) - set(levels)
        extra = set(levels) - set(self.names)
        if missing or extra:
            raise SpaceMismatchError(
                f"levels must name every factor exactly; missing={sorted(missing)}, "
                f"unknown={sorted(extra)}"
            )
        idx = []
        for name, dim in self.factors:
            level = levels[name]
            if isinstance(level, str):
                level = QUBIT_LEVELS[level]
            if not 0 <= level < dim:
                raise InvalidDimensionError(
                    f"level {level} out of range for factor {name!r} of dim {dim}"
                )
            idx.append(level)
        return int(np.ravel_multi_index(idx, self.dims))

    def __str__(self):
        return "(" + ", ".join(f"{n}:{d}" for n, d in self.factors) + ")"


def _check_same_space(a: SpaceLabel, b: SpaceLabel):
    if a != b:
        raise SpaceMismatchError(f"space mismatch: {a} vs {b}")


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Operator:
    """Dense complex matrix acting on a :class:`SpaceLabel`. Immutable."""

    space: SpaceLabel
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        d = self.space.dim
        if m.shape != (d, d):
            raise InvalidDimensionError(
                f"matrix shape {m.shape} does not match space {self.space} (dim {d})"
            )
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.space.dim

    def dag(self) -> "Operator":
        return Operator(self.space, self.matrix.conj().T)

    def max_norm(self) -> float:
        return float(np.max(np.abs(self.matrix))) if self.matrix.size else 0.0

    def hermiticity_defect(self) -> float:
        """``max|H - H^dag|`` relative to ``max|H|`` (0 for the zero operator)."""
        scale = self.max_norm()
        if scale == 0.0:
            return 0.0
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T))) / scale

    def is_hermitian(self, rtol: float = HERMITIAN_RTOL) -> bool:
        return self.hermiticity_defect() <= rtol

    def require_hermitian(self, rtol: float = HERMITIAN_RTOL) -> "Operator":
        defect = self.hermiticity_defect()
        if defect > rtol:
            raise HermiticityError(
                f"operator on {self.space} is not Hermitian: relative defect {defect:.3e}"
            )
        return self

    def expectation(self, psi: "StateVector") -> complex:
        _check_same_space(self.space, psi.space)
        v = psi.amplitudes
        return complex(np.vdot(v, self.matrix @ v))

    def __add__(self, other):
        if isinstance(other, Operator):
            _check_same_space(self.space, other.space)
            return Operator(self.space, self.matrix + other.matrix)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, Operator):
            _check_same_space(self.space, other.space)
            return Operator(self.space, self.matrix - other.matrix)
        return NotImplemented

    def __neg__(self):
        return Operator(self.space, -self.matrix)

    def __mul__(self, scalar):
        if isinstance(scalar, (int, float, complex, np.number)):
            return Operator(self.space, self.matrix * scalar)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if isinstance(scalar, (int, float, complex, np.number)):
            return Operator(self.space, self.matrix / scalar)
        return NotImplemented

    def __matmul__(self, other):
        if isinstance(other, Operator):
            _check_same_space(self.space, other.space)
            return Operator(self.space, self.matrix @ other.matrix)
        if isinstance(other, StateVector):
            _check_same_space(self.space, other.space)
            return StateVector(self.space, self.matrix @ other.amplitudes, check=False)
        return NotImplemented

    def __repr__(self):
        return f"Operator(space={self.space}, dim={self.dim})"


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized complex state vector on a :class:`SpaceLabel`."""

    space: SpaceLabel
    amplitudes: np.ndarray
    check: bool = True

    def __post_init__(self):
        v = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if v.shape != (self.space.dim,):
            raise InvalidDimensionError(
                f"state of length {v.size} does not match space {self.space}"
            )
        if self.check:
            norm = np.linalg.norm(v)
            if abs(norm - 1.0) > NORM_ATOL:
                raise NormalizationError(f"state norm {norm!r} differs from 1")
        object.__setattr__(self, "amplitudes", _frozen(v))

    @classmethod
    def basis(cls, space: SpaceLabel, **levels: int | str) -> "StateVector":
        v = np.zeros(space.dim, dtype=np.complex128)
        v[space.flat_index(levels)] = 1.0
        return cls(space, v)

    @classmethod
    def normalized(cls, space: SpaceLabel, amplitudes: Iterable[complex]) -> "StateVector":
        v = np.asarray(amplitudes, dtype=np.complex128)
        norm = np.linalg.norm(v)
        if norm == 0:
            raise NormalizationError("cannot normalize the zero vector")
        return cls(space, v / norm)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def inner(self, other: "StateVector") -> complex:
        """``<self|other>``."""
        _check_same_space(self.space, other.space)
        return complex(np.vdot(self.amplitudes, other.amplitudes))


def fock_ladder(dim: int, name: str = "mode") -> Operator:
    """Truncated annihilation operator, ``a|n> = sqrt(n)|n-1>``.

    The creation operator is ``fock_ladder(dim).dag()``.
    """
    if int(dim) != dim or dim < 2:
        raise InvalidDimensionError(f"ladder operator needs dim >= 2, got {dim}")
    dim = int(dim)
    m = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1)
    return Operator(SpaceLabel(((name, dim),)), m)


_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
    "plus": np.array([[0, 1], [0, 0]], dtype=complex),
    "minus": np.array([[0, 0], [1, 0]], dtype=complex),
}


def pauli(kind: str, name: str = QUBIT) -> Operator:
    """Pauli operator in the ``(e, g)`` basis; ``kind`` in x, y, z, plus, minus."""
    try:
        m = _PAULI[kind]
    except KeyError:
        raise ValueError(f"unknown Pauli kind {kind!r}; expected one of {sorted(_PAULI)}") from None
    return Operator(SpaceLabel(((name, 2),)), m)


def identity(space: SpaceLabel) -> Operator:
    return Operator(space, np.eye(space.dim))


def embed(op: Operator | np.ndarray, space: SpaceLabel, factor: str) -> Operator:
    """Place a single-factor operator on ``factor`` with identities elsewhere."""
    m = op.matrix if isinstance(op, Operator) else np.asarray(op, dtype=complex)
    i = space.index(factor)
    if m.shape != (space.dims[i],) * 2:
        raise InvalidDimensionError(
            f"operator of shape {m.shape} cannot act on factor {factor!r} "
            f"of dimension {space.dims[i]}"
        )
    left = prod(space.dims[:i])
    right = prod(space.dims[i + 1 :])
    full = np.kron(np.kron(np.eye(left), m), np.eye(right))
    return Operator(space, full)


def commutator(a: Operator, b: Operator) -> Operator:
    _check_same_space(a.space, b.space)
    return Operator(a.space, a.matrix @ b.matrix - b.matrix @ a.matrix)


class SpectralPropagator:
    """One-time eigendecomposition of a Hermitian operator, reused for all times.

    ``exp(-iHt) = V diag(exp(-i E t)) V^dag``; each time point then costs O(d^2)
    (or O(d) when only overlaps with a fixed target are needed).
    """

    def __init__(self, h: Operator, rtol: float = HERMITIAN_RTOL):
        h.require_hermitian(rtol)
        self.space = h.space
        herm = 0.5 * (h.matrix + h.matrix.conj().T)
        self.energies, self.vectors = np.linalg.eigh(herm)

    def unitary(self, t: float) -> Operator:
        phases = np.exp(-1j * self.energies * t)
        return Operator(self.space, (self.vectors * phases) @ self.vectors.conj().T)

    def evolve(self, psi0: StateVector, times: Sequence[float]) -> np.ndarray:
        """Amplitudes of psi(t) for every t, shape ``(len(times), dim)``."""
        _check_same_space(self.space, psi0.space)
        c = self.vectors.conj().T @ psi0.amplitudes
        phases = np.exp(-1j * np.outer(np.asarray(times, dtype=float), self.energies))
        return (phases * c) @ self.vectors.T

    def overlaps(self, target: StateVector, psi0: StateVector, times: Sequence[float]) -> np.ndarray:
        """``<target|psi(t)>`` for every t without forming the states."""
        _check_same_space(self.space, psi0.space)
        _check_same_space(self.space, target.space)
        weights = (target.amplitudes.conj() @ self.vectors) * (
            self.vectors.conj().T @ psi0.amplitudes
        )
        phases = np.exp(-1j * np.outer(np.asarray(times, dtype=float), self.energies))
        return phases @ weights


def expm_hermitian(h: Operator, t: float) -> Operator:
    """``exp(-iHt)`` by spectral decomposition; raises on non-Hermitian input."""
    return SpectralPropagator(h).unitary(t)


def project_qubit_ground(op: Operator, qubit: str = QUBIT) -> Operator:
    """Keep the ``<g| O |g>`` block, returning an operator on the remaining factors."""
    space = op.space
    i = space.index(qubit)
    if space.dims[i] != 2:
        raise InvalidDimensionError(f"factor {qubit!r} is not a qubit")
    g = QUBIT_LEVELS["g"]
    n = len(space.dims)
    t = op.matrix.reshape(space.dims + space.dims)
    block = np.take(np.take(t, g, axis=n + i), g, axis=i)
    rest = space.without(qubit)
    return Operator(rest, block.reshape(rest.dim, rest.dim))
