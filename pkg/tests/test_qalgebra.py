import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from fluxbus.errors import (
    HermiticityError,
    InvalidDimensionError,
    NormalizationError,
    SpaceMismatchError,
)
from fluxbus.qalgebra import (
    Operator,
    SpaceLabel,
    SpectralPropagator,
    StateVector,
    commutator,
    embed,
    expm_hermitian,
    fock_ladder,
    identity,
    pauli,
    project_qubit_ground,
)


def random_hermitian(rng, d):
    m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (m + m.conj().T) / 2


class TestSpaceLabel:
    def test_dims_and_flat_index_follow_kron_order(self):
        sp = SpaceLabel.of(qubit=2, photon=3, spin=4)
        assert sp.dims == (2, 3, 4) and sp.dim == 24
        # |g, 2, 1> -> 1*12 + 2*4 + 1
        assert sp.flat_index({"qubit": "g", "photon": 2, "spin": 1}) == 21

    def test_duplicate_names_rejected(self):
        with pytest.raises(ValueError):
            SpaceLabel((("a", 2), ("a", 3)))

    def test_flat_index_needs_every_factor(self):
        sp = SpaceLabel.of(qubit=2, photon=3)
        with pytest.raises(SpaceMismatchError):
            sp.flat_index({"photon": 1})
        with pytest.raises(InvalidDimensionError):
            sp.flat_index({"qubit": "e", "photon": 3})

    def test_without(self):
        sp = SpaceLabel.of(qubit=2, photon=3, spin=4)
        assert sp.without("qubit") == SpaceLabel.of(photon=3, spin=4)
        with pytest.raises(SpaceMismatchError):
            sp.without("cavity")


class TestOperators:
    def test_ladder_commutator_is_identity_below_top_level(self):
        a = fock_ladder(7)
        c = commutator(a, a.dag()).matrix
        np.testing.assert_allclose(np.diag(c)[:-1], 1.0)
        assert c[-1, -1] == pytest.approx(-6.0)

    def test_ladder_rejects_small_dim(self):
        with pytest.raises(InvalidDimensionError):
            fock_ladder(1)

    def test_pauli_conventions(self):
        sp, sm, sz = pauli("plus"), pauli("minus"), pauli("z")
        # index 0 is the excited state
        np.testing.assert_array_equal((sp @ sm).matrix, np.diag([1, 0]))
        np.testing.assert_array_equal(commutator(sp, sm).matrix, sz.matrix)
        np.testing.assert_array_equal((sp + sm).matrix, pauli("x").matrix)
        with pytest.raises(ValueError):
            pauli("w")

    def test_embed_matches_kron(self):
        sp = SpaceLabel.of(qubit=2, photon=3, spin=4)
        a = fock_ladder(3).matrix
        np.testing.assert_array_equal(
            embed(a, sp, "photon").matrix, np.kron(np.kron(np.eye(2), a), np.eye(4))
        )
        with pytest.raises(InvalidDimensionError):
            embed(a, sp, "spin")

    def test_arithmetic_checks_spaces(self):
        a = Operator(SpaceLabel.of(x=2), np.eye(2))
        b = Operator(SpaceLabel.of(y=2), np.eye(2))
        with pytest.raises(SpaceMismatchError):
            a + b
        np.testing.assert_array_equal((2 * a - a / 2).matrix, 1.5 * np.eye(2))

    def test_matrix_is_read_only(self):
        a = identity(SpaceLabel.of(x=2))
        with pytest.raises(ValueError):
            a.matrix[0, 0] = 3

    def test_hermiticity(self):
        sp = SpaceLabel.of(x=2)
        assert pauli("y").is_hermitian()
        with pytest.raises(HermiticityError):
            Operator(sp, [[0, 1], [0, 0]]).require_hermitian()

    def test_state_norm_checked(self):
        sp = SpaceLabel.of(x=2)
        with pytest.raises(NormalizationError):
            StateVector(sp, [1, 1])
        psi = StateVector.normalized(sp, [1, 1j])
        assert psi.norm() == pytest.approx(1.0)
        assert pauli("y", "x").expectation(psi) == pytest.approx(1.0)


class TestPropagator:
    def test_matches_scipy_expm(self):
        rng = np.random.default_rng(0)
        h = Operator(SpaceLabel.of(m=6), random_hermitian(rng, 6))
        u = expm_hermitian(h, 0.7).matrix
        np.testing.assert_allclose(u, scipy.linalg.expm(-0.7j * h.matrix), atol=1e-12)

    def test_rejects_non_hermitian(self):
        with pytest.raises(HermiticityError):
            SpectralPropagator(Operator(SpaceLabel.of(m=2), [[0, 1], [2, 0]]))

    @settings(max_examples=40, deadline=None)
    @given(
        d=st.integers(2, 8),
        seed=st.integers(0, 2**32 - 1),
        t1=st.floats(-5, 5),
        t2=st.floats(-5, 5),
    )
    def test_unitary_group_property(self, d, seed, t1, t2):
        h = Operator(SpaceLabel.of(m=d), random_hermitian(np.random.default_rng(seed), d))
        prop = SpectralPropagator(h)
        u1, u2 = prop.unitary(t1).matrix, prop.unitary(t2).matrix
        np.testing.assert_allclose(u1 @ u1.conj().T, np.eye(d), atol=1e-10)
        np.testing.assert_allclose(u1 @ u2, prop.unitary(t1 + t2).matrix, atol=1e-10)

    def test_evolve_and_overlaps_agree(self):
        rng = np.random.default_rng(3)
        sp = SpaceLabel.of(m=5)
        h = Operator(sp, random_hermitian(rng, 5))
        psi0 = StateVector.basis(sp, m=0)
        target = StateVector.basis(sp, m=3)
        times = np.linspace(0, 2, 9)
        prop = SpectralPropagator(h)
        rows = prop.evolve(psi0, times)
        np.testing.assert_allclose(np.linalg.norm(rows, axis=1), 1.0, atol=1e-12)
        np.testing.assert_allclose(prop.overlaps(target, psi0, times), rows[:, 3], atol=1e-12)


class TestProjection:
    @pytest.mark.parametrize("position", [0, 1, 2])
    def test_ground_block_of_product(self, position):
        rng = np.random.default_rng(position)
        q = rng.normal(size=(2, 2))
        b = rng.normal(size=(3, 3))
        c = rng.normal(size=(2, 2))
        mats = [b, c]
        mats.insert(position, q)
        names = ["m1", "m2"]
        names.insert(position, "qubit")
        sp = SpaceLabel(tuple((n, m.shape[0]) for n, m in zip(names, mats)))
        full = np.kron(np.kron(mats[0], mats[1]), mats[2])
        out = project_qubit_ground(Operator(sp, full))
        assert out.space == SpaceLabel.of(m1=3, m2=2)
        np.testing.assert_allclose(out.matrix, q[1, 1] * np.kron(b, c))
