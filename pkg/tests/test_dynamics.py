import logging
import math

import numpy as np
import pytest

from fluxbus import dynamics as dy
from fluxbus import hammodels as hm
from fluxbus import physpar as pp
from fluxbus.errors import SpaceMismatchError

STRONG = pp.SystemParams(2.0, 1.0, 1.0, 0.05, 0.05)


def config(params=STRONG, **kw):
    kw.setdefault("cut", hm.Cutoffs(6, 6))
    kw.setdefault("converge", False)
    return dy.TransferConfig(params=params, **kw)


def test_beam_splitter_transfer_is_sin_squared():
    res = dy.transfer_experiment(config(hamiltonian_kind="eff_strong"))
    ratio = abs(pp.effective_rwa(STRONG).g_eff) / res.gamma
    np.testing.assert_allclose(res.fidelity, np.sin(ratio * res.times) ** 2, atol=1e-12)
    assert res.peak_time == pytest.approx(math.pi / (2 * ratio), abs=res.times[1])


def test_vacuum_rabi_oscillation(caplog):
    # no spin coupling: g_eff = 0, so time is measured in 1/omega_r
    p = pp.SystemParams(1.2, 1.0, 1.0, 0.1, 0.0)
    with caplog.at_level(logging.WARNING):
        res = dy.transfer_experiment(config(
            p, hamiltonian_kind="jaynes_cummings",
            initial={"qubit": "e", "photon": 0, "spin": 0},
            target={"qubit": "g", "photon": 1, "spin": 0},
            t_max=40.0, n_steps=401,
        ))
    assert "g_eff = 0" in caplog.text
    omega = math.hypot(p.g_qr, (p.omega_q - p.omega_r) / 2)
    expected = (p.g_qr / omega) ** 2 * np.sin(omega * res.times) ** 2
    np.testing.assert_allclose(res.fidelity, expected, atol=1e-12)


def test_reverse_transfer_has_same_fidelity():
    fwd = dy.transfer_experiment(config())
    back = dy.transfer_experiment(config(initial=dy.SPIN_TO_PHOTON_TARGET, target=dy.SPIN_TO_PHOTON_INITIAL))
    np.testing.assert_allclose(fwd.fidelity, back.fidelity, atol=1e-12)


def test_no_spin_coupling_gives_zero_fidelity():
    res = dy.transfer_experiment(config(STRONG.replace(g_qs=0.0), converge=True))
    assert np.all(res.fidelity == 0.0)
    assert res.converged is True


def test_deterministic():
    a = dy.transfer_experiment(config())
    b = dy.transfer_experiment(config())
    assert np.array_equal(a.fidelity, b.fidelity)


def test_convergence_is_idempotent():
    cfg = config(STRONG, cut=None, converge=True)
    cut, ok = dy.cutoff_convergence(cfg)
    assert ok
    again, ok2 = dy.cutoff_convergence(config(STRONG, cut=cut, converge=True))
    assert (again, ok2) == (cut, True)


def test_non_convergence_reported():
    p = pp.SystemParams(9.0, 1.0, 1.0, 1.0, 1.0)
    res = dy.transfer_experiment(config(p, cut=hm.Cutoffs(2, 2), cap=3, converge=True, n_steps=51))
    assert res.converged is False


def test_conservation_along_trajectory():
    h = hm.build_rabi_full(STRONG, hm.Cutoffs(6, 6))
    psi0 = dy.resolve_state(dy.SPIN_TO_PHOTON_INITIAL, h.space)
    rep = dy.check_conservation(h, psi0, np.linspace(0, 300, 101))
    assert rep.max_norm_error < 1e-10 and rep.max_energy_drift < 1e-9


class TestStates:
    def test_effective_models_drop_the_qubit(self):
        space = hm.mode_space(hm.Cutoffs(3, 3))
        psi = dy.resolve_state(dy.SPIN_TO_PHOTON_INITIAL, space)
        assert psi.amplitudes[space.flat_index({"photon": 0, "spin": 1})] == 1
        with pytest.raises(SpaceMismatchError):
            dy.resolve_state({"qubit": "e", "photon": 0, "spin": 1}, space)

    def test_collective_level_maps_to_dicke_state(self):
        space = hm.exact_spin_space(3, hm.Cutoffs(3, 2))
        psi = dy.resolve_state(dy.SPIN_TO_PHOTON_INITIAL, space)
        nonzero = np.flatnonzero(psi.amplitudes)
        assert len(nonzero) == 3
        np.testing.assert_allclose(psi.amplitudes[nonzero], 1 / math.sqrt(3))

    def test_superposition_state(self):
        space = hm.full_space(hm.Cutoffs(3, 3))
        spec = [(1, {"qubit": "g", "photon": 0, "spin": 1}), (1j, {"qubit": "g", "photon": 1, "spin": 0})]
        v = dy.resolve_state([(a / math.sqrt(2), lv) for a, lv in spec], space)
        assert v.norm() == pytest.approx(1.0)


class TestSweeps:
    def test_workers_do_not_change_rows(self):
        base = config(converge=False)
        g_values = [0.05, 0.025, 0.1]
        serial = dy.sweep_coupling(base, g_values)
        threaded = dy.sweep_coupling(base, g_values, workers=3)
        assert serial == threaded
        assert [g for g, _ in serial] == g_values

    def test_rejects_nonpositive_coupling(self):
        with pytest.raises(ValueError):
            dy.sweep_coupling(config(), [0.1, 0.0])

    def test_ensemble_size_anchor(self):
        (row,) = dy.sweep_ensemble_size([1e8])
        assert row == pytest.approx((1e8, 12.0, 0.1), rel=1e-12)


def test_rotating_wave_bosonization_is_exact_in_single_excitation_sector():
    rep = dy.bosonization_check(STRONG, n_spins=3, cut=hm.Cutoffs(6, 6), n_steps=201, rotating_wave=True)
    assert rep.max_deviation < 1e-10


def test_config_validation():
    with pytest.raises(ValueError):
        config(n_steps=1)
    with pytest.raises(ValueError):
        config(hamiltonian_kind="rabi")
