"""Single-mode and many-mode coupled-gas tests, including the truncated-Fock
brute-force oracle of the analytic spectrum."""

import math

import numpy as np
import pytest

from cavity_bloch.cavity_gas import (
    CavitySetup,
    GasEigenstateLabel,
    ModeSet,
    collective_coupling,
    coupling_scale,
    dressed_frequency,
    ground_state_photon_occupation,
    many_mode_spectrum,
    mode_coupling_matrix,
    no_a2_coupling,
    single_mode_energy,
    stability_classify,
)
from cavity_bloch.constants import EPSILON_0, E_CHARGE, HBAR, M_ELECTRON
from cavity_bloch.errors import DomainError


class TestDressedFrequency:
    def test_decoupled(self):
        assert dressed_frequency(2.3e12, 0.0) == 2.3e12

    def test_pythagorean(self):
        assert dressed_frequency(3.0, 4.0) == pytest.approx(5.0, rel=1e-15)

    def test_equal_inputs(self):
        w = 7.7e11
        assert dressed_frequency(w, w) == pytest.approx(math.sqrt(2) * w, rel=1e-15)


class TestCollectiveCoupling:
    def test_no_matter(self):
        assert collective_coupling(1e12, 0.0) == 0.0

    def test_zero_frequency_critical(self):
        assert collective_coupling(0.0, 5e11) == 1.0

    def test_balanced(self):
        assert collective_coupling(3e11, 3e11) == pytest.approx(0.5, rel=1e-15)

    def test_bounded_property(self):
        rng = np.random.default_rng(31)
        for _ in range(500):
            w, wp = rng.uniform(0.0, 1e13, 2)
            if w == 0.0 and wp == 0.0:
                continue
            assert 0.0 <= collective_coupling(w, wp) <= 1.0


class TestStability:
    def test_classification(self):
        assert stability_classify(0.2) == "stable"
        assert stability_classify(1.0) == "critical"
        assert stability_classify(1.0 - 5e-13) == "critical"
        assert stability_classify(1.3) == "unstable"

    def test_no_a2_unbounded(self):
        w = 1e12
        assert no_a2_coupling(w, w / 2) == (pytest.approx(0.25), "stable")
        gamma_prime, label = no_a2_coupling(w, w)
        assert gamma_prime == pytest.approx(1.0) and label == "critical"
        gamma_prime, label = no_a2_coupling(w, 2 * w)
        assert gamma_prime == pytest.approx(4.0) and label == "unstable"
        # samples up to 1e6 while gamma stays within [0, 1]
        assert no_a2_coupling(w, 1e3 * w)[0] == pytest.approx(1e6)
        assert collective_coupling(w, 1e3 * w) <= 1.0

    def test_omega_zero_rejected(self):
        with pytest.raises(DomainError):
            no_a2_coupling(0.0, 1e12)


class TestPhotonOccupation:
    def test_decoupling_limit(self):
        assert ground_state_photon_occupation(1e12, 1e6) == pytest.approx(0.0, abs=1e-10)

    def test_matched_frequencies_closed_form(self):
        # (3 - 2 sqrt(2)) / (2 sqrt(2)), evaluated independently
        expect = (3.0 - 2.0 * math.sqrt(2.0)) / (2.0 * math.sqrt(2.0))
        assert expect == pytest.approx(0.060660, abs=1e-6)
        assert ground_state_photon_occupation(1e12, 1e12) == pytest.approx(expect, rel=1e-12)

    def test_density_square_root_growth(self):
        # at wp >> w the occupation ~ wp/2w, and wp ~ sqrt(n_e)
        w = 1e10
        occ4 = ground_state_photon_occupation(w, 400 * w)
        occ1 = ground_state_photon_occupation(w, 200 * w)
        assert occ4 / occ1 == pytest.approx(2.0, rel=1e-2)

    def test_monotone_vanishing(self):
        w = 1e12
        occs = [ground_state_photon_occupation(w, wp) for wp in np.linspace(2e12, 0.0, 40)]
        assert all(b <= a + 1e-18 for a, b in zip(occs, occs[1:]))
        assert all(occ >= 0.0 for occ in occs)

    def test_zero_frequency_rejected(self):
        with pytest.raises(DomainError):
            ground_state_photon_occupation(0.0, 1e12)


def keller_setup():
    return CavitySetup(omega_cav=2 * math.pi * 0.208e12, n2d=1.3e16, mass_ratio=0.336)


class TestCavitySetup:
    def test_keller_plasma_frequency(self):
        assert keller_setup().omega_p == pytest.approx(0.292e12, rel=5e-3)

    def test_mirror_distance_roundtrip(self):
        setup = keller_setup()
        again = CavitySetup.from_mirror_distance(setup.l_z, setup.n2d, setup.mass_ratio)
        assert again.omega_cav == pytest.approx(setup.omega_cav, rel=1e-14)


class TestSingleModeEnergy:
    def test_ground_state_photonic_offset(self):
        setup = keller_setup()
        label = GasEigenstateLabel(collective_k=(0.0, 0.0), occupations=(0, 0), kinetic_sum=1e-20)
        energy = single_mode_energy(setup, label, area=1e-8)
        assert energy == pytest.approx(1e-20 + HBAR * setup.omega_tilde, rel=1e-12)

    def test_formula_level_gamma_independence_at_k0(self):
        # two setups sharing omega_tilde but not gamma give identical K = 0
        # energies: the coupling enters only through the K-dependent term
        label = GasEigenstateLabel(collective_k=(0.0, 0.0), occupations=(1, 2), kinetic_sum=3e-21)
        setup_a = CavitySetup(omega_cav=1.2e12, n2d=1.3e16, mass_ratio=1.0)
        # solve the density that reproduces omega_tilde at a lower frequency
        c1 = setup_a.omega_p**2 / (setup_a.n2d * setup_a.omega_cav)
        omega_b = 0.7e12
        n_b = (setup_a.omega_tilde**2 - omega_b**2) / (c1 * omega_b)
        setup_b = CavitySetup(omega_cav=omega_b, n2d=n_b, mass_ratio=1.0)
        assert setup_b.omega_tilde == pytest.approx(setup_a.omega_tilde, rel=1e-14)
        assert abs(setup_b.gamma - setup_a.gamma) > 0.05
        e_a = single_mode_energy(setup_a, label, area=1e-8)
        e_b = single_mode_energy(setup_b, label, area=1e-8)
        assert e_b == pytest.approx(e_a, rel=1e-13)
        # and the explicit formula: kinetic plus the photon ladder only
        expect = 3e-21 + HBAR * setup_a.omega_tilde * (1.5 + 2.5)
        assert e_a == pytest.approx(expect, rel=1e-13)

    def test_decoupled_limit(self):
        # vanishing density: gamma -> 0, energy -> bare oscillators + kinetic
        setup = CavitySetup(omega_cav=1e12, n2d=1e6, mass_ratio=1.0)
        label = GasEigenstateLabel(collective_k=(5e8, 0.0), occupations=(0, 0), kinetic_sum=0.0)
        energy = single_mode_energy(setup, label, area=1.0)
        assert energy == pytest.approx(HBAR * setup.omega_tilde, rel=1e-6)
        assert setup.gamma < 1e-10

    def test_too_few_electrons_rejected(self):
        setup = keller_setup()
        label = GasEigenstateLabel(collective_k=(0.0, 0.0), occupations=(0, 0), kinetic_sum=0.0)
        with pytest.raises(DomainError):
            single_mode_energy(setup, label, area=1e-20)


def fock_oracle_spectrum(omega, omega_p, eps_dot_k, n_electrons, volume, n_photons=60):
    """Dense truncated-Fock diagonalization of one polarization sector.

    H = hbar wt (b^dag b + 1/2) - g0 (b + b^dag) eps.K on the plane-wave
    sector, with g0 the single-particle coupling; kinetic energy excluded.
    """
    wt = math.hypot(omega, omega_p)
    g0 = (
        E_CHARGE
        * HBAR
        / M_ELECTRON
        * math.sqrt(HBAR / (EPSILON_0 * volume * 2.0 * wt))
    )
    idx = np.arange(n_photons)
    ham = np.diag(HBAR * wt * (idx + 0.5)).astype(complex)
    ladder = np.sqrt(np.arange(1, n_photons))
    ham += -g0 * eps_dot_k * (np.diag(ladder, 1) + np.diag(ladder, -1))
    return np.sort(np.linalg.eigvalsh(ham))


class TestFockOracle:
    def test_two_electron_spectrum(self):
        # two electrons, one mode, one polarization; gamma <= 0.5
        area = 1e-14
        n2d = 2.0 / area
        setup = CavitySetup(omega_cav=2 * math.pi * 1e12, n2d=n2d, mass_ratio=1.0)
        assert setup.gamma <= 0.5
        k1 = (2 * math.pi / 1e-7, 0.0)
        k2 = (4 * math.pi / 1e-7, 0.0)
        k_total = (k1[0] + k2[0], 0.0)
        kinetic = sum(HBAR**2 * (k[0] ** 2 + k[1] ** 2) / (2 * M_ELECTRON) for k in (k1, k2))
        volume = area * setup.l_z
        oracle = fock_oracle_spectrum(setup.omega_cav, setup.omega_p, k_total[0], 2, volume)
        for n_ph in range(4):
            label = GasEigenstateLabel(
                collective_k=k_total, occupations=(n_ph, 0), kinetic_sum=kinetic
            )
            analytic = single_mode_energy(setup, label, area)
            # strip the spectator polarization zero point and kinetic sum
            analytic_sector = analytic - kinetic - 0.5 * HBAR * setup.omega_tilde
            assert analytic_sector == pytest.approx(oracle[n_ph], rel=1e-6)

    def test_oracle_truncation_converged(self):
        setup = CavitySetup(omega_cav=2 * math.pi * 1e12, n2d=2.0 / 1e-14, mass_ratio=1.0)
        volume = 1e-14 * setup.l_z
        k = 6 * math.pi / 1e-7
        coarse = fock_oracle_spectrum(setup.omega_cav, setup.omega_p, k, 2, volume, 60)
        fine = fock_oracle_spectrum(setup.omega_cav, setup.omega_p, k, 2, volume, 120)
        assert np.max(np.abs(coarse[:5] - fine[:5]) / np.abs(fine[:5])) < 1e-9


class TestManyMode:
    def test_single_mode_reduction(self):
        omega = 1.3e12
        omega_p = 0.4e12
        modes = ModeSet(omegas=(omega,), polarizations=((1.0, 0.0),))
        volume = 1e-17
        g_tilde = coupling_scale(volume)
        k = (3e8, 1e8)
        kinetic = 2.2e-20
        energy, normal = many_mode_spectrum(modes, omega_p, k, (0,), kinetic, g_tilde)
        wt = math.hypot(omega, omega_p)
        assert normal[0] == pytest.approx(wt, rel=1e-12)
        # per-polarization single-mode formula: -g0^2 (eps.K)^2 / (hbar wt)
        g0 = E_CHARGE * HBAR / M_ELECTRON * math.sqrt(HBAR / (EPSILON_0 * volume * 2 * wt))
        expect = kinetic + 0.5 * HBAR * wt - g0**2 * k[0] ** 2 / (HBAR * wt)
        assert energy == pytest.approx(expect, rel=1e-12)

    def test_two_mode_closed_form(self):
        w1, w2, wp = 1.0e12, 1.7e12, 0.6e12
        modes = ModeSet(omegas=(w1, w2), polarizations=((1.0, 0.0), (1.0, 0.0)))
        _, normal = many_mode_spectrum(
            modes, wp, (0.0, 0.0), (0, 0), 0.0, coupling_scale(1e-15)
        )
        wt1, wt2 = w1**2 + wp**2, w2**2 + wp**2
        disc = math.sqrt((wt1 - wt2) ** 2 + 4 * wp**4)
        expect = sorted([math.sqrt((wt1 + wt2 - disc) / 2), math.sqrt((wt1 + wt2 + disc) / 2)])
        assert np.allclose(normal, expect, rtol=1e-10)

    def test_orthogonal_polarizations_decouple(self):
        w1, w2, wp = 1.0e12, 1.5e12, 0.5e12
        modes = ModeSet(omegas=(w1, w2), polarizations=((1.0, 0.0), (0.0, 1.0)))
        w = mode_coupling_matrix(modes, wp)
        assert w[0, 1] == 0.0 and w[1, 0] == 0.0
        _, normal = many_mode_spectrum(modes, wp, (0.0, 0.0), (0, 0), 0.0, coupling_scale(1e-15))
        assert np.allclose(normal, sorted([math.hypot(w1, wp), math.hypot(w2, wp)]), rtol=1e-12)

    def test_trace_invariant(self):
        rng = np.random.default_rng(41)
        for _ in range(20):
            count = int(rng.integers(2, 6))
            omegas = tuple(rng.uniform(5e11, 3e12, count))
            angles = rng.uniform(0.0, 2 * math.pi, count)
            pols = tuple((math.cos(t), math.sin(t)) for t in angles)
            modes = ModeSet(omegas=omegas, polarizations=pols)
            wp = float(rng.uniform(1e11, 1e12))
            _, normal = many_mode_spectrum(
                modes, wp, (0.0, 0.0), (0,) * count, 0.0, coupling_scale(1e-15)
            )
            trace = sum(w**2 + wp**2 for w in omegas)
            assert np.sum(normal**2) == pytest.approx(trace, rel=1e-10)

    def test_unnormalized_polarization_rejected(self):
        with pytest.raises(DomainError):
            ModeSet(omegas=(1e12,), polarizations=((0.5, 0.0),))
