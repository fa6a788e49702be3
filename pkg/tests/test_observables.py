"""Entropies, asymptote extraction and the mixing-angle fit.

Entropy values are checked against a dense Fock reference: the state
is expanded in a truncated number basis and both reduced densities are
formed by explicit partial trace, so the Gram-matrix route in the
package is exercised against an independent construction.
"""

import numpy as np
import pytest
from scipy.integrate import quad

from spinbath.observables import (
    AsymptoteRecord,
    asymptote_density,
    entropy_record,
    environment_entropy,
    extract_asymptote,
    histogram_asymptotes,
    linear_entropy,
    phi_sweep_fit,
    spin_entropy,
)
from spinbath.state import D2State, SpinDensity, reduced_spin_density
from spinbath.trace import BlochTrace

NMAX = 30


def fock_coherent(gamma, nmax=NMAX):
    n = np.arange(nmax)
    logfact = np.concatenate([[0.0], np.cumsum(np.log(np.arange(1, nmax)))])
    amps = np.zeros(nmax, dtype=complex)
    amps[0] = 1.0
    if gamma != 0:
        amps[1:] = np.exp(n[1:] * np.log(complex(gamma)) - 0.5 * logfact[1:])
    return np.exp(-0.5 * abs(gamma) ** 2) * amps


def dense_vector(state, nmax=NMAX):
    """Spin-major dense amplitude matrix psi[s, bath_index]."""
    bath_dim = nmax ** state.n_modes
    psi = np.zeros((2, bath_dim), dtype=complex)
    for m in range(state.multiplicity):
        vec = np.array([1.0 + 0.0j])
        for g in state.gammas[m]:
            vec = np.kron(vec, fock_coherent(g, nmax))
        for s in range(2):
            psi[s] += state.C[m, s] * vec
    return psi


def dense_entropies(state, nmax=NMAX):
    """(S_O, S_E) by explicit partial traces of the dense pure state."""
    psi = dense_vector(state, nmax)
    norm2 = np.sum(np.abs(psi) ** 2)
    rho_spin = psi @ psi.conj().T / norm2
    rho_bath = psi.T @ psi.conj() / norm2
    def vn(rho):
        lam = np.clip(np.linalg.eigvalsh(rho), 0.0, None)
        nz = lam[lam > 1e-300]
        return float(-np.sum(nz * np.log(nz)))
    return vn(rho_spin), vn(rho_bath)


def random_state(rng, m=3, n=2, scale=0.7):
    C = rng.normal(size=(m, 2)) + 1j * rng.normal(size=(m, 2))
    gammas = scale * (rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n)))
    return D2State(C=C, gammas=gammas).normalize()


def make_trace(t, az, m=2):
    t = np.asarray(t, dtype=float)
    az = np.asarray(az, dtype=float)
    a = np.zeros((t.size, 3))
    a[:, 2] = az
    zero = np.zeros_like(t)
    return BlochTrace(t=t, a=a, norm=np.ones_like(t), energy=zero,
                      s_lin=zero, s_o=zero, m=np.full(t.size, m, dtype=int))


class TestEntropies:
    def test_pure_state_values(self):
        rho = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
        assert spin_entropy(rho) == pytest.approx(0.0, abs=1e-14)
        assert linear_entropy(rho) == pytest.approx(0.0, abs=1e-14)

    def test_maximally_mixed_values(self):
        rho = 0.5 * np.eye(2, dtype=complex)
        assert spin_entropy(rho) == pytest.approx(np.log(2.0), rel=1e-12)
        assert linear_entropy(rho) == pytest.approx(0.5, rel=1e-12)

    @pytest.mark.parametrize("p", [0.1, 0.25, 0.5, 0.9])
    def test_binary_entropy(self, p):
        rho = np.diag([p, 1.0 - p]).astype(complex)
        expected = -p * np.log(p) - (1 - p) * np.log(1 - p)
        assert spin_entropy(rho) == pytest.approx(expected, rel=1e-12)
        assert linear_entropy(rho) == pytest.approx(1 - p * p - (1 - p) ** 2, rel=1e-12)

    def test_scale_invariance(self):
        rho = np.diag([0.3, 0.7]).astype(complex)
        assert spin_entropy(0.25 * rho) == pytest.approx(spin_entropy(rho), rel=1e-12)

    def test_accepts_wrapper(self):
        rho = np.diag([0.4, 0.6]).astype(complex)
        wrapped = SpinDensity(rho=rho, raw_trace=1.0)
        assert spin_entropy(wrapped) == spin_entropy(rho)
        assert linear_entropy(wrapped) == linear_entropy(rho)

    def test_zero_spectrum_rejected(self):
        with pytest.raises(ValueError):
            spin_entropy(np.zeros((2, 2), dtype=complex))

    @pytest.mark.parametrize("seed", [3, 11, 27])
    def test_against_dense_partial_traces(self, seed):
        st = random_state(np.random.default_rng(seed))
        s_o_ref, s_e_ref = dense_entropies(st)
        assert spin_entropy(reduced_spin_density(st)) == pytest.approx(s_o_ref, abs=1e-10)
        assert environment_entropy(st) == pytest.approx(s_e_ref, abs=1e-10)

    @pytest.mark.parametrize("seed", range(6))
    def test_route_equality_on_random_states(self, seed):
        st = random_state(np.random.default_rng(100 + seed), m=4, n=3)
        rec = entropy_record(st)
        assert rec.s_e == pytest.approx(rec.s_o, abs=1e-8)
        assert rec.s_mutual == pytest.approx(2.0 * rec.s_o, abs=2e-8)
        assert rec.s_mutual == rec.s_o + rec.s_e

    def test_explicit_rho_argument(self):
        st = random_state(np.random.default_rng(5))
        default = entropy_record(st)
        explicit = entropy_record(st, rho=reduced_spin_density(st))
        assert explicit.s_o == default.s_o
        assert explicit.s_lin == default.s_lin


class TestExtractAsymptote:
    def test_constant_tail(self):
        t = np.linspace(0.0, 10.0, 50)
        az = np.where(t < 6.0, np.sin(t), 0.42)
        rec = extract_asymptote(make_trace(t, az))
        assert rec.a_z_inf == pytest.approx(0.42)
        assert rec.window_std == pytest.approx(0.0, abs=1e-15)
        assert rec.converged
        assert rec.n_samples == 10
        assert rec.window == (pytest.approx(t[40]), pytest.approx(t[49]))

    def test_oscillating_tail_not_converged(self):
        t = np.linspace(0.0, 10.0, 200)
        rec = extract_asymptote(make_trace(t, 0.8 * np.sin(5.0 * t)), convergence_std=0.1)
        assert not rec.converged
        assert rec.window_std > 0.1

    def test_threshold_is_strict(self):
        az = np.array([0.0, 0.5] * 8)
        rec = extract_asymptote(make_trace(np.arange(16.0), az), window_frac=1.0,
                                convergence_std=0.25)
        assert rec.window_std == 0.25
        assert not rec.converged

    def test_t_start_masks_driven_era(self):
        t = np.linspace(0.0, 10.0, 101)
        az = np.where(t < 6.0, 5.0 * np.sin(7.0 * t), -0.9)
        rec = extract_asymptote(make_trace(t, az), t_start=6.0)
        assert rec.a_z_inf == pytest.approx(-0.9)
        assert rec.converged
        assert rec.n_samples == int(np.ceil(0.2 * 41))
        assert rec.window[0] >= 6.0

    def test_full_window(self):
        t = np.linspace(0.0, 1.0, 11)
        az = np.linspace(-1.0, 1.0, 11)
        rec = extract_asymptote(make_trace(t, az), window_frac=1.0)
        assert rec.a_z_inf == pytest.approx(0.0, abs=1e-15)
        assert rec.n_samples == 11

    def test_time_rescaling_invariance(self):
        rng = np.random.default_rng(0)
        az = rng.uniform(-1, 1, size=80)
        t = np.linspace(0.0, 10.0, 80)
        a0 = extract_asymptote(make_trace(t, az))
        a1 = extract_asymptote(make_trace(100.0 * t, az))
        assert a1.a_z_inf == a0.a_z_inf
        assert a1.window_std == a0.window_std

    def test_validation(self):
        tr = make_trace(np.linspace(0, 1, 10), np.zeros(10))
        with pytest.raises(ValueError):
            extract_asymptote(tr, window_frac=0.0)
        with pytest.raises(ValueError):
            extract_asymptote(tr, window_frac=1.5)
        with pytest.raises(ValueError):
            extract_asymptote(tr, t_start=99.0)

    def test_to_dict(self):
        rec = AsymptoteRecord(a_z_inf=0.5, window_std=0.01, converged=True,
                              window=(8.0, 10.0), n_samples=12)
        d = rec.to_dict()
        assert d["a_z_inf"] == 0.5
        assert d["window"] == [8.0, 10.0]
        assert d["converged"] is True


def _rec(a, converged=True):
    return AsymptoteRecord(a_z_inf=a, window_std=0.0, converged=converged, window=(0.0, 1.0))


class TestHistogram:
    def test_counts_and_edges(self):
        recs = [_rec(a) for a in (-0.95, -0.9, 0.0, 0.85, 0.9, 0.95)]
        counts, edges = histogram_asymptotes(recs, bins=4)
        assert counts.sum() == 6
        assert edges[0] == -1.0 and edges[-1] == 1.0
        assert len(edges) == 5
        assert counts[0] == 2 and counts[-1] == 3

    def test_convergence_filter(self):
        recs = [_rec(0.5), _rec(0.6, converged=False)]
        counts, _ = histogram_asymptotes(recs)
        assert counts.sum() == 1
        counts, _ = histogram_asymptotes(recs, include_nonconverged=True)
        assert counts.sum() == 2

    def test_out_of_range_clipped(self):
        counts, _ = histogram_asymptotes([_rec(1.2), _rec(-1.2)], bins=2)
        assert counts.tolist() == [1, 1]

    def test_empty_raises(self):
        with pytest.raises(ValueError):
            histogram_asymptotes([_rec(0.1, converged=False)])
        with pytest.raises(ValueError):
            histogram_asymptotes([])


class TestAsymptoteDensity:
    def test_unit_mass(self):
        eps = 1e-3
        mass, _ = quad(lambda x: float(asymptote_density(x, eps)),
                       -1.0 + eps, 1.0 - eps, limit=200)
        assert mass == pytest.approx(1.0, abs=1e-6)

    def test_trapezoid_mass(self):
        x = np.linspace(-1.0 + 1e-3, 1.0 - 1e-3, 200001)
        assert np.trapezoid(asymptote_density(x), x) == pytest.approx(1.0, abs=5e-4)

    def test_zero_outside_truncated_domain(self):
        out = asymptote_density(np.array([-1.0, -0.9995, 0.9995, 1.0, 2.0]), eps=1e-3)
        assert np.all(out == 0.0)

    def test_symmetric_and_edge_peaked(self):
        x = np.linspace(0.0, 0.999, 500)
        p = asymptote_density(x)
        assert np.allclose(p, asymptote_density(-x))
        assert np.all(np.diff(p) > 0)
        assert p[-1] > 5.0 * p[0]


class TestPhiSweepFit:
    def test_exact_prediction(self):
        phis = np.pi / 12.0 * np.arange(7)
        fit = phi_sweep_fit(list(zip(phis, np.cos(2.0 * phis))))
        assert fit.residual_rms == pytest.approx(0.0, abs=1e-15)
        assert np.allclose(fit.predicted, np.cos(2.0 * phis))

    def test_constant_offset_rms(self):
        phis = np.pi / 12.0 * np.arange(7)
        fit = phi_sweep_fit(list(zip(phis, np.cos(2.0 * phis) + 0.05)))
        assert np.allclose(fit.residuals, 0.05)
        assert fit.residual_rms == pytest.approx(0.05, rel=1e-12)

    def test_sorts_input(self):
        pts = [(0.5, 0.1), (0.0, 1.0), (1.0, -0.4)]
        fit = phi_sweep_fit(pts)
        assert np.all(np.diff(fit.phis) > 0)
        assert fit.a_z_inf[0] == 1.0

    def test_quarter_turn_node(self):
        fit = phi_sweep_fit([(0.0, 1.0), (np.pi / 4.0, 0.0), (np.pi / 2.0, -1.0)])
        assert fit.predicted[1] == pytest.approx(0.0, abs=1e-15)
        assert fit.residual_rms == pytest.approx(0.0, abs=1e-15)

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            phi_sweep_fit([(0.0, 1.0), (1.0, 0.5)])

    def test_to_dict_lists(self):
        fit = phi_sweep_fit([(0.0, 1.0), (0.5, 0.5), (1.0, -0.4)])
        d = fit.to_dict()
        assert isinstance(d["phis"], list)
        assert d["residual_rms"] == fit.residual_rms
