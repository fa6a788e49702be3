"""Multiconfiguration state constructions against dense Fock references."""

import numpy as np
import pytest

from spinbath.state import (
    SPIN_AMPLITUDES,
    D2State,
    SpinDensity,
    apply_total_parity,
    bloch_vector,
    make_product_from_amplitudes,
    make_product_initial,
    pure_spin_from_bloch,
    reduced_spin_density,
    renormalize_spin_to_pure,
    secondary_displacements,
    state_overlap,
    superpose,
)

NMAX = 36


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


def dense_spin_density(state, nmax=NMAX):
    psi = dense_vector(state, nmax)
    rho = psi @ psi.conj().T
    return rho / np.trace(rho)


def random_state(rng, m=3, n=2, scale=0.9):
    C = rng.normal(size=(m, 2)) + 1j * rng.normal(size=(m, 2))
    gammas = scale * (rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n)))
    return D2State(C=C, gammas=gammas).normalize()


class TestD2State:
    def test_shape_validation(self):
        with pytest.raises(ValueError):
            D2State(C=np.zeros((2, 3)), gammas=np.zeros((2, 1)))
        with pytest.raises(ValueError):
            D2State(C=np.zeros((2, 2)), gammas=np.zeros((3, 1)))
        with pytest.raises(ValueError):
            D2State(C=np.array([[np.nan, 0.0]]), gammas=np.zeros((1, 1)))

    def test_norm_against_fock(self):
        st = random_state(np.random.default_rng(1))
        raw = D2State(C=2.5 * st.C, gammas=st.gammas)
        psi = dense_vector(raw)
        assert raw.norm_squared() == pytest.approx(np.sum(np.abs(psi) ** 2), rel=1e-10)

    def test_normalize(self):
        st = random_state(np.random.default_rng(2))
        assert st.norm_squared() == pytest.approx(1.0, abs=1e-12)
        with pytest.raises(ValueError):
            D2State(C=np.zeros((1, 2)), gammas=np.zeros((1, 1))).normalize()

    def test_copy_is_independent(self):
        st = random_state(np.random.default_rng(3))
        cp = st.copy()
        cp.C[0, 0] = 99.0
        assert st.C[0, 0] != 99.0

    def test_dict_roundtrip(self):
        st = random_state(np.random.default_rng(4))
        st.time = 1.75
        again = D2State.from_dict(st.to_dict())
        assert np.allclose(again.C, st.C)
        assert np.allclose(again.gammas, st.gammas)
        assert again.time == st.time


class TestSecondaryDisplacements:
    def test_pairing_cycle(self):
        d = secondary_displacements(n_modes=2, count=9, delta=0.3)
        assert np.allclose(d[0], [0.3, 0.0])
        assert np.allclose(d[1], [-0.3, 0.0])
        assert np.allclose(d[2], [0.3j, 0.0])
        assert np.allclose(d[3], [-0.3j, 0.0])
        assert np.allclose(d[4], [0.0, 0.3])
        assert np.allclose(d[5], [0.0, -0.3])
        assert np.allclose(d[6], [0.0, 0.3j])
        assert np.allclose(d[7], [0.0, -0.3j])
        # cycle restarts with doubled magnitude
        assert np.allclose(d[8], [0.6, 0.0])

    def test_single_mode(self):
        d = secondary_displacements(n_modes=1, count=5, delta=0.5)
        assert np.allclose(d[:, 0], [0.5, -0.5, 0.5j, -0.5j, 1.0])

    def test_distinct(self):
        d = secondary_displacements(n_modes=3, count=12, delta=0.3)
        flat = {tuple(np.round(row, 12)) for row in d}
        assert len(flat) == 12


class TestProductConstruction:
    def test_amplitude_layout(self):
        st = make_product_initial("plus_x", np.array([0.2 + 0.1j]), multiplicity=4)
        assert st.multiplicity == 4
        assert np.allclose(st.C[1:], 0.0)
        assert st.C[0, 0] == pytest.approx(st.C[0, 1])
        assert st.norm_squared() == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(st.gammas[0], [0.2 + 0.1j])

    @pytest.mark.parametrize(
        "spin,want",
        [
            ("plus_x", [1, 0, 0]),
            ("minus_x", [-1, 0, 0]),
            ("plus_y", [0, 1, 0]),
            ("minus_y", [0, -1, 0]),
            ("plus_z", [0, 0, 1]),
            ("minus_z", [0, 0, -1]),
        ],
    )
    def test_preparations_hit_poles(self, spin, want):
        st = make_product_initial(spin, np.array([0.4 - 0.2j]), multiplicity=1)
        a = bloch_vector(reduced_spin_density(st))
        assert np.allclose(a, want, atol=1e-12)

    def test_unknown_preparation(self):
        with pytest.raises(ValueError):
            make_product_initial("sideways", np.zeros(1), multiplicity=1)

    def test_bad_multiplicity(self):
        with pytest.raises(ValueError):
            make_product_from_amplitudes(1.0, 0.0, np.zeros(1), multiplicity=0)


class TestStateOverlap:
    def test_against_fock(self):
        rng = np.random.default_rng(12)
        a, b = random_state(rng), random_state(rng, m=2)
        pa, pb = dense_vector(a), dense_vector(b)
        want = np.sum(np.conj(pa) * pb)
        assert state_overlap(a, b) == pytest.approx(want, abs=1e-11)

    def test_self_overlap_is_norm(self):
        st = random_state(np.random.default_rng(13))
        assert state_overlap(st, st) == pytest.approx(st.norm_squared(), rel=1e-12)

    def test_mode_mismatch(self):
        a = D2State(C=np.array([[1.0, 0.0]]), gammas=np.zeros((1, 1)))
        b = D2State(C=np.array([[1.0, 0.0]]), gammas=np.zeros((1, 2)))
        with pytest.raises(ValueError):
            state_overlap(a, b)


class TestReducedDensity:
    def test_against_fock_partial_trace(self):
        rng = np.random.default_rng(21)
        for _ in range(5):
            st = random_state(rng)
            got = reduced_spin_density(st).rho
            want = dense_spin_density(st)
            assert np.allclose(got, want, atol=1e-10)

    def test_trace_and_hermiticity(self):
        st = random_state(np.random.default_rng(22))
        rec = reduced_spin_density(st)
        assert np.trace(rec.rho) == pytest.approx(1.0, abs=1e-13)
        assert np.allclose(rec.rho, rec.rho.conj().T)
        assert rec.raw_trace == pytest.approx(1.0, abs=1e-12)

    def test_raw_trace_records_norm(self):
        st = random_state(np.random.default_rng(23))
        scaled = D2State(C=0.5 * st.C, gammas=st.gammas)
        rec = reduced_spin_density(scaled)
        assert rec.raw_trace == pytest.approx(0.25, rel=1e-12)
        assert np.trace(rec.rho) == pytest.approx(1.0, abs=1e-13)

    def test_rho_must_be_2x2(self):
        with pytest.raises(ValueError):
            SpinDensity(rho=np.eye(3))


class TestBlochVector:
    def test_pauli_expectations(self):
        rng = np.random.default_rng(31)
        st = random_state(rng)
        rho = reduced_spin_density(st).rho
        sx = np.array([[0, 1], [1, 0]], dtype=complex)
        sy = np.array([[0, -1j], [1j, 0]])
        sz = np.diag([1.0, -1.0]).astype(complex)
        want = [np.real(np.trace(rho @ s)) for s in (sx, sy, sz)]
        assert np.allclose(bloch_vector(rho), want, atol=1e-13)

    def test_accepts_record_or_matrix(self):
        rho = np.diag([0.75, 0.25]).astype(complex)
        assert np.allclose(bloch_vector(rho), [0, 0, 0.5])
        assert np.allclose(bloch_vector(SpinDensity(rho=rho)), [0, 0, 0.5])


class TestParity:
    def test_involution(self):
        st = random_state(np.random.default_rng(41))
        twice = apply_total_parity(apply_total_parity(st))
        assert np.allclose(twice.C, st.C)
        assert np.allclose(twice.gammas, st.gammas)

    def test_against_fock_operator(self):
        # parity = (spin flip) x (-1)^(total occupation)
        rng = np.random.default_rng(42)
        st = random_state(rng, m=2, n=1)
        flipped = apply_total_parity(st)
        psi = dense_vector(st)
        signs = (-1.0) ** np.arange(NMAX)
        want = (psi * signs[None, :])[::-1]
        got = dense_vector(flipped)
        assert np.allclose(got, want, atol=1e-10)

    def test_plus_x_vacuum_is_even(self):
        st = make_product_initial("plus_x", np.zeros(2), multiplicity=1)
        flipped = apply_total_parity(st)
        assert state_overlap(st, flipped) == pytest.approx(1.0, abs=1e-12)


class TestSuperpose:
    def test_endpoints(self):
        rng = np.random.default_rng(51)
        a, b = random_state(rng), random_state(rng)
        s0 = superpose(a, b, 0.0)
        assert abs(state_overlap(s0, a)) == pytest.approx(1.0, abs=1e-10)
        s90 = superpose(a, b, np.pi / 2)
        assert abs(state_overlap(s90, b)) == pytest.approx(1.0, abs=1e-10)

    def test_multiplicity_adds(self):
        rng = np.random.default_rng(52)
        a, b = random_state(rng, m=2), random_state(rng, m=3)
        s = superpose(a, b, 0.7)
        assert s.multiplicity == 5
        assert s.norm_squared() == pytest.approx(1.0, abs=1e-12)

    def test_zero_weight_block_dropped(self):
        rng = np.random.default_rng(54)
        a, b = random_state(rng, m=2), random_state(rng, m=3)
        s0 = superpose(a, b, 0.0)
        assert s0.multiplicity == a.multiplicity
        assert np.array_equal(s0.C, a.C)
        assert np.array_equal(s0.gammas, a.gammas)
        s90 = superpose(a, b, np.pi / 2)
        assert s90.multiplicity == b.multiplicity
        assert np.array_equal(s90.C, b.C)

    def test_matches_fock_combination(self):
        rng = np.random.default_rng(53)
        a, b = random_state(rng, n=1), random_state(rng, n=1)
        phi = np.pi / 5
        s = superpose(a, b, phi)
        raw = np.cos(phi) * dense_vector(a) + np.sin(phi) * dense_vector(b)
        raw /= np.linalg.norm(raw)
        got = dense_vector(s)
        phase = np.sum(np.conj(raw) * got)
        assert abs(phase) == pytest.approx(1.0, abs=1e-10)


class TestPureSpin:
    def test_roundtrip_through_bloch(self):
        rng = np.random.default_rng(61)
        for _ in range(10):
            n = rng.normal(size=3)
            n /= np.linalg.norm(n)
            cp, cm = pure_spin_from_bloch(n)
            rho = np.array([[cp], [cm]]) @ np.conj([[cp, cm]])
            assert np.allclose(bloch_vector(rho), n, atol=1e-12)

    def test_poles(self):
        cp, cm = pure_spin_from_bloch([0, 0, 1])
        assert (abs(cp), abs(cm)) == pytest.approx((1.0, 0.0), abs=1e-12)
        cp, cm = pure_spin_from_bloch([0, 0, -1])
        assert (abs(cp), abs(cm)) == pytest.approx((0.0, 1.0), abs=1e-12)


class TestRenormalizeSpinToPure:
    def test_direction_preserved_and_purified(self):
        rng = np.random.default_rng(71)
        st = random_state(rng, m=3, n=2)
        a_before = bloch_vector(reduced_spin_density(st))
        fresh = np.array([0.1, -0.2j])
        out = renormalize_spin_to_pure(st, fresh, multiplicity=4)
        a_after = bloch_vector(reduced_spin_density(out))
        assert np.linalg.norm(a_after) == pytest.approx(1.0, abs=1e-10)
        assert np.allclose(a_after, a_before / np.linalg.norm(a_before), atol=1e-10)
        assert out.multiplicity == 4
        assert np.allclose(out.gammas[0], fresh)

    def test_depolarized_rejected(self):
        # equal-weight orthogonal-bath mixture has |a| = 0
        st = D2State(
            C=np.array([[1.0, 0.0], [0.0, 1.0]]) / np.sqrt(2),
            gammas=np.array([[4.0 + 0j], [-4.0 + 0j]]),
        )
        with pytest.raises(ValueError):
            renormalize_spin_to_pure(st, np.zeros(1))
