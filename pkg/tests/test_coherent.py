"""Closed-form coherent-state algebra against truncated-Fock numerics.

The reference implementation below builds coherent vectors in a number
basis and evaluates overlaps and operator elements by plain linear
algebra; the closed forms must agree to near machine precision once the
truncation tail is negligible.
"""

import numpy as np
import pytest

from spinbath.bath import BathSpec
from spinbath.coherent import (
    HElementSet,
    gram_matrix,
    matrix_elements,
    multimode_overlap,
    overlap,
    pair_bath_energy,
    pair_coupling,
)


def fock_coherent(gamma, nmax):
    """Number-basis coefficients of |gamma>, truncated at nmax."""
    n = np.arange(nmax)
    logfact = np.concatenate([[0.0], np.cumsum(np.log(np.arange(1, nmax)))])
    amps = np.zeros(nmax, dtype=complex)
    amps[0] = 1.0
    if gamma != 0:
        amps[1:] = np.exp(n[1:] * np.log(complex(gamma)) - 0.5 * logfact[1:])
    return np.exp(-0.5 * abs(gamma) ** 2) * amps


def fock_number(nmax):
    return np.diag(np.arange(nmax, dtype=float))


def fock_position_pair(nmax):
    a = np.diag(np.sqrt(np.arange(1, nmax)), k=1)
    return a + a.conj().T


class TestOverlap:
    def test_normalization(self):
        for g in (0.0, 1.0, 0.3 - 2.1j, 3.0j):
            assert overlap(g, g) == pytest.approx(1.0, abs=1e-14)

    def test_vacuum_element(self):
        g = 0.8 - 0.6j
        assert overlap(0.0, g) == pytest.approx(np.exp(-0.5 * abs(g) ** 2), abs=1e-14)

    def test_frozen_value(self):
        # reference: <a|b> from 120-level Fock vectors
        got = overlap(0.5 + 0.25j, -0.3 + 1.0j)
        assert got == pytest.approx(0.4599831620248349 + 0.29809001574037713j, abs=1e-13)

    def test_conjugate_symmetry(self):
        g, h = 1.2 + 0.4j, -0.9 + 0.1j
        assert overlap(g, h) == pytest.approx(np.conj(overlap(h, g)), abs=1e-14)

    def test_separation_identity(self):
        g, h = 0.7 - 1.1j, -0.2 + 0.5j
        assert abs(overlap(g, h)) ** 2 == pytest.approx(np.exp(-abs(g - h) ** 2), rel=1e-12)

    def test_against_fock(self):
        rng = np.random.default_rng(101)
        for _ in range(50):
            g, h = (rng.uniform(-2, 2, 4) @ np.array([1, 1j, 0, 0]),
                    rng.uniform(-2, 2, 4) @ np.array([0, 0, 1, 1j]))
            want = np.vdot(fock_coherent(g, 90), fock_coherent(h, 90))
            assert overlap(g, h) == pytest.approx(want, abs=1e-12)


class TestMultimodeOverlap:
    def test_factorizes(self):
        a = np.array([0.5 + 0.2j, -1.0j])
        b = np.array([0.1, 0.7 - 0.3j])
        want = overlap(a[0], b[0]) * overlap(a[1], b[1])
        assert multimode_overlap(a, b) == pytest.approx(want, rel=1e-13)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            multimode_overlap(np.zeros(2), np.zeros(3))


class TestGramMatrix:
    def test_structure(self):
        rng = np.random.default_rng(7)
        g = rng.normal(size=(5, 3)) + 1j * rng.normal(size=(5, 3))
        S = gram_matrix(g)
        assert np.allclose(np.diag(S), 1.0, atol=1e-14)
        assert np.allclose(S, S.conj().T, atol=1e-14)
        assert np.min(np.linalg.eigvalsh(S)) > -1e-12

    def test_entries_match_pairwise(self):
        rng = np.random.default_rng(8)
        g = rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2))
        S = gram_matrix(g)
        for i in range(4):
            for j in range(4):
                assert S[i, j] == pytest.approx(multimode_overlap(g[i], g[j]), rel=1e-13)


class TestMatrixElements:
    def test_frozen_single_mode(self):
        # reference: 120-level Fock vectors, w = 1.3, g = 0.7
        bath = BathSpec(omegas=np.array([1.3]), gs=np.array([0.7]))
        el = matrix_elements(np.array([0.5 + 0.25j]), np.array([-0.3 + 1.0j]), bath)
        assert el.overlap == pytest.approx(0.4599831620248349 + 0.29809001574037713j, abs=1e-13)
        assert el.bath_energy == pytest.approx(-0.16302447570270343 + 0.382589115659813j, abs=1e-13)
        assert el.coupling == pytest.approx(-0.09209961558022116 + 0.2832237622666911j, abs=1e-13)

    def test_frozen_two_mode(self):
        # reference: 40x40-level Fock grid, w = (1.0, 2.5), g = (0.4, 0.9)
        bath = BathSpec(omegas=np.array([1.0, 2.5]), gs=np.array([0.4, 0.9]))
        el = matrix_elements(np.array([0.5 + 0.25j, -1.2j]), np.array([-0.3 + 1.0j, 0.8]), bath)
        assert el.overlap == pytest.approx(0.006933617707411958 + 0.19361360644598102j, abs=1e-13)
        assert el.bath_energy == pytest.approx(-0.5753071174060521 + 0.03998887332414855j, abs=1e-13)
        assert el.coupling == pytest.approx(-0.2616398827295242 + 0.16445927759301332j, abs=1e-13)

    def test_against_fock_randomized(self):
        rng = np.random.default_rng(2024)
        nmax = 80
        nd = fock_number(nmax)
        x = fock_position_pair(nmax)
        for _ in range(100):
            w, g = rng.uniform(0.2, 3.0), rng.uniform(0.1, 1.5)
            bath = BathSpec(omegas=np.array([w]), gs=np.array([g]))
            ga = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            gb = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            va, vb = fock_coherent(ga, nmax), fock_coherent(gb, nmax)
            el = matrix_elements(np.array([ga]), np.array([gb]), bath)
            assert el.overlap == pytest.approx(np.vdot(va, vb), abs=1e-11)
            assert el.bath_energy == pytest.approx(w * np.vdot(va, nd @ vb), abs=1e-10)
            assert el.coupling == pytest.approx(g * np.vdot(va, x @ vb), abs=1e-10)

    def test_diagonal_reduces_to_expectations(self):
        bath = BathSpec(omegas=np.array([0.9, 1.7]), gs=np.array([0.2, 0.5]))
        g = np.array([0.4 - 0.1j, 1.1 + 0.6j])
        el = matrix_elements(g, g, bath)
        assert el.overlap == pytest.approx(1.0, abs=1e-14)
        assert el.bath_energy == pytest.approx(np.sum(bath.omegas * np.abs(g) ** 2), rel=1e-13)
        assert el.coupling == pytest.approx(np.sum(bath.gs * 2 * g.real), rel=1e-13)

    def test_length_mismatch(self):
        bath = BathSpec(omegas=np.array([1.0]), gs=np.array([0.1]))
        with pytest.raises(ValueError):
            matrix_elements(np.zeros(2), np.zeros(2), bath)

    def test_is_frozen(self):
        el = HElementSet(overlap=1.0, bath_energy=0.0, coupling=0.0)
        with pytest.raises(AttributeError):
            el.overlap = 2.0


class TestPairTables:
    def test_match_elementwise(self):
        rng = np.random.default_rng(33)
        gammas = rng.normal(size=(4, 3)) + 1j * rng.normal(size=(4, 3))
        omegas = rng.uniform(0.5, 2.0, 3)
        gs = rng.uniform(0.1, 0.8, 3)
        bath = BathSpec(omegas=np.sort(omegas), gs=gs)
        K = pair_coupling(gammas, bath.gs)
        E = pair_bath_energy(gammas, bath.omegas)
        S = gram_matrix(gammas)
        for i in range(4):
            for j in range(4):
                el = matrix_elements(gammas[i], gammas[j], bath)
                assert K[i, j] * S[i, j] == pytest.approx(el.coupling, rel=1e-12, abs=1e-13)
                assert E[i, j] * S[i, j] == pytest.approx(el.bath_energy, rel=1e-12, abs=1e-13)
