"""Closed-form algebra of multimode coherent states.

Conventions: hbar = 1 and a coherent state is the displaced vacuum
|g> = D(g)|0> with D(g) = exp(g a^dag - g* a).  Two such states then
overlap as

    <g|h> = exp(-|g|^2/2 - |h|^2/2 + conj(g) h),

so |<g|h>|^2 = exp(-|h - g|^2) and multimode overlaps factorize over
modes.  Everything here is exact; no truncation enters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "overlap",
    "multimode_overlap",
    "gram_matrix",
    "HElementSet",
    "matrix_elements",
    "pair_coupling",
    "pair_bath_energy",
]


def overlap(g: complex, h: complex) -> complex:
    """Single-mode overlap <g|h> of two coherent states."""
    return complex(np.exp(-0.5 * abs(g) ** 2 - 0.5 * abs(h) ** 2 + np.conj(g) * h))


def multimode_overlap(a, b) -> complex:
    """Overlap <a|b> of two product coherent states, one amplitude per mode."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"mode count mismatch: {a.shape} vs {b.shape}")
    expo = -0.5 * np.sum(np.abs(a) ** 2) - 0.5 * np.sum(np.abs(b) ** 2) + np.sum(np.conj(a) * b)
    return complex(np.exp(expo))


def gram_matrix(gammas) -> np.ndarray:
    """Hermitian positive semidefinite Gram matrix of M multimode configurations.

    Parameters
    ----------
    gammas : array_like, shape (M, N)
        Complex displacement of each configuration in each mode.

    Returns
    -------
    ndarray, shape (M, M)
        S[i, j] = <gamma_i|gamma_j>, unit diagonal.
    """
    g = np.atleast_2d(np.asarray(gammas, dtype=complex))
    norms2 = np.sum(np.abs(g) ** 2, axis=1)
    cross = np.conj(g) @ g.T
    return np.exp(cross - 0.5 * (norms2[:, None] + norms2[None, :]))


@dataclass(frozen=True)
class HElementSet:
    """Bath-side matrix elements between two configurations <a| . |b>.

    All entries carry the bare overlap factor; dividing by ``overlap``
    gives the normal-ordered polynomial part alone.
    """

    overlap: complex
    bath_energy: complex  # <a| sum_n w_n a_n^dag a_n |b>
    coupling: complex     # <a| sum_n g_n (a_n^dag + a_n) |b>


def matrix_elements(a, b, bath) -> HElementSet:
    """Overlap, bath energy and coupling elements between two configurations.

    Uses the normal-ordering identity
    <a| (a_n^dag)^j (a_n)^k |b> = conj(a_n)^j b_n^k <a|b>, so the
    returned values are exact closed forms.

    Parameters
    ----------
    a, b : array_like, shape (N,)
        Coherent displacements of the bra and ket configuration.
    bath : BathSpec
        Supplies mode frequencies ``omegas`` and couplings ``gs``.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    omegas = np.asarray(bath.omegas, dtype=float)
    gs = np.asarray(bath.gs, dtype=float)
    if not (a.shape == b.shape == omegas.shape == gs.shape):
        raise ValueError(
            f"length mismatch: gammas {a.shape}/{b.shape}, omegas {omegas.shape}, gs {gs.shape}"
        )
    s = multimode_overlap(a, b)
    energy = np.sum(omegas * np.conj(a) * b) * s
    coupl = np.sum(gs * (np.conj(a) + b)) * s
    return HElementSet(overlap=s, bath_energy=complex(energy), coupling=complex(coupl))


def pair_coupling(gammas, gs) -> np.ndarray:
    """K[i, j] = sum_n g_n (conj(gamma_in) + gamma_jn) for all configuration pairs."""
    g = np.atleast_2d(np.asarray(gammas, dtype=complex))
    gs = np.asarray(gs, dtype=float)
    left = np.conj(g) @ gs
    right = g @ gs
    return left[:, None] + right[None, :]


def pair_bath_energy(gammas, omegas) -> np.ndarray:
    """E[i, j] = sum_n w_n conj(gamma_in) gamma_jn for all configuration pairs."""
    g = np.atleast_2d(np.asarray(gammas, dtype=complex))
    omegas = np.asarray(omegas, dtype=float)
    return np.conj(g) @ (omegas[None, :] * g).T
