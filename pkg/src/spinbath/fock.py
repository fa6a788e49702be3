"""Exact propagation in a truncated Fock basis for one or two modes.

This is the independent reference implementation: no coherent-state
algebra enters, everything is dense linear algebra on the spin x Fock
product basis (spin-major ordering).  It validates the closed-form
matrix elements, anchors the propagator acceptance tests, and runs
the single-mode parity experiments.

The Rabi-model parity runs use deep strong coupling (g of order
several mode quanta), where displaced states reach mean occupations
of (g/omega_1)^2; the per-mode cutoff must sit well above that, which
is why it is an explicit parameter rather than a buried default.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh

from .bath import BathSpec
from .state import D2State
from .trace import BlochTrace

__all__ = [
    "FockSpec",
    "build_hamiltonian",
    "parity_operator",
    "propagate_exact",
    "coherent_in_fock",
    "embed_d2_state",
    "bloch_trace_from_states",
    "Fig1Params",
    "fig1_experiment",
    "FIG1_CASES",
]

_DIM_GUARD = 200_000
_FULL_DIAG_LIMIT = 4096


@dataclass(frozen=True)
class FockSpec:
    """Truncation plan: per-mode cutoffs n_max (inclusive), at most two modes."""

    n_max: tuple[int, ...]

    def __post_init__(self):
        n_max = tuple(int(v) for v in (self.n_max if hasattr(self.n_max, "__len__") else (self.n_max,)))
        if not 1 <= len(n_max) <= 2:
            raise ValueError(f"Fock oracle supports 1 or 2 modes, got {len(n_max)}")
        if any(v < 1 for v in n_max):
            raise ValueError("n_max must be >= 1 per mode")
        object.__setattr__(self, "n_max", n_max)
        if self.dimension > _DIM_GUARD:
            raise ValueError(f"total dimension {self.dimension} exceeds guard {_DIM_GUARD}")

    @property
    def n_modes(self) -> int:
        return len(self.n_max)

    @property
    def bath_dimension(self) -> int:
        return int(np.prod([v + 1 for v in self.n_max]))

    @property
    def dimension(self) -> int:
        return 2 * self.bath_dimension


def _ladder(n_max: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n_max + 1)), k=1)


def _mode_operator(spec: FockSpec, mode: int, op: np.ndarray) -> np.ndarray:
    """Embed a single-mode operator into the multimode bath space."""
    mats = [np.eye(v + 1) for v in spec.n_max]
    mats[mode] = op
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


_SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
_SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]])


def build_hamiltonian(spec: FockSpec, bath: BathSpec, variant: str = "sigma_x",
                      f_o: float = 1.0, f_oe: float = 1.0, omega0: float = 1.0) -> np.ndarray:
    """Dense Hermitian H = (omega0 f_O / 2) sigma + f_OE sigma_z (x) F + 1 (x) D.

    Zero-point energies are dropped, matching the closed-form matrix
    elements used by the variational propagator.
    """
    if bath.n_modes != spec.n_modes:
        raise ValueError(f"bath has {bath.n_modes} modes, spec {spec.n_modes}")
    if variant not in ("sigma_x", "sigma_z"):
        raise ValueError(f"variant must be sigma_x or sigma_z, got {variant!r}")
    db = spec.bath_dimension
    coupling = np.zeros((db, db))
    number = np.zeros((db, db))
    for mode, cutoff in enumerate(spec.n_max):
        a = _ladder(cutoff)
        coupling += bath.gs[mode] * _mode_operator(spec, mode, a + a.T)
        number += bath.omegas[mode] * _mode_operator(spec, mode, np.diag(np.arange(cutoff + 1.0)))
    sigma = _SIGMA_X if variant == "sigma_x" else _SIGMA_Z
    h = (
        0.5 * omega0 * f_o * np.kron(sigma, np.eye(db))
        + f_oe * np.kron(_SIGMA_Z, coupling)
        + np.kron(np.eye(2), number)
    )
    return h


def parity_operator(spec: FockSpec) -> np.ndarray:
    """Total parity sigma_x (x) (-1)^(sum n); commutes with the sigma_x-variant Hamiltonian."""
    db = spec.bath_dimension
    signs = np.ones(db)
    for mode, cutoff in enumerate(spec.n_max):
        signs *= np.diag(_mode_operator(spec, mode, np.diag((-1.0) ** np.arange(cutoff + 1))))
    return np.kron(_SIGMA_X, np.diag(signs))


def propagate_exact(psi0: np.ndarray, h: np.ndarray, t_grid) -> np.ndarray:
    """States exp(-iHt)|psi0> on the grid, via full diagonalization.

    Dimension is capped: this oracle targets small problems where the
    eigendecomposition is exact and cheap, so norm and energy are
    conserved to machine precision.
    """
    psi0 = np.asarray(psi0, dtype=complex)
    dim = h.shape[0]
    if dim > _FULL_DIAG_LIMIT:
        raise ValueError(f"dimension {dim} exceeds full-diagonalization limit {_FULL_DIAG_LIMIT}")
    if psi0.shape != (dim,):
        raise ValueError(f"psi0 has shape {psi0.shape}, expected ({dim},)")
    t_grid = np.asarray(t_grid, dtype=float)
    w, v = eigh(h)
    c0 = v.conj().T @ psi0
    phases = np.exp(-1j * np.outer(t_grid, w))
    return (phases * c0[None, :]) @ v.T


def coherent_in_fock(gamma: complex, n_max: int) -> np.ndarray:
    """Truncated Fock amplitudes e^{-|g|^2/2} g^n / sqrt(n!), by stable recurrence.

    The vector is left unnormalized so 1 - |v|^2 reports the
    truncation error; callers needing better than 1e-8 must raise
    n_max.
    """
    v = np.zeros(n_max + 1, dtype=complex)
    v[0] = np.exp(-0.5 * abs(gamma) ** 2)
    for n in range(1, n_max + 1):
        v[n] = v[n - 1] * gamma / np.sqrt(n)
    return v


def truncation_error(vec: np.ndarray) -> float:
    return float(1.0 - np.real(np.vdot(vec, vec)))


def embed_d2_state(state: D2State, spec: FockSpec) -> np.ndarray:
    """Expand a D2 state into the spin x Fock basis (for oracle comparisons)."""
    if state.n_modes != spec.n_modes:
        raise ValueError(f"state has {state.n_modes} modes, spec {spec.n_modes}")
    db = spec.bath_dimension
    psi = np.zeros(2 * db, dtype=complex)
    for m in range(state.multiplicity):
        bath_vec = coherent_in_fock(state.gammas[m, 0], spec.n_max[0])
        for mode in range(1, spec.n_modes):
            bath_vec = np.kron(bath_vec, coherent_in_fock(state.gammas[m, mode], spec.n_max[mode]))
        for s in range(2):
            psi[s * db:(s + 1) * db] += state.C[m, s] * bath_vec
    return psi


def bloch_trace_from_states(states: np.ndarray, t_grid, h: np.ndarray) -> BlochTrace:
    """Observables of exact states: Bloch vector, energy and entropies per sample.

    The environment entropy comes from the singular values of the
    spin-by-bath amplitude matrix, an independent route from the
    reduced-density eigenvalues.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    n_t = states.shape[0]
    db = states.shape[1] // 2
    a = np.zeros((n_t, 3))
    norm = np.zeros(n_t)
    energy = np.zeros(n_t)
    s_lin = np.zeros(n_t)
    s_o = np.zeros(n_t)
    s_e = np.zeros(n_t)
    for i in range(n_t):
        psi = states[i]
        amp = psi.reshape(2, db)
        rho = amp @ amp.conj().T
        tr = np.real(np.trace(rho))
        norm[i] = tr
        rho = rho / tr
        a[i, 0] = 2.0 * np.real(rho[0, 1])
        a[i, 1] = -2.0 * np.imag(rho[0, 1])
        a[i, 2] = np.real(rho[0, 0] - rho[1, 1])
        energy[i] = np.real(np.vdot(psi, h @ psi)) / tr
        s_lin[i] = np.real(1.0 - np.trace(rho @ rho))
        lam = np.clip(np.linalg.eigvalsh(rho), 0.0, None)
        nz = lam[lam > 0]
        s_o[i] = float(-np.sum(nz * np.log(nz)))
        sv = np.linalg.svd(amp, compute_uv=False)
        mu = sv ** 2 / tr
        mz = mu[mu > 0]
        s_e[i] = float(-np.sum(mz * np.log(mz)))
    return BlochTrace(
        t=t_grid, a=a, norm=norm, energy=energy, s_lin=s_lin, s_o=s_o,
        m=np.zeros(n_t, dtype=int), s_e=s_e, oracle=True,
    )


# ---------------------------------------------------------------------------
# single-mode parity experiments

FIG1_CASES = ("ground", "even_superposition", "odd_superposition", "mixed")


@dataclass(frozen=True)
class Fig1Params:
    """Single-mode parity runs: spin plus_x over bath states of definite or mixed parity.

    Defaults put the splitting at 4 mode quanta and the coupling at
    twice the splitting (deep strong coupling), with the cutoff high
    enough that doubling it changes nothing at the reported digits.
    """

    omega0: float = 4.0
    g1: float = 8.0
    omega1: float = 1.0
    n_max: int = 160
    t_end: float = 20.0
    n_samples: int = 401
    n_terms: int = 4  # Fock components per superposition

    def bath(self) -> BathSpec:
        return BathSpec(omegas=np.array([self.omega1]), gs=np.array([self.g1]))


def _fig1_bath_state(case: str, params: Fig1Params) -> np.ndarray:
    db = params.n_max + 1
    vec = np.zeros(db, dtype=complex)
    if case == "ground":
        vec[0] = 1.0
        return vec
    if case == "even_superposition":
        idx = [2 * k for k in range(params.n_terms)]
    elif case == "odd_superposition":
        idx = [2 * k + 1 for k in range(params.n_terms)]
    elif case == "mixed":
        idx = list(range(params.n_terms))
    else:
        raise ValueError(f"unknown case {case!r}; choose from {FIG1_CASES}")
    vec[idx] = 1.0 / np.sqrt(len(idx))
    return vec


def fig1_experiment(case: str, params: Fig1Params | None = None) -> BlochTrace:
    """One single-mode parity run; returns the exact Bloch trace.

    Bath states of definite parity force a_z(t) = 0 for all times; the
    mixed case has no such protection and develops a nonzero a_z.
    """
    params = params or Fig1Params()
    spec = FockSpec(n_max=(params.n_max,))
    h = build_hamiltonian(spec, params.bath(), variant="sigma_x", f_o=1.0, f_oe=1.0,
                          omega0=params.omega0)
    bath_vec = _fig1_bath_state(case, params)
    spin = np.array([1.0, 1.0]) / np.sqrt(2.0)
    psi0 = np.kron(spin, bath_vec)
    t_grid = np.linspace(0.0, params.t_end, params.n_samples)
    states = propagate_exact(psi0, h, t_grid)
    trace = bloch_trace_from_states(states, t_grid, h)
    trace.meta["case"] = case
    return trace
