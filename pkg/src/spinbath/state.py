"""The multimode Davydov D2 state and its constructions.

A state of multiplicity M over N bath modes is

    |Psi> = sum_m (C_{m+}|+> + C_{m-}|->) |gamma_m>,

with |gamma_m> a product coherent state over the modes and |+/-> the
sigma_z eigenbasis (index 0 is +).  Initial states carry the full
amplitude on configuration 1; the remaining configurations are rigid
displacements of the same bath configuration in distinct phase-space
directions and start with zero amplitude.

Displacement directions come in +/- pairs per (mode, quadrature) so a
parity-symmetric initial state (e.g. plus_x over the vacuum) evolves
inside a parity-closed variational manifold whenever the pair count
is even; the cycle restarts with doubled magnitude once every mode
and quadrature has been used.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .coherent import gram_matrix, multimode_overlap

logger = logging.getLogger(__name__)

SPIN_AMPLITUDES = {
    "plus_x": (1 / np.sqrt(2), 1 / np.sqrt(2)),
    "minus_x": (1 / np.sqrt(2), -1 / np.sqrt(2)),
    "plus_y": (1 / np.sqrt(2), 1j / np.sqrt(2)),
    "minus_y": (1 / np.sqrt(2), -1j / np.sqrt(2)),
    "plus_z": (1.0, 0.0),
    "minus_z": (0.0, 1.0),
}

__all__ = [
    "SPIN_AMPLITUDES",
    "D2State",
    "SpinDensity",
    "secondary_displacements",
    "make_product_initial",
    "make_product_from_amplitudes",
    "state_overlap",
    "reduced_spin_density",
    "bloch_vector",
    "apply_total_parity",
    "superpose",
    "pure_spin_from_bloch",
    "renormalize_spin_to_pure",
]


@dataclass
class D2State:
    """Spin amplitudes C (M, 2) and coherent parameters gammas (M, N)."""

    C: np.ndarray
    gammas: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        C = np.atleast_2d(np.asarray(self.C, dtype=complex))
        gammas = np.atleast_2d(np.asarray(self.gammas, dtype=complex))
        if C.ndim != 2 or C.shape[1] != 2:
            raise ValueError(f"C must have shape (M, 2), got {C.shape}")
        if gammas.shape[0] != C.shape[0]:
            raise ValueError(f"block count mismatch: C has {C.shape[0]}, gammas {gammas.shape[0]}")
        if not (np.all(np.isfinite(C)) and np.all(np.isfinite(gammas))):
            raise ValueError("non-finite amplitudes")
        self.C = C
        self.gammas = gammas

    @property
    def multiplicity(self) -> int:
        return self.C.shape[0]

    @property
    def n_modes(self) -> int:
        return self.gammas.shape[1]

    def gram(self) -> np.ndarray:
        return gram_matrix(self.gammas)

    def norm_squared(self) -> float:
        s = self.gram()
        val = np.einsum("ms,pm,ps->", self.C, s, np.conj(self.C))
        return float(np.real(val))

    def normalize(self) -> "D2State":
        n2 = self.norm_squared()
        if n2 <= 1e-300:
            raise ValueError("state is not normalizable (zero norm)")
        return D2State(C=self.C / np.sqrt(n2), gammas=self.gammas.copy(), time=self.time)

    def copy(self) -> "D2State":
        return D2State(C=self.C.copy(), gammas=self.gammas.copy(), time=self.time)

    def to_dict(self) -> dict:
        return {
            "time": self.time,
            "C": [[[z.real, z.imag] for z in row] for row in self.C],
            "gammas": [[[z.real, z.imag] for z in row] for row in self.gammas],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "D2State":
        C = np.array([[complex(re, im) for re, im in row] for row in d["C"]])
        gammas = np.array([[complex(re, im) for re, im in row] for row in d["gammas"]])
        if gammas.size == 0:
            gammas = gammas.reshape(C.shape[0], 0)
        return cls(C=C, gammas=gammas, time=float(d["time"]))


@dataclass(frozen=True)
class SpinDensity:
    """2x2 reduced spin density matrix, trace renormalized to 1."""

    rho: np.ndarray
    raw_trace: float = 1.0

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        if rho.shape != (2, 2):
            raise ValueError(f"rho must be 2x2, got {rho.shape}")
        object.__setattr__(self, "rho", rho)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.rho)


def secondary_displacements(n_modes: int, count: int, delta: float) -> np.ndarray:
    """Deterministic rigid displacement vectors for configurations 2..M.

    Directions cycle through (+Re, -Re, +Im, -Im) of mode 1, then mode
    2, and so on; once all modes and quadratures are exhausted the
    cycle restarts with magnitude 2*delta, 3*delta, ...

    Returns
    -------
    ndarray, shape (count, n_modes), complex
    """
    out = np.zeros((count, n_modes), dtype=complex)
    for k in range(count):
        pair, sign_idx = divmod(k, 2)
        sign = 1.0 if sign_idx == 0 else -1.0
        quad = pair % 2
        mode = (pair // 2) % n_modes
        lap = pair // (2 * n_modes)
        mag = delta * (lap + 1)
        out[k, mode] = sign * mag * (1.0 if quad == 0 else 1j)
    return out


def make_product_from_amplitudes(c_plus: complex, c_minus: complex, bath0, multiplicity: int,
                                 displacement: float = 0.3) -> D2State:
    """Product state (c_plus|+> + c_minus|->)|bath0> padded to the requested multiplicity."""
    if multiplicity < 1:
        raise ValueError(f"multiplicity must be >= 1, got {multiplicity}")
    bath0 = np.atleast_1d(np.asarray(bath0, dtype=complex))
    n = bath0.size
    C = np.zeros((multiplicity, 2), dtype=complex)
    C[0, 0] = c_plus
    C[0, 1] = c_minus
    gammas = np.tile(bath0, (multiplicity, 1))
    if multiplicity > 1:
        gammas[1:] += secondary_displacements(n, multiplicity - 1, displacement)
    return D2State(C=C, gammas=gammas, time=0.0).normalize()


def make_product_initial(spin: str, bath0, multiplicity: int, displacement: float = 0.3) -> D2State:
    """Initial product state with a named spin preparation.

    Parameters
    ----------
    spin : str
        One of plus_x, minus_x, plus_y, minus_y, plus_z, minus_z.
    bath0 : array_like, shape (N,), complex
        Shared coherent displacement of all configurations.
    multiplicity : int
        Total number of configurations M; only the first carries amplitude.
    displacement : float
        Magnitude of the rigid secondary displacements.
    """
    if spin not in SPIN_AMPLITUDES:
        raise ValueError(f"unknown spin preparation {spin!r}; choose from {sorted(SPIN_AMPLITUDES)}")
    cp, cm = SPIN_AMPLITUDES[spin]
    return make_product_from_amplitudes(cp, cm, bath0, multiplicity, displacement)


def state_overlap(a: D2State, b: D2State) -> complex:
    """Full overlap <a|b> of two D2 states (any multiplicities, same N)."""
    if a.n_modes != b.n_modes:
        raise ValueError(f"mode count mismatch: {a.n_modes} vs {b.n_modes}")
    val = 0.0 + 0.0j
    for m in range(a.multiplicity):
        for p in range(b.multiplicity):
            s = multimode_overlap(a.gammas[m], b.gammas[p])
            val += s * np.vdot(a.C[m], b.C[p])
    return complex(val)


def reduced_spin_density(state: D2State) -> SpinDensity:
    """Trace out the bath: rho[s,s'] = sum_{m,m'} C_{ms} C*_{m's'} <gamma_m'|gamma_m>.

    The result is renormalized to unit trace; the raw trace (the
    state's squared norm) is kept on the record so norm drift stays
    visible to callers.
    """
    s = state.gram()
    rho = np.einsum("ms,pm,pt->st", state.C, s, np.conj(state.C))
    rho = 0.5 * (rho + rho.conj().T)
    raw = float(np.real(np.trace(rho)))
    if not np.isfinite(raw) or raw <= 1e-300:
        raise ValueError("reduced density has non-finite or zero trace")
    if abs(raw - 1.0) > 1e-6:
        logger.debug("reduced density raw trace %.12g renormalized", raw)
    return SpinDensity(rho=rho / raw, raw_trace=raw)


def bloch_vector(rho: SpinDensity | np.ndarray) -> np.ndarray:
    """Bloch components a_i = tr(rho sigma_i); rho = (I + a.sigma)/2."""
    r = rho.rho if isinstance(rho, SpinDensity) else np.asarray(rho, dtype=complex)
    a_x = 2.0 * np.real(r[0, 1])
    a_y = -2.0 * np.imag(r[0, 1])
    a_z = np.real(r[0, 0] - r[1, 1])
    return np.array([a_x, a_y, a_z])


def apply_total_parity(state: D2State) -> D2State:
    """Total parity: spin flip (swap C_{m+} <-> C_{m-}) and bath inversion gamma -> -gamma."""
    return D2State(C=state.C[:, ::-1].copy(), gammas=-state.gammas, time=state.time)


def superpose(a: D2State, b: D2State, phi: float) -> D2State:
    """Normalized superposition cos(phi)|a> + sin(phi)|b> as a single D2 state.

    The result has multiplicity M_a + M_b, except that a block whose
    weight is below double-precision resolution (|w| < 1e-12) is
    dropped entirely: phi = 0 and phi = pi/2 return the corresponding
    input unchanged, so a sweep endpoint is exactly its pilot state
    rather than a copy padded with zero-amplitude configurations that
    would enlarge the variational manifold.  Because the two bath
    states are generally non-orthogonal the stacked state's norm
    differs from 1; the pre-normalization norm is logged.
    """
    if a.n_modes != b.n_modes:
        raise ValueError(f"mode count mismatch: {a.n_modes} vs {b.n_modes}")
    wa, wb = float(np.cos(phi)), float(np.sin(phi))
    if abs(wb) < 1e-12 or abs(wa) < 1e-12:
        kept, w = (a, wa) if abs(wb) < 1e-12 else (b, wb)
        single = D2State(C=w * kept.C, gammas=kept.gammas.copy(), time=kept.time)
        return single if abs(w) == 1.0 else single.normalize()
    C = np.vstack([wa * a.C, wb * b.C])
    gammas = np.vstack([a.gammas, b.gammas])
    stacked = D2State(C=C, gammas=gammas, time=a.time)
    prenorm = np.sqrt(stacked.norm_squared())
    logger.debug("superpose(phi=%.6g): pre-normalization norm %.12g", phi, prenorm)
    return stacked.normalize()


def pure_spin_from_bloch(direction) -> tuple[complex, complex]:
    """Spin amplitudes (c_plus, c_minus) of the pure state along a unit Bloch vector."""
    n = np.asarray(direction, dtype=float)
    n = n / np.linalg.norm(n)
    theta = np.arccos(np.clip(n[2], -1.0, 1.0))
    phi = np.arctan2(n[1], n[0])
    return (complex(np.cos(theta / 2)), complex(np.exp(1j * phi) * np.sin(theta / 2)))


def renormalize_spin_to_pure(state: D2State, fresh_bath0, multiplicity: int | None = None,
                             displacement: float = 0.3, eps_bloch: float = 1e-6) -> D2State:
    """Project the spin onto the pure state along its Bloch direction.

    Returns a fresh product state whose spin factor has Bloch vector
    a/|a| and whose bath restarts from ``fresh_bath0`` (a newly
    sampled configuration supplied by the caller, which owns the
    random stream).

    Raises
    ------
    ValueError
        If |a| < eps_bloch, where no direction is defined.
    """
    a = bloch_vector(reduced_spin_density(state))
    norm_a = float(np.linalg.norm(a))
    if norm_a < eps_bloch:
        raise ValueError(f"Bloch vector too short to renormalize: |a| = {norm_a:.3e}")
    cp, cm = pure_spin_from_bloch(a / norm_a)
    m = state.multiplicity if multiplicity is None else multiplicity
    return make_product_from_amplitudes(cp, cm, fresh_bath0, m, displacement)
