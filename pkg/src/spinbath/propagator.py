"""Variational propagation of the multimode coherent-state ansatz.

The equations of motion follow from the Dirac-Frenkel principle: the
Schroedinger flow -iH|Psi> is projected onto the tangent space of the
ansatz manifold.  With spin amplitudes C_{ms} and displacements
gamma_{mn}, the tangent space is spanned by

    B^C_{ms}     = |s>|gamma_m>,
    B^gam_{mn}   = sum_s C_{ms} |s> a_n^dag |gamma_m>,

which is closed under multiplication by i (the antiholomorphic
derivative of the normalization factor lies in the span of the B^C),
so the projection reduces to one complex linear solve

    G u = -i h,     G_jk = <B_j|B_k>,   h_j = <B_j|H|Psi>,

per right-hand-side evaluation.  G is Hermitian positive semidefinite
and becomes singular when configurations approach each other or carry
no amplitude; eigenvalues below metric_reg times the largest are sent
smoothly to zero (w -> w / (w^2 + thr^2)), which freezes empty
configurations instead of letting their chart velocities diverge, and
apoptosis removes one member of any near-degenerate pair between
accepted steps.  Basis growth (spawning) scores von Neumann lattice
neighbors of occupied configurations by their overlap with the
projection residual and inserts the best one with zero amplitude,
which leaves all observables continuous.

Two further choices keep the integration honest and fast.  The flow
component along |Psi> itself (a pure rescaling of the ray) is gauged
away, so the rolloff bias cannot leak into the norm: norm drift is
pure integrator error at any regularization strength.  And the bath
labels are integrated in a co-rotating chart gamma~_mn =
gamma_mn e^{i w_n t}, which removes the free bath rotation
analytically and decouples the step size from the fastest mode.
Energy drift under constant modulations remains a genuine accuracy
gauge."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.integrate import DOP853, RK45

from .bath import BathSpec
from .coherent import gram_matrix, pair_bath_energy, pair_coupling
from .observables import entropy_record
from .protocol import Protocol
from .state import D2State, bloch_vector, reduced_spin_density
from .trace import BlochTrace

logger = logging.getLogger(__name__)

__all__ = [
    "IntegratorConfig",
    "NumericalFailure",
    "energy_expectation",
    "h2_expectation",
    "dirac_frenkel_residual",
    "step",
    "adapt_basis",
    "run_trajectory",
]

_SOLVERS = {"DOP853": DOP853, "RK45": RK45}

# configurations with squared amplitude below this are treated as
# unoccupied when choosing spawn centers
_OCCUPANCY_FLOOR = 1e-10


class NumericalFailure(RuntimeError):
    """Integrator step-size underflow or an unrecoverable metric solve."""


@dataclass
class IntegratorConfig:
    """Tolerances and basis-adaptation thresholds of the propagator."""

    rel_tol: float = 1e-9
    abs_tol: float = 1e-11
    metric_reg: float = 1e-10
    spawn_threshold: float = 1e-3
    apoptosis_overlap: float = 0.995
    max_M: int | None = None  # None resolves to twice the initial multiplicity
    adapt_every: int = 10     # accepted steps between basis-adaptation checks
    method: str = "DOP853"
    max_step: float = np.inf

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "metric_reg", "spawn_threshold"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        if not 0.9 < self.apoptosis_overlap < 1.0:
            raise ValueError(f"apoptosis_overlap must lie in (0.9, 1), got {self.apoptosis_overlap}")
        if self.max_M is not None and self.max_M < 1:
            raise ValueError("max_M must be >= 1")
        if self.adapt_every < 1:
            raise ValueError("adapt_every must be >= 1")
        if self.method not in _SOLVERS:
            raise ValueError(f"method must be one of {sorted(_SOLVERS)}, got {self.method!r}")

    def to_dict(self) -> dict:
        return {
            "rel_tol": self.rel_tol,
            "abs_tol": self.abs_tol,
            "metric_reg": self.metric_reg,
            "spawn_threshold": self.spawn_threshold,
            "apoptosis_overlap": self.apoptosis_overlap,
            "max_M": self.max_M,
            "adapt_every": self.adapt_every,
            "method": self.method,
            "max_step": self.max_step if np.isfinite(self.max_step) else None,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "IntegratorConfig":
        d = dict(d)
        if d.get("max_step") is None:
            d["max_step"] = np.inf
        return cls(**d)


# ---------------------------------------------------------------------------
# packing and the co-rotating frame
#
# The ODE variables are (C, gamma~) with gamma~_mn = gamma_mn e^{i w_n t}:
# the free bath rotation is removed analytically, so the integrator only
# tracks the slow coupling- and self-energy-driven motion and its step
# size is not tied to the fastest bath mode.

def _pack(C: np.ndarray, gammas: np.ndarray) -> np.ndarray:
    return np.concatenate([C.ravel(), gammas.ravel()])


def _unpack(y: np.ndarray, m: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    C = y[: 2 * m].reshape(m, 2)
    gammas = y[2 * m:].reshape(m, n)
    return C, gammas


def _y_from_state(state: D2State, omegas: np.ndarray) -> np.ndarray:
    rot = np.exp(1j * omegas * state.time)
    return _pack(state.C, state.gammas * rot[None, :])


def _state_from_y(y: np.ndarray, t: float, m: int, n: int, omegas: np.ndarray) -> D2State:
    C, gt = _unpack(y, m, n)
    gammas = gt * np.exp(-1j * omegas * t)[None, :]
    return D2State(C=C, gammas=gammas, time=float(t))


# ---------------------------------------------------------------------------
# pairwise tables shared by metric, gradient and expectations

def _spin_weights(C: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """P, Z, X with P[a,b] = sum_s C*_as C_bs, Z the sigma_z- and X the sigma_x-weighted sums."""
    cu, cd = C[:, 0], C[:, 1]
    P = np.outer(np.conj(cu), cu) + np.outer(np.conj(cd), cd)
    Z = np.outer(np.conj(cu), cu) - np.outer(np.conj(cd), cd)
    X = np.outer(np.conj(cu), cd) + np.outer(np.conj(cd), cu)
    return P, Z, X


def _metric(C: np.ndarray, gammas: np.ndarray, S: np.ndarray) -> np.ndarray:
    m, n = gammas.shape
    d = 2 * m + m * n
    G = np.empty((d, d), dtype=complex)
    eye2 = np.eye(2)
    gcc = np.einsum("ab,st->asbt", S, eye2).reshape(2 * m, 2 * m)
    # <B^C_as|B^gam_bn> = C_bs conj(gamma_an) S_ab
    gcg = np.einsum("ab,an,bs->asbn", S, np.conj(gammas), C).reshape(2 * m, m * n)
    P, _, _ = _spin_weights(C)
    W = P * S
    # <B^gam_an|B^gam_bm> = W_ab (conj(gamma_am) gamma_bn + delta_nm)
    ggg = np.einsum("ab,am,bn->anbm", W, np.conj(gammas), gammas)
    for k in range(n):
        ggg[:, k, :, k] += W
    ggg = ggg.reshape(m * n, m * n)
    G[: 2 * m, : 2 * m] = gcc
    G[: 2 * m, 2 * m:] = gcg
    G[2 * m:, : 2 * m] = gcg.conj().T
    G[2 * m:, 2 * m:] = ggg
    return G


def _hamiltonian_tables(gammas: np.ndarray, bath: BathSpec):
    S = gram_matrix(gammas)
    K = pair_coupling(gammas, bath.gs)
    Eb = pair_bath_energy(gammas, bath.omegas)
    return S, K, Eb


def _gradient(C, gammas, S, K, Eb, bath: BathSpec, variant: str, a_o: float, f_oe: float):
    """h_j = <B_j|H|Psi> stacked as (C block, gamma block)."""
    omegas, gs = bath.omegas, bath.gs
    P, Z, X = _spin_weights(C)
    SK = S * K
    SE = S * Eb

    h_c = SE @ C + f_oe * (SK @ C) * np.array([1.0, -1.0])
    if variant == "sigma_x":
        h_c = h_c + a_o * (S @ C[:, ::-1])
    else:
        h_c = h_c + a_o * (S @ C) * np.array([1.0, -1.0])

    spin_self = X if variant == "sigma_x" else Z
    h_g = a_o * ((S * spin_self) @ gammas)
    SZ = S * Z
    h_g = h_g + f_oe * ((SZ * K) @ gammas + np.outer(SZ.sum(axis=1), gs))
    SP = S * P
    h_g = h_g + (SP * Eb) @ gammas + (SP @ gammas) * omegas[None, :]
    return np.concatenate([h_c.ravel(), h_g.ravel()])


def _solve_filtered(G: np.ndarray, rhs: np.ndarray, metric_reg: float, hard: bool = False) -> np.ndarray:
    """Solve G u = rhs by eigenvalue-filtered pseudo-inversion.

    Eigenvalues below metric_reg times the largest are suppressed.  The
    default rolloff is smooth (w / (w^2 + thr^2)) rather than a sharp
    cut: a hard filter makes the right-hand side discontinuous whenever
    an eigenvalue crosses the threshold, which stalls the adaptive
    step-size controller; the smooth version agrees with the hard one
    a decade above the threshold and sends filtered directions to zero
    velocity.  ``hard=True`` keeps the sharp cut for one-shot solves
    (amplitude re-expression) where no smoothness is needed.
    """
    w, V = np.linalg.eigh(G)
    w_max = w[-1]
    if w_max <= 0:
        raise NumericalFailure("variational metric has no positive eigenvalues")
    thr = metric_reg * w_max
    hv = V.conj().T @ rhs
    if hard:
        keep = w > thr
        if not np.any(keep):
            raise NumericalFailure("variational metric singular beyond recovery (all eigenvalues filtered)")
        return V[:, keep] @ (hv[keep] / w[keep])
    return V @ (hv * (w / (w * w + thr * thr)))


def _rhs(t, y, m, n, bath, protocol, metric_reg):
    Ct, gt = _unpack(y, m, n)
    rot = np.exp(-1j * bath.omegas * t)[None, :]
    gammas = gt * rot
    C = Ct
    a_o = 0.5 * protocol.omega0 * protocol.f_o(t)
    f_oe = protocol.f_oe(t)
    S, K, Eb = _hamiltonian_tables(gammas, bath)
    G = _metric(C, gammas, S)
    h = _gradient(C, gammas, S, K, Eb, bath, protocol.variant, a_o, f_oe)
    u = _solve_filtered(G, -1j * h, metric_reg)
    v = u[: 2 * m].reshape(m, 2)
    w = u[2 * m:].reshape(m, n)
    # norm-preserving gauge: remove the component of the flow along the
    # state itself (a pure rescaling of the ray), so the eigenvalue
    # rolloff's bias cannot leak into the norm
    t_cross = np.conj(gammas) @ w.T
    pbar = np.einsum("as,bs->ab", np.conj(C), C)
    overlap_dot = np.sum(np.conj(C) * (S @ v)) + np.sum(pbar * S * t_cross)
    norm2 = float(np.real(np.sum(pbar * S)))
    xi = float(np.real(overlap_dot)) / max(norm2, 1e-300)
    v = v - xi * C
    # recover parameter velocities: the a_n^dag tangent vectors absorb
    # the normalization factor's derivative into the C block
    mu = np.sum(np.real(np.conj(gammas) * w), axis=1)
    c_dot = v + C * mu[:, None]
    # back to the co-rotating chart
    gt_dot = (w + 1j * bath.omegas[None, :] * gammas) / rot
    return _pack(c_dot, gt_dot)


# ---------------------------------------------------------------------------
# expectation values

def _raw_energy_terms(C, gammas, S, K, Eb, variant, a_o, f_oe):
    P, Z, X = _spin_weights(C)
    spin_self = X if variant == "sigma_x" else Z
    e_self = a_o * np.sum(spin_self * S)
    e_coup = f_oe * np.sum(Z * K * S)
    e_bath = np.sum(P * Eb * S)
    norm2 = np.real(np.sum(P * S))
    return np.real(e_self + e_coup + e_bath), norm2


def energy_expectation(state: D2State, bath: BathSpec, protocol: Protocol, t: float | None = None) -> float:
    """<Psi|H(t)|Psi> / <Psi|Psi>."""
    t = state.time if t is None else t
    a_o = 0.5 * protocol.omega0 * protocol.f_o(t)
    f_oe = protocol.f_oe(t)
    S, K, Eb = _hamiltonian_tables(state.gammas, bath)
    raw, norm2 = _raw_energy_terms(state.C, state.gammas, S, K, Eb, protocol.variant, a_o, f_oe)
    if norm2 <= 1e-300:
        raise ValueError("state is not normalizable")
    return raw / norm2


def h2_expectation(state: D2State, bath: BathSpec, protocol: Protocol, t: float | None = None) -> float:
    """<Psi|H(t)^2|Psi> / <Psi|Psi>, in closed form (used by the spawn residual)."""
    t = state.time if t is None else t
    a_o = 0.5 * protocol.omega0 * protocol.f_o(t)
    f_oe = protocol.f_oe(t)
    C, gammas = state.C, state.gammas
    omegas, gs = bath.omegas, bath.gs
    S, K, Eb = _hamiltonian_tables(gammas, bath)
    P, Z, X = _spin_weights(C)

    g2sum = float(np.sum(gs ** 2))
    eb2 = np.conj(gammas) @ ((omegas ** 2)[None, :] * gammas).T
    kw = (np.conj(gammas) @ (gs * omegas))[:, None] + (gammas @ (gs * omegas))[None, :]

    # spin-identity part: A^2 + V^2 + D^2
    ident = a_o ** 2 + f_oe ** 2 * (K ** 2 + g2sum) + Eb ** 2 + eb2
    total = np.sum(P * ident * S)
    # {A,D}: spin weight X (sigma_x) or Z (sigma_z)
    spin_self = X if protocol.variant == "sigma_x" else Z
    total += np.sum(spin_self * (2.0 * a_o * Eb) * S)
    # {V,D}: spin weight Z
    total += np.sum(Z * (f_oe * (2.0 * K * Eb + kw)) * S)
    if protocol.variant == "sigma_z":
        # {A,V}: sigma_z * sigma_z = identity
        total += np.sum(P * (2.0 * a_o * f_oe * K) * S)
    norm2 = np.real(np.sum(P * S))
    if norm2 <= 1e-300:
        raise ValueError("state is not normalizable")
    return float(np.real(total)) / norm2


def dirac_frenkel_residual(state: D2State, bath: BathSpec, protocol: Protocol,
                           cfg: IntegratorConfig, t: float | None = None) -> float:
    """Norm of (-iH|Psi> - |Psi_dot>) per unit state norm.

    Zero when the exact flow lies in the tangent space; drives spawning.
    """
    t = state.time if t is None else t
    a_o = 0.5 * protocol.omega0 * protocol.f_o(t)
    f_oe = protocol.f_oe(t)
    C, gammas = state.C, state.gammas
    S, K, Eb = _hamiltonian_tables(gammas, bath)
    G = _metric(C, gammas, S)
    h = _gradient(C, gammas, S, K, Eb, bath, protocol.variant, a_o, f_oe)
    u = _solve_filtered(G, h, cfg.metric_reg)
    h2 = h2_expectation(state, bath, protocol, t)
    norm2 = state.norm_squared()
    captured = float(np.real(np.vdot(h, u))) / norm2
    res2 = h2 - captured
    return float(np.sqrt(max(res2, 0.0)))


# ---------------------------------------------------------------------------
# basis adaptation

def _apoptosis_pass(state: D2State, cfg: IntegratorConfig) -> tuple[D2State, list[dict]]:
    events = []
    st = state
    while st.multiplicity > 1:
        S = st.gram()
        off = np.abs(S - np.diag(np.diag(S)))
        a, b = np.unravel_index(np.argmax(off), off.shape)
        if off[a, b] <= cfg.apoptosis_overlap:
            break
        # remove the member carrying less amplitude weight
        wa = float(np.sum(np.abs(st.C[a]) ** 2))
        wb = float(np.sum(np.abs(st.C[b]) ** 2))
        drop = a if wa < wb else b
        keep = [i for i in range(st.multiplicity) if i != drop]
        # least-squares re-expression of the full state on the survivors
        g_keep = S[np.ix_(keep, keep)]
        rhs = S[np.ix_(keep, range(st.multiplicity))] @ st.C
        new_c = np.column_stack([
            _solve_filtered(g_keep, rhs[:, 0], cfg.metric_reg, hard=True),
            _solve_filtered(g_keep, rhs[:, 1], cfg.metric_reg, hard=True),
        ])
        candidate = D2State(C=new_c, gammas=st.gammas[keep], time=st.time)
        norm_before = st.norm_squared()
        norm_after = candidate.norm_squared()
        loss = abs(norm_after - norm_before)
        candidate = D2State(C=candidate.C * np.sqrt(norm_before / norm_after),
                            gammas=candidate.gammas, time=st.time)
        events.append({
            "t": st.time,
            "kind": "apoptosis",
            "overlap": float(off[a, b]),
            "removed": int(drop),
            "norm_change": float(loss),
            "M": candidate.multiplicity,
        })
        logger.debug("apoptosis at t=%.6g: |overlap|=%.6f, norm change %.3e", st.time, off[a, b], loss)
        st = candidate
    return st, events


def _spawn_candidates(gammas: np.ndarray, occupied: np.ndarray) -> np.ndarray:
    """Unit-spacing lattice neighbors (+-1, +-i per mode) of occupied configurations."""
    m, n = gammas.shape
    cands = []
    steps = np.array([1.0, -1.0, 1j, -1j])
    for a in range(m):
        if not occupied[a]:
            continue
        for mode in range(n):
            for s in steps:
                c = gammas[a].copy()
                c[mode] += s
                cands.append(c)
    return np.array(cands) if cands else np.empty((0, n), dtype=complex)


def _score_candidates(cands, C, gammas, bath, variant, a_o, f_oe, u_proj):
    """Residual overlap |<s, c|r>|^2 for each candidate configuration c.

    r = H|Psi> - sum_j u_j B_j with G u = h; the score measures how
    much of the uncaptured flow a zero-amplitude insertion at c could
    absorb through its two new spin tangent directions.
    """
    m, n = gammas.shape
    scores = np.zeros(len(cands))
    v = u_proj[: 2 * m].reshape(m, 2)
    w = u_proj[2 * m:].reshape(m, n)
    sign = np.array([1.0, -1.0])
    for i, c in enumerate(cands):
        # overlaps of the candidate with the existing configurations
        s_row = np.exp(
            np.conj(c) @ gammas.T
            - 0.5 * np.sum(np.abs(c) ** 2)
            - 0.5 * np.sum(np.abs(gammas) ** 2, axis=1)
        )
        # <s,c|H|Psi>: gradient rows of the two candidate spin directions
        k_row = np.conj(c) @ bath.gs + gammas @ bath.gs
        e_row = np.conj(c) @ (bath.omegas[None, :] * gammas).T
        h_new = (s_row * e_row) @ C + f_oe * ((s_row * k_row) @ C) * sign
        if variant == "sigma_x":
            h_new = h_new + a_o * (s_row @ C[:, ::-1])
        else:
            h_new = h_new + a_o * (s_row @ C) * sign
        # <s,c|sum_j u_j B_j>: C-block plus gamma-block cross-overlaps,
        # using <s,c|B^gam_bk> = C_bs conj(c_k) S_cb
        cross = s_row @ v + ((s_row * (w @ np.conj(c)))[:, None] * C).sum(axis=0)
        scores[i] = float(np.sum(np.abs(h_new - cross) ** 2))
    return scores


def adapt_basis(state: D2State, bath: BathSpec, protocol: Protocol, cfg: IntegratorConfig,
                t: float | None = None, max_m: int | None = None) -> tuple[D2State, list[dict]]:
    """Apoptosis of near-degenerate pairs, then residual-driven spawning.

    Returns the (possibly unchanged) state and a list of event records.
    Spawned configurations enter with zero amplitude so norm and energy
    are continuous across the event.
    """
    t = state.time if t is None else t
    st, events = _apoptosis_pass(state, cfg)
    limit = max_m if max_m is not None else (cfg.max_M if cfg.max_M is not None else 2 * st.multiplicity)

    res = dirac_frenkel_residual(st, bath, protocol, cfg, t)
    if res <= cfg.spawn_threshold:
        return st, events
    if st.multiplicity >= limit:
        events.append({"t": t, "kind": "max_m_reached", "residual": res, "M": st.multiplicity})
        return st, events

    a_o = 0.5 * protocol.omega0 * protocol.f_o(t)
    f_oe = protocol.f_oe(t)
    C, gammas = st.C, st.gammas
    S, K, Eb = _hamiltonian_tables(gammas, bath)
    G = _metric(C, gammas, S)
    h = _gradient(C, gammas, S, K, Eb, bath, protocol.variant, a_o, f_oe)
    u = _solve_filtered(G, h, cfg.metric_reg)

    occupied = np.sum(np.abs(C) ** 2, axis=1) > _OCCUPANCY_FLOOR
    if not np.any(occupied):
        occupied[:] = True
    cands = _spawn_candidates(gammas, occupied)
    if len(cands) == 0:
        return st, events
    # drop candidates that would immediately trigger apoptosis
    dist = np.min(np.linalg.norm(cands[:, None, :] - gammas[None, :, :], axis=2), axis=1)
    ok = dist > 0.2
    if not np.any(ok):
        return st, events
    cands = cands[ok]
    scores = _score_candidates(cands, C, gammas, bath, protocol.variant, a_o, f_oe, u)
    best = int(np.argmax(scores))
    new_gammas = np.vstack([gammas, cands[best][None, :]])
    new_c = np.vstack([C, np.zeros((1, 2), dtype=complex)])
    st2 = D2State(C=new_c, gammas=new_gammas, time=st.time)
    events.append({
        "t": t,
        "kind": "spawn",
        "residual": res,
        "score": float(scores[best]),
        "M": st2.multiplicity,
    })
    logger.debug("spawn at t=%.6g: residual %.3e, M -> %d", t, res, st2.multiplicity)
    return st2, events


# ---------------------------------------------------------------------------
# integration driver

def _make_solver(state: D2State, bath: BathSpec, protocol: Protocol, cfg: IntegratorConfig,
                 t_bound: float, first_step: float | None = None):
    m, n = state.multiplicity, state.n_modes
    cls = _SOLVERS[cfg.method]
    y0 = _y_from_state(state, bath.omegas)
    return cls(
        lambda t, y: _rhs(t, y, m, n, bath, protocol, cfg.metric_reg),
        state.time, y0, t_bound,
        rtol=cfg.rel_tol, atol=cfg.abs_tol,
        max_step=cfg.max_step, first_step=first_step,
    )


def step(state: D2State, bath: BathSpec, protocol: Protocol, cfg: IntegratorConfig,
         dt_hint: float | None = None) -> D2State:
    """Advance by one adaptively chosen integrator step."""
    if state.time >= protocol.t_end:
        raise ValueError(f"state time {state.time} is already at or past t_end {protocol.t_end}")
    solver = _make_solver(state, bath, protocol, cfg, protocol.t_end, first_step=dt_hint)
    solver.step()
    if solver.status == "failed":
        raise NumericalFailure(f"integrator step failed at t = {solver.t:.6g}")
    return _state_from_y(solver.y, solver.t, state.multiplicity, state.n_modes, bath.omegas)


def _sample_row(state: D2State, bath: BathSpec, protocol: Protocol, t: float):
    norm2 = state.norm_squared()
    rho = reduced_spin_density(state)
    a = bloch_vector(rho)
    energy = energy_expectation(state, bath, protocol, t)
    ent = entropy_record(state, rho=rho)
    return a, norm2, energy, ent


def run_trajectory(initial: D2State, bath: BathSpec, protocol: Protocol, cfg: IntegratorConfig,
                   sample_times) -> tuple[BlochTrace, list[dict]]:
    """Integrate to the last sample time, emitting observables at each sample.

    Returns the trace and the list of basis-adaptation events.
    Deterministic given inputs: no randomness enters the propagation.
    """
    sample_times = np.asarray(sample_times, dtype=float)
    if sample_times.ndim != 1 or sample_times.size == 0:
        raise ValueError("sample_times must be a nonempty 1-D grid")
    if np.any(np.diff(sample_times) <= 0):
        raise ValueError("sample_times must be strictly ascending")
    if sample_times[0] < initial.time - 1e-12:
        raise ValueError("sample grid starts before the state's time")
    if initial.n_modes != bath.n_modes:
        raise ValueError(f"state has {initial.n_modes} modes, bath {bath.n_modes}")

    state = initial.copy()
    limit = cfg.max_M if cfg.max_M is not None else 2 * state.multiplicity
    t_final = float(sample_times[-1])

    rows = []
    events: list[dict] = []
    next_idx = 0
    # emit samples that coincide with the start time
    while next_idx < sample_times.size and sample_times[next_idx] <= state.time + 1e-12:
        a, norm2, energy, ent = _sample_row(state, bath, protocol, sample_times[next_idx])
        rows.append((sample_times[next_idx], a, norm2, energy, ent, state.multiplicity))
        next_idx += 1

    if next_idx < sample_times.size:
        solver = _make_solver(state, bath, protocol, cfg, t_final)
        steps_since_adapt = 0
        while solver.status == "running":
            msg = solver.step()
            if solver.status == "failed":
                raise NumericalFailure(f"integrator failed at t = {solver.t:.6g}: {msg}")
            t_prev, t_now = solver.t_old, solver.t
            dense = None
            while next_idx < sample_times.size and sample_times[next_idx] <= t_now + 1e-12:
                ts = float(sample_times[next_idx])
                if dense is None:
                    dense = solver.dense_output()
                y_s = dense(min(ts, t_now))
                snap = _state_from_y(y_s, ts, state.multiplicity, state.n_modes, bath.omegas)
                a, norm2, energy, ent = _sample_row(snap, bath, protocol, ts)
                rows.append((ts, a, norm2, energy, ent, snap.multiplicity))
                next_idx += 1
            steps_since_adapt += 1
            if solver.status == "running" and steps_since_adapt >= cfg.adapt_every:
                steps_since_adapt = 0
                cur = _state_from_y(solver.y, solver.t, state.multiplicity, state.n_modes, bath.omegas)
                new_state, evs = adapt_basis(cur, bath, protocol, cfg, t=float(solver.t), max_m=limit)
                # keep only one max_m warning per episode to avoid log spam
                if evs and evs[-1]["kind"] == "max_m_reached" and events and events[-1]["kind"] == "max_m_reached":
                    evs = evs[:-1]
                events.extend(evs)
                if new_state is not cur:
                    # apoptosis or spawn changed the parametrization: restart
                    # the solver from the adapted state
                    state = new_state
                    solver = _make_solver(state, bath, protocol, cfg, t_final,
                                          first_step=min(solver.h_abs, max(t_final - state.time, 1e-12)))
                    if state.time >= t_final:
                        break

    t_arr = np.array([r[0] for r in rows])
    a_arr = np.array([r[1] for r in rows])
    trace = BlochTrace(
        t=t_arr,
        a=a_arr,
        norm=np.array([r[2] for r in rows]),
        energy=np.array([r[3] for r in rows]),
        s_lin=np.array([r[4].s_lin for r in rows]),
        s_o=np.array([r[4].s_o for r in rows]),
        m=np.array([r[5] for r in rows], dtype=int),
        s_e=np.array([r[4].s_e for r in rows]),
    )
    return trace, events
