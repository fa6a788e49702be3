"""Entropies, long-time asymptotes, histograms and the mixing-angle fit.

The spin entropy is the von Neumann entropy of the reduced 2x2
density.  The environment entropy is computed along an independent
route, from the Gram matrix of the unnormalized conditional bath
states |B_s> = sum_m C_{ms}|gamma_m>: for a pure total state its
nonzero spectrum must equal the reduced spin density's, so the two
entropies agree and their sum (the mutual entropy) is 2 S_O.  Keeping
both routes in place turns the equality into a cheap self-test of
every trajectory.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .state import D2State, SpinDensity, reduced_spin_density

__all__ = [
    "EntropyRecord",
    "AsymptoteRecord",
    "linear_entropy",
    "spin_entropy",
    "environment_entropy",
    "entropy_record",
    "extract_asymptote",
    "histogram_asymptotes",
    "asymptote_density",
    "PhiSweepFit",
    "phi_sweep_fit",
]


@dataclass(frozen=True)
class EntropyRecord:
    s_lin: float
    s_o: float
    s_e: float
    s_mutual: float


@dataclass(frozen=True)
class AsymptoteRecord:
    """Windowed long-time mean of a_z with its convergence verdict."""

    a_z_inf: float
    window_std: float
    converged: bool
    window: tuple[float, float]
    n_samples: int = 0

    def to_dict(self) -> dict:
        return {
            "a_z_inf": self.a_z_inf,
            "window_std": self.window_std,
            "converged": self.converged,
            "window": list(self.window),
            "n_samples": self.n_samples,
        }


def linear_entropy(rho: SpinDensity | np.ndarray) -> float:
    """S_lin = 1 - tr(rho^2); 0 for pure states, 1/2 at the maximally mixed point."""
    r = rho.rho if isinstance(rho, SpinDensity) else np.asarray(rho, dtype=complex)
    return float(np.real(1.0 - np.trace(r @ r)))


def _entropy_from_eigenvalues(lam: np.ndarray) -> float:
    lam = np.clip(np.real(lam), 0.0, None)
    tot = lam.sum()
    if tot <= 0:
        raise ValueError("cannot normalize an all-zero spectrum")
    lam = lam / tot
    nz = lam[lam > 0]
    return float(-np.sum(nz * np.log(nz)))


def spin_entropy(rho: SpinDensity | np.ndarray) -> float:
    """Von Neumann entropy -sum lambda ln lambda of the reduced spin density."""
    r = rho.rho if isinstance(rho, SpinDensity) else np.asarray(rho, dtype=complex)
    return _entropy_from_eigenvalues(np.linalg.eigvalsh(r))


def environment_entropy(state: D2State) -> float:
    """Entropy of the traced-out bath, from the conditional bath-state Gram matrix."""
    s = state.gram()
    w = np.einsum("ms,mp,pt->st", np.conj(state.C), s, state.C)
    w = 0.5 * (w + w.conj().T)
    return _entropy_from_eigenvalues(np.linalg.eigvalsh(w))


def entropy_record(state: D2State, rho: SpinDensity | None = None) -> EntropyRecord:
    """All entropy diagnostics of one state; S_mutual = S_O + S_E."""
    if rho is None:
        rho = reduced_spin_density(state)
    s_lin = linear_entropy(rho)
    s_o = spin_entropy(rho)
    s_e = environment_entropy(state)
    return EntropyRecord(s_lin=s_lin, s_o=s_o, s_e=s_e, s_mutual=s_o + s_e)


def extract_asymptote(trace, window_frac: float = 0.2, convergence_std: float = 0.1,
                      t_start: float | None = None) -> AsymptoteRecord:
    """Mean and scatter of a_z over the trailing window of the trace.

    Parameters
    ----------
    trace : BlochTrace
        Must cover the post-measurement era; when the coupling is
        modulated, pass its switch-off time as ``t_start`` so the
        window never reaches back into the driven phase.
    window_frac : float
        Fraction of the (filtered) samples forming the window.
    convergence_std : float
        A run counts as converged when the window standard deviation
        stays below this.
    """
    if not 0 < window_frac <= 1:
        raise ValueError(f"window_frac must lie in (0, 1], got {window_frac}")
    t = np.asarray(trace.t, dtype=float)
    az = np.asarray(trace.a, dtype=float)[:, 2]
    if t_start is not None:
        mask = t >= t_start
        t, az = t[mask], az[mask]
    if t.size == 0:
        raise ValueError("asymptote window is empty (t_start beyond the trace?)")
    k = max(1, int(np.ceil(window_frac * t.size)))
    tw, azw = t[-k:], az[-k:]
    mean = float(np.mean(azw))
    std = float(np.std(azw))
    return AsymptoteRecord(
        a_z_inf=mean,
        window_std=std,
        converged=bool(std < convergence_std),
        window=(float(tw[0]), float(tw[-1])),
        n_samples=int(k),
    )


def histogram_asymptotes(records, bins: int = 20, include_nonconverged: bool = False):
    """Binned counts of a_z asymptotes over [-1, 1].

    Returns (counts, edges).  The converged-only mode mirrors ensemble
    reports that discard non-converged runs; the inclusive mode keeps
    every run.
    """
    vals = [r.a_z_inf for r in records if include_nonconverged or r.converged]
    if not vals:
        raise ValueError("no records left after convergence filtering")
    counts, edges = np.histogram(np.clip(vals, -1.0, 1.0), bins=bins, range=(-1.0, 1.0))
    return counts, edges


@lru_cache(maxsize=8)
def _density_norm(eps: float) -> float:
    val, _ = quad(lambda x: np.sqrt(1.0 + 1.0 / (1.0 - x * x)), -1.0 + eps, 1.0 - eps)
    return val


def asymptote_density(a, eps: float = 1e-3) -> np.ndarray:
    """Predicted outcome density p(a) ~ sqrt(1 + 1/(1 - a^2)), unit mass on the truncated domain.

    The closed form diverges (integrably) at a = +-1; normalization
    and evaluation are truncated to [-1+eps, 1-eps], outside of which
    the density is reported as 0.
    """
    a = np.asarray(a, dtype=float)
    out = np.zeros_like(a)
    inside = np.abs(a) <= 1.0 - eps
    x = a[inside]
    out[inside] = np.sqrt(1.0 + 1.0 / (1.0 - x * x)) / _density_norm(eps)
    return out


@dataclass(frozen=True)
class PhiSweepFit:
    """Residuals of measured asymptotes against the cos(2 phi) prediction."""

    phis: np.ndarray
    a_z_inf: np.ndarray
    predicted: np.ndarray
    residuals: np.ndarray
    residual_rms: float

    def to_dict(self) -> dict:
        return {
            "phis": self.phis.tolist(),
            "a_z_inf": self.a_z_inf.tolist(),
            "predicted": self.predicted.tolist(),
            "residuals": self.residuals.tolist(),
            "residual_rms": self.residual_rms,
        }


def phi_sweep_fit(points) -> PhiSweepFit:
    """Compare (phi, a_z asymptote) pairs against a_z(phi) = cos(2 phi).

    The prediction has no free parameters, so the fit report is the
    pointwise residual set and its RMS.
    """
    pts = sorted((float(p), float(v)) for p, v in points)
    if len(pts) < 3:
        raise ValueError(f"need at least 3 sweep points, got {len(pts)}")
    phis = np.array([p for p, _ in pts])
    vals = np.array([v for _, v in pts])
    pred = np.cos(2.0 * phis)
    res = vals - pred
    return PhiSweepFit(
        phis=phis,
        a_z_inf=vals,
        predicted=pred,
        residuals=res,
        residual_rms=float(np.sqrt(np.mean(res ** 2))),
    )
