"""Bath discretization and thermal initial-condition sampling.

The continuum bath is characterized by the spectral density

    J(w) = 2 pi alpha w_c^(1-s) w^s exp(-w / w_c),

sub-Ohmic for s < 1.  A finite bath replaces it with N modes on a
uniform grid w_n = n dw, dw = w_max / N, coupled with
g_n = sqrt(J(w_n) dw / pi), which reproduces sum_n g_n^2 =
(1/pi) integral J dw as N grows.

Thermal ensembles are drawn as coherent displacements: either a plain
complex Gaussian with per-component variance kT/2 applied uniformly to
all modes, or a mode-weighted Gaussian with per-component variance
nbar(w_n)/2 set by the Bose occupation of each mode.  Both laws have
uniform phase and both reduce to the vacuum as kT -> 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SpectralDensityParams",
    "spectral_density",
    "BathSpec",
    "discretize",
    "ThermalParams",
    "mean_occupation",
    "sample_initial_bath",
]


@dataclass(frozen=True)
class SpectralDensityParams:
    """Coupling strength, spectral exponent and cutoff of the continuum bath."""

    alpha: float
    s: float
    omega_c: float

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        if self.s <= 0:
            raise ValueError(f"s must be > 0, got {self.s}")
        if self.omega_c <= 0:
            raise ValueError(f"omega_c must be > 0, got {self.omega_c}")

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "s": self.s, "omega_c": self.omega_c}

    @classmethod
    def from_dict(cls, d: dict) -> "SpectralDensityParams":
        return cls(alpha=float(d["alpha"]), s=float(d["s"]), omega_c=float(d["omega_c"]))


def spectral_density(omega, params: SpectralDensityParams) -> np.ndarray:
    """J(w) evaluated on an array of nonnegative frequencies."""
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0):
        raise ValueError("spectral density is defined for omega >= 0")
    return 2.0 * np.pi * params.alpha * params.omega_c ** (1.0 - params.s) * w ** params.s * np.exp(
        -w / params.omega_c
    )


@dataclass(frozen=True)
class BathSpec:
    """Frequencies and couplings of a finite discretized bath."""

    omegas: np.ndarray
    gs: np.ndarray
    params: SpectralDensityParams | None = field(default=None, compare=False)

    def __post_init__(self):
        omegas = np.asarray(self.omegas, dtype=float)
        gs = np.asarray(self.gs, dtype=float)
        if omegas.ndim != 1 or gs.ndim != 1 or omegas.shape != gs.shape:
            raise ValueError(f"length mismatch: omegas {omegas.shape}, gs {gs.shape}")
        if omegas.size == 0:
            raise ValueError("bath needs at least one mode")
        if np.any(omegas <= 0):
            raise ValueError("mode frequencies must be > 0")
        if np.any(np.diff(omegas) <= 0):
            raise ValueError("mode frequencies must be strictly ascending")
        if np.any(gs < 0):
            raise ValueError("couplings must be >= 0")
        object.__setattr__(self, "omegas", omegas)
        object.__setattr__(self, "gs", gs)

    @property
    def n_modes(self) -> int:
        return self.omegas.size

    def coupling_sum(self) -> float:
        """sum_n g_n^2, the discrete stand-in for (1/pi) integral J dw."""
        return float(np.sum(self.gs ** 2))

    def to_dict(self) -> dict:
        d = {"omegas": self.omegas.tolist(), "gs": self.gs.tolist()}
        if self.params is not None:
            d["params"] = self.params.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "BathSpec":
        params = SpectralDensityParams.from_dict(d["params"]) if "params" in d else None
        return cls(omegas=np.array(d["omegas"], dtype=float), gs=np.array(d["gs"], dtype=float), params=params)


def discretize(params: SpectralDensityParams, n_modes: int, omega_max: float | None = None) -> BathSpec:
    """Uniform-grid discretization of the continuum spectral density.

    Parameters
    ----------
    params : SpectralDensityParams
    n_modes : int
        Number of bath modes N.
    omega_max : float, optional
        Upper edge of the frequency grid; defaults to 4 * omega_c,
        beyond which the exponential cutoff leaves < 2 % of the
        integrated coupling weight.

    Returns
    -------
    BathSpec
        Modes at w_n = n dw for n = 1..N with g_n = sqrt(J(w_n) dw / pi).
    """
    if n_modes < 1:
        raise ValueError(f"n_modes must be >= 1, got {n_modes}")
    if omega_max is None:
        omega_max = 4.0 * params.omega_c
    if omega_max <= 0:
        raise ValueError(f"omega_max must be > 0, got {omega_max}")
    dw = omega_max / n_modes
    omegas = dw * np.arange(1, n_modes + 1)
    gs = np.sqrt(spectral_density(omegas, params) * dw / np.pi)
    return BathSpec(omegas=omegas, gs=gs, params=params)


@dataclass(frozen=True)
class ThermalParams:
    """Temperature and sampling law of the initial bath ensemble."""

    kT: float
    law: str = "mode_weighted"

    _LAWS = ("gaussian", "mode_weighted")

    def __post_init__(self):
        if self.kT < 0:
            raise ValueError(f"kT must be >= 0, got {self.kT}")
        if self.law not in self._LAWS:
            raise ValueError(f"law must be one of {self._LAWS}, got {self.law!r}")

    def to_dict(self) -> dict:
        return {"kT": self.kT, "law": self.law}

    @classmethod
    def from_dict(cls, d: dict) -> "ThermalParams":
        return cls(kT=float(d["kT"]), law=str(d.get("law", "mode_weighted")))


def mean_occupation(omega, kT: float) -> np.ndarray:
    """Bose occupation nbar(w) = 1 / (exp(w / kT) - 1); zero at kT = 0."""
    w = np.asarray(omega, dtype=float)
    if kT == 0:
        return np.zeros_like(w)
    # expm1 keeps low-frequency modes accurate where w/kT << 1
    return 1.0 / np.expm1(w / kT)


def sample_initial_bath(bath: BathSpec, thermal: ThermalParams, rng: np.random.Generator) -> np.ndarray:
    """Draw one initial coherent displacement per mode.

    The ``gaussian`` law uses a uniform per-component variance of kT/2
    in all modes; ``mode_weighted`` uses nbar(w_n)/2 so each mode's
    mean occupation |gamma_n|^2 matches the Bose distribution.  At
    kT = 0 both return the vacuum.

    Returns
    -------
    ndarray, shape (n_modes,), complex
    """
    n = bath.n_modes
    if thermal.kT == 0:
        return np.zeros(n, dtype=complex)
    if thermal.law == "gaussian":
        var = np.full(n, 0.5 * thermal.kT)
    else:
        var = 0.5 * mean_occupation(bath.omegas, thermal.kT)
    sd = np.sqrt(var)
    return sd * rng.standard_normal(n) + 1j * sd * rng.standard_normal(n)
