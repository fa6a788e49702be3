"""Time-dependent modulations of the self-energy and coupling terms.

The Hamiltonian carries two scalar profiles: f_O(t) multiplying the
spin self-energy and f_OE(t) multiplying the spin-bath coupling.
Profiles are nonnegative and piecewise smooth; box edges are smoothed
with logistic sigmoids so the adaptive integrator never sees a jump
unless rise_time is set to exactly zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

__all__ = ["Modulation", "Protocol"]

_KINDS = ("constant", "box", "sigmoid_off", "table")


def _logistic(x):
    return expit(x)


@dataclass(frozen=True)
class Modulation:
    """One scalar profile f(t) >= 0.

    kinds
    -----
    constant:    f = c
    box:         f = amplitude * logistic((t-t_on)/rise) * logistic((t_off-t)/rise);
                 rise_time = 0 gives hard edges
    sigmoid_off: f = amplitude * logistic((t_mid-t)/width)
    table:       linear interpolation of (ts, values), clamped at the ends
    """

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown modulation kind {self.kind!r}; choose from {_KINDS}")
        p = dict(self.params)
        if self.kind == "constant":
            c = float(p.get("c", 1.0))
            if c < 0:
                raise ValueError(f"constant modulation must be >= 0, got {c}")
        elif self.kind == "box":
            for key in ("t_on", "t_off"):
                if key not in p:
                    raise ValueError(f"box modulation requires {key!r}")
            if float(p["t_off"]) <= float(p["t_on"]):
                raise ValueError("box modulation requires t_off > t_on")
            if float(p.get("rise_time", 0.0)) < 0:
                raise ValueError("rise_time must be >= 0")
            if float(p.get("amplitude", 1.0)) < 0:
                raise ValueError("amplitude must be >= 0")
        elif self.kind == "sigmoid_off":
            if "t_mid" not in p:
                raise ValueError("sigmoid_off modulation requires 't_mid'")
            if float(p.get("width", 0.0)) <= 0:
                raise ValueError("sigmoid_off requires width > 0")
            if float(p.get("amplitude", 1.0)) < 0:
                raise ValueError("amplitude must be >= 0")
        elif self.kind == "table":
            ts = np.asarray(p.get("ts", ()), dtype=float)
            vals = np.asarray(p.get("values", ()), dtype=float)
            if ts.size < 2 or ts.shape != vals.shape:
                raise ValueError("table modulation needs matching ts/values with >= 2 points")
            if np.any(np.diff(ts) <= 0):
                raise ValueError("table ts must be strictly ascending")
            if np.any(vals < 0):
                raise ValueError("table values must be >= 0")
        object.__setattr__(self, "params", p)

    def __call__(self, t):
        p = self.params
        if self.kind == "constant":
            c = float(p.get("c", 1.0))
            return c * np.ones_like(np.asarray(t, dtype=float)) if np.ndim(t) else c
        if self.kind == "box":
            t_on, t_off = float(p["t_on"]), float(p["t_off"])
            rise = float(p.get("rise_time", 0.0))
            amp = float(p.get("amplitude", 1.0))
            t = np.asarray(t, dtype=float)
            if rise == 0.0:
                val = amp * ((t >= t_on) & (t < t_off)).astype(float)
            else:
                val = amp * _logistic((t - t_on) / rise) * _logistic((t_off - t) / rise)
            return val if val.ndim else float(val)
        if self.kind == "sigmoid_off":
            t_mid = float(p["t_mid"])
            width = float(p["width"])
            amp = float(p.get("amplitude", 1.0))
            val = amp * _logistic((t_mid - np.asarray(t, dtype=float)) / width)
            return val if np.ndim(val) else float(val)
        ts = np.asarray(p["ts"], dtype=float)
        vals = np.asarray(p["values"], dtype=float)
        val = np.interp(t, ts, vals)
        return val if np.ndim(val) else float(val)

    def to_dict(self) -> dict:
        return {"kind": self.kind, **self.params}

    @classmethod
    def from_dict(cls, d: dict) -> "Modulation":
        d = dict(d)
        kind = d.pop("kind")
        return cls(kind=kind, params=d)

    @classmethod
    def constant(cls, c: float = 1.0) -> "Modulation":
        return cls("constant", {"c": c})

    def switch_off_time(self) -> float | None:
        """Time after which the profile has decayed, if it has an off edge."""
        if self.kind == "box":
            return float(self.params["t_off"]) + 4.0 * float(self.params.get("rise_time", 0.0))
        if self.kind == "sigmoid_off":
            return float(self.params["t_mid"]) + 4.0 * float(self.params["width"])
        if self.kind == "table":
            vals = np.asarray(self.params["values"], dtype=float)
            if vals[-1] == 0.0:
                nz = np.nonzero(vals)[0]
                ts = np.asarray(self.params["ts"], dtype=float)
                return float(ts[nz[-1] + 1]) if nz.size else float(ts[0])
        return None


@dataclass(frozen=True)
class Protocol:
    """Hamiltonian variant, signed splitting, modulations and time horizon."""

    f_o: Modulation
    f_oe: Modulation
    variant: str = "sigma_x"
    omega0: float = 1.0
    t_end: float = 10.0

    def __post_init__(self):
        if self.variant not in ("sigma_x", "sigma_z"):
            raise ValueError(f"variant must be sigma_x or sigma_z, got {self.variant!r}")
        if self.t_end <= 0:
            raise ValueError(f"t_end must be > 0, got {self.t_end}")

    def to_dict(self) -> dict:
        return {
            "f_O": self.f_o.to_dict(),
            "f_OE": self.f_oe.to_dict(),
            "variant": self.variant,
            "omega0": self.omega0,
            "t_end": self.t_end,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Protocol":
        return cls(
            f_o=Modulation.from_dict(d["f_O"]),
            f_oe=Modulation.from_dict(d["f_OE"]),
            variant=str(d.get("variant", "sigma_x")),
            omega0=float(d.get("omega0", 1.0)),
            t_end=float(d["t_end"]),
        )
