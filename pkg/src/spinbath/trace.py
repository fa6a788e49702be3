"""Per-trajectory time series container and its CSV round trip.

One BlochTrace holds everything sampled along a single run: Bloch
components, squared norm, energy, entropies and the live basis size.
The CSV schema is fixed and versioned; floats are written with 17
significant digits so a read-back is bit-exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SCHEMA = "bloch-trace/1"
COLUMNS = ("t", "a_x", "a_y", "a_z", "norm", "energy", "S_lin", "S_O", "M")

__all__ = ["BlochTrace", "SCHEMA", "COLUMNS"]


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass
class BlochTrace:
    """Sampled observables of one trajectory.

    The environment entropy ``s_e`` is carried in memory for identity
    checks but is not part of the CSV schema (it duplicates ``s_o``
    for a pure total state).
    """

    t: np.ndarray
    a: np.ndarray          # (n_samples, 3)
    norm: np.ndarray       # squared norm <Psi|Psi>
    energy: np.ndarray
    s_lin: np.ndarray
    s_o: np.ndarray
    m: np.ndarray          # basis multiplicity per sample (0 tags an exact-oracle run)
    s_e: np.ndarray | None = None
    oracle: bool = False
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.t)
        for name in ("a", "norm", "energy", "s_lin", "s_o", "m"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"column {name} has {len(getattr(self, name))} rows, expected {n}")

    def __len__(self) -> int:
        return len(self.t)

    def a_z(self) -> np.ndarray:
        return self.a[:, 2]

    def to_csv(self, path) -> None:
        tag = f"# schema: {SCHEMA}" + (" oracle=true" if self.oracle else "")
        rows = [tag, ",".join(COLUMNS)]
        for i in range(len(self.t)):
            vals = [
                self.t[i], self.a[i, 0], self.a[i, 1], self.a[i, 2],
                self.norm[i], self.energy[i], self.s_lin[i], self.s_o[i],
            ]
            rows.append(",".join(_fmt(v) for v in vals) + f",{int(self.m[i])}")
        with open(path, "w") as fh:
            fh.write("\n".join(rows) + "\n")

    @classmethod
    def from_csv(cls, path) -> "BlochTrace":
        with open(path) as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
        if not lines or not lines[0].startswith("# schema:"):
            raise ValueError(f"{path}: missing schema line")
        head = lines[0][len("# schema:"):].strip()
        if not head.startswith(SCHEMA):
            raise ValueError(f"{path}: unsupported schema {head!r}")
        oracle = "oracle=true" in head
        if lines[1] != ",".join(COLUMNS):
            raise ValueError(f"{path}: unexpected header {lines[1]!r}")
        data = np.array([[float(x) for x in ln.split(",")] for ln in lines[2:]], dtype=float)
        if data.size == 0:
            data = data.reshape(0, len(COLUMNS))
        return cls(
            t=data[:, 0],
            a=data[:, 1:4],
            norm=data[:, 4],
            energy=data[:, 5],
            s_lin=data[:, 6],
            s_o=data[:, 7],
            m=data[:, 8].astype(int),
            oracle=oracle,
        )
