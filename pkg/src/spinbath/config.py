"""Campaign configuration: family presets, strict validation, CLI overrides.

Configs are plain JSON mappings.  A minimal config names just the
family; everything else falls back to that family's desk-scale preset.
Unknown keys are rejected with the offending path, so a typo in a
physics parameter never passes silently.
"""

from __future__ import annotations

import copy
import json

from .bath import SpectralDensityParams, ThermalParams
from .experiments import FAMILIES, CampaignSpec
from .fock import Fig1Params
from .propagator import IntegratorConfig
from .protocol import Modulation, Protocol

__all__ = [
    "ConfigError",
    "PRESETS",
    "PRESET_NOTES",
    "apply_overrides",
    "family_defaults",
    "load_config",
    "preset",
    "resolve",
]


class ConfigError(ValueError):
    """Bad campaign configuration; the message names the offending path."""


# ---------------------------------------------------------------------------
# presets
#
# Desk-scale presets finish a campaign in minutes on one core and double
# as the per-family defaults of a minimal config.  The *-large presets
# mirror published ensemble sizes (hundreds of modes, 100 runs) and are
# long-running; they exist for completeness, not for routine use.

_BATH_DESK = {"alpha": 0.3, "s": 0.25, "omega_c": 1.0, "omega_max": 4.0}
_THERMAL_DESK = {"kT": 0.1, "law": "mode_weighted"}

# measurement families put the frequency grid where it matters: modes
# slower than the protocol act as quasi-static random biases that seed
# the outcome, so the grid stops at 2 omega_c instead of wasting modes
# on the exponentially suppressed tail
_BATH_MEAS = {"alpha": 0.3, "s": 0.25, "omega_c": 1.0, "omega_max": 2.0}
_THERMAL_MEAS = {"kT": 0.3, "law": "mode_weighted"}

# preparation first (self-energy on, coupling off), then a slow coupling
# ramp for the measurement proper, then free evolution.  The ramp must
# cross the moderate-coupling band slowly: outcomes commit while the
# effective coupling is still moderate and freeze once it is strong, so
# a fast rise strands the spin near the equator.  The self-energy stays
# on through most of the ramp; without it the coupling term commutes
# with the measured observable and nothing can localize.
_MEASUREMENT_PROTOCOL = {
    "variant": "sigma_x",
    "omega0": -0.5,
    "t_end": 44.0,
    "f_O": {"kind": "sigmoid_off", "amplitude": 1.0, "t_mid": 26.0, "width": 2.0},
    "f_OE": {"kind": "table", "ts": [0.0, 3.0, 30.0, 36.0, 38.0, 40.0],
             "values": [0.0, 0.0, 2.582, 2.582, 0.0, 0.0]},
}

_INTEGRATOR_DESK = {
    "rel_tol": 1e-9, "abs_tol": 1e-11, "metric_reg": 1e-7,
    "spawn_threshold": 1e-3, "apoptosis_overlap": 0.9995,
    "max_M": 4, "adapt_every": 10, "method": "DOP853", "max_step": None,
}

PRESETS: dict[str, dict] = {
    "A-desk": {
        "family": "A",
        "n_runs": 20,
        "base_seed": 11000,
        "bath": {**_BATH_DESK, "n_modes": 16},
        "thermal": dict(_THERMAL_DESK),
        "multiplicity": 4,
        "spin": "plus_x",
        "displacement": 0.3,
        "protocol": {
            "variant": "sigma_x",
            "omega0": -0.5,
            "t_end": 60.0,
            "f_O": {"kind": "constant", "c": 1.0},
            "f_OE": {"kind": "constant", "c": 1.0},
        },
        "integrator": dict(_INTEGRATOR_DESK),
        "n_samples": 241,
        "asymptote": {"window_frac": 0.2, "convergence_std": 0.1},
        "bimodal_threshold": 0.7,
        "histogram_bins": 20,
    },
    "B-desk": {
        "family": "B",
        "n_runs": 50,
        "base_seed": 22000,
        "bath": {**_BATH_MEAS, "n_modes": 32},
        "thermal": dict(_THERMAL_MEAS),
        "multiplicity": 4,
        "spin": "plus_x",
        "displacement": 0.3,
        "protocol": copy.deepcopy(_MEASUREMENT_PROTOCOL),
        "integrator": {**_INTEGRATOR_DESK, "rel_tol": 1e-8, "abs_tol": 1e-10,
                       "metric_reg": 1e-6},
        "n_samples": 221,
        "asymptote": {"window_frac": 0.2, "convergence_std": 0.1},
        "bimodal_threshold": 0.7,
        "histogram_bins": 20,
    },
    "C-desk": {
        "family": "C",
        "n_runs": 24,
        "base_seed": 33000,
        "bath": {**_BATH_MEAS, "n_modes": 16},
        "thermal": dict(_THERMAL_MEAS),
        "multiplicity": 4,
        "spin": "plus_x",
        "displacement": 0.3,
        "protocol": copy.deepcopy(_MEASUREMENT_PROTOCOL),
        # tight tolerances and mid-range regularization hold the
        # conserved component of the redundant runs below 1e-8
        "integrator": {**_INTEGRATOR_DESK, "rel_tol": 1e-10, "abs_tol": 1e-12},
        "n_samples": 221,
        "asymptote": {"window_frac": 0.2, "convergence_std": 0.1},
        "bimodal_threshold": 0.7,
        "histogram_bins": 20,
    },
    "D-desk": {
        "family": "D",
        "n_runs": 10,
        "base_seed": 44000,
        "bath": {**_BATH_MEAS, "n_modes": 32},
        "thermal": dict(_THERMAL_MEAS),
        "multiplicity": 3,
        "spin": "plus_x",
        "displacement": 0.3,
        "protocol": copy.deepcopy(_MEASUREMENT_PROTOCOL),
        "integrator": {**_INTEGRATOR_DESK, "rel_tol": 1e-8, "abs_tol": 1e-10,
                       "metric_reg": 1e-6},
        "n_samples": 221,
        "asymptote": {"window_frac": 0.2, "convergence_std": 0.1},
        "bimodal_threshold": 0.7,
        "histogram_bins": 20,
    },
    "A-large": {
        "family": "A",
        "n_runs": 100,
        "base_seed": 11000,
        "bath": {**_BATH_DESK, "n_modes": 150},
        "thermal": dict(_THERMAL_DESK),
        "multiplicity": 10,
        "spin": "plus_x",
        "displacement": 0.3,
        "protocol": {
            "variant": "sigma_x",
            "omega0": -0.5,
            "t_end": 100.0,
            "f_O": {"kind": "constant", "c": 1.0},
            "f_OE": {"kind": "constant", "c": 1.0},
        },
        "integrator": {**_INTEGRATOR_DESK, "metric_reg": 1e-6, "max_M": 10},
        "n_samples": 401,
        "asymptote": {"window_frac": 0.2, "convergence_std": 0.1},
        "bimodal_threshold": 0.7,
        "histogram_bins": 20,
    },
    "B-large": {
        "family": "B",
        "n_runs": 100,
        "base_seed": 22000,
        "bath": {**_BATH_DESK, "n_modes": 300},
        "thermal": dict(_THERMAL_DESK),
        "multiplicity": 10,
        "spin": "plus_x",
        "displacement": 0.3,
        "protocol": copy.deepcopy(_MEASUREMENT_PROTOCOL),
        "integrator": {**_INTEGRATOR_DESK, "metric_reg": 1e-6, "max_M": 10},
        "n_samples": 221,
        "asymptote": {"window_frac": 0.2, "convergence_std": 0.1},
        "bimodal_threshold": 0.7,
        "histogram_bins": 20,
    },
    "fig1": {
        "family": "fig1",
        "fig1": {"omega0": 4.0, "g1": 8.0, "omega1": 1.0, "n_max": 160,
                 "t_end": 20.0, "n_samples": 401, "n_terms": 4},
    },
}

PRESET_NOTES: dict[str, list[str]] = {
    "A-desk": ["desk-scale ensemble: sized to finish in minutes on one core"],
    "B-desk": [
        "ramp timing, bath temperature and frequency cutoff chosen from "
        "desk-scale pilot ensembles so that most outcomes localize; "
        "approximate, not taken from a measured system",
        "the grid stops at 2 omega_c to concentrate modes at low frequency, "
        "where quasi-static thermal displacements seed the outcome",
    ],
    "C-desk": [
        "desk-scale ensemble: sized to finish within the half-hour",
        "first measurement shares the B-desk ramp at 16 modes; the second "
        "derives its protocol from the first with the self-energy profile "
        "replaced by zero",
    ],
    "D-desk": [
        "desk-scale ensemble: sized to finish in minutes on one core",
        "pilot budget and outcome threshold chosen from desk-scale pilot ensembles",
    ],
    "A-large": ["long-running: hundreds of modes and 100 runs; hours, not minutes"],
    "B-large": ["long-running: hundreds of modes and 100 runs; hours, not minutes"],
    "fig1": ["exact single-mode parity runs; deterministic, no bath sampling"],
}

_FAMILY_DEFAULTS = {"A": "A-desk", "B": "B-desk", "C": "C-desk", "D": "D-desk",
                    "fig1": "fig1"}


def preset(name: str) -> dict:
    """Deep copy of a named preset config."""
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return copy.deepcopy(PRESETS[name])


def family_defaults(family: str) -> dict:
    """The desk-scale preset backing a minimal config of this family."""
    if family not in _FAMILY_DEFAULTS:
        raise ConfigError(f"family: must be one of {FAMILIES}, got {family!r}")
    return preset(_FAMILY_DEFAULTS[family])


# keys whose values are taken wholesale from the user config instead of
# merged key-by-key (a different modulation kind must not inherit the
# preset kind's parameters)
_REPLACE_KEYS = {"f_O", "f_OE", "phis", "ts", "values"}


def _merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for key, val in over.items():
        if (key not in _REPLACE_KEYS and isinstance(val, dict)
                and isinstance(out.get(key), dict)):
            out[key] = _merge(out[key], val)
        else:
            out[key] = copy.deepcopy(val)
    return out


# ---------------------------------------------------------------------------
# validation

_MODULATION_KEYS = {
    "constant": {"c"},
    "box": {"t_on", "t_off", "rise_time", "amplitude"},
    "sigmoid_off": {"t_mid", "width", "amplitude"},
    "table": {"ts", "values"},
}

_TOP_KEYS = {
    "family", "n_runs", "base_seed", "bath", "thermal", "multiplicity", "spin",
    "displacement", "protocol", "second_protocol", "integrator", "n_samples",
    "asymptote", "bimodal_threshold", "histogram_bins", "phis", "fig1", "label",
}
_FIG1_TOP_KEYS = {"family", "fig1", "label"}
_BATH_KEYS = {"alpha", "s", "omega_c", "n_modes", "omega_max"}
_THERMAL_KEYS = {"kT", "law"}
_PROTOCOL_KEYS = {"f_O", "f_OE", "variant", "omega0", "t_end"}
_INTEGRATOR_KEYS = {"rel_tol", "abs_tol", "metric_reg", "spawn_threshold",
                    "apoptosis_overlap", "max_M", "adapt_every", "method", "max_step"}
_ASYMPTOTE_KEYS = {"window_frac", "convergence_std"}
_FIG1_KEYS = {"omega0", "g1", "omega1", "n_max", "t_end", "n_samples", "n_terms"}


def _mapping(val, path: str) -> dict:
    if not isinstance(val, dict):
        raise ConfigError(f"{path}: expected a mapping, got {type(val).__name__}")
    return val


def _check_keys(d: dict, path: str, allowed: set) -> None:
    unknown = sorted(set(d) - allowed)
    if unknown:
        raise ConfigError(f"{path}: unknown key(s) {unknown}; allowed: {sorted(allowed)}")


def _int(d: dict, key: str, path: str, default=None):
    if key not in d:
        return default
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{path}.{key}: expected an integer, got {v!r}")
    return v


def _num(d: dict, key: str, path: str, default=None):
    if key not in d:
        return default
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{path}.{key}: expected a number, got {v!r}")
    return float(v)


def _str(d: dict, key: str, path: str, default=None):
    if key not in d:
        return default
    v = d[key]
    if not isinstance(v, str):
        raise ConfigError(f"{path}.{key}: expected a string, got {v!r}")
    return v


def _build(path: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _validate_modulation(d: dict, path: str) -> Modulation:
    d = _mapping(d, path)
    kind = _str(d, "kind", path)
    if kind is None:
        raise ConfigError(f"{path}: missing required key 'kind'")
    if kind not in _MODULATION_KEYS:
        raise ConfigError(
            f"{path}.kind: unknown modulation kind {kind!r}; "
            f"choose from {sorted(_MODULATION_KEYS)}")
    _check_keys(d, path, _MODULATION_KEYS[kind] | {"kind"})
    return _build(path, Modulation.from_dict, d)


def _validate_protocol(d: dict, path: str) -> Protocol:
    d = _mapping(d, path)
    _check_keys(d, path, _PROTOCOL_KEYS)
    for key in ("f_O", "f_OE", "t_end"):
        if key not in d:
            raise ConfigError(f"{path}: missing required key {key!r}")
    f_o = _validate_modulation(d["f_O"], f"{path}.f_O")
    f_oe = _validate_modulation(d["f_OE"], f"{path}.f_OE")
    return _build(path, Protocol,
                  f_o=f_o, f_oe=f_oe,
                  variant=_str(d, "variant", path, "sigma_x"),
                  omega0=_num(d, "omega0", path, 1.0),
                  t_end=_num(d, "t_end", path))


def _validate_integrator(d: dict, path: str) -> IntegratorConfig:
    d = _mapping(d, path)
    _check_keys(d, path, _INTEGRATOR_KEYS)
    clean = dict(d)
    for key in ("rel_tol", "abs_tol", "metric_reg", "spawn_threshold",
                "apoptosis_overlap"):
        if key in clean:
            clean[key] = _num(clean, key, path)
    if clean.get("max_M") is not None:
        clean["max_M"] = _int(clean, "max_M", path)
    if "adapt_every" in clean:
        clean["adapt_every"] = _int(clean, "adapt_every", path)
    if clean.get("max_step") is not None:
        clean["max_step"] = _num(clean, "max_step", path)
    return _build(path, IntegratorConfig.from_dict, clean)


def _validate_fig1(d: dict, path: str) -> Fig1Params:
    d = _mapping(d, path)
    _check_keys(d, path, _FIG1_KEYS)
    kwargs = {}
    for key in ("omega0", "g1", "omega1", "t_end"):
        if key in d:
            kwargs[key] = _num(d, key, path)
    for key in ("n_max", "n_samples", "n_terms"):
        if key in d:
            kwargs[key] = _int(d, key, path)
    return _build(path, Fig1Params, **kwargs)


def validate_campaign(raw: dict) -> CampaignSpec:
    """Strictly validate a complete config mapping into a CampaignSpec.

    Every unknown key, type mismatch or out-of-range value raises
    ConfigError naming the offending path.
    """
    raw = _mapping(raw, "config")
    family = _str(raw, "family", "config")
    if family is None:
        raise ConfigError("config: missing required key 'family'")
    if family not in FAMILIES:
        raise ConfigError(f"family: must be one of {FAMILIES}, got {family!r}")

    if family == "fig1":
        _check_keys(raw, "config", _FIG1_TOP_KEYS)
        fig1 = _validate_fig1(raw.get("fig1", {}), "fig1")
        return _build("config", CampaignSpec, family="fig1", fig1=fig1,
                      label=_str(raw, "label", "config", ""))

    _check_keys(raw, "config", _TOP_KEYS - {"fig1"})
    kwargs: dict = {"family": family, "label": _str(raw, "label", "config", "")}

    if "bath" in raw:
        bath = _mapping(raw["bath"], "bath")
        _check_keys(bath, "bath", _BATH_KEYS)
        kwargs["density"] = _build("bath", SpectralDensityParams,
                                   alpha=_num(bath, "alpha", "bath", 0.3),
                                   s=_num(bath, "s", "bath", 0.25),
                                   omega_c=_num(bath, "omega_c", "bath", 1.0))
        n_modes = _int(bath, "n_modes", "bath")
        if n_modes is not None:
            kwargs["n_modes"] = n_modes
        if bath.get("omega_max") is not None:
            kwargs["omega_max"] = _num(bath, "omega_max", "bath")
    if "thermal" in raw:
        thermal = _mapping(raw["thermal"], "thermal")
        _check_keys(thermal, "thermal", _THERMAL_KEYS)
        kwargs["thermal"] = _build("thermal", ThermalParams,
                                   kT=_num(thermal, "kT", "thermal", 0.0),
                                   law=_str(thermal, "law", "thermal", "mode_weighted"))
    if "protocol" in raw:
        kwargs["protocol"] = _validate_protocol(raw["protocol"], "protocol")
    if "second_protocol" in raw:
        kwargs["second_protocol"] = _validate_protocol(raw["second_protocol"],
                                                       "second_protocol")
    if "integrator" in raw:
        kwargs["integrator"] = _validate_integrator(raw["integrator"], "integrator")
    if "asymptote" in raw:
        asym = _mapping(raw["asymptote"], "asymptote")
        _check_keys(asym, "asymptote", _ASYMPTOTE_KEYS)
        if "window_frac" in asym:
            kwargs["window_frac"] = _num(asym, "window_frac", "asymptote")
        if "convergence_std" in asym:
            kwargs["convergence_std"] = _num(asym, "convergence_std", "asymptote")
    if "phis" in raw:
        phis = raw["phis"]
        if not isinstance(phis, (list, tuple)):
            raise ConfigError(f"phis: expected a list of angles, got {phis!r}")
        vals = []
        for k, p in enumerate(phis):
            if isinstance(p, bool) or not isinstance(p, (int, float)):
                raise ConfigError(f"phis[{k}]: expected a number, got {p!r}")
            vals.append(float(p))
        kwargs["phis"] = tuple(vals)

    for key, getter in (("n_runs", _int), ("base_seed", _int),
                        ("multiplicity", _int), ("n_samples", _int),
                        ("histogram_bins", _int), ("displacement", _num),
                        ("bimodal_threshold", _num), ("spin", _str)):
        if key in raw:
            kwargs[key] = getter(raw, key, "config")

    return _build("config", CampaignSpec, **kwargs)


def resolve(raw: dict, use_defaults: bool = True) -> CampaignSpec:
    """Merge a (possibly partial) config over its family defaults and validate."""
    raw = _mapping(raw, "config")
    family = _str(raw, "family", "config")
    if family is None:
        raise ConfigError("config: missing required key 'family'")
    merged = _merge(family_defaults(family), raw) if use_defaults else raw
    return validate_campaign(merged)


def load_config(path) -> dict:
    """Parse a JSON config file; malformed text raises ConfigError."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {path}: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: expected a JSON object at top level")
    return raw


def apply_overrides(raw: dict, pairs) -> list[dict]:
    """Apply dotted key=value overrides in place; returns provenance entries.

    Values parse as JSON when possible (numbers, lists, booleans, null)
    and fall back to bare strings, so ``protocol.t_end=30`` and
    ``spin=plus_x`` both work.
    """
    applied = []
    for pair in pairs:
        if "=" not in pair:
            raise ConfigError(f"override {pair!r}: expected key=value")
        dotted, text = pair.split("=", 1)
        dotted = dotted.strip()
        if not dotted:
            raise ConfigError(f"override {pair!r}: empty key")
        try:
            value = json.loads(text)
        except json.JSONDecodeError:
            value = text
        node = raw
        parts = dotted.split(".")
        for part in parts[:-1]:
            nxt = node.setdefault(part, {})
            if not isinstance(nxt, dict):
                raise ConfigError(
                    f"override {pair!r}: {part} is not a mapping in the config")
            node = nxt
        node[parts[-1]] = value
        applied.append({"key": dotted, "value": value})
    return applied
