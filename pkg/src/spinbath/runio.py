"""Run-directory layout: manifest, summary, tables and trace files.

One campaign writes one directory:

    manifest.json          resolved spec, seeds, versions, paths, deviations
    summary.json           EnsembleSummary.to_dict()
    asymptotes.csv         per-trajectory asymptote table
    histogram.csv          binned outcome counts (when the family has one)
    ensemble.csv           sampled initial bath centroids per run
    modulation.csv         modulation profiles on the sample grid
    modulation_second.csv  family C's second-measurement profiles
    traces/<name>.csv      one BlochTrace per trajectory
    events/<name>.json     basis-adaptation events per trajectory

Every file except the manifest is a pure function of the campaign spec;
timestamps and wall-clock timings live in the manifest only, so a
replay can compare the rest byte for byte.
"""

from __future__ import annotations

import json
import time
from importlib import metadata
from pathlib import Path

import numpy as np

from .experiments import CampaignSpec, EnsembleSummary, RunRecord, run_campaign
from .protocol import Protocol

MANIFEST_SCHEMA = "spinbath-run/1"

__all__ = [
    "MANIFEST_SCHEMA",
    "canonical_json",
    "code_version",
    "read_manifest",
    "record_name",
    "replay_manifest",
    "run_and_write",
    "write_run_dir",
]


def code_version() -> str:
    try:
        return metadata.version("spinbath")
    except metadata.PackageNotFoundError:  # running from a source tree
        return "0+unknown"


def _np_default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def canonical_json(obj) -> str:
    """Deterministic JSON text: sorted keys, fixed layout, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False,
                      default=_np_default) + "\n"


def _fmt(x) -> str:
    return format(float(x), ".17g")


def record_name(rec: RunRecord) -> str:
    """Stable file stem encoding the trajectory's role."""
    if rec.kind == "run":
        return f"run_{rec.index:03d}"
    if rec.kind in ("first", "second"):
        return f"run_{rec.index:03d}_{rec.kind}"
    if rec.kind == "redundant":
        return f"redundant_{rec.case}"
    if rec.kind == "pilot":
        return f"pilot_{rec.index:03d}"
    if rec.kind == "sweep":
        return f"phi_{rec.index:02d}"
    if rec.kind == "fig1":
        return f"fig1_{rec.case}"
    raise ValueError(f"unknown record kind {rec.kind!r}")


def _write_asymptotes(path: Path, records) -> None:
    rows = ["# schema: spinbath-asymptotes/1",
            "index,kind,case,phi,seed,converged,a_z_inf,window_std,a_abs2_inf,"
            "t_lo,t_hi,n_window_samples"]
    for rec in records:
        asym = rec.asymptote
        rows.append(",".join([
            str(rec.index),
            rec.kind,
            rec.case or "",
            "" if rec.phi is None else _fmt(rec.phi),
            "" if rec.seed is None else str(rec.seed),
            "true" if asym.converged else "false",
            _fmt(asym.a_z_inf),
            _fmt(asym.window_std),
            _fmt(rec.a_abs2_inf),
            _fmt(asym.window[0]),
            _fmt(asym.window[1]),
            str(asym.n_samples),
        ]))
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")


def _write_histogram(path: Path, histogram: dict) -> None:
    counts = histogram["counts"]
    edges = histogram["edges"]
    rows = ["# schema: spinbath-histogram/1", "bin_lo,bin_hi,count"]
    for k, count in enumerate(counts):
        rows.append(f"{_fmt(edges[k])},{_fmt(edges[k + 1])},{int(count)}")
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")


def _write_ensemble(path: Path, records, omegas, gs) -> None:
    rows = ["# schema: spinbath-ensemble/1",
            "run_index,kind,mode,omega,g,re_gamma,im_gamma"]
    for rec in records:
        for n, gamma in enumerate(rec.bath0):
            rows.append(",".join([
                str(rec.index), rec.kind, str(n),
                _fmt(omegas[n]), _fmt(gs[n]),
                _fmt(gamma.real), _fmt(gamma.imag),
            ]))
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")


def _write_modulation(path: Path, protocol: Protocol, t_grid) -> None:
    rows = ["# schema: spinbath-modulation/1", "t,f_O,f_OE"]
    f_o = protocol.f_o(t_grid)
    f_oe = protocol.f_oe(t_grid)
    for k, t in enumerate(t_grid):
        rows.append(f"{_fmt(t)},{_fmt(f_o[k])},{_fmt(f_oe[k])}")
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")


def write_run_dir(out_dir, spec: CampaignSpec, summary: EnsembleSummary, *,
                  workers: int = 1, preset: str | None = None, overrides=(),
                  deviations=(), config_source=None, replay_of=None,
                  timing_s: float | None = None) -> dict:
    """Write the full campaign output tree; returns the manifest mapping."""
    out = Path(out_dir)
    (out / "traces").mkdir(parents=True, exist_ok=True)
    (out / "events").mkdir(exist_ok=True)

    trace_entries = []
    for rec in summary.records:
        name = record_name(rec)
        rec.trace.to_csv(out / "traces" / f"{name}.csv")
        (out / "events" / f"{name}.json").write_text(
            canonical_json(rec.events), encoding="utf-8")
        entry = {
            "name": name,
            "kind": rec.kind,
            "index": int(rec.index),
            "seed": None if rec.seed is None else int(rec.seed),
            "trace": f"traces/{name}.csv",
            "events": f"events/{name}.json",
        }
        if rec.phi is not None:
            entry["phi"] = float(rec.phi)
        if rec.case is not None:
            entry["case"] = rec.case
        trace_entries.append(entry)

    paths = {"summary": "summary.json", "asymptotes": "asymptotes.csv",
             "traces": trace_entries}

    (out / "summary.json").write_text(canonical_json(summary.to_dict()),
                                      encoding="utf-8")
    _write_asymptotes(out / "asymptotes.csv", summary.records)

    if summary.histogram is not None:
        _write_histogram(out / "histogram.csv", summary.histogram)
        paths["histogram"] = "histogram.csv"

    sampled = [r for r in summary.records if r.bath0 is not None]
    if sampled:
        bath = spec.bath()
        _write_ensemble(out / "ensemble.csv", sampled, bath.omegas, bath.gs)
        paths["ensemble"] = "ensemble.csv"

    if spec.protocol is not None:
        _write_modulation(out / "modulation.csv", spec.protocol, spec.t_grid())
        paths["modulation"] = "modulation.csv"
    second = spec.second_protocol
    if second is None and spec.family == "C":
        second = Protocol.from_dict(summary.report["second_protocol"])
    if second is not None:
        _write_modulation(out / "modulation_second.csv", second,
                          spec.t_grid(second))
        paths["modulation_second"] = "modulation_second.csv"

    manifest = {
        "schema": MANIFEST_SCHEMA,
        "created_at": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "code_version": code_version(),
        "spec": spec.to_dict(),
        "seeds": {
            "base_seed": None if spec.family == "fig1" else int(spec.base_seed),
            "per_trace": {e["name"]: e["seed"] for e in trace_entries},
        },
        "paths": paths,
        "workers": int(workers),
        "preset": preset,
        "config_source": None if config_source is None else str(config_source),
        "overrides": list(overrides),
        "deviations": list(deviations),
        "replay_of": None if replay_of is None else str(replay_of),
        "timing_s": timing_s,
    }
    (out / "manifest.json").write_text(canonical_json(manifest), encoding="utf-8")
    return manifest


def run_and_write(spec: CampaignSpec, out_dir, workers: int = 1, **manifest_kw) -> EnsembleSummary:
    """Run the campaign and persist its run directory."""
    start = time.perf_counter()
    summary = run_campaign(spec, workers=workers)
    write_run_dir(out_dir, spec, summary, workers=workers,
                  timing_s=time.perf_counter() - start, **manifest_kw)
    return summary


def read_manifest(path) -> dict:
    path = Path(path)
    with open(path, "r", encoding="utf-8") as fh:
        manifest = json.load(fh)
    if manifest.get("schema") != MANIFEST_SCHEMA:
        raise ValueError(f"{path}: expected schema {MANIFEST_SCHEMA!r}, "
                         f"got {manifest.get('schema')!r}")
    return manifest


def replay_manifest(manifest_path, out_dir=None, workers: int = 1) -> dict:
    """Re-run a manifest's campaign and compare against the stored summary.

    The campaign is reproduced from the resolved spec embedded in the
    manifest; the fresh summary must match summary.json byte for byte.
    Returns a report with the match verdict; writes a new run directory
    only when ``out_dir`` is given.
    """
    from .config import resolve  # runio stays import-light for workers

    manifest_path = Path(manifest_path)
    manifest = read_manifest(manifest_path)
    spec = resolve(manifest["spec"], use_defaults=False)
    summary = run_campaign(spec, workers=workers)
    fresh = canonical_json(summary.to_dict())
    stored_path = manifest_path.parent / manifest["paths"]["summary"]
    stored = stored_path.read_text(encoding="utf-8")
    report = {
        "match": fresh == stored,
        "stored_summary": str(stored_path),
        "replayed_from": str(manifest_path),
    }
    if out_dir is not None:
        write_run_dir(out_dir, spec, summary, workers=workers,
                      replay_of=manifest_path, preset=manifest.get("preset"),
                      overrides=manifest.get("overrides", ()),
                      deviations=manifest.get("deviations", ()))
        report["out_dir"] = str(out_dir)
    return report
