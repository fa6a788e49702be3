"""Command-line interface: campaigns, replay, config validation, oracle checks.

Exit codes: 0 success, 2 configuration error, 3 numerical failure
(including a failed replay comparison or pilot search), 4 oracle-check
failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

import numpy as np

from .bath import BathSpec, ThermalParams, mean_occupation, sample_initial_bath
from .config import (
    ConfigError,
    PRESET_NOTES,
    PRESETS,
    apply_overrides,
    load_config,
    preset,
    resolve,
)
from .experiments import CampaignError, CampaignSpec
from .fock import FockSpec, bloch_trace_from_states, build_hamiltonian, embed_d2_state, propagate_exact
from .observables import entropy_record
from .propagator import IntegratorConfig, NumericalFailure, energy_expectation, run_trajectory
from .protocol import Modulation, Protocol
from .runio import canonical_json, replay_manifest, run_and_write
from .state import D2State, make_product_initial

logger = logging.getLogger(__name__)

__all__ = ["main", "oracle_check"]


# ---------------------------------------------------------------------------
# oracle checks: independent routes recomputed and compared

def _random_d2(rng, m: int, n: int, scale: float) -> D2State:
    C = rng.normal(size=(m, 2)) + 1j * rng.normal(size=(m, 2))
    gammas = scale * (rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n)))
    return D2State(C=C, gammas=gammas, time=0.0)


def _check_overlaps(rng, n_cases: int = 300, tol: float = 1e-8) -> float:
    """Single-mode coherent overlaps against truncated-Fock inner products.

    Anti-aligned displacements give overlaps near the dense route's own
    cancellation noise (~n_max * eps of the term scale); the comparison
    floors the denominator there, since the reference certifies nothing
    smaller.
    """
    from .coherent import multimode_overlap
    from .fock import coherent_in_fock

    worst = 0.0
    for _ in range(n_cases):
        a, b = (complex(*p) for p in rng.uniform(-3, 3, (2, 2)))
        a *= min(1.0, 3.0 / abs(a))
        b *= min(1.0, 3.0 / abs(b))
        closed = multimode_overlap([a], [b])
        va, vb = coherent_in_fock(a, 60), coherent_in_fock(b, 60)
        dense = np.vdot(va, vb)
        noise = 64 * np.finfo(float).eps * float(np.abs(va) @ np.abs(vb))
        worst = max(worst, abs(closed - dense) / max(abs(dense), noise / tol))
    return worst


def _check_energy(rng, n_cases: int = 30, coupling_sign: float = 1.0) -> float:
    """Closed-form <H> against the dense two-mode evaluation.

    ``coupling_sign`` scales the dense route's coupling only; anything
    but +1 is a deliberate fault injection used to prove the check can
    detect a miswired coupling term.
    """
    bath = BathSpec(omegas=np.array([0.7, 1.3]), gs=np.array([0.25, 0.4]))
    spec = FockSpec(n_max=(20, 20))
    worst = 0.0
    for k in range(n_cases):
        state = _random_d2(rng, 3, 2, 0.6)
        variant = "sigma_x" if k % 2 == 0 else "sigma_z"
        protocol = Protocol(f_o=Modulation.constant(0.8), f_oe=Modulation.constant(1.1),
                            variant=variant, omega0=1.4, t_end=1.0)
        closed = energy_expectation(state, bath, protocol, 0.0)
        h = build_hamiltonian(spec, bath, variant=variant, f_o=0.8,
                              f_oe=coupling_sign * 1.1, omega0=1.4)
        psi = embed_d2_state(state, spec)
        dense = float(np.real(np.vdot(psi, h @ psi) / np.vdot(psi, psi)))
        worst = max(worst, abs(closed - dense) / max(abs(dense), 1e-12))
    return worst


def _check_propagator() -> float:
    """Variational a_z against the exact single-mode propagation.

    Starts from plus_z so a_z carries real dynamics; a parity-even
    start would pin a_z to zero in both routes and certify nothing.
    """
    bath = BathSpec(omegas=np.array([1.0]), gs=np.array([0.25]))
    protocol = Protocol(f_o=Modulation.constant(1.0), f_oe=Modulation.constant(1.0),
                        variant="sigma_x", omega0=1.0, t_end=6.0)
    cfg = IntegratorConfig(metric_reg=1e-8, apoptosis_overlap=0.9995, max_M=5)
    initial = make_product_initial("plus_z", np.zeros(1, dtype=complex), 5)
    t_grid = np.linspace(0.0, 6.0, 31)
    trace, _ = run_trajectory(initial, bath, protocol, cfg, t_grid)

    spec = FockSpec(n_max=(40,))
    h = build_hamiltonian(spec, bath, variant="sigma_x", omega0=1.0)
    psi0 = embed_d2_state(initial, spec)
    states = propagate_exact(psi0, h, t_grid)
    exact = bloch_trace_from_states(states, t_grid, h)
    return float(np.max(np.abs(trace.a_z() - exact.a_z())))


def _check_entropies(rng, n_cases: int = 50) -> float:
    """Spin-eigenvalue and environment-Gram entropy routes must agree."""
    worst = 0.0
    for _ in range(n_cases):
        rec = entropy_record(_random_d2(rng, 4, 3, 0.7))
        worst = max(worst, abs(rec.s_o - rec.s_e))
        worst = max(worst, abs(rec.s_mutual - 2.0 * rec.s_o))
    return worst


def _check_sampler(rng, n_draws: int = 10_000) -> float:
    """mode_weighted sampling moments against the Bose occupation."""
    omegas = np.array([0.2, 0.5, 1.0, 2.0, 4.0])
    bath = BathSpec(omegas=omegas, gs=np.full(5, 0.1))
    thermal = ThermalParams(kT=0.8, law="mode_weighted")
    acc = np.zeros(5)
    for _ in range(n_draws):
        acc += np.abs(sample_initial_bath(bath, thermal, rng)) ** 2
    target = mean_occupation(omegas, 0.8)
    return float(np.max(np.abs(acc / n_draws - target) / target))


def oracle_check(coupling_sign: float = 1.0, seed: int = 909) -> tuple[bool, list[dict]]:
    """Cross-validation suites with measured deviations; True when all pass."""
    rng = np.random.default_rng(seed)
    suites = [
        ("coherent overlaps vs Fock", _check_overlaps(rng), 1e-8),
        ("energy closed form vs dense", _check_energy(rng, coupling_sign=coupling_sign), 1e-8),
        ("propagator vs exact a_z", _check_propagator(), 0.02),
        ("entropy route identity", _check_entropies(rng), 1e-8),
        ("thermal sampler moments", _check_sampler(rng), 0.03),
    ]
    rows = [{"suite": name, "max_deviation": float(dev), "tolerance": tol,
             "pass": bool(dev < tol)} for name, dev, tol in suites]
    return all(r["pass"] for r in rows), rows


# ---------------------------------------------------------------------------
# command plumbing

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--set", dest="overrides", action="append", default=[],
                   metavar="KEY=VALUE", help="dotted config override, e.g. protocol.t_end=30")
    p.add_argument("--out", help="run directory (default: $SPINBATH_OUT_ROOT/<name>)")
    p.add_argument("--threads", "--workers", dest="threads", type=int, default=None,
                   help="worker process count (default: available cores)")
    p.add_argument("--force", action="store_true",
                   help="allow writing into a directory that already holds a run")


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spinbath",
                                 description="Seeded spin-measurement campaigns over a finite boson bath.")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a campaign from a config file, preset or manifest")
    p.add_argument("--config", help="JSON campaign config")
    p.add_argument("--preset", help=f"named preset: {', '.join(sorted(PRESETS))}")
    p.add_argument("--replay", metavar="MANIFEST",
                   help="re-run a manifest and verify the stored summary byte-exactly")
    _add_common(p)
    p.set_defaults(fn=_cmd_run)

    for name, preset_name, blurb in (
            ("fig1", "fig1", "exact single-mode parity runs"),
            ("sweep-phi", "D-desk", "superposition mixing-angle sweep (family D)"),
            ("repeat", "C-desk", "redundant and repeated measurements (family C)")):
        p = sub.add_parser(name, help=blurb)
        p.add_argument("--config", help="JSON campaign config overriding the preset")
        _add_common(p)
        p.set_defaults(fn=_cmd_run, preset=preset_name, replay=None)

    p = sub.add_parser("validate-config", help="resolve and validate a config, print the result")
    p.add_argument("--config", required=True)
    p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("oracle-check", help="run the cross-validation suites")
    p.set_defaults(fn=_cmd_oracle)
    return ap


def _assemble(args) -> tuple[CampaignSpec, dict]:
    """Raw config from preset and/or file, plus manifest provenance."""
    raw: dict = {}
    provenance: dict = {"preset": None, "config_source": None, "deviations": []}
    if getattr(args, "preset", None):
        raw = preset(args.preset)
        provenance["preset"] = args.preset
        provenance["deviations"] = list(PRESET_NOTES.get(args.preset, []))
    if getattr(args, "config", None):
        file_raw = load_config(args.config)
        raw = {**raw, **file_raw} if raw else file_raw
        provenance["config_source"] = args.config
    if not raw:
        raise ConfigError("nothing to run: pass --config FILE or --preset NAME")
    provenance["overrides"] = apply_overrides(raw, args.overrides)
    return resolve(raw), provenance


def _out_dir(args, stem: str) -> Path:
    if args.out:
        return Path(args.out)
    root = os.environ.get("SPINBATH_OUT_ROOT")
    if root:
        return Path(root) / stem
    raise ConfigError("no output directory: pass --out DIR or set SPINBATH_OUT_ROOT")


def _workers(args) -> int:
    if args.threads is not None:
        if args.threads < 1:
            raise ConfigError(f"--threads must be >= 1, got {args.threads}")
        return args.threads
    return os.cpu_count() or 1


def _headline(summary) -> str:
    rep = summary.report
    if summary.family in ("A", "B"):
        return (f"{rep['n_converged']}/{rep['n_runs']} converged; "
                f"classes {rep.get('classes', '')}" if summary.family == "A" else
                f"{rep['n_converged']}/{rep['n_runs']} converged; "
                f"{rep['n_above_threshold']} past |a_z| > {summary.spec.bimodal_threshold}")
    if summary.family == "C":
        rate = rep["agreement_rate"]
        return (f"{rep['n_accepted']} accepted pairs; agreement "
                f"{'n/a' if rate is None else f'{rate:.0%}'}")
    if summary.family == "D":
        return f"sweep rms vs cos(2 phi): {rep['fit']['residual_rms']:.3f}"
    cases = rep["cases"]
    return "; ".join(f"{k}: max|a_z|={v['max_abs_a_z']:.2e}" for k, v in cases.items())


def _cmd_run(args) -> int:
    if getattr(args, "replay", None):
        report = replay_manifest(args.replay, out_dir=args.out,
                                 workers=_workers(args))
        verdict = "bit-exact" if report["match"] else "MISMATCH"
        print(f"replay of {report['replayed_from']}: {verdict}")
        if not report["match"]:
            print(f"stored summary {report['stored_summary']} differs", file=sys.stderr)
            return 3
        return 0
    spec, prov = _assemble(args)
    stem = spec.label or prov["preset"] or (
        Path(prov["config_source"]).stem if prov["config_source"] else f"family-{spec.family}")
    out = _out_dir(args, stem)
    if (out / "manifest.json").exists() and not args.force:
        raise ConfigError(f"{out} already holds a run; pass --force to overwrite")
    workers = _workers(args)
    summary = run_and_write(spec, out, workers=workers, preset=prov["preset"],
                            overrides=prov["overrides"], deviations=prov["deviations"],
                            config_source=prov["config_source"])
    print(f"family {spec.family}: {_headline(summary)}")
    print(f"run directory: {out}")
    return 0


def _cmd_validate(args) -> int:
    raw = load_config(args.config)
    apply_overrides(raw, args.overrides)
    spec = resolve(raw)
    sys.stdout.write(canonical_json(spec.to_dict()))
    return 0


def _cmd_oracle(args) -> int:
    ok, rows = oracle_check()
    width = max(len(r["suite"]) for r in rows)
    for r in rows:
        print(f"{r['suite']:<{width}}  max dev {r['max_deviation']:.3e}  "
              f"tol {r['tolerance']:.0e}  {'pass' if r['pass'] else 'FAIL'}")
    print("all suites pass" if ok else "ORACLE CHECK FAILED")
    return 0 if ok else 4


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=(logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)],
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (NumericalFailure, CampaignError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
