"""Seeded measurement campaigns over trajectory ensembles.

Four experiment families map onto the measurement scenarios this model
supports:

A   constant modulations: preparation and measurement act together over
    the whole run; converged runs populate the outcome histogram.
B   a timed protocol: self-energy on for preparation, then a smooth
    coupling window for the measurement proper, then free evolution;
    every run enters the histogram.
C   consistency checks: the commuting variant conserves a_z exactly
    (redundant measurement), and a second coupling window with the
    self-energy kept off reproduces the first outcome on a freshly
    sampled apparatus (repeated measurement).
D   superpositions of two total initial states whose unsuperposed runs
    localize to opposite poles, swept over the mixing angle phi.

The pseudo-family fig1 delegates to the exact single-mode parity runs.

Every stochastic choice draws from a per-run substream seeded as
base_seed + run index, so a campaign is a pure function of its spec and
reruns reproduce every output byte.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field, replace

import numpy as np

from .bath import BathSpec, SpectralDensityParams, ThermalParams, discretize, sample_initial_bath
from .fock import FIG1_CASES, Fig1Params, fig1_experiment
from .observables import (
    AsymptoteRecord,
    asymptote_density,
    extract_asymptote,
    histogram_asymptotes,
    phi_sweep_fit,
)
from .propagator import IntegratorConfig, run_trajectory
from .protocol import Modulation, Protocol
from .state import (
    SPIN_AMPLITUDES,
    make_product_from_amplitudes,
    make_product_initial,
    pure_spin_from_bloch,
    superpose,
)
from .trace import BlochTrace

logger = logging.getLogger(__name__)

FAMILIES = ("A", "B", "C", "D", "fig1")

# Mixing angles n*pi/12 for n = 0..6, covering phi in [0, pi/2].
DEFAULT_PHIS = tuple(n * np.pi / 12.0 for n in range(7))

SUMMARY_SCHEMA = "spinbath-summary/1"

__all__ = [
    "CampaignError",
    "CampaignSpec",
    "DEFAULT_PHIS",
    "EnsembleSummary",
    "FAMILIES",
    "RunRecord",
    "SUMMARY_SCHEMA",
    "run_campaign",
    "run_family_A",
    "run_family_B",
    "run_family_C",
    "run_family_D",
    "run_fig1",
]


class CampaignError(RuntimeError):
    """A campaign failed its own physical preconditions (not a config error)."""


@dataclass(frozen=True)
class CampaignSpec:
    """Fully resolved description of one campaign.

    The spec determines every output: run i draws its bath sample from
    a fresh generator seeded with ``base_seed + i`` (family C's second
    measurements and redundant checks use documented offsets past the
    first-measurement block).
    """

    family: str
    n_runs: int = 20
    base_seed: int = 2024
    density: SpectralDensityParams | None = None
    n_modes: int = 16
    omega_max: float | None = None
    thermal: ThermalParams | None = None
    multiplicity: int = 4
    spin: str = "plus_x"
    displacement: float = 0.3
    protocol: Protocol | None = None
    second_protocol: Protocol | None = None
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    n_samples: int = 201
    window_frac: float = 0.2
    convergence_std: float = 0.1
    bimodal_threshold: float = 0.7
    histogram_bins: int = 20
    phis: tuple[float, ...] = ()
    fig1: Fig1Params | None = None
    label: str = ""

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if self.n_runs < 1:
            raise ValueError(f"n_runs must be >= 1, got {self.n_runs}")
        if self.family == "fig1":
            for name in ("density", "thermal", "protocol", "second_protocol"):
                if getattr(self, name) is not None:
                    raise ValueError(f"family fig1 takes no {name} (exact single-mode runs)")
            return
        for name in ("density", "thermal", "protocol"):
            if getattr(self, name) is None:
                raise ValueError(f"family {self.family} requires {name}")
        if self.fig1 is not None:
            raise ValueError(f"fig1 parameters apply only to family fig1, not {self.family}")
        if self.n_modes < 1:
            raise ValueError(f"n_modes must be >= 1, got {self.n_modes}")
        if self.multiplicity < 1:
            raise ValueError(f"multiplicity must be >= 1, got {self.multiplicity}")
        if self.spin not in SPIN_AMPLITUDES:
            raise ValueError(f"unknown spin preparation {self.spin!r}")
        if self.displacement <= 0:
            raise ValueError(f"displacement must be > 0, got {self.displacement}")
        if self.n_samples < 2:
            raise ValueError(f"n_samples must be >= 2, got {self.n_samples}")
        if not 0 < self.window_frac <= 1:
            raise ValueError(f"window_frac must lie in (0, 1], got {self.window_frac}")
        if self.convergence_std <= 0:
            raise ValueError(f"convergence_std must be > 0, got {self.convergence_std}")
        if not 0 < self.bimodal_threshold < 1:
            raise ValueError(f"bimodal_threshold must lie in (0, 1), got {self.bimodal_threshold}")
        if self.histogram_bins < 1:
            raise ValueError(f"histogram_bins must be >= 1, got {self.histogram_bins}")
        phis = tuple(float(p) for p in self.phis)
        if any(not np.isfinite(p) for p in phis):
            raise ValueError("phis must be finite")
        object.__setattr__(self, "phis", phis)
        if self.phis and self.family != "D":
            raise ValueError(f"phis apply only to family D, not {self.family}")
        if self.second_protocol is not None and self.family != "C":
            raise ValueError(f"second_protocol applies only to family C, not {self.family}")

    def seed(self, index: int) -> int:
        return self.base_seed + index

    def bath(self) -> BathSpec:
        return discretize(self.density, self.n_modes, self.omega_max)

    def t_grid(self, protocol: Protocol | None = None) -> np.ndarray:
        protocol = protocol or self.protocol
        return np.linspace(0.0, protocol.t_end, self.n_samples)

    def to_dict(self) -> dict:
        d: dict = {"family": self.family, "label": self.label}
        if self.family == "fig1":
            p = self.fig1 or Fig1Params()
            d["fig1"] = {
                "omega0": p.omega0, "g1": p.g1, "omega1": p.omega1,
                "n_max": p.n_max, "t_end": p.t_end, "n_samples": p.n_samples,
                "n_terms": p.n_terms,
            }
            return d
        d.update({
            "n_runs": self.n_runs,
            "base_seed": self.base_seed,
            "bath": {**self.density.to_dict(), "n_modes": self.n_modes,
                     "omega_max": self.omega_max},
            "thermal": self.thermal.to_dict(),
            "multiplicity": self.multiplicity,
            "spin": self.spin,
            "displacement": self.displacement,
            "protocol": self.protocol.to_dict(),
            "integrator": self.integrator.to_dict(),
            "n_samples": self.n_samples,
            "asymptote": {"window_frac": self.window_frac,
                          "convergence_std": self.convergence_std},
            "bimodal_threshold": self.bimodal_threshold,
            "histogram_bins": self.histogram_bins,
        })
        if self.family == "D":
            d["phis"] = list(self.phis or DEFAULT_PHIS)
        if self.second_protocol is not None:
            d["second_protocol"] = self.second_protocol.to_dict()
        return d


@dataclass
class RunRecord:
    """One trajectory with its per-run diagnostics.

    ``kind`` tags the trajectory's role: run (A/B), first/second and
    redundant (C), pilot/sweep (D), fig1.  Diagnostics are derived once
    here so summaries never reopen traces.
    """

    index: int
    kind: str
    seed: int | None
    trace: BlochTrace
    events: list
    asymptote: AsymptoteRecord
    bath0: np.ndarray | None = None
    phi: float | None = None
    case: str | None = None
    a_abs2_inf: float = 0.0
    max_norm_err: float = 0.0
    energy_drift: float | None = None
    max_entropy_gap: float | None = None
    final_s_o: float = 0.0
    max_s_o: float = 0.0
    m_max: int = 0
    n_events: int = 0

    def row(self) -> dict:
        d = {
            "index": int(self.index),
            "kind": self.kind,
            "seed": None if self.seed is None else int(self.seed),
            **self.asymptote.to_dict(),
            "a_abs2_inf": float(self.a_abs2_inf),
            "max_norm_err": float(self.max_norm_err),
            "energy_drift": self.energy_drift,
            "max_entropy_gap": self.max_entropy_gap,
            "final_s_o": float(self.final_s_o),
            "max_s_o": float(self.max_s_o),
            "m_max": int(self.m_max),
            "n_events": int(self.n_events),
        }
        if self.phi is not None:
            d["phi"] = float(self.phi)
        if self.case is not None:
            d["case"] = self.case
        return d


@dataclass
class EnsembleSummary:
    """Aggregated campaign result; ``to_dict`` is the summary file's content."""

    family: str
    spec: CampaignSpec
    records: list
    histogram: dict | None
    report: dict

    def to_dict(self) -> dict:
        return {
            "schema": SUMMARY_SCHEMA,
            "family": self.family,
            "spec": self.spec.to_dict(),
            "runs": [r.row() for r in self.records],
            "histogram": self.histogram,
            "report": self.report,
        }


def _profile_off_time(m: Modulation) -> float | None:
    # a constant-zero profile is off from the start
    if m.kind == "constant":
        return 0.0 if float(m.params.get("c", 1.0)) == 0.0 else None
    return m.switch_off_time()


def protocol_switch_off(protocol: Protocol) -> float | None:
    """Time after which both profiles have decayed; None if either stays on."""
    offs = [_profile_off_time(protocol.f_o), _profile_off_time(protocol.f_oe)]
    if any(o is None for o in offs):
        return None
    return float(max(offs))


def _asymptote_start(protocol: Protocol | None) -> float | None:
    if protocol is None:
        return None
    off = protocol_switch_off(protocol)
    if off is not None and 0.0 < off < protocol.t_end:
        return off
    return None


def _make_record(spec: CampaignSpec, protocol: Protocol | None, index: int, kind: str,
                 seed: int | None, trace: BlochTrace, events: list, *,
                 bath0=None, phi=None, case=None) -> RunRecord:
    asym = extract_asymptote(trace, window_frac=spec.window_frac,
                             convergence_std=spec.convergence_std,
                             t_start=_asymptote_start(protocol))
    t_lo, t_hi = asym.window
    mask = (trace.t >= t_lo) & (trace.t <= t_hi)
    a_abs2 = float(np.mean(np.sum(np.asarray(trace.a)[mask] ** 2, axis=1)))
    constant = protocol is None or (protocol.f_o.kind == "constant"
                                    and protocol.f_oe.kind == "constant")
    drift = None
    if constant:
        e0 = float(trace.energy[0])
        drift = float(np.max(np.abs(trace.energy - e0)) / max(abs(e0), 1e-12))
    gap = None
    if trace.s_e is not None:
        gap = float(np.max(np.abs(np.asarray(trace.s_e) - trace.s_o)))
    return RunRecord(
        index=index, kind=kind, seed=seed, trace=trace, events=list(events),
        asymptote=asym, bath0=bath0, phi=phi, case=case,
        a_abs2_inf=a_abs2,
        max_norm_err=float(np.max(np.abs(trace.norm - 1.0))),
        energy_drift=drift,
        max_entropy_gap=gap,
        final_s_o=float(trace.s_o[-1]),
        max_s_o=float(np.max(trace.s_o)),
        m_max=int(np.max(trace.m)),
        n_events=len(events),
    )


def _sampled_run(spec: CampaignSpec, bath: BathSpec, protocol: Protocol, index: int,
                 kind: str = "run", seed_offset: int = 0, spin: str | None = None,
                 case: str | None = None) -> RunRecord:
    """One trajectory from a freshly seeded bath sample."""
    seed = spec.base_seed + seed_offset + index
    rng = np.random.default_rng(seed)
    bath0 = sample_initial_bath(bath, spec.thermal, rng)
    initial = make_product_initial(spin or spec.spin, bath0, spec.multiplicity,
                                   spec.displacement)
    trace, events = run_trajectory(initial, bath, protocol, spec.integrator,
                                   spec.t_grid(protocol))
    return _make_record(spec, protocol, index, kind, seed, trace, events,
                        bath0=bath0, case=case)


def _second_run(spec: CampaignSpec, bath: BathSpec, protocol: Protocol, index: int,
                a_end: np.ndarray) -> RunRecord:
    """Repeat measurement: purified entrance spin, freshly sampled apparatus."""
    seed = spec.base_seed + spec.n_runs + index
    rng = np.random.default_rng(seed)
    bath0 = sample_initial_bath(bath, spec.thermal, rng)
    cp, cm = pure_spin_from_bloch(np.asarray(a_end) / np.linalg.norm(a_end))
    initial = make_product_from_amplitudes(cp, cm, bath0, spec.multiplicity,
                                           spec.displacement)
    trace, events = run_trajectory(initial, bath, protocol, spec.integrator,
                                   spec.t_grid(protocol))
    return _make_record(spec, protocol, index, "second", seed, trace, events,
                        bath0=bath0)


def _sweep_run(spec: CampaignSpec, bath: BathSpec, cfg: IntegratorConfig, index: int,
               phi: float, initial) -> RunRecord:
    trace, events = run_trajectory(initial, bath, spec.protocol, cfg,
                                   spec.t_grid())
    return _make_record(spec, spec.protocol, index, "sweep", None, trace, events,
                        phi=phi)


def _map_runs(fn, tasks, workers: int) -> list:
    """Order-preserving map over independent tasks.

    Results land in slots keyed by task position, so the merge commutes
    and the output is identical for any worker count or completion
    order.
    """
    if workers <= 1:
        return [fn(*t) for t in tasks]
    out = [None] * len(tasks)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = {pool.submit(fn, *t): k for k, t in enumerate(tasks)}
        for fut in as_completed(futures):
            out[futures[fut]] = fut.result()
    return out


def _density_overlay(eps: float = 1e-3, n: int = 201) -> dict:
    a = np.linspace(-1.0, 1.0, n)
    return {"a": a.tolist(), "p": asymptote_density(a, eps).tolist(), "eps": eps}


def _histogram_block(spec: CampaignSpec, records, include_nonconverged: bool) -> dict | None:
    try:
        counts, edges = histogram_asymptotes([r.asymptote for r in records],
                                             bins=spec.histogram_bins,
                                             include_nonconverged=include_nonconverged)
    except ValueError:
        logger.warning("family %s: no converged runs, histogram omitted", spec.family)
        return None
    return {
        "counts": [int(c) for c in counts],
        "edges": [float(e) for e in edges],
        "included": "all" if include_nonconverged else "converged",
        "n_included": int(counts.sum()),
        "threshold": spec.bimodal_threshold,
        "density_overlay": _density_overlay(),
    }


def _classify(records, threshold: float) -> dict:
    plus = sum(1 for r in records
               if r.asymptote.converged and r.asymptote.a_z_inf > threshold)
    minus = sum(1 for r in records
                if r.asymptote.converged and r.asymptote.a_z_inf < -threshold)
    return {
        "localize_plus": int(plus),
        "localize_minus": int(minus),
        "fluctuate": int(len(records) - plus - minus),
    }


def _require_family(spec: CampaignSpec, family: str) -> None:
    if spec.family != family:
        raise ValueError(f"spec.family is {spec.family!r}, expected {family!r}")


def run_family_A(spec: CampaignSpec, workers: int = 1) -> EnsembleSummary:
    """Constant-modulation ensemble; histogram counts converged runs only."""
    _require_family(spec, "A")
    bath = spec.bath()
    tasks = [(spec, bath, spec.protocol, i) for i in range(spec.n_runs)]
    records = _map_runs(_sampled_run, tasks, workers)
    n_conv = sum(1 for r in records if r.asymptote.converged)
    report = {
        "n_runs": spec.n_runs,
        "n_converged": int(n_conv),
        "classes": _classify(records, spec.bimodal_threshold),
    }
    return EnsembleSummary(family="A", spec=spec, records=records,
                           histogram=_histogram_block(spec, records, False),
                           report=report)


def run_family_B(spec: CampaignSpec, workers: int = 1) -> EnsembleSummary:
    """Timed-protocol ensemble; no run is discarded from the histogram."""
    _require_family(spec, "B")
    bath = spec.bath()
    tasks = [(spec, bath, spec.protocol, i) for i in range(spec.n_runs)]
    records = _map_runs(_sampled_run, tasks, workers)
    thr = spec.bimodal_threshold
    localized = [r for r in records if abs(r.asymptote.a_z_inf) > thr]
    settled = [r for r in localized if r.final_s_o < 0.05]
    report = {
        "n_runs": spec.n_runs,
        "n_converged": int(sum(1 for r in records if r.asymptote.converged)),
        "n_above_threshold": int(len(localized)),
        "n_at_or_below_threshold": int(spec.n_runs - len(localized)),
        "fraction_above_threshold": float(len(localized) / spec.n_runs),
        "switch_off_time": protocol_switch_off(spec.protocol),
        "entropy": {
            "n_localized": int(len(localized)),
            "n_localized_settled": int(len(settled)),
            "settle_level": 0.05,
            "max_final_s_o_localized": (
                float(max(r.final_s_o for r in localized)) if localized else None),
        },
    }
    return EnsembleSummary(family="B", spec=spec, records=records,
                           histogram=_histogram_block(spec, records, True),
                           report=report)


def default_second_protocol(protocol: Protocol) -> Protocol:
    """Repeat-measurement window: same coupling profile, self-energy kept off."""
    return replace(protocol, f_o=Modulation.constant(0.0))


def run_family_C(spec: CampaignSpec, workers: int = 1) -> EnsembleSummary:
    """Redundant conservation check plus repeated-measurement agreement.

    Seed layout: first measurements use base_seed + i, the paired
    second measurements base_seed + n_runs + i, and the two redundant
    runs base_seed + 2 n_runs + {0, 1}.
    """
    _require_family(spec, "C")
    bath = spec.bath()

    # redundant sub-case: the commuting variant freezes each pole
    zprot = replace(spec.protocol, variant="sigma_z")
    red_tasks = [(spec, bath, zprot, j, "redundant", 2 * spec.n_runs, s, s)
                 for j, s in enumerate(("plus_z", "minus_z"))]
    redundant = _map_runs(_sampled_run, red_tasks, workers)
    red_report = {}
    for rec in redundant:
        az = rec.trace.a_z()
        red_report[rec.case] = {
            "a_z_start": float(az[0]),
            "max_drift": float(np.max(np.abs(az - az[0]))),
        }

    first_tasks = [(spec, bath, spec.protocol, i, "first") for i in range(spec.n_runs)]
    firsts = _map_runs(_sampled_run, first_tasks, workers)

    second_protocol = spec.second_protocol or default_second_protocol(spec.protocol)
    accepted, excluded = [], []
    for rec in firsts:
        if not rec.asymptote.converged:
            excluded.append({"index": rec.index, "reason": "first run not converged"})
            continue
        a_end = np.asarray(rec.trace.a)[-1]
        if np.linalg.norm(a_end) < 1e-6:
            excluded.append({"index": rec.index, "reason": "Bloch vector too short to purify"})
            continue
        accepted.append((rec, a_end))
    second_tasks = [(spec, bath, second_protocol, rec.index, a_end)
                    for rec, a_end in accepted]
    seconds = _map_runs(_second_run, second_tasks, workers)

    pairs = []
    n_agree = 0
    for (first, _), second in zip(accepted, seconds):
        agree = bool(np.sign(second.asymptote.a_z_inf) == np.sign(first.asymptote.a_z_inf))
        n_agree += agree
        pairs.append({
            "index": int(first.index),
            "seed_first": int(first.seed),
            "seed_second": int(second.seed),
            "a_z_first": float(first.asymptote.a_z_inf),
            "a_z_second": float(second.asymptote.a_z_inf),
            "agree": agree,
            "second_converged": bool(second.asymptote.converged),
        })
    report = {
        "n_runs": spec.n_runs,
        "redundant": red_report,
        "n_accepted": int(len(pairs)),
        "excluded": excluded,
        "pairs": pairs,
        "n_agree": int(n_agree),
        "agreement_rate": (float(n_agree / len(pairs)) if pairs else None),
        "second_protocol": second_protocol.to_dict(),
    }
    records = redundant + firsts + seconds
    return EnsembleSummary(family="C", spec=spec, records=records,
                           histogram=_histogram_block(spec, firsts, True),
                           report=report)


def run_family_D(spec: CampaignSpec, workers: int = 1) -> EnsembleSummary:
    """Mixing-angle sweep between two opposite-outcome pilot runs.

    All n_runs pilots execute (the outcome of the search must not
    depend on worker scheduling); the lowest-index converged run past
    the threshold on each side seeds the sweep endpoints.
    """
    _require_family(spec, "D")
    bath = spec.bath()
    pilot_tasks = [(spec, bath, spec.protocol, i, "pilot") for i in range(spec.n_runs)]
    pilots = _map_runs(_sampled_run, pilot_tasks, workers)

    thr = spec.bimodal_threshold
    plus = next((r for r in pilots
                 if r.asymptote.converged and r.asymptote.a_z_inf > thr), None)
    minus = next((r for r in pilots
                  if r.asymptote.converged and r.asymptote.a_z_inf < -thr), None)
    if plus is None or minus is None:
        missing = "+1" if plus is None else "-1"
        raise CampaignError(
            f"pilot search found no converged outcome near {missing} within "
            f"{spec.n_runs} runs (|a_z| > {thr}); widen the budget or protocol")

    init_plus = make_product_initial(spec.spin, plus.bath0, spec.multiplicity,
                                     spec.displacement)
    init_minus = make_product_initial(spec.spin, minus.bath0, spec.multiplicity,
                                      spec.displacement)
    phis = spec.phis or DEFAULT_PHIS
    sweep_tasks = []
    for k, phi in enumerate(phis):
        mixed = superpose(init_plus, init_minus, phi)
        cfg = spec.integrator
        if cfg.max_M is not None and cfg.max_M < mixed.multiplicity:
            # interior angles stack both pilot blocks and start above the
            # single-run cap; endpoints keep the pilot configuration so
            # their trajectories reproduce the pilots exactly
            cfg = replace(cfg, max_M=mixed.multiplicity)
        sweep_tasks.append((spec, bath, cfg, k, phi, mixed))
    sweeps = _map_runs(_sweep_run, sweep_tasks, workers)

    fit = phi_sweep_fit([(r.phi, r.asymptote.a_z_inf) for r in sweeps])
    report = {
        "n_runs": spec.n_runs,
        "pilot": {
            "plus": {"index": int(plus.index), "seed": int(plus.seed),
                     "a_z_inf": float(plus.asymptote.a_z_inf)},
            "minus": {"index": int(minus.index), "seed": int(minus.seed),
                      "a_z_inf": float(minus.asymptote.a_z_inf)},
            "threshold": thr,
            "budget": spec.n_runs,
        },
        "sweep": [{"phi": float(r.phi),
                   "a_z_inf": float(r.asymptote.a_z_inf),
                   "a_abs2_inf": float(r.a_abs2_inf),
                   "window_std": float(r.asymptote.window_std),
                   "converged": bool(r.asymptote.converged)} for r in sweeps],
        "fit": fit.to_dict(),
        "endpoints": {
            "phi_first_vs_pilot_plus": float(sweeps[0].asymptote.a_z_inf
                                             - plus.asymptote.a_z_inf),
            "phi_last_vs_pilot_minus": float(sweeps[-1].asymptote.a_z_inf
                                             - minus.asymptote.a_z_inf),
            "tolerance": spec.convergence_std,
        },
    }
    records = pilots + sweeps
    return EnsembleSummary(family="D", spec=spec, records=records,
                           histogram=_histogram_block(spec, pilots, True),
                           report=report)


def run_fig1(spec: CampaignSpec, workers: int = 1) -> EnsembleSummary:
    """Exact single-mode parity runs (cases of definite and mixed parity)."""
    _require_family(spec, "fig1")
    params = spec.fig1 or Fig1Params()
    records = []
    cases = {}
    for k, case in enumerate(FIG1_CASES):
        trace = fig1_experiment(case, params)
        rec = _make_record(spec, None, k, "fig1", None, trace, [], case=case)
        records.append(rec)
        cases[case] = {
            "max_abs_a_z": float(np.max(np.abs(trace.a_z()))),
            "max_norm_err": float(rec.max_norm_err),
            "energy_drift": rec.energy_drift,
        }
    return EnsembleSummary(family="fig1", spec=spec, records=records,
                           histogram=None, report={"cases": cases})


_RUNNERS = {
    "A": run_family_A,
    "B": run_family_B,
    "C": run_family_C,
    "D": run_family_D,
    "fig1": run_fig1,
}


def run_campaign(spec: CampaignSpec, workers: int = 1) -> EnsembleSummary:
    """Dispatch to the family runner; workers > 1 fans runs out to processes."""
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    return _RUNNERS[spec.family](spec, workers=workers)
