"""Shared campaign fixtures sized to run in seconds.

The tiny ensembles use four modes, two clones and a shortened ramp, so
every family finishes fast while still exercising the full pipeline
(sampling, propagation, asymptotes, reports).  Campaign summaries are
session scoped; tests must not mutate them.
"""

import numpy as np
import pytest

from spinbath.bath import SpectralDensityParams, ThermalParams
from spinbath.experiments import CampaignSpec, run_campaign
from spinbath.fock import Fig1Params
from spinbath.propagator import IntegratorConfig
from spinbath.protocol import Modulation, Protocol

TINY_SEED = 501


def tiny_integrator(**kw):
    base = dict(rel_tol=1e-7, abs_tol=1e-9, metric_reg=1e-6, spawn_threshold=0.05,
                apoptosis_overlap=0.9995, max_M=2, adapt_every=10)
    base.update(kw)
    return IntegratorConfig(**base)


def tiny_protocol(constant=False):
    if constant:
        return Protocol(f_o=Modulation.constant(1.0), f_oe=Modulation.constant(1.0),
                        variant="sigma_x", omega0=-0.5, t_end=12.0)
    return Protocol(
        f_o=Modulation("sigmoid_off", {"amplitude": 1.0, "t_mid": 9.0, "width": 1.0}),
        f_oe=Modulation("table", {"ts": [0.0, 1.0, 11.0, 13.0, 14.0, 15.0],
                                  "values": [0.0, 0.0, 2.582, 2.582, 0.0, 0.0]}),
        variant="sigma_x", omega0=-0.5, t_end=16.0)


def tiny_fig1():
    return Fig1Params(omega0=4.0, g1=2.0, omega1=1.0, n_max=40, t_end=6.0,
                      n_samples=61, n_terms=4)


def tiny_spec(family, **kw):
    if family == "fig1":
        base = dict(family="fig1", fig1=tiny_fig1())
        base.update(kw)
        return CampaignSpec(**base)
    base = dict(
        family=family,
        n_runs=3,
        base_seed=TINY_SEED,
        density=SpectralDensityParams(alpha=0.3, s=0.25, omega_c=1.0),
        n_modes=4,
        omega_max=1.5,
        thermal=ThermalParams(kT=0.3),
        multiplicity=2,
        displacement=0.3,
        protocol=tiny_protocol(constant=(family == "A")),
        integrator=tiny_integrator(),
        n_samples=41,
        histogram_bins=8,
    )
    if family == "D":
        # seeds 501/502 tip to opposite poles of the loose 0.15 threshold
        base.update(n_runs=4, bimodal_threshold=0.15,
                    phis=(0.0, np.pi / 4, np.pi / 2))
    base.update(kw)
    return CampaignSpec(**base)


@pytest.fixture(scope="session")
def spec_factory():
    return tiny_spec


@pytest.fixture(scope="session")
def summary_a():
    return run_campaign(tiny_spec("A"))


@pytest.fixture(scope="session")
def summary_b():
    return run_campaign(tiny_spec("B"))


@pytest.fixture(scope="session")
def summary_c():
    return run_campaign(tiny_spec("C"))


@pytest.fixture(scope="session")
def summary_d():
    return run_campaign(tiny_spec("D"))


@pytest.fixture(scope="session")
def summary_fig1():
    return run_campaign(tiny_spec("fig1"))
