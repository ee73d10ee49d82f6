"""Shared fixtures: session-cached solver traces for the expensive runs."""

import pytest

from eulerblowup.criteria import theorem_context
from eulerblowup.model import Geometry
from eulerblowup.scenarios import certified_suite, reference_scenario
from eulerblowup.solver import SolverConfig, run

GEOMS = {
    "radial3": Geometry.radial(3),
    "radial1": Geometry.radial(1),
    "1d": Geometry.cartesian1d(),
}


@pytest.fixture(scope="session")
def ref_traces():
    """Lazy cache of reference-bump traces keyed by (geometry tag, cells)."""
    cache = {}

    def get(tag: str, cells: int = 4096):
        key = (tag, cells)
        if key not in cache:
            scen = reference_scenario(GEOMS[tag], cells=cells)
            cache[key] = run(scen, SolverConfig(t_end=0.5))
        return cache[key]

    return get


@pytest.fixture(scope="session")
def cert_runs():
    """Lazy cache of certified runs: (case, context, trace) by (name, cells)."""
    cache = {}

    def get(name: str, cells: int = 4096):
        key = (name, cells)
        if key not in cache:
            case = next(c for c in certified_suite(cells=cells) if c.name == name)
            ctx = theorem_context(case.scenario, case.family, case.tau, case.f, case.a)
            rec = ctx.recorder()
            trace = run(case.scenario, SolverConfig(t_end=1.0), recorder=rec)
            cache[key] = (case, ctx, trace)
        return cache[key]

    return get
