import math

import numpy as np
import pytest

import biot_mortar as bm

CONFIG = {
    "schema_version": 1,
    "domain": {"blocks": [2, 2], "cells": [[4, 4], [6, 6], [6, 6], [4, 4]]},
    "mortar": {"degree": 1, "elements": 2},
    "dt": 1e-3,
    "steps": 2,
    "boundary": {"left": {"pressure": 1.0}, "top": {"mechanics": "traction", "flow": "flux"}},
    "initial_pressure": [1, -1, 0],
}


def test_manufactured_solution_values():
    m = bm.ManufacturedSolution()
    x, y, t = 0.3, 0.7, 0.2
    p = math.exp(t) * (math.sin(math.pi * x) * math.cos(math.pi * y) + 10)
    assert m.eval("p", x, y, t)[0] == pytest.approx(p, rel=1e-14)
    assert len(m.eval("sigma", x, y, t)) == 4
    with pytest.raises(bm.InputError):
        m.eval("nope", x, y, t)


def test_synthetic_fields_are_pinned():
    k, phi = bm.synthetic_fields(42)
    assert k.shape == (220, 60)
    assert bm.field_checksum(k) == 2136838490138161945
    assert bm.field_checksum(phi) == 5985240706633363425
    assert k.min() > 0
    assert 0.01 <= phi.min() and phi.max() <= 0.45
    assert bm.youngs_modulus(0.0) == pytest.approx(100.0)


def test_run_is_deterministic():
    m1, v1 = bm.run(CONFIG)
    m2, v2 = bm.run(CONFIG)
    assert m1 == m2 and v1 == v2
    assert m1["steps"] == 2
    assert len(m1["gmres"]["per_step"]) == 2
    assert v1.startswith("# vtk DataFile")


def test_bad_config_raises():
    bad = dict(CONFIG, colour=1)
    with pytest.raises(bm.InputError, match="unknown key"):
        bm.run(bad)


def test_simulation_interface_operator():
    sim = bm.Simulation(CONFIG)
    n = sim.interface_size
    rng = np.random.default_rng(1)
    for _ in range(5):
        lam = rng.standard_normal(n)
        assert sim.mortar_inner(sim.interface_apply(lam), lam) > 0
    sim.build_msb()
    lam = rng.standard_normal(n)
    direct = sim.interface_apply(lam)
    assert np.linalg.norm(sim.msb_apply(lam) - direct) <= 1e-12 * np.linalg.norm(direct)
    with pytest.raises(bm.InputError):
        sim.interface_apply(np.zeros(n + 1))


def test_simulation_steps():
    sim = bm.Simulation(CONFIG)
    sim.initialize()
    its = [sim.step() for _ in range(2)]
    assert all(i > 0 for i in its)
    assert sim.time == pytest.approx(2e-3)
    counts = sim.solve_counts()
    assert counts["max"] == max(counts["per_subdomain"])
    f = sim.fields()
    assert f["pressure"].shape == (12, 12)
    assert np.all(np.isfinite(f["pressure"]))


def test_convergence_rows():
    seen = []
    rows = bm.run_convergence(levels=2, steps=2, dt=1e-3, progress=seen.append)
    assert len(rows) == 2 and len(seen) == 2
    assert math.isnan(rows[0]["rates"]["u"])
    assert rows[1]["rates"]["u"] == pytest.approx(1.0, abs=0.3)
    assert set(rows[0]["errors"]) == set(bm.tracked_quantities)
