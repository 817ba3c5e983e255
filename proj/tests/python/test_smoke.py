import cmath
import math
import random

import pytest

import jspec


def free_m(z):
    return (-z + cmath.sqrt(z - 2) * cmath.sqrt(z + 2)) / 2


def test_free_m_functions():
    z = complex(0.3, 0.5)
    assert abs(jspec.m_plus({"kind": "free"}, 0, z) - free_m(z)) < 1e-10
    # the minus function at the cut includes site 0
    assert abs(jspec.m_minus({"kind": "free"}, 0, z) - (free_m(z) + z)) < 1e-10
    g = jspec.green_diag({"kind": "free"}, 0, 1j)
    assert abs(g - 1j / math.sqrt(5)) < 1e-10


def test_model_object():
    m = jspec.Model({"kind": "periodic", "entries": [[1, 0.5], [2, -0.5]]})
    assert m.coeff(1) == (2.0, -0.5)
    assert "periodic" in m.describe()


def test_scattering_single_site():
    model = {"kind": "perturbed", "base": {"kind": "free"}, "delta": [[0, 0, 1]]}
    T, R, defect = jspec.scattering(model, math.pi / 2)
    assert abs(R - 1 / (2j - 1)) < 1e-14
    assert abs(abs(T) ** 2 + abs(R) ** 2 - 1) < 1e-14
    assert defect < 1e-14


def test_scattering_free_is_exact():
    T, R, _ = jspec.scattering({"kind": "free"}, 1.0)
    assert T == 1 and R == 0


def test_inverse_semicircle():
    # Gauss-Chebyshev (2nd kind) nodes for the semicircle density
    n = 200
    nodes = [2 * math.cos(math.pi * k / (n + 1)) for k in range(1, n + 1)]
    weights = [2 / (n + 1) * math.sin(math.pi * k / (n + 1)) ** 2 for k in range(1, n + 1)]
    a, b = jspec.coefficients_from_measure(nodes, weights, 30)
    assert max(abs(x - 1) for x in a) < 1e-10
    assert max(abs(x) for x in b) < 1e-10


def test_torus_point_period_two():
    m = jspec.torus_point([(-2, -1), (1, 2)], [(0.0, 1)])
    a0, b0 = m.coeff(0)
    a1, _ = m.coeff(1)
    assert abs(a0 - 1.5) < 1e-10 and abs(a1 - 0.5) < 1e-10 and abs(b0) < 1e-10


def test_run_experiment():
    assert "oracle" in jspec.experiment_names()
    out = jspec.run("scattering", {"points": 40, "random_trials": 10}, seed=3)
    assert out["experiment"] == "scattering"
    assert out["summary"]["random_max_unitarity_defect"] < 1e-10
    assert len(out["rows"][0]) == len(out["columns"])


def test_errors_carry_kind():
    with pytest.raises(jspec.Error) as info:
        jspec.run("bp", {"nonsense": 1})
    assert info.value.kind == "config-invalid"
    with pytest.raises(jspec.Error) as info:
        jspec.scattering({"kind": "free"}, 0.0)
    assert info.value.kind == "degenerate-angle"
    with pytest.raises(ValueError):
        jspec.m_plus({"kind": "free"}, 0, complex(0.1, -1))


def test_random_unitarity():
    rng = random.Random(11)
    for _ in range(50):
        entries = [[rng.uniform(0.5, 1.5), rng.uniform(-1, 1)] for _ in range(rng.randint(1, 20))]
        model = {"kind": "window", "offset": rng.randint(-10, 10), "entries": entries, "fill": {"kind": "free"}}
        _, _, defect = jspec.scattering(model, rng.uniform(0.01, 3.13))
        assert defect < 1e-10
