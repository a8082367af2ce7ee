"""Problem construction, sampling, and config parsing."""

import dataclasses

import numpy as np
import pytest

from beambranch import Grid, build_problem, load_config, parse_config, sample_function, sample_kernel
from beambranch.errors import (
    ArityMismatch,
    InvalidExponent,
    MalformedConfig,
    ModelAssumptionWarning,
    NegativeData,
)
from conftest import make_problem


def test_grid_layout():
    g = Grid(199)
    assert g.h == 1.0 / 200
    assert g.nodes[0] == g.h
    assert g.nodes[-1] == 199 * g.h
    assert np.all(np.diff(g.nodes) > 0)
    assert 0.0 < g.nodes[0] and g.nodes[-1] < 1.0


def test_grid_rejects_tiny_n():
    with pytest.raises(MalformedConfig):
        Grid(2)


def test_constant_benchmark_sampling():
    spec = make_problem()
    assert np.all(spec.p.samples == 0.0)
    assert np.all(spec.a.samples == 100.0)
    assert np.all(spec.f.samples == 1.0)
    assert spec.grid.h == 1.0 / 200


def test_cosine_sampling_exact_values():
    # 1 + 0.5 cos(2 pi x) at x = 1/4, 1/2, 3/4
    spec = make_problem(p="cosine:1,0.5,2", n=3)
    assert np.allclose(spec.p.samples, [1.0, 0.5, 1.0], rtol=0, atol=1e-15)


def test_affine_sampling():
    g = Grid(3)
    vals = sample_function("affine", [2.0, -1.0], g)
    assert np.allclose(vals, [1.75, 1.5, 1.25], rtol=0, atol=0)


def test_constant_sampling():
    g = Grid(4)
    assert np.array_equal(sample_function("constant", [5.0], g), [5.0] * 4)


def test_tabulated_passthrough_and_arity():
    g = Grid(4)
    vals = sample_function("tabulated", [1.0, 2.0, 3.0, 4.0], g)
    assert np.array_equal(vals, [1.0, 2.0, 3.0, 4.0])
    with pytest.raises(ArityMismatch):
        sample_function("tabulated", [1.0, 2.0, 3.0], g)
    with pytest.raises(ArityMismatch):
        sample_kernel("tabulated", list(range(15)), g)


def test_negative_weight_rejected():
    with pytest.raises(NegativeData):
        make_problem(a="constant:-1")
    with pytest.raises(NegativeData):
        make_problem(a="affine:0.1,-1")  # dips negative on (0,1)


def test_negative_kernel_rejected():
    with pytest.raises(NegativeData):
        make_problem(f="constant:-0.5")


def test_exponent_validation():
    with pytest.raises(InvalidExponent):
        make_problem(rho=0.5)
    with pytest.raises(InvalidExponent):
        make_problem(sigma=0.0)
    with pytest.raises(InvalidExponent):
        make_problem(sigma=-2)


def test_rho_one_emits_assumption_warning():
    cfg = {"n": "9", "rho": "1", "sigma": "2",
           "p": "constant:0", "a": "constant:100", "f": "constant:1"}
    with pytest.warns(ModelAssumptionWarning):
        build_problem(cfg)


def test_unknown_kind_and_bad_arity():
    with pytest.raises(MalformedConfig):
        make_problem(p="parabola:1,2")
    with pytest.raises(MalformedConfig):
        make_problem(p="cosine:1,2")  # cosine takes 3 parameters
    with pytest.raises(MalformedConfig):
        make_problem(f="expdecay:1")


def test_missing_keys():
    with pytest.raises(MalformedConfig):
        build_problem({"n": "9", "rho": "2", "sigma": "1", "p": "constant:0", "a": "constant:1"})
    with pytest.raises(MalformedConfig):
        build_problem({"rho": "2", "sigma": "1", "p": "constant:0",
                       "a": "constant:1", "f": "constant:1"})


def test_refinement_reproduces_coarse_samples_bitwise():
    # halving h maps coarse node j to fine node 2j; pointwise sampling must agree exactly
    coarse = make_problem(p="cosine:1,0.5,2", a="affine:3,0.25", n=9, rho=2)
    fine = make_problem(p="cosine:1,0.5,2", a="affine:3,0.25", n=19, rho=2)
    assert np.array_equal(coarse.grid.nodes, fine.grid.nodes[1::2])
    assert np.array_equal(coarse.p.samples, fine.p.samples[1::2])
    assert np.array_equal(coarse.a.samples, fine.a.samples[1::2])


@pytest.mark.parametrize("fdesc", ["expdecay:1.0,2.0", "gaussian:0.7,40"])
def test_kernel_symmetry(fdesc):
    spec = make_problem(f=fdesc, n=31)
    F = spec.f.samples
    assert np.array_equal(F, F.T)
    assert np.min(F) >= 0.0


def test_spec_is_immutable():
    spec = make_problem(n=9)
    with pytest.raises(dataclasses.FrozenInstanceError):
        spec.rho = 3.0
    with pytest.raises(ValueError):
        spec.a.samples[0] = -1.0
    with pytest.raises(ValueError):
        spec.f.samples[0, 0] = -1.0
    with pytest.raises(ValueError):
        spec.grid.nodes[0] = 0.5


def test_parse_config_text():
    cfg = parse_config("""
# a comment
n = 9
rho = 2
sigma = 1
p = constant:0
a = constant:100
f = expdecay:1.0,2.0
""")
    assert cfg["n"] == "9"
    assert cfg["f"] == "expdecay:1.0,2.0"
    with pytest.raises(MalformedConfig):
        parse_config("just some words\n")


def test_load_config_tabulated_reference(tmp_path):
    (tmp_path / "avals.txt").write_text(" ".join(["2.5"] * 9) + "\n")
    (tmp_path / "prob.cfg").write_text(
        "n = 9\nrho = 2\nsigma = 1\np = constant:0\n"
        "a = tabulated:@avals.txt\nf = constant:1\n"
    )
    cfg = load_config(tmp_path / "prob.cfg")
    spec = build_problem(cfg)
    assert np.all(spec.a.samples == 2.5)
    assert spec.a.kind == "tabulated"


def test_load_config_missing_data_file(tmp_path):
    (tmp_path / "prob.cfg").write_text(
        "n = 9\nrho = 2\nsigma = 1\np = constant:0\n"
        "a = tabulated:@nope.txt\nf = constant:1\n"
    )
    with pytest.raises(MalformedConfig):
        load_config(tmp_path / "prob.cfg")
