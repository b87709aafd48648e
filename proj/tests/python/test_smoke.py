import math

import numpy as np
import pytest

import gfm


def interval(m, half_width=2.0):
    h = 2 * half_width / m
    x = -half_width + h * (np.arange(m) + 0.5)
    return (np.abs(x) < 1.0).astype(float)


def test_kernel_values():
    assert gfm.Kernel.power(1.0, 2)(2.0) == pytest.approx(0.5)
    assert gfm.Kernel.log(1.0, 1)(1.0) == pytest.approx(1.0)
    assert gfm.Kernel.log_power(1.0, 1)(1.0) == pytest.approx(math.log(2.0))
    assert gfm.Kernel.parse("power:0.5n", 2)(1.0) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        gfm.Kernel.power(3.0, 2)


def test_classify_power():
    c = gfm.classify(gfm.Kernel.power(0.5, 1))
    assert c["member_An"] and c["member_Bn"] and c["member_D"]
    assert c["B_constant"] == pytest.approx(2.0, rel=1e-6)


def test_rearrangement_and_maximal():
    f = interval(256)
    fs = gfm.rearrangement(f)
    assert fs(1.0) == 1.0 and fs(2.5) == 0.0
    k = gfm.Kernel.power(0.5, 1)
    M = gfm.maximal_function(f, k)
    I = gfm.riesz_potential(f, k)
    assert np.all(M <= I)
    assert M[128] == pytest.approx(2.0, abs=2 / 256 * 4)


def test_supremal_closed_form():
    k = gfm.Kernel.power(0.5, 1)
    chi = gfm.StepFunction(np.array([1.0]), np.array([1.0]))
    t = np.array([0.5, 1.0, 4.0])
    T = gfm.supremal_T(chi, k, t)
    assert T == pytest.approx([1.0, 1.0, 4.0 ** -0.5], rel=1e-9)
    assert np.all(gfm.k4_functional(chi, k, t) <= 2 * T)


def test_theorem43_identity():
    r = gfm.theorem43(np.ones(3), np.array([1.0, 0.0, 2.0]), np.array([0.5, 2.0, 1.0]))
    assert r["greedy"] == pytest.approx(r["rhs"], rel=1e-12)
    assert r["lp"] == pytest.approx(r["rhs"], rel=1e-12)


def test_corpus_shapes_and_determinism():
    a = gfm.corpus("ball:1,random:1", seed=4, n=2, m=32)
    b = gfm.corpus("ball:1,random:1", seed=4, n=2, m=32)
    assert set(a) == set(b)
    for key in a:
        assert a[key].shape == (32, 32)
        assert np.array_equal(a[key], b[key])


def test_run_suites_small():
    rows = gfm.run_suites("kernels = power:0.5\nsuites = thm43\nthm43_problems = 50\n")
    assert rows and all(r["status"] == "pass" for r in rows)
    assert gfm.run_suites("suites =\n") == []
    with pytest.raises(ValueError):
        gfm.run_suites("bogus = 1\n")
