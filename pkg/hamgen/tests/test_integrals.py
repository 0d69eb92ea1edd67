"""Primitive-level closed forms and tensor symmetries for the integral engine."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import erf

from hamgen.basis import BasisFunction, build_shells, expand_shells
from hamgen.integrals import (
    boys,
    eri_tensor,
    kinetic_matrix,
    nuclear_matrix,
    overlap_matrix,
)

EXPONENTS = st.floats(min_value=0.05, max_value=8.0)
COORD = st.floats(min_value=-1.5, max_value=1.5)


def prim(a, center, powers=(0, 0, 0)):
    """Single unnormalized primitive as a contracted function."""
    lx, ly, lz = powers
    return BasisFunction(lx, ly, lz, (a,), (1.0,), tuple(center), 0)


@given(a=EXPONENTS, b=EXPONENTS, z=COORD)
@settings(max_examples=40, deadline=None)
def test_s_overlap_closed_form(a, b, z):
    p, mu = a + b, a * b / (a + b)
    expect = (np.pi / p) ** 1.5 * math.exp(-mu * z * z)
    s = overlap_matrix([prim(a, (0, 0, 0)), prim(b, (0, 0, z))])
    assert s[0, 1] == pytest.approx(expect, rel=1e-12)


@given(a=EXPONENTS, b=EXPONENTS, z=COORD)
@settings(max_examples=40, deadline=None)
def test_s_kinetic_closed_form(a, b, z):
    p, mu = a + b, a * b / (a + b)
    s = (np.pi / p) ** 1.5 * math.exp(-mu * z * z)
    expect = mu * (3.0 - 2.0 * mu * z * z) * s
    t = kinetic_matrix([prim(a, (0, 0, 0)), prim(b, (0, 0, z))])
    assert t[0, 1] == pytest.approx(expect, rel=1e-11, abs=1e-13)


@given(a=EXPONENTS, b=EXPONENTS, z=COORD, d=st.floats(min_value=0.1, max_value=2.0))
@settings(max_examples=40, deadline=None)
def test_s_nuclear_closed_form(a, b, z, d):
    # nucleus of charge 1 at (0, 0, d); F0 via erf, not the hyp1f1 route
    p, mu = a + b, a * b / (a + b)
    pz = b * z / p
    x = p * (pz - d) ** 2
    f0 = 0.5 * math.sqrt(math.pi / x) * erf(math.sqrt(x)) if x > 1e-12 else 1.0
    expect = -(2.0 * np.pi / p) * math.exp(-mu * z * z) * f0
    v = nuclear_matrix(
        [prim(a, (0, 0, 0)), prim(b, (0, 0, z))], [1.0], np.array([[0.0, 0.0, d]])
    )
    assert v[0, 1] == pytest.approx(expect, rel=1e-10, abs=1e-12)


@given(a=EXPONENTS, b=EXPONENTS)
@settings(max_examples=20, deadline=None)
def test_p_overlap_same_center(a, b):
    p = a + b
    # <x e^{-ar^2} | x e^{-br^2}> = (pi/p)^{3/2} / (2p)
    expect = (np.pi / p) ** 1.5 / (2.0 * p)
    s = overlap_matrix([prim(a, (0, 0, 0), (1, 0, 0)), prim(b, (0, 0, 0), (1, 0, 0))])
    assert s[0, 1] == pytest.approx(expect, rel=1e-12)
    # orthogonal components vanish
    s_xy = overlap_matrix([prim(a, (0, 0, 0), (1, 0, 0)), prim(b, (0, 0, 0), (0, 1, 0))])
    assert abs(s_xy[0, 1]) < 1e-14


def test_boys_values_and_recursion():
    for m in range(5):
        assert boys(m, 0.0) == pytest.approx(1.0 / (2 * m + 1), rel=1e-13)
    for x in (0.05, 0.7, 3.0, 11.0):
        assert boys(0, x) == pytest.approx(
            0.5 * math.sqrt(math.pi / x) * erf(math.sqrt(x)), rel=1e-12
        )
    # d/dx F_m = -F_{m+1}
    h = 1e-6
    for m in (0, 1, 3):
        for x in (0.3, 2.0, 8.0):
            fd = (boys(m, x + h) - boys(m, x - h)) / (2 * h)
            assert fd == pytest.approx(-boys(m + 1, x), abs=1e-8)


def test_eri_single_center_s_closed_form():
    a = 0.8
    f = prim(a, (0, 0, 0))
    val = eri_tensor([f])[0, 0, 0, 0]
    p = 2 * a
    expect = 2.0 * np.pi**2.5 / (p * p * math.sqrt(2 * p))
    assert val == pytest.approx(expect, rel=1e-12)


@pytest.fixture(scope="module")
def lih_tensor():
    funcs = expand_shells(
        build_shells(["Li", "H"], np.array([[0.0, 0.0, 0.0], [0.0, 0.0, 3.0]]), "sto-3g")
    )
    return eri_tensor(funcs)


def test_eri_eightfold_symmetry(lih_tensor):
    g = lih_tensor
    for perm in [(1, 0, 2, 3), (0, 1, 3, 2), (1, 0, 3, 2),
                 (2, 3, 0, 1), (3, 2, 0, 1), (2, 3, 1, 0), (3, 2, 1, 0)]:
        assert np.abs(g - g.transpose(perm)).max() < 1e-12


def test_eri_positive_semidefinite(lih_tensor):
    n = lih_tensor.shape[0]
    m = lih_tensor.reshape(n * n, n * n)
    assert np.linalg.eigvalsh(0.5 * (m + m.T)).min() > -1e-10


def test_translation_invariance():
    coords = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, 1.4]])
    shift = np.array([0.31, -1.7, 2.05])
    f0 = expand_shells(build_shells(["H", "H"], coords, "sto-3g"))
    f1 = expand_shells(build_shells(["H", "H"], coords + shift, "sto-3g"))
    assert np.allclose(overlap_matrix(f0), overlap_matrix(f1), atol=1e-13)
    assert np.allclose(kinetic_matrix(f0), kinetic_matrix(f1), atol=1e-13)
    v0 = nuclear_matrix(f0, [1.0, 1.0], coords)
    v1 = nuclear_matrix(f1, [1.0, 1.0], coords + shift)
    assert np.allclose(v0, v1, atol=1e-12)
    assert np.allclose(eri_tensor(f0), eri_tensor(f1), atol=1e-12)


def test_textbook_h2_integral_anchors():
    """Classic minimal-basis H2 values at R = 1.4 bohr (4-decimal tables)."""
    coords = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, 1.4]])
    funcs = expand_shells(build_shells(["H", "H"], coords, "sto-3g"))
    s = overlap_matrix(funcs)
    t = kinetic_matrix(funcs)
    v = nuclear_matrix(funcs, [1.0, 1.0], coords)
    g = eri_tensor(funcs)
    assert s[0, 1] == pytest.approx(0.6593, abs=2e-4)
    assert t[0, 0] == pytest.approx(0.7600, abs=2e-4)
    assert t[0, 1] == pytest.approx(0.2365, abs=2e-4)
    assert v[0, 0] == pytest.approx(-1.8804, abs=2e-4)
    assert g[0, 0, 0, 0] == pytest.approx(0.7746, abs=2e-4)
    assert g[0, 0, 1, 1] == pytest.approx(0.5697, abs=2e-4)
