import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from uncpoly import kernels
from uncpoly._pykernels import gray_signs, torus_steps

NORMS = [(0, 1.0), (0, 2.0), (0, 3.5), (1, 0.0)]


def direct_norms(z, kind, p):
    a = np.abs(z)
    return a.max(axis=-1) if kind == 1 else (a ** p).sum(axis=-1) ** (1 / p)


def test_backends_listed():
    assert "python" in kernels.available_backends()
    assert kernels.backend_name() in kernels.available_backends()
    with pytest.raises(ValueError):
        kernels.use_backend("fortran")


def test_gray_order_flips_one_sign_per_step():
    s = gray_signs(np.arange(16), 5)
    assert np.all(s[:, 0] == 1)
    assert len({tuple(r) for r in s}) == 16
    assert np.all((s[1:] != s[:-1]).sum(axis=1) == 1)


@pytest.mark.parametrize("kind,p", NORMS)
@pytest.mark.parametrize("cplx", [False, True])
def test_vertex_norms_match_direct(backend, kind, p, cplx, rng):
    v = rng.standard_normal((7, 4)) + (1j * rng.standard_normal((7, 4)) if cplx else 0)
    got = kernels.vertex_norms(v, kind, p)
    want = direct_norms(gray_signs(np.arange(2 ** 6), 7) @ v, kind, p)
    assert np.allclose(got, want, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("kind,p", NORMS)
def test_torus_norms_match_direct(backend, kind, p, rng):
    v = rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3))
    m = 5
    got = kernels.torus_norms(v, kind, p, m)
    theta = 2 * np.pi / m * torus_steps(np.arange(m ** 3), 4, m)
    want = direct_norms(np.exp(1j * theta) @ v, kind, p)
    assert np.allclose(got, want, rtol=1e-12, atol=1e-12)


@given(st.integers(1, 9), st.integers(1, 4), st.sampled_from(NORMS), st.integers(0, 2 ** 31))
def test_backends_agree(n, d, norm, seed):
    if len(kernels.available_backends()) < 2:
        pytest.skip("compiled backend not built")
    r = np.random.default_rng(seed)
    v = r.standard_normal((n, d)) + 1j * r.standard_normal((n, d))
    out = {}
    prev = kernels.backend_name()
    try:
        for b in ("python", "cython"):
            kernels.use_backend(b)
            out[b] = (kernels.vertex_norms(v, *norm), kernels.torus_norms(v[:4], *norm, 4))
    finally:
        kernels.use_backend(prev)
    for a, b in zip(out["python"], out["cython"]):
        assert np.allclose(a, b, rtol=1e-12, atol=1e-12)


def test_torus_incremental_update_does_not_drift(backend, rng):
    # long odometer run: compare the last rows with a fresh evaluation
    v = rng.standard_normal((5, 3)) + 1j * rng.standard_normal((5, 3))
    m = 24
    got = kernels.torus_norms(v, 0, 2.0, m)
    idx = np.arange(m ** 4 - 50, m ** 4)
    want = direct_norms(np.exp(2j * np.pi / m * torus_steps(idx, 5, m)) @ v, 0, 2.0)
    assert np.allclose(got[idx], want, rtol=1e-12, atol=1e-12)


def test_fallback_selected_when_extension_missing():
    import subprocess
    import sys
    code = ("import sys; sys.modules['uncpoly._ckernels'] = None\n"
            "from uncpoly import kernels, unconditional_sup, unit_basis, NormTag\n"
            "assert kernels.available_backends() == ['python'] and kernels.backend_name() == 'python'\n"
            "print(unconditional_sup(unit_basis(3, NormTag.lp(1))).value)")
    proc = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=False)
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.strip() == "3.0"


def test_long_gray_walk_stays_accurate(backend, rng):
    v = rng.standard_normal((15, 4)) * 1e3
    got = kernels.vertex_norms(v, 0, 2.0)
    idx = np.arange(2 ** 14 - 100, 2 ** 14)
    want = direct_norms(gray_signs(idx, 15) @ v, 0, 2.0)
    assert np.allclose(got[idx], want, rtol=1e-12, atol=0)
