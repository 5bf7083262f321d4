"""Both kernel backends against dense oracles and each other."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nsghz import kernels

from conftest import BACKENDS, digit_tuples, embed


def _random_state(rng, d, n, batch=None):
    shape = (d ** n,) if batch is None else (batch, d ** n)
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _unitary(rng, d):
    q, _ = np.linalg.qr(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))
    return q


def test_backend_selection():
    assert kernels.BACKEND in ("numba", "numpy")
    assert kernels.backend_module("numpy").__name__.endswith("_numpy")
    with pytest.raises(ValueError):
        kernels.backend_module("fortran")


@pytest.mark.parametrize("d,n", [(2, 1), (2, 4), (3, 3), (5, 2)])
def test_apply_local(backend, d, n):
    rng = np.random.default_rng(d * 10 + n)
    amps, op = _random_state(rng, d, n), _unitary(rng, d)
    for site in range(n):
        out = kernels.apply_local(amps, d, n, site, op, backend=backend)
        assert np.max(np.abs(out - embed(op, site + 1, n, d) @ amps)) < 1e-12


def test_apply_local_batched(backend):
    rng = np.random.default_rng(1)
    block, op = _random_state(rng, 3, 3, batch=5), _unitary(rng, 3)
    out = kernels.apply_local(block, 3, 3, 1, op, backend=backend)
    assert out.shape == (5, 27)
    for b in range(5):
        assert np.max(np.abs(out[b] - embed(op, 2, 3, 3) @ block[b])) < 1e-12


@pytest.mark.parametrize("d,n,sites,w", [(2, 3, [0, 2], 1.0), (3, 3, [1], 0.4),
                                         (4, 2, [0, 1], 2.5), (2, 4, [0, 1, 3], -0.7)])
def test_apply_phase_product(backend, d, n, sites, w):
    rng = np.random.default_rng(7)
    amps = _random_state(rng, d, n)
    out = kernels.apply_phase_product(amps, d, n, sites, w, backend=backend)
    want = np.array([np.exp(2j * np.pi * w * np.prod([x[s] for s in sites]) / d)
                     for x in digit_tuples(d, n)]) * amps
    assert np.max(np.abs(out - want)) < 1e-12


@pytest.mark.parametrize("d,n,sites", [(2, 3, [2, 0]), (3, 3, [0, 1, 2]), (3, 2, [1])])
def test_apply_phase_table(backend, d, n, sites):
    rng = np.random.default_rng(11)
    amps = _random_state(rng, d, n)
    table = rng.uniform(-3, 3, d ** len(sites))
    out = kernels.apply_phase_table(amps, d, n, sites, table, backend=backend)
    want = []
    for x in digit_tuples(d, n):
        key = 0
        for s in sites:
            key = key * d + x[s]
        want.append(np.exp(2j * np.pi * table[key] / d))
    assert np.max(np.abs(out - np.array(want) * amps)) < 1e-12


@pytest.mark.parametrize("d,n,controls,target", [(2, 2, [0], 1), (3, 3, [2], 0),
                                                  (3, 3, [0, 2], 1), (2, 3, [], 2)])
def test_apply_controlled(backend, d, n, controls, target):
    rng = np.random.default_rng(5)
    amps, u = _random_state(rng, d, n), _unitary(rng, d)
    top = (d - 1) ** len(controls)
    powers = np.array([np.linalg.matrix_power(u, p) for p in range(top + 1)])
    out = kernels.apply_controlled(amps, d, n, controls, target, powers, backend=backend)
    # dense oracle: block-diagonal sum over control values
    dense = np.zeros((d ** n, d ** n), dtype=complex)
    for col, x in enumerate(digit_tuples(d, n)):
        k = int(np.prod([x[c] for c in controls])) if controls else 1
        col_vec = np.zeros(d)
        col_vec[x[target]] = 1
        image = np.linalg.matrix_power(u, k) @ col_vec
        for t in range(d):
            y = list(x)
            y[target] = t
            row = int(np.ravel_multi_index(y, (d,) * n))
            dense[row, col] += image[t]
    assert np.max(np.abs(out - dense @ amps)) < 1e-12


@pytest.mark.skipif(len(BACKENDS) < 2, reason="numba not available")
@settings(max_examples=30, deadline=None)
@given(st.integers(2, 4), st.integers(2, 4), st.integers(0, 2 ** 31 - 1))
def test_backends_agree(d, n, seed):
    rng = np.random.default_rng(seed)
    amps = _random_state(rng, d, n, batch=2)
    op = _unitary(rng, d)
    site = int(rng.integers(0, n))
    sites = [int(s) for s in rng.permutation(n)[: int(rng.integers(1, n + 1))]]
    w = float(rng.uniform(-4, 4))
    table = rng.uniform(-4, 4, d ** len(sites))
    for name, args in [("apply_local", (site, op)), ("apply_phase_product", (sites, w)),
                       ("apply_phase_table", (sites, table))]:
        a = getattr(kernels, name)(amps, d, n, *args, backend="numpy")
        b = getattr(kernels, name)(amps, d, n, *args, backend="numba")
        assert np.max(np.abs(a - b)) < 1e-13, name


def test_env_flag_forces_numpy():
    import os
    import subprocess
    import sys
    env = dict(os.environ, NSGHZ_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "import nsghz.kernels as k; print(k.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
