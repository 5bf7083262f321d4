"""Shared independent oracles.

Everything here is built from ``np.kron`` and explicit loops over basis
labels, never from the package kernels, so tests compare two unrelated
routes to the same numbers.
"""
import itertools

import numpy as np
import pytest

from nsghz import kernels

ALPHA_GRID = [round(0.05 * k, 2) for k in range(21)]


def omega(d):
    return np.exp(2j * np.pi / d)


def digit_tuples(d, n):
    return list(itertools.product(range(d), repeat=n))


def embed(op, site, n, d):
    """Dense ``I (x) .. op .. (x) I`` with ``op`` on 1-based ``site``."""
    mats = [np.eye(d)] * n
    mats[site - 1] = op
    out = np.array([[1.0 + 0j]])
    for m in mats:
        out = np.kron(out, m)
    return out


def kron_all(ops):
    out = np.array([[1.0 + 0j]])
    for m in ops:
        out = np.kron(out, m)
    return out


def hypergraph_amplitudes(g):
    """Amplitudes of ``g`` from the defining phase sum, one basis label at a time."""
    d, n = g.d, g.n
    amps = []
    for x in digit_tuples(d, n):
        ex = 0.0
        for e in g.edges:
            ex += e.weight * np.prod([x[v - 1] for v in e.vertices])
        for pe in g.phase_edges:
            key = 0
            for v in pe.vertices:
                key = key * d + x[v - 1]
            ex += pe.phases[key]
        amps.append(np.exp(2j * np.pi * ex / d))
    return np.array(amps) / np.sqrt(d ** n)


def dense_x_power_qubit(alpha):
    """``X**alpha`` from the eigen-decomposition of X: eigenvalue 1 on |+>, e on |->."""
    plus = np.array([1, 1]) / np.sqrt(2)
    minus = np.array([1, -1]) / np.sqrt(2)
    return np.outer(plus, plus) + np.exp(1j * np.pi * alpha) * np.outer(minus, minus)


def dense_x_power(d, alpha):
    """``X**alpha`` from the shift's eigenbasis: ``X f_k = omega**k f_k`` with
    ``f_k[j] = omega**(-j*k)/sqrt(d)``, principal eigenvalue ``omega**(alpha*k)``."""
    w = omega(d)
    out = np.zeros((d, d), dtype=complex)
    for k in range(d):
        f = np.array([w ** (-j * k) for j in range(d)]) / np.sqrt(d)
        out += np.exp(2j * np.pi * alpha * k / d) * np.outer(f, f.conj())
    return out


def random_hypergraph(rng, n, d, i, max_edges=6):
    """Random hypergraph whose edges through ``i`` have integer weights and
    distinct vertex sets; other edges get real weights."""
    from nsghz.hypergraph import Hyperedge, WeightedHypergraph
    edges, through = [], set()
    for _ in range(int(rng.integers(0, max_edges + 1))):
        size = int(rng.integers(1, n + 1))
        vs = tuple(sorted(int(v) + 1 for v in rng.choice(n, size, replace=False)))
        if i in vs:
            if vs in through:
                continue
            through.add(vs)
            w = float(rng.integers(1, d))
        else:
            w = float(rng.uniform(-d, d))
        edges.append(Hyperedge(vs, w))
    return WeightedHypergraph(n, d, tuple(edges))


def fidelity_of(a, b):
    return abs(np.vdot(a, b)) ** 2


BACKENDS = ["numpy"] + (["numba"] if kernels.BACKEND == "numba" else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
