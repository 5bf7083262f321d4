"""Vectorised numpy kernels.

Every kernel takes a complex128 amplitude array of shape ``(batch, d**n)``
and returns a new array of the same shape. Sites are 0-based here; site 0 is
the most significant base-d digit.
"""
import numpy as np

TWO_PI = 2.0 * np.pi


def _digits(d, n, sites):
    idx = np.arange(d ** n, dtype=np.int64)
    return [(idx // d ** (n - 1 - s)) % d for s in sites]


def _phase(exponent, d):
    theta = TWO_PI * np.fmod(exponent, d) / d
    return np.cos(theta) + 1j * np.sin(theta)


def apply_local(amps, d, n, site, op):
    batch = amps.reshape((amps.shape[0],) + (d,) * n)
    out = np.tensordot(op, batch, axes=([1], [site + 1]))
    out = np.moveaxis(out, 0, site + 1)
    return np.ascontiguousarray(out).reshape(amps.shape)


def apply_phase_product(amps, d, n, sites, weight):
    prod = np.ones(d ** n, dtype=np.int64)
    for digit in _digits(d, n, sites):
        prod *= digit
    return amps * _phase(weight * prod, d)


def apply_phase_table(amps, d, n, sites, table):
    key = np.zeros(d ** n, dtype=np.int64)
    for digit in _digits(d, n, sites):
        key = key * d + digit
    return amps * _phase(table[key], d)


def apply_controlled(amps, d, n, controls, target, powers):
    c = len(controls)
    batch = amps.shape[0]
    psi = amps.reshape((batch,) + (d,) * n)
    src = [s + 1 for s in controls] + [target + 1]
    dst = list(range(1, c + 2))
    t = np.moveaxis(psi, src, dst)
    moved_shape = t.shape
    t = t.reshape(batch, d ** c, d, -1)
    combos = np.indices((d,) * c).reshape(c, -1) if c else np.zeros((0, 1), np.int64)
    exps = np.prod(combos, axis=0).astype(np.int64) if c else np.ones(1, np.int64)
    out = np.einsum("kij,bkjr->bkir", powers[exps], t)
    out = np.moveaxis(out.reshape(moved_shape), dst, src)
    return np.ascontiguousarray(out).reshape(amps.shape)
