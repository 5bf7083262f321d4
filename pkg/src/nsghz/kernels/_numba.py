"""Loop kernels compiled with numba; same contracts as ``_numpy``."""
import math

import numpy as np
from numba import njit

TWO_PI = 2.0 * math.pi


@njit(cache=True)
def _phase(exponent, d):
    theta = TWO_PI * np.fmod(exponent, float(d)) / d
    return complex(math.cos(theta), math.sin(theta))


@njit(cache=True)
def apply_local(amps, d, n, site, op):
    batch, size = amps.shape
    stride = d ** (n - 1 - site)
    out = np.empty_like(amps)
    tmp = np.empty(d, dtype=np.complex128)
    for b in range(batch):
        for i in range(size):
            if (i // stride) % d != 0:
                continue
            for k in range(d):
                tmp[k] = amps[b, i + k * stride]
            for j in range(d):
                acc = 0j
                for k in range(d):
                    acc += op[j, k] * tmp[k]
                out[b, i + j * stride] = acc
    return out


@njit(cache=True)
def apply_phase_product(amps, d, n, sites, weight):
    batch, size = amps.shape
    out = np.empty_like(amps)
    for i in range(size):
        prod = 1
        for s in sites:
            prod *= (i // d ** (n - 1 - s)) % d
        ph = _phase(weight * prod, d)
        for b in range(batch):
            out[b, i] = amps[b, i] * ph
    return out


@njit(cache=True)
def apply_phase_table(amps, d, n, sites, table):
    batch, size = amps.shape
    out = np.empty_like(amps)
    for i in range(size):
        key = 0
        for s in sites:
            key = key * d + (i // d ** (n - 1 - s)) % d
        ph = _phase(table[key], d)
        for b in range(batch):
            out[b, i] = amps[b, i] * ph
    return out


@njit(cache=True)
def apply_controlled(amps, d, n, controls, target, powers):
    batch, size = amps.shape
    stride = d ** (n - 1 - target)
    out = np.empty_like(amps)
    tmp = np.empty(d, dtype=np.complex128)
    for i in range(size):
        if (i // stride) % d != 0:
            continue
        p = 1
        for c in controls:
            p *= (i // d ** (n - 1 - c)) % d
        for b in range(batch):
            for k in range(d):
                tmp[k] = amps[b, i + k * stride]
            for j in range(d):
                acc = 0j
                for k in range(d):
                    acc += powers[p, j, k] * tmp[k]
                out[b, i + j * stride] = acc
    return out
