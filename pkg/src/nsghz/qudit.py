"""Qudit operators and dense state vectors.

States are stored as flat complex128 arrays of length ``d**n``. Index ``i``
is the ket ``|x1 x2 ... xn>`` read as a base-d number with ``x1`` the most
significant digit. Sites are 1-based in every public function.
"""
from dataclasses import dataclass

import numpy as np

from . import kernels
from .config import OPERATOR_TOL, check_cap
from .errors import DimensionError


def omega(d):
    """Primitive d-th root of unity ``exp(2*pi*i/d)``."""
    return np.exp(2j * np.pi / d)


def _check_dim(d):
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise DimensionError(f"qudit dimension must be an integer >= 2, got {d!r}")
    return int(d)


def _roots(d, exponents):
    theta = 2.0 * np.pi * np.fmod(np.asarray(exponents, dtype=float), d) / d
    return np.cos(theta) + 1j * np.sin(theta)


@dataclass(frozen=True, eq=False)
class StateVector:
    """Immutable unit-norm state of ``n`` qudits of dimension ``d``."""

    d: int
    n: int
    amps: np.ndarray

    def __post_init__(self):
        d = _check_dim(self.d)
        if self.n < 1:
            raise DimensionError(f"need at least one site, got n={self.n}")
        amps = np.array(self.amps, dtype=np.complex128).reshape(-1)
        if amps.size != d ** self.n:
            raise DimensionError(
                f"expected {d ** self.n} amplitudes for d={d}, n={self.n}, got {amps.size}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        amps.setflags(write=False)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "amps", amps)

    @classmethod
    def from_amplitudes(cls, amps, d, normalize=True):
        """Build a state from raw amplitudes, inferring ``n`` from the length."""
        d = _check_dim(d)
        amps = np.asarray(amps, dtype=np.complex128).reshape(-1)
        n = int(round(np.log(amps.size) / np.log(d)))
        if d ** n != amps.size:
            raise DimensionError(f"length {amps.size} is not a power of {d}")
        if normalize:
            norm = np.linalg.norm(amps)
            if norm == 0:
                raise ValueError("cannot normalize the zero vector")
            amps = amps / norm
        return cls(d, n, amps)

    @classmethod
    def basis(cls, d, digits):
        """Computational basis state ``|digits>``."""
        d = _check_dim(d)
        digits = list(digits)
        check_cap(d, len(digits))
        idx = 0
        for x in digits:
            if not 0 <= x < d:
                raise DimensionError(f"digit {x} out of range for d={d}")
            idx = idx * d + x
        amps = np.zeros(d ** len(digits), dtype=np.complex128)
        amps[idx] = 1.0
        return cls(d, len(digits), amps)

    @property
    def dim(self):
        return self.d ** self.n

    def norm(self):
        return float(np.linalg.norm(self.amps))

    def digits(self, index):
        """Base-d digits of ``index``, most significant (site 1) first."""
        out = []
        for _ in range(self.n):
            index, r = divmod(index, self.d)
            out.append(r)
        return tuple(reversed(out))

    def label(self, index):
        sep = "" if self.d <= 10 else ","
        return sep.join(str(x) for x in self.digits(index))

    def tensor(self):
        """Amplitudes reshaped to ``(d,)*n`` (read-only view)."""
        return self.amps.reshape((self.d,) * self.n)

    def with_amps(self, amps):
        return StateVector(self.d, self.n, amps)


# -- gate constructors ---------------------------------------------------------

def make_pauli_x(d):
    """Cyclic shift ``X|k> = |k+1 mod d>``."""
    d = _check_dim(d)
    return np.roll(np.eye(d, dtype=np.complex128), 1, axis=0)


def make_pauli_z(d):
    """Clock operator ``Z|k> = omega**k |k>``."""
    d = _check_dim(d)
    return np.diag(_roots(d, np.arange(d)))


def make_hadamard(d):
    """Unitary discrete Fourier transform, ``H[j, k] = omega**(j*k) / sqrt(d)``."""
    d = _check_dim(d)
    jk = np.outer(np.arange(d), np.arange(d)) % d
    return _roots(d, jk) / np.sqrt(d)


def z_power(d, alpha):
    """Principal real power ``Z**alpha = diag(omega**(alpha*k))``, k = 0..d-1."""
    d = _check_dim(d)
    return np.diag(_roots(d, alpha * np.arange(d)))


def make_phase(d, phi, extension="power"):
    """Phase gate; for qubits ``diag(1, exp(i*phi))``.

    Qudit extensions: ``"power"`` gives ``diag(exp(i*k*phi))`` so that
    ``make_phase(d, 2*pi/d)`` equals ``Z``; ``"single"`` gives
    ``diag(1, exp(i*phi), 1, ..., 1)``. Both coincide for ``d == 2``.
    """
    d = _check_dim(d)
    if extension == "power":
        return np.diag(np.exp(1j * phi * np.arange(d)))
    if extension == "single":
        diag = np.ones(d, dtype=np.complex128)
        diag[1] = np.exp(1j * phi)
        return np.diag(diag)
    raise ValueError(f"unknown phase extension {extension!r}")


def make_rz(phi, d=2):
    """``diag(exp(-i*phi/2), exp(i*phi/2))``; qubits only."""
    if d != 2:
        raise DimensionError(f"RZ is defined for qubits only, got d={d}")
    return np.diag([np.exp(-0.5j * phi), np.exp(0.5j * phi)])


def x_alpha_qubit(alpha, literal=False):
    """Real power of the qubit X gate.

    Default is ``(1+e)/2 I + (1-e)/2 X`` with ``e = exp(i*pi*alpha)``: it has
    eigenvalue 1 on ``|+>`` and ``e`` on ``|->``, so alpha=0 gives I and
    alpha=1 gives X, and it equals ``x_alpha_qudit(2, alpha)``.

    ``literal=True`` returns the coefficient-swapped form
    ``(1-e)/2 I + (1+e)/2 X``, which is ``X @ x_alpha_qubit(alpha)``.
    """
    e = np.exp(1j * np.pi * alpha)
    eye = np.eye(2, dtype=np.complex128)
    x = make_pauli_x(2)
    if literal:
        return 0.5 * ((1 - e) * eye + (1 + e) * x)
    return 0.5 * ((1 + e) * eye + (1 - e) * x)


def x_alpha_qudit(d, alpha):
    """``H^dagger Z**alpha H`` for dimension ``d``."""
    h = make_hadamard(d)
    return h.conj().T @ z_power(d, alpha) @ h


def x_alpha_sum(d, alpha):
    """Shift-expansion of X**alpha: ``(1/d) sum_{k,l} omega**(l*(alpha-k)) X**k``."""
    d = _check_dim(d)
    x = make_pauli_x(d)
    l = np.arange(d)
    out = np.zeros((d, d), dtype=np.complex128)
    xk = np.eye(d, dtype=np.complex128)
    for k in range(d):
        out += _roots(d, l * (alpha - k)).sum() * xk
        xk = x @ xk
    return out / d


def is_unitary(op, tol=OPERATOR_TOL):
    op = np.asarray(op)
    return bool(np.max(np.abs(op.conj().T @ op - np.eye(op.shape[0]))) < tol)


# -- state operations ----------------------------------------------------------

def _check_op(state, op, site):
    op = np.asarray(op, dtype=np.complex128)
    if op.shape != (state.d, state.d):
        raise DimensionError(f"operator shape {op.shape} does not match d={state.d}")
    if not 1 <= site <= state.n:
        raise DimensionError(f"site {site} out of range 1..{state.n}")
    return op


def apply_local(state, op, site, report=False):
    """Apply a single-site ``d x d`` operator at ``site`` (1-based).

    Non-unitary operators have their output renormalized. With
    ``report=True`` the return value is ``(state, renormalized)``.
    """
    op = _check_op(state, op, site)
    amps = kernels.apply_local(state.amps, state.d, state.n, site - 1, op)
    renormalized = not is_unitary(op)
    if renormalized:
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ValueError("operator annihilated the state")
        amps = amps / norm
    out = StateVector(state.d, state.n, amps)
    return (out, renormalized) if report else out


def apply_locals(state, gates):
    """Apply ``[(site, op), ...]`` left to right (first entry acts first)."""
    for site, op in gates:
        state = apply_local(state, op, site)
    return state


def fidelity(a, b):
    """``|<a|b>|**2``; insensitive to global phase."""
    if (a.d, a.n) != (b.d, b.n):
        raise DimensionError(f"cannot compare d={a.d}, n={a.n} with d={b.d}, n={b.n}")
    return float(abs(np.vdot(a.amps, b.amps)) ** 2)
