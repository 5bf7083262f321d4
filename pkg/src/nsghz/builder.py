"""Build state vectors from hypergraphs and controlled-gate programs."""
from dataclasses import dataclass

import numpy as np

from . import kernels
from .config import check_cap
from .errors import DimensionError, HypergraphError
from .hypergraph import PhaseEdge
from .qudit import StateVector, is_unitary, make_pauli_x


def plus_state(d, n, cap=None):
    """``|+>^n`` with every amplitude ``d**(-n/2)``."""
    size = check_cap(d, n, cap)
    return StateVector(d, n, np.full(size, 1.0 / np.sqrt(size), dtype=np.complex128))


def _sites(state, vertices):
    vs = list(vertices)
    if not vs:
        raise HypergraphError("vertex set is empty")
    if len(set(vs)) != len(vs):
        raise HypergraphError(f"repeated vertex in {vs}")
    for v in vs:
        if not 1 <= v <= state.n:
            raise DimensionError(f"vertex {v} out of range 1..{state.n}")
    return [v - 1 for v in vs]


def apply_cz_power(state, vertices, w):
    """Multiply ``|x>`` by ``omega**(w * prod_{j in vertices} x_j)``."""
    sites = _sites(state, vertices)
    return state.with_amps(kernels.apply_phase_product(state.amps, state.d, state.n, sites, w))


def apply_cp(state, pe):
    """Apply the diagonal phase-edge gate ``pe``."""
    if not isinstance(pe, PhaseEdge):
        pe = PhaseEdge(*pe)
    pe.check_dimension(state.d)
    sites = _sites(state, pe.vertices)
    return state.with_amps(
        kernels.apply_phase_table(state.amps, state.d, state.n, sites, pe.phases))


def apply_diagonal(state, exponents):
    """Multiply amplitude ``i`` by ``omega**exponents[i]``."""
    exponents = np.asarray(exponents, dtype=float).reshape(-1)
    if exponents.size != state.dim:
        raise DimensionError(f"need {state.dim} exponents, got {exponents.size}")
    theta = 2.0 * np.pi * np.fmod(exponents, state.d) / state.d
    return state.with_amps(state.amps * (np.cos(theta) + 1j * np.sin(theta)))


def build_hypergraph_state(g, cap=None):
    """``prod_e CZ_e**w_e`` (and every phase edge) applied to ``|+>^n``."""
    state = plus_state(g.d, g.n, cap)
    for e in g.edges:
        state = apply_cz_power(state, e.vertices, e.weight)
    for pe in g.phase_edges:
        state = apply_cp(state, pe)
    return state


@dataclass(frozen=True, eq=False)
class ControlledGateSpec:
    """``sum_k |k><k|_controls (x) U**k`` on ``target``, k = product of control digits.

    With one control this is the usual qudit controlled-U; ``U = Z`` gives
    ``CZ`` and ``U = X`` gives ``CX``.
    """

    controls: tuple
    target: int
    unitary: np.ndarray

    def __post_init__(self):
        controls = tuple(int(c) for c in self.controls)
        if len(set(controls)) != len(controls):
            raise HypergraphError(f"repeated control in {controls}")
        if self.target in controls:
            raise HypergraphError(f"target {self.target} is also a control")
        u = np.array(self.unitary, dtype=np.complex128)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise DimensionError(f"unitary must be square, got shape {u.shape}")
        if not is_unitary(u, 1e-10):
            raise ValueError("controlled operator is not unitary")
        u.setflags(write=False)
        object.__setattr__(self, "controls", controls)
        object.__setattr__(self, "target", int(self.target))
        object.__setattr__(self, "unitary", u)


def _matrix_powers(u, top):
    out = np.empty((top + 1,) + u.shape, dtype=np.complex128)
    out[0] = np.eye(u.shape[0])
    for p in range(1, top + 1):
        out[p] = u @ out[p - 1]
    return out


def apply_controlled_u(state, spec):
    if spec.unitary.shape != (state.d, state.d):
        raise DimensionError(
            f"unitary shape {spec.unitary.shape} does not match d={state.d}")
    sites = _sites(state, spec.controls + (spec.target,))
    top = (state.d - 1) ** len(spec.controls)
    powers = _matrix_powers(spec.unitary, top)
    return state.with_amps(kernels.apply_controlled(
        state.amps, state.d, state.n, sites[:-1], sites[-1], powers))


def controlled_x(control, target, d):
    return ControlledGateSpec((control,), target, make_pauli_x(d))


def build_cu_star(n, d, u, order="ascending", cap=None):
    """Star of controlled-U gates: leaves ``2..n`` control, centre 1 is target.

    The gates share a target and act diagonally on their controls, so their
    order does not matter; ``order`` exists to check that.
    """
    if n < 2:
        raise DimensionError(f"a CU star needs n >= 2, got {n}")
    state = plus_state(d, n, cap)
    leaves = range(2, n + 1) if order == "ascending" else range(n, 1, -1)
    for leaf in leaves:
        state = apply_controlled_u(state, ControlledGateSpec((leaf,), 1, u))
    return state
