"""Non-symmetric GHZ states and their local-unitary maps to graph states.

Three families are covered:

* qubit ``cos(a*pi/2)|0..0> + sin(a*pi/2)|1..1>`` and the fully connected
  weighted hypergraph whose m-vertex edges carry weight ``(-2)**(m-1) * a``;
* the qudit state ``prod_k CX_1k X_1**a |0..0>``, which Hadamards map onto
  the principal-residue diagonal ``(Z_1...Z_n)**a`` acting on ``|+>^n``;
* general ``sum_j a_j |j..j>``, mapped onto a star of controlled-U gates.
"""
import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .builder import (apply_controlled_u, apply_cz_power, apply_diagonal,
                      build_cu_star, build_hypergraph_state, controlled_x,
                      plus_state)
from .config import OPERATOR_TOL, STATE_TOL, check_cap
from .errors import DimensionError
from .hypergraph import Hyperedge, WeightedHypergraph, complete_graph
from .qudit import (StateVector, apply_local, fidelity, is_unitary,
                    make_hadamard, make_pauli_x, make_pauli_z, make_phase,
                    make_rz, x_alpha_qubit, x_alpha_qudit)
from .report import VerificationReport, fidelity_metric, residual_metric, timed


def _check_n(n):
    if n < 2:
        raise DimensionError(f"a GHZ state needs n >= 2, got {n}")


def _repeated_indices(n, d):
    """Flat indices of ``|jj...j>`` for j = 0..d-1."""
    step = sum(d ** k for k in range(n))
    return np.arange(d) * step


# -- constructors ---------------------------------------------------------------

def ghz_qubit(n, alpha):
    _check_n(n)
    check_cap(2, n)
    amps = np.zeros(2 ** n, dtype=np.complex128)
    amps[0] = np.cos(alpha * np.pi / 2)
    amps[-1] = np.sin(alpha * np.pi / 2)
    return StateVector(2, n, amps)


def fan_out(state):
    """Apply ``CX_{1k}`` for k = 2..n (copies site 1 onto the rest)."""
    for k in range(2, state.n + 1):
        state = apply_controlled_u(state, controlled_x(1, k, state.d))
    return state


def ghz_qubit_via_circuit(n, alpha, literal=True):
    """``exp(i*pi*alpha/2) * prod_k CX_1k X_1 X_1**alpha |0..0>``.

    ``literal`` selects the X-power (see ``x_alpha_qubit``). With the literal
    form the output is ``exp(i*pi*alpha) * P_1(pi/2)^dagger ghz_qubit``: the
    two components differ from ``ghz_qubit`` by a relative phase of ``-i``.
    """
    _check_n(n)
    state = StateVector.basis(2, [0] * n)
    state = apply_local(state, x_alpha_qubit(alpha, literal=literal), 1)
    state = apply_local(state, make_pauli_x(2), 1)
    state = fan_out(state)
    return state.with_amps(np.exp(0.5j * np.pi * alpha) * state.amps)


def ghz_qudit(n, d, alpha):
    """``prod_k CX_1k X_1**alpha |0..0>`` built gate by gate."""
    _check_n(n)
    check_cap(d, n)
    state = StateVector.basis(d, [0] * n)
    state = apply_local(state, x_alpha_qudit(d, alpha), 1)
    return fan_out(state)


def ghz_qudit_coefficients(d, alpha):
    """Normalized ``c_k ~ sum_l omega**(l*(alpha-k))`` for k = 0..d-1."""
    l = np.arange(d)
    c = np.array([np.exp(2j * np.pi * l * (alpha - k) / d).sum() for k in range(d)])
    return c / np.linalg.norm(c)


def ghz_general(n, d, a):
    """``sum_j a_j |j..j>`` with ``a`` normalized."""
    _check_n(n)
    a = _unit_vector(a, d)
    check_cap(d, n)
    amps = np.zeros(d ** n, dtype=np.complex128)
    amps[_repeated_indices(n, d)] = a
    return StateVector(d, n, amps)


def _unit_vector(a, d=None):
    a = np.asarray(a, dtype=np.complex128).reshape(-1)
    if d is not None and a.size != d:
        raise DimensionError(f"amplitude vector needs {d} entries, got {a.size}")
    norm = np.linalg.norm(a)
    if norm == 0:
        raise ValueError("amplitude vector is zero")
    return a / norm


def seeded_amplitudes(d, seed=0, sample=0):
    """Reproducible random unit vector in C^d (complex Gaussian entries)."""
    rng = np.random.default_rng([int(seed), int(d), int(sample)])
    return _unit_vector(rng.standard_normal(d) + 1j * rng.standard_normal(d))


# -- qubit hypergraph -------------------------------------------------------------

def fully_connected_weighted_hypergraph(n, alpha):
    """Every m-subset (m = 2..n) gets weight ``(-2)**(m-1) * alpha``."""
    _check_n(n)
    edges = tuple(Hyperedge(e, (-2) ** (m - 1) * alpha)
                  for m in range(2, n + 1)
                  for e in itertools.combinations(range(1, n + 1), m))
    return WeightedHypergraph(n, 2, edges)


def hypergraph_exponent(w, n):
    """Integer ``sum_{k=1}^{n-1} (-2)**k * C(w, k+1)``: the phase exponent the
    fully connected hypergraph assigns (per unit alpha) to Hamming weight ``w``."""
    return sum((-2) ** k * comb(w, k + 1) for k in range(1, n))


def closed_form_exponent(w):
    """``(-1)**(w+1)/2 - w + 1/2`` as an exact fraction."""
    return Fraction((-1) ** (w + 1), 2) - w + Fraction(1, 2)


def closed_form_state(n, alpha):
    """Amplitudes ``omega**(alpha * closed_form_exponent(w_x)) / 2**(n/2)``, omega = -1."""
    check_cap(2, n)
    idx = np.arange(2 ** n)
    w = np.array([bin(i).count("1") for i in idx])
    ex = alpha * (0.5 * (-1.0) ** (w + 1) - w + 0.5)
    return StateVector(2, n, np.exp(1j * np.pi * ex) / np.sqrt(2 ** n))


@dataclass(frozen=True, eq=False)
class LuPipeline:
    """Single-site gates ``[(site, op), ...]``; the first entry acts first."""

    gates: tuple

    def __post_init__(self):
        gates = tuple((int(s), np.asarray(op, dtype=np.complex128)) for s, op in self.gates)
        for site, op in gates:
            if not is_unitary(op):
                raise ValueError(f"gate on site {site} is not unitary")
        object.__setattr__(self, "gates", gates)

    def __len__(self):
        return len(self.gates)

    def apply(self, state):
        for site, op in self.gates:
            state = apply_local(state, op, site)
        return state

    def inverse(self):
        return LuPipeline(tuple((s, op.conj().T) for s, op in reversed(self.gates)))


def prop1_pipeline(n, alpha):
    """``RZ_1(a*pi)^dag P(a*pi)^dag^{(x) rest} H^{(x) n} P_1(pi/2)^dag`` read right to left."""
    _check_n(n)
    h = make_hadamard(2)
    gates = [(1, make_phase(2, np.pi / 2).conj().T)]
    gates += [(site, h) for site in range(1, n + 1)]
    gates += [(site, make_phase(2, alpha * np.pi).conj().T) for site in range(2, n + 1)]
    gates.append((1, make_rz(alpha * np.pi).conj().T))
    return LuPipeline(tuple(gates))


def _max_abs_diff(a, b):
    return float(np.max(np.abs(a.amps - b.amps)))


def verify_prop1(n, alpha, tol=STATE_TOL):
    report = VerificationReport("prop1", {"n": n, "alpha": alpha, "tol": tol})
    with timed(report):
        graph_state = build_hypergraph_state(fully_connected_weighted_hypergraph(n, alpha))
        mapped = prop1_pipeline(n, alpha).apply(ghz_qubit(n, alpha))
        report.add(fidelity_metric("fidelity", fidelity(graph_state, mapped), tol))
        report.add(residual_metric("max_abs_diff", _max_abs_diff(graph_state, mapped), tol))
    return report


def verify_half_alpha_graph(n, tol=OPERATOR_TOL):
    """At alpha = 1/2 the weighted hypergraph is the complete graph."""
    report = VerificationReport("prop1-half", {"n": n, "tol": tol})
    with timed(report):
        g = fully_connected_weighted_hypergraph(n, 0.5)
        report.notes["structural_match"] = str(g == complete_graph(n))
        f = fidelity(build_hypergraph_state(g), build_hypergraph_state(complete_graph(n)))
        report.add(fidelity_metric("fidelity", f, tol))
    return report


# -- qudit GHZ --------------------------------------------------------------------

def residue_power_state(n, d, alpha):
    """``(Z_1...Z_n)**alpha |+>^n`` with the power taken on the principal residue:
    ``|x>`` gets ``omega**(alpha * (sum x mod d))``."""
    digits = np.indices((d,) * n).reshape(n, -1)
    return apply_diagonal(plus_state(d, n), alpha * np.mod(digits.sum(axis=0), d))


def hadamard_all(state):
    h = make_hadamard(state.d)
    for site in range(1, state.n + 1):
        state = apply_local(state, h, site)
    return state


def verify_qudit_ghz_hypergraph(n, d, alpha, tol=STATE_TOL):
    report = VerificationReport("qudit-ghz", {"n": n, "d": d, "alpha": alpha, "tol": tol})
    with timed(report):
        ghz = ghz_qudit(n, d, alpha)
        closed = np.zeros(d ** n, dtype=np.complex128)
        closed[_repeated_indices(n, d)] = ghz_qudit_coefficients(d, alpha)
        report.add(residual_metric("circuit_vs_sum", float(np.max(np.abs(ghz.amps - closed))), tol))
        mapped = hadamard_all(ghz)
        target = residue_power_state(n, d, alpha)
        report.add(fidelity_metric("fidelity", fidelity(mapped, target), tol))
        if d == 2:
            # undo the local Z**alpha factors to land on the fully connected hypergraph
            undressed = mapped
            for site in range(1, n + 1):
                undressed = apply_local(undressed, make_phase(2, alpha * np.pi).conj().T, site)
            graph_state = build_hypergraph_state(fully_connected_weighted_hypergraph(n, alpha))
            report.add(fidelity_metric("prop1_cross_check", fidelity(undressed, graph_state), tol))
    return report


# -- controlled-unitary stars -------------------------------------------------------

def complete_unitary_a(a, threshold=1e-8):
    """Unitary whose first column is ``a / |a|``.

    Remaining columns come from Gram-Schmidt over the standard basis in index
    order; candidates whose orthogonal remainder is below ``threshold`` are
    skipped.
    """
    a = _unit_vector(a)
    d = a.size
    cols = [a]
    for k in range(d):
        if len(cols) == d:
            break
        v = np.zeros(d, dtype=np.complex128)
        v[k] = 1.0
        for _ in range(2):  # second pass restores orthogonality lost to rounding
            for c in cols:
                v = v - np.vdot(c, v) * c
        norm = np.linalg.norm(v)
        if norm < threshold:
            continue
        cols.append(v / norm)
    return np.column_stack(cols)


def u_from_a(a=None, unitary_a=None):
    """``U = H A^dag Z A H^dag`` for ``A`` with first column ``a``."""
    if unitary_a is None:
        unitary_a = complete_unitary_a(a)
    unitary_a = np.asarray(unitary_a, dtype=np.complex128)
    d = unitary_a.shape[0]
    h = make_hadamard(d)
    return h @ unitary_a.conj().T @ make_pauli_z(d) @ unitary_a @ h.conj().T


def prop3_route_ii(ghz, unitary_a):
    """``H_1 A_1^dag prod_l CZ_1l^dag prod_l H_l`` applied to ``ghz``."""
    h = make_hadamard(ghz.d)
    state = ghz
    for leaf in range(2, ghz.n + 1):
        state = apply_local(state, h, leaf)
    for leaf in range(2, ghz.n + 1):
        state = apply_cz_power(state, (1, leaf), -1)
    state = apply_local(state, np.asarray(unitary_a).conj().T, 1)
    return apply_local(state, h, 1)


def prop3_pipeline(n, unitary_a):
    """Local part ``H_1 A_1^dag prod_l H_l`` that sends the GHZ onto the CU star."""
    d = np.asarray(unitary_a).shape[0]
    h = make_hadamard(d)
    gates = [(leaf, h) for leaf in range(2, n + 1)]
    gates += [(1, np.asarray(unitary_a).conj().T), (1, h)]
    return LuPipeline(tuple(gates))


def verify_prop3(n, d, a, tol=STATE_TOL, unitary_a=None):
    if unitary_a is None:
        unitary_a = complete_unitary_a(a)
    a = np.asarray(unitary_a, dtype=np.complex128)[:, 0]
    report = VerificationReport(
        "prop3", {"n": n, "d": d, "a": [complex(x) for x in np.round(a, 15)], "tol": tol})
    with timed(report):
        report.add(residual_metric("a_unitary", float(np.max(np.abs(
            unitary_a.conj().T @ unitary_a - np.eye(d)))), OPERATOR_TOL))
        ghz = ghz_general(n, d, a)
        landed = prop3_route_ii(ghz, unitary_a)
        plus = plus_state(d, n)
        report.add(fidelity_metric("route_ii_fidelity", fidelity(landed, plus), tol))
        report.add(residual_metric("route_ii_max_residual", _max_abs_diff(landed, plus), tol))
        star = build_cu_star(n, d, u_from_a(unitary_a=unitary_a))
        mapped = prop3_pipeline(n, unitary_a).apply(ghz)
        report.add(fidelity_metric("cu_star_fidelity", fidelity(star, mapped), tol))
    return report


def qubit_star_unitary(alpha):
    """``[[0, exp(i*a*pi)], [exp(-i*a*pi), 0]]``."""
    e = np.exp(1j * np.pi * alpha)
    return np.array([[0, e], [np.conj(e), 0]])


def qubit_star_a_operator(alpha):
    """``A = X X**alpha`` with the coefficient-swapped (literal) qubit X-power."""
    return make_pauli_x(2) @ x_alpha_qubit(alpha, literal=True)
