"""Exact dense state vectors for qudit graph, hypergraph and GHZ-type states."""
__version__ = "0.1.0"

from .builder import (ControlledGateSpec, apply_controlled_u, apply_cp,
                      apply_cz_power, build_cu_star, build_hypergraph_state,
                      plus_state)
from .config import DEFAULT_CAP, OPERATOR_TOL, STATE_TOL
from .errors import (CapExceededError, DimensionError, HypergraphError,
                     NsghzError, ParseError)
from .ghz import (LuPipeline, closed_form_state, complete_unitary_a,
                  fully_connected_weighted_hypergraph, ghz_general, ghz_qubit,
                  ghz_qubit_via_circuit, ghz_qudit, prop1_pipeline, u_from_a,
                  verify_half_alpha_graph, verify_prop1, verify_prop3,
                  verify_qudit_ghz_hypergraph)
from .hypergraph import (Hyperedge, PhaseEdge, WeightedHypergraph,
                         adjacency_tensor, complete_graph, load, parse,
                         serialize, star_graph)
from .qudit import (StateVector, apply_local, fidelity, make_hadamard,
                    make_pauli_x, make_pauli_z, make_phase, make_rz,
                    x_alpha_qubit, x_alpha_qudit)
from .report import Metric, VerificationReport
from .stabilizer import (StabilizerOperator, ancilla_stabilizers_qubit,
                         ancilla_stabilizers_qudit, check_stabilizer,
                         graph_stabilizers, stabilized_state, verify_prop2,
                         verify_prop2_qudit)
from .xalpha import (CorrectionTerm, appendix_c_corrections,
                     commutation_residual, delta_edges,
                     resolve_commutation_sign, rewrite_xalpha_qubit,
                     rewrite_xalpha_qudit, verify_appendix_c)
