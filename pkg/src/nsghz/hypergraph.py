"""Weighted qudit hypergraphs.

A hyperedge's weight is the real exponent ``w`` of the multi-controlled phase
``CZ_e**w``, which multiplies ``|x>`` by ``omega**(w * prod_{j in e} x_j)``.
Because the digit product is an integer the gate has period ``d`` in ``w``,
so canonical weights live in ``[0, d)``. Size-1 edges are local ``Z**w``.

Text format::

    d=3 n=4
    edge 1 2 : 0.5         # CZ_{12}**0.5
    phase 2 3 : 0 0 0 0 1 2 0 2 1
"""
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import HypergraphError, ParseError

#: Weights within this distance of 0 (mod period) are dropped.
SNAP_TOL = 1e-12


def _canonical_weight(w, d):
    w = math.fmod(float(w), d)
    if w < 0:
        w += d
    if w < SNAP_TOL or d - w < SNAP_TOL:
        return 0.0
    return w


def _check_vertices(vertices):
    vs = tuple(int(v) for v in vertices)
    if not vs:
        raise HypergraphError("an edge needs at least one vertex")
    if len(set(vs)) != len(vs):
        raise HypergraphError(f"repeated vertex in {vs}")
    if min(vs) < 1:
        raise HypergraphError(f"vertices are 1-based, got {vs}")
    return vs


@dataclass(frozen=True)
class Hyperedge:
    vertices: tuple
    weight: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(sorted(_check_vertices(self.vertices))))
        object.__setattr__(self, "weight", float(self.weight))

    def __len__(self):
        return len(self.vertices)


@dataclass(frozen=True, eq=False)
class PhaseEdge:
    """Diagonal gate ``omega**phases[k]`` where ``k`` is the base-d number
    spelled by the digits at ``vertices`` in the listed order."""

    vertices: tuple
    phases: np.ndarray

    def __post_init__(self):
        vs = _check_vertices(self.vertices)
        ph = np.array(self.phases, dtype=np.float64).reshape(-1)
        ph.setflags(write=False)
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "phases", ph)

    def check_dimension(self, d):
        m = len(self.vertices)
        if self.phases.size != d ** m:
            raise HypergraphError(
                f"phase edge on {m} vertices needs {d ** m} phases for d={d}, "
                f"got {self.phases.size}")

    def canonical(self, d):
        """Same gate with sorted vertices and phases reduced into ``[0, d)``."""
        self.check_dimension(d)
        m = len(self.vertices)
        order = np.argsort(self.vertices)
        table = self.phases.reshape((d,) * m).transpose(order).reshape(-1)
        table = np.mod(table, d)
        table[(table < SNAP_TOL) | (d - table < SNAP_TOL)] = 0.0
        return PhaseEdge(tuple(sorted(self.vertices)), table)

    def __eq__(self, other):
        if not isinstance(other, PhaseEdge):
            return NotImplemented
        return self.vertices == other.vertices and np.array_equal(self.phases, other.phases)

    def __hash__(self):
        return hash((self.vertices, self.phases.tobytes()))


@dataclass(frozen=True)
class WeightedHypergraph:
    """Canonical weighted hypergraph on vertices ``1..n``.

    Construction merges edges on the same vertex set by adding weights,
    reduces weights modulo ``d`` and drops zero-weight edges; phase edges on
    the same vertex set are merged entrywise. The stored form is therefore
    canonical and equality is structural.
    """

    n: int
    d: int = 2
    edges: tuple = ()
    phase_edges: tuple = field(default=())

    def __post_init__(self):
        if not isinstance(self.d, (int, np.integer)) or self.d < 2:
            raise HypergraphError(f"d must be an integer >= 2, got {self.d!r}")
        if self.n < 1:
            raise HypergraphError(f"n must be >= 1, got {self.n}")
        d, n = int(self.d), int(self.n)
        weights = {}
        for e in self.edges:
            if not isinstance(e, Hyperedge):
                e = Hyperedge(*e)
            self._check_range(e.vertices, n)
            weights[e.vertices] = weights.get(e.vertices, 0.0) + e.weight
        edges = []
        for vs in sorted(weights, key=lambda v: (len(v), v)):
            w = _canonical_weight(weights[vs], d)
            if w != 0.0:
                edges.append(Hyperedge(vs, w))
        tables = {}
        for pe in self.phase_edges:
            self._check_range(pe.vertices, n)
            pe = pe.canonical(d)
            if pe.vertices in tables:
                tables[pe.vertices] = tables[pe.vertices] + pe.phases
            else:
                tables[pe.vertices] = np.array(pe.phases)
        phase_edges = []
        for vs in sorted(tables, key=lambda v: (len(v), v)):
            pe = PhaseEdge(vs, tables[vs]).canonical(d)
            if np.any(pe.phases != 0.0):
                phase_edges.append(pe)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "edges", tuple(edges))
        object.__setattr__(self, "phase_edges", tuple(phase_edges))

    @staticmethod
    def _check_range(vertices, n):
        if max(vertices) > n:
            raise HypergraphError(f"vertex {max(vertices)} out of range 1..{n}")

    def weight(self, vertices):
        """Canonical weight on ``vertices`` (0 if absent)."""
        key = tuple(sorted(vertices))
        for e in self.edges:
            if e.vertices == key:
                return e.weight
        return 0.0

    def degree(self, v):
        return sum(1 for e in self.edges if v in e.vertices)

    def is_plain_graph(self):
        """True if every edge has two vertices and an integer weight and no
        phase edges are present."""
        return not self.phase_edges and all(
            len(e) == 2 and float(e.weight).is_integer() for e in self.edges)


def add_edge(g, e):
    """Return ``g`` with ``e`` merged in (weights add, then canonicalize)."""
    if not isinstance(e, Hyperedge):
        e = Hyperedge(*e)
    return WeightedHypergraph(g.n, g.d, g.edges + (e,), g.phase_edges)


def add_phase_edge(g, pe):
    return WeightedHypergraph(g.n, g.d, g.edges, g.phase_edges + (pe,))


def star_graph(n_total, d=2):
    """Star on ``n_total`` vertices centred on vertex 1, all weights 1."""
    if n_total < 2:
        raise HypergraphError(f"a star needs at least 2 vertices, got {n_total}")
    return WeightedHypergraph(n_total, d, tuple(Hyperedge((1, j)) for j in range(2, n_total + 1)))


def complete_graph(n, d=2):
    return WeightedHypergraph(
        n, d, tuple(Hyperedge(p) for p in itertools.combinations(range(1, n + 1), 2)))


def adjacency_tensor(g, k):
    """Order-``k`` symmetric adjacency tensor of shape ``(n+1,)*k``.

    Axis index ``v`` is vertex ``v``; index 0 is the padding slot used for
    edges with fewer than ``k`` vertices. Edges larger than ``k`` are left out.
    Phase edges have no scalar weight and are not represented.
    """
    if not 2 <= k <= g.n:
        raise HypergraphError(f"tensor order must be in 2..{g.n}, got {k}")
    gamma = np.zeros((g.n + 1,) * k)
    for e in g.edges:
        if len(e) > k:
            continue
        padded = e.vertices + (0,) * (k - len(e))
        for idx in set(itertools.permutations(padded)):
            gamma[idx] = e.weight
    return gamma


# -- text format ---------------------------------------------------------------

def _format_number(x):
    x = float(x)
    if x.is_integer():
        return str(int(x))
    return repr(x)


def serialize(g):
    lines = [f"d={g.d} n={g.n}"]
    for e in g.edges:
        lines.append("edge " + " ".join(map(str, e.vertices)) + " : " + _format_number(e.weight))
    for pe in g.phase_edges:
        lines.append("phase " + " ".join(map(str, pe.vertices)) + " : "
                     + " ".join(_format_number(p) for p in pe.phases))
    return "\n".join(lines) + "\n"


def _ints(tokens, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"bad vertex list {' '.join(tokens)!r}", lineno) from None


def _floats(tokens, lineno):
    try:
        return [float(t) for t in tokens]
    except ValueError:
        raise ParseError(f"bad number in {' '.join(tokens)!r}", lineno) from None


def parse(text):
    """Parse the line-oriented hypergraph format into a canonical hypergraph."""
    header = None
    edges, phase_edges = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            fields = dict(tok.split("=", 1) for tok in line.split() if "=" in tok)
            if set(fields) != {"d", "n"} or len(line.split()) != 2:
                raise ParseError(f"expected header 'd=<int> n=<int>', got {line!r}", lineno)
            try:
                header = (int(fields["d"]), int(fields["n"]))
            except ValueError:
                raise ParseError(f"non-integer header value in {line!r}", lineno) from None
            if header[0] < 2:
                raise ParseError(f"d must be >= 2, got {header[0]}", lineno)
            if header[1] < 1:
                raise ParseError(f"n must be >= 1, got {header[1]}", lineno)
            continue
        keyword, _, rest = line.partition(" ")
        if ":" not in rest:
            raise ParseError(f"missing ':' in {line!r}", lineno)
        left, right = rest.split(":", 1)
        vertices = _ints(left.split(), lineno)
        values = _floats(right.split(), lineno)
        d, n = header
        if not vertices:
            raise ParseError("edge has no vertices", lineno)
        bad = [v for v in vertices if not 1 <= v <= n]
        if bad:
            raise ParseError(f"vertex {bad[0]} out of range 1..{n}", lineno)
        try:
            if keyword == "edge":
                if len(values) != 1:
                    raise ParseError("edge needs exactly one weight", lineno)
                edges.append(Hyperedge(tuple(vertices), values[0]))
            elif keyword == "phase":
                pe = PhaseEdge(tuple(vertices), values)
                pe.check_dimension(d)
                phase_edges.append(pe)
            else:
                raise ParseError(f"unknown keyword {keyword!r}", lineno)
        except ParseError:
            raise
        except HypergraphError as exc:
            raise ParseError(str(exc), lineno) from None
    if header is None:
        raise ParseError("missing header line")
    return WeightedHypergraph(header[1], header[0], tuple(edges), tuple(phase_edges))


def load(path):
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())
