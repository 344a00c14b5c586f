"""Analytic spectra of canonical commutative geometries, the volume
constant, and the spectral distance as a linear program on metric graphs.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .dixmier import SingularValueSeq, dixmier_estimate, default_schedule


# ----------------------------------------------------------------------
# volume constant

def c_p(p):
    """2^[p/2] / ((4 pi)^(p/2) Gamma(p/2 + 1))."""
    return 2 ** (p // 2) / ((4 * math.pi) ** (p / 2) * math.gamma(p / 2 + 1))


def sphere_volume(p_minus_1):
    """Vol(S^(p-1)) = (4 pi)^(p/2) / (2^(p-1) Gamma(p/2))."""
    p = p_minus_1 + 1
    return (4 * math.pi) ** (p / 2) / (2 ** (p - 1) * math.gamma(p / 2))


def volume_identity(p):
    """Evaluate 2^[p/2] Vol(S^(p-1)) / (p (2 pi)^p) against c(p)."""
    if not (1 <= p <= 12):
        raise ValueError("p in 1..12")
    lhs = 2 ** (p // 2) * sphere_volume(p - 1) / (p * (2 * math.pi) ** p)
    rhs = c_p(p)
    return lhs, rhs, math.isclose(lhs, rhs, rel_tol=1e-12)


# ----------------------------------------------------------------------
# circle and torus spectra

@dataclass
class CircleSpec:
    spin_offset: float = 0.0       # 0 or 1/2
    radius: float = 1.0

    def __post_init__(self):
        if self.spin_offset not in (0.0, 0.5):
            raise ValueError("spin offset is 0 or 1/2")
        if self.radius <= 0:
            raise ValueError("radius must be positive")


def circle_singular_values(spec):
    """Singular values of the inverse circle operator: radius/|n + offset|
    over nonzero lattice points, multiplicity 2 per magnitude (kernel
    omitted at offset 0)."""
    off = spec.spin_offset
    rad = spec.radius

    def fn(max_terms):
        nruns = max_terms // 2 + 1
        ns = np.arange(nruns, dtype=np.float64)
        mags = np.abs(ns + 1.0) if off == 0.0 else ns + 0.5
        return rad / mags, np.full(nruns, 2, dtype=np.int64)
    kernel = 1 if off == 0.0 else 0
    return SingularValueSeq(fn, name=f"circle(offset={off})",
                            kernel_dim=kernel)


@dataclass
class TorusSpec:
    p: int = 2
    radii: tuple = (1.0, 1.0)
    offsets: tuple = (0.0, 0.0)

    def __post_init__(self):
        if not (2 <= self.p <= 4):
            raise ValueError("torus dimension 2..4")
        if len(self.radii) != self.p or len(self.offsets) != self.p:
            raise ValueError("radii/offsets length must equal p")
        if any(r <= 0 for r in self.radii):
            raise ValueError("radii must be positive")
        if any(o not in (0.0, 0.5) for o in self.offsets):
            raise ValueError("offsets are 0 or 1/2")


def torus_eigenvalue_grid(spec, shell_radius):
    """Magnitudes |sum_j (k_j + o_j)^2 / r_j^2|^(1/2) for integer vectors k
    with every |k_j + o_j| / r_j <= shell_radius."""
    axes = []
    for r, o in zip(spec.radii, spec.offsets):
        span = int(math.floor(shell_radius * r - o)) + 1
        axes.append((np.arange(-span, span + 1, dtype=np.float64) + o) / r)
    grids = np.meshgrid(*axes, indexing='ij')
    lam2 = sum(g * g for g in grids)
    return np.sqrt(lam2.ravel())


def torus_singular_values(spec, max_terms=2 * 10**7):
    """Singular values of the inverse operator: 1/|lambda| over the dual
    lattice with spinor multiplicity 2^[p/2], merged into decreasing
    runs with exact magnitude ties."""
    mult = 2 ** (spec.p // 2)
    # choose the shell just large enough for max_terms
    vol_ball = math.pi ** (spec.p / 2) / math.gamma(spec.p / 2 + 1)
    dens = np.prod(spec.radii) * vol_ball
    shell = (1.25 * max_terms / (mult * dens)) ** (1.0 / spec.p) + 2
    lam = torus_eigenvalue_grid(spec, shell)
    lam = lam[lam > 0]
    lam = np.sort(lam)
    # exact tie grouping on the squared magnitudes (integers over a common
    # denominator for rational radii/offsets)
    lam2 = lam * lam
    keys = np.round(lam2 * 4 * np.prod(np.array(spec.radii) ** 2)).astype(
        np.int64)
    uniq, counts = np.unique(keys, return_counts=True)
    order = np.argsort(uniq)
    uniq, counts = uniq[order], counts[order]
    mags = np.sqrt(uniq / (4.0 * np.prod(np.array(spec.radii) ** 2)))
    values = 1.0 / mags
    counts = counts * mult

    def fn(n):
        if n > counts.sum():
            raise ValueError("enumerated shell exhausted; raise max_terms")
        return values, counts
    return SingularValueSeq(fn, name=f"torus(p={spec.p})")


def torus_power_sequence(spec, power, max_terms=2 * 10**7):
    """Singular values of the inverse operator raised to `power`."""
    base = torus_singular_values(spec, max_terms)

    def fn(n):
        v, c = base.runs(n)
        return v ** power, c
    return SingularValueSeq(fn, name=f"torus(p={spec.p})^{power}")


def lattice_count_inside(spec, radius):
    """Direct count of lattice points with 0 < |lambda| <= radius."""
    lam = torus_eigenvalue_grid(spec, radius + 1e-9)
    return int(np.count_nonzero((lam > 0) & (lam <= radius + 1e-12)))


def volume_check(model, p=None, schedule=None, spin_offset=0.0):
    """Dixmier estimate of the p-th inverse power against c(p) Vol."""
    schedule = schedule or default_schedule()
    if model == "circle":
        spec = CircleSpec(spin_offset=spin_offset)
        seq = circle_singular_values(spec)
        est = dixmier_estimate(seq, schedule)
        expected = c_p(1) * 2 * math.pi * spec.radius
        return est, expected
    if model == "torus":
        p = p or 2
        spec = TorusSpec(p=p, radii=(1.0,) * p, offsets=(spin_offset,) * p)
        seq = torus_power_sequence(spec, float(p),
                                   max_terms=int(1.3 * max(schedule)))
        est = dixmier_estimate(seq, schedule)
        expected = c_p(p) * (2 * math.pi) ** p
        return est, expected
    raise ValueError(f"unknown model {model!r}")


# ----------------------------------------------------------------------
# experimental: round sphere spectrum (behind a flag; multiplicities
# validated only through a growth-law fit, not part of acceptance)

def sphere_singular_values(experimental=False):
    if not experimental:
        raise ValueError("the 2-sphere spectrum is experimental; pass "
                         "experimental=True")

    def fn(n):
        ks = []
        vals = []
        counts = []
        k = 1
        total = 0
        while total < n:
            vals.append(1.0 / k)
            counts.append(4 * k)      # +-k each with multiplicity 2k
            total += 4 * k
            k += 1
        return np.array(vals), np.array(counts, dtype=np.int64)
    return SingularValueSeq(fn, name="sphere(experimental)")


# ----------------------------------------------------------------------
# metric graphs and the spectral distance

@dataclass
class MetricGraph:
    vertices: list
    edges: list          # (u, v, length)
    _adj: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._adj = {v: [] for v in self.vertices}
        for u, v, l in self.edges:
            if l <= 0:
                raise ValueError("edge lengths must be positive")
            if u not in self._adj or v not in self._adj:
                raise ValueError("edge endpoint outside vertex set")
            self._adj[u].append((v, float(l)))
            self._adj[v].append((u, float(l)))

    def adjacency(self, v):
        return self._adj[v]


def shortest_path_distance(graph, x, y):
    """Dijkstra; the exact dual of the gradient-constraint program."""
    if x not in graph._adj or y not in graph._adj:
        raise ValueError("unknown vertex")
    dist = {x: 0.0}
    heap = [(0.0, x)]
    seen = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in seen:
            continue
        seen.add(u)
        if u == y:
            return d
        for v, l in graph.adjacency(u):
            nd = d + l
            if nd < dist.get(v, math.inf):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    raise ValueError("vertices are not connected: the supremum is "
                     "unbounded")


def lp_distance(graph, x, y):
    """Primal program: maximize a(x) - a(y) subject to the per-edge
    Lipschitz constraints |a(u) - a(v)| <= length."""
    from scipy.optimize import linprog
    idx = {v: i for i, v in enumerate(graph.vertices)}
    n = len(graph.vertices)
    c = np.zeros(n)
    c[idx[x]] = -1.0
    c[idx[y]] = 1.0
    rows = []
    rhs = []
    for u, v, l in graph.edges:
        row = np.zeros(n)
        row[idx[u]] = 1.0
        row[idx[v]] = -1.0
        rows.append(row.copy())
        rhs.append(l)
        rows.append(-row)
        rhs.append(l)
    # pin one value; the objective only sees differences
    a_eq = np.zeros((1, n))
    a_eq[0, idx[y]] = 1.0
    res = linprog(c, A_ub=np.array(rows), b_ub=np.array(rhs),
                  A_eq=a_eq, b_eq=[0.0],
                  bounds=[(None, None)] * n, method="highs")
    if res.status == 3:
        raise ValueError("vertices are not connected: the supremum is "
                         "unbounded")
    if not res.success:
        raise RuntimeError(f"linear program failed: {res.message}")
    return -res.fun


def connes_distance(graph, x, y, cross_validate=False, tol=1e-9):
    """Spectral distance on the graph; shortest path is the primary
    (exact dual) algorithm, optionally cross-validated against the
    primal program."""
    d = shortest_path_distance(graph, x, y)
    if cross_validate:
        lp = lp_distance(graph, x, y)
        if abs(lp - d) > tol:
            raise AssertionError(f"primal/dual gap {lp} vs {d}")
    return d


def discretized_circle(n=200, radius=1.0):
    """Cycle graph with n vertices and equal edge lengths 2 pi r / n."""
    verts = list(range(n))
    step = 2 * math.pi * radius / n
    edges = [(i, (i + 1) % n, step) for i in range(n)]
    return MetricGraph(verts, edges)


def random_connected_graph(rng, max_vertices=50):
    """Random tree plus chords, with lengths in (0.1, 2)."""
    n = rng.randint(2, max_vertices)
    verts = list(range(n))
    edges = []
    for v in range(1, n):
        u = rng.randrange(v)
        edges.append((u, v, rng.uniform(0.1, 2.0)))
    for _ in range(rng.randint(0, n)):
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            edges.append((u, v, rng.uniform(0.1, 2.0)))
    return MetricGraph(verts, edges)
