"""Explicit everywhere-almost-hittable hypergraphs from affine hashing, and
the partial function built on top of them.

Grid vertex (i, j), 0 <= i, j < n, has id ``i*n + j + 1``. Edge order is
lexicographic in the hash index (a, b). The function's input puts the n^2
vertex variables first (bit ``id - 1``), then one variable per edge.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .boolfun import NOTONE, UNDETERMINED, ZERO, Out, PartialFunction, Restriction, is_certificate
from .errors import ConstructionFailed, NotApplicable, NotPrime
from .hypergraph import Hypergraph, dumps_hg
from . import measures

EXACT_ZERO_VERTICES = 16  # exact C_notone search when this few vertices are 0


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % p for p in range(2, math.isqrt(n) + 1))


@dataclass(frozen=True)
class HashFamily:
    """Maps h_k : [n] -> [n]; ``table[k, i] = h_k(i)``, ``index[k] = (a, b)``."""

    n: int
    table: np.ndarray
    index: tuple

    def __call__(self, a: int, b: int, i: int) -> int:
        return int(self.table[self.index.index((a, b)), i])

    def __len__(self) -> int:
        return self.table.shape[0]


def build_affine_family(n: int) -> HashFamily:
    if not is_prime(n):
        raise NotPrime(f"{n} is not prime")
    ab = [(a, b) for a in range(n) for b in range(n)]
    i = np.arange(n)
    table = np.array([(a * i + b) % n for a, b in ab], dtype=np.int64)
    table.setflags(write=False)
    return HashFamily(n, table, tuple(ab))


def independence_counts(H: HashFamily) -> tuple[np.ndarray, np.ndarray]:
    """``single[i, j] = #{h : h(i)=j}``, ``pair[i, i2, j*n + j2] = #{h : h(i)=j, h(i2)=j2}``."""
    n, T = H.n, H.table
    single = np.stack([np.bincount(T[:, i], minlength=n) for i in range(n)])
    pair = np.zeros((n, n, n * n), dtype=np.int64)
    for i in range(n):
        for i2 in range(n):
            if i != i2:
                pair[i, i2] = np.bincount(T[:, i] * n + T[:, i2], minlength=n * n)
    return single, pair


def verify_pairwise_independence(H: HashFamily) -> bool:
    n = H.n
    single, pair = independence_counts(H)
    if not (single == n).all():
        return False
    off = ~np.eye(n, dtype=bool)
    return bool((pair[off] == 1).all())


@dataclass
class EahParams:
    phi: float = 1 / 100
    size_factor: float = 100.0
    miss_budget: int | None = None  # None means n
    theta: float = 9 / 10

    def __post_init__(self):
        if not 0 <= self.phi < 1:
            raise ValueError("phi must lie in [0, 1)")
        if not 0 < self.theta < 1:
            raise ValueError("theta must lie in (0, 1)")

    def n_tilde(self, n: int) -> int:
        return max(1, math.ceil(self.size_factor * n * math.ceil(math.log2(n))))

    def misses(self, n: int) -> int:
        return n if self.miss_budget is None else self.miss_budget

    def to_dict(self) -> dict:
        return {"phi": self.phi, "size_factor": self.size_factor, "miss_budget": self.miss_budget, "theta": self.theta}


@dataclass
class EahGraph:
    n: int
    family: HashFamily
    hypergraph: Hypergraph
    edge_ids: np.ndarray  # |E| x n, 1-based vertex ids, row i of the grid in column i

    @property
    def vertex_count(self) -> int:
        return self.n * self.n

    @property
    def edge_count(self) -> int:
        return self.edge_ids.shape[0]

    def edge_vertices(self, k: int) -> list[int]:
        return [int(v) for v in self.edge_ids[k]]

    def export_hg(self) -> str:
        header = [f"eah n={self.n}", "vertex (i,j) -> id i*n+j+1, 0-based i,j"]
        header += [f"edge {k + 1} = h(a={a},b={b})" for k, (a, b) in enumerate(self.family.index)]
        edges = Hypergraph(self.vertex_count, [sorted(e) for e in self.edge_ids.tolist()])
        # keep hash order rather than whatever sorting a consumer might apply
        return dumps_hg(edges, header)


def build_eah_graph(n: int) -> EahGraph:
    H = build_affine_family(n)
    rows = np.arange(n)
    ids = rows[None, :] * n + H.table + 1
    ids.setflags(write=False)
    G = Hypergraph(n * n, ids.tolist())
    return EahGraph(n, H, G, ids)


def _in_set(G: EahGraph, F) -> np.ndarray:
    inF = np.zeros(G.vertex_count + 1, dtype=bool)
    F = np.asarray(sorted(F), dtype=np.int64)
    if F.size:
        inF[F] = True
    return inF


def mostly_forbidden_edges(G: EahGraph, F, theta: float = 9 / 10) -> list[int]:
    """Indices of edges with at least theta*n of their vertices in F."""
    counts = _in_set(G, F)[G.edge_ids].sum(axis=1)
    return [int(k) for k in np.flatnonzero(counts >= theta * G.n)]


@dataclass
class HittingResult:
    vertices: tuple
    misses: int
    strategy: str
    attempts: int

    @property
    def size(self) -> int:
        return len(self.vertices)

    def to_dict(self) -> dict:
        return {"size": self.size, "misses": self.misses, "strategy": self.strategy, "attempts": self.attempts}


def missed_edges(G: EahGraph, H) -> np.ndarray:
    return np.flatnonzero(~_in_set(G, H)[G.edge_ids].any(axis=1))


def find_avoiding_hitting_set(G: EahGraph, F, size_budget: int, miss_budget: int, seed: int = 0, samples: int = 32):
    """A set H inside V minus F, |H| <= size_budget, missing <= miss_budget edges.

    Tries seeded uniform samples first, then one greedy max-coverage pass.
    Returns a HittingResult or None.
    """
    inF = _in_set(G, F)
    allowed = np.flatnonzero(~inF[1:]) + 1
    size = min(int(size_budget), allowed.size)
    if G.edge_count <= miss_budget:
        return HittingResult((), G.edge_count, "empty", 0)
    rng = np.random.default_rng(seed)
    for t in range(samples):
        H = rng.choice(allowed, size=size, replace=False)
        miss = missed_edges(G, H).size
        if miss <= miss_budget:
            return HittingResult(tuple(sorted(int(v) for v in H)), int(miss), "sample", t + 1)
    # greedy: repeatedly take the allowed vertex on the most uncovered edges
    uncovered = np.ones(G.edge_count, dtype=bool)
    usable = np.zeros(G.vertex_count + 1, dtype=bool)
    usable[allowed] = True
    H = []
    while uncovered.sum() > miss_budget and len(H) < size:
        deg = np.bincount(G.edge_ids[uncovered].ravel(), minlength=G.vertex_count + 1)
        deg[~usable] = -1
        v = int(np.argmax(deg))
        if deg[v] <= 0:
            break
        H.append(v)
        usable[v] = False
        uncovered &= ~(G.edge_ids == v).any(axis=1)
    miss = int(uncovered.sum())
    if miss <= miss_budget:
        return HittingResult(tuple(sorted(H)), miss, "greedy", samples + 1)
    return None


def _trial(G: EahGraph, params: EahParams, seed: int, t: int, size_budget):
    n = G.n
    rng = np.random.default_rng(seed ^ t)
    k = math.floor(params.phi * n * n)
    F = (rng.choice(n * n, size=k, replace=False) + 1).tolist()
    M = mostly_forbidden_edges(G, F, params.theta)
    budget = params.n_tilde(n) if size_budget is None else size_budget
    hit = find_avoiding_hitting_set(G, F, budget, params.misses(n), seed ^ t)
    return {
        "trial": t,
        "M": len(M),
        "M_ok": len(M) <= params.misses(n),
        "hit": hit is not None,
        "H": hit.size if hit else None,
        "misses": hit.misses if hit else None,
    }


def _summary(vals) -> dict:
    if not vals:
        return {"min": None, "median": None, "max": None}
    return {"min": min(vals), "median": float(np.median(vals)), "max": max(vals)}


def eah_property_report(G: EahGraph, params: EahParams, trials: int = 100, seed: int = 0, size_budget=None, threads: int = 1) -> dict:
    """Sample forbidden sets F and record |M| and hitting-set success per trial.

    Trial t draws from seed ^ t, so the outcome does not depend on threads.
    """
    run = lambda t: _trial(G, params, seed, t, size_budget)
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            rows = list(ex.map(run, range(trials)))
    else:
        rows = [run(t) for t in range(trials)]
    hits = [r for r in rows if r["hit"]]
    return {
        "n": G.n,
        "params": params.to_dict(),
        "forbidden_size": math.floor(params.phi * G.n * G.n),
        "size_budget": params.n_tilde(G.n) if size_budget is None else size_budget,
        "miss_budget": params.misses(G.n),
        "trials": trials,
        "seed": seed,
        "M": _summary([r["M"] for r in rows]),
        "M_all_ok": all(r["M_ok"] for r in rows),
        "success_rate": len(hits) / trials if trials else 1.0,
        "H": _summary([r["H"] for r in hits]),
        "misses": _summary([r["misses"] for r in hits]),
    }


# the partial function -------------------------------------------------------------


@dataclass
class _Layout:
    n: int
    V: int
    E: int
    edge_ids: np.ndarray

    def split(self, x: int) -> tuple[np.ndarray, np.ndarray]:
        bits = np.array([(x >> i) & 1 for i in range(self.V + self.E)], dtype=bool)
        return bits[: self.V], bits[self.V :]


def eah_arity(G: EahGraph) -> int:
    return G.vertex_count + G.edge_count


def is_one_input(G: EahGraph, x: int) -> bool:
    V = G.vertex_count
    for k in range(G.edge_count):
        if x >> (V + k) & 1 and all(x >> (v - 1) & 1 for v in G.edge_ids[k]):
            return True
    return False


def _edge_masks(G: EahGraph) -> list[int]:
    return [sum(1 << (int(v) - 1) for v in row) for row in G.edge_ids]


def not_one_cost(G: EahGraph, x: int, Z: int, emasks=None) -> int | None:
    """Size of the cheapest NOTONE-certificate reading zero vertices Z.

    Reads Z plus every edge variable of an edge Z misses. None when an edge
    with x_e = 1 is missed (reading that edge variable would not help).
    """
    emasks = emasks or _edge_masks(G)
    V = G.vertex_count
    cost = bin(Z).count("1")
    for k, em in enumerate(emasks):
        if not em & Z:
            if x >> (V + k) & 1:
                return None
            cost += 1
    return cost


def greedy_not_one(G: EahGraph, x: int) -> int:
    """Upper bound on C_notone at a non-ONE input."""
    V = G.vertex_count
    emasks = _edge_masks(G)
    zeros = [v for v in range(V) if not x >> v & 1]
    Z = 0
    forced = [k for k in range(G.edge_count) if x >> (V + k) & 1]
    for k in forced:
        if not emasks[k] & Z:
            Z |= 1 << min(v for v in zeros if emasks[k] >> v & 1)
    best = not_one_cost(G, x, Z, emasks)
    while True:
        cand = None
        for v in zeros:
            if Z >> v & 1:
                continue
            c = not_one_cost(G, x, Z | 1 << v, emasks)
            if c is not None and c < best and (cand is None or c < cand[0]):
                cand = (c, v)
        if cand is None:
            return best
        best, Z = cand[0], Z | 1 << cand[1]


def exact_not_one(G: EahGraph, x: int) -> int:
    """Exact C_notone by trying every set of zero vertices (few zeros only)."""
    V = G.vertex_count
    emasks = _edge_masks(G)
    zeros = [v for v in range(V) if not x >> v & 1]
    best = None
    for r in range(len(zeros) + 1):
        if best is not None and r >= best:
            break
        for combo in combinations(zeros, r):
            c = not_one_cost(G, x, sum(1 << v for v in combo), emasks)
            if c is not None and (best is None or c < best):
                best = c
    return best


def eah_evaluator(G: EahGraph, params: EahParams):
    threshold = 2 * params.n_tilde(G.n)

    def evaluate(x: int):
        if is_one_input(G, x):
            return Out.ONE
        if greedy_not_one(G, x) <= threshold:
            return Out.ZERO
        zeros = G.vertex_count - bin(x & ((1 << G.vertex_count) - 1)).count("1")
        if zeros <= EXACT_ZERO_VERTICES:
            return Out.ZERO if exact_not_one(G, x) <= threshold else Out.STAR
        return UNDETERMINED

    return evaluate


def materialize_eah(G: EahGraph, params: EahParams) -> PartialFunction:
    """Exact table through the generic certificate oracle.

    NOTONE membership only depends on whether an input is a ONE-input, so
    C_notone(f, x) equals C_0 of the ONE-indicator at x.
    """
    N = eah_arity(G)
    ones = np.array([is_one_input(G, x) for x in range(1 << N)], dtype=np.uint8)
    indicator = PartialFunction(N, ones)
    threshold = 2 * params.n_tilde(G.n)
    table = np.empty(1 << N, dtype=np.uint8)
    for x in range(1 << N):
        if ones[x]:
            table[x] = Out.ONE
        else:
            c = measures.min_certificate(indicator, x, ZERO).size
            table[x] = Out.ZERO if c <= threshold else Out.STAR
    return PartialFunction(N, table, name=f"EAH{G.n}")


def build_eah_function(G: EahGraph, params: EahParams | None = None, materialize: bool | None = None) -> PartialFunction:
    params = params or EahParams()
    if materialize is None:
        materialize = G.n == 2
    if materialize:
        return materialize_eah(G, params)
    return PartialFunction(eah_arity(G), evaluator=eah_evaluator(G, params), name=f"EAH{G.n}")


def eah_hard_input(G: EahGraph) -> int:
    """All vertex variables 1, all edge variables 0."""
    return (1 << G.vertex_count) - 1


@dataclass
class NotOneCertificate:
    size: int
    restriction: Restriction
    hitting_set: tuple
    missed: list
    verified: bool
    structural_ok: bool
    bound: int
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "size": self.size,
            "restriction": self.restriction.entries,
            "hitting_set": list(self.hitting_set),
            "missed_edges": self.missed,
            "verified": self.verified,
            "structural_ok": self.structural_ok,
            "bound": self.bound,
        }


def not_one_cert_upper_bound(G: EahGraph, params: EahParams, x: int, f: PartialFunction | None = None, seed: int = 0) -> NotOneCertificate:
    """Build the hitting-set-plus-missed-edges certificate for a non-ONE x.

    H is drawn from the zero vertices of x (so the one-vertices play the
    forbidden set). Missed edges are read through their edge variable, or
    through one of their zero vertices when that variable is 1.
    """
    if is_one_input(G, x):
        raise NotApplicable("x is a ONE input")
    n, V = G.n, G.vertex_count
    ones = [v + 1 for v in range(V) if x >> v & 1]
    nt = params.n_tilde(n)
    hit = find_avoiding_hitting_set(G, ones, nt, params.misses(n), seed)
    if hit is None:
        raise ConstructionFailed("no avoiding hitting set found within budget")
    mask = 0
    for v in hit.vertices:
        mask |= 1 << (v - 1)
    missed = missed_edges(G, hit.vertices).tolist()
    for k in missed:
        if x >> (V + k) & 1:
            zero = min(v for v in G.edge_vertices(k) if not x >> (v - 1) & 1)
            mask |= 1 << (zero - 1)
        else:
            mask |= 1 << (V + k)
    rho = Restriction.of_input(eah_arity(G), x, mask)
    structural = all(
        (mask >> (V + k) & 1 and not x >> (V + k) & 1)
        or any(mask >> (v - 1) & 1 and not x >> (v - 1) & 1 for v in G.edge_vertices(k))
        for k in range(G.edge_count)
    )
    verified = False
    if f is not None and (f.is_explicit or rho.size >= f.n - 20):
        verified = is_certificate(f, rho, NOTONE)
    return NotOneCertificate(rho.size, rho, hit.vertices, missed, verified, structural, nt + n)


__all__ = [
    "EahGraph",
    "EahParams",
    "HashFamily",
    "HittingResult",
    "NotOneCertificate",
    "build_affine_family",
    "build_eah_function",
    "build_eah_graph",
    "eah_arity",
    "eah_hard_input",
    "eah_property_report",
    "exact_not_one",
    "find_avoiding_hitting_set",
    "greedy_not_one",
    "independence_counts",
    "is_one_input",
    "is_prime",
    "materialize_eah",
    "missed_edges",
    "mostly_forbidden_edges",
    "not_one_cert_upper_bound",
    "verify_pairwise_independence",
]
