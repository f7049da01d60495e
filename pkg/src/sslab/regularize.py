"""Perron edge distribution, entropy identity, integer rounding of edge
counts, the type-class regular subgraph of even tensor powers, and its
explicit materialization.

For the max-spectral-radius component G0 with Perron vector x, the ordered
edge distribution is p_ij = a_ij x_i x_j / lambda with marginals pi_i = x_i^2.
For even k = 2s, rounding s * (2 p_ij) per unordered edge gives coordinate
pair counts N_ij whose type class T_k (tuples with n_i coordinates equal to i)
carries a d_k-regular subgraph of the k-th tensor power, with
d_k = prod_i n_i! / prod_j N_ij! and |T_k| = k! / prod_i n_i!.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graphs import CapExceededError, Graph
from .spectra import perron


class RegularizeError(ValueError):
    pass


@dataclass(frozen=True)
class EdgeDistribution:
    vertices: tuple[int, ...]  # component vertex labels in g, sorted
    p: np.ndarray  # symmetric ordered-pair probabilities on the component
    pi: np.ndarray  # marginals, pi_i = x_i^2
    lam: float


def edge_distribution(g: Graph, tol: float = 1e-12) -> EdgeDistribution:
    pd = perron(g, tol=tol)
    comp = g.components[pd.component_id]
    idx = {v: i for i, v in enumerate(comp)}
    x = np.array([pd.x[v] for v in comp])
    x /= np.linalg.norm(x)
    n0 = len(comp)
    p = np.zeros((n0, n0))
    for u, v in g.edges:
        if u in idx and v in idx:
            i, j = idx[u], idx[v]
            val = x[i] * x[j] / pd.lam
            p[i, j] = val
            p[j, i] = val
    return EdgeDistribution(vertices=tuple(comp), p=p, pi=x * x, lam=pd.lam)


def entropy_gap(d: EdgeDistribution) -> float:
    """H(p) - H(pi) in nats; equals log(lambda) exactly in theory."""

    def ent(a: np.ndarray) -> float:
        vals = a[a > 0]
        return float(-(vals * np.log(vals)).sum())

    return ent(d.p) - ent(d.pi)


def round_counts(q: Sequence[float], s: int) -> list[int]:
    """Largest-remainder rounding of s*q to integers summing to s.

    floor(s q_e) everywhere, then +1 on the largest remainders (ties broken by
    lower index) until the sum is s.  Guarantees |m_e - s q_e| < 1.
    """
    if s < 1:
        raise RegularizeError("s must be >= 1")
    scaled = [s * float(x) for x in q]
    m = [math.floor(x) for x in scaled]
    deficit = s - sum(m)
    order = sorted(range(len(q)), key=lambda i: (-(scaled[i] - m[i]), i))
    for i in order[:deficit]:
        m[i] += 1
    return m


@dataclass(frozen=True)
class RegularBundle:
    k: int
    vertices: tuple[int, ...]  # component vertex labels (tuple coordinates)
    n_mat: np.ndarray  # symmetric integer coordinate-pair counts N_ij
    n_vec: tuple[int, ...]  # n_i = sum_j N_ij
    d_k: int
    t_k_size: int
    lambda_k: float


def build_regular(g: Graph, k: int, tol: float = 1e-12) -> RegularBundle:
    if k < 2 or k % 2:
        raise RegularizeError("k must be even and >= 2")
    d = edge_distribution(g, tol=tol)
    comp = d.vertices
    idx = {v: i for i, v in enumerate(comp)}
    comp_edges = sorted(
        (idx[u], idx[v]) for u, v in g.edges if u in idx and v in idx
    )
    q = [2.0 * d.p[i, j] for i, j in comp_edges]
    s = k // 2
    m_e = round_counts(q, s)
    n0 = len(comp)
    n_mat = np.zeros((n0, n0), dtype=np.int64)
    for (i, j), cnt in zip(comp_edges, m_e):
        n_mat[i, j] = cnt
        n_mat[j, i] = cnt
    n_vec = tuple(int(x) for x in n_mat.sum(axis=1))
    assert sum(n_vec) == k
    d_k = 1
    for i in range(n0):
        d_k *= math.factorial(n_vec[i])
        for j in range(n0):
            d_k //= math.factorial(int(n_mat[i, j]))
    t_k = math.factorial(k)
    for ni in n_vec:
        t_k //= math.factorial(ni)
    lam_k = d.lam**k
    # degree can never exceed the tensor-power spectral radius
    assert d_k <= lam_k * (1 + 1e-9), (d_k, lam_k)
    return RegularBundle(
        k=k,
        vertices=comp,
        n_mat=n_mat,
        n_vec=n_vec,
        d_k=d_k,
        t_k_size=t_k,
        lambda_k=lam_k,
    )


def _multiset_perms(counts: list[int]):
    """All sequences using exactly counts[i] copies of symbol i."""
    total = sum(counts)
    seq: list[int] = []

    def rec():
        if len(seq) == total:
            yield tuple(seq)
            return
        for sym, c in enumerate(counts):
            if c > 0:
                counts[sym] -= 1
                seq.append(sym)
                yield from rec()
                seq.pop()
                counts[sym] += 1

    yield from rec()


def materialize_fk(bundle: RegularBundle, g: Graph, cap: int = 5000) -> Graph:
    """Explicit regular subgraph on the type-class tuples.

    Vertices are the tuples with n_i coordinates equal to component vertex i;
    tuples a, b are adjacent iff for every ordered pair (i, j) the number of
    coordinates r with (a_r, b_r) = (i, j) is exactly N_ij.  Verified
    d_k-regular and contained in the tensor power coordinatewise.
    """
    if bundle.t_k_size > cap:
        raise CapExceededError(
            f"type class has {bundle.t_k_size} tuples > cap {cap}", bundle.t_k_size
        )
    comp = bundle.vertices
    n0 = len(comp)
    k = bundle.k
    support = [i for i in range(n0) if bundle.n_vec[i] > 0]
    tuples = list(_multiset_perms([bundle.n_vec[i] for i in range(n0)]))
    assert len(tuples) == bundle.t_k_size
    index = {t: i for i, t in enumerate(tuples)}
    edges = set()
    idx_of = {v: i for i, v in enumerate(comp)}
    for a in tuples:
        positions = {i: [r for r in range(k) if a[r] == i] for i in support}
        # choose, per symbol i, an assignment of values j to its positions
        # with multiplicities N_ij
        per_symbol = []
        for i in support:
            row = [int(bundle.n_mat[i, j]) for j in range(n0)]
            opts = list(_multiset_perms(row)) if bundle.n_vec[i] else [()]
            per_symbol.append((i, opts))
        b_arr = [0] * k

        def rec(si: int):
            if si == len(per_symbol):
                b = tuple(b_arr)
                ia, ib = index[a], index[b]
                if ia != ib:
                    edges.add((min(ia, ib), max(ia, ib)))
                return
            i, opts = per_symbol[si]
            for opt in opts:
                for pos, j in zip(positions[i], opt):
                    b_arr[pos] = j
                rec(si + 1)

        rec(0)
    fk = Graph.from_edges(len(tuples), sorted(edges))
    # audits: exact regularity and containment in the tensor power
    assert all(d == bundle.d_k for d in fk.degrees), "not d_k-regular"
    for ia, ib in fk.edges:
        a, b = tuples[ia], tuples[ib]
        for ai, bi in zip(a, b):
            assert g.has_edge(comp[ai], comp[bi]), "edge leaves the tensor power"
    return fk


def fk_tuples(bundle: RegularBundle) -> list[tuple[int, ...]]:
    """The type-class tuples (component-local symbols) in generation order."""
    n0 = len(bundle.vertices)
    return list(_multiset_perms([bundle.n_vec[i] for i in range(n0)]))
