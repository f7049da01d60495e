"""The supersaturation pipeline: heavy-edge pruning with a gap trace,
localization diagnostics, the level-set A/C/D partition, aligned-row and
row-cover analysis, and the branch-dispatching counting driver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .graphs import Graph
from .homcounts import CountResult, count_c2t, count_ktt
from .sidorenko import c2t_copy_lower, constants, ktt_copy_lower
from .spectra import PerronData, perron, split_lambda, top_singular


class SupersatError(ValueError):
    pass


class NotHeavyError(SupersatError):
    def __init__(self, message: str, violations: list):
        super().__init__(message)
        self.violations = violations


class TooDelocalizedError(SupersatError):
    def __init__(self, message: str, k_levels: int, index_set: list):
        super().__init__(message)
        self.k_levels = k_levels
        self.index_set = index_set


# -- heavy-edge pruning ----------------------------------------------------


@dataclass(frozen=True)
class PruneStep:
    edge: tuple[int, int]
    m_i: int  # edges before this deletion
    lambda_i: float
    split_ref: float  # split_lambda(t-1, m_i)
    delta_i: float  # lambda_i - split_ref
    product: float  # x_u x_v of the deleted edge


@dataclass(frozen=True)
class PruneTrace:
    eta: float
    t: int
    steps: tuple[PruneStep, ...]
    initial_m: int
    initial_lambda: float
    final_graph: Graph
    final_perron: Optional[PerronData]
    alpha: float  # m' / m
    gap_ratio: Optional[float]  # lambda(H) / sqrt(m')
    emptied: bool


def heavy_prune(g: Graph, t: int, eta: Optional[float] = None) -> PruneTrace:
    """Delete light edges one at a time until every surviving edge uv has
    Perron product x_u x_v >= eta / sqrt(m).

    Fresh Perron data every step (warm-started); among violating edges the one
    with the smallest product is deleted, ties broken by lexicographic edge.
    """
    if t < 2:
        raise SupersatError("t must be >= 2")
    if eta is None:
        eta = 1.0 / (16 * t)
    if not (0 < eta < 0.25):
        raise SupersatError("eta must lie in (0, 1/4)")
    if g.edge_count < 1:
        raise SupersatError("input graph has no edges")
    m0 = g.edge_count
    steps: list[PruneStep] = []
    current = g
    prev_x = None
    pd = None
    lam0 = None
    while current.edge_count > 0:
        pd = perron(current, x0=prev_x)
        prev_x = pd.x
        m_i = current.edge_count
        if lam0 is None:
            lam0 = pd.lam
        threshold = eta / math.sqrt(m_i)
        worst = None
        for u, v in current.edges:
            prod = float(pd.x[u] * pd.x[v])
            if prod < threshold and (worst is None or prod < worst[0] - 0.0):
                if worst is None or prod < worst[0]:
                    worst = (prod, (u, v))
        if worst is None:
            break
        prod, edge = worst
        ref = (
            split_lambda(t - 1, m_i)
            if m_i >= max(1, (t - 1) * (t - 2) // 2)
            else 0.0
        )
        steps.append(
            PruneStep(
                edge=edge,
                m_i=m_i,
                lambda_i=pd.lam,
                split_ref=ref,
                delta_i=pd.lam - ref,
                product=prod,
            )
        )
        current = current.delete_edge(*edge)
        if current.edge_count == 0:
            pd = None
            break
    m_prime = current.edge_count
    final_pd = pd if m_prime > 0 else None
    gap_ratio = final_pd.lam / math.sqrt(m_prime) if final_pd else None
    return PruneTrace(
        eta=eta,
        t=t,
        steps=tuple(steps),
        initial_m=m0,
        initial_lambda=lam0 if lam0 is not None else 0.0,
        final_graph=current,
        final_perron=final_pd,
        alpha=m_prime / m0,
        gap_ratio=gap_ratio,
        emptied=m_prime == 0,
    )


def heavy_violations(g: Graph, pd: PerronData, eta: float) -> list:
    thr = eta / math.sqrt(g.edge_count)
    return [
        (u, v, float(pd.x[u] * pd.x[v]))
        for u, v in g.edges
        if pd.x[u] * pd.x[v] < thr
    ]


# -- localization diagnostics ----------------------------------------------


def localization_g(pd: PerronData, m: int) -> float:
    if m < 1:
        raise SupersatError("m must be >= 1")
    return float(np.max(pd.x)) * m**0.25


def delocalization_check(pd: PerronData, m: int, delta: float) -> bool:
    """If lambda^2 >= (1+delta) m then the sup-norm localization parameter is
    below delta^{-4}.  Vacuously true when the hypothesis fails."""
    if not (0 < delta <= 1 / 3):
        raise SupersatError("delta must lie in (0, 1/3]")
    if pd.lam**2 < (1 + delta) * m:
        return True
    return localization_g(pd, m) < delta**-4.0


# -- level-set A/C/D partition ---------------------------------------------


@dataclass(frozen=True)
class AcdPartition:
    a_set: tuple[int, ...]
    c_set: tuple[int, ...]
    d_set: tuple[int, ...]
    sup_norm: float  # L = ||x||_inf
    g_loc: float  # L m^{1/4}
    g_tilde: float  # g / sqrt(eta)
    k_levels: int  # K = ceil(2 log2 g_tilde) + 1
    ell: int  # ceil(log2 K)
    index_set: tuple[int, ...]  # I
    s_sums: dict  # i -> S_i
    i_star: int
    s_threshold: float  # theta_{i*}
    r_threshold: float  # theta_{K - i*}
    e_ac: int  # edges between A and C
    e_core: int  # edges inside C
    t1_ok: bool
    t2_ok: bool
    t3_ok: bool


def verify_T(
    h: Graph, a_set: Sequence[int], c_set: Sequence[int], d_set: Sequence[int]
) -> tuple[bool, bool, bool]:
    """(T1) D independent; (T2) no C-D edges; (T3) every edge lies inside C
    or is incident to A.  Exhaustive edge scan."""
    a, c, d = set(a_set), set(c_set), set(d_set)
    if a & c or a & d or c & d or (a | c | d) != set(range(h.n)):
        raise SupersatError("A, C, D must partition the vertex set")
    t1 = t2 = t3 = True
    for u, v in h.edges:
        if u in d and v in d:
            t1 = False
        if (u in c and v in d) or (u in d and v in c):
            t2 = False
        if not ((u in c and v in c) or u in a or v in a):
            t3 = False
    return t1, t2, t3


def acd_partition(
    h: Graph, eta: float, pd: Optional[PerronData] = None
) -> AcdPartition:
    """Dyadic level-set partition of the Perron vector into A / C / D.

    Thresholds theta_h = 2^{-h} L for 0 <= h <= K; the window index i* is
    chosen from I = {floor(K/2)-floor(sqrt(K)), ..., floor(K/2)-ceil(sqrt(K)/2)}
    minimizing S_i = sum_{j<ell} |F_{i-j}| with F_i the edges between the
    middle band C_i and the boundary shell B_i.  Requires the input to satisfy
    the eta-heavy condition and the index window to clear ell (otherwise a
    too-delocalized error).
    """
    if h.edge_count < 1:
        raise SupersatError("input graph has no edges")
    if pd is None:
        pd = perron(h)
    m = h.edge_count
    bad = heavy_violations(h, pd, eta)
    if bad:
        raise NotHeavyError(f"{len(bad)} edges below the eta-heavy threshold", bad)
    x = pd.x
    sup = float(np.max(x))
    g_loc = sup * m**0.25
    g_tilde = g_loc / math.sqrt(eta)
    k_levels = math.ceil(2 * math.log2(g_tilde)) + 1 if g_tilde > 1 else 1
    ell = math.ceil(math.log2(k_levels)) if k_levels > 1 else 1
    lo = k_levels // 2 - math.isqrt(k_levels)
    hi = k_levels // 2 - math.ceil(math.sqrt(k_levels) / 2)
    index_set = list(range(lo, hi + 1))
    if not index_set or min(index_set) < max(ell, 1):
        raise TooDelocalizedError(
            f"index window {index_set} does not clear ell={ell} (K={k_levels})",
            k_levels,
            index_set,
        )

    def theta(hh: int) -> float:
        return 2.0**-hh * sup

    def c_band(i: int) -> set:
        return {v for v in range(h.n) if theta(k_levels - i) < x[v] <= theta(i)}

    def b_shell(i: int) -> set:
        return {v for v in range(h.n) if theta(i) < x[v] <= theta(i - 1)}

    needed = range(min(index_set) - ell + 1, max(index_set) + 1)
    f_sizes = {}
    for i in needed:
        ci, bi = c_band(i), b_shell(i)
        f_sizes[i] = sum(
            1 for u, v in h.edges if (u in ci and v in bi) or (u in bi and v in ci)
        )
    s_sums = {i: sum(f_sizes[i - j] for j in range(ell)) for i in index_set}
    i_star = min(index_set, key=lambda i: (s_sums[i], i))
    s_thr = theta(i_star)
    r_thr = theta(k_levels - i_star)
    a_set = tuple(v for v in range(h.n) if x[v] > s_thr)
    c_set = tuple(v for v in range(h.n) if r_thr < x[v] <= s_thr)
    d_set = tuple(v for v in range(h.n) if x[v] <= r_thr)
    assert s_thr * r_thr < eta / math.sqrt(m) + 1e-15, "threshold product too large"
    t1, t2, t3 = verify_T(h, a_set, c_set, d_set)
    aset, cset = set(a_set), set(c_set)
    e_ac = sum(
        1
        for u, v in h.edges
        if (u in aset and v in cset) or (u in cset and v in aset)
    )
    e_core = sum(1 for u, v in h.edges if u in cset and v in cset)
    return AcdPartition(
        a_set=a_set,
        c_set=c_set,
        d_set=d_set,
        sup_norm=sup,
        g_loc=g_loc,
        g_tilde=g_tilde,
        k_levels=k_levels,
        ell=ell,
        index_set=tuple(index_set),
        s_sums=s_sums,
        i_star=i_star,
        s_threshold=s_thr,
        r_threshold=r_thr,
        e_ac=e_ac,
        e_core=e_core,
        t1_ok=t1,
        t2_ok=t2,
        t3_ok=t3,
    )


# -- aligned rows and row cover --------------------------------------------


def aligned_rows(
    h: Graph, a_set: Sequence[int], d_set: Sequence[int], theta: float
):
    """Rows of the A x D incidence matrix whose squared normalized inner
    product with the top right singular vector is >= 1 - theta.

    Returns (R, (sigma1, v_right, u_left)).
    """
    if not (0 <= theta <= 1):
        raise SupersatError("theta must lie in [0, 1]")
    a_sorted = sorted(set(a_set))
    d_sorted = sorted(set(d_set))
    if set(a_sorted) & set(d_sorted):
        raise SupersatError("A and D must be disjoint")
    if not a_sorted or not d_sorted:
        raise SupersatError("empty incidence matrix")
    sigma1, v_right, u_left = top_singular(a_sorted, d_sorted, h)
    if sigma1 == 0:
        raise SupersatError("empty incidence matrix")
    d_index = {v: j for j, v in enumerate(d_sorted)}
    r_set = []
    for a in a_sorted:
        nbrs = [d_index[w] for w in h.adjacency[a] if w in d_index]
        if not nbrs:
            continue
        row = np.zeros(len(d_sorted))
        row[nbrs] = 1.0
        row /= np.linalg.norm(row)
        if float(row @ v_right) ** 2 >= 1 - theta - 1e-12:
            r_set.append(a)
    return r_set, (sigma1, v_right, u_left)


@dataclass(frozen=True)
class RowCoverOutcome:
    variant: str  # "many-copies" | "cover"
    r_set: tuple[int, ...]
    theta: float
    epsilon: float
    sigma1: float
    e_ad: int
    e_uncovered: int  # e(A \ R, D)
    degenerate: bool = False
    # many-copies fields
    d_star: Optional[int] = None
    floor_l: Optional[int] = None
    copy_bound: Optional[int] = None
    # cover fields
    b_set: Optional[tuple[int, ...]] = None
    e_ar_b: Optional[int] = None  # e(A \ R, B)
    e_r_dnb: Optional[int] = None  # e(R, D \ B)


def row_cover_analyze(
    h: Graph, a_set: Sequence[int], d_set: Sequence[int], t: int
) -> RowCoverOutcome:
    """Aligned-row dichotomy on the A-D incidence structure.

    epsilon = 1 - sigma1^2/e(A,D), theta = sqrt(epsilon).  With R the
    theta-aligned rows: |R| >= t gives the many-copies bound
    C(|R|,t) * C(L,t) with L = floor((1-2(t-1)theta) * min_R deg_D);
    1 <= |R| < t gives the cover B = intersection of row neighborhoods with
    its two exception-edge counts; an empty R falls back to the max-degree
    row with a degenerate flag.
    """
    if t < 2:
        raise SupersatError("t must be >= 2")
    a_sorted = sorted(set(a_set))
    d_sorted = sorted(set(d_set))
    dset = set(d_sorted)
    deg_d = {a: sum(1 for w in h.adjacency[a] if w in dset) for a in a_sorted}
    e_ad = sum(deg_d.values())
    if e_ad < 1:
        raise SupersatError("no A-D edges")
    sigma1, v_right, _ = top_singular(a_sorted, d_sorted, h)
    eps = max(0.0, 1.0 - sigma1 * sigma1 / e_ad)
    theta = math.sqrt(eps)
    r_list, (sigma1, v_right, _) = aligned_rows(h, a_sorted, d_sorted, theta)
    degenerate = False
    if not r_list:
        degenerate = True
        r_list = [max(a_sorted, key=lambda a: (deg_d[a], -a))]
    r_set = tuple(sorted(r_list))
    not_r = [a for a in a_sorted if a not in set(r_set)]
    e_uncovered = sum(deg_d[a] for a in not_r)
    # the aligned rows carry almost all A-D edges
    assert degenerate or e_uncovered <= theta * e_ad + 1e-9
    if not degenerate and len(r_set) >= t:
        d_star = min(deg_d[a] for a in r_set)
        floor_l = max(0, math.floor((1 - 2 * (t - 1) * theta) * d_star))
        bound = math.comb(len(r_set), t) * math.comb(floor_l, t)
        return RowCoverOutcome(
            variant="many-copies",
            r_set=r_set,
            theta=theta,
            epsilon=eps,
            sigma1=sigma1,
            e_ad=e_ad,
            e_uncovered=e_uncovered,
            d_star=d_star,
            floor_l=floor_l,
            copy_bound=bound,
        )
    b = None
    for a in r_set:
        nbrs = {w for w in h.adjacency[a] if w in dset}
        b = nbrs if b is None else b & nbrs
    b_set = tuple(sorted(b)) if b else tuple()
    e_ar_b = sum(1 for a in not_r for w in h.adjacency[a] if w in set(b_set))
    e_r_dnb = sum(
        1
        for a in r_set
        for w in h.adjacency[a]
        if w in dset and w not in set(b_set)
    )
    return RowCoverOutcome(
        variant="cover",
        r_set=r_set,
        theta=theta,
        epsilon=eps,
        sigma1=sigma1,
        e_ad=e_ad,
        e_uncovered=e_uncovered,
        degenerate=degenerate,
        b_set=b_set,
        e_ar_b=e_ar_b,
        e_r_dnb=e_r_dnb,
    )


# -- the counting driver ---------------------------------------------------


@dataclass(frozen=True)
class SupersatConfig:
    eta: Optional[float] = None
    g_cut: float = 10.0  # heuristic finite-m proxy for "g = O(1)"
    frac_cut: float = 0.1  # heuristic dense-core threshold e_core >= frac_cut*m'
    budget: int = 10**9


@dataclass(frozen=True)
class PipelineReport:
    t: int
    pattern: str
    n: int
    m: int
    lam: float
    split_threshold: float  # split_lambda(t-1, m)
    above_threshold: bool
    trace: Optional[PruneTrace]
    branch: str
    g_loc: Optional[float]
    acd: Optional[AcdPartition]
    rowcover: Optional[RowCoverOutcome]
    count: Optional[int]
    count_method: Optional[str]
    copy_lower_bound: Optional[float]
    sharp_constant: float
    ratio: Optional[float]  # count / m^t
    notes: tuple[str, ...] = ()


def _count_pattern(g: Graph, t: int, pattern: str, budget: int) -> CountResult:
    if pattern == "ktt":
        return count_ktt(g, t, budget=budget)
    if pattern == "c2t":
        return count_c2t(g, t, budget=budget)
    raise SupersatError(f"unknown pattern {pattern!r}")


def _sharp_constant(t: int, pattern: str) -> float:
    c = constants(t)
    return c.b_t if pattern == "ktt" else c.c_t


def supersat_count(
    g: Graph, t: int, pattern: str, config: SupersatConfig = SupersatConfig()
) -> PipelineReport:
    """Prune, branch on localization, and count.

    Reports every intermediate quantity; the branch thresholds are explicit
    finite-size heuristics and the driver never claims an asymptotic verdict.
    """
    if t < 2:
        raise SupersatError("t must be >= 2")
    if pattern not in ("ktt", "c2t"):
        raise SupersatError(f"unknown pattern {pattern!r}")
    if g.edge_count < 1:
        raise SupersatError("input graph has no edges")
    m = g.edge_count
    pd = perron(g)
    thr = split_lambda(t - 1, m)
    sharp = _sharp_constant(t, pattern)
    notes: list[str] = []
    if pd.lam <= thr + 1e-12:
        return PipelineReport(
            t=t,
            pattern=pattern,
            n=g.n,
            m=m,
            lam=pd.lam,
            split_threshold=thr,
            above_threshold=False,
            trace=None,
            branch="below-threshold",
            g_loc=None,
            acd=None,
            rowcover=None,
            count=None,
            count_method=None,
            copy_lower_bound=None,
            sharp_constant=sharp,
            ratio=None,
            notes=("spectral radius not above the split threshold",),
        )
    eta = config.eta if config.eta is not None else 1.0 / (16 * t)
    trace = heavy_prune(g, t, eta=eta)
    pruned = trace.final_graph
    if trace.emptied:
        return PipelineReport(
            t=t,
            pattern=pattern,
            n=g.n,
            m=m,
            lam=pd.lam,
            split_threshold=thr,
            above_threshold=True,
            trace=trace,
            branch="emptied",
            g_loc=None,
            acd=None,
            rowcover=None,
            count=0,
            count_method=None,
            copy_lower_bound=None,
            sharp_constant=sharp,
            ratio=0.0,
            notes=("pruning removed every edge",),
        )
    fpd = trace.final_perron
    m_prime = pruned.edge_count
    g_loc = localization_g(fpd, m_prime)
    nonisolated = [v for v in range(pruned.n) if pruned.degree(v) > 0]
    core, _ = pruned.induced_subgraph(nonisolated)
    cr = _count_pattern(core, t, pattern, config.budget)
    ratio = cr.value / float(m) ** t
    acd = None
    rowcover = None
    if g_loc <= config.g_cut:
        branch = "delocalized"
        if pattern == "ktt":
            lower = ktt_copy_lower(t, fpd.lam, m_prime, core.n)
        else:
            lower = c2t_copy_lower(t, fpd.lam, core.n)
        notes.append("g_loc within g_cut: delocalized counting branch")
    else:
        lower = None
        try:
            acd = acd_partition(pruned, eta, pd=fpd)
        except TooDelocalizedError:
            branch = "delocalized-fallback"
            notes.append("level-set window too small; fell back to direct count")
            if pattern == "ktt":
                lower = ktt_copy_lower(t, fpd.lam, m_prime, core.n)
            else:
                lower = c2t_copy_lower(t, fpd.lam, core.n)
        else:
            if acd.e_core >= config.frac_cut * m_prime:
                branch = "dense-core"
                notes.append("core carries a dense fraction of the pruned edges")
            else:
                branch = "sparse-core"
                if acd.a_set and acd.d_set:
                    try:
                        rowcover = row_cover_analyze(
                            pruned, acd.a_set, acd.d_set, t
                        )
                    except SupersatError as exc:
                        notes.append(f"row-cover not applicable: {exc}")
                else:
                    notes.append("row-cover skipped: empty A or D class")
    return PipelineReport(
        t=t,
        pattern=pattern,
        n=g.n,
        m=m,
        lam=pd.lam,
        split_threshold=thr,
        above_threshold=True,
        trace=trace,
        branch=branch,
        g_loc=g_loc,
        acd=acd,
        rowcover=rowcover,
        count=cr.value,
        count_method=cr.method,
        copy_lower_bound=lower,
        sharp_constant=sharp,
        ratio=ratio,
        notes=tuple(notes),
    )
