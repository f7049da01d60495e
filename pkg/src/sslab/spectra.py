"""Eigen and operator-norm computation.

Perron data (spectral radius + unit nonnegative eigenvector), exact split-graph
spectral radii, the discrete increment lower bound, p->q operator norms by
nonlinear power iteration, bipartite top-singular data, and vertex-cut
diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .graphs import Graph, GraphError, SplitSpec


class SpectraError(ValueError):
    pass


class NoEdgesError(SpectraError):
    pass


class ConvergenceError(SpectraError):
    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class RegimeError(SpectraError):
    pass


@dataclass(frozen=True)
class PerronData:
    lam: float
    x: np.ndarray  # unit nonnegative, supported on one component
    component_id: int
    residual: float  # relative: ||Ax - lam x|| / max(1, lam)
    iterations: int


def _power_iterate(adj, n: int, tol: float, max_iter: int, x0=None):
    """Power iteration on A + I (the shift removes bipartite oscillation).

    `adj` is anything supporting `adj @ x`.  Returns (lam, x, residual, iters).
    """
    if x0 is not None and np.all(x0 >= 0) and np.linalg.norm(x0) > 0:
        x = x0 / np.linalg.norm(x0)
    else:
        x = np.full(n, 1.0 / math.sqrt(n))
    lam = 0.0
    residual = math.inf
    for it in range(1, max_iter + 1):
        ax = adj @ x
        y = ax + x
        ny = np.linalg.norm(y)
        if ny == 0:
            break
        x = y / ny
        ax = adj @ x
        lam = float(x @ ax)
        # relative residual: the absolute one bottoms out at the float
        # summation noise floor (~ n * eps * lam) on large hosts
        residual = float(np.linalg.norm(ax - lam * x)) / max(1.0, lam)
        if residual <= tol:
            return lam, x, residual, it
    raise ConvergenceError(
        f"power iteration did not reach tol={tol} in {max_iter} iterations",
        residual,
    )


def _lanczos_top(adj, n: int, tol: float, max_iter: int, x0=None):
    """Top eigenpair of a large sparse component via Lanczos iteration.

    Power iteration stagnates at a rounding floor amplified by 1/gap on big
    hosts; the Lanczos solve reaches machine-precision residuals.  Falls back
    to plain power iteration if the solver does not converge.
    """
    from scipy.sparse.linalg import ArpackError, ArpackNoConvergence, eigsh

    if x0 is not None and np.all(x0 >= 0) and np.linalg.norm(x0) > 0:
        v0 = x0 / np.linalg.norm(x0)
    else:
        v0 = np.full(n, 1.0 / math.sqrt(n))
    try:
        vals, vecs = eigsh(adj, k=1, which="LA", v0=v0, tol=0)
    except (ArpackError, ArpackNoConvergence):
        return _power_iterate(adj, n, tol, max_iter, x0)
    lam = float(vals[0])
    x = vecs[:, 0]
    if x.sum() < 0:
        x = -x
    np.clip(x, 0.0, None, out=x)
    nx = np.linalg.norm(x)
    if nx == 0:
        return _power_iterate(adj, n, tol, max_iter, x0)
    x /= nx
    ax = adj @ x
    lam = float(x @ ax)
    residual = float(np.linalg.norm(ax - lam * x)) / max(1.0, lam)
    if residual > tol:
        return _power_iterate(adj, n, tol, max_iter, x)
    return lam, x, residual, 0


def perron(
    g: Graph, tol: float = 1e-10, max_iter: int = 100000, x0: Optional[np.ndarray] = None
) -> PerronData:
    """Spectral radius and unit nonnegative Perron vector.

    On disconnected input the component attaining the maximum spectral radius
    is chosen (ties broken by smallest component id) and x is zero elsewhere.
    """
    if g.edge_count == 0:
        raise NoEdgesError("perron requires at least one edge")
    best = None
    total_iters = 0
    for cid, comp in enumerate(g.components):
        if len(comp) < 2:
            continue
        sub, remap = g.induced_subgraph(comp)
        if sub.edge_count == 0:
            continue
        if sub.n <= 64:
            adj = sub.adjacency_matrix()
        else:
            adj = sub.sparse_adjacency()
        sub_x0 = None
        if x0 is not None:
            cand = np.asarray([x0[v] for v in comp], dtype=float)
            if np.all(cand >= 0) and np.linalg.norm(cand) > 1e-8:
                sub_x0 = cand
        if sub.n > 64:
            lam, xs, res, iters = _lanczos_top(adj, sub.n, tol, max_iter, sub_x0)
        else:
            lam, xs, res, iters = _power_iterate(adj, sub.n, tol, max_iter, sub_x0)
        total_iters += iters
        if best is None or lam > best[0] + 1e-12:
            best = (lam, comp, xs, res, cid)
    lam, comp, xs, res, cid = best
    x = np.zeros(g.n)
    for local, v in enumerate(sorted(comp)):
        x[v] = max(xs[local], 0.0)
    x /= np.linalg.norm(x)
    return PerronData(lam=lam, x=x, component_id=cid, residual=res, iterations=total_iters)


# -- split graphs ----------------------------------------------------------


def split_lambda(k: int, m: int) -> float:
    """Exact spectral radius of the split graph S_{k,m}.

    Divisible case (r=0): closed form (k-1+sqrt(4m-k^2+1))/2.  Otherwise the
    largest eigenvalue of the equitable-quotient matrix for the classes
    {r attached clique vertices, k-r other clique vertices, extra vertex,
    q independent vertices}.
    """
    if m < 1:
        raise GraphError("split_lambda needs m >= 1")
    spec = SplitSpec(k, m)
    q, r = spec.q, spec.r
    if r == 0:
        if q == 0:
            return float(k - 1)
        return (k - 1 + math.sqrt(4 * m - k * k + 1)) / 2
    # class sizes: r, k-r, 1, q; entry [i][j] = neighbors in class j of a
    # vertex in class i.  Drop the independent class when q = 0.
    rows = [
        [r - 1, k - r, 1, q],
        [r, k - r - 1, 0, q],
        [r, 0, 0, 0],
        [r, k - r, 0, 0],
    ]
    keep = [0, 1, 2] + ([3] if q > 0 else [])
    b = np.array([[rows[i][j] for j in keep] for i in keep], dtype=float)
    eig = np.linalg.eigvals(b)
    return float(np.max(eig.real))


def split_increment_lb(k: int, m: int, d: int) -> float:
    """Lower bound on lambda(S_{k,m}) - lambda(S_{k,m-d})."""
    base = k * (k - 1) // 2
    if k < 1 or m < base + 1:
        raise GraphError("split_increment_lb: need k >= 1 and m above the clique size")
    if not (0 <= d <= m - base):
        raise GraphError("split_increment_lb: d out of range")
    return d / (2 * k * (math.sqrt(m) + k))


# -- p -> q operator norms -------------------------------------------------


@dataclass(frozen=True)
class OpNormEstimate:
    p: float
    q: float
    value: float
    witness: np.ndarray  # ||witness||_p = 1
    converged: bool
    restarts_used: int


def _dual_power(y: np.ndarray, s: float) -> np.ndarray:
    return np.sign(y) * np.abs(y) ** (s - 1)


def opnorm(
    g: Graph,
    p: float,
    q: float,
    tol: float = 1e-10,
    max_iter: int = 100000,
    restarts: int = 3,
) -> OpNormEstimate:
    """Certified lower bound on the p->q operator norm of the adjacency matrix.

    Regime 1 < p <= 2 <= q < infinity.  Nonlinear power iteration with
    alternating dual-exponent sign-power maps from strictly positive starts;
    for nonnegative matrices in this regime the iterate values are monotone
    nondecreasing, so the best witness over all restarts is returned.
    """
    if not (1 < p <= 2 <= q < math.inf):
        raise RegimeError(f"(p,q)=({p},{q}) outside 1 < p <= 2 <= q < inf")
    if g.edge_count == 0:
        raise NoEdgesError("opnorm requires at least one edge")
    if p == 2 and q == 2:
        pd = perron(g, tol=tol, max_iter=max_iter)
        return OpNormEstimate(p, q, pd.lam, pd.x.copy(), True, 0)
    a = g.adjacency_matrix()
    n = g.n
    p_conj = p / (p - 1)
    rng = np.random.default_rng(12345)
    best_val = -1.0
    best_x = None
    converged = False
    used = 0
    starts = [np.ones(n)]
    try:
        pd = perron(g, tol=max(tol, 1e-8), max_iter=max_iter)
        starts.append(pd.x + 1e-6)
    except SpectraError:
        pass
    while len(starts) < max(restarts, 1) + 1:
        starts.append(rng.uniform(0.5, 1.5, size=n))
    for x in starts:
        used += 1
        x = np.abs(x)
        x /= np.linalg.norm(x, ord=p)
        prev = -1.0
        ok = False
        for _ in range(max_iter):
            y = a @ x
            val = float(np.linalg.norm(y, ord=q))
            # monotone by construction; tiny negative drift is roundoff
            assert val >= prev - 1e-12, "opnorm iterate value decreased"
            if prev >= 0 and val - prev < tol:
                ok = True
                break
            prev = val
            z = a @ _dual_power(y, q)
            x = _dual_power(z, p_conj)
            nx = np.linalg.norm(x, ord=p)
            if nx == 0:
                break
            x /= nx
        y = a @ x
        val = float(np.linalg.norm(y, ord=q))
        if val > best_val:
            best_val = val
            best_x = x.copy()
            converged = ok
    return OpNormEstimate(p, q, best_val, best_x, converged, used)


# -- bipartite incidence singular data -------------------------------------


def incidence_matrix(rows: Sequence[int], cols: Sequence[int], g: Graph) -> np.ndarray:
    rs, cs = sorted(rows), sorted(cols)
    m = np.zeros((len(rs), len(cs)))
    for i, u in enumerate(rs):
        nb = g.adjacency_sets[u]
        for j, v in enumerate(cs):
            if v in nb:
                m[i, j] = 1.0
    return m


def top_singular(rows: Sequence[int], cols: Sequence[int], g: Graph):
    """Top singular triple (sigma1, v_right, u_left) of the rows x cols 0/1
    incidence matrix.  Power iteration on M^T M from the all-ones start picks
    a nonnegative vector deterministically even with a tied top value."""
    rows, cols = sorted(set(rows)), sorted(set(cols))
    if not rows or not cols:
        raise SpectraError("top_singular: empty rows or cols")
    if set(rows) & set(cols):
        raise SpectraError("top_singular: rows and cols must be disjoint")
    m = incidence_matrix(rows, cols, g)
    mt_m = m.T @ m
    v = np.full(len(cols), 1.0 / math.sqrt(len(cols)))
    if not m.any():
        return 0.0, v, np.full(len(rows), 1.0 / math.sqrt(len(rows)))
    sig2 = 0.0
    for _ in range(100000):
        w = mt_m @ v
        nw = np.linalg.norm(w)
        if nw == 0:
            break
        v_new = w / nw
        sig2_new = float(v_new @ (mt_m @ v_new))
        done = abs(sig2_new - sig2) <= 1e-14 * max(1.0, sig2_new)
        v, sig2 = v_new, sig2_new
        if done:
            break
    sigma1 = math.sqrt(max(sig2, 0.0))
    mv = m @ v
    nu = np.linalg.norm(mv)
    u = mv / nu if nu > 0 else np.full(len(rows), 1.0 / math.sqrt(len(rows)))
    return sigma1, v, u


# -- vertex-cut diagnostics ------------------------------------------------


@dataclass(frozen=True)
class CutDiagnostics:
    lam: float
    lam_u: float
    lam_w: float
    rho: float
    m_uw: int
    mu_u: float
    slack_a: float
    slack_b: float
    slack_c: Optional[float]  # None when the denominator vanishes


def _sub_lambda(g: Graph, vertices: Sequence[int], tol: float) -> float:
    sub, _ = g.induced_subgraph(vertices)
    if sub.edge_count == 0:
        return 0.0
    return perron(sub, tol=tol).lam


def cut_diagnostics(
    g: Graph, u_set: Sequence[int], pd: PerronData, tol: float = 1e-10
) -> CutDiagnostics:
    """Diagnostics for the vertex cut (U, W): slacks of
    (a) lam <= max(lam_U, lam_W) + rho,
    (b) (lam - lam_U)(lam - lam_W) <= rho^2  (and rho^2 <= m_UW),
    (c) mu(U) <= rho^2 / ((lam - lam_U)^2 + rho^2) when the denominator > 0.
    """
    u = sorted(set(u_set))
    w = sorted(set(range(g.n)) - set(u))
    if not u or not w:
        raise SpectraError("cut_diagnostics: trivial partition")
    lam = pd.lam
    lam_u = _sub_lambda(g, u, tol)
    lam_w = _sub_lambda(g, w, tol)
    m_uw = sum(1 for a, b in g.edges if (a in set(u)) != (b in set(u)))
    if m_uw > 0:
        rho, _, _ = top_singular(u, w, g)
    else:
        rho = 0.0
    mu_u = float(sum(pd.x[v] ** 2 for v in u))
    slack_a = max(lam_u, lam_w) + rho - lam
    slack_b = rho * rho - (lam - lam_u) * (lam - lam_w)
    denom = (lam - lam_u) ** 2 + rho * rho
    slack_c = rho * rho / denom - mu_u if denom > 1e-300 else None
    return CutDiagnostics(lam, lam_u, lam_w, rho, m_uw, mu_u, slack_a, slack_b, slack_c)
