"""Inequality laboratory: certificate exponents, the three density/spectral
inequality forms, the operator-norm certificate chain, copy-count lower
bounds, sharp constants, and the 3-vertex-path counterexample.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .graphs import Graph, complete_bipartite, path, star, union
from .homcounts import (
    CountResult,
    closed_walk_count,
    hom_complete_bipartite,
    hom_count,
)
from .spectra import PerronData, opnorm, perron


class SidorenkoError(ValueError):
    pass


class NonBipartiteError(SidorenkoError):
    pass


class DegenerateExponentError(SidorenkoError):
    pass


@dataclass(frozen=True)
class CertificateExponents:
    v: int
    e: int
    s: float  # 2e/v
    s_prime: float  # 2e/(2e-v)
    alpha: Optional[float]  # e/(2e-v), defined when 2e > v


def exponents(h: Graph) -> CertificateExponents:
    if not h.is_bipartite():
        raise NonBipartiteError("pattern must be bipartite")
    v, e = h.n, h.edge_count
    if e < 1:
        raise SidorenkoError("pattern needs at least one edge")
    if 2 * e == v:
        raise DegenerateExponentError("2e = v: conjugate exponent is infinite")
    s = 2 * e / v
    s_prime = 2 * e / (2 * e - v)
    alpha = e / (2 * e - v) if 2 * e > v else None
    return CertificateExponents(v, e, s, s_prime, alpha)


@dataclass(frozen=True)
class IneqReport:
    hom: int
    rhs_i: float
    rhs_ii: Optional[float]
    rhs_iii: Optional[float]
    rhs_cert: Optional[float]
    holds_i: bool
    holds_ii: Optional[bool]
    holds_iii: Optional[bool]
    holds_cert: Optional[bool]
    chain_slack: Optional[float]
    spectral_forms_applicable: bool
    lam: float


_REL_TOL = 1e-9


def _holds(hom: int, rhs: float) -> bool:
    return hom >= rhs - _REL_TOL * abs(rhs)


def _pattern_ktt_order(h: Graph) -> Optional[int]:
    """t if h is K_{t,t} (up to labels), else None."""
    bip = h.bipartition()
    if bip is None or h.n % 2 or h.n < 2:
        return None
    t = h.n // 2
    if h.edge_count != t * t:
        return None
    return t if all(d == t for d in h.degrees) and len(h.components) == 1 else None


def _hom_exact(h: Graph, g: Graph) -> int:
    """Exact hom via the fastest applicable exact method."""
    if h.is_cycle_graph() and h.n % 2 == 0:
        return closed_walk_count(g, h.n).value
    t = _pattern_ktt_order(h)
    if t is not None:
        return hom_complete_bipartite(g, t)
    return hom_count(h, g).value


def check_suite(h: Graph, g: Graph, tol: float = 1e-10) -> IneqReport:
    """Evaluate hom(h,g) against the density form, the two spectral forms,
    and the operator-norm certificate.

    rhs_i  = M^e n^{v-2e}          (always)
    rhs_ii = lam^{2e-v} M^{v-e}    (when v <= e)
    rhs_iii= lam^e n^{v-e}         (when v <= e)
    rhs_cert = opnorm(g, s', s)^e  (when v <= e; reuses lam when s = s' = 2)
    """
    if g.edge_count < 1:
        raise SidorenkoError("host needs at least one edge")
    ex = exponents(h)
    v, e = ex.v, ex.e
    hom = _hom_exact(h, g)
    big_m, n = g.big_m, g.n
    rhs_i = float(big_m) ** e * float(n) ** (v - 2 * e)
    pd = perron(g, tol=tol)
    lam = pd.lam
    if v > e:
        return IneqReport(
            hom=hom,
            rhs_i=rhs_i,
            rhs_ii=None,
            rhs_iii=None,
            rhs_cert=None,
            holds_i=_holds(hom, rhs_i),
            holds_ii=None,
            holds_iii=None,
            holds_cert=None,
            chain_slack=None,
            spectral_forms_applicable=False,
            lam=lam,
        )
    rhs_ii = lam ** (2 * e - v) * float(big_m) ** (v - e)
    rhs_iii = lam**e * float(n) ** (v - e)
    if ex.s == 2.0 and ex.s_prime == 2.0:
        norm_val = lam  # the 2->2 norm is the spectral radius; skip opnorm
    else:
        norm_val = opnorm(g, ex.s_prime, ex.s, tol=max(tol, 1e-12)).value
    rhs_cert = norm_val**e
    chain_slack = norm_val**ex.alpha * float(big_m) ** (1 - ex.alpha) - lam
    return IneqReport(
        hom=hom,
        rhs_i=rhs_i,
        rhs_ii=rhs_ii,
        rhs_iii=rhs_iii,
        rhs_cert=rhs_cert,
        holds_i=_holds(hom, rhs_i),
        holds_ii=_holds(hom, rhs_ii),
        holds_iii=_holds(hom, rhs_iii),
        holds_cert=_holds(hom, rhs_cert),
        chain_slack=chain_slack,
        spectral_forms_applicable=True,
        lam=lam,
    )


# -- the 3-vertex-path counterexample --------------------------------------


@dataclass(frozen=True)
class P3Report:
    t: int
    hom: int
    lam: float
    lam_times_m: float
    lam_sq_times_n: float
    edge_form_fails: bool
    vertex_form_fails: bool


def p3_counterexample(t: int) -> tuple[Graph, P3Report]:
    """Star K_{1,t} next to t^2 disjoint edges: the 3-vertex path violates
    both spectral forms on this host."""
    if t < 2:
        raise SidorenkoError("t must be >= 2")
    g = star(t)
    for _ in range(t * t):
        g = union(g, path(2))
    hom = sum(d * d for d in g.degrees)
    assert hom == 3 * t * t + t
    lam = math.sqrt(t)
    big_m = float(g.big_m)
    n = float(g.n)
    lam_m = lam * big_m
    lam2_n = lam * lam * n
    return g, P3Report(
        t=t,
        hom=hom,
        lam=lam,
        lam_times_m=lam_m,
        lam_sq_times_n=lam2_n,
        edge_form_fails=hom < lam_m,
        vertex_form_fails=hom < lam2_n,
    )


# -- copy-count lower bounds and constants ---------------------------------


def ktt_copy_lower(t: int, lam: float, m: int, n: int) -> float:
    """Lower bound on the number of K_{t,t} copies:
    B_t (lam^2/m)^{t(t-1)} m^t - (C(2t,2)/(2 t!^2)) n^{2t-1}.
    May be negative; the caller clamps."""
    if t < 2 or m < 1 or n < 0 or lam < 0:
        raise SidorenkoError("ktt_copy_lower: bad arguments")
    b_t = 2.0 ** (-((t - 1) ** 2)) / math.factorial(t) ** 2
    err = math.comb(2 * t, 2) / (2 * math.factorial(t) ** 2)
    return b_t * (lam * lam / m) ** (t * (t - 1)) * float(m) ** t - err * float(n) ** (
        2 * t - 1
    )


def c2t_copy_lower(t: int, lam: float, n: int) -> float:
    """Lower bound on the number of 2t-cycles: lam^{2t}/(4t) minus an explicit
    non-injective-walk error term C(2t,2) n^{2t-1} / (4t)."""
    if t < 2 or n < 0 or lam < 0:
        raise SidorenkoError("c2t_copy_lower: bad arguments")
    return (lam ** (2 * t) - math.comb(2 * t, 2) * float(n) ** (2 * t - 1)) / (4 * t)


@dataclass(frozen=True)
class SharpConstants:
    t: int
    b_t: float  # 2^{-(t-1)^2} / t!^2
    c_t: float  # (t-1)! / (2 t^t)
    random_cycle: float  # 1/(4t)
    ktt_alt: float  # 1/(t! t^t)


def constants(t: int) -> SharpConstants:
    if t < 2:
        raise SidorenkoError("t must be >= 2")
    b_t = Fraction(1, 2 ** ((t - 1) ** 2) * math.factorial(t) ** 2)
    c_t = Fraction(math.factorial(t - 1), 2 * t**t)
    return SharpConstants(
        t=t,
        b_t=float(b_t),
        c_t=float(c_t),
        random_cycle=1.0 / (4 * t),
        ktt_alt=float(Fraction(1, math.factorial(t) * t**t)),
    )


def gnm_expected_ktt(n: int, m: int, t: int) -> float:
    """Expected number of K_{t,t} copies in a uniform m-edge graph on n
    vertices: (1/2) C(n,t) C(n-t,t) C(N-t^2, m-t^2) / C(N,m)."""
    big_n = n * (n - 1) // 2
    if not (t * t <= m <= big_n):
        raise SidorenkoError(f"need t^2 <= m <= {big_n}")
    if 2 * t > n:
        raise SidorenkoError("need n >= 2t")
    val = (
        Fraction(math.comb(n, t) * math.comb(n - t, t), 2)
        * Fraction(math.comb(big_n - t * t, m - t * t), math.comb(big_n, m))
    )
    return float(val)
