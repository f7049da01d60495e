"""Homomorphism counts vs spectral lower bounds.

For a bipartite pattern H with v vertices and e >= v edges, the count
hom(H, G) is bounded below by three quantities built from the host's edge
count M = 2m, vertex count n, spectral radius lambda, and a p->q operator
norm of the adjacency matrix.  This script evaluates all of them on a few
hosts, then shows the classical failure for the 3-vertex path, where the
spectral forms are simply false.
"""

from sslab import check_suite, p3_counterexample
from sslab.graphs import complete, complete_bipartite, cycle, sample_gnm

patterns = {
    "C4": cycle(4),
    "C6": cycle(6),
    "K33": complete_bipartite(3, 3),
}
hosts = {
    "K5": complete(5),
    "K34": complete_bipartite(3, 4),
    "gnm(10,30)": sample_gnm(10, 30, seed=1),
}

for hname, h in patterns.items():
    for gname, g in hosts.items():
        rep = check_suite(h, g)
        print(
            f"{hname} in {gname:<11} hom={rep.hom:<8} "
            f"density={rep.rhs_i:<12.1f} spectral={rep.rhs_ii:<12.1f} "
            f"norm^e={rep.rhs_cert:<12.1f} all_hold={rep.holds_ii and rep.holds_cert}"
        )

print()
print("the 3-vertex path breaks both spectral forms:")
for t in (3, 9, 20):
    g, rep = p3_counterexample(t)
    print(
        f"  t={t:<3} hom={rep.hom:<6} lambda*M={rep.lam_times_m:<10.1f} "
        f"lambda^2*n={rep.lam_sq_times_n:<10.1f} "
        f"(host: star + {t*t} disjoint edges)"
    )
