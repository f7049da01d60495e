"""Regular subgraphs of tensor powers via the Perron edge distribution.

The Perron vector x of a connected graph induces a probability distribution
p_ij = a_ij x_i x_j / lambda on ordered edges whose entropy exceeds that of
its marginal by exactly ln(lambda).  Rounding k/2 copies of p to integers
selects a type class of k-tuples carrying an exactly d_k-regular subgraph of
the k-th tensor power, with d_k within a polynomial factor of lambda^k.
"""

import math

from sslab import build_regular, edge_distribution, entropy_gap, materialize_fk
from sslab.graphs import cycle, path, star

for name, g in [("K2", path(2)), ("K_{1,2}", star(2)), ("C3", cycle(3))]:
    d = edge_distribution(g)
    print(f"{name}: lambda={d.lam:.6f}  H(p)-H(pi)={entropy_gap(d):.6f}"
          f"  ln(lambda)={math.log(d.lam):.6f}")

print()
print("rounded type classes and their regular subgraphs")
for name, g in [("K2", path(2)), ("K_{1,2}", star(2)), ("C3", cycle(3))]:
    for k in (2, 4, 6):
        b = build_regular(g, k)
        fk = materialize_fk(b, g)
        assert all(deg == b.d_k for deg in fk.degrees)
        print(
            f"  {name:<7} k={k}: |T_k|={b.t_k_size:<5} degree={b.d_k:<5} "
            f"lambda^k={b.lambda_k:<10.2f} edges={fk.edge_count}"
        )
