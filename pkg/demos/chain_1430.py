"""
Two chains of lattice minima for Q(cbrt 1430)
=============================================

Walk the chain of minima in the maximal order and in Z[delta, delta_bar],
and compare where the principal factors (norms dividing R^2) show up.
"""

from purecubic.radicand import normalize
from purecubic.voronoi import maximal_order, run_chain, suborder0

r = normalize(1430)
print(r)

# The suborder chain finds both principal factors before the period ends.
phi = run_chain(suborder0(r))
print("period of Z[delta, delta_bar]:", phi.period_length)
for j in phi.pf_hits:
    rec = phi.record(j)
    print(f"  phi_{j} = {rec.coords}  norm {rec.norm}")

# The maximal order has a longer period and no principal factor at all;
# the minima of norm 239 and 183 sit inside their norm cylinders instead.
theta = run_chain(maximal_order(r))
print("period of the maximal order:", theta.period_length)
for i in (-17, -28, -35):
    rec = theta.record(i)
    print(f"  theta_{i} = {rec.coords}/3  norm {rec.norm}")

# beta^3 / N(beta) is the inverse unit at the end of the suborder period
beta = phi.record(-16).element(phi.order)
print("beta^3/1100 == phi_-48:", beta**3 / 1100 == phi.record(-48).element(phi.order))
