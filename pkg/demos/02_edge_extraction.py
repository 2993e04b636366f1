"""Pushing a face point away from the centre until it leaves the PPT body.

Dropping vertex k from the six-vertex simplex and moving away from the
barycentre reaches the PPT boundary at epsilon = 1/5, landing on a (4,4)
edge state. The segment between two such states is then scanned.
"""
import numpy as np

from sepfaces import gallery as g
from sepfaces.ppt_geometry import extract_edge_state, nearest_face_solve, separability_solve

b = 2.0
center, fam = g.center_b(b), g.six_products_b(b)
for k in range(1, 7):
    ext = extract_edge_state(g.drop_one_b(b, k), center)
    print(f"k={k}: epsilon*={ext.epsilon_star:.12f} type={ext.rank_type} verdict={ext.edge}")

print("\nsegment between sigma_1 and sigma_2:")
for t in np.linspace(0, 1, 13):
    sol = separability_solve(g.sigma_segment(b, 1, 2, t), fam)
    print(f"  t={t:.3f} separable={sol.feasible} weights={np.round(sol.coefficients, 4)}")

ext = extract_edge_state(g.drop_one_b(b, 3), center)
nf = nearest_face_solve(ext.boundary_state, center, fam)
print(f"\nline from the centre to sigma_3 exits the simplex through the facet opposite vertex "
      f"{nf.dropped_index} at mu={nf.mu:.6f}")
