"""Product vectors in the kernel of a (4,4) edge state.

The kernel of rho_b is five-dimensional yet holds only six product vectors.
The exact locator and the multistart oracle are run side by side.
"""
import numpy as np

from sepfaces import gallery as g
from sepfaces.face_lab import certify_simplicial_face
from sepfaces.product_locator import brute_force_products, find_product_vectors
from sepfaces.tensor_core import kernel_of

rho = g.rho_b(2.0)
ker = kernel_of(rho)
exact = find_product_vectors(ker)
oracle = brute_force_products(ker)
print(f"kernel dimension {ker.dim}; locator finds {len(exact)} (complete={exact.complete}), "
      f"oracle finds {len(oracle)}")
for p in exact.vectors:
    print("  x =", np.round(p.x, 4), " y =", np.round(p.y, 4))

cert = certify_simplicial_face(g.six_products_b(2.0))
print(f"pure states independent: {cert.condition_A}; condition B: {cert.condition_B.status}; "
      f"simplex dimension {cert.simplex_dim}")
