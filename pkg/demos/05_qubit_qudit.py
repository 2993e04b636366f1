"""Five product vectors in C^2 (x) C^3 spanning an induced 4-simplex."""
import numpy as np

from sepfaces import gallery as g
from sepfaces.face_lab import certify_simplicial_face, check_2xn_condition, two_by_n_products

fam = g.qubit_qudit_example()
print("non-real condition:", check_2xn_condition(fam))
print("products:", np.round(two_by_n_products(fam), 6))
cert = certify_simplicial_face(fam)
print(f"A={cert.condition_A} C={cert.condition_C.status} induced={cert.induced} "
      f"extreme points={cert.extreme_points} simplex dimension={cert.simplex_dim}")
