"""A (5,5) edge state, a separable (5,6) state, and the witness for their mixture."""
import numpy as np

from sepfaces import gallery as g
from sepfaces.ppt_geometry import is_edge_state, state_type
from sepfaces.product_locator import find_product_vectors
from sepfaces.tensor_core import kernel_of, partial_transpose

b, theta = 2.0, np.pi / 6
rt, rs, mix = g.rho_theta(b, theta), g.rho_sep(b, theta), g.mixed_59(b, theta)
for name, st in (("rho_theta", rt), ("rho_sep", rs), ("mixture", mix)):
    print(f"{name:10s} type={state_type(st)}")
print("rho_theta verdict:", is_edge_state(rt))
print("product vectors in the kernel of the mixture:", len(find_product_vectors(kernel_of(mix))))
w = g.witness_W(b, theta)
print(f"Tr(mixture^T_A W) = {np.trace(partial_transpose(mix).matrix @ w.matrix).real:.2e}")
print("smallest eigenvalue of W:", np.linalg.eigvalsh(w.matrix)[0].round(6))
