"""Ten product states spanning a 9-simplex that is not an induced face.

The first six product vectors span a subspace with infinitely many product
vectors, so condition C fails. The face is instead exposed by the positive
map Phi(1/b), whose Choi matrix vanishes on all ten states.
"""
from sepfaces import gallery as g
from sepfaces.face_lab import check_condition_C, pure_states_independent
from sepfaces.ppt_geometry import dual_pairing, extract_edge_state, max_epsilon_ppt
from sepfaces.tensor_core import BipartiteOperator

b = 2.0
fam = g.delta9_family(b)
print("pure states independent:", pure_states_independent(fam))
print("condition C:", check_condition_C(fam).status)
choi = g.choi_phi_s(1 / b)
worst = max(abs(dual_pairing(BipartiteOperator(p.projector(), 3, 3), choi)) for p in fam)
print(f"largest pairing with the Choi matrix: {worst:.2e}")
center = g.delta9_center(b)
for k in range(1, 11):
    lam = max_epsilon_ppt(g.delta9_drop_one(b, k), center)[0]
    print(f"k={k:2d}: lambda={lam:.10f} closed form={g.lambda_k_closed_form(b, k):.10f}")
print("rank type at k=1:", extract_edge_state(g.delta9_drop_one(b, 1), center).rank_type)
