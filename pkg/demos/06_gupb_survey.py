"""How random six-vector families from 5-dimensional subspaces behave.

Each random 5-dimensional subspace of C^3 (x) C^3 holds six product
vectors. The survey tallies how often they form a gUPB and how often they
are in general position.
"""
from sepfaces.cli import gupb_search
from sepfaces.product_locator import DEFAULT_CONFIG

print(gupb_search(count=40, seed=1, cfg=DEFAULT_CONFIG))
