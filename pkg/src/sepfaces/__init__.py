"""Product vectors, simplicial faces of the separable body, and PPT edge
states on C^m (x) C^n."""

from .errors import (
    DegenerateExtensionError,
    DegeneratePencilError,
    DomainError,
    MalformedOperatorError,
    NoFeasibleDropError,
    NotGeneralPositionError,
)
from .face_lab import FaceCertificate, Verdict, certify_simplicial_face
from .ppt_geometry import (
    DecompositionSolve,
    EdgeExtraction,
    dual_pairing,
    extract_edge_state,
    is_edge_state,
    is_ppt,
    max_epsilon_ppt,
    nearest_face_solve,
    separability_solve,
    state_type,
)
from .product_locator import (
    LocatorConfig,
    LocatorResult,
    brute_force_products,
    find_product_vectors,
)
from .tensor_core import (
    DEFAULT_TOL,
    BipartiteOperator,
    ProductVector,
    Subspace,
    ToleranceConfig,
    partial_transpose,
    tensor,
)

__version__ = "0.1.0"
