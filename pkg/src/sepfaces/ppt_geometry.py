"""Geometry of the PPT cone around separable faces.

The central construction pushes a separable state ``sigma`` away from a
reference interior point ``rho0`` along ``sigma - eps * rho0`` until either
the operator or its partial transpose stops being positive.  The largest
admissible step is the smaller of two pseudo-inverse spectral bounds.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import (
    DegenerateExtensionError,
    DegeneratePencilError,
    MalformedOperatorError,
    NoFeasibleDropError,
)
from .face_lab import FAILS, HOLDS, UNDECIDED
from .product_locator import DEFAULT_CONFIG, LocatorConfig, brute_force_conjugate_products, find_product_vectors
from .tensor_core import (
    DEFAULT_TOL,
    ZERO_CUTOFF,
    BipartiteOperator,
    ProductVector,
    ToleranceConfig,
    hermitian_rank,
    partial_conjugate,
    partial_transpose,
    projector,
    range_of,
    realify,
)

log = logging.getLogger(__name__)

EDGE, NOT_EDGE = "edge", "not_edge"


@dataclass(frozen=True)
class EdgeExtraction:
    epsilon_star: float
    eps_positive: float
    eps_ppt_side: float
    boundary_state: BipartiteOperator
    unnormalized: BipartiteOperator
    rank_type: tuple[int, int]
    edge: str

    def to_json(self) -> dict:
        return {
            "epsilon_star": self.epsilon_star,
            "eps_positive": self.eps_positive,
            "eps_ppt_side": self.eps_ppt_side,
            "boundary_state": self.boundary_state.to_json(),
            "rank_type": list(self.rank_type),
            "edge": self.edge,
        }


@dataclass(frozen=True)
class DecompositionSolve:
    coefficients: np.ndarray
    residual: float
    feasible: bool
    unique: bool = True
    mu: Optional[float] = None
    dropped_index: Optional[int] = None

    def to_json(self) -> dict:
        return {
            "coefficients": [float(c) for c in self.coefficients],
            "mu": self.mu,
            "residual": self.residual,
            "feasible": self.feasible,
            "unique": self.unique,
            "dropped_index": self.dropped_index,
        }


def _eigh(a: BipartiteOperator):
    return np.linalg.eigh(a.matrix)


def _check_psd(rho: BipartiteOperator, tol: ToleranceConfig, what: str = "state") -> None:
    w = np.linalg.eigvalsh(rho.matrix)
    scale = max(np.max(np.abs(w)), ZERO_CUTOFF)
    if w[0] < -tol.rank_rel_tol * scale:
        raise MalformedOperatorError(f"{what} is not positive semidefinite (min eigenvalue {w[0]:.3e})")


def is_ppt(rho: BipartiteOperator, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True iff the partial transpose is positive semidefinite.

    The criterion is scale invariant, so unnormalized positive operators are
    accepted; non-positive input raises :class:`MalformedOperatorError`.
    """
    _check_psd(rho, tol)
    w = np.linalg.eigvalsh(partial_transpose(rho).matrix)
    return bool(w[0] >= -tol.rank_rel_tol * max(np.max(np.abs(w)), ZERO_CUTOFF))


def state_type(rho: BipartiteOperator, tol: ToleranceConfig = DEFAULT_TOL) -> tuple[int, int]:
    """``(rank rho, rank rho^Gamma)``."""
    return hermitian_rank(rho, tol), hermitian_rank(partial_transpose(rho), tol)


def _range_projector(a: BipartiteOperator, tol: ToleranceConfig):
    w, v = _eigh(a)
    cut = max(tol.rank_rel_tol * np.max(np.abs(w)), ZERO_CUTOFF)
    keep = w > cut
    return w[keep], v[:, keep]


def range_contained(sigma: BipartiteOperator, rho0: BipartiteOperator,
                    tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Is ``range(rho0)`` inside ``range(sigma)``?"""
    _, v = _range_projector(sigma, tol)
    q = np.eye(sigma.matrix.shape[0]) - v @ v.conj().T
    leak = np.linalg.norm(q @ rho0.matrix @ q, 2)
    return bool(leak < tol.residual_tol * max(1.0, np.linalg.norm(rho0.matrix, 2)))


def max_epsilon_positive(sigma: BipartiteOperator, rho0: BipartiteOperator,
                         tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Largest ``eps`` with ``sigma - eps * rho0 >= 0``.

    Equal to ``1 / lambda_max(S rho0 S)`` with ``S`` the pseudo-inverse square
    root of ``sigma``.  Returns 0 when ``range(rho0)`` escapes
    ``range(sigma)`` (no positive step exists) and ``inf`` for ``rho0 = 0``.
    """
    if sigma.matrix.shape != rho0.matrix.shape:
        raise ValueError("dimension mismatch")
    if not range_contained(sigma, rho0, tol):
        log.info("range of rho0 not contained in range of sigma")
        return 0.0
    w, v = _range_projector(sigma, tol)
    s = v / np.sqrt(w)
    top = np.linalg.eigvalsh(s.conj().T @ rho0.matrix @ s)[-1]
    if top <= ZERO_CUTOFF:
        return float("inf")
    return float(1.0 / top)


def max_epsilon_ppt(sigma: BipartiteOperator, rho0: BipartiteOperator,
                    tol: ToleranceConfig = DEFAULT_TOL) -> tuple[float, float, float]:
    """``(eps_star, eps_positive, eps_ppt_side)`` for ``sigma - eps * rho0``."""
    eps_pos = max_epsilon_positive(sigma, rho0, tol)
    eps_gam = max_epsilon_positive(partial_transpose(sigma), partial_transpose(rho0), tol)
    return min(eps_pos, eps_gam), eps_pos, eps_gam


def _joint_candidates(rho: BipartiteOperator, cfg: LocatorConfig):
    """Product vectors ``z`` in range(rho) with ``conj_1(z)`` in range(rho^Gamma).

    Returns ``(vectors, exhaustive)``.
    """
    tol = cfg.tol
    d = range_of(rho, tol)
    e = range_of(partial_transpose(rho), tol)
    if (rho.m, rho.n) == (3, 3) and 1 <= d.dim <= 8:
        try:
            res = find_product_vectors(d, cfg)
        except DegeneratePencilError:
            res = None
        if res is not None:
            kept = [p for p in res.vectors if e.contains(partial_conjugate(p), tol)]
            return kept, res.complete
    return list(brute_force_conjugate_products(d, e, cfg).vectors), False


def is_edge_state(rho: BipartiteOperator, cfg: LocatorConfig = DEFAULT_CONFIG) -> str:
    """``"edge"`` iff no product vector ``x (x) y`` of ``range(rho)`` has
    ``conj(x) (x) y`` in ``range(rho^Gamma)``; ``"undecided"`` when the
    search cannot claim exhaustiveness."""
    found, exhaustive = _joint_candidates(rho, cfg)
    if found:
        return NOT_EDGE
    return EDGE if exhaustive else UNDECIDED


def extract_edge_state(sigma: BipartiteOperator, rho0: BipartiteOperator,
                       cfg: LocatorConfig = DEFAULT_CONFIG) -> EdgeExtraction:
    """Push ``sigma`` away from ``rho0`` to the PPT boundary.

    Raises
    ------
    DegenerateExtensionError
        If the maximal step is zero or the boundary operator vanishes.
    """
    tol = cfg.tol
    eps, eps_pos, eps_gam = max_epsilon_ppt(sigma, rho0, tol)
    if eps <= 0 or not np.isfinite(eps):
        raise DegenerateExtensionError(f"maximal step is {eps}")
    diff = sigma - eps * rho0
    scale = max(np.linalg.norm(sigma.matrix, 2), ZERO_CUTOFF)
    if np.linalg.norm(diff.matrix, 2) < tol.residual_tol * scale or diff.trace <= tol.residual_tol:
        raise DegenerateExtensionError("boundary operator vanishes")
    boundary = diff.normalized()
    return EdgeExtraction(
        epsilon_star=eps,
        eps_positive=eps_pos,
        eps_ppt_side=eps_gam,
        boundary_state=boundary,
        unnormalized=diff,
        rank_type=state_type(boundary, tol),
        edge=is_edge_state(boundary, cfg),
    )


def _lstsq(a: np.ndarray, rhs: np.ndarray):
    sol, _, rank, _ = np.linalg.lstsq(a, rhs, rcond=None)
    return sol, float(np.linalg.norm(a @ sol - rhs)), rank == a.shape[1]


def _system(family: Sequence[ProductVector]) -> np.ndarray:
    return np.column_stack([realify(projector(p.vector)) for p in family])


def separability_solve(rho: BipartiteOperator, family: Sequence[ProductVector],
                       tol: ToleranceConfig = DEFAULT_TOL) -> DecompositionSolve:
    """Least-squares ``sum_i lam_i |z_i><z_i| = rho / tr(rho)`` with
    ``sum_i lam_i = 1``; feasible iff exact and ``lam >= -residual_tol``."""
    a = np.vstack([_system(family), np.ones(len(family))])
    rhs = np.append(realify(rho.normalized()), 1.0)
    lam, res, unique = _lstsq(a, rhs)
    feasible = res < tol.residual_tol and bool(np.all(lam >= -tol.residual_tol))
    return DecompositionSolve(lam, res, feasible, unique)


def nearest_face_solve(rho: BipartiteOperator, rho0: BipartiteOperator,
                       family: Sequence[ProductVector],
                       tol: ToleranceConfig = DEFAULT_TOL) -> DecompositionSolve:
    """Where does the segment from ``rho0`` to ``rho`` leave the simplex
    spanned by ``family``?

    For each dropped vertex ``i`` solve
    ``sum_{j != i} lam_j P_j = (1 - mu) rho0 + mu rho`` with
    ``sum lam_j = 1`` and accept the lowest ``i`` with ``lam >= 0`` and
    ``0 <= mu <= 1``.  ``dropped_index`` is 1-based, like the gallery's
    vertex labels.  When ``rho`` coincides with ``rho0`` the segment is a
    point; a ``mu = 0`` infeasible record is returned instead of raising.

    Raises
    ------
    NoFeasibleDropError
        No drop-one system is feasible.
    """
    rho, rho0 = rho.normalized(), rho0.normalized()
    r0 = realify(rho0)
    direction = realify(rho) - r0
    k = len(family)
    if np.linalg.norm(direction) < tol.residual_tol:
        return DecompositionSolve(np.zeros(k), 0.0, False, False, mu=0.0)
    full = _system(family)
    for i in range(k):
        cols = [j for j in range(k) if j != i]
        a = np.column_stack([full[:, cols], -direction])
        a = np.vstack([a, np.append(np.ones(k - 1), 0.0)])
        rhs = np.append(r0, 1.0)
        sol, res, unique = _lstsq(a, rhs)
        lam, mu = sol[:-1], float(sol[-1])
        ok = (res < tol.residual_tol and bool(np.all(lam >= -tol.residual_tol))
              and -tol.residual_tol <= mu <= 1 + tol.residual_tol)
        if ok:
            coeffs = np.insert(lam, i, 0.0)
            return DecompositionSolve(coeffs, res, True, unique, mu=mu, dropped_index=i + 1)
    raise NoFeasibleDropError("no drop-one system admits a feasible solution")


def dual_pairing(rho: BipartiteOperator, choi: BipartiteOperator,
                 tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """``Re tr(rho C^T)``; the imaginary part must vanish for Hermitian input."""
    if rho.matrix.shape != choi.matrix.shape:
        raise ValueError("dimension mismatch")
    val = np.trace(rho.matrix @ choi.matrix.T)
    if abs(val.imag) > tol.residual_tol * max(1.0, abs(val.real)):
        raise MalformedOperatorError(f"pairing has imaginary part {val.imag:.3e}")
    return float(val.real)


__all__ = [
    "EDGE", "NOT_EDGE", "HOLDS", "FAILS", "UNDECIDED",
    "EdgeExtraction", "DecompositionSolve",
    "is_ppt", "state_type", "range_contained", "max_epsilon_positive", "max_epsilon_ppt",
    "is_edge_state", "extract_edge_state", "separability_solve", "nearest_face_solve",
    "dual_pairing",
]
