"""Predicates on families of product vectors and simplicial-face certificates.

A family ``P = {x_i (x) y_i}`` of product vectors spans the pure product
states ``|z_i><z_i|``.  Their convex hull is a simplicial face of the
separable body when

* (A) the pure states are linearly independent as Hermitian matrices, and
* (B) every product vector of ``span P`` is parallel to a member of ``P``.

It is an *induced* face (cut out by a face of the PPT body) under (A) and

* (C) every product vector ``z`` in ``span P`` whose partial conjugate lies
  in ``span conj(P)`` is parallel to a member of ``P``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DegeneratePencilError, NotGeneralPositionError
from .product_locator import (
    DEFAULT_CONFIG,
    LocatorConfig,
    brute_force_conjugate_products,
    brute_force_products,
    find_product_vectors,
)
from .tensor_core import (
    DEFAULT_TOL,
    ZERO_CUTOFF,
    ProductVector,
    Subspace,
    ToleranceConfig,
    partial_conjugate,
    projector,
    realify,
)

MAX_ENUMERATION = 20

HOLDS, FAILS, UNDECIDED = "holds", "fails", "undecided"


@dataclass(frozen=True)
class Verdict:
    """Three-valued outcome; ``basis`` says how it was reached
    (``"exhaustive"``, ``"oracle"`` or ``"trivial"``)."""

    status: str
    witness: Optional[ProductVector] = None
    basis: str = "exhaustive"
    detail: str = ""

    def __post_init__(self):
        if self.status not in (HOLDS, FAILS, UNDECIDED):
            raise ValueError(f"unknown verdict {self.status!r}")

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "witness": None if self.witness is None else self.witness.to_json(),
            "basis": self.basis,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class FaceCertificate:
    family_size: int
    condition_A: bool
    condition_B: Verdict
    condition_C: Verdict
    general_position: bool
    general_position_violation: Optional[tuple[int, ...]]
    gupb: Optional[bool]
    gupb_violation: Optional[tuple[tuple[int, ...], tuple[int, ...]]]
    cohen_subsets: tuple[tuple[int, ...], ...]
    simplex_dim: Optional[int]
    induced: bool
    notes: tuple[str, ...] = field(default=())

    @property
    def extreme_points(self) -> Optional[int]:
        return None if self.simplex_dim is None else self.simplex_dim + 1

    def to_json(self) -> dict:
        return {
            "family_size": self.family_size,
            "condition_A": self.condition_A,
            "condition_B": self.condition_B.to_json(),
            "condition_C": self.condition_C.to_json(),
            "general_position": self.general_position,
            "general_position_violation": (
                None if self.general_position_violation is None
                else list(self.general_position_violation)),
            "gupb": self.gupb,
            "gupb_violation": (
                None if self.gupb_violation is None
                else [list(self.gupb_violation[0]), list(self.gupb_violation[1])]),
            "cohen_subsets": [list(s) for s in self.cohen_subsets],
            "simplex_dim": self.simplex_dim,
            "extreme_points": self.extreme_points,
            "induced": self.induced,
            "notes": list(self.notes),
        }


def _dims(family: Sequence[ProductVector]) -> tuple[int, int]:
    if not family:
        raise ValueError("empty family")
    m, n = family[0].m, family[0].n
    if any((p.m, p.n) != (m, n) for p in family):
        raise ValueError("family members live in different spaces")
    return m, n


def _rank(vectors, tol: ToleranceConfig) -> int:
    a = np.atleast_2d(np.asarray(vectors, dtype=complex))
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    return int(np.sum(s > max(tol.rank_rel_tol * s[0], ZERO_CUTOFF)))


def is_general_position(family: Sequence[ProductVector], tol: ToleranceConfig = DEFAULT_TOL):
    """Every ``<= m`` of the x's and every ``<= n`` of the y's are independent.

    Returns
    -------
    (bool, tuple or None)
        On failure, the smallest violating index subset (size first, then
        lexicographic; x-side subsets are scanned before y-side ones).
    """
    m, n = _dims(family)
    xs = [p.x for p in family]
    ys = [p.y for p in family]
    for side, dim in ((xs, m), (ys, n)):
        for size in range(2, min(dim, len(family)) + 1):
            for sub in itertools.combinations(range(len(family)), size):
                if _rank([side[i] for i in sub], tol) < size:
                    return False, sub
    return True, None


def is_gupb(family: Sequence[ProductVector], tol: ToleranceConfig = DEFAULT_TOL):
    """Partition criterion for a generalized unextendible product basis.

    For every split ``I | J`` of the index set, the x's over ``I`` must span
    C^m or the y's over ``J`` must span C^n.  Returns ``(bool, (I, J))``
    with the first violating split on failure.
    """
    m, n = _dims(family)
    k = len(family)
    if k < m + n - 1:
        raise ValueError(f"the partition criterion needs at least {m + n - 1} vectors, got {k}")
    if k > MAX_ENUMERATION:
        raise ValueError(f"partition enumeration is capped at {MAX_ENUMERATION} vectors")
    for mask in range(1 << k):
        i_set = tuple(i for i in range(k) if mask >> i & 1)
        j_set = tuple(i for i in range(k) if not mask >> i & 1)
        if _rank([family[i].x for i in i_set], tol) == m:
            continue
        if _rank([family[j].y for j in j_set], tol) == n:
            continue
        return False, (i_set, j_set)
    return True, None


def pure_states_independent(family: Sequence[ProductVector], tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Linear independence of ``|z_i><z_i|`` in the real space of Hermitian
    matrices (condition A)."""
    _dims(family)
    rows = [realify(projector(p.vector)) for p in family]
    return _rank(rows, tol) == len(family)


def cohen_subsets(family: Sequence[ProductVector], tol: ToleranceConfig = DEFAULT_TOL):
    """Index subsets ``I`` (``|I| >= 2``) with
    ``dim span{x_i} + dim span{y_i} <= |I| + 1``."""
    _dims(family)
    k = len(family)
    if k < 2:
        raise ValueError("need at least two vectors")
    if k > MAX_ENUMERATION:
        raise ValueError(f"subset enumeration is capped at {MAX_ENUMERATION} vectors")
    out = []
    for size in range(2, k + 1):
        for sub in itertools.combinations(range(k), size):
            dx = _rank([family[i].x for i in sub], tol)
            dy = _rank([family[i].y for i in sub], tol)
            if dx + dy <= size + 1:
                out.append(sub)
    return tuple(out)


def _foreign(found, family, tol: ToleranceConfig):
    for v in found:
        if not any(v.matches(p, tol.match_tol) for p in family):
            return v
    return None


def _exhaustive_products(d: Subspace, cfg: LocatorConfig):
    """Locator output when an exhaustive answer is available, else None."""
    if (d.m, d.n) != (3, 3) or not 1 <= d.dim <= 8:
        return None
    try:
        res = find_product_vectors(d, cfg)
    except DegeneratePencilError:
        return None
    return res.vectors if res.complete else None


def check_condition_B(family: Sequence[ProductVector], cfg: LocatorConfig = DEFAULT_CONFIG) -> Verdict:
    """Does ``span P`` hold product vectors beyond ``P`` itself?

    Exhaustive in 3 (x) 3.  Elsewhere, or when the span carries a
    positive-dimensional family, the multistart oracle can only exhibit a
    foreign vector (``fails``); finding none leaves the verdict undecided.
    """
    m, n = _dims(family)
    tol = cfg.tol
    d = Subspace.span(family, m, n, tol)
    if d.dim == 1:
        return Verdict(HOLDS, basis="trivial", detail="one-dimensional span")
    found = _exhaustive_products(d, cfg)
    if found is not None:
        w = _foreign(found, family, tol)
        return Verdict(FAILS, w) if w is not None else Verdict(HOLDS)
    w = _foreign(brute_force_products(d, cfg).vectors, family, tol)
    if w is not None:
        return Verdict(FAILS, w, basis="oracle")
    return Verdict(UNDECIDED, basis="oracle", detail="oracle found no foreign vector")


def check_condition_C(family: Sequence[ProductVector], cfg: LocatorConfig = DEFAULT_CONFIG) -> Verdict:
    """Condition C: product vectors ``z`` of ``span P`` with ``conj_1(z)`` in
    ``span conj_1(P)`` must be parallel to members of ``P``.

    With an exhaustive product-vector list the filter is exact.  Otherwise
    the coupled system is attacked by the conjugate-pair oracle: a foreign
    solution gives ``fails``; ``holds`` is reported on evidence only when
    the oracle rediscovered every member of ``P`` and nothing else.
    """
    m, n = _dims(family)
    tol = cfg.tol
    d = Subspace.span(family, m, n, tol)
    e = Subspace.span([partial_conjugate(p) for p in family], m, n, tol)
    if d.dim == 1:
        return Verdict(HOLDS, basis="trivial", detail="one-dimensional span")
    found = _exhaustive_products(d, cfg)
    if found is not None:
        kept = [v for v in found if e.contains(partial_conjugate(v), tol)]
        w = _foreign(kept, family, tol)
        return Verdict(FAILS, w) if w is not None else Verdict(HOLDS)
    found = brute_force_conjugate_products(d, e, cfg).vectors
    w = _foreign(found, family, tol)
    if w is not None:
        return Verdict(FAILS, w, basis="oracle")
    if all(any(v.matches(p, tol.match_tol) for v in found) for p in family):
        return Verdict(HOLDS, basis="oracle",
                       detail=f"{cfg.multistart_count} starts recovered exactly the family")
    return Verdict(UNDECIDED, basis="oracle", detail="oracle missed family members")


def certify_simplicial_face(family: Sequence[ProductVector],
                            cfg: LocatorConfig = DEFAULT_CONFIG) -> FaceCertificate:
    """Aggregate every predicate into a :class:`FaceCertificate`."""
    m, n = _dims(family)
    tol = cfg.tol
    k = len(family)
    cond_a = pure_states_independent(family, tol)
    cond_b = check_condition_B(family, cfg)
    cond_c = HOLDS_VERDICT if cond_b.holds else check_condition_C(family, cfg)
    gp, gp_bad = is_general_position(family, tol)
    if m + n - 1 <= k <= MAX_ENUMERATION:
        gupb, gupb_bad = is_gupb(family, tol)
    else:
        gupb, gupb_bad = None, None
    cohen = cohen_subsets(family, tol) if k >= 2 else ()
    notes = []
    if cond_b.holds:
        notes.append("condition C inherited from condition B")
    return FaceCertificate(
        family_size=k,
        condition_A=cond_a,
        condition_B=cond_b,
        condition_C=cond_c,
        general_position=gp,
        general_position_violation=gp_bad,
        gupb=gupb,
        gupb_violation=gupb_bad,
        cohen_subsets=cohen,
        simplex_dim=k - 1 if cond_a else None,
        induced=cond_a and cond_c.holds,
        notes=tuple(notes),
    )


HOLDS_VERDICT = Verdict(HOLDS, basis="implied", detail="implied by condition B")


def two_by_n_products(family: Sequence[ProductVector]) -> np.ndarray:
    """Quantities ``a_{N,1} a_{k,2} conj(a_{N,2}) conj(a_{k,1})`` for
    ``k = 3..N-1``, where ``x_k = a_{k,1} x_1 + a_{k,2} x_2`` and ``N`` is the
    last index."""
    m, _ = _dims(family)
    if m != 2:
        raise ValueError("the non-real condition concerns qubit-qudit families")
    basis = np.column_stack([family[0].x, family[1].x])
    coeffs = [np.linalg.solve(basis, p.x) for p in family]
    last = coeffs[-1]
    return np.array([last[0] * a[1] * np.conj(last[1]) * np.conj(a[0]) for a in coeffs[2:-1]])


def check_2xn_condition(family: Sequence[ProductVector], tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Non-real condition for a qubit-qudit family in general position.

    True iff every quantity of :func:`two_by_n_products` has an imaginary
    part exceeding ``residual_tol``.
    """
    m, n = _dims(family)
    if m != 2:
        raise ValueError("the non-real condition concerns qubit-qudit families")
    if len(family) < 3:
        raise ValueError("need at least three vectors")
    ok, bad = is_general_position(family, tol)
    if not ok:
        raise NotGeneralPositionError(f"subset {bad} is degenerate")
    prods = two_by_n_products(family)
    return bool(np.all(np.abs(prods.imag) > tol.residual_tol))
