"""Bipartite linear algebra on C^m (x) C^n.

Index convention: the composite index of ``e_i (x) f_j`` is ``i * n + j``
(row-major over first-factor index, then second-factor index), which is
what ``np.kron`` produces.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import MalformedOperatorError

ZERO_CUTOFF = 1e-12


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical thresholds shared by every module.

    Attributes
    ----------
    rank_rel_tol : float
        Eigenvalues with ``|lam| <= rank_rel_tol * max|lam|`` count as zero.
    residual_tol : float
        Bound on constraint residuals (subspace membership, linear solves).
    root_tol : float
        Polynomial roots closer than this are merged.
    match_tol : float
        Componentwise distance below which two canonical product vectors
        are the same point.
    """

    rank_rel_tol: float = 1e-9
    residual_tol: float = 1e-8
    root_tol: float = 1e-7
    match_tol: float = 1e-7

    def __post_init__(self):
        for name in ("rank_rel_tol", "residual_tol", "root_tol", "match_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if not self.rank_rel_tol < 1:
            raise ValueError("rank_rel_tol must be < 1")


DEFAULT_TOL = ToleranceConfig()


def canonical_phase(v: np.ndarray, tol: float = DEFAULT_TOL.match_tol) -> np.ndarray:
    """Normalize ``v`` and rotate its phase so the first entry with modulus
    above ``tol`` is real and positive."""
    v = np.asarray(v, dtype=complex)
    nrm = np.linalg.norm(v)
    if nrm == 0:
        raise ValueError("cannot canonicalize the zero vector")
    v = v / nrm
    pivots = np.flatnonzero(np.abs(v) > tol)
    if pivots.size:
        p = v[pivots[0]]
        v = v * (abs(p) / p)
        v[pivots[0]] = abs(p)
    return v


@dataclass(frozen=True, eq=False)
class ProductVector:
    """Unit product vector ``x (x) y`` up to phase.

    Both factors are stored normalized and phase-canonical, so two instances
    describing the same ray compare equal (within ``match_tol``).
    """

    x: np.ndarray
    y: np.ndarray

    def __init__(self, x, y, tol: float = DEFAULT_TOL.match_tol):
        object.__setattr__(self, "x", canonical_phase(x, tol))
        object.__setattr__(self, "y", canonical_phase(y, tol))
        self.x.setflags(write=False)
        self.y.setflags(write=False)

    @property
    def m(self) -> int:
        return self.x.size

    @property
    def n(self) -> int:
        return self.y.size

    @property
    def vector(self) -> np.ndarray:
        return tensor(self.x, self.y)

    def projector(self) -> np.ndarray:
        z = self.vector
        return np.outer(z, z.conj())

    def distance(self, other: "ProductVector") -> float:
        if (self.m, self.n) != (other.m, other.n):
            return np.inf
        return float(max(np.max(np.abs(self.x - other.x)), np.max(np.abs(self.y - other.y))))

    def matches(self, other: "ProductVector", tol: float = DEFAULT_TOL.match_tol) -> bool:
        return self.distance(other) < tol

    def __eq__(self, other):
        if not isinstance(other, ProductVector):
            return NotImplemented
        return self.matches(other)

    __hash__ = None

    def sort_key(self) -> tuple:
        parts = np.concatenate([self.x, self.y])
        return tuple(np.round(np.column_stack([parts.real, parts.imag]).ravel(), 9))

    def __repr__(self):
        fmt = lambda v: np.array2string(v, precision=4, suppress_small=True)
        return f"ProductVector(x={fmt(self.x)}, y={fmt(self.y)})"

    def to_json(self) -> dict:
        return {"x": _encode_complex(self.x), "y": _encode_complex(self.y)}

    @classmethod
    def from_json(cls, data: dict) -> "ProductVector":
        return cls(_decode_complex(data["x"]), _decode_complex(data["y"]))


@dataclass(frozen=True, eq=False)
class BipartiteOperator:
    """Hermitian matrix on C^m (x) C^n.

    Density matrices and entanglement witnesses both use this type.  The
    constructor rejects matrices that are not Hermitian within ``herm_tol``
    (relative to the largest entry).
    """

    matrix: np.ndarray
    m: int
    n: int
    herm_tol: float = field(default=DEFAULT_TOL.residual_tol, repr=False)

    def __post_init__(self):
        a = np.array(self.matrix, dtype=complex)
        d = self.m * self.n
        if a.shape != (d, d):
            raise MalformedOperatorError(f"expected a {d}x{d} matrix, got {a.shape}")
        scale = max(1.0, float(np.max(np.abs(a))) if a.size else 1.0)
        if np.max(np.abs(a - a.conj().T), initial=0.0) > self.herm_tol * scale:
            raise MalformedOperatorError("operator is not Hermitian")
        a.setflags(write=False)
        object.__setattr__(self, "matrix", a)

    @property
    def dim(self) -> int:
        return self.m * self.n

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def normalized(self) -> "BipartiteOperator":
        tr = self.trace
        if abs(tr) < ZERO_CUTOFF:
            raise MalformedOperatorError("operator has zero trace")
        return BipartiteOperator(self.matrix / tr, self.m, self.n)

    def partial_transpose(self) -> "BipartiteOperator":
        return partial_transpose(self)

    def __add__(self, other: "BipartiteOperator") -> "BipartiteOperator":
        _check_dims(self, other)
        return BipartiteOperator(self.matrix + other.matrix, self.m, self.n)

    def __sub__(self, other: "BipartiteOperator") -> "BipartiteOperator":
        _check_dims(self, other)
        return BipartiteOperator(self.matrix - other.matrix, self.m, self.n)

    def __mul__(self, c: float) -> "BipartiteOperator":
        return BipartiteOperator(self.matrix * float(c), self.m, self.n)

    __rmul__ = __mul__

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n, "entries": _encode_complex(self.matrix.ravel())}

    @classmethod
    def from_json(cls, data: dict) -> "BipartiteOperator":
        m, n = int(data["m"]), int(data["n"])
        entries = _decode_complex(data["entries"])
        return cls(entries.reshape(m * n, m * n), m, n)


def _check_dims(a: BipartiteOperator, b: BipartiteOperator) -> None:
    if (a.m, a.n) != (b.m, b.n):
        raise ValueError(f"dimension mismatch: {a.m}x{a.n} vs {b.m}x{b.n}")


@dataclass(frozen=True, eq=False)
class Subspace:
    """Linear subspace of C^m (x) C^n held as orthonormal rows of ``basis``."""

    basis: np.ndarray
    m: int
    n: int

    def __post_init__(self):
        b = np.atleast_2d(np.array(self.basis, dtype=complex))
        if b.size == 0:
            b = np.zeros((0, self.m * self.n), dtype=complex)
        if b.shape[1] != self.m * self.n:
            raise ValueError("basis vectors have the wrong length")
        gram = b.conj() @ b.T
        if not np.allclose(gram, np.eye(b.shape[0]), atol=1e-9):
            raise ValueError("basis is not orthonormal")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @classmethod
    def span(cls, vectors: Iterable, m: int, n: int, tol: ToleranceConfig = DEFAULT_TOL) -> "Subspace":
        """Orthonormal basis of the span of ``vectors`` (rank-revealing SVD)."""
        rows = [v.vector if isinstance(v, ProductVector) else np.asarray(v, dtype=complex) for v in vectors]
        if not rows:
            return cls(np.zeros((0, m * n)), m, n)
        a = np.array(rows, dtype=complex)
        _, s, vh = np.linalg.svd(a, full_matrices=False)
        r = int(np.sum(s > max(tol.rank_rel_tol * s[0], ZERO_CUTOFF))) if s.size else 0
        return cls(vh[:r], m, n)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def projector(self) -> np.ndarray:
        return self.basis.T @ self.basis.conj()

    def orthocomplement(self) -> "Subspace":
        d = self.m * self.n
        if self.dim == 0:
            return Subspace(np.eye(d), self.m, self.n)
        _, _, vh = np.linalg.svd(self.basis, full_matrices=True)
        return Subspace(vh[self.dim:], self.m, self.n)

    def residual(self, v: np.ndarray) -> float:
        """Norm of the component of ``v`` orthogonal to this subspace."""
        v = np.asarray(v, dtype=complex)
        return float(np.linalg.norm(v - self.basis.T @ (self.basis.conj() @ v)))

    def contains(self, v, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
        if isinstance(v, ProductVector):
            v = v.vector
        return self.residual(v) < tol.residual_tol * max(1.0, float(np.linalg.norm(v)))

    def distance(self, other: "Subspace") -> float:
        """Spectral norm of the difference of orthogonal projectors."""
        return float(np.linalg.norm(self.projector() - other.projector(), 2))

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n, "basis": [_encode_complex(v) for v in self.basis]}

    @classmethod
    def from_json(cls, data: dict) -> "Subspace":
        m, n = int(data["m"]), int(data["n"])
        vecs = [_decode_complex(v) for v in data["basis"]]
        return cls.span(vecs, m, n)


def tensor(x, y) -> np.ndarray:
    """Coordinates of ``x (x) y``: entry ``i*n + j`` is ``x[i] * y[j]``."""
    return np.kron(np.asarray(x, dtype=complex), np.asarray(y, dtype=complex))


def partial_transpose(rho: BipartiteOperator) -> BipartiteOperator:
    """Transpose on the first tensor factor.

    Swaps the n x n blocks ``(i, j) <-> (j, i)``; a pure index permutation,
    so applying it twice returns the input bit-for-bit.
    """
    m, n = rho.m, rho.n
    a = rho.matrix.reshape(m, n, m, n).transpose(2, 1, 0, 3).reshape(m * n, m * n)
    return BipartiteOperator(a, m, n)


def partial_conjugate(p: ProductVector) -> ProductVector:
    return ProductVector(p.x.conj(), p.y)


def _as_operator(a) -> BipartiteOperator:
    if isinstance(a, BipartiteOperator):
        return a
    raise TypeError("expected a BipartiteOperator")


def _spectrum(a: BipartiteOperator, tol: ToleranceConfig):
    w, v = np.linalg.eigh(_as_operator(a).matrix)
    top = float(np.max(np.abs(w))) if w.size else 0.0
    if top <= ZERO_CUTOFF:
        return w, v, np.zeros(w.shape, dtype=bool)
    return w, v, np.abs(w) > tol.rank_rel_tol * top


def hermitian_rank(a: BipartiteOperator, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    return int(np.sum(_spectrum(a, tol)[2]))


def kernel_of(a: BipartiteOperator, tol: ToleranceConfig = DEFAULT_TOL) -> Subspace:
    _, v, keep = _spectrum(a, tol)
    return Subspace(v[:, ~keep].T, a.m, a.n)


def range_of(a: BipartiteOperator, tol: ToleranceConfig = DEFAULT_TOL) -> Subspace:
    _, v, keep = _spectrum(a, tol)
    return Subspace(v[:, keep].T, a.m, a.n)


def realify(a) -> np.ndarray:
    """Real coordinates of a Hermitian matrix, isometric for the Frobenius
    inner product: diagonal, then sqrt(2)*Re and sqrt(2)*Im of the strict
    upper triangle (row-major)."""
    mat = a.matrix if isinstance(a, BipartiteOperator) else np.asarray(a, dtype=complex)
    iu = np.triu_indices(mat.shape[0], k=1)
    upper = mat[iu]
    return np.concatenate([np.diag(mat).real, np.sqrt(2) * upper.real, np.sqrt(2) * upper.imag])


def projector(z) -> np.ndarray:
    z = z.vector if isinstance(z, ProductVector) else np.asarray(z, dtype=complex)
    return np.outer(z, z.conj())


def mixture(family: Sequence[ProductVector], weights) -> BipartiteOperator:
    """``sum_i weights[i] |z_i><z_i|`` over unit product vectors."""
    fam = list(family)
    m, n = fam[0].m, fam[0].n
    acc = np.zeros((m * n, m * n), dtype=complex)
    for w, p in zip(weights, fam):
        acc += float(w) * p.projector()
    return BipartiteOperator(acc, m, n)


def _encode_complex(v) -> list:
    v = np.asarray(v, dtype=complex).ravel()
    return [[float(c.real), float(c.imag)] for c in v]


def _decode_complex(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("complex entries must be [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def dumps(obj) -> str:
    """JSON text for any object exposing ``to_json``."""
    return json.dumps(obj.to_json(), sort_keys=True)
