"""Concrete states, product-vector families, maps and constants.

Every matrix here is typed in from its closed-form entry pattern rather
than assembled from a decomposition, so that decomposition identities
checked elsewhere are genuine cross-checks.  Matrices follow the index
convention of :mod:`sepfaces.tensor_core` (entry ``3*i + j`` for
``e_i (x) f_j``).

Default showcase parameters are ``b = 2`` (Choi's original example),
``theta = pi/6`` and ``s = 1/2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, pi, sqrt

import numpy as np

from .errors import DomainError
from .tensor_core import BipartiteOperator, ProductVector, mixture

DEFAULT_B = 2.0
DEFAULT_THETA = pi / 6
DEFAULT_S = 0.5


@dataclass(frozen=True)
class GalleryParams:
    b: float = DEFAULT_B
    theta: float = DEFAULT_THETA
    s: float = DEFAULT_S

    def __post_init__(self):
        _check_b(self.b)
        _check_theta(self.theta)
        _check_s(self.s)


def _check_b(b):
    if not (b > 0 and b != 1):
        raise DomainError(f"b must be positive and different from 1, got {b}")


def _check_theta(theta):
    if not (-pi / 3 < theta < pi / 3 and theta != 0):
        raise DomainError(f"theta must lie in (-pi/3, pi/3) and be nonzero, got {theta}")


def _check_s(s):
    if not (s > 0 and s != 1):
        raise DomainError(f"s must be positive and different from 1, got {s}")


def _from_entries(diag, offdiag, m=3, n=3) -> np.ndarray:
    """Hermitian matrix from a diagonal and upper off-diagonal entries.

    ``offdiag`` maps 1-based ``(row, col)`` with ``row < col`` to a value;
    the lower triangle is filled by conjugation.
    """
    a = np.diag(np.asarray(diag, dtype=complex))
    for (r, c), val in offdiag.items():
        a[r - 1, c - 1] = val
        a[c - 1, r - 1] = np.conj(val)
    return a


# -- Choi's rank-four edge state and its kernel product vectors -------------

def rho_b(b: float = DEFAULT_B) -> BipartiteOperator:
    """Rank-four PPT entangled edge state (Choi's example at ``b = 2``)."""
    _check_b(b)
    diag = [1, b, 1 / b, 1 / b, 1, b, b, 1 / b, 1]
    off = {(1, 5): 1, (1, 9): 1, (5, 9): 1, (2, 4): 1, (3, 7): 1, (6, 8): 1}
    return BipartiteOperator(_from_entries(diag, off) / (3 * (1 + b + 1 / b)), 3, 3)


def six_products_b_raw(b: float = DEFAULT_B) -> list[tuple[np.ndarray, np.ndarray]]:
    """The six kernel product vectors of :func:`rho_b`, unnormalized."""
    _check_b(b)
    r = sqrt(b)
    return [
        (np.array([1, r, 0]), np.array([1, -1 / r, 0])),
        (np.array([1, -r, 0]), np.array([1, 1 / r, 0])),
        (np.array([0, 1, r]), np.array([0, 1, -1 / r])),
        (np.array([0, 1, -r]), np.array([0, 1, 1 / r])),
        (np.array([r, 0, 1]), np.array([-1 / r, 0, 1])),
        (np.array([-r, 0, 1]), np.array([1 / r, 0, 1])),
    ]


def six_products_b(b: float = DEFAULT_B) -> list[ProductVector]:
    return [ProductVector(x, y) for x, y in six_products_b_raw(b)]


def center_b(b: float = DEFAULT_B) -> BipartiteOperator:
    """Barycenter of the six pure product states of :func:`six_products_b`."""
    return mixture(six_products_b(b), [1 / 6] * 6)


def drop_one_b(b: float, k: int) -> BipartiteOperator:
    """Center of the maximal face opposite vertex ``k`` (1-based)."""
    _check_index(k, 6)
    weights = [0 if i == k - 1 else 1 / 5 for i in range(6)]
    return mixture(six_products_b(b), weights)


def sigma_b(b: float, k: int) -> BipartiteOperator:
    """Rank-four edge state ``(5/4)(rho_k - rho_0 / 5)`` beyond face ``k``."""
    return 1.25 * (drop_one_b(b, k) - 0.2 * center_b(b))


def sigma_segment(b: float, i: int, j: int, t: float) -> BipartiteOperator:
    """``t * sigma_i + (1 - t) * sigma_j``."""
    return t * sigma_b(b, i) + (1 - t) * sigma_b(b, j)


def sigma_segment_weights(i: int, j: int, t: float) -> np.ndarray:
    """Coefficients of :func:`sigma_segment` over the six pure states."""
    w = np.full(6, 5 / 24)
    w[i - 1] = (5 - 6 * t) / 24
    w[j - 1] = (6 * t - 1) / 24
    return w


def replaced_first_factor_family(b: float = DEFAULT_B) -> list[ProductVector]:
    """The six kernel vectors with the first x-factor replaced by ``e_3``:
    a generalized unextendible family that is not in general position."""
    raw = six_products_b_raw(b)
    raw[0] = (np.array([0, 0, 1]), raw[0][1])
    return [ProductVector(x, y) for x, y in raw]


def _check_index(k, top):
    if not (1 <= k <= top):
        raise IndexError(f"index must lie in 1..{top}, got {k}")


# -- the (5,5) edge states, their range product vectors, and W_theta ------

def rho_theta(b: float = DEFAULT_B, theta: float = DEFAULT_THETA) -> BipartiteOperator:
    """Unnormalized (5,5) PPT entangled edge state ``varrho_theta``."""
    _check_b(b)
    _check_theta(theta)
    ep, em = np.exp(1j * theta), np.exp(-1j * theta)
    two_cos = ep + em
    diag = [two_cos, 1 / b, b, b, two_cos, 1 / b, 1 / b, b, two_cos]
    off = {
        (1, 5): -ep, (1, 9): -em, (5, 9): -ep,
        (2, 4): -em, (3, 7): -ep, (6, 8): -em,
    }
    return BipartiteOperator(_from_entries(diag, off), 3, 3)


def kernel_w(b: float = DEFAULT_B, theta: float = DEFAULT_THETA) -> list[np.ndarray]:
    """Four vectors spanning the kernel of :func:`rho_theta`."""
    _check_b(b)
    _check_theta(theta)
    e = np.exp(1j * theta)
    w1 = np.array([1, 0, 0, 0, 1, 0, 0, 0, 1], dtype=complex)
    w2 = np.array([0, b, 0, e, 0, 0, 0, 0, 0], dtype=complex)
    w3 = np.array([0, 0, 0, 0, 0, b, 0, e, 0], dtype=complex)
    w4 = np.array([0, 0, e, 0, 0, 0, b, 0, 0], dtype=complex)
    return [w1, w2, w3, w4]


def six_products_theta_raw(b: float = DEFAULT_B, theta: float = DEFAULT_THETA):
    """Unnormalized factor pairs of the six range product vectors."""
    _check_b(b)
    _check_theta(theta)
    w = sqrt(b) * np.exp(1j * theta / 2)
    return [
        (np.array([1, w, 0]), np.array([w, -1, 0])),
        (np.array([-1, w, 0]), np.array([w, 1, 0])),
        (np.array([0, 1, w]), np.array([0, w, -1])),
        (np.array([0, -1, w]), np.array([0, w, 1])),
        (np.array([w, 0, 1]), np.array([-1, 0, w])),
        (np.array([w, 0, -1]), np.array([1, 0, w])),
    ]


def six_products_theta(b: float = DEFAULT_B, theta: float = DEFAULT_THETA) -> list[ProductVector]:
    return [ProductVector(x, y) for x, y in six_products_theta_raw(b, theta)]


def rho_sep(b: float = DEFAULT_B, theta: float = DEFAULT_THETA) -> BipartiteOperator:
    """Unnormalized separable (5,6) state with unique decomposition."""
    _check_b(b)
    _check_theta(theta)
    ep, em = np.exp(1j * theta), np.exp(-1j * theta)
    diag = [2, 1 / b, b, b, 2, 1 / b, 1 / b, b, 2]
    off = {
        (1, 5): -1, (1, 9): -1, (5, 9): -1,
        (2, 4): -em, (3, 7): -ep, (6, 8): -em,
    }
    return BipartiteOperator(_from_entries(diag, off), 3, 3)


def rho_sep_weights(b: float = DEFAULT_B, theta: float = DEFAULT_THETA) -> np.ndarray:
    """Weights of :func:`rho_sep` over the *normalized* six range vectors:
    ``||z_i||^2 / (2b)``."""
    norms = [np.linalg.norm(np.kron(x, y)) ** 2 for x, y in six_products_theta_raw(b, theta)]
    return np.array(norms) / (2 * b)


def mixed_59(b: float = DEFAULT_B, theta: float = DEFAULT_THETA) -> BipartiteOperator:
    """``(rho_sep + rho_theta) / 2``; its partial transpose has type (9,5)."""
    return 0.5 * (rho_sep(b, theta) + rho_theta(b, theta))


def witness_W(b: float = DEFAULT_B, theta: float = DEFAULT_THETA) -> BipartiteOperator:
    """Decomposable witness: partial transpose of a positive matrix supported
    on the kernel of :func:`mixed_59`."""
    _check_b(b)
    _check_theta(theta)
    ep, em = np.exp(1j * theta), np.exp(-1j * theta)
    diag = [1, b, 1 / b, 1 / b, 1, b, b, 1 / b, 1]
    off = {
        (1, 5): ep, (1, 9): em, (5, 9): ep,
        (2, 4): 1, (3, 7): 1, (6, 8): 1,
    }
    return BipartiteOperator(_from_entries(diag, off), 3, 3)


# -- the ten-vertex simplicial face and the generalized Choi maps ---------

def delta9_family(b: float = DEFAULT_B) -> list[ProductVector]:
    """Ten real product vectors: six b-dependent ones, then four sign patterns."""
    _check_b(b)
    r = sqrt(b)
    six = [
        ([1, r, 0], [1, 1 / r, 0]),
        ([1, -r, 0], [1, -1 / r, 0]),
        ([0, 1, r], [0, 1, 1 / r]),
        ([0, 1, -r], [0, 1, -1 / r]),
        ([r, 0, 1], [1 / r, 0, 1]),
        ([-r, 0, 1], [-1 / r, 0, 1]),
    ]
    four = [
        ([1, 1, 1], [1, 1, 1]),
        ([1, 1, -1], [1, 1, -1]),
        ([1, -1, 1], [1, -1, 1]),
        ([-1, 1, 1], [-1, 1, 1]),
    ]
    return [ProductVector(x, y) for x, y in six + four]


def delta9_first_six_perp(b: float = DEFAULT_B) -> list[np.ndarray]:
    """Three vectors spanning the orthocomplement of the first six."""
    _check_b(b)
    r = sqrt(b)

    def ket(i, j):
        v = np.zeros(9, dtype=complex)
        v[3 * (i - 1) + (j - 1)] = 1
        return v

    return [
        r * ket(1, 2) - ket(2, 1) / r,
        r * ket(2, 3) - ket(3, 2) / r,
        r * ket(3, 1) - ket(1, 3) / r,
    ]


def delta9_center(b: float = DEFAULT_B) -> BipartiteOperator:
    return mixture(delta9_family(b), [0.1] * 10)


def delta9_drop_one(b: float, k: int) -> BipartiteOperator:
    """Center ``sigma_k`` of the maximal face opposite vertex ``k``."""
    _check_index(k, 10)
    return mixture(delta9_family(b), [0 if i == k - 1 else 1 / 9 for i in range(10)])


def generalized_choi_map(alpha: float, beta: float, gamma: float):
    """The map ``Phi[alpha, beta, gamma]`` on 3x3 matrices, as a callable."""

    def phi(x):
        x = np.asarray(x, dtype=complex)
        out = -x.copy()
        d = np.diag(x)
        out[0, 0] = alpha * d[0] + beta * d[1] + gamma * d[2]
        out[1, 1] = gamma * d[0] + alpha * d[1] + beta * d[2]
        out[2, 2] = beta * d[0] + gamma * d[1] + alpha * d[2]
        return out

    return phi


def choi_matrix_generalized(alpha: float, beta: float, gamma: float) -> BipartiteOperator:
    """Choi matrix of ``Phi[alpha, beta, gamma]``."""
    if min(alpha, beta, gamma) < 0:
        raise DomainError("alpha, beta, gamma must be nonnegative")
    diag = [alpha, gamma, beta, beta, alpha, gamma, gamma, beta, alpha]
    off = {(1, 5): -1, (1, 9): -1, (5, 9): -1}
    return BipartiteOperator(_from_entries(diag, off), 3, 3)


def phi_s_params(s: float) -> tuple[float, float, float]:
    """``(alpha, beta, gamma)`` of the positive map ``Phi(s)``."""
    _check_s(s)
    den = 1 - s + s * s
    return (1 - s) ** 2 / den, s * s / den, 1 / den


def choi_phi_s(s: float) -> BipartiteOperator:
    return choi_matrix_generalized(*phi_s_params(s))


# -- qubit-qudit example ----------------------------------------------------

def qubit_qudit_example() -> list[ProductVector]:
    """Five product vectors in C^2 (x) C^3: ``(0,1) (x) (0,0,1)`` and
    ``(1,z) (x) (1,z,z^2)`` for ``z`` in ``0, 1`` and the primitive cube
    roots of unity."""
    cube = np.exp(2j * pi / 3)
    fam = [ProductVector([0, 1], [0, 0, 1])]
    for z in (0, 1, cube, cube * cube):
        fam.append(ProductVector([1, z], [1, z, z * z]))
    return fam


# -- closed forms -----------------------------------------------------------

def lambda_k_closed_form(b: float, k: int) -> float:
    """Maximal PPT step from ``sigma_k`` away from the ten-vertex center."""
    _check_b(b)
    _check_index(k, 10)
    q = 1 + 8 * b + b * b
    if k <= 6:
        return 5 * (1 + b) ** 2 / (27 * q)
    return 5 * b / (3 * q)


def dimension_constants(m: int, n: int) -> tuple[int, int]:
    """``(p, count)``: the maximal dimension of a product-free subspace of
    C^m (x) C^n, and the generic number of product vectors in a subspace of
    dimension ``p + 1``."""
    if m < 2 or n < 2:
        raise DomainError("local dimensions must be at least 2")
    return (m - 1) * (n - 1), comb(m + n - 2, n - 1)



CONSTRUCTORS = {
    "rho_b": rho_b,
    "center_b": center_b,
    "drop_one_b": drop_one_b,
    "sigma_b": sigma_b,
    "sigma_segment": sigma_segment,
    "six_products_b": six_products_b,
    "replaced_first_factor_family": replaced_first_factor_family,
    "rho_theta": rho_theta,
    "kernel_w": kernel_w,
    "six_products_theta": six_products_theta,
    "rho_sep": rho_sep,
    "mixed_59": mixed_59,
    "witness_W": witness_W,
    "delta9_family": delta9_family,
    "delta9_center": delta9_center,
    "delta9_drop_one": delta9_drop_one,
    "choi_matrix_generalized": choi_matrix_generalized,
    "choi_phi_s": choi_phi_s,
    "phi_s_params": phi_s_params,
    "qubit_qudit_example": qubit_qudit_example,
    "lambda_k_closed_form": lambda_k_closed_form,
    "dimension_constants": dimension_constants,
}
