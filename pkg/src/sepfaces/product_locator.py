"""Locate product vectors ``x (x) y`` inside a subspace ``D`` of C^m (x) C^n.

Membership of ``x (x) y`` in ``D`` is the bilinear system
``<w_i | x (x) y> = x^T conj(W_i) y = 0`` over an orthonormal basis
``{w_i}`` of the orthocomplement (``W_i`` is ``w_i`` reshaped to m x n).
For fixed ``x`` this is linear in ``y``: ``M(x) y = 0`` with ``M(x)`` the
k x n *constraint matrix*, so ``x`` is admissible iff every maximal minor of
``M(x)`` vanishes.

Two independent solvers are provided:

* :func:`find_product_vectors` (3 (x) 3 only) eliminates ``t`` from two cubic
  minors in the charts ``x = (1, s, t)``, ``(0, 1, t)``, ``(0, 0, 1)`` with a
  Sylvester resultant, takes companion-matrix eigenvalues for ``s``,
  back-substitutes, Newton-polishes and verifies against the full system.
* :func:`brute_force_products` runs multistart alternating minimization of
  ``||P_{D^perp}(x (x) y)||^2``; it never claims exhaustiveness.

:func:`brute_force_conjugate_products` extends the oracle to the coupled
real-algebraic problem ``x (x) y in D`` and ``conj(x) (x) y in E``.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import DegeneratePencilError
from .tensor_core import DEFAULT_TOL, ProductVector, Subspace, ToleranceConfig

log = logging.getLogger(__name__)

JACOBIAN_REL_TOL = 1e-6
_ZERO_RESULTANT_REL = 1e-9
_TRIM_REL = 1e-13


@dataclass(frozen=True)
class LocatorConfig:
    max_degree_guard: int = 9
    newton_iters: int = 30
    multistart_count: int = 200
    rng_seed: int = 0
    tol: ToleranceConfig = DEFAULT_TOL
    max_sweeps: int = 500

    def __post_init__(self):
        if self.multistart_count < 1:
            raise ValueError("multistart_count must be >= 1")
        if self.newton_iters < 1:
            raise ValueError("newton_iters must be >= 1")


DEFAULT_CONFIG = LocatorConfig()


@dataclass(frozen=True)
class LocatorResult:
    vectors: tuple[ProductVector, ...]
    complete: bool
    residuals: tuple[float, ...] = field(default=())

    def __len__(self):
        return len(self.vectors)

    def to_json(self) -> dict:
        return {
            "vectors": [v.to_json() for v in self.vectors],
            "complete": self.complete,
            "residuals": list(self.residuals),
        }


# -- shared helpers -----------------------------------------------------------

def _weight_tensor(basis: np.ndarray, m: int, n: int) -> np.ndarray:
    """Stack of ``conj(W_i)`` with shape (k, m, n)."""
    basis = np.asarray(basis, dtype=complex).reshape(-1, m * n)
    return basis.conj().reshape(-1, m, n)


def constraint_matrix(orthocomplement_basis, x) -> np.ndarray:
    """Rows ``x^T conj(W_i)``; ``x (x) y`` lies in the subspace iff
    ``constraint_matrix(...) @ y == 0``."""
    x = np.asarray(x, dtype=complex)
    basis = np.atleast_2d(np.asarray(orthocomplement_basis, dtype=complex))
    m = x.size
    n = basis.shape[1] // m
    return np.einsum("a,iab->ib", x, _weight_tensor(basis, m, n))


def _null_direction(a: np.ndarray) -> np.ndarray:
    """Unit vector minimizing ``||a v||``."""
    if a.shape[0] == 0:
        v = np.zeros(a.shape[1], dtype=complex)
        v[0] = 1
        return v
    _, _, vh = np.linalg.svd(a, full_matrices=True)
    return vh[-1].conj()


def _residual(wc: np.ndarray, x: np.ndarray, y: np.ndarray) -> float:
    if wc.shape[0] == 0:
        return 0.0
    x = x / np.linalg.norm(x)
    y = y / np.linalg.norm(y)
    return float(np.linalg.norm(np.einsum("a,iab,b->i", x, wc, y)))


def _newton_polish(wc: np.ndarray, x: np.ndarray, y: np.ndarray, iters: int):
    """Gauss-Newton on the holomorphic system ``x^T conj(W_i) y = 0``.

    The largest entries of ``x`` and ``y`` are pinned to 1 to remove the
    scaling freedom.  Returns unit ``x``, ``y``, the residual and whether the
    Jacobian has full column rank at the solution.
    """
    x = np.array(x, dtype=complex)
    y = np.array(y, dtype=complex)
    px, py = int(np.argmax(np.abs(x))), int(np.argmax(np.abs(y)))
    x, y = x / x[px], y / y[py]
    fx = np.arange(x.size) != px
    fy = np.arange(y.size) != py
    jac = np.zeros((wc.shape[0], 0))
    for _ in range(iters):
        f = np.einsum("a,iab,b->i", x, wc, y)
        jac = np.hstack([np.einsum("iab,b->ia", wc, y)[:, fx], np.einsum("a,iab->ib", x, wc)[:, fy]])
        if jac.size == 0:
            break
        step = np.linalg.lstsq(jac, -f, rcond=None)[0]
        x[fx] += step[: fx.sum()]
        y[fy] += step[fx.sum():]
        if np.linalg.norm(step) < 1e-15 * (1 + np.linalg.norm(x) + np.linalg.norm(y)):
            break
    jac = np.hstack([np.einsum("iab,b->ia", wc, y)[:, fx], np.einsum("a,iab->ib", x, wc)[:, fy]])
    ok = _full_column_rank(jac)
    return x / np.linalg.norm(x), y / np.linalg.norm(y), _residual(wc, x, y), ok


def _full_column_rank(jac: np.ndarray) -> bool:
    if jac.shape[1] == 0:
        return True
    if jac.shape[0] < jac.shape[1]:
        return False
    s = np.linalg.svd(jac, compute_uv=False)
    return bool(s[-1] > JACOBIAN_REL_TOL * max(s[0], 1e-300))


def _cluster(cands, tol: ToleranceConfig):
    """Greedy merge of (ProductVector, residual, flag) triples after a
    canonical sort, so the outcome does not depend on discovery order."""
    cands = sorted(cands, key=lambda c: (c[0].sort_key(), c[1]))
    out = []
    for c in cands:
        for i, o in enumerate(out):
            if c[0].matches(o[0], tol.match_tol):
                if c[1] < o[1]:
                    out[i] = (o[0], c[1], o[2] and c[2])
                else:
                    out[i] = (o[0], o[1], o[2] and c[2])
                break
        else:
            out.append(c)
    out.sort(key=lambda c: c[0].sort_key())
    return out


def membership(p: ProductVector, d: Subspace, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True iff ``||P_{D^perp}(x (x) y)|| < residual_tol``."""
    if (p.m, p.n) != (d.m, d.n):
        raise ValueError("dimension mismatch")
    return d.residual(p.vector) < tol.residual_tol


# -- homogeneous polynomial arithmetic in (x0, x1, x2) -------------------------

def _hmul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Product of homogeneous ternary forms stored as dense (d+1)^3 arrays."""
    dp, dq = p.shape[0] - 1, q.shape[0] - 1
    out = np.zeros((dp + dq + 1,) * 3, dtype=complex)
    for idx in zip(*np.nonzero(p)):
        a, b, c = idx
        out[a:a + dq + 1, b:b + dq + 1, c:c + dq + 1] += p[idx] * q
    return out


def _linear_form(coeffs) -> np.ndarray:
    f = np.zeros((2, 2, 2), dtype=complex)
    f[1, 0, 0], f[0, 1, 0], f[0, 0, 1] = coeffs
    return f


def _cubic_minor(lin: np.ndarray, rows) -> np.ndarray:
    """det of the 3x3 submatrix (rows ``rows``) of a matrix of linear forms.

    ``lin[i, j]`` holds the three x-coefficients of entry ``(i, j)``.
    """
    out = np.zeros((4, 4, 4), dtype=complex)
    for perm in itertools.permutations(range(3)):
        sign = np.linalg.det(np.eye(3)[list(perm)])
        term = _linear_form(lin[rows[0], perm[0]])
        term = _hmul(term, _linear_form(lin[rows[1], perm[1]]))
        term = _hmul(term, _linear_form(lin[rows[2], perm[2]]))
        out += sign * term
    return out


def _affine_chart(form: np.ndarray) -> np.ndarray:
    """Dehomogenize ``x0 = 1``: returns ``F[b, c]`` = coefficient of s^b t^c."""
    d = form.shape[0] - 1
    out = np.zeros((d + 1, d + 1), dtype=complex)
    for b in range(d + 1):
        for c in range(d + 1 - b):
            out[b, c] = form[d - b - c, b, c]
    return out


# -- resultant ---------------------------------------------------------------

def _t_degree(f: np.ndarray, scale: float) -> int:
    for j in range(f.shape[1] - 1, -1, -1):
        if np.max(np.abs(f[:, j])) > 1e-14 * scale:
            return j
    return -1


def sylvester_resultant(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Resultant in ``t`` of bivariate polynomials ``F[b, c] s^b t^c``.

    The Sylvester determinant is expanded exactly over polynomial entries by
    a dynamic program over used-column bitmasks.  Returns ascending
    coefficients in ``s``.
    """
    sf, sg = np.max(np.abs(f)), np.max(np.abs(g))
    p, q = _t_degree(f, sf), _t_degree(g, sg)
    if p < 0 or q < 0:
        return np.zeros(1, dtype=complex)
    size = p + q
    if size == 0:
        return np.ones(1, dtype=complex)
    zero = np.zeros(1, dtype=complex)
    syl = [[zero] * size for _ in range(size)]
    for r in range(q):
        for j in range(p + 1):
            syl[r][r + j] = f[:, p - j]
    for r in range(p):
        for j in range(q + 1):
            syl[q + r][r + j] = g[:, q - j]
    dp = {0: np.ones(1, dtype=complex)}
    for row in range(size):
        nxt = {}
        for mask, acc in dp.items():
            for col in range(size):
                if mask >> col & 1:
                    continue
                entry = syl[row][col]
                if not np.any(entry):
                    continue
                sign = -1 if bin(mask >> (col + 1)).count("1") % 2 else 1
                term = P.polymul(acc, entry) * sign
                key = mask | (1 << col)
                nxt[key] = P.polyadd(nxt[key], term) if key in nxt else term
        dp = nxt
    return dp.get((1 << size) - 1, zero)


def companion_roots(coeffs: np.ndarray) -> np.ndarray:
    """Roots of an ascending-coefficient polynomial as eigenvalues of its
    companion matrix (general, non-Hermitian eigensolver)."""
    c = np.asarray(coeffs, dtype=complex)
    top = np.max(np.abs(c)) if c.size else 0.0
    if top == 0:
        return np.zeros(0, dtype=complex)
    c = np.trim_zeros(np.where(np.abs(c) > _TRIM_REL * top, c, 0), "b")
    deg = c.size - 1
    if deg < 1:
        return np.zeros(0, dtype=complex)
    comp = np.zeros((deg, deg), dtype=complex)
    comp[1:, :-1] = np.eye(deg - 1)
    comp[:, -1] = -c[:-1] / c[-1]
    return np.linalg.eigvals(comp)


def _merge_roots(roots: np.ndarray, tol: float) -> list[complex]:
    out: list[complex] = []
    for r in sorted(roots, key=lambda z: (z.real, z.imag)):
        if not any(abs(r - o) < tol * max(1.0, abs(o)) for o in out):
            out.append(r)
    return out


# -- exhaustive 3x3 solver ----------------------------------------------------------

def _random_unitary(rng: np.random.Generator, k: int) -> np.ndarray:
    z = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def find_product_vectors(d: Subspace, cfg: LocatorConfig = DEFAULT_CONFIG) -> LocatorResult:
    """All product vectors (up to phase) in a subspace of C^3 (x) C^3.

    Parameters
    ----------
    d : Subspace
        Subspace with ``1 <= dim <= 8`` of a 3 (x) 3 system.
    cfg : LocatorConfig

    Returns
    -------
    LocatorResult
        ``complete`` is True when elimination covered all three charts and
        every solution is a regular (nonsingular Jacobian) point.

    Raises
    ------
    DegeneratePencilError
        The subspace contains a positive-dimensional family of product
        vectors (fewer than four constraints, or an identically vanishing
        resultant).
    """
    if (d.m, d.n) != (3, 3):
        raise ValueError("the exhaustive locator handles 3 (x) 3 only; use brute_force_products")
    if not 1 <= d.dim <= 8:
        raise ValueError(f"subspace dimension must lie in 1..8, got {d.dim}")
    tol = cfg.tol
    perp = d.orthocomplement()
    k = perp.dim
    if k <= 3:
        raise DegeneratePencilError(
            f"only {k} linear constraints on a 4-dimensional product variety: "
            "infinitely many product vectors")
    wc = _weight_tensor(perp.basis, 3, 3)
    rng = np.random.default_rng(cfg.rng_seed)

    for attempt in range(3):
        # generic coordinates keep solutions away from the chart boundaries
        u = _random_unitary(rng, 3)
        mix = _random_unitary(rng, k)
        wmix = np.einsum("ij,jab->iab", mix, wc)
        wlin = np.einsum("iab,ac->icb", wmix, u)  # x = u @ x'
        lin = wlin.transpose(0, 2, 1)  # lin[i, col] = coefficients over x'
        try:
            cands, coverage = _solve_charts(lin, cfg)
        except _ZeroResultant:
            log.debug("resultant vanished identically on attempt %d", attempt)
            continue
        break
    else:
        raise DegeneratePencilError(
            "resultant vanishes identically: infinitely many product vectors")

    found = []
    for xp, y in cands:
        x = u @ xp
        xs, ys, res, regular = _newton_polish(wc, x, y, cfg.newton_iters)
        if res < tol.residual_tol:
            found.append((ProductVector(xs, ys, tol.match_tol), res, regular))
    clusters = _cluster(found, tol)
    complete = coverage and all(c[2] for c in clusters)
    return LocatorResult(
        tuple(c[0] for c in clusters), complete, tuple(float(c[1]) for c in clusters))


class _ZeroResultant(Exception):
    pass


def _solve_charts(lin: np.ndarray, cfg: LocatorConfig):
    """Candidate ``(x', y)`` pairs from the three charts of projective x'-space."""
    k = lin.shape[0]
    tol = cfg.tol
    f_form = _cubic_minor(lin, (0, 1, 2))
    g_form = _cubic_minor(lin, (0, 1, 3))
    cands = []

    # chart x' = (1, s, t)
    f, g = _affine_chart(f_form), _affine_chart(g_form)
    res = sylvester_resultant(f, g)
    deg = np.max(np.nonzero(np.abs(res) > 0)[0]) if np.any(res) else 0
    if deg > cfg.max_degree_guard:
        raise RuntimeError(f"resultant degree {deg} exceeds guard {cfg.max_degree_guard}")
    scale = (np.max(np.abs(f)) ** 3) * (np.max(np.abs(g)) ** 3)
    if np.max(np.abs(res)) < _ZERO_RESULTANT_REL * scale:
        raise _ZeroResultant
    for s0 in _merge_roots(companion_roots(res), tol.root_tol):
        for poly in (f, g):
            ft = np.array([P.polyval(s0, poly[:, c]) for c in range(poly.shape[1])])
            for t0 in _merge_roots(companion_roots(ft), tol.root_tol):
                cands.append(np.array([1, s0, t0], dtype=complex))

    # chart x' = (0, 1, t)
    line = [np.array([form[0, 3 - c, c] for c in range(4)]) for form in
            (_cubic_minor(lin, rows) for rows in itertools.combinations(range(k), 3))]
    top = max(np.max(np.abs(h)) for h in line)
    nonzero = [h for h in line if np.max(np.abs(h)) > 1e-10 * max(top, 1e-300)]
    if not nonzero:
        raise _ZeroResultant
    for t0 in _merge_roots(companion_roots(nonzero[0]), tol.root_tol):
        cands.append(np.array([0, 1, t0], dtype=complex))

    # chart x' = (0, 0, 1)
    cands.append(np.array([0, 0, 1], dtype=complex))

    out = []
    for xp in cands:
        mrow = np.einsum("a,iba->ib", xp, lin)
        out.append((xp, _null_direction(mrow)))
    return out, True


# -- multistart oracle -------------------------------------------------------

def _alternate(wc: np.ndarray, x: np.ndarray, y: np.ndarray, sweeps: int):
    """Alternating minimization, batched over the rows of ``x`` and ``y``.

    Rows are updated independently and retire once converged or stalled.
    """
    x, y = x.copy(), y.copy()
    obj = np.full(len(x), np.inf)
    prev = obj.copy()
    active = np.ones(len(x), dtype=bool)
    for it in range(sweeps):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        ya = np.linalg.svd(np.einsum("sa,iab->sib", x[idx], wc))[2][:, -1].conj()
        nmat = np.einsum("iab,sb->sia", wc, ya)
        xa = np.linalg.svd(nmat)[2][:, -1].conj()
        o = np.linalg.norm(np.einsum("sia,sa->si", nmat, xa), axis=1)
        x[idx], y[idx], obj[idx] = xa, ya, o
        done = (o < 1e-4) | ((it > 20) & (prev[idx] - o < 1e-9 * prev[idx]))
        prev[idx] = o
        active[idx[done]] = False
    return x, y, obj


def _start_rngs(cfg: LocatorConfig):
    for child in np.random.SeedSequence(cfg.rng_seed).spawn(cfg.multistart_count):
        yield np.random.default_rng(child)


def _random_unit(rng, size):
    v = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    return v / np.linalg.norm(v)


def brute_force_products(d: Subspace, cfg: LocatorConfig = DEFAULT_CONFIG) -> LocatorResult:
    """Multistart alternating minimization oracle (any m, n <= 4).

    Each start alternates exact minimizations over unit ``y`` and unit ``x``
    (smallest singular directions), then Newton-polishes.  Converged points
    are clustered; ``complete`` is always False.
    """
    if max(d.m, d.n) > 4:
        raise ValueError("brute force oracle is limited to m, n <= 4")
    tol = cfg.tol
    wc = _weight_tensor(d.orthocomplement().basis, d.m, d.n)
    starts = [(_random_unit(rng, d.m), _random_unit(rng, d.n)) for rng in _start_rngs(cfg)]
    if not starts:
        return LocatorResult((), False, ())
    xs = np.array([s[0] for s in starts])
    ys = np.array([s[1] for s in starts])
    if wc.shape[0]:
        xs, ys, objs = _alternate(wc, xs, ys, cfg.max_sweeps)
    else:
        objs = np.zeros(len(starts))
    found = []
    for x, y, obj in zip(xs, ys, objs):
        if not wc.shape[0]:
            res, regular = 0.0, False
        elif obj > 1e-3:
            continue
        else:
            x, y, res, regular = _newton_polish(wc, x, y, cfg.newton_iters)
        if res < tol.residual_tol:
            found.append((ProductVector(x, y, tol.match_tol), res, regular))
    clusters = _cluster(found, tol)
    return LocatorResult(tuple(c[0] for c in clusters), False, tuple(float(c[1]) for c in clusters))


def _conj_residual(wd, we, x, y) -> float:
    x = x / np.linalg.norm(x)
    y = y / np.linalg.norm(y)
    r1 = np.einsum("a,iab,b->i", x, wd, y)
    r2 = np.einsum("a,iab,b->i", x.conj(), we, y)
    return float(np.sqrt(np.linalg.norm(r1) ** 2 + np.linalg.norm(r2) ** 2))


def _conj_polish(wd, we, x, y, iters):
    """Real Gauss-Newton for ``x^T Wd_i y = 0``, ``conj(x)^T We_j y = 0``."""
    x = np.array(x, dtype=complex)
    y = np.array(y, dtype=complex)
    px, py = int(np.argmax(np.abs(x))), int(np.argmax(np.abs(y)))
    x, y = x / x[px], y / y[py]
    fx = np.arange(x.size) != px
    fy = np.arange(y.size) != py
    nx, ny = int(fx.sum()), int(fy.sum())
    for _ in range(iters):
        r = np.concatenate([np.einsum("a,iab,b->i", x, wd, y),
                            np.einsum("a,iab,b->i", x.conj(), we, y)])
        dx_d = np.einsum("iab,b->ia", wd, y)[:, fx]
        dy_d = np.einsum("a,iab->ib", x, wd)[:, fy]
        dx_e = np.einsum("iab,b->ia", we, y)[:, fx]
        dy_e = np.einsum("a,iab->ib", x.conj(), we)[:, fy]
        # columns: Re x, Im x, Re y, Im y
        top = np.hstack([dx_d, 1j * dx_d, dy_d, 1j * dy_d])
        bot = np.hstack([dx_e, -1j * dx_e, dy_e, 1j * dy_e])
        jc = np.vstack([top, bot])
        jac = np.vstack([jc.real, jc.imag])
        rhs = -np.concatenate([r.real, r.imag])
        if jac.size == 0:
            break
        step = np.linalg.lstsq(jac, rhs, rcond=None)[0]
        x[fx] += step[:nx] + 1j * step[nx:2 * nx]
        y[fy] += step[2 * nx:2 * nx + ny] + 1j * step[2 * nx + ny:]
        if np.linalg.norm(step) < 1e-15 * (1 + np.linalg.norm(x) + np.linalg.norm(y)):
            break
    return x / np.linalg.norm(x), y / np.linalg.norm(y), _conj_residual(wd, we, x, y)


def brute_force_conjugate_products(d: Subspace, e: Subspace,
                                   cfg: LocatorConfig = DEFAULT_CONFIG) -> LocatorResult:
    """Product vectors ``x (x) y`` in ``d`` whose partial conjugate
    ``conj(x) (x) y`` lies in ``e`` (multistart; never complete)."""
    if (d.m, d.n) != (e.m, e.n):
        raise ValueError("dimension mismatch")
    m, n = d.m, d.n
    tol = cfg.tol
    wd = _weight_tensor(d.orthocomplement().basis, m, n)
    we = _weight_tensor(e.orthocomplement().basis, m, n)
    found = []
    for rng in _start_rngs(cfg):
        x, y = _random_unit(rng, m), _random_unit(rng, n)
        prev = np.inf
        obj = _conj_residual(wd, we, x, y)
        for it in range(cfg.max_sweeps):
            if obj < 1e-6:
                break
            y = _null_direction(np.vstack([np.einsum("a,iab->ib", x, wd),
                                           np.einsum("a,iab->ib", x.conj(), we)]))
            x = _null_direction(np.vstack([np.einsum("iab,b->ia", wd, y),
                                           np.einsum("iab,b->ia", we, y).conj()]))
            prev, obj = obj, _conj_residual(wd, we, x, y)
            if it > 20 and prev - obj < 1e-9 * prev:
                break
        if obj > 1e-3:
            continue
        if obj > 0:
            x, y, obj = _conj_polish(wd, we, x, y, cfg.newton_iters)
        if obj < tol.residual_tol:
            found.append((ProductVector(x, y, tol.match_tol), obj, False))
    clusters = _cluster(found, tol)
    return LocatorResult(tuple(c[0] for c in clusters), False, tuple(float(c[1]) for c in clusters))
