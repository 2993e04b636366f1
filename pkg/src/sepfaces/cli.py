"""Command-line front end.

Every command prints one JSON report line to stdout::

    {"command": ..., "params": {...}, "claims": [...], "result": ...,
     "elapsed_ms": ..., "seed": ...}

``--pretty`` adds a human-readable claim table on stderr.  The exit status
is 0 iff every claim passes; input or domain errors exit with status 2.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from typing import Any, Callable

import numpy as np

from . import gallery as g
from .errors import DegeneratePencilError
from .face_lab import (
    certify_simplicial_face,
    check_2xn_condition,
    check_condition_C,
    is_general_position,
    is_gupb,
    pure_states_independent,
    two_by_n_products,
)
from .ppt_geometry import (
    EDGE,
    dual_pairing,
    extract_edge_state,
    is_edge_state,
    is_ppt,
    max_epsilon_ppt,
    nearest_face_solve,
    separability_solve,
    state_type,
)
from .product_locator import LocatorConfig, brute_force_products, find_product_vectors
from .tensor_core import (
    BipartiteOperator,
    ProductVector,
    Subspace,
    ToleranceConfig,
    kernel_of,
    mixture,
    partial_conjugate,
    partial_transpose,
    range_of,
    realify,
)


class Claims:
    """Accumulates ``{name, expected, computed, tolerance, pass}`` records."""

    def __init__(self):
        self.items: list[dict] = []

    def add(self, name: str, expected, computed, tolerance: float | None = None) -> bool:
        expected, computed = _plain(expected), _plain(computed)
        if tolerance is None:
            ok = expected == computed
        else:
            ok = bool(abs(computed - expected) <= tolerance)
        self.items.append({"name": name, "expected": expected, "computed": computed,
                           "tolerance": tolerance, "pass": ok})
        return ok

    def below(self, name: str, computed: float, bound: float) -> bool:
        """``computed <= bound`` (reported as expected 0 within ``bound``)."""
        return self.add(name, 0.0, abs(float(computed)), bound)

    @property
    def all_pass(self) -> bool:
        return all(c["pass"] for c in self.items)


def _plain(v):
    if isinstance(v, (np.bool_, bool)):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, tuple):
        return [_plain(x) for x in v]
    if isinstance(v, list):
        return [_plain(x) for x in v]
    return v


def _pure(p: ProductVector) -> BipartiteOperator:
    return BipartiteOperator(p.projector(), p.m, p.n)


def _proj_dist(a: Subspace, b: Subspace) -> float:
    return a.distance(b)


def _all_match(found, expected, tol) -> bool:
    return (len(found) == len(expected)
            and all(any(f.matches(e, tol.match_tol) for f in found) for e in expected))


# -- reproduce ---------------------------------------------------------------

def reproduce_s3(b: float, cfg: LocatorConfig, claims: Claims) -> dict:
    tol = cfg.tol
    rho = g.rho_b(b)
    fam = g.six_products_b(b)
    center = g.center_b(b)
    claims.add("rho_b type", [4, 4], state_type(rho, tol))
    claims.add("rho_b is PPT", True, is_ppt(rho, tol))
    claims.add("rho_b is an edge state", EDGE, is_edge_state(rho, cfg))
    found = find_product_vectors(kernel_of(rho, tol), cfg)
    claims.add("kernel product vectors", 6, len(found))
    claims.add("kernel products match the six listed vectors", True, _all_match(found.vectors, fam, tol))
    claims.add("kernel product list complete", True, found.complete)
    claims.add("six kernel vectors in general position", True, is_general_position(fam, tol)[0])
    cert = certify_simplicial_face(fam, cfg)
    claims.add("condition A", True, cert.condition_A)
    claims.add("condition B", "holds", cert.condition_B.status)
    claims.add("simplex dimension", 5, cert.simplex_dim)
    replaced = g.replaced_first_factor_family(b)
    claims.add("replaced family in general position", False, is_general_position(replaced, tol)[0])
    claims.add("replaced family is a gUPB", True, is_gupb(replaced, tol)[0])
    range_rho = range_of(rho, tol).projector()
    for k in range(1, 7):
        eps = max_epsilon_ppt(g.drop_one_b(b, k), center, tol)[0]
        claims.add(f"epsilon k={k}", 0.2, eps, 1e-7)
        ext = extract_edge_state(g.drop_one_b(b, k), center, cfg)
        claims.add(f"sigma_{k} type", [4, 4], ext.rank_type)
        claims.add(f"sigma_{k} edge", EDGE, ext.edge)
        ps = range_of(ext.boundary_state, tol).projector()
        claims.below(f"sigma_{k} range orthogonal to range rho_b", np.linalg.norm(ps @ range_rho, 2), 1e-8)
        recon = 1.25 * g.drop_one_b(b, k).matrix - 0.25 * center.matrix
        claims.below(f"sigma_{k} as difference of separable states",
                     np.max(np.abs(recon - ext.boundary_state.matrix)), 1e-10)
    for t in (1 / 6, 0.5, 5 / 6):
        claims.add(f"sigma(t) separable at t={t:.6g}", True,
                   separability_solve(g.sigma_segment(b, 1, 2, t), fam, tol).feasible)
    for t in (0.05, 0.95):
        claims.add(f"sigma(t) separable at t={t:.6g}", False,
                   separability_solve(g.sigma_segment(b, 1, 2, t), fam, tol).feasible)
    sol = separability_solve(g.sigma_segment(b, 1, 2, 0.5), fam, tol)
    claims.below("sigma(1/2) coefficients",
                 np.max(np.abs(sol.coefficients - g.sigma_segment_weights(1, 2, 0.5))), 1e-10)
    nf = nearest_face_solve(g.sigma_b(b, 3), center, fam, tol)
    claims.add("nearest face drops vertex 3", 3, nf.dropped_index)
    claims.add("nearest face crossing", 0.8, nf.mu, 1e-8)
    return {"kernel_products": found.to_json()}


def reproduce_s4(b: float, theta: float, cfg: LocatorConfig, claims: Claims) -> dict:
    tol = cfg.tol
    rt, rs, mix = g.rho_theta(b, theta), g.rho_sep(b, theta), g.mixed_59(b, theta)
    z = g.six_products_theta(b, theta)
    claims.add("rho_theta type", [5, 5], state_type(rt, tol))
    claims.add("rho_sep type", [5, 6], state_type(rs, tol))
    claims.add("(rho_sep + rho_theta)/2 type", [5, 9], state_type(mix, tol))
    claims.add("rho_theta is an edge state", EDGE, is_edge_state(rt, cfg))
    w_span = Subspace.span(g.kernel_w(b, theta), 3, 3, tol)
    claims.below("ker rho_theta = span w", _proj_dist(kernel_of(rt, tol), w_span), 1e-8)
    claims.add("product vectors in ker rho_theta", 0, len(find_product_vectors(kernel_of(rt, tol), cfg)))
    found = find_product_vectors(range_of(rt, tol), cfg)
    claims.add("product vectors in range rho_theta", 6, len(found))
    claims.add("range products match the six listed vectors", True, _all_match(found.vectors, z, tol))
    claims.add("partial conjugates span", 6, Subspace.span([partial_conjugate(p) for p in z], 3, 3, tol).dim)
    formula = mixture(z, g.rho_sep_weights(b, theta))
    claims.below("rho_sep matches its product-vector sum", np.max(np.abs(formula.matrix - rs.matrix)), 1e-10)
    sol = separability_solve(rs, z, tol)
    claims.add("rho_sep decomposition feasible and unique", True, sol.feasible and sol.unique)
    claims.below("rho_sep decomposition weights",
                 np.max(np.abs(sol.coefficients - g.rho_sep_weights(b, theta) / rs.trace)), 1e-10)
    ker_mix = kernel_of(mix, tol)
    claims.below("ker of the (5,9) state = span w", _proj_dist(ker_mix, w_span), 1e-8)
    claims.add("product vectors in ker of the (5,9) state", 0, len(find_product_vectors(ker_mix, cfg)))
    claims.below("range of the (5,9) state spanned by the six range vectors",
                 _proj_dist(range_of(mix, tol), Subspace.span(z, 3, 3, tol)), 1e-8)
    w = g.kernel_w(b, theta)
    pos = np.outer(w[0], w[0].conj()) + sum(np.outer(v, v.conj()) for v in w[1:]) / b
    defining = partial_transpose(BipartiteOperator(pos, 3, 3)).matrix
    claims.below("witness matches its defining formula", np.max(np.abs(defining - g.witness_W(b, theta).matrix)), 1e-14)
    pairing = np.trace(partial_transpose(mix).matrix @ g.witness_W(b, theta).matrix).real
    claims.below("witness vanishes on the partial transpose of the (5,9) state", pairing, 1e-10)
    return {"range_products": found.to_json()}


def reproduce_s5(b: float, s: float | None, cfg: LocatorConfig, claims: Claims) -> dict:
    tol = cfg.tol
    s = 1 / b if s is None else s
    fam = g.delta9_family(b)
    center = g.delta9_center(b)
    claims.add("ten pure states independent", True, pure_states_independent(fam, tol))
    claims.add("realified rank", 10, int(np.linalg.matrix_rank(np.array([realify(p.projector()) for p in fam]))))
    claims.add("first six span", 6, Subspace.span(fam[:6], 3, 3, tol).dim)
    perp = Subspace.span(g.delta9_first_six_perp(b), 3, 3, tol)
    claims.below("orthocomplement of the first six",
                 _proj_dist(Subspace.span(fam[:6], 3, 3, tol).orthocomplement(), perp), 1e-8)
    try:
        find_product_vectors(Subspace.span(fam[:6], 3, 3, tol), cfg)
        infinite = False
    except DegeneratePencilError:
        infinite = True
    claims.add("infinitely many product vectors in the first six span", True, infinite)
    claims.add("condition C", "fails", check_condition_C(fam, cfg).status)
    alpha, beta, gamma = g.phi_s_params(s)
    claims.add("alpha+beta+gamma", 2.0, alpha + beta + gamma, 1e-12)
    claims.add("beta*gamma", (1 - alpha) ** 2, beta * gamma, 1e-12)
    choi = g.choi_phi_s(s)
    pair = max(abs(dual_pairing(_pure(p), choi, tol)) for p in fam)
    pair_t = max(abs(dual_pairing(_pure(p), partial_transpose(choi), tol)) for p in fam)
    claims.below("pairing with Phi(s)", pair, 1e-9)
    claims.below("pairing with Phi(s) composed with transpose", pair_t, 1e-9)
    lambdas = []
    for k in range(1, 11):
        lam = max_epsilon_ppt(g.delta9_drop_one(b, k), center, tol)[0]
        lambdas.append(lam)
        claims.add(f"lambda_{k}", g.lambda_k_closed_form(b, k), lam, 1e-7)
    for k in (1, 7):
        ext = extract_edge_state(g.delta9_drop_one(b, k), center, cfg)
        claims.add(f"rho_{k} type", [8, 8], ext.rank_type)
        inner = g.delta9_drop_one(b, k) - 0.999 * lambdas[k - 1] * center
        claims.add(f"sigma_{k} - eps rho_0 PPT below lambda_{k}", True, is_ppt(inner, tol))
        claims.add(f"sigma_{k} - eps rho_0 off the simplex", False, separability_solve(inner, fam, tol).feasible)
    return {"lambda": lambdas, "s": s}


SIMPLEX_NOTE = ("five extreme points make a 4-simplex; labelling the face Delta_5 "
                "counts vertices rather than dimension")


def reproduce_s6(cfg: LocatorConfig, claims: Claims) -> dict:
    tol = cfg.tol
    fam = g.qubit_qudit_example()
    claims.add("general position", True, is_general_position(fam, tol)[0])
    claims.add("non-real condition", True, check_2xn_condition(fam, tol))
    cert = certify_simplicial_face(fam, cfg)
    claims.add("condition A", True, cert.condition_A)
    claims.add("condition C", "holds", cert.condition_C.status)
    claims.add("induced", True, cert.induced)
    claims.add("extreme points", 5, cert.extreme_points)
    claims.add("simplex dimension", 4, cert.simplex_dim)
    claims.add("span dimensions (D, E)", [4, 5], [
        Subspace.span(fam, 2, 3, tol).dim,
        Subspace.span([partial_conjugate(p) for p in fam], 2, 3, tol).dim,
    ])
    claims.add("dimension constants 3x3", [4, 6], g.dimension_constants(3, 3))
    claims.add("dimension constants 3x4", [6, 10], g.dimension_constants(3, 4))
    claims.add("dimension constants 2x5", [4, 5], g.dimension_constants(2, 5))
    prods = two_by_n_products(fam)
    return {
        "certificate": cert.to_json(),
        "products": [[float(p.real), float(p.imag)] for p in prods],
        "note": SIMPLEX_NOTE,
    }


# -- other commands ----------------------------------------------------------

def _load_json(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _load_subspace(data, part: str, tol: ToleranceConfig) -> Subspace:
    if "basis" in data:
        return Subspace.from_json(data)
    if "entries" in data:
        op = BipartiteOperator.from_json(data)
        return kernel_of(op, tol) if part == "kernel" else range_of(op, tol)
    raise ValueError("expected a subspace {m, n, basis} or an operator {m, n, entries}")


def _load_family(data) -> list[ProductVector]:
    items = data["family"] if isinstance(data, dict) else data
    return [ProductVector.from_json(d) for d in items]


def cmd_find_products(args, cfg: LocatorConfig, claims: Claims) -> dict:
    d = _load_subspace(_load_json(args.file), args.part, cfg.tol)
    oracle = brute_force_products(d, cfg)
    out: dict[str, Any] = {"dim": d.dim, "oracle": oracle.to_json()}
    if (d.m, d.n) == (3, 3) and 1 <= d.dim <= 8:
        try:
            exact = find_product_vectors(d, cfg)
        except DegeneratePencilError as exc:
            out["locator"] = {"degenerate": str(exc)}
            return out
        out["locator"] = exact.to_json()
        agree = all(any(v.matches(u, cfg.tol.match_tol) for u in exact.vectors) for v in oracle.vectors)
        if exact.complete:
            agree = agree and len(oracle.vectors) == len(exact.vectors)
        out["agreement"] = agree
        claims.add("solvers agree", True, agree)
    return out


def cmd_certify(args, cfg: LocatorConfig, claims: Claims) -> dict:
    return certify_simplicial_face(_load_family(_load_json(args.file)), cfg).to_json()


def cmd_extract_edge(args, cfg: LocatorConfig, claims: Claims) -> dict:
    sigma = BipartiteOperator.from_json(_load_json(args.sigma))
    rho0 = BipartiteOperator.from_json(_load_json(args.rho0))
    return extract_edge_state(sigma, rho0, cfg).to_json()


def gupb_search(count: int, seed: int, cfg: LocatorConfig) -> dict:
    """Six product vectors of random 5-dim subspaces of C^3 (x) C^3:
    how often are they a gUPB, and how often in general position?"""
    table = {"gupb&gp": 0, "gupb&!gp": 0, "!gupb&gp": 0, "!gupb&!gp": 0}
    skipped = 0
    for child in np.random.SeedSequence(seed).spawn(count):
        rng = np.random.default_rng(child)
        a = rng.standard_normal((5, 9)) + 1j * rng.standard_normal((5, 9))
        res = find_product_vectors(Subspace.span(a, 3, 3, cfg.tol), cfg)
        fam = list(res.vectors)
        if len(fam) != 6 or not res.complete or Subspace.span(fam, 3, 3, cfg.tol).dim != 5:
            skipped += 1
            continue
        gu = is_gupb(fam, cfg.tol)[0]
        gp = is_general_position(fam, cfg.tol)[0]
        table[("gupb" if gu else "!gupb") + "&" + ("gp" if gp else "!gp")] += 1
    return {"count": count, "skipped": skipped, "table": table}


def cmd_gupb_search(args, cfg: LocatorConfig, claims: Claims) -> dict:
    return gupb_search(args.count, cfg.rng_seed, cfg)


def _jsonable(obj):
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, (list, tuple)):
        return [_jsonable(o) for o in obj]
    if isinstance(obj, np.ndarray):
        return [[float(c.real), float(c.imag)] for c in obj.ravel()]
    return _plain(obj)


def cmd_gallery(args, cfg: LocatorConfig, claims: Claims) -> dict:
    fn = g.CONSTRUCTORS[args.name]
    kwargs = {}
    for item in args.param or []:
        key, _, value = item.partition("=")
        kwargs[key] = int(value) if key in ("k", "i", "j", "m", "n") else float(value)
    return {"name": args.name, "kwargs": kwargs, "value": _jsonable(fn(**kwargs))}


# -- plumbing ------------------------------------------------------------------

def _theta(args) -> float:
    if args.theta_frac_pi is not None:
        return math.pi / args.theta_frac_pi
    return args.theta


def cmd_reproduce(args, cfg: LocatorConfig, claims: Claims) -> dict:
    if args.section == "s3":
        return reproduce_s3(args.b, cfg, claims)
    if args.section == "s4":
        return reproduce_s4(args.b, _theta(args), cfg, claims)
    if args.section == "s5":
        return reproduce_s5(args.b, args.s, cfg, claims)
    return reproduce_s6(cfg, claims)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sepfaces", description=__doc__.splitlines()[0])
    p.add_argument("--tol-rank", type=float, default=ToleranceConfig.rank_rel_tol)
    p.add_argument("--tol-residual", type=float, default=ToleranceConfig.residual_tol)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pretty", action="store_true", help="claim table on stderr")
    p.add_argument("--json-out", metavar="FILE", help="also write the report to FILE")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("reproduce", help="check the numeric claims of one section")
    r.add_argument("section", choices=["s3", "s4", "s5", "s6"])
    r.add_argument("--b", type=float, default=g.DEFAULT_B)
    r.add_argument("--theta", type=float, default=g.DEFAULT_THETA)
    r.add_argument("--theta-frac-pi", type=float, default=None, metavar="K", help="theta = pi/K")
    r.add_argument("--s", type=float, default=None, help="Phi(s) parameter (default 1/b)")
    r.set_defaults(func=cmd_reproduce)

    f = sub.add_parser("find-products", help="product vectors in a subspace")
    f.add_argument("file")
    f.add_argument("--part", choices=["kernel", "range"], default="kernel",
                   help="which subspace of an operator input to search")
    f.set_defaults(func=cmd_find_products)

    c = sub.add_parser("certify", help="face certificate for a product-vector family")
    c.add_argument("file")
    c.set_defaults(func=cmd_certify)

    e = sub.add_parser("extract-edge", help="boundary extension sigma - eps*rho0")
    e.add_argument("sigma")
    e.add_argument("rho0")
    e.set_defaults(func=cmd_extract_edge)

    s = sub.add_parser("gupb-search", help="random six-vector families spanning 5 dimensions")
    s.add_argument("--count", type=int, default=100)
    s.set_defaults(func=cmd_gupb_search)

    gl = sub.add_parser("gallery", help="emit a named construction as JSON")
    gl.add_argument("name", choices=sorted(g.CONSTRUCTORS))
    gl.add_argument("param", nargs="*", help="key=value, e.g. b=2 k=3")
    gl.set_defaults(func=cmd_gallery)
    return p


def _params(args) -> dict:
    skip = {"func", "pretty", "json_out", "command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _pretty(report: dict, stream) -> None:
    print(f"{report['command']}  ({report['elapsed_ms']} ms)", file=stream)
    for c in report["claims"]:
        mark = "PASS" if c["pass"] else "FAIL"
        tol = "" if c["tolerance"] is None else f"  tol={c['tolerance']:g}"
        print(f"  [{mark}] {c['name']}: expected={c['expected']} computed={c['computed']}{tol}", file=stream)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        tol = ToleranceConfig(rank_rel_tol=args.tol_rank, residual_tol=args.tol_residual)
        cfg = LocatorConfig(rng_seed=args.seed, tol=tol)
        claims = Claims()
        start = time.perf_counter()
        handler: Callable = args.func
        result = handler(args, cfg, claims)
    except (OSError, ValueError, KeyError, RuntimeError) as exc:
        print(f"sepfaces: error: {exc}", file=sys.stderr)
        return 2
    report = {
        "command": args.command,
        "params": _params(args),
        "claims": claims.items,
        "result": result,
        "elapsed_ms": int((time.perf_counter() - start) * 1000),
        "seed": args.seed,
    }
    line = json.dumps(report)
    print(line)
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            fh.write(line + "\n")
    if args.pretty:
        _pretty(report, sys.stderr)
    return 0 if claims.all_pass else 1


if __name__ == "__main__":
    sys.exit(main())
