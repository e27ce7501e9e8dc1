"""Verification suites shared by ``ucdnf verify`` and the acceptance tests.

Each suite returns a JSON-ready dict with a top-level ``pass`` flag and no
timing data, so reports can be compared byte for byte across runs and
thread counts.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import eah, hex as hx, measures, reductions
from .boolfun import NOTONE, NOTZERO, ONE, ZERO, Out, PartialFunction, Restriction, format_input, is_certificate


def jsonable(obj):
    """Plain Python types only, so json.dumps never sees numpy scalars."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def suite(fn):
    def run(*a, **kw):
        return jsonable(fn(*a, **kw))

    run.__name__, run.__doc__, run.__wrapped__ = fn.__name__, fn.__doc__, fn
    return run


def pmap(fn, items, threads: int = 1) -> list:
    items = list(items)
    if threads <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(threads) as ex:
        return list(ex.map(fn, items))


def all_total(n: int) -> list[PartialFunction]:
    N = 1 << n
    return [PartialFunction(n, ((t >> np.arange(N)) & 1).astype(np.uint8)) for t in range(1 << N)]


def random_total(n: int, count: int, seed: int) -> list[PartialFunction]:
    rng = np.random.default_rng(seed)
    return [PartialFunction(n, rng.integers(0, 2, 1 << n).astype(np.uint8)) for _ in range(count)]


# C0 vs UC1 / degree ----------------------------------------------------------------------------


def _fact1_row(f: PartialFunction) -> dict:
    c0 = measures.cert_complexity(f, ZERO).value
    u = measures.uc1(f)
    d = measures.degree(f).value
    fam = u.witness
    ok_w = measures.check_unambiguous(fam) and measures.covers_exactly(f, fam) and fam.width <= u.value
    return {"f": f.to_string(), "C0": c0, "UC1": u.value, "deg": d, "fact1": c0 <= u.value**2, "deg_le_uc1": d <= u.value, "witness_ok": ok_w}


@suite
def fact1_suite(n: int = 3, random_n4: int = 500, seed: int = 0, threads: int = 1) -> dict:
    fs = all_total(n) + (random_total(4, random_n4, seed) if random_n4 else [])
    rows = pmap(_fact1_row, fs, threads)
    fails = [r["f"] for r in rows if not (r["fact1"] and r["witness_ok"])]
    return {
        "suite": "fact1",
        "n": n,
        "random_n4": random_n4,
        "seed": seed,
        "functions": len(rows),
        "failures": fails,
        "deg_le_uc1_failures": [r["f"] for r in rows if not r["deg_le_uc1"]],
        "max_C0": max(r["C0"] for r in rows),
        "max_UC1": max(r["UC1"] for r in rows),
        "pass": not fails,
    }


def _adeg_row(f: PartialFunction, eps_grid) -> dict:
    d = measures.degree(f).value
    vals = []
    ok = True
    for e in eps_grid:
        rep = measures.approx_degree(f, e)
        ok &= rep.extra["max_error"] <= float(e) + measures.LP_TOL
        vals.append(rep.value)
    antitone = all(a >= b for a, b in zip(vals, vals[1:]))
    return {"f": f.to_string(), "deg": d, "adeg": vals, "le_deg": max(vals) <= d, "antitone": antitone, "witness_ok": bool(ok)}


@suite
def degree_suite(seed: int = 0, random_count: int = 100, threads: int = 1) -> dict:
    fs3 = all_total(3)
    recon = all(np.array_equal(measures.zeta(measures.mobius(f.table)), f.table) for f in fs3)
    deg_uc1 = all(measures.degree(f).value <= measures.uc1(f).value for f in fs3)
    a = measures.approx_degree(PartialFunction(2, "0001"), Fraction(1, 3))
    x = np.arange(4)
    wit_err = max(abs(measures.eval_polynomial(2, a.witness, int(v)) - (v == 3)) for v in x)
    spec_poly = {"": -1 / 6, "1": 0.5, "2": 0.5}
    spec_err = max(abs(measures.eval_polynomial(2, spec_poly, int(v)) - (v == 3)) for v in x)
    d0_err = measures.best_error(PartialFunction(2, "0001"), 0)[0]
    rng = np.random.default_rng(seed)
    fs = []
    for i in range(random_count):
        n = int(rng.integers(1, 5))
        fs.append(PartialFunction(n, rng.integers(0, 2, 1 << n).astype(np.uint8)))
    grid = [Fraction(1, 10), Fraction(1, 4), Fraction(1, 3), Fraction(9, 20)]
    rows = pmap(lambda f: _adeg_row(f, grid), fs, threads)
    checks = {
        "mobius_reconstructs_all_n3": recon,
        "deg_le_uc1_all_n3": deg_uc1,
        "adeg_and2_third_is_1": a.value == 1,
        "adeg_and2_witness_error": round(wit_err, 9),
        "adeg_and2_witness_ok": wit_err <= 1 / 3 + measures.LP_TOL,
        "listed_witness_error": round(spec_err, 9),
        "listed_witness_ok": spec_err <= 1 / 3 + measures.LP_TOL,
        "degree0_best_error": round(d0_err, 9),
        "degree0_infeasible": d0_err > 1 / 3 + measures.LP_TOL,
        "random_le_deg": all(r["le_deg"] for r in rows),
        "random_antitone": all(r["antitone"] for r in rows),
        "random_witness_ok": all(r["witness_ok"] for r in rows),
    }
    keys = [k for k, v in checks.items() if isinstance(v, bool)]
    return {"suite": "degree", "seed": seed, "random_count": random_count, "eps_grid": [str(e) for e in grid], "checks": checks, "pass": all(checks[k] for k in keys)}


# pairwise / eah -------------------------------------------------------------------------


@suite
def pairwise_suite(primes=(2, 3, 5, 7, 11, 13)) -> dict:
    rows = []
    for p in primes:
        H = eah.build_affine_family(p)
        single, pair = eah.independence_counts(H)
        off = ~np.eye(p, dtype=bool)
        rows.append({
            "n": p,
            "single_counts": sorted(set(single.ravel().tolist())),
            "pair_counts": sorted(set(pair[off].ravel().tolist())),
            "pass": eah.verify_pairwise_independence(H),
        })
    return {"suite": "pairwise", "primes": list(primes), "rows": rows, "pass": all(r["pass"] for r in rows)}


TOY = eah.EahParams(size_factor=0.5)


def eah2_exact(params: eah.EahParams = TOY) -> dict:
    G = eah.build_eah_graph(2)
    f = eah.build_eah_function(G, params)
    imp = eah.build_eah_function(G, params, materialize=False)
    z = eah.eah_hard_input(G)
    c1 = measures.cert_complexity(f, ONE).value
    cz = measures.cert_complexity_at(f, z, NOTONE)
    cz_nz = measures.cert_complexity_at(f, z, NOTZERO).value
    agree = all(imp.evaluate(x) == f.value(x) for x in range(1 << f.n))
    # the H plus missed-edge certificate on non-ONE inputs, including
    # z with a hitting set of the grid flipped to 0
    certs = []
    for x in (0, z & ~0b0001, z & ~0b1001):
        c = eah.not_one_cert_upper_bound(G, params, x, f)
        certs.append({"x": format_input(x, f.n), **c.to_dict()})
    checks = {
        "z_is_star": f.value(z) == Out.STAR,
        "C1_is_n_plus_1": c1 == 3,
        "C_notone_z_is_n2": cz.value == 4,
        "implicit_agrees": agree,
        "certificates_verify": all(c["verified"] and c["size"] <= c["bound"] for c in certs),
    }
    return {
        "n_tilde": params.n_tilde(2),
        "z": format_input(z, f.n),
        "C1": c1,
        "C_notone_z": cz.value,
        "C_notzero_z": cz_nz,
        "stars": int((f.table == Out.STAR).sum()),
        "certificates": certs,
        "checks": checks,
        "default_constants_z": eah.build_eah_function(G).value(z).char,
        "pass": all(checks.values()),
    }


@suite
def eah_suite(ns=(31, 61, 101), trials: int = 100, seed: int = 0, params: eah.EahParams | None = None, threads: int = 1) -> dict:
    params = params or eah.EahParams()
    rows = []
    for n in ns:
        G = eah.build_eah_graph(n)
        small = 3 * n * math.ceil(math.log(n))
        r1 = eah.eah_property_report(G, params, trials, seed, size_budget=small, threads=threads)
        r2 = eah.eah_property_report(G, params, trials, seed, threads=threads)
        uniform = all(len(set(i // n for i in (e - 1 for e in row))) == n for row in G.edge_ids.tolist())
        rows.append({
            "n": n,
            "uniform_one_per_row": uniform,
            "small_budget": small,
            "M": r1["M"],
            "M_ok": r1["M_all_ok"] and r2["M_all_ok"],
            "success_small": r1["success_rate"],
            "H_small": r1["H"],
            "default_budget": r2["size_budget"],
            "success_default": r2["success_rate"],
            "H_default": r2["H"],
            "pass": uniform and r1["M_all_ok"] and r1["success_rate"] >= 0.95 and r2["success_rate"] == 1.0,
        })
    exact = eah2_exact()
    return {"suite": "eah", "seed": seed, "trials": trials, "params": params.to_dict(), "rows": rows, "eah2": exact, "pass": all(r["pass"] for r in rows) and exact["pass"]}


# hex ------------------------------------------------------------------------------------


def _adversary_check(args):
    z, lay, rho = args
    p = hx.greedy_one_path_adversary(z, lay, rho)
    if p is None or len(p) > 2 * z.n:
        return False
    return hx.hex_evaluate(z.n, hx.completion_with_path(z, rho, p)) == Out.ONE


@suite
def hex_suite(n: int = 4, scaling=(4, 9, 16, 25), threads: int = 1) -> dict:
    z, lay, blocks, gates = hx.multi_spiral(n)
    f = hx.hex_function(n)
    x = z.to_int()
    ell = hx.block_lower_bound(z, blocks)
    c_nz = measures.cert_complexity_at(f, x, NOTZERO).value
    c_no = measures.cert_complexity_at(f, x, NOTONE).value
    small = [Restriction.of_input(n * n, x, sum(1 << j for j in S)) for k in range(3) for S in combinations(range(n * n), k)]
    adv = pmap(_adversary_check, [(z, lay, r) for r in small], threads)
    blocked = z.flipped([(2, c) for c in range(n) if z.matrix[2, c]])
    rho_row = Restriction.of_input(n * n, blocked.to_int(), sum(1 << (2 * n + c) for c in range(n)))
    none_on_row = hx.greedy_one_path_adversary(blocked, lay, rho_row) is None
    c3 = measures.certificate_complexity(hx.hex_function(3))
    c4_hard = max(c_nz, c_no)
    scale = hx.spiral_scaling(scaling)
    y, ylay = hx.single_spiral(6)
    f6 = hx.hex_function(6)
    top5 = is_certificate(f6, hx.top_rows_certificate(y, 5), NOTONE)
    top4 = is_certificate(f6, hx.top_rows_certificate(y, 4), NOTONE)
    checks = {
        "gates": gates["star"] and gates["block_flips_zero"] and gates["size_ok"],
        "ell_le_C_notzero": ell <= c_nz,
        "adversary_all_size_le_2": all(adv),
        "C_notone_gt_2": c_no > 2,
        "adversary_none_on_blocking_row": none_on_row,
        "C_hex3_le_6": c3.value <= 6,
        "C_hex4_hard_le_8": c4_hard <= 8,
        "beta_in_window": 1.4 <= scale["beta"] <= 1.6,
        "top5_certificate_n6": top5,
    }
    return {
        "suite": "hex-claims",
        "n": n,
        "z": z.dumps().split(),
        "gates": {k: (round(v, 6) if isinstance(v, float) else v) for k, v in gates.items()},
        "ell": ell,
        "C_notzero_z": c_nz,
        "C_notone_z": c_no,
        "restrictions_checked": len(small),
        "C_hex3": c3.value,
        "C0_hex3": c3.extra["C0"],
        "C1_hex3": c3.extra["C1"],
        "stars_hex3": int((hx.hex_function(3).table == Out.STAR).sum()),
        "scaling": {"n": scale["n"], "ell": scale["ell"], "beta": round(scale["beta"], 6), "c": round(scale["c"], 6)},
        "top4_certificate_n6": top4,
        "checks": checks,
        "pass": all(checks.values()),
    }


# reductions -------------------------------------------------------------------------------


def _box_rows(f: PartialFunction) -> list[dict]:
    x = reductions.first_star(f)
    out = [reductions.verify_to_hypergraph(f, x), reductions.verify_round_trip(f, x)]
    for fill in "01":
        ft = PartialFunction(f.n, f.to_string().replace("*", fill))
        if ft.preimage(ZERO).size and ft.preimage(ONE).size:
            out.append(reductions.verify_parity_lift(ft))
    for r in out:
        r["f"] = f.to_string()
    return out


@suite
def boxes_suite(catalog: str = "tiny", seed: int = 0, threads: int = 1, rank_vertices: int = 5) -> dict:
    random_n3 = 20 if catalog == "tiny" else 60
    cat = reductions.catalog(random_n3, seed)
    rows = [r for chunk in pmap(_box_rows, cat, threads) for r in chunk]
    lifts = [reductions.verify_parity_lift(PartialFunction(2, "0001"), measures.uc1(PartialFunction(2, "0001")).witness)]
    toys = [f for f in cat if f.n == 2]
    cheats = pmap(lambda f: reductions.verify_cheatsheet(f, reductions.first_star(f), 1), toys, threads)
    sweep = reductions.rank_sweep(rank_vertices)
    tri = reductions.p3_to_p2(reductions.Hypergraph(3, [{1, 2}, {2, 3}, {1, 3}]), reductions.Colouring("000"))
    by_box = {}
    for r in rows + lifts + cheats:
        b = by_box.setdefault(r["box"], {"instances": 0, "failed": []})
        b["instances"] += 1
        if not r["pass"]:
            b["failed"].append({"f": r.get("f"), "checks": [c for c in r["checks"] if not c["pass"]]})
    flags = sorted({fl for r in cheats + rows for fl in r.get("flags", [])})
    return {
        "suite": "boxes",
        "catalog": catalog,
        "catalog_size": len(cat),
        "seed": seed,
        "boxes": by_box,
        "cheatsheet_family_sizes": [r["family_size"] for r in cheats],
        "rank_sweep": sweep,
        "triangle_all_zero": tri[2],
        "flags": flags,
        "pass": all(not b["failed"] for b in by_box.values()) and sweep["pass"],
    }


SUITES = {
    "fact1": fact1_suite,
    "degree": degree_suite,
    "pairwise": pairwise_suite,
    "eah": eah_suite,
    "hex-claims": hex_suite,
    "boxes": boxes_suite,
}
