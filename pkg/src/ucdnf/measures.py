"""Exact brute-force oracles for certificate complexity, UC1, degree,
sensitivity and approximate degree.

Everything here works on explicit truth tables; implicit functions are
materialized first when ``2^n`` fits the budget.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any

import numpy as np

from . import _hitting
from .boolfun import (
    NOTONE,
    NOTZERO,
    ONE,
    ZERO,
    CertificateFamily,
    Out,
    PartialFunction,
    Restriction,
    Role,
    check_unambiguous,
    format_input,
    is_certificate,
    popcount,
    sigma_name,
    subset_offsets,
)
from .errors import BudgetExceeded, LPNumericalFailure, NotInSigma, NotTotal

REPORT_VERSION = 1
DEFAULT_BUDGET = 1 << 24
LP_TOL = 1e-6


@dataclass
class MeasureReport:
    measure: str
    value: int
    witness: Any = None
    exact: bool = True
    extra: dict = field(default_factory=dict)
    runtime_ms: float = 0.0
    seed: int | None = None

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "version": REPORT_VERSION,
            "measure": self.measure,
            "value": self.value,
            "exact": self.exact,
            "witness": witness_to_json(self.witness),
        }
        if self.extra:
            d["extra"] = self.extra
        if self.seed is not None:
            d["seed"] = self.seed
        if timing:
            d["runtime_ms"] = round(self.runtime_ms, 3)
        return d


def witness_to_json(w):
    if w is None:
        return None
    if isinstance(w, Restriction):
        return w.entries
    if isinstance(w, CertificateFamily):
        return {"role": w.role.value, "certificates": [r.entries for r in w]}
    if isinstance(w, dict):
        return {k: witness_to_json(v) for k, v in w.items()}
    if isinstance(w, (list, tuple)):
        return [witness_to_json(v) for v in w]
    if isinstance(w, (np.integer,)):
        return int(w)
    if isinstance(w, (np.floating,)):
        return float(w)
    if isinstance(w, Fraction):
        return str(w)
    return w


def _explicit(f: PartialFunction, budget: int) -> PartialFunction:
    if f.is_explicit:
        return f
    return f.materialize(budget)


def _require_total(f: PartialFunction) -> None:
    if not f.is_total:
        raise NotTotal(f"{f!r} has STAR inputs")


def _codes(sigma) -> list[int]:
    return [int(o) for o in sigma]


class _Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.ms = (time.perf_counter() - self.t0) * 1000.0


# certificate complexity -------------------------------------------------------


def _bad_masks(f: PartialFunction, x: int, sigma) -> np.ndarray:
    outside = ~np.isin(f.table, _codes(sigma))
    return np.flatnonzero(outside).astype(np.int64) ^ x


def min_certificate(f: PartialFunction, x: int, sigma, budget: int = DEFAULT_BUDGET) -> Restriction:
    """Smallest sigma-certificate for x, as x restricted to an index set."""
    f = _explicit(f, budget)
    if f.value(x) not in sigma:
        raise NotInSigma(f"f({format_input(x, f.n)}) = {f.value(x).char} not in {sigma_name(sigma)}")
    bad = _bad_masks(f, x, sigma)
    if bad.size == 0:
        return Restriction.empty(f.n)
    sets = _hitting.minimal_masks(bad, f.n)
    found = _hitting.min_hitting_set(sets)
    assert found is not None  # x itself is never bad, so every set is nonempty
    return Restriction.of_input(f.n, x, found[1])


def cert_complexity_at(f: PartialFunction, x: int, sigma, budget: int = DEFAULT_BUDGET) -> MeasureReport:
    with _Timer() as t:
        rho = min_certificate(f, x, sigma, budget)
    return MeasureReport(
        f"C_{sigma_name(sigma)}(f,x)",
        rho.size,
        rho,
        extra={"x": format_input(x, f.n), "sigma": sigma_name(sigma)},
        runtime_ms=t.ms,
    )


def cert_complexity(f: PartialFunction, sigma, budget: int = DEFAULT_BUDGET) -> MeasureReport:
    """Max of C_sigma(f, x) over f^{-1}(sigma); ties go to the smallest input index."""
    with _Timer() as t:
        f = _explicit(f, budget)
        best = None
        best_x = None
        for x in f.preimage(sigma):
            rho = min_certificate(f, int(x), sigma)
            if best is None or rho.size > best.size:
                best, best_x = rho, int(x)
    value = best.size if best is not None else 0
    extra = {"sigma": sigma_name(sigma)}
    if best_x is not None:
        extra["x"] = format_input(best_x, f.n)
    return MeasureReport(f"C_{sigma_name(sigma)}(f)", value, best, extra=extra, runtime_ms=t.ms)


def certificate_complexity(f: PartialFunction, budget: int = DEFAULT_BUDGET) -> MeasureReport:
    with _Timer() as t:
        c0 = cert_complexity(f, ZERO, budget)
        c1 = cert_complexity(f, ONE, budget)
    top = c1 if c1.value > c0.value else c0
    return MeasureReport(
        "C(f)",
        max(c0.value, c1.value),
        top.witness,
        extra={"C0": c0.value, "C1": c1.value, **{k: v for k, v in top.extra.items() if k == "x"}},
        runtime_ms=t.ms,
    )


# unambiguous 1-certificate complexity ------------------------------------------


def subcubes_inside(f: PartialFunction, sigma, max_codim: int) -> list[Restriction]:
    """All restrictions of size <= max_codim whose every completion lies in sigma."""
    n = f.n
    inside = np.isin(f.table, _codes(sigma))
    full = (1 << n) - 1
    out = []
    for codim in range(max_codim + 1):
        for fixed in combinations(range(n), codim):
            mask = sum(1 << j for j in fixed)
            offsets = subset_offsets(full & ~mask)
            sub_values = subset_offsets(mask)
            hits = inside[sub_values[:, None] + offsets[None, :]].all(axis=1)
            for v in sub_values[hits]:
                out.append(Restriction(n, mask, int(v)))
    return out


def _exact_cover(points: list[int], cubes: list[int], budget: int) -> list[int] | None:
    """Algorithm X on bitsets: ``cubes[i]`` is the set of point positions it covers."""
    by_point = [[] for _ in points]
    for i, c in enumerate(cubes):
        b = c
        while b:
            low = b & -b
            by_point[low.bit_length() - 1].append(i)
            b ^= low
    full = (1 << len(points)) - 1
    steps = [0]

    def solve(covered: int) -> list[int] | None:
        if covered == full:
            return []
        steps[0] += 1
        if steps[0] > budget:
            raise BudgetExceeded(f"exact cover exceeded {budget} search nodes")
        best_opts = None
        rest = full & ~covered
        while rest:
            low = rest & -rest
            rest ^= low
            p = low.bit_length() - 1
            opts = [i for i in by_point[p] if not cubes[i] & covered]
            if best_opts is None or len(opts) < len(best_opts):
                best_opts = opts
                if not opts:
                    return None
        for i in best_opts:
            sub = solve(covered | cubes[i])
            if sub is not None:
                return [i] + sub
        return None

    return solve(0)


def unambiguous_cover(f: PartialFunction, k: int, search_budget: int = 2_000_000) -> CertificateFamily | None:
    """An exact disjoint cover of f^{-1}(1) by subcubes of codimension <= k, or None."""
    ones = [int(x) for x in f.preimage(ONE)]
    pos = {x: i for i, x in enumerate(ones)}
    cands = subcubes_inside(f, ONE, k)
    cubes = []
    for r in cands:
        bits = 0
        for y in r.completion_indices():
            bits |= 1 << pos[int(y)]
        cubes.append(bits)
    if not ones:
        return CertificateFamily((), Role.UNAMBIGUOUS_ONE_COVER)
    chosen = _exact_cover(ones, cubes, search_budget)
    if chosen is None:
        return None
    certs = sorted((cands[i] for i in chosen), key=lambda r: (r.mask, r.value))
    return CertificateFamily(tuple(certs), Role.UNAMBIGUOUS_ONE_COVER)


def uc1(f: PartialFunction, budget: int = DEFAULT_BUDGET, search_budget: int = 2_000_000) -> MeasureReport:
    """Least k with an unambiguous k-DNF for f, with a witness cover.

    The search starts at max(deg f, C1 f); both are lower bounds.
    """
    with _Timer() as t:
        f = _explicit(f, budget)
        _require_total(f)
        start = max(degree(f).value, cert_complexity(f, ONE).value)
        k = start
        while True:
            fam = unambiguous_cover(f, k, search_budget)
            if fam is not None:
                break
            k += 1
    return MeasureReport("UC1(f)", k, fam, extra={"start": start}, runtime_ms=t.ms)


def covers_exactly(f: PartialFunction, family: CertificateFamily) -> bool:
    """Union of the family's subcubes equals f^{-1}(1), each point covered once."""
    count = np.zeros(1 << f.n, dtype=np.int64)
    for r in family:
        np.add.at(count, r.completion_indices(), 1)
    ones = f.table == Out.ONE
    return bool(np.all(count[ones] == 1) and np.all(count[~ones] == 0))


# degree and sensitivity -------------------------------------------------------


def mobius(values: np.ndarray) -> np.ndarray:
    """c_S = sum_{T subset S} (-1)^{|S|-|T|} f(T), in exact int64 arithmetic."""
    c = np.asarray(values, dtype=np.int64).copy()
    n = c.size.bit_length() - 1
    for j in range(n):
        v = c.reshape(-1, 2, 1 << j)
        v[:, 1, :] -= v[:, 0, :]
    return c


def zeta(coeffs: np.ndarray) -> np.ndarray:
    """Inverse of ``mobius``: evaluate the multilinear polynomial on the cube."""
    p = np.asarray(coeffs, dtype=np.int64).copy()
    n = p.size.bit_length() - 1
    for j in range(n):
        v = p.reshape(-1, 2, 1 << j)
        v[:, 1, :] += v[:, 0, :]
    return p


def monomial_name(mask: int) -> str:
    return ",".join(str(j + 1) for j in range(mask.bit_length()) if mask >> j & 1)


def degree(f: PartialFunction, budget: int = DEFAULT_BUDGET) -> MeasureReport:
    with _Timer() as t:
        f = _explicit(f, budget)
        _require_total(f)
        c = mobius(f.table)
        nz = np.flatnonzero(c)
        value = max((popcount(int(m)) for m in nz), default=0)
    witness = {monomial_name(int(m)): int(c[m]) for m in nz}
    return MeasureReport("deg(f)", value, witness, runtime_ms=t.ms)


def sensitivity(f: PartialFunction, budget: int = DEFAULT_BUDGET) -> MeasureReport:
    with _Timer() as t:
        f = _explicit(f, budget)
        _require_total(f)
        tab = f.table
        idx = np.arange(1 << f.n)
        sens = np.zeros(1 << f.n, dtype=np.int64)
        for j in range(f.n):
            sens += tab != tab[idx ^ (1 << j)]
        x = int(np.argmax(sens)) if sens.size else 0
    return MeasureReport("s(f)", int(sens[x]), {"x": format_input(x, f.n)}, runtime_ms=t.ms)


# approximate degree ------------------------------------------------------------


def monomials_upto(n: int, d: int) -> list[int]:
    return sorted((m for m in range(1 << n) if popcount(m) <= d), key=lambda m: (popcount(m), m))


def _design_matrix(n: int, monos: list[int]) -> np.ndarray:
    idx = np.arange(1 << n)[:, None]
    m = np.array(monos, dtype=np.int64)[None, :]
    return ((idx & m) == m).astype(float)


def best_error(f: PartialFunction, d: int) -> tuple[float, np.ndarray, list[int]]:
    """Min over degree-<=d multilinear p of max_x |p(x) - f(x)| (Chebyshev LP)."""
    from scipy.optimize import linprog

    monos = monomials_upto(f.n, d)
    A = _design_matrix(f.n, monos)
    y = f.table.astype(float)
    rows, k = A.shape
    ones = np.ones((rows, 1))
    A_ub = np.vstack([np.hstack([A, -ones]), np.hstack([-A, -ones])])
    b_ub = np.concatenate([y, -y])
    cost = np.zeros(k + 1)
    cost[-1] = 1.0
    bounds = [(None, None)] * k + [(0, None)]
    res = linprog(cost, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if res.status != 0:
        raise LPNumericalFailure(f"linprog status {res.status}: {res.message}")
    return float(res.x[-1]), res.x[:-1], monos


def approx_degree(f: PartialFunction, eps, budget: int = DEFAULT_BUDGET) -> MeasureReport:
    """Least d such that some degree-d polynomial is within eps of f everywhere."""
    eps = Fraction(eps)
    if not 0 < eps < Fraction(1, 2):
        raise ValueError("eps must lie in (0, 1/2)")
    with _Timer() as t:
        f = _explicit(f, budget)
        _require_total(f)
        y = f.table.astype(float)
        e = float(eps)
        for d in range(f.n + 1):
            err, coeffs, monos = best_error(f, d)
            if err <= e + LP_TOL:
                resid = np.abs(_design_matrix(f.n, monos) @ coeffs - y).max(initial=0.0)
                if resid <= e + LP_TOL:
                    break
        else:  # pragma: no cover - degree n always interpolates exactly
            raise LPNumericalFailure("no feasible degree found")
    witness = {monomial_name(m): float(c) for m, c in zip(monos, coeffs) if abs(c) > 1e-12}
    return MeasureReport(
        "adeg(f)",
        d,
        witness,
        extra={"eps": str(eps), "max_error": float(resid)},
        runtime_ms=t.ms,
    )


def eval_polynomial(n: int, coeffs: dict, x: int) -> float:
    """Evaluate a ``{monomial_name: coefficient}`` polynomial at input x."""
    total = 0.0
    for name, c in coeffs.items():
        mask = sum(1 << (int(i) - 1) for i in name.split(",") if i)
        if x & mask == mask:
            total += c
    return total


def check_fact1(f: PartialFunction) -> bool:
    """C0(f) <= UC1(f)^2."""
    return cert_complexity(f, ZERO).value <= uc1(f).value ** 2


__all__ = [
    "MeasureReport",
    "approx_degree",
    "best_error",
    "cert_complexity",
    "cert_complexity_at",
    "certificate_complexity",
    "check_fact1",
    "covers_exactly",
    "degree",
    "eval_polynomial",
    "min_certificate",
    "mobius",
    "sensitivity",
    "subcubes_inside",
    "uc1",
    "unambiguous_cover",
    "zeta",
    "NOTONE",
    "NOTZERO",
    "is_certificate",
    "check_unambiguous",
]
