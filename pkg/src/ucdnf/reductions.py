"""The four puzzle transformations with exact small-scale verifiers.

cheat sheet: partial f with a STAR input -> total g (p2_to_p1)
parity lift: total f plus an unambiguous 1-cover -> partial g (p1_to_p2)
partial f with a STAR input <-> intersecting hypergraph with a colouring
(p2_to_p3, p3_to_p2)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np

from . import measures
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
    parse_input,
)
from .errors import InvalidCover, NotApplicable, NotIntersecting, TooLarge, XNotStar
from .hypergraph import Colouring, Hypergraph, is_intersecting, min_monochromatic_hitting_set, rank

FAMILY_CAP = 1 << 16
ORDER = {Out.ZERO: 0, Out.STAR: 1, Out.ONE: 2}


def clog2(n: int) -> int:
    return max(1, math.ceil(math.log2(n))) if n > 1 else 1


def _require_star(f: PartialFunction, x: int) -> None:
    v = f.value(x)
    if v != Out.STAR:
        raise XNotStar(f"f({format_input(x, f.n)}) = {v.char}, expected *")


# certificate encoding ----------------------------------------------------------


@dataclass(frozen=True)
class CertificateEncoding:
    """Fixed-width code for restrictions with 1..slots fixed entries.

    A slot is an index (``index_bits`` bits, LSB first) followed by the
    value bit. Unused slots repeat the last used one, so every bit string
    decodes to the union of its slots; it is invalid only when an index
    is out of range or two slots disagree on a value.
    """

    n: int
    slots: int

    @property
    def index_bits(self) -> int:
        return clog2(self.n)

    @property
    def slot_bits(self) -> int:
        return self.index_bits + 1

    @property
    def ell(self) -> int:
        return self.slots * self.slot_bits

    @property
    def nominal_ell(self) -> int:
        """2*C(f)*ceil(log2 n), the budget the encoding is compared with."""
        return 2 * self.slots * clog2(self.n)

    def encode(self, rho: Restriction) -> int:
        if rho.n != self.n:
            raise ValueError("arity mismatch")
        pairs = [(j, rho.value >> j & 1) for j in rho.read_set]
        if not 1 <= len(pairs) <= self.slots:
            raise ValueError(f"can only encode restrictions of size 1..{self.slots}")
        pairs += [pairs[-1]] * (self.slots - len(pairs))
        code = 0
        for s, (j, b) in enumerate(pairs):
            code |= (j | b << self.index_bits) << (s * self.slot_bits)
        return code

    def decode(self, code: int) -> Restriction | None:
        mask = value = 0
        low = (1 << self.index_bits) - 1
        for s in range(self.slots):
            chunk = code >> (s * self.slot_bits) & ((1 << self.slot_bits) - 1)
            j, b = chunk & low, chunk >> self.index_bits
            if j >= self.n:
                return None
            if mask >> j & 1 and (value >> j & 1) != b:
                return None
            mask |= 1 << j
            value |= b << j
        if self.slots == 0:
            return Restriction.empty(self.n)
        return Restriction(self.n, mask, value)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "slots": self.slots,
            "index_bits": self.index_bits,
            "slot_bits": self.slot_bits,
            "ell": self.ell,
            "nominal_ell": self.nominal_ell,
        }


# cheat sheet ---------------------------------------------------------------------


@dataclass
class CheatSheetInstance:
    f: PartialFunction
    x: int
    k: int
    encoding: CertificateEncoding
    cf: int
    _valid: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.f.n

    @property
    def ell(self) -> int:
        return self.encoding.ell

    @property
    def arity(self) -> int:
        return self.k * self.n + (1 << self.k) * self.k * self.ell

    @property
    def nominal_arity(self) -> int:
        return self.k * self.n + (1 << self.k) * self.k * self.encoding.nominal_ell

    def copies(self, z: int) -> list[int]:
        full = (1 << self.n) - 1
        return [z >> (i * self.n) & full for i in range(self.k)]

    def s_z(self, z: int) -> list[Out]:
        return [self.f.value(y) for y in self.copies(z)]

    def cell_offset(self, s: int) -> int:
        return self.k * self.n + s * self.k * self.ell

    def cell(self, z: int, s: int) -> int:
        width = self.k * self.ell
        return z >> self.cell_offset(s) & ((1 << width) - 1)

    def slot(self, cell: int, i: int) -> int:
        return cell >> (i * self.ell) & ((1 << self.ell) - 1)

    def valid_certificate(self, code: int, b: int) -> Restriction | None:
        """Decoded restriction if it is a b-certificate of f, else None."""
        key = (code, b)
        if key not in self._valid:
            rho = self.encoding.decode(code)
            ok = rho is not None and is_certificate(self.f, rho, ONE if b else ZERO)
            self._valid[key] = rho if ok else None
        return self._valid[key]

    def evaluate(self, z: int) -> Out:
        vals = self.s_z(z)
        if any(v == Out.STAR for v in vals):
            return Out.ZERO
        s = sum(int(v) << i for i, v in enumerate(vals))
        cell = self.cell(z, s)
        for i, (y, v) in enumerate(zip(self.copies(z), vals)):
            rho = self.valid_certificate(self.slot(cell, i), int(v))
            if rho is None or not rho.is_consistent(y):
                return Out.ZERO
        return Out.ONE

    def function(self) -> PartialFunction:
        return PartialFunction(self.arity, evaluator=self.evaluate, name="cheatsheet")

    def materialize(self, budget: int = 1 << 20) -> PartialFunction:
        if self.arity > 20 or (1 << self.arity) > budget:
            raise TooLarge(f"g has {self.arity} bits")
        table = np.array([int(self.evaluate(z)) for z in range(1 << self.arity)], dtype=np.uint8)
        return PartialFunction(self.arity, table, name="cheatsheet")

    def to_dict(self) -> dict:
        return {
            "f": self.f.to_string() if self.f.is_explicit else None,
            "n": self.n,
            "x": format_input(self.x, self.n),
            "k": self.k,
            "C(f)": self.cf,
            "encoding": self.encoding.to_dict(),
            "arity": self.arity,
            "nominal_arity": self.nominal_arity,
        }


def p2_to_p1(f: PartialFunction, x: int, k: int | None = None, encoding: CertificateEncoding | None = None) -> CheatSheetInstance:
    _require_star(f, x)
    cf = measures.certificate_complexity(f).value
    if k is None:
        k = clog2(f.n)
    if k < 1:
        raise ValueError("k must be at least 1")
    enc = encoding or CertificateEncoding(f.n, cf)
    return CheatSheetInstance(f, x, k, enc, cf)


def valid_codes(inst: CheatSheetInstance, b: int) -> list[tuple[int, Restriction]]:
    out = []
    for code in range(1 << inst.ell):
        rho = inst.valid_certificate(code, b)
        if rho is not None:
            out.append((code, rho))
    return out


def unambiguous_family_for_cheatsheet(inst: CheatSheetInstance, cap: int = FAMILY_CAP) -> CertificateFamily:
    """One member per output pattern s and per valid cell content for s.

    The member reads each copy's decoded certificate and the whole cell s.
    """
    n, k, ell = inst.n, inst.k, inst.ell
    codes = {b: valid_codes(inst, b) for b in (0, 1)}
    total = 0
    for s in range(1 << k):
        t = 1
        for i in range(k):
            t *= len(codes[s >> i & 1])
        total += t
    if total > cap:
        raise TooLarge(f"family would have {total} members")
    members = []
    cell_width = k * ell
    for s in range(1 << k):
        pools = [codes[s >> i & 1] for i in range(k)]
        for choice in product(*pools):
            mask = value = 0
            cell = 0
            for i, (code, rho) in enumerate(choice):
                mask |= rho.mask << (i * n)
                value |= rho.value << (i * n)
                cell |= code << (i * ell)
            off = inst.cell_offset(s)
            mask |= ((1 << cell_width) - 1) << off
            value |= cell << off
            members.append(Restriction(inst.arity, mask, value))
    return CertificateFamily(tuple(members), Role.UNAMBIGUOUS_ONE_COVER)


def cheatsheet_hard_input(inst: CheatSheetInstance) -> int:
    """k copies of x followed by an all-0 array."""
    return sum(inst.x << (i * inst.n) for i in range(inst.k))


# parity lift ----------------------------------------------------------------------


def validate_cover(f: PartialFunction, U: CertificateFamily) -> list[Restriction | None]:
    """Per input, the unique member of U consistent with it when f(x) = 1."""
    if not f.is_total:
        raise InvalidCover("f must be total")
    if not check_unambiguous(U):
        raise InvalidCover("family is not unambiguous")
    owner = [None] * (1 << f.n)
    for rho in U:
        if rho.n != f.n or not is_certificate(f, rho, ONE):
            raise InvalidCover(f"{rho} is not a 1-certificate of f")
        for y in rho.completion_indices():
            owner[int(y)] = rho
    for y in f.preimage(ONE):
        if owner[int(y)] is None:
            raise InvalidCover(f"1-input {format_input(int(y), f.n)} is not covered")
    return owner


def p1_to_p2(f: PartialFunction, U: CertificateFamily) -> tuple[PartialFunction, int, dict]:
    """g(x, y) = STAR if f(x) = 0, else the parity of y on the read set of rho_x.

    x sits in bits 0..n-1 and y in bits n..2n-1.
    """
    owner = validate_cover(f, U)
    n = f.n
    zeros = f.preimage(ZERO)
    if zeros.size == 0:
        raise NotApplicable("f has no 0-inputs")
    table = np.empty(1 << (2 * n), dtype=np.uint8)
    for x in range(1 << n):
        rho = owner[x]
        for y in range(1 << n):
            z = x | y << n
            if rho is None:
                table[z] = Out.STAR
            else:
                table[z] = bin(y & rho.mask).count("1") & 1
    g = PartialFunction(2 * n, table, name="paritylift")
    c0 = measures.cert_complexity(f, ZERO)
    xstar = parse_input(c0.extra["x"])
    return g, xstar, {"x_star": c0.extra["x"], "C0(f)": c0.value}


# hypergraph reductions -------------------------------------------------------------


def vertex_id(i: int, b: int) -> int:
    """Vertex v_{i,b} for 0-based variable i."""
    return 2 * i + b + 1


def all_restrictions(n: int, max_size: int):
    for size in range(max_size + 1):
        for read in combinations(range(n), size):
            mask = sum(1 << j for j in read)
            for bits in range(1 << size):
                value = sum(((bits >> t) & 1) << j for t, j in enumerate(read))
                yield Restriction(n, mask, value)


def p2_to_p3(f: PartialFunction, x: int) -> tuple[Hypergraph, Colouring, dict]:
    _require_star(f, x)
    n = f.n
    cf = measures.certificate_complexity(f).value
    u0, u1 = 2 * n + 1, 2 * n + 2
    edges = []
    sources = []
    for rho in all_restrictions(n, cf):
        for b, sigma, extra in ((0, ZERO, u0), (1, ONE, u1)):
            if is_certificate(f, rho, sigma):
                lits = [vertex_id(j, (rho.value >> j & 1) ^ b) for j in rho.read_set]
                edges.append(sorted(lits + [extra]))
                sources.append((b, rho.entries))
    raw = Hypergraph(2 * n + 2, edges)
    G = raw.dedup()
    colours = []
    for i in range(n):
        xi = x >> i & 1
        colours += [0 if xi == 0 else 1, 1 if xi == 0 else 0]
    colours += [0, 1]
    labels = {vertex_id(i, b): f"v{i + 1},{b}" for i in range(n) for b in (0, 1)}
    labels[u0], labels[u1] = "u0", "u1"
    meta = {"labels": labels, "C(f)": cf, "raw_edges": len(raw), "edges": len(G), "sources": sources}
    return G, Colouring(colours), meta


def p3_eval(G: Hypergraph, z: int) -> Out:
    for m in G.edge_masks:
        if not z & m:
            return Out.ZERO
        if z & m == m:
            return Out.ONE
    return Out.STAR


def p3_to_p2(G: Hypergraph, c: Colouring, materialize: bool = True) -> tuple[PartialFunction, int, dict]:
    """f(z) = 0 / 1 when z, read as a colouring, has a mono 0 / 1 edge."""
    if not is_intersecting(G):
        raise NotIntersecting("hypergraph is not intersecting")
    N = G.vertex_count
    x = sum(col << i for i, col in enumerate(c.colours))
    if materialize:
        f = p3_table(G)
    else:
        f = PartialFunction(N, evaluator=lambda z: p3_eval(G, z), name="p3")
    v = f.evaluate(x)
    return f, x, {"x_is_star": v == Out.STAR, "f(x)": v.char}


def p3_table(G: Hypergraph) -> PartialFunction:
    N = G.vertex_count
    if N > 22:
        raise TooLarge(f"{N} vertices is too many to materialize")
    zs = np.arange(1 << N, dtype=np.int64)
    zero = np.zeros(zs.size, dtype=bool)
    one = np.zeros(zs.size, dtype=bool)
    for m in set(G.edge_masks):
        zero |= (zs & m) == 0
        one |= (zs & m) == m
    table = np.full(zs.size, int(Out.STAR), dtype=np.uint8)
    table[zero] = Out.ZERO
    table[one] = Out.ONE
    return PartialFunction(N, table, name="p3")


def is_monotone(f: PartialFunction) -> bool:
    """f(z) <= f(z') whenever z <= z' bitwise, with 0 < * < 1."""
    rank_of = np.array([0, 2, 1], dtype=np.int8)[f.table]
    idx = np.arange(1 << f.n)
    for j in range(f.n):
        low = idx[(idx >> j & 1) == 0]
        if (rank_of[low] > rank_of[low | 1 << j]).any():
            return False
    return True


# box verifiers ----------------------------------------------------------------------


def _check(name, lhs, rel, rhs) -> dict:
    ok = {"<=": lambda a, b: a <= b, ">=": lambda a, b: a >= b, "==": lambda a, b: a == b}[rel](lhs, rhs)
    return {"name": name, "lhs": lhs, "relation": rel, "rhs": rhs, "pass": bool(ok)}


def _report(box: str, checks: list, **extra) -> dict:
    return {"box": box, "checks": checks, "pass": all(c["pass"] for c in checks), **extra}


def min_star_measure(f: PartialFunction, x: int) -> int:
    return min(measures.min_certificate(f, x, NOTZERO).size, measures.min_certificate(f, x, NOTONE).size)


def verify_cheatsheet(f: PartialFunction, x: int, k: int = 1) -> dict:
    inst = p2_to_p1(f, x, k)
    g = inst.materialize()
    fam = unambiguous_family_for_cheatsheet(inst)
    c0g = measures.cert_complexity(g, ZERO).value
    uc1g = measures.uc1(g)
    lhs_min = min_star_measure(f, x)
    logn = clog2(f.n)
    z = cheatsheet_hard_input(inst)
    checks = [
        _check("g total", int(g.is_total), "==", 1),
        _check("arity", inst.arity, "==", k * f.n + (1 << k) * k * inst.ell),
        _check("C0(g) >= min{C_notzero(f,x), C_notone(f,x)}", c0g, ">=", lhs_min),
        _check("UC1(g) <= 3 C(f) log^2 n", uc1g.value, "<=", 3 * inst.cf * logn * logn),
        _check("family unambiguous", int(check_unambiguous(fam)), "==", 1),
        _check("family covers g^-1(1) exactly", int(measures.covers_exactly(g, fam)), "==", 1),
        _check("family width <= k(l + C(f))", fam.width, "<=", k * (inst.ell + inst.cf)),
        _check("g(copies of x, zero array)", int(g.value(z)), "==", 0),
        _check("UC1 witness is a valid cover", int(check_unambiguous(uc1g.witness) and measures.covers_exactly(g, uc1g.witness)), "==", 1),
    ]
    flags = []
    if not f.n > lhs_min:
        flags.append("regime: n <= min{C_notzero(f,x), C_notone(f,x)}")
    return _report("cheatsheet", checks, instance=inst.to_dict(), family_size=len(fam), flags=flags)


def verify_parity_lift(f: PartialFunction, U: CertificateFamily | None = None) -> dict:
    if U is None:
        U = measures.uc1(f).witness
    uc1f = max((r.size for r in U), default=0)
    g, xstar, meta = p1_to_p2(f, U)
    z = xstar
    cg = measures.certificate_complexity(g).value
    c0f = meta["C0(f)"]
    lhs = min_star_measure(g, z)
    checks = [
        _check("g(z) is *", int(g.value(z) == Out.STAR), "==", 1),
        _check("min{C_notzero(g,z), C_notone(g,z)} >= C0(f)", lhs, ">=", c0f),
        _check("C(g) <= 2 UC1(f)", cg, "<=", 2 * uc1f),
    ]
    return _report("parity-lift", checks, z=format_input(z, 2 * f.n), cover_width=uc1f)


def verify_to_hypergraph(f: PartialFunction, x: int) -> dict:
    G, c, meta = p2_to_p3(f, x)
    h = min_monochromatic_hitting_set(G, c)
    lhs = min_star_measure(f, x)
    checks = [
        _check("|V| = 2n+2", G.vertex_count, "==", 2 * f.n + 2),
        _check("r(G) = C(f)+1", rank(G), "==", meta["C(f)"] + 1),
        _check("G intersecting", int(is_intersecting(G)), "==", 1),
        _check("a monochromatic hitting set exists", int(h is not None), "==", 1),
    ]
    if h is not None:
        checks.append(_check("min mono hitting set >= min{C_notzero(f,x), C_notone(f,x)}", h[0], ">=", lhs))
    return _report("to-hypergraph", checks, edges=len(G), raw_edges=meta["raw_edges"])


def verify_from_hypergraph(G: Hypergraph, c: Colouring) -> dict:
    f, x, meta = p3_to_p2(G, c)
    h = min_monochromatic_hitting_set(G, c)
    flags = []
    if len(G):
        r = rank(G)
    else:
        # no edges: f is constantly STAR and has C(f) = 0
        r = 0
        flags.append("empty edge set, rank taken as 0")
    checks = [
        _check("C(f) <= r(G)", measures.certificate_complexity(f).value, "<=", r),
        _check("f monotone", int(is_monotone(f)), "==", 1),
    ]
    if meta["x_is_star"] and h is not None:
        checks.append(_check("min{C_notzero(f,x), C_notone(f,x)} >= h", min_star_measure(f, x), ">=", h[0]))
    elif not meta["x_is_star"]:
        flags.append(f"x is not a STAR input (f(x) = {meta['f(x)']})")
    else:
        flags.append("no monochromatic hitting set")
    return _report("from-hypergraph", checks, flags=flags, h=h[0] if h else None)


def verify_round_trip(f: PartialFunction, x: int) -> dict:
    G, c, _ = p2_to_p3(f, x)
    rep = verify_from_hypergraph(G, c)
    rep["box"] = "round-trip"
    return rep


def verify_box(which: int, *args, **kw) -> dict:
    fn = {1: verify_cheatsheet, 2: verify_parity_lift, 3: verify_to_hypergraph, 4: verify_from_hypergraph}[which]
    return fn(*args, **kw)


# catalog and sweeps -------------------------------------------------------------------


def first_star(f: PartialFunction) -> int:
    stars = f.preimage(frozenset({Out.STAR}))
    if stars.size == 0:
        raise XNotStar("f has no STAR input")
    return int(stars[0])


def catalog(random_n3: int = 20, seed: int = 0) -> list[PartialFunction]:
    """All n=2 tables holding each of 0, 1, * plus seeded random n=3 ones."""
    out = []
    for t in product("01*", repeat=4):
        s = "".join(t)
        if set(s) == {"0", "1", "*"}:
            out.append(PartialFunction(2, s))
    rng = np.random.default_rng(seed)
    while len(out) < 36 + random_n3:
        s = "".join(rng.choice(list("01*"), size=8))
        if set(s) == {"0", "1", "*"}:
            f = PartialFunction(3, s)
            if f not in out:
                out.append(f)
    return out


def intersecting_antichains(v: int):
    """Every nonempty intersecting antichain of nonempty subsets of 1..v."""
    subsets = sorted(range(1, 1 << v), key=lambda m: (bin(m).count("1"), m))

    def grow(start, chosen):
        if chosen:
            yield list(chosen)
        for t in range(start, len(subsets)):
            s = subsets[t]
            if all(s & c and s & c != c and s & c != s for c in chosen):
                chosen.append(s)
                yield from grow(t + 1, chosen)
                chosen.pop()

    yield from grow(0, [])


def rank_sweep(max_vertices: int = 5) -> dict:
    """C(f) <= r(G) over every intersecting antichain on up to max_vertices."""
    count = fails = 0
    for v in range(1, max_vertices + 1):
        for fam in intersecting_antichains(v):
            G = Hypergraph(v, [[j + 1 for j in range(v) if m >> j & 1] for m in fam])
            f = p3_table(G)
            count += 1
            if measures.certificate_complexity(f).value > rank(G):
                fails += 1
    return {"hypergraphs": count, "failures": fails, "pass": fails == 0}
