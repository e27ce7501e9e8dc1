"""The HEX partial function on n x n matrices, spiral hard inputs and their checks.

Matrix entry (r, c) (0-based, row 0 on top) is input bit ``r*n + c``.
A 1-path runs top to bottom through 1-entries, a 0-path left to right
through 0-entries, both 4-connected; length counts entries.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .boolfun import NOTONE, NOTZERO, Out, PartialFunction, Restriction
from .errors import FormatError, GateFailed, GeometryInvalid, TooLarge

Cell = tuple[int, int]
STEPS = ((1, 0), (-1, 0), (0, 1), (0, -1))
C_MIN = 0.25  # gate (iii): l >= C_MIN * n^1.5
MATERIALIZE_MAX = 4


@dataclass(frozen=True)
class HexInput:
    n: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.uint8)
        if m.shape != (self.n, self.n) or ((m != 0) & (m != 1)).any():
            raise FormatError(f"expected an {self.n}x{self.n} 0/1 matrix")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_int(cls, n: int, x: int) -> "HexInput":
        bits = (x >> np.arange(n * n)) & 1
        return cls(n, bits.reshape(n, n))

    def to_int(self) -> int:
        flat = self.matrix.reshape(-1)
        return sum(1 << i for i in np.flatnonzero(flat).tolist())

    def flipped(self, cells) -> "HexInput":
        m = self.matrix.copy()
        for r, c in cells:
            m[r, c] ^= 1
        return HexInput(self.n, m)

    def dumps(self) -> str:
        return "\n".join("".join(str(int(v)) for v in row) for row in self.matrix) + "\n"

    @classmethod
    def loads(cls, text: str) -> "HexInput":
        rows = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        n = len(rows)
        if any(len(r) != n or set(r) - {"0", "1"} for r in rows):
            raise FormatError("matrix file must be n lines of n characters over {0,1}")
        return cls(n, np.array([[int(ch) for ch in r] for r in rows]))

    def write(self, path) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def read(cls, path) -> "HexInput":
        return cls.loads(Path(path).read_text())

    def __eq__(self, other):
        return isinstance(other, HexInput) and self.n == other.n and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash((self.n, self.matrix.tobytes()))


def shortest_path(M: np.ndarray, val: int, vertical: bool) -> int | None:
    """Fewest entries on a val-path (top->bottom if vertical, else left->right)."""
    n = M.shape[0]
    dist = {}
    q = deque()
    for k in range(n):
        cell = (0, k) if vertical else (k, 0)
        if M[cell] == val:
            dist[cell] = 1
            q.append(cell)
    while q:
        r, c = q.popleft()
        if (r if vertical else c) == n - 1:
            return dist[(r, c)]
        for dr, dc in STEPS:
            rr, cc = r + dr, c + dc
            if 0 <= rr < n and 0 <= cc < n and M[rr, cc] == val and (rr, cc) not in dist:
                dist[(rr, cc)] = dist[(r, c)] + 1
                q.append((rr, cc))
    return None


def hex_evaluate(n: int, M) -> Out:
    if isinstance(M, HexInput):
        M = M.matrix
    M = np.asarray(M)
    if M.shape != (n, n):
        raise FormatError(f"expected an {n}x{n} matrix")
    one = shortest_path(M, 1, True)
    if one is not None and one <= 2 * n:
        return Out.ONE
    zero = shortest_path(M, 0, False)
    if zero is not None and zero <= 2 * n:
        return Out.ZERO
    return Out.STAR


def _bounded_reach(cells: np.ndarray, n: int, vertical: bool) -> np.ndarray:
    """Bit-parallel BFS over a batch: cells[r, c] is a bool vector over inputs.

    Returns, per input, whether a path of at most 2n entries crosses.
    """
    reach = np.zeros_like(cells)
    if vertical:
        reach[0] = cells[0]
    else:
        reach[:, 0] = cells[:, 0]
    for _ in range(2 * n - 1):
        nxt = reach.copy()
        nxt[1:] |= reach[:-1]
        nxt[:-1] |= reach[1:]
        nxt[:, 1:] |= reach[:, :-1]
        nxt[:, :-1] |= reach[:, 1:]
        reach = nxt & cells
    edge = reach[n - 1] if vertical else reach[:, n - 1]
    return edge.any(axis=0)


def hex_table(n: int) -> np.ndarray:
    if n > MATERIALIZE_MAX:
        raise TooLarge(f"HEX{n} has 2^{n * n} inputs; only n <= {MATERIALIZE_MAX} is materialized")
    xs = np.arange(1 << (n * n), dtype=np.int64)
    bits = np.stack([(xs >> i) & 1 for i in range(n * n)]).astype(bool).reshape(n, n, -1)
    one = _bounded_reach(bits, n, True)
    zero = _bounded_reach(~bits, n, False)
    table = np.full(xs.size, int(Out.STAR), dtype=np.uint8)
    table[zero] = int(Out.ZERO)
    table[one] = int(Out.ONE)
    return table


def hex_function(n: int, materialize: bool | None = None) -> PartialFunction:
    if materialize is None:
        materialize = n <= MATERIALIZE_MAX
    if materialize:
        return PartialFunction(n * n, hex_table(n), name=f"HEX{n}")
    return PartialFunction(
        n * n, evaluator=lambda x: hex_evaluate(n, HexInput.from_int(n, x).matrix), name=f"HEX{n}"
    )


# spirals ------------------------------------------------------------------------


@dataclass
class SpiralLayout:
    n: int
    spirals: list  # list of cell lists, in path order
    noncorners: list  # per spiral, sorted top-to-bottom then left-to-right
    strips: list  # (first column, last column) per spiral
    blockers: list = field(default_factory=list)
    width: int = 0

    @property
    def spiral_count(self) -> int:
        return len(self.spirals)

    def to_dict(self) -> dict:
        cells = lambda L: [list(c) for c in L]
        return {
            "n": self.n,
            "spiral_count": self.spiral_count,
            "width": self.width,
            "strips": [list(s) for s in self.strips],
            "spirals": [cells(p) for p in self.spirals],
            "noncorners": [cells(p) for p in self.noncorners],
            "blockers": cells(self.blockers),
        }


@dataclass
class BlockFamily:
    blocks: list  # list of tuples of cells

    @property
    def count(self) -> int:
        return len(self.blocks)

    def to_dict(self) -> dict:
        return {"count": self.count, "blocks": [[list(c) for c in b] for b in self.blocks]}


def serpentine(n: int, w: int) -> tuple[list[Cell], Cell]:
    """A winding path in columns 0..w-1 of an n-row strip, and its bottom blocker.

    Starts with a stub at (0,0); horizontal arms on odd rows joined by
    one-cell connectors at alternating ends; a vertical run finishes at row
    n-2. The blocker is a lone 1 in the bottom row diagonal to the last
    cell, which keeps the bottom neighbour of the path at 0.
    """
    cells = [(0, 0)]
    side = 0
    last_arm = n - 3 if (n - 3) % 2 == 1 else n - 4
    r = 1
    while r <= last_arm:
        cols = range(w) if side == 0 else range(w - 1, -1, -1)
        cells += [(r, c) for c in cols]
        side = w - 1 if side == 0 else 0
        if r < last_arm:
            cells.append((r + 1, side))
        r += 2
    cells += [(rr, side) for rr in range(last_arm + 1, n - 1)]
    blocker = (n - 1, side + 1 if side == 0 else side - 1)
    return cells, blocker


def noncorner_cells(path: list[Cell]) -> list[Cell]:
    """Path cells where the path does not turn; the two endpoints count."""
    out = []
    for i, a in enumerate(path):
        if 0 < i < len(path) - 1:
            u, v = path[i - 1], path[i + 1]
            if u[0] == v[0] or u[1] == v[1]:
                out.append(a)
        else:
            out.append(a)
    return sorted(out)


def _layout(n: int, strip_width: int, path_width: int, count: int) -> tuple[HexInput, SpiralLayout]:
    M = np.zeros((n, n), dtype=np.uint8)
    spirals, strips, blockers = [], [], []
    for s in range(count):
        cells, blk = serpentine(n, path_width)
        a = s * strip_width
        if s % 2:
            place = lambda rc: (rc[0], a + strip_width - 1 - rc[1])
        else:
            place = lambda rc: (rc[0], a + rc[1])
        cells = [place(c) for c in cells]
        blk = place(blk)
        for c in cells:
            M[c] = 1
        M[blk] = 1
        spirals.append(cells)
        blockers.append(blk)
        strips.append((a, a + strip_width - 1))
    lay = SpiralLayout(n, spirals, [noncorner_cells(p) for p in spirals], strips, blockers, path_width)
    return HexInput(n, M), lay


def single_spiral(n: int) -> tuple[HexInput, SpiralLayout]:
    if n < 6:
        raise GeometryInvalid("single_spiral needs n >= 6")
    y, lay = _layout(n, n, n, 1)
    if hex_evaluate(n, y) != Out.STAR:
        raise GeometryInvalid("gate failed: y is not a STAR input")
    return y, lay


def blocks_of(lay: SpiralLayout) -> BlockFamily:
    ell = min(len(nc) for nc in lay.noncorners)
    return BlockFamily([tuple(nc[i] for nc in lay.noncorners) for i in range(ell)])


def spiral_gates(z: HexInput, lay: SpiralLayout, blocks: BlockFamily) -> dict:
    n = z.n
    star = hex_evaluate(n, z) == Out.STAR
    bad_flip = None
    if star:
        for i, b in enumerate(blocks.blocks):
            if hex_evaluate(n, z.flipped(b)) != Out.ZERO:
                bad_flip = i
                break
    seen = set()
    disjoint = True
    for b in blocks.blocks:
        if seen & set(b):
            disjoint = False
        seen |= set(b)
    ell = blocks.count
    c = ell / n**1.5
    return {
        "star": star,
        "block_flips_zero": star and bad_flip is None,
        "first_bad_block": bad_flip,
        "disjoint": disjoint,
        "ell": ell,
        "c": c,
        "c_min": C_MIN,
        "size_ok": disjoint and c >= C_MIN,
    }


def _first_failed(g: dict) -> str | None:
    if not g["star"]:
        return "(i) z is not a STAR input"
    if not g["block_flips_zero"]:
        return f"(ii) flipping block {g['first_bad_block']} does not give ZERO"
    if not g["size_ok"]:
        return f"(iii) blocks not disjoint or l={g['ell']} below {C_MIN}*n^1.5"
    return None


def multi_spiral(n: int, width: int | None = None):
    """sqrt(n) spirals, one per vertical strip of width sqrt(n).

    Odd strips are mirrored so neighbouring spirals share their long side.
    Without an explicit ``width`` every serpentine width 1..sqrt(n) is
    tried and the one with the most blocks wins (ties to the wider one).
    Returns ``(z, layout, blocks, gates)``.
    """
    m = math.isqrt(n)
    if m * m != n or n < 4:
        raise GeometryInvalid("multi_spiral needs a perfect square n >= 4")
    widths = [width] if width is not None else range(1, m + 1)
    best = None
    failure = None
    for w in widths:
        if not 1 <= w <= m:
            raise GeometryInvalid(f"width must lie in 1..{m}")
        z, lay = _layout(n, m, w, m)
        blocks = blocks_of(lay)
        g = spiral_gates(z, lay, blocks)
        g["width"] = w
        why = _first_failed(g)
        if why is not None:
            failure = failure or f"width {w}: {why}"
            continue
        if best is None or blocks.count >= best[2].count:
            best = (z, lay, blocks, g)
    if best is None:
        raise GeometryInvalid(f"gate failed: {failure}")
    return best


def block_lower_bound(z: HexInput, blocks: BlockFamily) -> int:
    seen = set()
    for b in blocks.blocks:
        if seen & set(b):
            raise GateFailed("blocks overlap")
        seen |= set(b)
        if hex_evaluate(z.n, z.flipped(b)) != Out.ZERO:
            raise GateFailed(f"flipping block {b} does not give a ZERO input")
    return blocks.count


def sensitivity_lower_bound(y: HexInput, lay: SpiralLayout) -> int:
    """Number of single non-corner flips turning y into a ZERO input."""
    cells = [c for nc in lay.noncorners for c in nc]
    return sum(hex_evaluate(y.n, y.flipped([c])) == Out.ZERO for c in cells)


def top_rows_certificate(y: HexInput, row_count: int = 5) -> Restriction:
    n = y.n
    row_count = min(row_count, n)
    read = (1 << (row_count * n)) - 1
    return Restriction.of_input(n * n, y.to_int(), read)


def greedy_one_path_adversary(z: HexInput, lay: SpiralLayout, rho: Restriction):
    """Try to route a short 1-path avoiding cells that rho reads as 0.

    Starts at the top of the spiral with the fewest read 0-entries next to
    it and heads down, stepping sideways around read zeros. Returns the
    list of cells, or None when the walk gets stuck or runs past 2n cells.
    """
    n = z.n
    if not rho.is_consistent(z.to_int()):
        raise FormatError("restriction is not consistent with z")

    def read_zero(cell):
        b = cell[0] * n + cell[1]
        return bool(rho.mask >> b & 1) and not rho.value >> b & 1

    def adjacent_zeros(path):
        on = set(path)
        near = set()
        for r, c in path:
            for dr, dc in STEPS:
                q = (r + dr, c + dc)
                if 0 <= q[0] < n and 0 <= q[1] < n and q not in on and read_zero(q):
                    near.add(q)
        return len(near)

    scores = [adjacent_zeros(p) for p in lay.spirals]
    k = min(range(len(scores)), key=lambda i: (scores[i], i))
    start = min(lay.spirals[k])
    free = lambda cell: not read_zero(cell)
    if not free(start):
        return None
    path = [start]
    r, c = start
    while r < n - 1:
        if free((r + 1, c)):
            r += 1
            path.append((r, c))
        else:
            order = sorted((cc for cc in range(n) if cc != c), key=lambda cc: (abs(cc - c), cc))
            for cc in order:
                step = 1 if cc > c else -1
                route = [(r, j) for j in range(c + step, cc + step, step)]
                if all(free(q) for q in route) and free((r + 1, cc)):
                    path += route + [(r + 1, cc)]
                    r, c = r + 1, cc
                    break
            else:
                return None
        if len(path) > 2 * n:
            return None
    return path


def completion_with_path(z: HexInput, rho: Restriction, path) -> HexInput:
    """z agreeing with rho, with every path cell set to 1 (checks the adversary)."""
    n = z.n
    x = (z.to_int() & ~rho.mask) | rho.value
    for r, c in path:
        x |= 1 << (r * n + c)
    return HexInput.from_int(n, x)


def spiral_scaling(ns=(4, 9, 16, 25)) -> dict:
    """Least-squares fit of log l against log n over multi_spiral outputs."""
    ells = [multi_spiral(n)[2].count for n in ns]
    beta, logc = np.polyfit(np.log(ns), np.log(ells), 1)
    return {"n": list(ns), "ell": ells, "beta": float(beta), "c": float(math.exp(logc))}


__all__ = [
    "BlockFamily",
    "HexInput",
    "NOTONE",
    "NOTZERO",
    "SpiralLayout",
    "block_lower_bound",
    "blocks_of",
    "completion_with_path",
    "greedy_one_path_adversary",
    "hex_evaluate",
    "hex_function",
    "hex_table",
    "multi_spiral",
    "noncorner_cells",
    "sensitivity_lower_bound",
    "serpentine",
    "single_spiral",
    "spiral_gates",
    "spiral_scaling",
    "top_rows_certificate",
]
