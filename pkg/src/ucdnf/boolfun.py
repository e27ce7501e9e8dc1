"""Partial boolean functions, restrictions and the certificate relation.

Inputs are plain ints: variable ``x_{j+1}`` is bit ``j`` of the input
index, least significant first. The same convention fixes the character
order of truth tables and of ``.pbf`` files.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .errors import ArityMismatch, BudgetExceeded, FormatError, UndeterminedValue


class Out(enum.IntEnum):
    ZERO = 0
    ONE = 1
    STAR = 2

    @property
    def char(self) -> str:
        return "01*"[self]

    @classmethod
    def from_char(cls, ch: str) -> "Out":
        try:
            return cls("01*".index(ch))
        except ValueError:
            raise FormatError(f"bad output symbol {ch!r}") from None


class _Undetermined:
    """Status returned by budget-limited evaluators; never a function value."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNDETERMINED"


UNDETERMINED = _Undetermined()

OutputSet = frozenset
ZERO = frozenset({Out.ZERO})
ONE = frozenset({Out.ONE})
NOTZERO = frozenset({Out.ONE, Out.STAR})
NOTONE = frozenset({Out.ZERO, Out.STAR})

SIGMA_NAMES = {"0": ZERO, "1": ONE, "notzero": NOTZERO, "notone": NOTONE}


def sigma_name(sigma: frozenset) -> str:
    for name, s in SIGMA_NAMES.items():
        if s == sigma:
            return name
    return "{" + ",".join(sorted(o.char for o in sigma)) + "}"


def parse_sigma(text: str) -> frozenset:
    try:
        return SIGMA_NAMES[text.lower()]
    except KeyError:
        raise FormatError(f"unknown output set {text!r}; use one of {sorted(SIGMA_NAMES)}") from None


def bits_to_int(bits: Sequence[int]) -> int:
    """``bits[j]`` is the value of variable ``x_{j+1}``."""
    x = 0
    for j, b in enumerate(bits):
        if b not in (0, 1):
            raise FormatError(f"bit {j} is {b!r}, expected 0 or 1")
        x |= b << j
    return x


def int_to_bits(x: int, n: int) -> tuple[int, ...]:
    return tuple((x >> j) & 1 for j in range(n))


def parse_input(text: str) -> int:
    """Parse a bit string written ``x_1 x_2 ... x_n`` (spaces ignored)."""
    text = text.replace(" ", "").replace("_", "")
    if not text or set(text) - {"0", "1"}:
        raise FormatError(f"bad input bit string {text!r}")
    return bits_to_int([int(c) for c in text])


def format_input(x: int, n: int) -> str:
    return "".join(str(b) for b in int_to_bits(x, n))


def popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True)
class Restriction:
    """A partial input: the variables in ``mask`` are fixed to the bits of ``value``."""

    n: int
    mask: int
    value: int

    def __post_init__(self):
        if self.mask >> self.n or self.value & ~self.mask:
            raise FormatError("restriction mask/value out of range")

    @classmethod
    def from_string(cls, text: str) -> "Restriction":
        mask = value = 0
        for j, ch in enumerate(text):
            if ch == "*":
                continue
            if ch not in "01":
                raise FormatError(f"bad restriction symbol {ch!r}")
            mask |= 1 << j
            value |= int(ch) << j
        return cls(len(text), mask, value)

    @classmethod
    def of_input(cls, n: int, x: int, read: Iterable[int] | int) -> "Restriction":
        """``x`` restricted to the read set (0-based variable indices or a mask)."""
        mask = read if isinstance(read, int) else sum(1 << i for i in set(read))
        return cls(n, mask, x & mask)

    @classmethod
    def empty(cls, n: int) -> "Restriction":
        return cls(n, 0, 0)

    @property
    def size(self) -> int:
        return popcount(self.mask)

    @property
    def read_set(self) -> tuple[int, ...]:
        """0-based indices of the fixed variables."""
        return tuple(j for j in range(self.n) if self.mask >> j & 1)

    @property
    def entries(self) -> str:
        return "".join(
            "*" if not self.mask >> j & 1 else str(self.value >> j & 1) for j in range(self.n)
        )

    def __str__(self) -> str:
        return self.entries

    def is_consistent(self, x: int) -> bool:
        return (x & self.mask) == self.value

    def conflicts(self, other: "Restriction") -> bool:
        common = self.mask & other.mask
        return (self.value ^ other.value) & common != 0

    def completions(self) -> Iterator[int]:
        free = [j for j in range(self.n) if not self.mask >> j & 1]
        for k in range(1 << len(free)):
            x = self.value
            for t, j in enumerate(free):
                if k >> t & 1:
                    x |= 1 << j
            yield x

    def completion_indices(self) -> np.ndarray:
        return self.value + subset_offsets(((1 << self.n) - 1) & ~self.mask)


def subset_offsets(free_mask: int) -> np.ndarray:
    """All submasks of ``free_mask`` as an int64 array (ascending)."""
    out = np.zeros(1, dtype=np.int64)
    j = 0
    m = free_mask
    while m:
        if m & 1:
            out = np.concatenate([out, out + (1 << j)])
        m >>= 1
        j += 1
    return np.sort(out)


class Role(enum.Enum):
    ZERO_CERTS = "zero_certs"
    ONE_CERTS = "one_certs"
    UNAMBIGUOUS_ONE_COVER = "unambiguous_one_cover"


@dataclass(frozen=True)
class CertificateFamily:
    certificates: tuple[Restriction, ...]
    role: Role

    def __post_init__(self):
        object.__setattr__(self, "certificates", tuple(self.certificates))

    def __len__(self) -> int:
        return len(self.certificates)

    def __iter__(self):
        return iter(self.certificates)

    @property
    def width(self) -> int:
        return max((r.size for r in self.certificates), default=0)


Evaluator = Callable[[int], object]


class PartialFunction:
    """An n-bit function into {0, 1, *}, as a truth table or an evaluator callback.

    The table is a read-only ``uint8`` array of ``Out`` codes. Evaluators
    must be deterministic and may return ``UNDETERMINED``.
    """

    MAX_MATERIALIZE = 24

    def __init__(self, n: int, table=None, evaluator: Evaluator | None = None, name: str = ""):
        if n < 0:
            raise FormatError("arity must be nonnegative")
        if (table is None) == (evaluator is None):
            raise ValueError("give exactly one of table / evaluator")
        self.n = n
        self.name = name
        self._evaluator = evaluator
        self._table = None
        if table is not None:
            if isinstance(table, str):
                table = np.array([Out.from_char(c) for c in table], dtype=np.uint8)
            arr = np.asarray(table, dtype=np.uint8).copy()
            if arr.shape != (1 << n,):
                raise FormatError(f"table length {arr.size} != 2^{n}")
            if arr.size and arr.max() > 2:
                raise FormatError("table entries must be 0, 1 or 2 (STAR)")
            arr.setflags(write=False)
            self._table = arr

    # construction helpers ------------------------------------------------

    @classmethod
    def from_callable(cls, n: int, fn: Callable[[int], object], name: str = "") -> "PartialFunction":
        """Materialize ``fn`` over all 2^n inputs."""
        if n > cls.MAX_MATERIALIZE:
            raise BudgetExceeded(f"refusing to materialize {n} > {cls.MAX_MATERIALIZE} bits")
        vals = np.empty(1 << n, dtype=np.uint8)
        for x in range(1 << n):
            v = fn(x)
            if v is UNDETERMINED:
                raise UndeterminedValue(f"input {format_input(x, n)} undetermined")
            vals[x] = int(v)
        return cls(n, vals, name=name)

    @classmethod
    def constant(cls, n: int, value: Out) -> "PartialFunction":
        return cls(n, np.full(1 << n, int(value), dtype=np.uint8), name=f"const{value.char}")

    # accessors -----------------------------------------------------------

    @property
    def is_explicit(self) -> bool:
        return self._table is not None

    @property
    def table(self) -> np.ndarray:
        if self._table is None:
            raise BudgetExceeded("function is implicit; call materialize() first")
        return self._table

    def __call__(self, x: int):
        return self.evaluate(x)

    def evaluate(self, x) -> object:
        if not isinstance(x, (int, np.integer)):
            bits = tuple(x)
            if len(bits) != self.n:
                raise ArityMismatch(f"input has {len(bits)} bits, function has {self.n}")
            x = bits_to_int(bits)
        x = int(x)
        if x < 0 or x >> self.n:
            raise ArityMismatch(f"input index {x} out of range for n={self.n}")
        if self._table is not None:
            return Out(int(self._table[x]))
        return self._evaluator(x)

    def value(self, x: int) -> Out:
        """Like ``evaluate`` but UNDETERMINED becomes an error."""
        v = self.evaluate(x)
        if v is UNDETERMINED:
            raise UndeterminedValue(f"input {format_input(int(x), self.n)} undetermined")
        return v

    def materialize(self, budget: int | None = None) -> "PartialFunction":
        if self.is_explicit:
            return self
        if budget is not None and (1 << self.n) > budget:
            raise BudgetExceeded(f"2^{self.n} inputs exceed budget {budget}")
        return PartialFunction.from_callable(self.n, self._evaluator, name=self.name)

    def preimage(self, sigma: frozenset) -> np.ndarray:
        """Sorted input indices x with f(x) in sigma."""
        return np.flatnonzero(np.isin(self.table, [int(o) for o in sigma]))

    @property
    def is_total(self) -> bool:
        return not bool((self.table == Out.STAR).any())

    def to_string(self) -> str:
        return "".join("01*"[v] for v in self.table)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PartialFunction) or other.n != self.n:
            return NotImplemented
        return bool(np.array_equal(self.table, other.table))

    def __hash__(self):
        return hash((self.n, self.to_string()))

    def __repr__(self) -> str:
        body = self.to_string() if self.is_explicit and self.n <= 5 else ("table" if self.is_explicit else "implicit")
        return f"PartialFunction(n={self.n}, {body}{', ' + self.name if self.name else ''})"


def is_consistent(rho: Restriction, x: int) -> bool:
    if not isinstance(x, int):
        x = bits_to_int(x)
    if x >> rho.n:
        raise ArityMismatch("input longer than restriction")
    return rho.is_consistent(x)


def is_certificate(f: PartialFunction, rho: Restriction, sigma: frozenset, budget: int = 1 << 20) -> bool:
    """True iff every completion of ``rho`` evaluates into ``sigma``."""
    if rho.n != f.n:
        raise ArityMismatch(f"restriction on {rho.n} bits, function on {f.n}")
    if f.is_explicit:
        vals = f.table[rho.completion_indices()]
        return bool(np.isin(vals, [int(o) for o in sigma]).all())
    free = f.n - rho.size
    if (1 << free) > budget:
        raise BudgetExceeded(f"2^{free} completions exceed budget {budget}")
    return all(f.value(y) in sigma for y in rho.completions())


def check_unambiguous(family: CertificateFamily) -> bool:
    """Pairwise-conflict test; no input enumeration."""
    certs = family.certificates
    for a, b in combinations(certs, 2):
        if not a.conflicts(b):
            return False
    return True


# .pbf truth-table files ------------------------------------------------------


def dumps_pbf(f: PartialFunction, comments: Iterable[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"n={f.n}")
    lines.append(f.to_string())
    return "\n".join(lines) + "\n"


def loads_pbf(text: str) -> PartialFunction:
    body = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if len(body) != 2 or not body[0].startswith("n="):
        raise FormatError("expected 'n=<int>' line followed by one table line")
    try:
        n = int(body[0][2:])
    except ValueError:
        raise FormatError(f"bad arity line {body[0]!r}") from None
    if len(body[1]) != 1 << n:
        raise FormatError(f"table has {len(body[1])} symbols, expected {1 << n}")
    return PartialFunction(n, body[1])


def write_pbf(f: PartialFunction, path, comments: Iterable[str] = ()) -> None:
    Path(path).write_text(dumps_pbf(f, comments))


def read_pbf(path) -> PartialFunction:
    return loads_pbf(Path(path).read_text())


# a few named functions used throughout the tests and CLI ---------------------


def and_n(n: int) -> PartialFunction:
    t = np.zeros(1 << n, dtype=np.uint8)
    t[-1] = 1
    return PartialFunction(n, t, name=f"AND{n}")


def or_n(n: int) -> PartialFunction:
    t = np.ones(1 << n, dtype=np.uint8)
    t[0] = 0
    return PartialFunction(n, t, name=f"OR{n}")


def parity_n(n: int) -> PartialFunction:
    idx = np.arange(1 << n)
    t = np.zeros(1 << n, dtype=np.uint8)
    for j in range(n):
        t ^= ((idx >> j) & 1).astype(np.uint8)
    return PartialFunction(n, t, name=f"PARITY{n}")


def dictator(n: int, i: int = 0) -> PartialFunction:
    idx = np.arange(1 << n)
    return PartialFunction(n, ((idx >> i) & 1).astype(np.uint8), name=f"x{i + 1}")
