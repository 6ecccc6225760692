"""Dense function tables ``f: range(k)^n -> range(k)``.

Index encoding: input ``(x_0, ..., x_{n-1})`` lives at ``sum(x_j * k**j)``,
so the first argument is least significant. For binary tables this makes the
index of an input equal to the bitmask of the arguments that are 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import factorial, gcd
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import ArgumentError, CapabilityError, PreconditionError

DEFAULT_LATIN_K_MAX = 4


@dataclass(frozen=True)
class FunctionTable:
    k: int
    n: int
    table: tuple[int, ...]

    def __post_init__(self):
        if self.k < 2:
            raise ArgumentError(f"alphabet size must be >= 2, got {self.k}")
        if self.n < 0:
            raise ArgumentError(f"arity must be >= 0, got {self.n}")
        table = tuple(int(v) for v in self.table)
        if len(table) != self.k ** self.n:
            raise ArgumentError(f"table length {len(table)} != {self.k}**{self.n}")
        if any(not 0 <= v < self.k for v in table):
            raise ArgumentError("table entries out of range")
        object.__setattr__(self, "table", table)

    @classmethod
    def _raw(cls, k: int, n: int, table: tuple[int, ...]) -> "FunctionTable":
        # trusted constructor used by the enumerators
        obj = object.__new__(cls)
        object.__setattr__(obj, "k", k)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "table", table)
        return obj

    # -- constructors -------------------------------------------------
    @classmethod
    def from_callable(cls, k: int, n: int, fn: Callable[..., int]) -> "FunctionTable":
        return cls(k, n, tuple(fn(*x) for x in inputs(k, n)))

    @classmethod
    def constant(cls, k: int, n: int, value: int) -> "FunctionTable":
        return cls(k, n, (value,) * k ** n)

    @classmethod
    def projection(cls, k: int, n: int, j: int) -> "FunctionTable":
        if not 0 <= j < n:
            raise ArgumentError(f"projection index {j} out of range for arity {n}")
        return cls.from_callable(k, n, lambda *x: x[j])

    @classmethod
    def unary(cls, values: Sequence[int]) -> "FunctionTable":
        return cls(len(values), 1, tuple(values))

    @classmethod
    def identity(cls, k: int) -> "FunctionTable":
        return cls(k, 1, tuple(range(k)))

    # -- evaluation ---------------------------------------------------
    def index(self, x: Sequence[int]) -> int:
        if len(x) != self.n:
            raise ArgumentError(f"expected {self.n} arguments, got {len(x)}")
        idx = 0
        for j in reversed(range(self.n)):
            if not 0 <= x[j] < self.k:
                raise ArgumentError(f"argument {x[j]} out of range for k={self.k}")
            idx = idx * self.k + x[j]
        return idx

    def eval(self, x: Sequence[int]) -> int:
        return self.table[self.index(x)]

    __call__ = lambda self, *x: self.eval(x)  # noqa: E731

    def fix_last_argument(self, sigma: int) -> "FunctionTable":
        """The (n-1)-ary function ``x -> f(x + (sigma,))``."""
        if self.n == 0:
            raise ArgumentError("cannot fix an argument of a 0-ary function")
        if not 0 <= sigma < self.k:
            raise ArgumentError(f"value {sigma} out of range")
        block = self.k ** (self.n - 1)
        return FunctionTable._raw(self.k, self.n - 1, self.table[sigma * block:(sigma + 1) * block])

    def section(self, j: int) -> tuple[int, ...] | None:
        """The unary phi with ``f(x) = phi(x_j)``, or None if f depends on another argument."""
        return _section(self.k, self.n, self.table, j)

    @property
    def is_constant(self) -> bool:
        return len(set(self.table)) == 1

    @property
    def is_permutation(self) -> bool:
        return self.n == 1 and len(set(self.table)) == self.k

    def depends_on(self, j: int) -> bool:
        stride = self.k ** j
        return any(
            self.table[idx] != self.table[idx + (v - (idx // stride) % self.k) * stride]
            for idx in range(len(self.table))
            for v in range(self.k)
        )

    def analyze(self) -> "UnaryAnalysis":
        constant = self.table[0] if self.is_constant else None
        dictators = tuple(
            (j, FunctionTable._raw(self.k, 1, phi))
            for j, phi in _dictator_forms(self.k, self.n, self.table)
        )
        if self.n == 1:
            kind = "constant" if constant is not None else "permutation" if self.is_permutation else "other"
        else:
            kind = "constant" if constant is not None else "dictator" if dictators else "other"
        return UnaryAnalysis(kind, constant, dictators)

    def to_dict(self) -> dict:
        return {"k": self.k, "n": self.n, "table": list(self.table)}

    @classmethod
    def from_dict(cls, data: dict) -> "FunctionTable":
        return cls(int(data["k"]), int(data["n"]), tuple(data["table"]))


class UnaryAnalysis(NamedTuple):
    kind: str  # "constant" | "permutation" | "dictator" | "other"
    constant: int | None
    dictators: tuple[tuple[int, FunctionTable], ...]


def inputs(k: int, n: int):
    """All inputs of ``range(k)^n`` in table-index order."""
    for rev in itertools.product(range(k), repeat=n):
        yield rev[::-1]


@lru_cache(maxsize=None)
def _section(k: int, n: int, table: tuple[int, ...], j: int) -> tuple[int, ...] | None:
    stride = k ** j
    phi = tuple(table[a * stride] for a in range(k))
    for idx, v in enumerate(table):
        if v != phi[(idx // stride) % k]:
            return None
    return phi


@lru_cache(maxsize=None)
def _dictator_forms(k: int, n: int, table: tuple[int, ...]) -> tuple[tuple[int, tuple[int, ...]], ...]:
    out = []
    for j in range(n):
        phi = _section(k, n, table, j)
        if phi is not None:
            out.append((j, phi))
    return tuple(out)


# -- named binary functions ---------------------------------------------

def AND(n: int = 2) -> FunctionTable:
    return FunctionTable.from_callable(2, n, lambda *x: int(all(x)))


def OR(n: int = 2) -> FunctionTable:
    return FunctionTable.from_callable(2, n, lambda *x: int(any(x)))


def XOR(n: int = 2) -> FunctionTable:
    return FunctionTable.from_callable(2, n, lambda *x: sum(x) % 2)


def XNOR(n: int = 2) -> FunctionTable:
    return FunctionTable.from_callable(2, n, lambda *x: 1 - sum(x) % 2)


NEGATION = FunctionTable(2, 1, (1, 0))
IDENTITY2 = FunctionTable(2, 1, (0, 1))


def _require_binary(f: FunctionTable) -> None:
    if f.k != 2:
        raise ArgumentError(f"operation requires a binary alphabet, got k={f.k}")


def affine_table(n: int, J, b: int) -> tuple[int, ...]:
    mask = sum(1 << j for j in J)
    return tuple((bin(x & mask).count("1") + b) % 2 for x in range(1 << n))


def detect_affine(f: FunctionTable) -> tuple[frozenset[int], int] | None:
    """Return ``(J, b)`` with ``f(x) = b xor XOR_{j in J} x_j``, if one exists."""
    _require_binary(f)
    b = f.table[0]
    J = frozenset(j for j in range(f.n) if f.table[1 << j] != b)
    return (J, b) if affine_table(f.n, J, b) == f.table else None


def detect_and_of_subset(f: FunctionTable) -> frozenset[int] | None:
    """Return J with ``f(x) = AND_{j in J} x_j``; the empty J is the constant 1."""
    _require_binary(f)
    full = (1 << f.n) - 1
    J = frozenset(j for j in range(f.n) if f.table[full ^ (1 << j)] == 0)
    mask = sum(1 << j for j in J)
    expected = tuple(int(x & mask == mask) for x in range(1 << f.n))
    return J if expected == f.table else None


def detect_or_of_subset(f: FunctionTable) -> frozenset[int] | None:
    """Return J with ``f(x) = OR_{j in J} x_j``; the empty J is the constant 0."""
    _require_binary(f)
    J = frozenset(j for j in range(f.n) if f.table[1 << j] == 1)
    mask = sum(1 << j for j in J)
    expected = tuple(int(x & mask != 0) for x in range(1 << f.n))
    return J if expected == f.table else None


def dual(f: FunctionTable) -> FunctionTable:
    """The bit-flip conjugate ``x -> not f(not x)``."""
    _require_binary(f)
    full = (1 << f.n) - 1
    return FunctionTable._raw(2, f.n, tuple(1 - f.table[full ^ x] for x in range(1 << f.n)))


# -- permutations and Latin squares ---------------------------------------

def compose(phi: FunctionTable, psi: FunctionTable) -> FunctionTable:
    """``phi o psi`` for unary tables."""
    return FunctionTable._raw(phi.k, 1, tuple(phi.table[v] for v in psi.table))


def permutation_power(phi: FunctionTable, r: int) -> FunctionTable:
    if phi.n != 1 or not phi.is_permutation:
        raise PreconditionError("permutation_power needs a unary permutation")
    if r < 0:
        raise ArgumentError("exponent must be >= 0")
    result = FunctionTable.identity(phi.k)
    base = phi
    while r:
        if r & 1:
            result = compose(base, result)
        base = compose(base, base)
        r >>= 1
    return result


def permutation_order(phi: FunctionTable) -> int:
    order, cur = 1, phi
    identity = tuple(range(phi.k))
    while cur.table != identity:
        cur = compose(phi, cur)
        order += 1
    return order


def lcm(values) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


def factorial_product(sizes) -> int:
    out = 1
    for k in sizes:
        out *= factorial(k)
    return out


def rows(f: FunctionTable) -> list[tuple[int, ...]]:
    """``rows(f)[a]`` is the unary map ``s -> f(a, s)``."""
    if f.n != 2:
        raise ArgumentError("rows are defined for binary-arity tables")
    k = f.k
    return [tuple(f.table[a + k * s] for s in range(k)) for a in range(k)]


def columns(f: FunctionTable) -> list[tuple[int, ...]]:
    """``columns(f)[a]`` is the unary map ``s -> f(s, a)``."""
    if f.n != 2:
        raise ArgumentError("columns are defined for binary-arity tables")
    k = f.k
    return [tuple(f.table[s + k * a] for s in range(k)) for a in range(k)]


def latin_square_check(f: FunctionTable) -> bool:
    full = set(range(f.k))
    return all(set(r) == full for r in rows(f)) and all(set(c) == full for c in columns(f))


@lru_cache(maxsize=None)
def _latin_squares(k: int) -> tuple[tuple[int, ...], ...]:
    perms = list(itertools.permutations(range(k)))
    found = []

    def extend(chosen):
        if len(chosen) == k:
            # chosen[a] is the row s -> f(a, s)
            found.append(tuple(chosen[a][s] for s in range(k) for a in range(k)))
            return
        for p in perms:
            if all(p[s] != row[s] for row in chosen for s in range(k)):
                extend(chosen + [p])

    extend([])
    return tuple(sorted(found))


def enumerate_latin_squares(k: int, limit: int = DEFAULT_LATIN_K_MAX) -> list[FunctionTable]:
    if k > limit:
        raise CapabilityError(f"Latin-square enumeration capped at k={limit}, got k={k}")
    return [FunctionTable._raw(k, 2, t) for t in _latin_squares(k)]


def all_tables(k: int, n: int) -> np.ndarray:
    """Every table of ``range(k)^n -> range(k)`` as rows, lexicographic with entry 0 most significant."""
    size = k ** n
    if k ** size > 1 << 24:
        raise CapabilityError(f"{k}**{size} tables is too many to materialize")
    grids = np.indices((k,) * size).reshape(size, -1).T
    return grids.astype(np.int64)
