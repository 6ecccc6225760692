"""Polymorphism checking, enumeration and type classification.

Two independent enumeration routes live here:

* :func:`enumerate_polymorphisms` backtracks over table entries and prunes a
  partial assignment as soon as a fully determined input matrix maps outside P.
* :func:`scan_polymorphisms` materializes the whole candidate space and tests
  every tuple with vectorized membership lookups. It is the oracle the first
  route is checked against, so it shares none of the search code.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from math import prod
from typing import Iterator, Sequence

import numpy as np

from .errors import ArgumentError, BudgetExceededError, CapabilityError, SignatureMismatchError
from .functions import FunctionTable, _section, all_tables
from .phi import PhiFamily
from .predicate import Certificate, Predicate

DEFAULT_BUDGET = 10 ** 9
_CHUNK = 1 << 16


@dataclass(frozen=True)
class PolymorphismTuple:
    n: int
    tables: tuple[FunctionTable, ...]

    def __post_init__(self):
        tables = tuple(self.tables)
        if any(t.n != self.n for t in tables):
            raise ArgumentError("all coordinate functions must share the arity n")
        object.__setattr__(self, "tables", tables)

    @classmethod
    def of(cls, *tables: FunctionTable) -> "PolymorphismTuple":
        if not tables:
            raise ArgumentError("need at least one table")
        return cls(tables[0].n, tables)

    @classmethod
    def _raw(cls, sizes: Sequence[int], n: int, raw: Sequence[tuple[int, ...]]) -> "PolymorphismTuple":
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "tables", tuple(FunctionTable._raw(k, n, t) for k, t in zip(sizes, raw)))
        return obj

    @property
    def m(self) -> int:
        return len(self.tables)

    @property
    def raw(self) -> tuple[tuple[int, ...], ...]:
        return tuple(t.table for t in self.tables)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(t.k for t in self.tables)

    def __getitem__(self, i: int) -> FunctionTable:
        return self.tables[i]

    def __iter__(self):
        return iter(self.tables)

    def to_dict(self) -> dict:
        return {"n": self.n, "tables": [t.to_dict() for t in self.tables]}

    @classmethod
    def from_dict(cls, data: dict) -> "PolymorphismTuple":
        tables = tuple(FunctionTable.from_dict(t) for t in data["tables"])
        n = int(data.get("n", tables[0].n if tables else 0))
        return cls(n, tables)


@dataclass(frozen=True)
class InputMatrix:
    """An m x n matrix whose columns are tuples of P and whose rows feed the f_i."""

    columns: tuple[tuple[int, ...], ...]
    m: int

    @property
    def n(self) -> int:
        return len(self.columns)

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(col[i] for col in self.columns) for i in range(self.m))

    def output(self, fs: PolymorphismTuple) -> tuple[int, ...]:
        return tuple(f.eval(row) for f, row in zip(fs, self.rows))

    def to_dict(self) -> dict:
        return {"columns": [list(c) for c in self.columns], "rows": [list(r) for r in self.rows]}


def _check_signature(P: Predicate, fs: PolymorphismTuple) -> None:
    if fs.sizes != P.sizes:
        raise SignatureMismatchError(f"tables have alphabet sizes {fs.sizes}, predicate has {P.sizes}")


def _column_indices(num_tuples: int, n: int, start: int, stop: int) -> np.ndarray:
    """Indices into P for matrices ``start..stop`` in ``itertools.product`` order."""
    idx = np.arange(start, stop, dtype=np.int64)
    cols = np.empty((stop - start, n), dtype=np.int64)
    for j in reversed(range(n)):
        cols[:, j] = idx % num_tuples
        idx //= num_tuples
    return cols


def _row_indices(P: Predicate, cols: np.ndarray) -> np.ndarray:
    """Table index of every row, shape ``(len(cols), m)``."""
    A = P.array
    out = np.zeros((cols.shape[0], P.m), dtype=np.int64)
    for i, k in enumerate(P.sizes):
        for j in range(cols.shape[1]):
            out[:, i] += A[cols[:, j], i] * k ** j
    return out


def _first_violation(P: Predicate, fs: PolymorphismTuple) -> int | None:
    _check_signature(P, fs)
    n = fs.n
    total = len(P) ** n
    tables = [np.asarray(t.table, dtype=np.int64) for t in fs.tables]
    radix = np.asarray(P.signature.radix, dtype=np.int64)
    for start in range(0, total, _CHUNK):
        stop = min(total, start + _CHUNK)
        R = _row_indices(P, _column_indices(len(P), n, start, stop))
        codes = np.zeros(stop - start, dtype=np.int64)
        for i, t in enumerate(tables):
            codes += t[R[:, i]] * radix[i]
        bad = ~P.mask[codes]
        if bad.any():
            return start + int(np.argmax(bad))
    return None


def is_polymorphism(P: Predicate, fs: PolymorphismTuple) -> bool:
    """Check every matrix with columns in P; costs ``|P|**n`` lookups."""
    return _first_violation(P, fs) is None


def find_violation(P: Predicate, fs: PolymorphismTuple) -> InputMatrix | None:
    """The first violating matrix, columns ordered as ``itertools.product(P, repeat=n)``."""
    pos = _first_violation(P, fs)
    if pos is None:
        return None
    cols = _column_indices(len(P), fs.n, pos, pos + 1)[0]
    return InputMatrix(tuple(P.tuples[c] for c in cols), P.m)


# -- backtracking enumeration ------------------------------------------------

class _Search:
    """Entry-major backtracking: entry 0 of every coordinate, then entry 1, ..."""

    def __init__(self, P: Predicate, n: int, fixed: dict[tuple[int, int], int] | None = None):
        self.P, self.n = P, n
        sizes = P.sizes
        m = len(sizes)
        self.lens = [k ** n for k in sizes]
        self.offsets = [sum(self.lens[:i]) for i in range(m)]
        self.order = [(i, idx) for idx in range(max(self.lens)) for i in range(m) if idx < self.lens[i]]
        pos = {v: p for p, v in enumerate(self.order)}
        self.flat = [self.offsets[i] + idx for i, idx in self.order]
        radix = P.signature.radix

        # allowed[i][code of the other coordinates] = bitmask of values for coordinate i
        mask = P.mask
        self.allowed = []
        for i, k in enumerate(sizes):
            table = [0] * P.signature.volume
            for code in range(P.signature.volume):
                if (code // radix[i]) % k == 0:
                    bits = 0
                    for v in range(k):
                        if mask[code + v * radix[i]]:
                            bits |= 1 << v
                    table[code] = bits
            self.allowed.append(table)

        self.checks: list[list[tuple[tuple[int, int], ...]]] = [[] for _ in self.order]
        if n == 0:
            row_sets = [(0,) * m]
        else:
            total = len(P) ** n
            uniq = set()
            for start in range(0, total, _CHUNK):
                R = _row_indices(P, _column_indices(len(P), n, start, min(total, start + _CHUNK)))
                uniq.update(map(tuple, R.tolist()))
            row_sets = sorted(uniq)
        for r in row_sets:
            p = max(pos[(i, r[i])] for i in range(m))
            i0 = self.order[p][0]
            parts = tuple((self.offsets[c] + r[c], radix[c]) for c in range(m) if c != i0)
            self.checks[p].append(parts)

        self.full = [(1 << k) - 1 for k in sizes]
        self.fixed = {}
        for (i, idx), v in (fixed or {}).items():
            if not (0 <= i < m and 0 <= idx < self.lens[i] and 0 <= v < sizes[i]):
                raise ArgumentError(f"fixed entry {(i, idx)} -> {v} out of range")
            self.fixed[pos[(i, idx)]] = 1 << v

    def _domain(self, p: int, vals: list[int]) -> list[int]:
        i = self.order[p][0]
        bits = self.fixed.get(p, self.full[i])
        allowed = self.allowed[i]
        for parts in self.checks[p]:
            code = 0
            for fi, w in parts:
                code += vals[fi] * w
            bits &= allowed[code]
            if not bits:
                return []
        return [v for v in range(self.P.sizes[i] - 1, -1, -1) if bits >> v & 1]

    def run(self, budget: int = DEFAULT_BUDGET, depth: int | None = None) -> Iterator[list[int]]:
        """Yield the flat value vector of every consistent assignment to the first ``depth`` variables."""
        V = len(self.order) if depth is None else depth
        vals = [0] * sum(self.lens)
        if V == 0:
            yield vals
            return
        flat = self.flat
        cands: list[list[int]] = [[] for _ in range(V)]
        cands[0] = self._domain(0, vals)
        p, assignments = 0, 0
        while p >= 0:
            c = cands[p]
            if not c:
                p -= 1
                continue
            assignments += 1
            if assignments > budget:
                raise BudgetExceededError(budget, assignments - 1)
            vals[flat[p]] = c.pop()
            if p == V - 1:
                yield vals
                continue
            p += 1
            cands[p] = self._domain(p, vals)

    def split(self, vals: list[int]) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(vals[o:o + L]) for o, L in zip(self.offsets, self.lens))


def _partition_worker(args):
    P, n, fixed, budget = args
    search = _Search(P, n, fixed)
    return [search.split(v) for v in search.run(budget)]


def enumerate_raw(
    P: Predicate,
    n: int,
    budget: int = DEFAULT_BUDGET,
    fixed: dict[tuple[int, int], int] | None = None,
    workers: int = 1,
) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Like :func:`enumerate_polymorphisms` but yields raw table tuples."""
    if n < 0:
        raise ArgumentError("arity must be >= 0")
    search = _Search(P, n, fixed)
    if workers <= 1:
        for vals in search.run(budget):
            yield search.split(vals)
        return
    # Partition on a prefix of the variable order; prefixes come out in DFS
    # order, so concatenating the per-prefix results keeps the serial order.
    depth = min(len(search.order), 1)
    prefixes = []
    while depth < len(search.order):
        prefixes = [list(v) for v in search.run(budget, depth)]
        if len(prefixes) >= 4 * workers:
            break
        depth += 1
    if not prefixes:
        yield from enumerate_raw(P, n, budget, fixed, 1)
        return
    jobs = []
    for vals in prefixes:
        pinned = dict(fixed or {})
        for p in range(depth):
            i, idx = search.order[p]
            pinned[(i, idx)] = vals[search.flat[p]]
        jobs.append((P, n, pinned, budget))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for chunk in pool.map(_partition_worker, jobs):
            yield from chunk


def enumerate_polymorphisms(
    P: Predicate,
    n: int,
    budget: int = DEFAULT_BUDGET,
    fixed: dict[tuple[int, int], int] | None = None,
    workers: int = 1,
) -> Iterator[PolymorphismTuple]:
    """Every n-ary polymorphism of P exactly once, in a deterministic order.

    The order is lexicographic in the interleaved entry vector
    ``(f_0[0], f_1[0], ..., f_{m-1}[0], f_0[1], ...)``. ``fixed`` pins
    ``(coordinate, table index) -> value`` before the search starts. Running
    out of ``budget`` (counted in entry assignments) raises
    :class:`BudgetExceededError`; nothing is silently truncated.
    """
    for raw in enumerate_raw(P, n, budget, fixed, workers):
        yield PolymorphismTuple._raw(P.sizes, n, raw)


def collect_polymorphisms(P: Predicate, n: int, budget: int = DEFAULT_BUDGET, **kw) -> list[PolymorphismTuple]:
    """List version of :func:`enumerate_polymorphisms`; a budget error carries the partial list."""
    out = []
    try:
        for fs in enumerate_polymorphisms(P, n, budget, **kw):
            out.append(fs)
    except BudgetExceededError as exc:
        raise BudgetExceededError(exc.budget, exc.assignments, out) from None
    return out


# -- unpruned oracle ---------------------------------------------------------

SCAN_LIMIT = 5 * 10 ** 8


def scan_polymorphisms(P: Predicate, n: int) -> set[tuple[tuple[int, ...], ...]]:
    """Test every tuple of the full candidate space; returns raw table tuples.

    No pruning: the space ``prod_i k_i**(k_i**n)`` is materialized in chunks
    over the first coordinate and every tuple is evaluated on every matrix.
    """
    sizes = P.sizes
    tables = [all_tables(k, n) for k in sizes]
    cols = _column_indices(len(P), n, 0, len(P) ** n)
    R = _row_indices(P, cols) if n else np.zeros((1, P.m), dtype=np.int64)
    M = R.shape[0]
    space = prod(len(t) for t in tables)
    if space * M > SCAN_LIMIT * 64:
        raise CapabilityError(f"unpruned scan of {space} tuples x {M} matrices is too large")
    outs = [t[:, R[:, i]] * P.signature.radix[i] for i, t in enumerate(tables)]
    rest_shape = tuple(len(t) for t in tables[1:])
    found = set()
    for t0 in range(len(tables[0])):
        codes = outs[0][t0][None, :]
        for o in outs[1:]:
            codes = (codes[:, None, :] + o[None, :, :]).reshape(-1, M)
        ok = np.flatnonzero(P.mask[codes].all(axis=1))
        if not len(ok):
            continue
        rest = np.unravel_index(ok, rest_shape) if rest_shape else ()
        for pos in range(len(ok)):
            idxs = (t0,) + tuple(int(r[pos]) for r in rest)
            found.add(tuple(tuple(int(v) for v in tables[i][t]) for i, t in enumerate(idxs)))
    return found


# -- classification ----------------------------------------------------------

@dataclass(frozen=True)
class Dictatorial:
    j: int
    phi: tuple[tuple[int, ...], ...]

    def to_dict(self) -> dict:
        return {"type": "dictatorial", "j": self.j, "phi": [list(p) for p in self.phi]}


@dataclass(frozen=True)
class CertificateType:
    rho: Certificate

    def to_dict(self) -> dict:
        return {"type": "certificate", "rho": self.rho.to_dict()}


@dataclass(frozen=True)
class TypeVerdict:
    """All witnesses for one polymorphism; dictatorial ones come first."""

    witnesses: tuple[Dictatorial | CertificateType, ...] = ()

    @property
    def dictatorial(self) -> tuple[Dictatorial, ...]:
        return tuple(w for w in self.witnesses if isinstance(w, Dictatorial))

    @property
    def certificates(self) -> tuple[CertificateType, ...]:
        return tuple(w for w in self.witnesses if isinstance(w, CertificateType))

    @property
    def is_neither(self) -> bool:
        return not self.witnesses

    @property
    def kind(self) -> str:
        if self.dictatorial:
            return "dictatorial"
        if self.certificates:
            return "certificate"
        return "neither"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "witnesses": [w.to_dict() for w in self.witnesses]}


class _CertCache:
    def __init__(self, P: Predicate):
        self.P = P
        self.cache: dict[tuple[tuple[int, int], ...], bool] = {}
        self.free = {}

    def __call__(self, items: tuple[tuple[int, int], ...]) -> bool:
        hit = self.cache.get(items)
        if hit is None:
            need = prod(k for i, k in enumerate(self.P.sizes) if all(i != c for c, _ in items))
            got = sum(1 for y in self.P.tuples if all(y[c] == v for c, v in items))
            hit = self.cache[items] = got == need
        return hit


def _cert_cache(P: Predicate) -> _CertCache:
    cache = P.__dict__.get("_cert_cache")
    if cache is None:
        cache = _CertCache(P)
        P.__dict__["_cert_cache"] = cache
    return cache


def _constants(raw) -> tuple[tuple[int, int], ...]:
    return tuple((i, t[0]) for i, t in enumerate(raw) if t.count(t[0]) == len(t))


def is_certificate_type(P: Predicate, raw) -> bool:
    """The constant coordinates of ``raw``, with their values, form a certificate."""
    return _cert_cache(P)(_constants(raw))


def _phi_contains(Phi: PhiFamily, phis) -> bool:
    if Phi.explicit is not None:
        return phis in Phi.explicit
    return all(p in f for p, f in zip(phis, Phi.factors))


def classify_polymorphism(P: Predicate, Phi: PhiFamily, fs: PolymorphismTuple) -> TypeVerdict:
    """List every dictatorial witness and every inclusion-minimal certificate witness.

    ``fs`` is assumed to be a polymorphism of P; this is not re-checked.
    """
    _check_signature(P, fs)
    if Phi.sizes != P.sizes:
        raise SignatureMismatchError("Phi family and predicate have different signatures")
    raw = fs.raw
    witnesses: list = []
    for j in range(fs.n):
        phis = tuple(_section(k, fs.n, t, j) for k, t in zip(P.sizes, raw))
        if None not in phis and _phi_contains(Phi, phis):
            witnesses.append(Dictatorial(j, phis))
    consts = _constants(raw)
    cert = _cert_cache(P)
    if cert(consts):
        minimal: list[tuple] = []
        for size in range(len(consts) + 1):
            for sub in itertools.combinations(consts, size):
                if any(set(s) <= set(sub) for s in minimal):
                    continue
                if cert(sub):
                    minimal.append(sub)
        witnesses.extend(CertificateType(Certificate(dict(s))) for s in minimal)
    return TypeVerdict(tuple(witnesses))


def is_trivial_raw(P: Predicate, Phi: PhiFamily, n: int, raw) -> bool:
    """Fast boolean form of ``not classify_polymorphism(...).is_neither``."""
    consts = _constants(raw)
    if _cert_cache(P)(consts):
        return True
    sizes = P.sizes
    for j in range(n):
        phis = []
        for k, t in zip(sizes, raw):
            phi = _section(k, n, t, j)
            if phi is None:
                break
            phis.append(phi)
        else:
            if _phi_contains(Phi, tuple(phis)):
                return True
    return False


def is_common_projection(fs: PolymorphismTuple) -> int | None:
    """The j with ``f_i(x) = x_j`` for every i, if there is one."""
    for j in range(fs.n):
        if all(_section(t.k, t.n, t.table, j) == tuple(range(t.k)) for t in fs.tables):
            return j
    return None


def dictator_tuple(P: Predicate, n: int, j: int, phis) -> PolymorphismTuple:
    """The tuple ``f_i(x) = phi_i(x_j)``."""
    tables = []
    for k, phi in zip(P.sizes, phis):
        stride = k ** j
        tables.append(FunctionTable._raw(k, n, tuple(phi[(idx // stride) % k] for idx in range(k ** n))))
    return PolymorphismTuple(n, tuple(tables))
