"""Unanimity, impossibility domains and the three unanimous witness constructions.

An impossibility domain (with respect to unanimity) is a predicate whose only
unanimous polymorphisms, at every arity, are the common projections
``f_0(x) = ... = f_{m-1}(x) = x_j``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import (
    DEFAULT_BUDGET,
    PolymorphismTuple,
    classify_polymorphism,
    enumerate_raw,
    is_common_projection,
    is_polymorphism,
)
from .errors import ArgumentError, CapabilityError, PreconditionError
from .functions import (
    DEFAULT_LATIN_K_MAX,
    FunctionTable,
    factorial_product,
    latin_square_check,
    lcm,
    permutation_order,
    rows,
)
from .phi import phi_all_permutations
from .predicate import Predicate, closed_under_setting
from .triviality import check_trivial_for_n, latin_square_polymorphisms

# largest table (entries per coordinate) a folded witness may have
DEFAULT_WITNESS_TABLE_LIMIT = 1 << 17
# exhaustive polymorphism check of a folded witness up to this many matrices
_EXHAUSTIVE_LIMIT = 1 << 22


def _diagonal_index(k: int, n: int) -> int:
    return sum(k ** j for j in range(n))


def is_unanimous(f: FunctionTable) -> bool:
    """``f(s, ..., s) = s`` for every symbol s."""
    step = _diagonal_index(f.k, f.n)
    return all(f.table[s * step] == s for s in range(f.k))


def is_supportive(f: FunctionTable) -> bool:
    """Every output is one of the input symbols."""
    k, n = f.k, f.n
    for idx, v in enumerate(f.table):
        x, present = idx, False
        for _ in range(n):
            if x % k == v:
                present = True
                break
            x //= k
        if not present:
            return False
    return True


def _is_unanimous_tuple(fs: PolymorphismTuple) -> bool:
    return all(is_unanimous(t) for t in fs.tables)


@dataclass
class UnanimityVerdict:
    is_impossibility_domain: bool
    witness: PolymorphismTuple | None = None
    arity: int = 2
    source: str | None = None
    # True when the verdict is backed by triviality at arity 1 (see decide_impossibility)
    certified: bool | None = None

    def to_dict(self) -> dict:
        return {
            "is_impossibility_domain": self.is_impossibility_domain,
            "arity": self.arity,
            "source": self.source,
            "certified": self.certified,
            "witness": None if self.witness is None else self.witness.to_dict(),
        }


def unanimity_pins(P: Predicate, n: int) -> dict[tuple[int, int], int]:
    """Table entries forced by unanimity: ``(i, s * (1 + k + ... + k**(n-1))) -> s``."""
    return {(i, s * _diagonal_index(k, n)): s for i, k in enumerate(P.sizes) for s in range(k)}


def check_impossibility_unanimity(
    P: Predicate, n: int = 2, budget: int = DEFAULT_BUDGET, workers: int = 1
) -> UnanimityVerdict:
    """Search the unanimous n-ary polymorphisms for one that is not a common projection."""
    if n < 1:
        raise ArgumentError("unanimity needs arity >= 1")
    for raw in enumerate_raw(P, n, budget, fixed=unanimity_pins(P, n), workers=workers):
        fs = PolymorphismTuple._raw(P.sizes, n, raw)
        if is_common_projection(fs) is None:
            return UnanimityVerdict(False, fs, n, f"arity-{n} search")
    return UnanimityVerdict(True, None, n, f"arity-{n} search")


# -- constructions -----------------------------------------------------------

def construct_witness_case1(P: Predicate, i0: int, sigma0: int) -> PolymorphismTuple:
    """Binary witness from closure under setting ``i0`` to ``sigma0``.

    Every coordinate copies its first argument, except ``i0`` which outputs
    ``sigma0`` whenever the second argument is ``sigma0``.
    """
    if not 0 <= i0 < P.m or not 0 <= sigma0 < P.sizes[i0]:
        raise ArgumentError(f"({i0}, {sigma0}) out of range")
    if not closed_under_setting(P, i0, sigma0):
        raise PreconditionError(f"predicate is not closed under setting coordinate {i0} to {sigma0}")
    tables = []
    for i, k in enumerate(P.sizes):
        if i == i0:
            tables.append(FunctionTable.from_callable(k, 2, lambda a, b: sigma0 if b == sigma0 else a))
        else:
            tables.append(FunctionTable.projection(k, 2, 0))
    return PolymorphismTuple(2, tuple(tables))


def _fold_table(f: FunctionTable, r: int) -> np.ndarray:
    k = f.k
    f2 = np.asarray(f.table, dtype=np.int64).reshape(k, k).T  # f2[a, s] = f(a, s)
    cur = np.asarray(f.table, dtype=np.int64)
    for _ in range(r - 1):
        # new[x1 + k * rest] = f(x1, cur[rest])
        cur = f2[:, cur].T.reshape(-1)
    return cur


def iterate_polymorphism(fs: PolymorphismTuple, r: int, table_limit: int = DEFAULT_WITNESS_TABLE_LIMIT) -> PolymorphismTuple:
    """The right fold ``f(x_1, f(x_2, ... f(x_r, x_{r+1})))`` of arity r + 1."""
    if fs.n != 2:
        raise ArgumentError(f"iteration needs arity 2, got {fs.n}")
    if r < 1:
        raise ArgumentError("r must be >= 1")
    for k in fs.sizes:
        if k ** (r + 1) > table_limit:
            raise CapabilityError(f"folded table of size {k}**{r + 1} exceeds the limit {table_limit}")
    tables = tuple(FunctionTable._raw(t.k, r + 1, tuple(_fold_table(t, r).tolist())) for t in fs.tables)
    return PolymorphismTuple(r + 1, tables)


def case3_exponent(fs: PolymorphismTuple, tight: bool = False) -> int:
    """``prod k_i!``, or with ``tight`` the lcm of the orders of all row permutations."""
    if not tight:
        return factorial_product(fs.sizes)
    orders = [permutation_order(FunctionTable._raw(t.k, 1, row)) for t in fs.tables for row in rows(t)]
    return lcm(orders)


def _fold_image_in_P(P: Predicate, fs: PolymorphismTuple, r: int) -> bool:
    """Exact test that every matrix output of the r-fold lands in P.

    The outputs of the (t+1)-fold on columns from P are ``{f(y, u)}`` with y in
    P and u an output of the t-fold, so the reachable set is built up layer by
    layer.
    """
    tuples = np.asarray(P.tuples, dtype=np.int64)
    radix = np.asarray(P.signature.radix, dtype=np.int64)
    tabs = [np.asarray(t.table, dtype=np.int64) for t in fs.tables]

    def apply(left: np.ndarray, right: np.ndarray) -> np.ndarray:
        a = np.repeat(left, len(right), axis=0)
        b = np.tile(right, (len(left), 1))
        out = np.empty_like(a)
        for i, k in enumerate(P.sizes):
            out[:, i] = tabs[i][a[:, i] + k * b[:, i]]
        return np.unique(out, axis=0)

    layer = apply(tuples, tuples)
    for _ in range(r - 1):
        if not P.mask[layer @ radix].all():
            return False
        layer = apply(tuples, layer)
    return bool(P.mask[layer @ radix].all())


@dataclass
class Case3Witness:
    fs: PolymorphismTuple
    r: int
    unanimous: bool
    polymorphism: bool
    non_dictatorial: bool
    verification: str

    @property
    def ok(self) -> bool:
        return self.unanimous and self.polymorphism and self.non_dictatorial


def construct_witness_case3(
    P: Predicate,
    fs: PolymorphismTuple,
    tight_exponent: bool = False,
    table_limit: int = DEFAULT_WITNESS_TABLE_LIMIT,
) -> Case3Witness:
    """Fold a Latin-square polymorphism until every diagonal permutation is the identity."""
    if fs.n != 2 or not all(latin_square_check(t) for t in fs.tables):
        raise PreconditionError("case 3 needs a tuple of Latin squares")
    if not is_polymorphism(P, fs):
        raise PreconditionError("the Latin-square tuple is not a polymorphism")
    r = case3_exponent(fs, tight_exponent)
    g = iterate_polymorphism(fs, r, table_limit)
    if len(P) ** (r + 1) <= _EXHAUSTIVE_LIMIT:
        poly, how = is_polymorphism(P, g), "exhaustive"
    else:
        poly, how = _fold_image_in_P(P, fs, r), "image-closure"
    non_dict = not classify_polymorphism(P, phi_all_permutations(P.sizes), g).dictatorial
    return Case3Witness(g, r, _is_unanimous_tuple(g), poly, non_dict, how)


# -- full decision -----------------------------------------------------------

def decide_impossibility(
    P: Predicate,
    budget: int = DEFAULT_BUDGET,
    latin_limit: int = DEFAULT_LATIN_K_MAX,
    tight_exponent: bool = False,
    table_limit: int = DEFAULT_WITNESS_TABLE_LIMIT,
    workers: int = 1,
) -> UnanimityVerdict:
    """Impossibility with respect to unanimity, over all arities.

    First look for an arity-2 witness; failing that, fold any Latin-square
    polymorphism into a unanimous one. When P is trivial at arity 1 for the
    family of all permutation tuples these two routes are exhaustive, and the
    verdict is marked ``certified``. Otherwise a positive verdict only says
    neither route found a witness.
    """
    P.require_non_degenerate()
    certified = check_trivial_for_n(P, phi_all_permutations(P.sizes), 1, budget).trivial
    verdict = check_impossibility_unanimity(P, 2, budget, workers)
    verdict.certified = certified
    if not verdict.is_impossibility_domain:
        return verdict
    for ls in latin_square_polymorphisms(P, latin_limit):
        w = construct_witness_case3(P, ls, tight_exponent, table_limit)
        if w.ok:
            return UnanimityVerdict(False, w.fs, w.fs.n, "latin-square fold", certified)
    return verdict


def verify_unanimous_witness(P: Predicate, fs: PolymorphismTuple) -> bool:
    """Unanimous, a polymorphism, and not a common projection (exhaustive check)."""
    return _is_unanimous_tuple(fs) and is_common_projection(fs) is None and is_polymorphism(P, fs)
