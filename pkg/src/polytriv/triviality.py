"""Deciding Phi-triviality and running the unary-to-binary reduction with its exceptional cases."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

from .engine import (
    DEFAULT_BUDGET,
    PolymorphismTuple,
    classify_polymorphism,
    enumerate_raw,
    is_polymorphism,
    is_trivial_raw,
)
from .errors import CapabilityError, PreconditionError
from .functions import (
    DEFAULT_LATIN_K_MAX,
    FunctionTable,
    columns,
    compose,
    enumerate_latin_squares,
    rows,
)
from .phi import PhiFamily, phi_all_permutations
from .predicate import Predicate, closed_under_setting

DEFAULT_ANDOR_LIMIT = 20


@dataclass
class TrivialityReport:
    trivial: bool
    checked_arity: int
    phi: str
    witnesses: list[PolymorphismTuple] = field(default_factory=list)
    census: dict[str, int] | None = None

    def to_dict(self) -> dict:
        return {
            "trivial": self.trivial,
            "checked_arity": self.checked_arity,
            "phi": self.phi,
            "witnesses": [w.to_dict() for w in self.witnesses],
            "census": self.census,
        }


def check_trivial_for_n(
    P: Predicate,
    Phi: PhiFamily,
    n: int,
    budget: int = DEFAULT_BUDGET,
    census: bool = False,
    workers: int = 1,
) -> TrivialityReport:
    """Classify every n-ary polymorphism; stop at the first one of neither type.

    With ``census=True`` a trivial verdict also counts the verdict kinds.
    """
    P.require_non_degenerate()
    counts: Counter[str] = Counter()
    for raw in enumerate_raw(P, n, budget, workers=workers):
        if not is_trivial_raw(P, Phi, n, raw):
            witness = PolymorphismTuple._raw(P.sizes, n, raw)
            return TrivialityReport(False, n, Phi.name, [witness])
        if census:
            counts[classify_polymorphism(P, Phi, PolymorphismTuple._raw(P.sizes, n, raw)).kind] += 1
    return TrivialityReport(True, n, Phi.name, [], dict(counts) if census else None)


def decide_trivial(P: Predicate, Phi: PhiFamily, budget: int = DEFAULT_BUDGET, **kw) -> TrivialityReport:
    """Phi-triviality for every arity, decided at arity 2."""
    return check_trivial_for_n(P, Phi, 2, budget, **kw)


# -- exceptional-case detectors ----------------------------------------------

def _and_or_table(k: int, choice: str) -> FunctionTable:
    if k > 2:
        return FunctionTable.projection(k, 2, 0)
    return FunctionTable(2, 2, (0, 0, 0, 1) if choice == "and" else (0, 1, 1, 1))


def find_and_or_polymorphism(P: Predicate, limit: int = DEFAULT_ANDOR_LIMIT) -> PolymorphismTuple | None:
    """The first verified non-dictatorial AND/OR polymorphism, trying AND before OR per coordinate."""
    P.require_non_degenerate()
    binary = [i for i, k in enumerate(P.sizes) if k == 2]
    if len(binary) > limit:
        raise CapabilityError(f"{len(binary)} binary coordinates exceeds the AND/OR search limit {limit}")
    perms = phi_all_permutations(P.sizes)
    for choice in itertools.product(("and", "or"), repeat=len(binary)):
        pick = dict(zip(binary, choice))
        fs = PolymorphismTuple(2, tuple(_and_or_table(k, pick.get(i, "")) for i, k in enumerate(P.sizes)))
        if is_polymorphism(P, fs) and not classify_polymorphism(P, perms, fs).dictatorial:
            return fs
    return None


def conforms(P: Predicate, Phi: PhiFamily, fs: PolymorphismTuple) -> bool:
    """Row and column sections at every y in P form members of Phi."""
    R = [rows(f) for f in fs]
    C = [columns(f) for f in fs]
    for y in P.tuples:
        if tuple(R[i][v] for i, v in enumerate(y)) not in Phi:
            return False
        if tuple(C[i][v] for i, v in enumerate(y)) not in Phi:
            return False
    return True


def latin_square_polymorphisms(P: Predicate, limit: int = DEFAULT_LATIN_K_MAX):
    """Every Latin-square polymorphism of P, in product order of the per-coordinate lists."""
    squares = [enumerate_latin_squares(k, limit) for k in P.sizes]
    for combo in itertools.product(*squares):
        fs = PolymorphismTuple(2, combo)
        if is_polymorphism(P, fs):
            yield fs


def find_latin_square_polymorphism(
    P: Predicate, Phi: PhiFamily | None, limit: int = DEFAULT_LATIN_K_MAX
) -> PolymorphismTuple | None:
    """First Latin-square polymorphism conforming to Phi (any, if Phi is None)."""
    for fs in latin_square_polymorphisms(P, limit):
        if Phi is None or conforms(P, Phi, fs):
            return fs
    return None


@dataclass
class ReductionReport:
    phi: str
    trivial_at_1: bool
    witness_at_1: PolymorphismTuple | None = None
    closed_settings: list[tuple[int, int]] = field(default_factory=list)
    and_or: PolymorphismTuple | None = None
    latin_square: PolymorphismTuple | None = None
    furthermore_witness: PolymorphismTuple | None = None
    furthermore_shape: str | None = None
    trivial_at_2: bool | None = None

    @property
    def any_case(self) -> bool:
        return bool(self.closed_settings) or self.and_or is not None or self.latin_square is not None

    def to_dict(self) -> dict:
        def opt(fs):
            return None if fs is None else fs.to_dict()
        return {
            "phi": self.phi,
            "trivial_at_1": self.trivial_at_1,
            "witness_at_1": opt(self.witness_at_1),
            "cases": {
                "closed_under_setting": [list(p) for p in self.closed_settings],
                "and_or": opt(self.and_or),
                "latin_square": opt(self.latin_square),
            },
            "furthermore_witness": opt(self.furthermore_witness),
            "furthermore_shape": self.furthermore_shape,
            "trivial_at_2": self.trivial_at_2,
        }


def unary_shape(fs: PolymorphismTuple) -> str | None:
    """'const-or-id' if every f_i is in {0, 1, x}; 'id-or-neg' if every f_i is in {x, not x}."""
    tabs = {t.table for t in fs.tables}
    if fs.n != 1 or any(t.k != 2 for t in fs.tables):
        return None
    if tabs <= {(0, 0), (1, 1), (0, 1)}:
        return "const-or-id"
    if tabs <= {(0, 1), (1, 0)}:
        return "id-or-neg"
    return None


def furthermore_witness(P: Predicate, Phi: PhiFamily, f: PolymorphismTuple) -> PolymorphismTuple:
    """From a unary polymorphism of neither type, one in {0,1,x}^m or in {x, not x}^m.

    ``g_i = f_i o f_i`` takes values in {0, 1, x}; if g is dictatorial then f
    itself lies in {x, not x}^m.
    """
    g = PolymorphismTuple(1, tuple(compose(t, t) for t in f.tables))
    if classify_polymorphism(P, Phi, g).is_neither:
        return g
    return f


def reduction_report(
    P: Predicate,
    Phi: PhiFamily,
    budget: int = DEFAULT_BUDGET,
    latin_limit: int = DEFAULT_LATIN_K_MAX,
    andor_limit: int = DEFAULT_ANDOR_LIMIT,
    check_n2: bool = False,
) -> ReductionReport:
    """Triviality at arity 1 plus the three exceptional-case detectors.

    Flags are descriptive; the arity-2 verdict is only filled in when
    ``check_n2`` asks for the direct check.
    """
    if not Phi.all_permutations:
        raise PreconditionError("the reduction needs a Phi of permutations; use decide_trivial instead")
    P.require_non_degenerate()
    at1 = check_trivial_for_n(P, Phi, 1, budget)
    report = ReductionReport(Phi.name, at1.trivial)
    if not at1.trivial:
        report.witness_at_1 = at1.witnesses[0]
        if P.signature.is_binary:
            w = furthermore_witness(P, Phi, report.witness_at_1)
            report.furthermore_witness = w
            report.furthermore_shape = unary_shape(w)
    else:
        report.closed_settings = [
            (i, s) for i, k in enumerate(P.sizes) for s in range(k) if closed_under_setting(P, i, s)
        ]
        report.and_or = find_and_or_polymorphism(P, andor_limit)
        report.latin_square = find_latin_square_polymorphism(P, Phi, latin_limit)
    if check_n2:
        report.trivial_at_2 = decide_trivial(P, Phi, budget).trivial
    return report
