"""Triviality and full polymorphism classification for symmetric binary predicates.

A symmetric predicate is given by ``m`` and its set ``W`` of allowed Hamming
weights. Families F_i over ``range(n)`` are read off a binary table as
``{S : f_i(indicator of S) = 1}``; with the package's index encoding the
indicator of S has index ``sum(1 << j for j in S)``, so a family is just the
set of table positions holding a 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .engine import PolymorphismTuple, enumerate_raw, is_certificate_type, is_trivial_raw, scan_polymorphisms
from .errors import ArgumentError, DegenerateInputError, SignatureMismatchError
from .functions import detect_affine, detect_and_of_subset, detect_or_of_subset, dual, _section
from .phi import phi_identity, phi_negation
from .predicate import symmetric_predicate, validate_non_degenerate


@dataclass(frozen=True)
class SymmetricFamily:
    tag: str
    w: int | None = None

    def __str__(self):
        return self.tag if self.w is None else f"{self.tag}({self.w})"


def _weights(m: int, W: Iterable[int]) -> frozenset[int]:
    W = frozenset(W)
    if any(not 0 <= w <= m for w in W):
        raise ArgumentError(f"weights must lie in [0, {m}]")
    return W


def _require_non_degenerate(m: int, W: frozenset[int]) -> None:
    report = validate_non_degenerate(symmetric_predicate(m, W))
    if not report.ok:
        raise DegenerateInputError(report)


def weight_mask(W: Iterable[int]) -> int:
    return sum(1 << w for w in set(W))


def non_degenerate_weight_sets(m: int) -> list[frozenset[int]]:
    """All W with a non-degenerate predicate, ordered by the bitmask of W."""
    out = []
    for mask in range(1 << (m + 1)):
        W = frozenset(w for w in range(m + 1) if mask >> w & 1)
        if validate_non_degenerate(symmetric_predicate(m, W)).ok:
            out.append(W)
    return out


def family_matches(m: int, W: Iterable[int]) -> list[SymmetricFamily]:
    """Every named family W belongs to; families overlap at boundary parameters."""
    W = _weights(m, W)
    full = range(m + 1)
    found = []
    if W == frozenset(w for w in full if w % 2 == 0):
        found.append(SymmetricFamily("EvenParity"))
    if W == frozenset(w for w in full if w % 2 == 1):
        found.append(SymmetricFamily("OddParity"))
    for w in range(1, m):
        if W == frozenset(range(w, m + 1)):
            found.append(SymmetricFamily("AtLeast", w))
    for w in range(2, m + 1):
        if W == frozenset({0}) | frozenset(range(w, m + 1)):
            found.append(SymmetricFamily("AtLeastPlusZero", w))
    for w in range(1, m):
        if W == frozenset(range(0, w + 1)):
            found.append(SymmetricFamily("AtMost", w))
    for w in range(0, m - 1):
        if W == frozenset(range(0, w + 1)) | {m}:
            found.append(SymmetricFamily("AtMostPlusOne", w))
    return found


def complement_closed_weights(m: int, W: Iterable[int]) -> bool:
    W = frozenset(W)
    return all((m - w) in W for w in W)


@dataclass(frozen=True)
class SymmetricClassification:
    families: tuple[SymmetricFamily, ...]
    phi_neg_trivial: bool
    phi_id_trivial: bool
    complement_closed: bool


def classify_symmetric(m: int, W: Iterable[int]) -> SymmetricClassification:
    """Triviality for both the negation family and the identity family, from the weight set alone."""
    W = _weights(m, W)
    _require_non_degenerate(m, W)
    listed = family_matches(m, W)
    neg_trivial = not listed
    cc = complement_closed_weights(m, W)
    tags = list(listed)
    if m == 2 and W == {1}:
        tags.append(SymmetricFamily("OddPair"))
    if W == {0, m}:
        tags.append(SymmetricFamily("Equality"))
    if not listed:
        tags.append(SymmetricFamily("TrivialComplementClosed" if cc else "TrivialGeneric"))
    return SymmetricClassification(tuple(tags), neg_trivial, neg_trivial and not cc, cc)


@dataclass(frozen=True)
class StructureDescriptor:
    """Which classification item governs the polymorphisms of (m, W), with its parameters.

    ``variant`` is ``"at_most"``/``"at_least"`` for item 4 and ``"and"``/``"or"``
    for item 5; ``b`` is the parity for item 3.
    """

    item: int
    m: int
    W: frozenset[int]
    variant: str | None = None
    w: int | None = None
    b: int | None = None
    complement_closed: bool = False

    def to_dict(self) -> dict:
        return {
            "item": self.item,
            "variant": self.variant,
            "w": self.w,
            "b": self.b,
            "complement_closed": self.complement_closed,
        }


def polymorphism_family(m: int, W: Iterable[int]) -> StructureDescriptor:
    """Apply the item guards in order 1..6 and return the first that fits.

    The at-most/at-least item is applied for m >= 2; for m = 2 it is the
    only item covering W = {0, 1} and W = {1, 2}.
    """
    W = _weights(m, W)
    _require_non_degenerate(m, W)
    full = range(m + 1)
    if m == 2 and W == {1}:
        return StructureDescriptor(1, m, W)
    if W == {0, m}:
        return StructureDescriptor(2, m, W)
    if m >= 3:
        for b in (0, 1):
            if W == frozenset(w for w in full if w % 2 == b):
                return StructureDescriptor(3, m, W, b=b)
    for w in range(1, m):
        if W == frozenset(range(0, w + 1)):
            return StructureDescriptor(4, m, W, variant="at_most", w=w)
        if W == frozenset(range(m - w, m + 1)):
            return StructureDescriptor(4, m, W, variant="at_least", w=w)
    for w in range(1, m - 1):
        if W == frozenset(range(0, w + 1)) | {m}:
            return StructureDescriptor(5, m, W, variant="and", w=w)
        if W == frozenset({0}) | frozenset(range(m - w, m + 1)):
            return StructureDescriptor(5, m, W, variant="or", w=w)
    return StructureDescriptor(6, m, W, complement_closed=complement_closed_weights(m, W))


def families_from_functions(fs: PolymorphismTuple) -> list[frozenset[int]]:
    """``F_i`` as a set of bitmasks ``S`` (bit j set iff j in S) with ``f_i(1_S) = 1``."""
    if any(t.k != 2 for t in fs.tables):
        raise ArgumentError("families are defined for binary tables only")
    return [frozenset(s for s, v in enumerate(t.table) if v) for t in fs.tables]


def check_kwise_intersecting(families: Sequence[Iterable[int]], k: int) -> bool:
    """Any k distinct families, one set from each: the sets share an element.

    Sets are bitmasks; a set may be given as an iterable of elements instead.
    """
    fams = [frozenset(_as_mask(s) for s in F) for F in families]
    if k < 1:
        raise ArgumentError("k must be >= 1")

    def ok(chosen, acc):
        if not chosen:
            return acc != 0
        first, rest = chosen[0], chosen[1:]
        return all(ok(rest, acc & s) for s in first)

    for combo in itertools.combinations(fams, k):
        if not ok(list(combo), -1):
            return False
    return True


def _as_mask(s) -> int:
    if isinstance(s, int):
        return s
    return sum(1 << j for j in s)


def check_structure(fs: PolymorphismTuple, d: StructureDescriptor) -> bool:
    """Does ``fs`` have the shape that item ``d.item`` prescribes for polymorphisms?"""
    if fs.m != d.m or any(t.k != 2 for t in fs.tables):
        raise SignatureMismatchError(f"expected {d.m} binary tables")
    tabs = [t.table for t in fs.tables]
    n = fs.n
    if d.item == 1:
        return dual(fs.tables[0]).table == tabs[1]
    if d.item == 2:
        return all(t == tabs[0] for t in tabs)
    if d.item == 3:
        forms = [detect_affine(t) for t in fs.tables]
        if any(f is None for f in forms) or len({J for J, _ in forms}) != 1:
            return False
        J = forms[0][0]
        parity = sum(b for _, b in forms) % 2
        return parity == ((len(J) + 1) * d.b) % 2
    if d.item == 4:
        if d.variant == "at_least":
            fs = PolymorphismTuple(n, tuple(dual(t) for t in fs.tables))
        return check_kwise_intersecting(families_from_functions(fs), d.w + 1)
    if d.item == 5:
        detect = detect_and_of_subset if d.variant == "and" else detect_or_of_subset
        const = 0 if d.variant == "and" else 1
        if all(t == tabs[0] for t in tabs) and detect(fs.tables[0]) is not None:
            return True
        return sum(1 for t in tabs if all(v == const for v in t)) >= d.m - d.w
    if d.item == 6:
        P = symmetric_predicate(d.m, d.W)
        # certificate type, or a common (possibly negated) dictator
        if is_certificate_type(P, tabs):
            return True
        if any(t != tabs[0] for t in tabs):
            return False
        allowed = {(0, 1), (1, 0)} if d.complement_closed else {(0, 1)}
        return any(_section(2, n, tabs[0], j) in allowed for j in range(n))
    raise ArgumentError(f"unknown item {d.item}")


# -- atlas sweep -------------------------------------------------------------

@dataclass
class AtlasRow:
    m: int
    W: frozenset[int]
    tags: tuple[str, ...]
    item: int
    neg_trivial: bool
    id_trivial: bool
    brute_neg_trivial: bool
    brute_id_trivial: bool
    counts: dict[int, int]
    scan_agrees: bool | None

    @property
    def mask(self) -> int:
        return weight_mask(self.W)

    @property
    def agrees(self) -> bool:
        same = (self.neg_trivial, self.id_trivial) == (self.brute_neg_trivial, self.brute_id_trivial)
        return same and self.scan_agrees is not False

    def record(self) -> dict:
        return {
            "m": self.m,
            "W_mask": self.mask,
            "W": ",".join(str(w) for w in sorted(self.W)),
            "tags": ";".join(self.tags),
            "item": self.item,
            "neg_trivial": int(self.neg_trivial),
            "id_trivial": int(self.id_trivial),
            "brute_neg_trivial": int(self.brute_neg_trivial),
            "brute_id_trivial": int(self.brute_id_trivial),
            **{f"count_n{n}": c for n, c in sorted(self.counts.items())},
            "scan": "-" if self.scan_agrees is None else int(self.scan_agrees),
            "agree": int(self.agrees),
        }


def atlas_row(m: int, W: Iterable[int], budget: int, max_count_arity: int = 2, scan_max_m: int = 4) -> AtlasRow:
    if max_count_arity < 2:
        raise ArgumentError("the atlas needs counts up to arity 2 for the triviality check")
    W = _weights(m, W)
    cls = classify_symmetric(m, W)
    P = symmetric_predicate(m, W)
    neg, ident = phi_negation(m), phi_identity((2,) * m)
    counts: dict[int, int] = {}
    brute_neg = brute_id = True
    scan_ok: bool | None = None
    for n in range(max_count_arity + 1):
        found = list(enumerate_raw(P, n, budget))
        counts[n] = len(found)
        if n == 2:
            # one pass classifies against both families; the identity family is the smaller one
            for raw in found:
                if brute_id and not is_trivial_raw(P, ident, n, raw):
                    brute_id = False
                    if not is_trivial_raw(P, neg, n, raw):
                        brute_neg = False
                        break
                elif not brute_id and not is_trivial_raw(P, neg, n, raw):
                    brute_neg = False
                    break
        if m <= scan_max_m and n <= 2:
            same = set(found) == scan_polymorphisms(P, n)
            scan_ok = same if scan_ok is None else scan_ok and same
    tags = tuple(str(f) for f in cls.families)
    return AtlasRow(m, W, tags, polymorphism_family(m, W).item, cls.phi_neg_trivial, cls.phi_id_trivial,
                    brute_neg, brute_id, counts, scan_ok)


def atlas(ms: Iterable[int], budget: int, scan_max_m: int = 4) -> list[AtlasRow]:
    """One row per non-degenerate (m, W), ordered by m then the bitmask of W."""
    return [atlas_row(m, W, budget, scan_max_m=scan_max_m) for m in ms for W in non_degenerate_weight_sets(m)]
