"""Finite predicates over per-coordinate alphabets.

A predicate is a set of m-tuples drawn from ``range(k_0) x ... x range(k_{m-1})``.
Coordinates are 0-based throughout the package, and alphabet symbols are the
integers ``0..k-1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import prod
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

import numpy as np

from .errors import ArgumentError, DegenerateInputError


@dataclass(frozen=True)
class Signature:
    sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(k) for k in self.sizes)
        if not sizes:
            raise ArgumentError("a signature needs at least one coordinate")
        if any(k < 2 for k in sizes):
            raise ArgumentError(f"alphabet sizes must be >= 2, got {sizes}")
        object.__setattr__(self, "sizes", sizes)

    @classmethod
    def binary(cls, m: int) -> "Signature":
        return cls((2,) * m)

    @property
    def m(self) -> int:
        return len(self.sizes)

    @property
    def is_binary(self) -> bool:
        return all(k == 2 for k in self.sizes)

    @cached_property
    def radix(self) -> tuple[int, ...]:
        """Mixed-radix weights; coordinate 0 is least significant."""
        out, acc = [], 1
        for k in self.sizes:
            out.append(acc)
            acc *= k
        return tuple(out)

    @property
    def volume(self) -> int:
        return prod(self.sizes)

    def encode(self, y: Sequence[int]) -> int:
        return sum(v * w for v, w in zip(y, self.radix))

    def cube(self) -> Iterator[tuple[int, ...]]:
        """All tuples of the full product, in lexicographic order."""
        return itertools.product(*(range(k) for k in self.sizes))

    def check_tuple(self, y: Sequence[int]) -> tuple[int, ...]:
        y = tuple(int(v) for v in y)
        if len(y) != self.m:
            raise ArgumentError(f"expected a {self.m}-tuple, got {y}")
        for i, (v, k) in enumerate(zip(y, self.sizes)):
            if not 0 <= v < k:
                raise ArgumentError(f"value {v} out of range at coordinate {i} (size {k})")
        return y


@dataclass(frozen=True)
class Predicate:
    """An explicit predicate P over a signature, stored as sorted tuples."""

    signature: Signature
    tuples: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        sig = self.signature
        if not isinstance(sig, Signature):
            sig = Signature(tuple(sig))
            object.__setattr__(self, "signature", sig)
        checked = {sig.check_tuple(y) for y in self.tuples}
        object.__setattr__(self, "tuples", tuple(sorted(checked)))

    @classmethod
    def from_tuples(cls, sizes: Sequence[int], tuples: Iterable[Sequence[int]]) -> "Predicate":
        return cls(Signature(tuple(sizes)), tuple(tuple(y) for y in tuples))

    @property
    def m(self) -> int:
        return self.signature.m

    @property
    def sizes(self) -> tuple[int, ...]:
        return self.signature.sizes

    def __len__(self) -> int:
        return len(self.tuples)

    def __iter__(self):
        return iter(self.tuples)

    def __contains__(self, y) -> bool:
        return tuple(y) in self._set

    @cached_property
    def _set(self) -> frozenset:
        return frozenset(self.tuples)

    @cached_property
    def mask(self) -> np.ndarray:
        """Boolean membership table indexed by the mixed-radix code."""
        mask = np.zeros(self.signature.volume, dtype=bool)
        for y in self.tuples:
            mask[self.signature.encode(y)] = True
        return mask

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.tuples, dtype=np.int64).reshape(len(self.tuples), self.m)

    def is_full(self) -> bool:
        return len(self.tuples) == self.signature.volume

    def complement_tuples(self) -> list[tuple[int, ...]]:
        return [y for y in self.signature.cube() if y not in self._set]

    def require_non_degenerate(self) -> None:
        report = validate_non_degenerate(self)
        if not report.ok:
            raise DegenerateInputError(report)

    def to_dict(self) -> dict:
        return {"m": self.m, "sizes": list(self.sizes), "tuples": [list(y) for y in self.tuples]}


class Violation(NamedTuple):
    clause: str  # "projection" or "dependence"
    coordinate: int
    value: int | None = None


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        if self.ok:
            return "ok"
        parts = []
        for v in self.violations:
            if v.clause == "projection":
                parts.append(f"value {v.value} never appears at coordinate {v.coordinate}")
            else:
                parts.append(f"predicate does not depend on coordinate {v.coordinate}")
        return "; ".join(parts)


def validate_non_degenerate(P: Predicate) -> ValidationReport:
    """Check full projections and dependence on every coordinate."""
    violations = []
    for i, k in enumerate(P.sizes):
        seen = {y[i] for y in P.tuples}
        for sigma in range(k):
            if sigma not in seen:
                violations.append(Violation("projection", i, sigma))
    members = P._set
    for i, k in enumerate(P.sizes):
        depends = any(
            set_coordinate(y, i, s, P.signature) not in members
            for y in P.tuples
            for s in range(k)
        )
        if not depends:
            violations.append(Violation("dependence", i))
    return ValidationReport(tuple(violations))


@dataclass(frozen=True)
class Certificate:
    """A partial assignment ``{coordinate: value}``."""

    entries: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "entries", dict(sorted((int(i), int(v)) for i, v in dict(self.entries).items())))

    def __hash__(self):
        return hash(tuple(self.entries.items()))

    @property
    def domain(self) -> tuple[int, ...]:
        return tuple(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def extends(self, other: "Certificate") -> bool:
        return all(self.entries.get(i) == v for i, v in other.entries.items())

    def check(self, signature: Signature) -> None:
        for i, v in self.entries.items():
            if not 0 <= i < signature.m:
                raise ArgumentError(f"certificate coordinate {i} out of range")
            if not 0 <= v < signature.sizes[i]:
                raise ArgumentError(f"certificate value {v} out of range at coordinate {i}")

    def to_dict(self) -> dict:
        return {str(i): v for i, v in self.entries.items()}


def is_certificate(P: Predicate, rho: Certificate | Mapping[int, int]) -> bool:
    """True iff every full tuple agreeing with ``rho`` lies in P."""
    if not isinstance(rho, Certificate):
        rho = Certificate(rho)
    rho.check(P.signature)
    return _count_agreeing(P, tuple(rho.entries.items())) == prod(
        k for i, k in enumerate(P.sizes) if i not in rho.entries
    )


def _count_agreeing(P: Predicate, items: tuple[tuple[int, int], ...]) -> int:
    return sum(1 for y in P.tuples if all(y[i] == v for i, v in items))


def set_coordinate(y: Sequence[int], i: int, sigma: int, signature: Signature | None = None) -> tuple[int, ...]:
    """Return ``y`` with position ``i`` replaced by ``sigma``."""
    y = tuple(y)
    if not 0 <= i < len(y):
        raise ArgumentError(f"coordinate {i} out of range for a {len(y)}-tuple")
    if sigma < 0 or (signature is not None and sigma >= signature.sizes[i]):
        raise ArgumentError(f"value {sigma} out of range at coordinate {i}")
    return y[:i] + (sigma,) + y[i + 1:]


def closed_under_setting(P: Predicate, i: int, sigma: int) -> bool:
    return all(set_coordinate(y, i, sigma, P.signature) in P._set for y in P.tuples)


class FoundCertificate(NamedTuple):
    certificate: Certificate
    minimal: bool


def enumerate_certificates(P: Predicate, max_domain_size: int) -> list[FoundCertificate]:
    """All certificates with at most ``max_domain_size`` fixed coordinates.

    Domains are listed in lexicographic order of their sorted coordinate
    tuples, values numerically within a domain.
    """
    if not 0 <= max_domain_size <= P.m:
        raise ArgumentError(f"max_domain_size must lie in [0, {P.m}]")
    domains = [
        d for size in range(max_domain_size + 1) for d in itertools.combinations(range(P.m), size)
    ]
    domains.sort()
    found = []
    for dom in domains:
        for values in itertools.product(*(range(P.sizes[i]) for i in dom)):
            if is_certificate(P, dict(zip(dom, values))):
                found.append(dict(zip(dom, values)))
    found_keys = {tuple(sorted(c.items())) for c in found}
    out = []
    for c in found:
        items = tuple(sorted(c.items()))
        minimal = not any(
            sub in found_keys
            for r in range(len(items))
            for sub in itertools.combinations(items, r)
        )
        out.append(FoundCertificate(Certificate(c), minimal))
    return out


def symmetric_predicate(m: int, weights: Iterable[int]) -> Predicate:
    """All binary m-tuples whose Hamming weight lies in ``weights``."""
    W = set(weights)
    if any(not 0 <= w <= m for w in W):
        raise ArgumentError(f"weights must lie in [0, {m}], got {sorted(W)}")
    sig = Signature.binary(m)
    return Predicate(sig, tuple(y for y in sig.cube() if sum(y) in W))


def nae_predicate() -> Predicate:
    return symmetric_predicate(3, {1, 2})


def equality_predicate(m: int, k: int = 2) -> Predicate:
    return Predicate(Signature((k,) * m), tuple((v,) * m for v in range(k)))


def weight_set(P: Predicate) -> frozenset[int] | None:
    """The Hamming-weight set of a binary symmetric predicate, else None."""
    if not P.signature.is_binary:
        return None
    W = frozenset(sum(y) for y in P.tuples)
    return W if symmetric_predicate(P.m, W) == P else None


def complement_closed(P: Predicate) -> bool:
    """True iff flipping every bit maps P to itself (binary predicates only)."""
    if not P.signature.is_binary:
        raise ArgumentError("complementation is defined for binary signatures only")
    return all(tuple(1 - v for v in y) in P._set for y in P.tuples)
