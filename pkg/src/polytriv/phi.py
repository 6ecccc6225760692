"""Families of unary tuples ``(phi_0, ..., phi_{m-1})`` defining allowed dictators."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import ArgumentError
from .functions import FunctionTable

Unary = tuple[int, ...]


@dataclass(frozen=True)
class PhiFamily:
    """Either a product family (one allowed set per coordinate) or an explicit member set.

    Members are tuples of raw unary tables; ``phi[i][a]`` is the image of ``a``.
    """

    sizes: tuple[int, ...]
    factors: tuple[frozenset[Unary], ...] | None = None
    explicit: frozenset[tuple[Unary, ...]] | None = None
    name: str = "custom"

    def __post_init__(self):
        if (self.factors is None) == (self.explicit is None):
            raise ArgumentError("give exactly one of factors or explicit members")
        for phis in self._raw_members():
            self._check_member(phis)

    def _check_member(self, phis):
        if len(phis) != len(self.sizes):
            raise ArgumentError(f"member {phis} has wrong length for m={len(self.sizes)}")
        for phi, k in zip(phis, self.sizes):
            if len(phi) != k or any(not 0 <= v < k for v in phi):
                raise ArgumentError(f"{phi} is not a unary map on range({k})")

    def _raw_members(self) -> Iterator[tuple[Unary, ...]]:
        if self.explicit is not None:
            yield from self.explicit
        else:
            # validate factors coordinate-wise without expanding the product
            for i, fac in enumerate(self.factors):
                for phi in fac:
                    if len(phi) != self.sizes[i] or any(not 0 <= v < self.sizes[i] for v in phi):
                        raise ArgumentError(f"{phi} is not a unary map on range({self.sizes[i]})")

    @classmethod
    def from_members(cls, members: Iterable[Sequence], name: str = "custom") -> "PhiFamily":
        raw = []
        for phis in members:
            raw.append(tuple(tuple(p.table) if isinstance(p, FunctionTable) else tuple(p) for p in phis))
        if not raw:
            raise ArgumentError("a Phi family needs at least one member")
        sizes = tuple(len(p) for p in raw[0])
        return cls(sizes, explicit=frozenset(raw), name=name)

    @property
    def m(self) -> int:
        return len(self.sizes)

    def __contains__(self, phis) -> bool:
        phis = tuple(tuple(p.table) if isinstance(p, FunctionTable) else tuple(p) for p in phis)
        if self.explicit is not None:
            return phis in self.explicit
        return len(phis) == self.m and all(p in f for p, f in zip(phis, self.factors))

    def members(self) -> Iterator[tuple[Unary, ...]]:
        if self.explicit is not None:
            yield from sorted(self.explicit)
        else:
            yield from itertools.product(*(sorted(f) for f in self.factors))

    def __len__(self) -> int:
        if self.explicit is not None:
            return len(self.explicit)
        out = 1
        for f in self.factors:
            out *= len(f)
        return out

    @cached_property
    def all_permutations(self) -> bool:
        """Derived: every phi_i of every member is a permutation."""
        def is_perm(phi):
            return len(set(phi)) == len(phi)
        if self.factors is not None:
            return all(is_perm(p) for f in self.factors for p in f)
        return all(is_perm(p) for phis in self.explicit for p in phis)

    def to_dict(self) -> dict:
        return {"name": self.name, "members": [[list(p) for p in phis] for phis in self.members()]}


def _identity(k):
    return tuple(range(k))


NEG = (1, 0)
ID2 = (0, 1)
CONST0 = (0, 0)
CONST1 = (1, 1)


def phi_identity(sizes: Sequence[int]) -> PhiFamily:
    """Only the identity tuple: dictators must be plain projections."""
    sizes = tuple(sizes)
    return PhiFamily(sizes, explicit=frozenset({tuple(_identity(k) for k in sizes)}), name="id")


def _binary_sizes(m: int) -> tuple[int, ...]:
    if m < 1:
        raise ArgumentError("m must be >= 1")
    return (2,) * m


def phi_negation(m: int) -> PhiFamily:
    """``{id, not}^m``: each coordinate may independently be negated."""
    return PhiFamily(_binary_sizes(m), factors=(frozenset({ID2, NEG}),) * m, name="neg")


def phi_uniform_negation(m: int) -> PhiFamily:
    """``{(id,...,id), (not,...,not)}``."""
    return PhiFamily(_binary_sizes(m), explicit=frozenset({(ID2,) * m, (NEG,) * m}), name="idneg-uniform")


def phi_const_id_neg(m: int) -> PhiFamily:
    """``{0, 1, id, not}^m``."""
    return PhiFamily(
        _binary_sizes(m), factors=(frozenset({CONST0, CONST1, ID2, NEG}),) * m, name="const-id-neg"
    )


def phi_all_permutations(sizes: Sequence[int]) -> PhiFamily:
    sizes = tuple(sizes)
    return PhiFamily(
        sizes,
        factors=tuple(frozenset(itertools.permutations(range(k))) for k in sizes),
        name="all-permutations",
    )


PHI_BUILDERS = {
    "id": lambda sizes: phi_identity(sizes),
    "neg": lambda sizes: phi_negation(len(sizes)),
    "idneg-uniform": lambda sizes: phi_uniform_negation(len(sizes)),
    "const-id-neg": lambda sizes: phi_const_id_neg(len(sizes)),
    "all-permutations": lambda sizes: phi_all_permutations(sizes),
}


def build_phi(name: str, sizes: Sequence[int]) -> PhiFamily:
    if name not in PHI_BUILDERS:
        raise ArgumentError(f"unknown Phi family {name!r}; choose from {sorted(PHI_BUILDERS)}")
    sizes = tuple(sizes)
    if name != "id" and name != "all-permutations" and any(k != 2 for k in sizes):
        raise ArgumentError(f"Phi family {name!r} is defined for binary signatures only")
    return PHI_BUILDERS[name](sizes)
