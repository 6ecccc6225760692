"""JSON formats for predicates, polymorphism tuples and custom Phi families.

Predicate files hold ``{"m", "sizes", "tuples"}`` or the shorthand
``{"symmetric": {"m": 3, "weights": [1, 2]}}``. Tuple files hold
``{"n", "tables": [...]}`` where each table is ``{"k", "n", "table"}`` or a
name such as ``"and"`` or ``"id1"``. Phi files hold
``{"members": [[unary, ...], ...]}`` with each unary map a list of images.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .engine import PolymorphismTuple
from .errors import ArgumentError
from .functions import AND, OR, XNOR, XOR, FunctionTable
from .phi import PhiFamily
from .predicate import Predicate, symmetric_predicate


def dumps(obj: Any) -> str:
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _load(source) -> Any:
    if isinstance(source, (dict, list)):
        return source
    try:
        return json.loads(Path(source).read_text())
    except json.JSONDecodeError as exc:
        raise ArgumentError(f"{source}: not valid JSON ({exc.msg} at line {exc.lineno})") from None
    except OSError as exc:
        raise ArgumentError(f"{source}: {exc.strerror}") from None


def predicate_from_dict(data: dict) -> Predicate:
    if not isinstance(data, dict):
        raise ArgumentError("predicate document must be an object")
    try:
        if "symmetric" in data:
            sym = data["symmetric"]
            return symmetric_predicate(int(sym["m"]), [int(w) for w in sym["weights"]])
        sizes = [int(k) for k in data["sizes"]]
        if "m" in data and int(data["m"]) != len(sizes):
            raise ArgumentError(f"m={data['m']} disagrees with {len(sizes)} sizes")
        return Predicate.from_tuples(sizes, [[int(v) for v in y] for y in data["tuples"]])
    except (KeyError, TypeError) as exc:
        raise ArgumentError(f"malformed predicate document: {exc!r}") from None


def load_predicate(source) -> Predicate:
    return predicate_from_dict(_load(source))


def parse_weights(text: str) -> tuple[int, list[int]]:
    """Inline ``M:W1,W2,...`` symmetric shorthand, e.g. ``3:1,2``."""
    try:
        m, _, ws = text.partition(":")
        return int(m), [int(w) for w in ws.split(",") if w.strip()]
    except ValueError:
        raise ArgumentError(f"cannot parse symmetric shorthand {text!r}; expected M:W1,W2,...") from None


def _named_table(name: str, k: int, n: int) -> FunctionTable:
    name = name.lower()
    if name.startswith("id") and name[2:].isdigit():
        return FunctionTable.projection(k, n, int(name[2:]) - 1)
    if name.startswith("const") and name[5:].isdigit():
        return FunctionTable.constant(k, n, int(name[5:]))
    binary = {"and": AND, "or": OR, "xor": XOR, "xnor": XNOR}
    if name in binary:
        if k != 2:
            raise ArgumentError(f"{name!r} needs a binary alphabet")
        return binary[name](n)
    if name == "not":
        if k != 2 or n != 1:
            raise ArgumentError("'not' is the unary binary negation")
        return FunctionTable(2, 1, (1, 0))
    raise ArgumentError(f"unknown table name {name!r}")


def tuple_from_dict(data: dict, sizes=None) -> PolymorphismTuple:
    """Read a tuple document; named tables need ``sizes`` (default binary) and ``n``."""
    if not isinstance(data, dict) or "tables" not in data:
        raise ArgumentError("tuple document must be an object with 'tables'")
    entries = data["tables"]
    if not isinstance(entries, list) or not entries:
        raise ArgumentError("'tables' must be a non-empty list")
    sizes = list(sizes) if sizes is not None else [2] * len(entries)
    if len(sizes) != len(entries):
        raise ArgumentError(f"{len(entries)} tables for a signature of length {len(sizes)}")
    n = data.get("n")
    tables = []
    try:
        for k, entry in zip(sizes, entries):
            if isinstance(entry, str):
                if n is None:
                    raise ArgumentError("named tables need 'n'")
                tables.append(_named_table(entry, k, int(n)))
            else:
                tables.append(FunctionTable.from_dict(entry))
    except (KeyError, TypeError) as exc:
        raise ArgumentError(f"malformed table: {exc!r}") from None
    arity = int(n) if n is not None else tables[0].n
    return PolymorphismTuple(arity, tuple(tables))


def load_tuple(source, sizes=None) -> PolymorphismTuple:
    return tuple_from_dict(_load(source), sizes)


def load_phi(source, name: str | None = None) -> PhiFamily:
    data = _load(source)
    try:
        members = data["members"] if isinstance(data, dict) else data
        label = name or (data.get("name") if isinstance(data, dict) else None) or "custom"
        return PhiFamily.from_members(([list(p) for p in phis] for phis in members), name=label)
    except (KeyError, TypeError) as exc:
        raise ArgumentError(f"malformed Phi document: {exc!r}") from None
