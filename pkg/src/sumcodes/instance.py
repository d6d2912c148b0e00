"""Instance documents: a group, a connection set and optionally a code.

JSON layout::

    {"name": "z4z4", "moduli": [4, 4],
     "S": [[0, 1], [1, 1], [1, 3], [3, 2]],
     "C": [[0, 1], [1, 2], [2, 3], [3, 0]],
     "notes": "..."}

For a cyclic group residues may also be written as bare integers.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Any, Optional

from .abelian import ElementSet, GroupSpec

__all__ = ["InstanceDocument", "InstanceError", "load", "loads", "dumps", "parse_group", "parse_set"]


class InstanceError(ValueError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class InstanceDocument:
    group: GroupSpec
    S: ElementSet
    C: Optional[ElementSet] = None
    name: Optional[str] = None
    notes: Optional[str] = None

    def to_dict(self) -> dict[str, Any]:
        doc: dict[str, Any] = {}
        if self.name is not None:
            doc["name"] = self.name
        doc["moduli"] = list(self.group.moduli)
        doc["S"] = [list(g) for g in self.S.elements()]
        if self.C is not None:
            doc["C"] = [list(g) for g in self.C.elements()]
        if self.notes is not None:
            doc["notes"] = self.notes
        return doc


def _residues(G: GroupSpec, field: str, raw: Any) -> ElementSet:
    if not isinstance(raw, list):
        raise InstanceError(field, "expected a list of residue tuples")
    seen = set()
    bits = 0
    for pos, item in enumerate(raw):
        where = f"{field}[{pos}]"
        if isinstance(item, bool):
            raise InstanceError(where, "expected integers")
        if isinstance(item, int):
            item = [item]
        if not isinstance(item, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in item):
            raise InstanceError(where, f"expected an integer array, got {item!r}")
        try:
            idx = G.encode(tuple(item))
        except ValueError as e:
            raise InstanceError(where, str(e)) from None
        if idx in seen:
            raise InstanceError(where, f"duplicate element {tuple(item)}")
        seen.add(idx)
        bits |= 1 << idx
    return ElementSet(G, bits)


def from_dict(doc: Any) -> InstanceDocument:
    if not isinstance(doc, dict):
        raise InstanceError("document", "expected a JSON object")
    unknown = set(doc) - {"name", "moduli", "S", "C", "notes"}
    if unknown:
        raise InstanceError(sorted(unknown)[0], "unknown field")
    if "moduli" not in doc:
        raise InstanceError("moduli", "missing")
    moduli = doc["moduli"]
    if not isinstance(moduli, list) or not moduli or not all(
        isinstance(m, int) and not isinstance(m, bool) for m in moduli
    ):
        raise InstanceError("moduli", "expected a nonempty list of integers")
    try:
        G = GroupSpec(tuple(moduli))
    except ValueError as e:
        raise InstanceError("moduli", str(e)) from None
    if "S" not in doc:
        raise InstanceError("S", "missing")
    S = _residues(G, "S", doc["S"])
    if not S:
        raise InstanceError("S", "connection set must be nonempty")
    C = _residues(G, "C", doc["C"]) if doc.get("C") is not None else None
    for key in ("name", "notes"):
        if doc.get(key) is not None and not isinstance(doc[key], str):
            raise InstanceError(key, "expected a string")
    return InstanceDocument(G, S, C, doc.get("name"), doc.get("notes"))


def loads(text: str) -> InstanceDocument:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceError("document", f"invalid JSON: {e}") from None
    return from_dict(doc)


def load(path: str) -> InstanceDocument:
    with open(path, encoding="utf-8") as f:
        return loads(f.read())


def dumps(inst: InstanceDocument) -> str:
    return json.dumps(inst.to_dict(), indent=2) + "\n"


def parse_group(text: str) -> GroupSpec:
    """``"4x4"`` or ``"6"`` -> GroupSpec."""
    try:
        moduli = tuple(int(p) for p in re.split(r"\s*[x×,]\s*", text.strip()))
    except ValueError:
        raise InstanceError("group", f"cannot parse {text!r}; expected e.g. 4x4") from None
    try:
        return GroupSpec(moduli)
    except ValueError as e:
        raise InstanceError("group", str(e)) from None


def parse_set(G: GroupSpec, text: str, field: str = "set") -> ElementSet:
    """``"(0,1),(1,1)"`` or, for a cyclic group, ``"1,3,5"``."""
    text = text.strip()
    try:
        if "(" in text:
            tuples = re.findall(r"\(([^()]*)\)", text)
            rest = re.sub(r"\(([^()]*)\)", "", text).replace(",", "").strip()
            if rest:
                raise ValueError
            items = [[int(x) for x in t.split(",")] for t in tuples]
        else:
            items = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InstanceError(field, f"cannot parse {text!r}") from None
    return _residues(G, field, items)
