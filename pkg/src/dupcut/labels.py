"""Genome name tables and bitset-backed label sets."""

from __future__ import annotations

import re
from typing import Iterable, Iterator, Sequence

NAME_RE = re.compile(r"[A-Za-z0-9_.\-]+")


class LabelSet:
    """Immutable set of genome ids stored as the bits of a Python int.

    Membership, union, intersection and difference are single integer
    operations, which is what every cost function in the package leans on.
    """

    __slots__ = ("bits",)

    def __init__(self, bits: int = 0):
        if bits < 0:
            raise ValueError("LabelSet bits must be non-negative")
        object.__setattr__(self, "bits", int(bits))

    def __setattr__(self, name, value):
        raise AttributeError("LabelSet is immutable")

    @classmethod
    def of(cls, ids: Iterable[int]) -> "LabelSet":
        bits = 0
        for i in ids:
            if i < 0:
                raise ValueError(f"negative genome id {i}")
            bits |= 1 << i
        return cls(bits)

    def __contains__(self, gid: int) -> bool:
        return gid >= 0 and (self.bits >> gid) & 1 == 1

    def __iter__(self) -> Iterator[int]:
        bits = self.bits
        while bits:
            low = bits & -bits
            yield low.bit_length() - 1
            bits ^= low

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __bool__(self) -> bool:
        return self.bits != 0

    def __int__(self) -> int:
        return self.bits

    def __or__(self, other: "LabelSet") -> "LabelSet":
        return LabelSet(self.bits | other.bits)

    def __and__(self, other: "LabelSet") -> "LabelSet":
        return LabelSet(self.bits & other.bits)

    def __sub__(self, other: "LabelSet") -> "LabelSet":
        return LabelSet(self.bits & ~other.bits)

    def __xor__(self, other: "LabelSet") -> "LabelSet":
        return LabelSet(self.bits ^ other.bits)

    def __le__(self, other: "LabelSet") -> bool:
        return self.bits & ~other.bits == 0

    def __lt__(self, other: "LabelSet") -> bool:
        return self <= other and self.bits != other.bits

    def __eq__(self, other) -> bool:
        if isinstance(other, LabelSet):
            return self.bits == other.bits
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("LabelSet", self.bits))

    def isdisjoint(self, other: "LabelSet") -> bool:
        return self.bits & other.bits == 0

    def straddles(self, side: "LabelSet") -> bool:
        """True when this set meets both ``side`` and its complement."""
        return self.bits & side.bits != 0 and self.bits & ~side.bits != 0

    def __repr__(self) -> str:
        return f"LabelSet({sorted(self)})"


EMPTY = LabelSet(0)


class GenomeTable:
    """Ordered genome names with a dense ``name -> id`` index."""

    __slots__ = ("names", "index")

    def __init__(self, names: Sequence[str] = ()):
        self.names: list[str] = []
        self.index: dict[str, int] = {}
        for name in names:
            self.add(name)

    def add(self, name: str) -> int:
        if name in self.index:
            raise ValueError(f"duplicate genome name {name!r}")
        if not NAME_RE.fullmatch(name):
            raise ValueError(f"invalid genome name {name!r}")
        self.index[name] = len(self.names)
        self.names.append(name)
        return self.index[name]

    def intern(self, name: str) -> int:
        gid = self.index.get(name)
        return self.add(name) if gid is None else gid

    def __len__(self) -> int:
        return len(self.names)

    def __getitem__(self, gid: int) -> str:
        return self.names[gid]

    def __contains__(self, name: str) -> bool:
        return name in self.index

    def ids(self, names: Iterable[str]) -> LabelSet:
        try:
            return LabelSet.of(self.index[n] for n in names)
        except KeyError as exc:
            raise KeyError(f"unknown genome {exc.args[0]!r}") from None

    def names_of(self, labels: LabelSet) -> list[str]:
        """Names of ``labels`` sorted alphabetically."""
        return sorted(self.names[g] for g in labels)

    def by_name(self, labels: LabelSet) -> list[int]:
        """Ids of ``labels`` ordered by genome name."""
        return sorted(labels, key=self.names.__getitem__)

    def __eq__(self, other) -> bool:
        return isinstance(other, GenomeTable) and self.names == other.names

    def __repr__(self) -> str:
        return f"GenomeTable({self.names!r})"
