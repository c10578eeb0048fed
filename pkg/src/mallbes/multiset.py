"""Finite multisets with a canonical, hashable representation."""

from __future__ import annotations

from collections import Counter
from itertools import product
from typing import Callable, Generic, Hashable, Iterable, Iterator, TypeVar

T = TypeVar("T", bound=Hashable)


def _key(item) -> str:
    return str(item)


class Multiset(Generic[T]):
    """Immutable multiset stored as a sorted tuple of ``(item, count)`` pairs.

    Items are ordered by their string form, so two multisets with the same
    multiplicities compare and hash equal regardless of construction order.
    """

    __slots__ = ("_items", "_hash", "_size")

    def __init__(self, items: Iterable[T] = ()):
        counts = Counter(items)
        self._items = tuple(sorted(counts.items(), key=lambda kv: _key(kv[0])))
        self._hash = hash(self._items)
        self._size = sum(counts.values())

    @classmethod
    def _from_counts(cls, counts: dict) -> Multiset[T]:
        ms = cls.__new__(cls)
        ms._items = tuple(sorted(((k, v) for k, v in counts.items() if v > 0),
                                 key=lambda kv: _key(kv[0])))
        ms._hash = hash(ms._items)
        ms._size = sum(v for _, v in ms._items)
        return ms

    # -- basic protocol -------------------------------------------------

    def __len__(self) -> int:
        return self._size

    def __iter__(self) -> Iterator[T]:
        for item, n in self._items:
            for _ in range(n):
                yield item

    def __contains__(self, item) -> bool:
        return any(k == item for k, _ in self._items)

    def __eq__(self, other) -> bool:
        return isinstance(other, Multiset) and self._items == other._items

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return "Multiset([" + ", ".join(map(repr, self)) + "])"

    def __str__(self) -> str:
        return ", ".join(map(str, self))

    def __bool__(self) -> bool:
        return self._size > 0

    # -- algebra --------------------------------------------------------

    def counts(self) -> dict:
        return dict(self._items)

    def count(self, item) -> int:
        for k, n in self._items:
            if k == item:
                return n
        return 0

    def distinct(self) -> tuple:
        return tuple(k for k, _ in self._items)

    def __add__(self, other: Multiset[T]) -> Multiset[T]:
        c = self.counts()
        for k, n in other._items:
            c[k] = c.get(k, 0) + n
        return Multiset._from_counts(c)

    def add(self, *items: T) -> Multiset[T]:
        return self + Multiset(items)

    def issubset(self, other: Multiset[T]) -> bool:
        oc = other.counts()
        return all(oc.get(k, 0) >= n for k, n in self._items)

    def __le__(self, other: Multiset[T]) -> bool:
        return self.issubset(other)

    def __sub__(self, other: Multiset[T]) -> Multiset[T]:
        """Difference; raises ``ValueError`` unless ``other`` is a submultiset."""
        c = self.counts()
        for k, n in other._items:
            if c.get(k, 0) < n:
                raise ValueError(f"{other!s} is not contained in {self!s}")
            c[k] -= n
        return Multiset._from_counts(c)

    def remove(self, *items: T) -> Multiset[T]:
        return self - Multiset(items)

    def map(self, fn: Callable[[T], object]) -> Multiset:
        return Multiset(fn(x) for x in self)

    def submultisets(self) -> Iterator[Multiset[T]]:
        """All submultisets, smallest multiplicities first, in a fixed order."""
        keys = [k for k, _ in self._items]
        ranges = [range(n + 1) for _, n in self._items]
        for choice in product(*ranges):
            yield Multiset._from_counts(dict(zip(keys, choice)))

    def splits(self) -> Iterator[tuple[Multiset[T], Multiset[T]]]:
        """Ordered pairs ``(A, B)`` with ``A + B == self``."""
        for part in self.submultisets():
            yield part, self - part


EMPTY: Multiset = Multiset()


def multisets_up_to(items: Iterable[T], size: int) -> list[Multiset[T]]:
    """Every multiset over ``items`` with at most ``size`` elements, by size."""
    pool = sorted(set(items), key=_key)
    out: list[Multiset[T]] = [Multiset()]
    frontier: list[tuple[Multiset[T], int]] = [(Multiset(), 0)]
    for _ in range(size):
        nxt = []
        for ms, start in frontier:
            for i in range(start, len(pool)):
                grown = ms.add(pool[i])
                out.append(grown)
                nxt.append((grown, i))
        frontier = nxt
    return out
