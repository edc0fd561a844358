"""Integer partitions: the index set for Schur functions.

Partitions are stored without zero parts, so ``Partition((2, 0))`` and
``Partition((2,))`` are the same value. Use :meth:`Partition.padded` when a
fixed-length sequence is needed.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


@dataclass(frozen=True, init=False)
class Partition:
    parts: tuple[int, ...] = ()

    def __init__(self, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        if any(p < 0 for p in parts):
            raise ValueError(f"negative part in {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"parts must be non-increasing, got {parts}")
        object.__setattr__(self, "parts", tuple(p for p in parts if p > 0))

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Parse the comma-separated form, e.g. ``"4,2,2"``; ``""`` and ``"0"`` are empty."""
        text = text.strip()
        if text in ("", "0", "()"):
            return cls()
        try:
            parts = [int(tok) for tok in text.strip("()").split(",") if tok.strip()]
        except ValueError:
            raise ValueError(f"cannot parse partition {text!r}") from None
        return cls(parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __getitem__(self, i: int) -> int:
        return self.parts[i]

    def __str__(self) -> str:
        return ",".join(map(str, self.parts))

    def __repr__(self) -> str:
        return f"Partition({self.parts})"

    @property
    def first(self) -> int:
        """Largest part, 0 for the empty partition."""
        return self.parts[0] if self.parts else 0

    def weight(self) -> int:
        return sum(self.parts)

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(sum(1 for p in self.parts if p >= j) for j in range(1, self.parts[0] + 1))

    def is_even(self) -> bool:
        return all(p % 2 == 0 for p in self.parts)

    def padded(self, n: int) -> tuple[int, ...]:
        if len(self.parts) > n:
            raise ValueError(f"{self} has more than {n} nonzero parts")
        return self.parts + (0,) * (n - len(self.parts))

    def scaled(self, c: int) -> "Partition":
        return Partition(c * p for p in self.parts)


def weight(lam: Partition) -> int:
    return lam.weight()


def conjugate(lam: Partition) -> Partition:
    return lam.conjugate()


def is_even(lam: Partition) -> bool:
    return lam.is_even()


def enumerate_partitions(max_weight: int, max_length: int, max_part: int) -> Iterator[Partition]:
    """Yield every partition with weight, length and largest part within the bounds.

    Order is decreasing lexicographic, so ``(3, 1)`` precedes ``(3,)`` and the
    empty partition comes last.
    """
    if min(max_weight, max_length, max_part) < 0:
        raise ValueError("bounds must be non-negative")

    def rec(w: int, length: int, cap: int) -> Iterator[tuple[int, ...]]:
        if length > 0:
            for first in range(min(cap, w), 0, -1):
                for tail in rec(w - first, length - 1, first):
                    yield (first,) + tail
        yield ()

    for parts in rec(max_weight, max_length, max_part):
        yield Partition(parts)


def partitions_of(n: int, max_length: int | None = None) -> Iterator[Partition]:
    """Partitions of exactly ``n``, decreasing lexicographic."""
    length = n if max_length is None else max_length
    return (p for p in enumerate_partitions(n, length, n) if p.weight() == n)


def hook(k: int, n: int) -> Partition:
    """The hook ``(k, 1^(n-k))``."""
    return Partition((k,) + (1,) * (n - k))


def hooks_of(n: int) -> Iterator[tuple[Partition, int]]:
    """Yield ``((k, 1^(n-k)), (-1)^(n-k))`` for k = n, n-1, ..., 1.

    These are the terms expressing the power sum t_n in Schur functions.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    for k in range(n, 0, -1):
        yield hook(k, n), (-1) ** (n - k)
