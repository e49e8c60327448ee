"""Words in the triangle group generators x, y."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

_TOKEN = re.compile(r"([xy])(?:\^\(?(-?\d+)\)?)?")


def _sym(e: int, n: int | None) -> int:
    if not n:
        return e
    e %= n
    if e > n // 2:
        e -= n
    return e


@dataclass(frozen=True)
class Word:
    """Exponent-compressed word; exponents live in the symmetric range mod the generator order."""

    tokens: tuple[tuple[str, int], ...] = ()
    orders: tuple[int, int] | None = None

    @classmethod
    def from_tokens(cls, tokens: Iterable[tuple[str, int]], orders: tuple[int, int] | None = None) -> Word:
        out: list[tuple[str, int]] = []
        for base, e in tokens:
            if base not in ("x", "y"):
                raise ValueError(f"unknown generator {base!r}")
            n = None if orders is None else orders[0 if base == "x" else 1]
            if out and out[-1][0] == base:
                e = out.pop()[1] + e
            e = _sym(e, n)
            if e:
                out.append((base, e))
        return cls(tuple(out), orders)

    @classmethod
    def parse(cls, text: str, orders: tuple[int, int] | None = None) -> Word:
        text = text.strip()
        if text in ("", "1", "e"):
            return cls((), orders)
        toks = []
        pos = 0
        for m in _TOKEN.finditer(text.replace(" ", "")):
            if m.start() != pos:
                raise ValueError(f"cannot parse word {text!r}")
            toks.append((m.group(1), int(m.group(2) or 1)))
            pos = m.end()
        if pos != len(text.replace(" ", "")):
            raise ValueError(f"cannot parse word {text!r}")
        return cls.from_tokens(toks, orders)

    def __mul__(self, other: Word) -> Word:
        return Word.from_tokens(self.tokens + other.tokens, self.orders or other.orders)

    def inverse(self) -> Word:
        return Word.from_tokens(((b, -e) for b, e in reversed(self.tokens)), self.orders)

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.tokens)

    def letters(self) -> list[tuple[str, int]]:
        """Expanded letters as (base, +-1)."""
        out = []
        for b, e in self.tokens:
            out.extend([(b, 1 if e > 0 else -1)] * abs(e))
        return out

    def is_empty(self) -> bool:
        return not self.tokens

    def __str__(self) -> str:
        if not self.tokens:
            return "1"
        return " ".join(b if e == 1 else f"{b}^{e}" for b, e in self.tokens)


def letter(base: str, e: int = 1, orders: tuple[int, int] | None = None) -> Word:
    return Word.from_tokens([(base, e)], orders)
