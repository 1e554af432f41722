"""Braid words: finite sequences of signed generator letters.

A letter is ``(index, sign)`` with a 1-based generator index and sign ``+1``
or ``-1``. Words carry no reference to a gate set; they are evaluated against
one with :func:`mat`. The product is taken left to right, so the first letter
is the leftmost factor.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import groupby
from typing import Iterable

import numpy as np

from .gatesets import GateSet, code_letter, letter_code

END = None


@dataclass(frozen=True)
class BraidWord:
    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        letters = tuple((int(k), int(s)) for k, s in self.letters)
        for k, s in letters:
            if k < 1 or s not in (1, -1):
                raise ValueError(f"invalid letter {(k, s)}")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def from_codes(cls, codes: Iterable[int]) -> "BraidWord":
        return cls(tuple(code_letter(int(c)) for c in codes))

    def codes(self) -> list[int]:
        return [letter_code(k, s) for k, s in self.letters]

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __add__(self, other: "BraidWord") -> "BraidWord":
        return concat(self, other)

    def __str__(self) -> str:
        return format_word(self)


def length(b: BraidWord) -> int:
    return len(b.letters)


def subbraid(b: BraidWord, a: int, z: int | None = END) -> BraidWord:
    """Inclusive 1-based slice ``b[a..z]``; ``z=END`` runs to the end.

    ``a == z + 1`` gives the empty word.
    """
    n = len(b)
    if z is END:
        z = n
    if a < 1 or z > n or a > z + 1:
        raise IndexError(f"sub-braid [{a}, {z}] out of range for a word of length {n}")
    return BraidWord(b.letters[a - 1 : z])


def concat(b1: BraidWord, b2: BraidWord) -> BraidWord:
    return BraidWord(b1.letters + b2.letters)


def _check_indices(b: BraidWord, gs: GateSet) -> None:
    for pos, (k, _) in enumerate(b.letters, start=1):
        if k > gs.generator_count:
            raise IndexError(
                f"letter {pos} uses generator {k}, but {gs.name!r} has only {gs.generator_count}"
            )


def mat(b: BraidWord, gs: GateSet) -> np.ndarray:
    """Matrix of a word: product of its letters, first letter leftmost."""
    _check_indices(b, gs)
    return product_of_codes(b.codes(), gs)


def product_of_codes(codes, gs: GateSet) -> np.ndarray:
    table = gs.letter_matrices
    out = np.eye(gs.dim, dtype=np.complex128)
    for c in codes:
        out = out @ table[c]
    return out


def prefix_products(codes, gs: GateSet) -> np.ndarray:
    """Stacked products of the first ``k`` letters, ``k = 0..len``.

    Computed as a log-depth scan of batched matrix products; agrees with
    :func:`product_of_codes` to rounding.
    """
    n = len(codes)
    out = np.empty((n + 1, gs.dim, gs.dim), dtype=np.complex128)
    out[0] = np.eye(gs.dim)
    if n:
        acc = gs.letter_matrices[np.asarray(codes, dtype=np.intp)]
        step = 1
        while step < n:
            acc[step:] = acc[:-step] @ acc[step:]
            step *= 2
        out[1:] = acc
    return out


def free_reduce(b: BraidWord) -> BraidWord:
    """Delete adjacent generator/inverse pairs until none remain."""
    stack: list[tuple[int, int]] = []
    for k, s in b.letters:
        if stack and stack[-1] == (k, -s):
            stack.pop()
        else:
            stack.append((k, s))
    return BraidWord(tuple(stack))


def inverse(b: BraidWord) -> BraidWord:
    return BraidWord(tuple((k, -s) for k, s in reversed(b.letters)))


class ParseError(ValueError):
    def __init__(self, message: str, position: int, token: str):
        super().__init__(f"token {position} ({token!r}): {message}")
        self.position = position
        self.token = token


_TOKEN = re.compile(r"s(\d+)(?:\^([+-]?\d+))?")


def parse_word(text: str, gs: GateSet | None = None) -> BraidWord:
    """Parse ``s<k>`` / ``s<k>^<e>`` tokens separated by whitespace.

    ``s2^-2`` expands to two ``(2, -1)`` letters. Positions in errors are
    1-based token numbers.
    """
    letters: list[tuple[int, int]] = []
    for pos, tok in enumerate(text.split(), start=1):
        m = _TOKEN.fullmatch(tok)
        if m is None:
            raise ParseError("expected s<k> or s<k>^<e>", pos, tok)
        k = int(m.group(1))
        e = int(m.group(2)) if m.group(2) is not None else 1
        if k < 1:
            raise ParseError("generator index must be at least 1", pos, tok)
        if gs is not None and k > gs.generator_count:
            raise ParseError(
                f"generator index {k} out of range for {gs.name!r} (1..{gs.generator_count})", pos, tok
            )
        if e == 0:
            raise ParseError("exponent must be nonzero", pos, tok)
        letters.extend([(k, 1 if e > 0 else -1)] * abs(e))
    return BraidWord(tuple(letters))


def format_word(b: BraidWord) -> str:
    tokens = []
    for (k, s), run in groupby(b.letters):
        e = s * len(list(run))
        tokens.append(f"s{k}" if e == 1 else f"s{k}^{e}")
    return " ".join(tokens)


_STRAND_COLORS = ("#DAA520", "#D62728", "#1F3A93", "#2CA02C", "#9467BD", "#8C564B", "#E377C2")


def render_diagram(b: BraidWord, strand_count: int) -> str:
    """SVG drawing with horizontal strands and one crossing column per letter.

    Letter ``(k, +1)`` takes the strand at position ``k`` over the one at
    ``k + 1``; ``(k, -1)`` takes it under. Colours follow the particles.
    """
    if strand_count < 2:
        raise ValueError("a braid diagram needs at least two strands")
    for pos, (k, _) in enumerate(b.letters, start=1):
        if k >= strand_count:
            raise IndexError(f"letter {pos} crosses strands {k},{k + 1} but only {strand_count} strands exist")

    col_w, gap, margin, stroke = 40, 30, 20, 4
    ncols = max(len(b), 1)
    width = 2 * margin + ncols * col_w
    height = 2 * margin + (strand_count - 1) * gap
    y = lambda p: margin + (p - 1) * gap  # noqa: E731
    color = lambda particle: _STRAND_COLORS[particle % len(_STRAND_COLORS)]  # noqa: E731

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    if not b.letters:
        for p in range(1, strand_count + 1):
            out.append(
                f'<line class="strand" x1="{margin}" y1="{y(p)}" x2="{width - margin}" y2="{y(p)}" '
                f'stroke="{color(p - 1)}" stroke-width="{stroke}"/>'
            )
        out.append("</svg>")
        return "\n".join(out) + "\n"

    particle_at = list(range(strand_count))
    for col, (k, s) in enumerate(b.letters):
        x0 = margin + col * col_w
        x1 = x0 + col_w
        xm = (x0 + x1) / 2
        label = format_word(BraidWord(((k, s),)))
        out.append(f'<g class="crossing" data-column="{col + 1}" data-letter="{label}">')
        for p in range(1, strand_count + 1):
            if p not in (k, k + 1):
                out.append(
                    f'<line x1="{x0}" y1="{y(p)}" x2="{x1}" y2="{y(p)}" '
                    f'stroke="{color(particle_at[p - 1])}" stroke-width="{stroke}"/>'
                )

        def curve(src: int, dst: int) -> str:
            return f"M {x0} {y(src)} C {xm} {y(src)}, {xm} {y(dst)}, {x1} {y(dst)}"

        top, bottom = particle_at[k - 1], particle_at[k]
        # the strand starting at position k is "over" for a positive letter
        over = (curve(k, k + 1), color(top))
        under = (curve(k + 1, k), color(bottom))
        if s < 0:
            over, under = under, over
        out.append(f'<path d="{under[0]}" fill="none" stroke="{under[1]}" stroke-width="{stroke}"/>')
        out.append(f'<path d="{over[0]}" fill="none" stroke="white" stroke-width="{stroke * 3}"/>')
        out.append(f'<path d="{over[0]}" fill="none" stroke="{over[1]}" stroke-width="{stroke}"/>')
        out.append("</g>")
        particle_at[k - 1], particle_at[k] = bottom, top
    out.append("</svg>")
    return "\n".join(out) + "\n"
