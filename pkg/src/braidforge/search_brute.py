"""Exhaustive search for the optimal error at each maximum braid length.

Words are enumerated shortest first by iterative deepening. A letter that
would cancel its predecessor is never emitted, so each length ``l`` visits
``A * (A - 1) ** (l - 1)`` words for an alphabet of size ``A``. Within one
length, words come out in lexicographic code order and ties keep the first
word found, so results do not depend on chunking or worker count.
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .algebra import batch_frobenius, frobenius_norm
from .braidword import BraidWord, format_word
from .gatesets import GateSet, TargetGate

CHUNK = 1 << 18


@dataclass(frozen=True)
class FrontierPoint:
    max_length: int
    min_error: float
    witness: BraidWord


def count_reduced_words(alphabet_size: int, length: int) -> int:
    if alphabet_size < 2 or alphabet_size % 2:
        raise ValueError("alphabet size must be even and at least 2")
    if length < 0:
        raise ValueError("length must be nonnegative")
    if length == 0:
        return 1
    return alphabet_size * (alphabet_size - 1) ** (length - 1)


def _successors(alphabet_size: int) -> np.ndarray:
    # row c lists the letters allowed after letter c, ascending; c ^ 1 is c's inverse
    return np.array(
        [[n for n in range(alphabet_size) if n != (c ^ 1)] for c in range(alphabet_size)],
        dtype=np.int64,
    )


def _expand(mats, words, table, succ):
    """All one-letter extensions, parent-major and in ascending letter order."""
    nxt = succ[words[:, -1]].reshape(-1)
    parents = np.repeat(np.arange(len(words)), succ.shape[1])
    new_mats = mats[parents] @ table[nxt]
    new_words = np.concatenate([words[parents], nxt[:, None]], axis=1)
    return new_mats, new_words


def iter_words(gs: GateSet, length: int, first: int | None = None, chunk: int = CHUNK):
    """Yield ``(matrices, codes)`` batches covering every reduced word of ``length``.

    Batches arrive in lexicographic order. ``first`` restricts the walk to
    words starting with that letter code.
    """
    if length < 1:
        raise ValueError("length must be at least 1")
    table = gs.letter_matrices
    succ = _successors(gs.alphabet_size)
    firsts = np.arange(gs.alphabet_size) if first is None else np.array([first])
    mats = table[firsts].copy()
    words = firsts[:, None].astype(np.int64)
    yield from _walk(mats, words, length - 1, table, succ, max(chunk, succ.shape[1]))


def _walk(mats, words, remaining, table, succ, chunk):
    if remaining == 0:
        yield mats, words
        return
    fan = succ.shape[1]
    step = max(1, chunk // fan)
    for lo in range(0, len(words), step):
        m, w = _expand(mats[lo : lo + step], words[lo : lo + step], table, succ)
        yield from _walk(m, w, remaining - 1, table, succ, chunk)


def _best_of_length(gs: GateSet, target: np.ndarray, length: int, first: int | None):
    best_err, best_codes = np.inf, None
    for mats, words in iter_words(gs, length, first):
        errs = batch_frobenius(mats - target)
        i = int(np.argmin(errs))
        if errs[i] < best_err:
            best_err, best_codes = float(errs[i]), words[i].tolist()
    return best_err, best_codes


def _best_of_length_task(args):
    gs, target, length, first = args
    return _best_of_length(gs, target, length, first)


def default_workers() -> int:
    env = os.environ.get("BRAIDFORGE_THREADS")
    if env:
        return max(1, int(env))
    return 1


def exhaustive_search(
    gs: GateSet,
    target: TargetGate,
    max_length: int,
    stop_error: float | None = None,
    workers: int | None = None,
) -> list[FrontierPoint]:
    """Frontier of minimum error over all words of length at most ``l``.

    Returns one point per length ``1..max_length``; the running best is
    seeded with the empty word, and a longer word only replaces it when
    strictly better. Stops after the first length whose best error is at
    most ``stop_error``.
    """
    if max_length < 1:
        raise ValueError("max_length must be at least 1")
    target_matrix = getattr(target, "matrix", target)
    if target_matrix.shape != (gs.dim, gs.dim):
        raise ValueError(f"target dimension {target_matrix.shape[0]} does not match gate set dim {gs.dim}")
    workers = default_workers() if workers is None else max(1, workers)

    best_err = frobenius_norm(np.eye(gs.dim) - target_matrix)
    best_word = BraidWord()
    frontier = []
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for length in range(1, max_length + 1):
            if pool is None:
                err, codes = _best_of_length(gs, target_matrix, length, None)
            else:
                tasks = [(gs, target_matrix, length, f) for f in range(gs.alphabet_size)]
                err, codes = np.inf, None
                # merged in first-letter order, so ties resolve as in the serial walk
                for e, c in pool.map(_best_of_length_task, tasks):
                    if e < err:
                        err, codes = e, c
            if err < best_err:
                best_err, best_word = err, BraidWord.from_codes(codes)
            frontier.append(FrontierPoint(length, best_err, best_word))
            if stop_error is not None and best_err <= stop_error:
                break
    finally:
        if pool is not None:
            pool.shutdown()
    return frontier


def words_within(gs: GateSet, target: np.ndarray, max_length: int, max_error: float) -> list[BraidWord]:
    """Every reduced word of length ``1..max_length`` within ``max_error`` of ``target``."""
    found = []
    for length in range(1, max_length + 1):
        for mats, words in iter_words(gs, length):
            errs = batch_frobenius(mats - target)
            for row in words[errs <= max_error]:
                found.append(BraidWord.from_codes(row))
    return found


def write_frontier_csv(frontier: list[FrontierPoint], fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["length", "min_error", "witness"])
    for p in frontier:
        writer.writerow([p.max_length, repr(p.min_error), format_word(p.witness)])
