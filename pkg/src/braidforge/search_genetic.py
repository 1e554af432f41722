"""Steady-state genetic search over braid words.

Each generation sorts the population by fitness, records the fittest braid
seen so far, culls the least fit tenth and refills the population by
recombining pairs of survivors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import batch_frobenius, frobenius_norm
from .braidword import BraidWord, format_word, prefix_products
from .gatesets import GateSet, TargetGate

RECOMBINATIONS = ("naive", "contextual")
MUTATIONS = ("off", "replace", "insert-identity")
PARENT_RETRIES = 10


@dataclass(frozen=True)
class FitnessParams:
    lam: float
    target: TargetGate

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lambda must lie in [0, 1], got {self.lam}")


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 80
    generations: int = 1000
    recombination: str = "contextual"
    mutation: str = "off"
    mutation_rate: float = 0.1
    init_length_range: tuple[int, int] = (1, 40)
    rng_seed: int = 0

    def __post_init__(self):
        if self.population_size < 10:
            raise ValueError("population size must be at least 10")
        if self.generations < 0:
            raise ValueError("generations must be nonnegative")
        if self.recombination not in RECOMBINATIONS:
            raise ValueError(f"recombination must be one of {RECOMBINATIONS}")
        if self.mutation not in MUTATIONS:
            raise ValueError(f"mutation must be one of {MUTATIONS}")
        lo, hi = self.init_length_range
        if lo < 1 or hi < lo:
            raise ValueError(f"bad initial length range {self.init_length_range}")


def fitness(length: int, error: float, lam: float) -> float:
    if length < 1:
        raise ValueError("fitness is undefined for the empty braid")
    return (1.0 - lam) / (1.0 + error) + lam / length


class Individual:
    """A braid word with its prefix products and error against the run's target.

    ``prefix[k]`` is the product of the first ``k`` letters, so ``prefix[-1]``
    is the braid matrix.
    """

    __slots__ = ("codes", "prefix", "error", "_word")

    def __init__(self, codes: tuple[int, ...], gs: GateSet, target: np.ndarray, prefix=None):
        self.codes = codes
        self.prefix = prefix_products(codes, gs) if prefix is None else prefix
        self.error = frobenius_norm(self.prefix[-1] - target)
        self._word = None

    def __len__(self) -> int:
        return len(self.codes)

    @property
    def matrix(self) -> np.ndarray:
        return self.prefix[-1]

    @property
    def word(self) -> BraidWord:
        if self._word is None:
            self._word = BraidWord.from_codes(self.codes)
        return self._word

    def fitness(self, lam: float) -> float:
        return fitness(len(self.codes), self.error, lam)


@dataclass
class GaState:
    population: list[Individual]
    gateset: GateSet
    target: np.ndarray
    rng: np.random.Generator
    generation: int = 0
    best: Individual | None = None
    best_fitness: float = -math.inf

    def words(self) -> list[BraidWord]:
        return [ind.word for ind in self.population]


@dataclass
class GenerationRow:
    generation: int
    mean_error: float
    mean_length: float
    best_error: float
    best_length: int
    best_fitness: float


@dataclass
class RunRecord:
    config: GaConfig
    lam: float
    gateset: str
    target: str
    rows: list[GenerationRow] = field(default_factory=list)
    best_word: BraidWord = BraidWord()
    best_error: float = math.inf
    best_fitness: float = -math.inf

    @property
    def best_length(self) -> int:
        return len(self.best_word)


def random_codes(rng: np.random.Generator, alphabet_size: int, length: int) -> tuple[int, ...]:
    """Uniform letters, never a letter directly followed by its inverse."""
    out = [int(rng.integers(alphabet_size))]
    for _ in range(length - 1):
        c = int(rng.integers(alphabet_size - 1))
        if c >= (out[-1] ^ 1):
            c += 1
        out.append(c)
    return tuple(out)


def init_population(
    cfg: GaConfig, gs: GateSet, target: TargetGate | np.ndarray | None = None
) -> GaState:
    """Random initial population, deterministic in ``cfg.rng_seed``.

    ``target`` only affects the cached errors; it defaults to the identity.
    """
    rng = np.random.default_rng(cfg.rng_seed)
    target_matrix = getattr(target, "matrix", target)
    if target_matrix is None:
        target_matrix = np.eye(gs.dim)
    lo, hi = cfg.init_length_range
    pop = []
    for _ in range(cfg.population_size):
        n = int(rng.integers(lo, hi + 1))
        pop.append(Individual(random_codes(rng, gs.alphabet_size, n), gs, target_matrix))
    return GaState(pop, gs, target_matrix, rng)


def _sort_key(lam: float):
    # ascending fitness; equal fitness ranks the shorter braid as fitter
    return lambda item: (item[1].fitness(lam), -len(item[1]), -item[0])


def sort_population(state: GaState, fp: FitnessParams) -> None:
    """Sort ascending by fitness so the fittest individual is last."""
    indexed = sorted(enumerate(state.population), key=_sort_key(fp.lam))
    state.population = [ind for _, ind in indexed]


def update_best(state: GaState, fp: FitnessParams) -> None:
    fittest = max(enumerate(state.population), key=_sort_key(fp.lam))[1]
    f = fittest.fitness(fp.lam)
    if state.best is None or state.best_fitness < f:
        state.best, state.best_fitness = fittest, f


def cull(state: GaState, fp: FitnessParams) -> GaState:
    """Sort the population and drop the least fit ``floor(m / 10)`` individuals."""
    if not state.population:
        raise ValueError("cannot cull an empty population")
    sort_population(state, fp)
    state.population = state.population[len(state.population) // 10 :]
    return state


def recombine(p1, p2, n1: int, n2: int):
    """Children ``p1[1..n1-1] + p2[n2..]`` and ``p2[1..n2-1] + p1[n1..]``."""
    c1 = p1[: n1 - 1] + p2[n2 - 1 :]
    c2 = p2[: n2 - 1] + p1[n1 - 1 :]
    return c1, c2


def _as_codes(word) -> tuple[int, ...]:
    if isinstance(word, BraidWord):
        return tuple(word.codes())
    if isinstance(word, Individual):
        return word.codes
    return tuple(word)


def naive_split(len1: int, len2: int, rng: np.random.Generator) -> tuple[int, int]:
    if len1 < 2 or len2 < 2:
        raise ValueError("naive recombination needs parents of length at least 2")
    return int(rng.integers(2, len1 + 1)), int(rng.integers(2, len2 + 1))


def breed_naive(p1: BraidWord, p2: BraidWord, rng: np.random.Generator) -> tuple[BraidWord, BraidWord]:
    """Recombine at split points drawn uniformly from ``(1, len]``."""
    n1, n2 = naive_split(len(p1), len(p2), rng)
    c1, c2 = recombine(p1.letters, p2.letters, n1, n2)
    return BraidWord(c1), BraidWord(c2)


class NoValidSplit(ValueError):
    """Contextual recombination found no split with distinct prefixes."""


def common_prefix_length(a, b) -> int:
    m = 0
    for x, y in zip(a, b):
        if x != y:
            break
        m += 1
    return m


def contextual_split(codes1, codes2, gs: GateSet, prefix1=None, prefix2=None) -> tuple[int, int]:
    """Split points past the common prefix whose prefixes are closest.

    Scans ``n1`` in ``(m, len1]`` then ``n2`` in ``(m, len2]``; the first pair
    reaching the minimum wins. The pair whose prefixes are identical words is
    skipped.
    """
    len1, len2 = len(codes1), len(codes2)
    m = common_prefix_length(codes1, codes2)
    if m >= len1 or m >= len2:
        raise NoValidSplit("one parent is a prefix of the other")
    if prefix1 is None:
        prefix1 = prefix_products(codes1, gs)
    if prefix2 is None:
        prefix2 = prefix_products(codes2, gs)
    # row a is the prefix of length m + a of parent 1, i.e. n1 = m + a + 1
    a = prefix1[m:len1]
    b = prefix2[m:len2]
    d = batch_frobenius(a[:, None] - b[None, :])
    d[0, 0] = np.inf  # both prefixes are the common prefix
    flat = int(np.argmin(d))
    i, j = divmod(flat, d.shape[1])
    if not np.isfinite(d[i, j]):
        raise NoValidSplit("every candidate split has identical prefixes")
    return m + i + 1, m + j + 1


def breed_contextual(
    p1: BraidWord, p2: BraidWord, gs: GateSet, rng: np.random.Generator | None = None
) -> tuple[BraidWord, BraidWord]:
    """Recombine at the split points minimizing the distance between prefixes.

    Deterministic; ``rng`` is accepted for signature parity with
    :func:`breed_naive`. Raises :class:`NoValidSplit` when no usable split
    exists.
    """
    n1, n2 = contextual_split(_as_codes(p1), _as_codes(p2), gs)
    c1, c2 = recombine(p1.letters, p2.letters, n1, n2)
    return BraidWord(c1), BraidWord(c2)


def identity_table(gs: GateSet, max_error: float = 0.3, max_length: int | None = None) -> list[BraidWord]:
    """Short words close to the identity, for the insert-identity mutation.

    ``max_length`` defaults to 8, lowered for large alphabets so that the
    enumeration stays under about two million words.
    """
    from .search_brute import count_reduced_words, words_within

    if max_length is None:
        max_length, total = 0, 0
        while max_length < 8:
            total += count_reduced_words(gs.alphabet_size, max_length + 1)
            if total > 2_000_000:
                break
            max_length += 1
    return words_within(gs, np.eye(gs.dim), max(1, max_length), max_error)


def mutate(
    b: BraidWord,
    mode: str,
    gs: GateSet,
    rng: np.random.Generator,
    table: list[BraidWord] | None = None,
) -> BraidWord:
    """Replace one letter, or insert a near-identity word at a random position."""
    if mode == "replace":
        if len(b) < 1:
            raise ValueError("replace mutation needs a nonempty word")
        codes = b.codes()
        pos = int(rng.integers(len(codes)))
        new = int(rng.integers(gs.alphabet_size - 1))
        if new >= codes[pos]:
            new += 1
        codes[pos] = new
        return BraidWord.from_codes(codes)
    if mode == "insert-identity":
        if table is None:
            table = identity_table(gs)
        if not table:
            return b
        piece = table[int(rng.integers(len(table)))]
        pos = int(rng.integers(len(b) + 1))
        return BraidWord(b.letters[:pos] + piece.letters + b.letters[pos:])
    raise ValueError(f"unknown mutation mode {mode!r}")


def _pick_parents(survivors: list[Individual], rng, need_len: int):
    if need_len <= 1:
        pool = survivors
    else:
        pool = [s for s in survivors if len(s.codes) >= need_len]
    if len(pool) < 2:
        return None
    a = int(rng.integers(len(pool)))
    b = int(rng.integers(len(pool) - 1))
    if b >= a:
        b += 1
    return pool[a], pool[b]


def breed_pair(state: GaState, survivors: list[Individual], cfg: GaConfig):
    """Two children from a pair of survivors, with the fallback chain.

    Contextual recombination reselects parents up to ``PARENT_RETRIES`` times
    when no valid split exists, then falls back to naive recombination. If
    no two survivors have length at least 2, the parents are copied.
    """
    gs, target, rng = state.gateset, state.target, state.rng
    if cfg.recombination == "contextual":
        for _ in range(PARENT_RETRIES):
            pair = _pick_parents(survivors, rng, 1)
            if pair is None:
                break
            p1, p2 = pair
            try:
                n1, n2 = contextual_split(p1.codes, p2.codes, gs, p1.prefix, p2.prefix)
            except NoValidSplit:
                continue
            return _children(p1, p2, n1, n2, gs, target)
    pair = _pick_parents(survivors, rng, 2)
    if pair is None:
        pair = _pick_parents(survivors, rng, 1)
        return list(pair)
    p1, p2 = pair
    n1, n2 = naive_split(len(p1), len(p2), rng)
    return _children(p1, p2, n1, n2, gs, target)


def _child(p1: Individual, p2: Individual, n1: int, n2: int, gs: GateSet, target) -> Individual:
    return Individual(p1.codes[: n1 - 1] + p2.codes[n2 - 1 :], gs, target)


def _children(p1: Individual, p2: Individual, n1: int, n2: int, gs: GateSet, target):
    return [_child(p1, p2, n1, n2, gs, target), _child(p2, p1, n2, n1, gs, target)]


def repopulate(state: GaState, cfg: GaConfig, table=None) -> None:
    survivors = list(state.population)
    deficit = cfg.population_size - len(survivors)
    children: list[Individual] = []
    while len(children) < deficit:
        children.extend(breed_pair(state, survivors, cfg))
    children = children[:deficit]
    if cfg.mutation != "off":
        gs, rng = state.gateset, state.rng
        for k, child in enumerate(children):
            if rng.random() < cfg.mutation_rate:
                word = mutate(child.word, cfg.mutation, gs, rng, table)
                children[k] = Individual(tuple(word.codes()), gs, state.target)
    state.population = survivors + children


def _row(state: GaState) -> GenerationRow:
    errs = [ind.error for ind in state.population]
    lens = [len(ind) for ind in state.population]
    return GenerationRow(
        generation=state.generation,
        mean_error=float(np.mean(errs)),
        mean_length=float(np.mean(lens)),
        best_error=state.best.error,
        best_length=len(state.best),
        best_fitness=state.best_fitness,
    )


def evolve(cfg: GaConfig, gs: GateSet, fp: FitnessParams) -> RunRecord:
    """Run the genetic search and return per-generation statistics.

    The best braid is tracked across every population the run produces,
    including the initial one and the final one.
    """
    if fp.target.dim != gs.dim:
        raise ValueError(f"target {fp.target.label!r} is {fp.target.dim}x{fp.target.dim}, gate set is {gs.dim}")
    state = init_population(cfg, gs, fp.target)
    table = identity_table(gs) if cfg.mutation == "insert-identity" else None
    update_best(state, fp)
    record = RunRecord(cfg, fp.lam, gs.name, fp.target.label)
    for gen in range(1, cfg.generations + 1):
        state.generation = gen
        cull(state, fp)
        repopulate(state, cfg, table)
        # the next sort would see exactly this population
        update_best(state, fp)
        record.rows.append(_row(state))
    record.best_word = state.best.word
    record.best_error = state.best.error
    record.best_fitness = state.best_fitness
    return record


def describe(record: RunRecord) -> str:
    return (
        f"{format_word(record.best_word)}  error={record.best_error:.6g}  "
        f"length={record.best_length}  fitness={record.best_fitness:.6g}"
    )
