import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from braidforge.algebra import braid_error, distance, frobenius_norm
from braidforge.braidword import BraidWord, free_reduce, mat, subbraid
from braidforge.gatesets import fibonacci_gateset, target_gate
from braidforge.search_genetic import (
    FitnessParams,
    GaConfig,
    Individual,
    NoValidSplit,
    breed_contextual,
    breed_naive,
    common_prefix_length,
    contextual_split,
    cull,
    evolve,
    fitness,
    identity_table,
    init_population,
    mutate,
    random_codes,
    recombine,
    sort_population,
)

from .conftest import words

a, b, c, d = (BraidWord(((k, 1),)) for k in (1, 2, 3, 4))


@pytest.mark.parametrize(
    "length, error, lam, expected",
    [(1, 0.0, 0.5, 1.0), (10, 1.0, 0.0, 0.5), (4, 0.2, 1.0, 0.25)],
)
def test_fitness_examples(length, error, lam, expected):
    assert fitness(length, error, lam) == pytest.approx(expected, abs=1e-15)


def test_fitness_rejects_empty():
    with pytest.raises(ValueError):
        fitness(0, 0.0, 0.5)


def test_fitness_params_range(xgate):
    with pytest.raises(ValueError):
        FitnessParams(1.5, xgate)


@pytest.mark.parametrize(
    "kwargs",
    [{"population_size": 9}, {"init_length_range": (0, 3)}, {"recombination": "x"}, {"mutation": "x"}],
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        GaConfig(**kwargs)


def test_init_population(fib):
    state = init_population(GaConfig(population_size=80, rng_seed=3), fib)
    assert len(state.population) == 80
    again = init_population(GaConfig(population_size=80, rng_seed=3), fib)
    assert state.words() == again.words()
    fixed = init_population(GaConfig(init_length_range=(5, 5)), fib)
    assert all(len(w) == 5 for w in fixed.words())
    for w in state.words():
        assert 1 <= len(w) <= 40 and free_reduce(w) == w


def test_random_codes_uniform_and_reduced(rng):
    counts = np.zeros(4)
    for _ in range(2000):
        codes = random_codes(rng, 4, 6)
        assert all(x != (y ^ 1) for x, y in zip(codes[1:], codes))
        counts[codes[0]] += 1
    assert counts.min() > 400


@pytest.mark.parametrize("m, survivors", [(80, 72), (10, 9), (25, 23)])
def test_cull_sizes(fib, xgate, m, survivors):
    state = init_population(GaConfig(population_size=m), fib, xgate)
    cull(state, FitnessParams(0.0, xgate))
    assert len(state.population) == survivors


def test_cull_removes_least_fit(fib, xgate):
    fp = FitnessParams(0.3, xgate)
    state = init_population(GaConfig(population_size=40, rng_seed=5), fib, xgate)
    ranked = sorted(ind.fitness(0.3) for ind in state.population)
    cull(state, fp)
    kept = [ind.fitness(0.3) for ind in state.population]
    assert kept == sorted(kept)
    assert sorted(kept) == ranked[4:]


def test_cull_identical_population(fib, xgate):
    state = init_population(GaConfig(population_size=20, init_length_range=(3, 3)), fib, xgate)
    state.population = [Individual((0, 2, 0), fib, xgate.matrix) for _ in range(20)]
    cull(state, FitnessParams(0.0, xgate))
    assert len(state.population) == 18
    assert all(ind.codes == (0, 2, 0) for ind in state.population)


def test_sort_tie_break_prefers_shorter(fib, xgate):
    # lambda = 0 and equal errors: the shorter braid ranks as fitter (last)
    state = init_population(GaConfig(population_size=10), fib, xgate)
    long_ = Individual((0, 1, 0), fib, xgate.matrix)  # reduces to s1, same matrix
    short = Individual((0,), fib, xgate.matrix)
    state.population = [short, long_]
    sort_population(state, FitnessParams(0.0, xgate))
    assert state.population[-1] is short


@settings(max_examples=50)
@given(st.lists(st.tuples(st.integers(1, 30), st.integers(0, 3000).map(lambda k: k / 1000)), min_size=2, max_size=30))
def test_lambda_extremes_orderings(pairs):
    err_order = max(range(len(pairs)), key=lambda i: fitness(pairs[i][0], pairs[i][1], 0.0))
    assert pairs[err_order][1] == min(e for _, e in pairs)
    len_order = max(range(len(pairs)), key=lambda i: fitness(pairs[i][0], pairs[i][1], 1.0))
    assert pairs[len_order][0] == min(n for n, _ in pairs)


def test_breed_naive_forced_split(rng):
    c1, c2 = breed_naive(a + b, c + d, rng)
    assert c1 == a + d and c2 == c + b


def test_breed_naive_rejects_short(rng):
    with pytest.raises(ValueError):
        breed_naive(a, c + d, rng)


@settings(max_examples=200)
@given(words(min_size=2, max_size=15), words(min_size=2, max_size=15), st.integers(0, 2**32))
def test_breed_naive_properties(p1, p2, seed):
    c1, c2 = breed_naive(p1, p2, np.random.default_rng(seed))
    assert len(c1) + len(c2) == len(p1) + len(p2)
    again = breed_naive(p1, p2, np.random.default_rng(seed))
    assert (c1, c2) == again


@settings(max_examples=200)
@given(words(min_size=2, max_size=10), words(min_size=2, max_size=10), st.data())
def test_children_equal_parent_only_when_tails_match(p1, p2, data):
    n1 = data.draw(st.integers(2, len(p1)))
    n2 = data.draw(st.integers(2, len(p2)))
    c1, c2 = (BraidWord(x) for x in recombine(p1.letters, p2.letters, n1, n2))
    tails_equal = subbraid(p1, n1) == subbraid(p2, n2)
    assert (c1 == p1) == tails_equal
    assert (c2 == p2) == tails_equal


def test_common_prefix():
    assert common_prefix_length((0, 2, 4), (0, 2, 6)) == 2
    assert common_prefix_length((1,), (0,)) == 0


def test_contextual_identical_parents(fib):
    w = BraidWord(((1, 1), (2, 1), (1, -1)))
    with pytest.raises(NoValidSplit):
        breed_contextual(w, w, fib)


def test_contextual_prefix_parent(fib):
    with pytest.raises(NoValidSplit):
        breed_contextual(a + b, a + b + a, fib)


def test_contextual_lone_candidate_skipped(fib):
    # len = m + 1 for both: the only pair has identical prefixes
    with pytest.raises(NoValidSplit):
        breed_contextual(a + b, a + BraidWord(((2, -1),)), fib)


def _brute_split(p1, p2, gs):
    """Scan every (n1, n2) past the common prefix, first minimum wins."""
    m = common_prefix_length(p1.letters, p2.letters)
    best, arg = np.inf, None
    for n1 in range(m + 1, len(p1) + 1):
        for n2 in range(m + 1, len(p2) + 1):
            h1, h2 = subbraid(p1, 1, n1 - 1), subbraid(p2, 1, n2 - 1)
            if h1 == h2:
                continue
            dist = distance(h1, h2, gs)
            if dist < best:
                best, arg = dist, (n1, n2)
    return best, arg


@settings(max_examples=150, deadline=None)
@given(words(min_size=1, max_size=10), words(min_size=1, max_size=10))
def test_contextual_minimizes_prefix_distance(p1, p2):
    gs = fibonacci_gateset()
    best, arg = _brute_split(p1, p2, gs)
    if arg is None:
        with pytest.raises(NoValidSplit):
            contextual_split(p1.codes(), p2.codes(), gs)
        return
    n1, n2 = contextual_split(p1.codes(), p2.codes(), gs)
    got = distance(subbraid(p1, 1, n1 - 1), subbraid(p2, 1, n2 - 1), gs)
    assert got == pytest.approx(best, abs=1e-12)
    c1, c2 = breed_contextual(p1, p2, gs)
    assert (c1.letters, c2.letters) == recombine(p1.letters, p2.letters, n1, n2)
    assert subbraid(c1, 1, n1 - 1) != subbraid(c2, 1, n2 - 1)


def test_contextual_example(fib):
    p1 = BraidWord(((1, 1), (2, 1), (1, 1)))
    p2 = BraidWord(((1, 1), (2, 1), (2, -1)))
    assert common_prefix_length(p1.codes(), p2.codes()) == 2
    with pytest.raises(NoValidSplit):
        breed_contextual(p1, p2, fib)  # m + 1 = len for both
    p2 = p2 + BraidWord(((1, -1),))
    c1, c2 = breed_contextual(p1, p2, fib)
    # only n1 = 3, n2 = 4 is allowed: prefixes s1 s2 vs s1 s2 s2^-1
    assert c1 == BraidWord(((1, 1), (2, 1), (1, -1)))
    assert c2 == BraidWord(((1, 1), (2, 1), (2, -1), (1, 1)))


def test_mutate_replace(fib, rng):
    for _ in range(50):
        w = mutate(a, "replace", fib, rng)
        assert len(w) == 1 and w != a and w.letters[0][0] <= 2
    w = BraidWord(((1, 1), (2, -1), (1, 1), (2, 1)))
    out = mutate(w, "replace", fib, rng)
    assert sum(x != y for x, y in zip(w, out)) == 1


def test_identity_table(fib):
    table = identity_table(fib)
    assert table
    for w in table:
        assert len(w) <= 8
        assert frobenius_norm(mat(w, fib) - np.eye(2)) <= 0.3


def test_insert_identity_bounded_change(fib, rng):
    table = identity_table(fib)
    for _ in range(100):
        codes = random_codes(rng, 4, int(rng.integers(1, 15)))
        w = BraidWord.from_codes(codes)
        out = mutate(w, "insert-identity", fib, rng, table)
        inserted = len(out) - len(w)
        assert inserted >= 1
        # find the inserted piece by prefix/suffix match
        pos = next(i for i in range(len(w) + 1) if out.letters[:i] + out.letters[i + inserted :] == w.letters)
        piece = BraidWord(out.letters[pos : pos + inserted])
        change = frobenius_norm(mat(out, fib) - mat(w, fib))
        assert change <= frobenius_norm(mat(piece, fib) - np.eye(2)) + 1e-12


def test_mutation_off_not_invoked(fib, xgate, monkeypatch):
    import braidforge.search_genetic as sg

    def boom(*args, **kwargs):
        raise AssertionError("mutate called")

    monkeypatch.setattr(sg, "mutate", boom)
    evolve(GaConfig(population_size=20, generations=20), fib, FitnessParams(0.0, xgate))


@pytest.mark.parametrize("mode", ["replace", "insert-identity"])
def test_evolve_with_mutation(fib, xgate, mode):
    cfg = GaConfig(population_size=20, generations=30, mutation=mode, mutation_rate=0.5)
    rec = evolve(cfg, fib, FitnessParams(0.0, xgate))
    assert len(rec.rows) == 30
    assert rec.best_error == pytest.approx(braid_error(rec.best_word, xgate, fib), abs=1e-12)


def test_evolve_zero_generations(fib, xgate):
    cfg = GaConfig(population_size=30, generations=0, rng_seed=9)
    fp = FitnessParams(0.2, xgate)
    rec = evolve(cfg, fib, fp)
    state = init_population(cfg, fib, xgate)
    top = max(ind.fitness(0.2) for ind in state.population)
    assert rec.rows == []
    assert rec.best_fitness == top


@pytest.mark.parametrize("recombination", ["contextual", "naive"])
@pytest.mark.parametrize("lam", [0.0, 0.5])
def test_evolve_invariants(fib, xgate, recombination, lam):
    import braidforge.search_genetic as sg

    cfg = GaConfig(population_size=30, generations=60, recombination=recombination, rng_seed=2)
    sizes = []
    original = sg.repopulate

    def spy(state, cfg, table=None):
        original(state, cfg, table)
        sizes.append(len(state.population))

    sg.repopulate = spy
    try:
        rec = evolve(cfg, fib, FitnessParams(lam, xgate))
    finally:
        sg.repopulate = original
    assert sizes == [30] * 60
    fits = [r.best_fitness for r in rec.rows]
    assert all(x <= y for x, y in zip(fits, fits[1:]))
    if lam == 0.0:
        errs = [r.best_error for r in rec.rows]
        assert all(x >= y for x, y in zip(errs, errs[1:]))
    assert rec.best_error == pytest.approx(braid_error(rec.best_word, xgate, fib), abs=1e-12)
    assert rec.best_fitness == pytest.approx(fitness(len(rec.best_word), rec.best_error, lam))


def test_evolve_deterministic(maj):
    cnot = target_gate("cnot")
    cfg = GaConfig(population_size=20, generations=40, rng_seed=77)
    r1 = evolve(cfg, maj, FitnessParams(0.0, cnot))
    r2 = evolve(cfg, maj, FitnessParams(0.0, cnot))
    assert r1 == r2


def test_evolve_dim_mismatch(maj, xgate):
    with pytest.raises(ValueError):
        evolve(GaConfig(generations=1), maj, FitnessParams(0.0, xgate))
