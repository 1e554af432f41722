"""Generator sets for the two braiding schemes and the gates they emulate."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .algebra import as_matrix, dagger, identity, is_unitary

TAU = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class GateSet:
    """Labelled generator matrices; the alphabet is every generator and its inverse.

    Letters are addressed either as ``(index, sign)`` with a 1-based index, or by
    an integer code ``2 * (index - 1) + (sign == -1)``. Code order is the
    lexicographic letter order used for tie-breaking: index ascending, ``+1``
    before ``-1``.
    """

    name: str
    dim: int
    labels: tuple[str, ...]
    generators: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.labels) != len(self.generators):
            raise ValueError("labels and generators differ in length")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"duplicate generator labels in {self.name!r}")
        if not self.generators:
            raise ValueError("a gate set needs at least one generator")
        for label, g in zip(self.labels, self.generators):
            if g.shape != (self.dim, self.dim):
                raise ValueError(f"generator {label!r} has shape {g.shape}, expected dim {self.dim}")
            if not is_unitary(g):
                raise ValueError(f"generator {label!r} is not unitary")
        letters = []
        for g in self.generators:
            letters.append(g)
            letters.append(dagger(g))
        table = np.stack(letters)
        table.setflags(write=False)
        object.__setattr__(self, "letter_matrices", table)

    @property
    def generator_count(self) -> int:
        return len(self.generators)

    @property
    def alphabet_size(self) -> int:
        return 2 * len(self.generators)

    def generator(self, index: int, sign: int = 1) -> np.ndarray:
        if not 1 <= index <= self.generator_count:
            raise IndexError(
                f"generator index {index} out of range for {self.name!r} (1..{self.generator_count})"
            )
        return self.letter_matrices[letter_code(index, sign)]

    def identity(self) -> np.ndarray:
        return identity(self.dim)


def letter_code(index: int, sign: int) -> int:
    return 2 * (index - 1) + (1 if sign < 0 else 0)


def code_letter(code: int) -> tuple[int, int]:
    return code // 2 + 1, -1 if code & 1 else 1


@dataclass(frozen=True)
class TargetGate:
    label: str
    matrix: np.ndarray

    def __post_init__(self):
        if not is_unitary(self.matrix):
            raise ValueError(f"target {self.label!r} is not unitary")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def fibonacci_gateset() -> GateSet:
    """sigma_1, sigma_2 for Fibonacci anyons, phase-shifted into SU(2)."""
    e = lambda theta: complex(math.cos(theta), math.sin(theta))  # noqa: E731
    rt = math.sqrt(TAU)
    s1 = [[e(-7 * math.pi / 10), 0], [0, -e(-3 * math.pi / 10)]]
    s2 = [
        [-TAU * e(-math.pi / 10), -1j * rt],
        [-1j * rt, -TAU * e(math.pi / 10)],
    ]
    return GateSet("fibonacci", 2, ("s1", "s2"), (as_matrix(s1, 2), as_matrix(s2, 2)))


def majorana_gateset() -> GateSet:
    """B_1..B_5 for the six-Majorana two-qubit scheme."""
    i = 1j
    h = 1 / math.sqrt(2)
    b1 = np.diag([i, i, 1, 1])
    b2 = h * np.array([[1, 0, i, 0], [0, 1, 0, i], [i, 0, 1, 0], [0, i, 0, 1]])
    b3 = np.diag([i, 1, 1, i])
    b4 = h * np.array([[1, i, 0, 0], [i, 1, 0, 0], [0, 0, 1, -i], [0, 0, -i, 1]])
    b5 = np.diag([i, 1, i, 1])
    mats = tuple(as_matrix(b, 4) for b in (b1, b2, b3, b4, b5))
    return GateSet("majorana", 4, ("B1", "B2", "B3", "B4", "B5"), mats)


_TARGETS = {
    "x-rotation": lambda: [[0, 1j], [1j, 0]],
    "cnot": lambda: [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
}

TARGET_NAMES = (*_TARGETS, "identity")


def target_gate(name: str, dim: int | None = None) -> TargetGate:
    """Look up a target gate by name.

    ``identity`` needs ``dim``; it exists for sanity checks and for building
    identity-approximation tables.
    """
    if name == "identity":
        if dim is None:
            raise ValueError("the identity target needs an explicit dimension")
        return TargetGate(f"identity{dim}", identity(dim))
    try:
        factory = _TARGETS[name]
    except KeyError:
        raise ValueError(
            f"unknown target {name!r}; available targets: {', '.join(TARGET_NAMES)}"
        ) from None
    return TargetGate(name, as_matrix(factory()))


_GATESETS = {"fibonacci": fibonacci_gateset, "majorana": majorana_gateset}

GATESET_NAMES = tuple(_GATESETS)


def get_gateset(name: str) -> GateSet:
    """Return a built-in gate set by name, or load one from a file path."""
    if name in _GATESETS:
        return _GATESETS[name]()
    path = Path(name)
    if path.is_file():
        return load_gateset(path)
    raise ValueError(f"unknown gate set {name!r}; available: {', '.join(GATESET_NAMES)} or a file path")


def load_gateset(path, name: str | None = None) -> GateSet:
    """Read a gate set from a plain-text file.

    Blocks are separated by blank lines. Each block starts with the generator
    label, followed by ``dim * dim`` entries ``re,im`` in row-major order
    (whitespace or newlines between entries). ``#`` starts a comment.
    """
    path = Path(path)
    blocks: list[list[str]] = [[]]
    for raw in path.read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            if blocks[-1]:
                blocks.append([])
            continue
        blocks[-1].append(line)
    blocks = [b for b in blocks if b]
    if not blocks:
        raise ValueError(f"{path}: no generators found")

    labels, mats = [], []
    for block in blocks:
        label = block[0]
        tokens = " ".join(block[1:]).split()
        dim = math.isqrt(len(tokens))
        if dim * dim != len(tokens):
            raise ValueError(f"{path}: generator {label!r} has {len(tokens)} entries, not a square count")
        entries = []
        for tok in tokens:
            try:
                re_part, im_part = tok.split(",")
                entries.append(complex(float(re_part), float(im_part)))
            except ValueError:
                raise ValueError(f"{path}: bad entry {tok!r} in generator {label!r}") from None
        labels.append(label)
        mats.append(as_matrix(np.reshape(entries, (dim, dim))))
    dims = {m.shape[0] for m in mats}
    if len(dims) != 1:
        raise ValueError(f"{path}: generators have mixed dimensions {sorted(dims)}")
    return GateSet(name or path.stem, dims.pop(), tuple(labels), tuple(mats))


def save_gateset(gs: GateSet, path) -> None:
    lines = [f"# {gs.name}"]
    for label, g in zip(gs.labels, gs.generators):
        lines.append(label)
        for row in g:
            lines.append(" ".join(f"{float(z.real)!r},{float(z.imag)!r}" for z in row))
        lines.append("")
    Path(path).write_text("\n".join(lines), encoding="utf-8")
