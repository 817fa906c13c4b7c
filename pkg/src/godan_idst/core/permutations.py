"""
Permutations on [n] in one-line notation.

A permutation ``p`` is stored as the tuple of its images ``(p(1), ..., p(n))``.
Composition follows ``(sigma ∘ tau)(i) = sigma(tau(i))`` and every graph in this
package is a right Cayley graph: ``u`` is adjacent to ``v`` when ``u = v ∘ s`` for a
generator ``s``. Ranks are lexicographic positions in the factorial number system,
so sorting by rank and sorting by one-line notation agree.
"""

import math
import re
from enum import StrEnum
from functools import cache
from typing import Any

from attrs import define, field

from godan_idst.core.exceptions import (
    InvalidGeneratorError,
    OrderMismatchError,
    PermutationError,
    RankOutOfRangeError,
)

MIN_ORDER = 3
# One-line strings without separators are only unambiguous for single-digit symbols.
COMPACT_MAX_ORDER = 9
FIRST_DOUBLE_SWAP = 4

_COMPACT_RE = re.compile(r"^[1-9]+$")


class Parity(StrEnum):
    """Parity of a permutation; even permutations form A_n."""

    EVEN = "even"
    ODD = "odd"


class GeneratorKind(StrEnum):
    """Kinds of generators in Ω* = {(12), (123), (132)} ∪ {(12)(3i) : 4 ≤ i ≤ n}."""

    SWAP12 = "Swap12"
    CYCLE123 = "Cycle123"
    CYCLE132 = "Cycle132"
    DOUBLE_SWAP = "DoubleSwap"


def _check_image(instance: "Permutation", attribute: Any, value: tuple[int, ...]) -> None:
    n = len(value)
    if n < MIN_ORDER:
        raise PermutationError(f"permutation order must be at least {MIN_ORDER}, got {n}")
    if set(value) != set(range(1, n + 1)):
        raise PermutationError(f"{value!r} is not a bijection of 1..{n}")


@define(frozen=True, order=True, cache_hash=True, repr=False)
class Permutation:
    """
    An element of S_n in one-line notation.

    Attributes:
        image (tuple[int, ...]): ``image[i - 1]`` is the symbol at position ``i``.
    """

    image: tuple[int, ...] = field(converter=tuple, validator=_check_image)

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, i: int) -> int:
        return self.image[i - 1]

    def __str__(self) -> str:
        if self.n > COMPACT_MAX_ORDER:
            return ",".join(str(s) for s in self.image)
        return "".join(str(s) for s in self.image)

    def __repr__(self) -> str:
        return f"Permutation('{self}')"

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "Permutation":
        """
        Parse the bare one-line form ("2143") or the comma form ("2,1,4,3").

        Args:
            text: The textual permutation.
            n: Expected order; a mismatch raises `OrderMismatchError`.

        Returns:
            Permutation: The parsed value.
        """
        raw = text.strip()
        if "," in raw:
            try:
                image = tuple(int(part) for part in raw.split(","))
            except ValueError as exc:
                raise PermutationError(f"cannot parse permutation {text!r}") from exc
        elif _COMPACT_RE.match(raw):
            image = tuple(int(ch) for ch in raw)
        else:
            raise PermutationError(f"cannot parse permutation {text!r}")
        perm = cls(image)
        if n is not None and perm.n != n:
            raise OrderMismatchError(f"{text!r} has order {perm.n}, expected {n}")
        return perm

    def rank(self) -> int:
        return rank(self)


@define(frozen=True, order=True)
class GeneratorTag:
    """
    One generator of Ω*.

    Attributes:
        kind (GeneratorKind): Which generator family.
        index (int | None): The ``i`` of ``(12)(3i)`` for `GeneratorKind.DOUBLE_SWAP`.
    """

    kind: GeneratorKind = field(converter=GeneratorKind)
    index: int | None = field(default=None)

    @index.validator
    def _check_index(self, attribute: Any, value: int | None) -> None:
        if self.kind is GeneratorKind.DOUBLE_SWAP:
            if value is None or value < FIRST_DOUBLE_SWAP:
                raise InvalidGeneratorError(
                    f"DoubleSwap index must be at least {FIRST_DOUBLE_SWAP}, got {value}"
                )
        elif value is not None:
            raise InvalidGeneratorError(f"{self.kind} takes no index")

    @classmethod
    def swap12(cls) -> "GeneratorTag":
        return cls(GeneratorKind.SWAP12)

    @classmethod
    def cycle123(cls) -> "GeneratorTag":
        return cls(GeneratorKind.CYCLE123)

    @classmethod
    def cycle132(cls) -> "GeneratorTag":
        return cls(GeneratorKind.CYCLE132)

    @classmethod
    def double_swap(cls, i: int) -> "GeneratorTag":
        return cls(GeneratorKind.DOUBLE_SWAP, i)

    def __str__(self) -> str:
        if self.kind is GeneratorKind.DOUBLE_SWAP:
            return f"{self.kind}({self.index})"
        return str(self.kind)

    def check(self, n: int) -> None:
        """Raise `InvalidGeneratorError` unless the generator exists in S_n."""
        if self.index is not None and self.index > n:
            raise InvalidGeneratorError(f"{self} does not exist for n={n}")

    def permutation(self, n: int) -> Permutation:
        """The generator as an element of S_n."""
        self.check(n)
        return _generator_permutation(self.kind, self.index, n)


@cache
def _generator_permutation(kind: GeneratorKind, index: int | None, n: int) -> Permutation:
    image = list(range(1, n + 1))
    if kind is GeneratorKind.SWAP12:
        image[0], image[1] = 2, 1
    elif kind is GeneratorKind.CYCLE123:
        image[0], image[1], image[2] = 2, 3, 1
    elif kind is GeneratorKind.CYCLE132:
        image[0], image[1], image[2] = 3, 1, 2
    else:
        assert index is not None
        image[0], image[1] = 2, 1
        image[2], image[index - 1] = index, 3
    return Permutation(tuple(image))


@cache
def omega(n: int) -> tuple[GeneratorTag, ...]:
    """Ω: the connection set of AN_n."""
    return (
        GeneratorTag.cycle123(),
        GeneratorTag.cycle132(),
        *(GeneratorTag.double_swap(i) for i in range(FIRST_DOUBLE_SWAP, n + 1)),
    )


@cache
def omega_star(n: int) -> tuple[GeneratorTag, ...]:
    """Ω* = Ω ∪ {(12)}: the connection set of EA_n."""
    return (GeneratorTag.swap12(), *omega(n))


def compose(sigma: Permutation, tau: Permutation) -> Permutation:
    """Return ``sigma ∘ tau``, i.e. ``i -> sigma(tau(i))``."""
    if sigma.n != tau.n:
        raise OrderMismatchError(f"cannot compose orders {sigma.n} and {tau.n}")
    s = sigma.image
    return Permutation(tuple(s[t - 1] for t in tau.image))


def apply_generator(v: Permutation, g: GeneratorTag) -> Permutation:
    """Right-multiply ``v`` by the generator: ``v ∘ s*``."""
    return compose(v, g.permutation(v.n))


def parity(v: Permutation) -> Parity:
    """Parity via the cycle count: n minus the number of cycles is even iff v is even."""
    seen = [False] * v.n
    cycles = 0
    for start in range(v.n):
        if seen[start]:
            continue
        cycles += 1
        j = start
        while not seen[j]:
            seen[j] = True
            j = v.image[j] - 1
    return Parity.EVEN if (v.n - cycles) % 2 == 0 else Parity.ODD


def inverse(v: Permutation) -> Permutation:
    image = [0] * v.n
    for position, symbol in enumerate(v.image, start=1):
        image[symbol - 1] = position
    return Permutation(tuple(image))


def rank(v: Permutation) -> int:
    """Lexicographic rank of ``v`` among the n! one-line strings (Lehmer code)."""
    n = v.n
    result = 0
    remaining = sorted(v.image)
    for position, symbol in enumerate(v.image):
        smaller = remaining.index(symbol)
        result += smaller * math.factorial(n - 1 - position)
        remaining.pop(smaller)
    return result


def unrank(n: int, r: int) -> Permutation:
    """Inverse of `rank`."""
    if n < MIN_ORDER:
        raise PermutationError(f"permutation order must be at least {MIN_ORDER}, got {n}")
    total = math.factorial(n)
    if not 0 <= r < total:
        raise RankOutOfRangeError(f"rank {r} outside [0, {total}) for n={n}")
    remaining = list(range(1, n + 1))
    image = []
    for position in range(n):
        block = math.factorial(n - 1 - position)
        digit, r = divmod(r, block)
        image.append(remaining.pop(digit))
    return Permutation(tuple(image))
