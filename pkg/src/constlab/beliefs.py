"""Common beliefs: exact probability mass functions over preference vectors."""

from __future__ import annotations

import enum
import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from constlab.errors import ParameterError
from constlab.scf import full_mask, vector_from_string, vector_to_string


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"num/den"``, an integer or a decimal string into an exact rational."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParameterError(f"not a rational: {text!r}") from exc


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Belief:
    """A pmf over {0,1}^n.  Vectors missing from ``pmf`` have probability 0."""

    n: int
    pmf: Mapping[int, Fraction]
    label: str = field(default="explicit", compare=False)

    def __post_init__(self):
        size = 1 << self.n
        clean = {}
        for v, pr in self.pmf.items():
            if not 0 <= v < size:
                raise ParameterError(f"vector {v} out of range for n={self.n}")
            pr = Fraction(pr)
            if pr < 0:
                raise ParameterError("probabilities must be non-negative")
            if pr:
                clean[v] = pr
        if sum(clean.values()) != 1:
            raise ParameterError("probabilities must sum to exactly 1")
        object.__setattr__(self, "pmf", dict(sorted(clean.items())))

    def prob(self, v: int) -> Fraction:
        return self.pmf.get(v, Fraction(0))

    def support(self) -> list[int]:
        return list(self.pmf)

    def integer_weights(self) -> tuple[list[int], int]:
        """Scale the pmf to integers: ``weights[v] / denominator == prob(v)``."""
        den = math.lcm(*(p.denominator for p in self.pmf.values()))
        weights = [0] * (1 << self.n)
        for v, p in self.pmf.items():
            weights[v] = p.numerator * (den // p.denominator)
        return weights, den

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "pmf": {vector_to_string(v, self.n): format_rational(p) for v, p in self.pmf.items()},
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "Belief":
        if isinstance(data, str):
            data = json.loads(data)
        n = int(data["n"])
        pmf = {}
        for key, value in data["pmf"].items():
            if len(key) != n:
                raise ParameterError(f"vector {key!r} has wrong length for n={n}")
            pmf[vector_from_string(key)] = parse_rational(value)
        return cls(n, pmf)


class Regime(enum.Enum):
    CHANGE_AVERSE = "change-averse"
    UNBIASED = "unbiased"
    CHANGE_INCLINED = "change-inclined"


@dataclass(frozen=True)
class IIDParameter:
    p: Fraction

    def __post_init__(self):
        p = parse_rational(self.p)
        if not 0 <= p <= 1:
            raise ParameterError("p must lie in [0, 1]")
        object.__setattr__(self, "p", p)

    @property
    def regime(self) -> Regime:
        if self.p < Fraction(1, 2):
            return Regime.CHANGE_AVERSE
        if self.p > Fraction(1, 2):
            return Regime.CHANGE_INCLINED
        return Regime.UNBIASED

    def __str__(self) -> str:
        return format_rational(self.p)


def point_mass(v: int, n: int) -> Belief:
    return Belief(n, {v: Fraction(1)}, label=f"point:{vector_to_string(v, n)}")


def uniform_support(vs: Sequence[int], n: int) -> Belief:
    if not vs:
        raise ParameterError("support must be nonempty")
    if len(set(vs)) != len(vs):
        raise ParameterError("support vectors must be distinct")
    share = Fraction(1, len(vs))
    label = "uniform:" + ",".join(vector_to_string(v, n) for v in vs)
    return Belief(n, {v: share for v in vs}, label=label)


def lexicographic(order: Sequence[int], n: int, strict: bool = False) -> Belief:
    """Weight 2^-i on the i-th vector of ``order``; the last two tie.

    ``order`` must list every vector once, with the all-zeros vector in the
    second-to-last slot and the all-ones vector last.  With ``strict`` the
    last vector gets half the weight of the one before it (weights
    proportional to 2^(|Ω|-i)), so every vector outweighs all later ones
    combined and no two tie.
    """
    size = 1 << n
    if sorted(order) != list(range(size)):
        raise ParameterError("order must be a permutation of all 2^n vectors")
    if order[-2] != 0 or order[-1] != full_mask(n):
        raise ParameterError("order must end with the all-zeros then the all-ones vector")
    if strict:
        den = 2**size - 1
        pmf = {v: Fraction(2 ** (size - i), den) for i, v in enumerate(order, start=1)}
        return Belief(n, pmf, label="lexicographic-strict")
    pmf = {v: Fraction(1, 2**i) for i, v in enumerate(order[:-1], start=1)}
    pmf[order[-1]] = Fraction(1, 2 ** (size - 1))
    return Belief(n, pmf, label="lexicographic")


def iid(p: IIDParameter | Fraction | str, n: int) -> Belief:
    if not isinstance(p, IIDParameter):
        p = IIDParameter(p)
    q = p.p
    pmf = {}
    for v in range(1 << n):
        k = v.bit_count()
        pmf[v] = q**k * (1 - q) ** (n - k)
    return Belief(n, pmf, label=f"iid:{p}")


def iid_weights(p: Fraction, n: int) -> tuple[list[int], int]:
    """Integer weights for iid(p) without building Fractions per vector."""
    a, b = p.numerator, p.denominator
    powers = [a**k * (b - a) ** (n - k) for k in range(n + 1)]
    return [powers[v.bit_count()] for v in range(1 << n)], b**n


def lexicographic_orders(n: int) -> Iterable[list[int]]:
    """Every admissible ordering (all-zeros then all-ones fixed at the end)."""
    full = full_mask(n)
    rest = [v for v in range(1 << n) if v not in (0, full)]
    for perm in itertools.permutations(rest):
        yield list(perm) + [0, full]
