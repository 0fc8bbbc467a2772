"""Binary social-choice functions on n voters, stored as truth tables.

A preference vector ``v`` in {0,1}^n is encoded as an integer with voter ``i``
at bit ``i``.  When written as a string the leftmost character is voter 0, so
``"110"`` is the integer ``0b011 == 3``.

An SCF is a truth table over the 2^n vectors, packed into one integer whose
bit ``k`` is the decision on vector ``k``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator

from constlab.errors import CapacityError, ParameterError

MAX_ENUMERATION_N = 4


def full_mask(n: int) -> int:
    return (1 << n) - 1


def vector_from_string(text: str) -> int:
    """Parse ``"101"`` (voter 0 leftmost) into the integer encoding."""
    if not text or set(text) - {"0", "1"}:
        raise ParameterError(f"not a binary vector: {text!r}")
    return sum(1 << i for i, ch in enumerate(text) if ch == "1")


def vector_to_string(v: int, n: int) -> str:
    return "".join("1" if (v >> i) & 1 else "0" for i in range(n))


def support(v: int, n: int) -> frozenset[int]:
    return frozenset(i for i in range(n) if (v >> i) & 1)


@dataclass(frozen=True, order=True)
class VotingVector:
    """A preference vector over ``n`` voters."""

    n: int
    bits: int

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError("n must be positive")
        if not 0 <= self.bits < (1 << self.n):
            raise ParameterError(f"vector {self.bits} out of range for n={self.n}")

    @classmethod
    def parse(cls, text: str) -> "VotingVector":
        return cls(len(text), vector_from_string(text))

    @property
    def support(self) -> frozenset[int]:
        return support(self.bits, self.n)

    def count(self, x: int) -> int:
        """Number of voters whose preference equals ``x``."""
        ones = self.bits.bit_count()
        return ones if x else self.n - ones

    def __getitem__(self, i: int) -> int:
        return (self.bits >> i) & 1

    def __str__(self) -> str:
        return vector_to_string(self.bits, self.n)


def negate_vector(v: VotingVector) -> VotingVector:
    return VotingVector(v.n, v.bits ^ full_mask(v.n))


_CANONICAL = re.compile(r"^n=(\d+);table=(?:0x)?([0-9a-fA-F]+)$")


@dataclass(frozen=True)
class SCF:
    """A social-choice function as an exact truth table."""

    n: int
    table: int

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError("n must be positive")
        if not 0 <= self.table < (1 << (1 << self.n)):
            raise ParameterError(f"table does not fit 2^{self.n} entries")

    @property
    def size(self) -> int:
        return 1 << self.n

    def __call__(self, v: int | VotingVector) -> int:
        if isinstance(v, VotingVector):
            if v.n != self.n:
                raise ParameterError("vector and SCF disagree on n")
            v = v.bits
        return (self.table >> v) & 1

    def accepted(self) -> list[int]:
        return [v for v in range(self.size) if (self.table >> v) & 1]

    def canonical(self) -> str:
        return f"n={self.n};table={self.table:x}"

    @classmethod
    def from_canonical(cls, text: str) -> "SCF":
        m = _CANONICAL.match(text.strip())
        if not m:
            raise ParameterError(f"not a canonical SCF string: {text!r}")
        return cls(int(m.group(1)), int(m.group(2), 16))

    @classmethod
    def from_function(cls, n: int, fn: Callable[[int], int]) -> "SCF":
        table = 0
        for v in range(1 << n):
            if fn(v):
                table |= 1 << v
        return cls(n, table)

    @classmethod
    def from_accepted(cls, n: int, vectors: Iterable[int | str]) -> "SCF":
        table = 0
        for v in vectors:
            if isinstance(v, str):
                if len(v) != n:
                    raise ParameterError(f"vector {v!r} has wrong length for n={n}")
                v = vector_from_string(v)
            table |= 1 << v
        return cls(n, table)

    def __str__(self) -> str:
        return self.canonical()


def all_scfs(n: int, allow_large: bool = False) -> Iterator[SCF]:
    limit = MAX_ENUMERATION_N if allow_large else 3
    if n > limit:
        raise CapacityError(
            f"enumerating all SCFs at n={n} is not supported "
            f"(limit n<={limit}; n=4 needs the opt-in flag)"
        )
    for t in range(1 << (1 << n)):
        yield SCF(n, t)


# --- named SCFs --------------------------------------------------------------

_KINDS = (
    "unanimity",
    "simple_majority",
    "qualified_majority",
    "dictatorship",
    "anti_dictatorship",
    "oligarchy",
    "consensus_duopoly",
    "oligopoly_with_veto",
    "constant_zero",
    "threshold",
)


@dataclass(frozen=True)
class NamedSCF:
    """A symbolic description of one of the standard rules."""

    kind: str
    voters: tuple[int, ...] = ()
    q: Fraction | None = None
    k: int | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ParameterError(f"unknown SCF kind {self.kind!r}")

    @classmethod
    def unanimity(cls):
        return cls("unanimity")

    @classmethod
    def simple_majority(cls):
        return cls("simple_majority")

    @classmethod
    def qualified_majority(cls, q):
        return cls("qualified_majority", q=Fraction(q))

    @classmethod
    def dictatorship(cls, i: int):
        return cls("dictatorship", (i,))

    @classmethod
    def anti_dictatorship(cls, i: int):
        return cls("anti_dictatorship", (i,))

    @classmethod
    def oligarchy(cls, voters: Iterable[int]):
        return cls("oligarchy", tuple(sorted(set(voters))))

    @classmethod
    def consensus_duopoly(cls, i: int, j: int):
        return cls("consensus_duopoly", (i, j))

    @classmethod
    def oligopoly_with_veto(cls, veto: int, j: int, k: int):
        return cls("oligopoly_with_veto", (veto, j, k))

    @classmethod
    def constant_zero(cls):
        return cls("constant_zero")

    @classmethod
    def threshold(cls, k: int):
        return cls("threshold", k=k)

    @classmethod
    def parse(cls, text: str) -> "NamedSCF":
        """Parse ``kind[:args]``, e.g. ``dictatorship:0`` or ``qualified_majority:2/3``."""
        kind, _, arg = text.strip().partition(":")
        kind = kind.replace("-", "_")
        if kind == "qualified_majority":
            return cls.qualified_majority(Fraction(arg))
        if kind == "threshold":
            return cls.threshold(int(arg))
        voters = tuple(int(x) for x in arg.split(",")) if arg else ()
        if kind == "oligarchy":
            return cls.oligarchy(voters)
        return cls(kind, voters)

    def __str__(self) -> str:
        if self.kind == "qualified_majority":
            return f"qualified_majority:{self.q}"
        if self.kind == "threshold":
            return f"threshold:{self.k}"
        if self.voters:
            return f"{self.kind}:{','.join(map(str, self.voters))}"
        return self.kind


_ARITY = {
    "dictatorship": 1,
    "anti_dictatorship": 1,
    "consensus_duopoly": 2,
    "oligopoly_with_veto": 3,
}


def _check_params(spec: NamedSCF, n: int) -> None:
    if n < 1:
        raise ParameterError("n must be positive")
    for i in spec.voters:
        if not 0 <= i < n:
            raise ParameterError(f"voter index {i} out of range for n={n}")
    want = _ARITY.get(spec.kind)
    if want is not None:
        if len(spec.voters) != want or len(set(spec.voters)) != want:
            raise ParameterError(f"{spec.kind} needs {want} distinct voters")
    elif spec.kind == "oligarchy":
        if not spec.voters:
            raise ParameterError("oligarchy needs a nonempty voter set")
    elif spec.voters:
        raise ParameterError(f"{spec.kind} takes no voter arguments")
    if spec.kind == "qualified_majority":
        if spec.q is None or not Fraction(1, 2) < spec.q <= 1:
            raise ParameterError("q must be a rational in (1/2, 1]")
    if spec.kind == "threshold":
        if spec.k is None or not 0 <= spec.k <= n + 1:
            raise ParameterError(f"threshold k must lie in [0, {n + 1}]")


def materialize(spec: NamedSCF, n: int) -> SCF:
    """Build the exact truth table of a named rule at ``n`` voters."""
    _check_params(spec, n)
    kind, vs = spec.kind, spec.voters
    if kind == "unanimity":
        full = full_mask(n)
        return SCF(n, 1 << full)
    if kind == "simple_majority":
        fn = lambda v: 2 * v.bit_count() > n
    elif kind == "qualified_majority":
        q = spec.q
        fn = lambda v: v.bit_count() > q * n
    elif kind == "dictatorship":
        fn = lambda v: (v >> vs[0]) & 1
    elif kind == "anti_dictatorship":
        fn = lambda v: not (v >> vs[0]) & 1
    elif kind == "oligarchy":
        mask = sum(1 << i for i in vs)
        size = len(vs)
        # strict majority within the set; an even split rejects
        fn = lambda v: 2 * (v & mask).bit_count() > size
    elif kind == "consensus_duopoly":
        mask = (1 << vs[0]) | (1 << vs[1])
        fn = lambda v: v & mask == mask
    elif kind == "oligopoly_with_veto":
        veto, j, k = vs
        fn = lambda v: (v >> veto) & 1 and ((v >> j) & 1 or (v >> k) & 1)
    elif kind == "constant_zero":
        return SCF(n, 0)
    else:
        k = spec.k
        fn = lambda v: v.bit_count() >= k
    return SCF.from_function(n, fn)


def dictatorships(n: int) -> list[SCF]:
    return [materialize(NamedSCF.dictatorship(i), n) for i in range(n)]


def anti_dictatorships(n: int) -> list[SCF]:
    return [materialize(NamedSCF.anti_dictatorship(i), n) for i in range(n)]


# --- structural predicates ---------------------------------------------------


def is_never_negation_agnostic(f: SCF) -> bool:
    full = full_mask(f.n)
    return not any(f(v) and f(v ^ full) for v in range(f.size))


def is_downward_closed(f: SCF) -> bool:
    """Rejected profiles are closed under intersecting their supporter sets."""
    rejected = [v for v in range(f.size) if not f(v)]
    for a, b in itertools.combinations(rejected, 2):
        if f(a & b):
            return False
    return True


def respects_rejective_consensus(f: SCF) -> bool:
    return f(0) == 0


def has_bounded_monotonicity_violation(f: SCF) -> bool:
    size = f.size
    for v1 in f.accepted():
        for v2 in range(size):
            if v2 == v1 or v2 & v1 != v1 or f(v2):
                continue
            added = v2 & ~v1
            for v3 in range(size):
                if v3 & v1 == v1 and not v3 & added and not f(v3):
                    return False
    return True


def has_bounded_downward_sensitivity(f: SCF) -> bool:
    """Accepted profiles with >= 3 supporters lose at most 2 one-voter removals."""
    for v in f.accepted():
        if v.bit_count() < 3:
            continue
        drops = sum(1 for i in range(f.n) if (v >> i) & 1 and not f(v & ~(1 << i)))
        if drops > 2:
            return False
    return True


def has_strong_duo(f: SCF) -> bool:
    return any(f(v) for v in range(f.size) if v.bit_count() == 2)


def necessary_conditions(f: SCF) -> dict[str, bool]:
    """The six predicates any non-constant pessimistic SQB-stable SCF satisfies."""
    return {
        "never_negation_agnostic": is_never_negation_agnostic(f),
        "downward_closed": is_downward_closed(f),
        "respects_rejective_consensus": respects_rejective_consensus(f),
        "bounded_monotonicity_violation": has_bounded_monotonicity_violation(f),
        "bounded_downward_sensitivity": has_bounded_downward_sensitivity(f),
        "strong_duo": has_strong_duo(f),
    }


def entangled_pairs(f: SCF) -> frozenset[tuple[int, int]]:
    """Pairs of voters whose agreement always decides the outcome."""
    pairs = set()
    for i, j in itertools.combinations(range(f.n), 2):
        if all(
            f(v) == (v >> i) & 1
            for v in range(f.size)
            if (v >> i) & 1 == (v >> j) & 1
        ):
            pairs.add((i, j))
    return frozenset(pairs)


@dataclass(frozen=True)
class EntangledClass:
    kind: str
    pairs: frozenset[tuple[int, int]]
    center: int | None = None


def _is_conservative(f: SCF, center: int, partners: set[int]) -> bool:
    for v in range(f.size):
        c = (v >> center) & 1
        if all((v >> j) & 1 != c for j in partners) and f(v):
            return False
    return True


def classify_entangled(f: SCF) -> EntangledClass:
    pairs = entangled_pairs(f)
    if not pairs:
        return EntangledClass("not_entangled", pairs)
    members = set().union(*pairs)
    if len(pairs) == 3 and len(members) == 3:
        return EntangledClass("three_oligopoly", pairs)
    centers = sorted(set.intersection(*(set(p) for p in pairs)))
    if not centers:
        return EntangledClass("other", pairs)
    for c in centers:
        if _is_conservative(f, c, members - {c}):
            return EntangledClass("conservative_flower", pairs, c)
    return EntangledClass("flower", pairs, centers[0])


def is_anonymous(f: SCF) -> bool:
    seen: dict[int, int] = {}
    for v in range(f.size):
        if seen.setdefault(v.bit_count(), f(v)) != f(v):
            return False
    return True


def is_monotone(f: SCF) -> bool:
    for v in f.accepted():
        for i in range(f.n):
            if not f(v | (1 << i)):
                return False
    return True
