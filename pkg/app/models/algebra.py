from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, Optional, Tuple

# Admissible ranks per Cartan family; None means unbounded above.
RANK_BOUNDS = {
    "A": (1, None),
    "B": (2, None),
    "C": (2, None),
    "D": (3, None),
    "E": (6, 8),
    "F": (4, 4),
    "G": (2, 2),
}


@dataclass(frozen=True)
class CartanSpec:
    family: str
    rank: int

    def __post_init__(self):
        if self.family not in RANK_BOUNDS:
            raise ValueError(f"Unknown Cartan family {self.family!r}; expected one of {''.join(RANK_BOUNDS)}")
        if isinstance(self.rank, bool) or not isinstance(self.rank, int):
            raise ValueError(f"Rank must be an integer, got {self.rank!r}")
        low, high = RANK_BOUNDS[self.family]
        if self.rank < low or (high is not None and self.rank > high):
            bound = f"{low}-{high}" if high is not None else f">= {low}"
            raise ValueError(f"Rank {self.rank} is not admissible for type {self.family} (allowed: {bound})")

    @classmethod
    def parse(cls, text: str) -> "CartanSpec":
        """Parse a type name such as "A2" or "e6"."""
        text = (text or "").strip()
        if len(text) < 2 or not text[1:].isdigit():
            raise ValueError(f"Cannot parse Cartan type {text!r}; expected e.g. A2, B3, G2")
        return cls(text[0].upper(), int(text[1:]))

    @property
    def name(self) -> str:
        return f"{self.family}{self.rank}"


@dataclass(frozen=True, order=True)
class Root:
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if any(c > 0 for c in self.coeffs) and any(c < 0 for c in self.coeffs):
            raise ValueError(f"Root coefficients {list(self.coeffs)} mix signs")

    def __add__(self, other: "Root") -> "Root":
        return Root(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "Root":
        return Root(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Root") -> "Root":
        return self + (-other)

    @property
    def height(self) -> int:
        return sum(self.coeffs)

    @property
    def is_positive(self) -> bool:
        return any(c > 0 for c in self.coeffs)

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def name(self) -> str:
        return "[" + ",".join(str(c) for c in self.coeffs) + "]"

    def __str__(self) -> str:
        return self.name


def combine(a: Tuple[int, ...], b: Tuple[int, ...], scale: int = 1) -> Optional[Root]:
    """Return Root(a + scale*b) or None when the coefficients mix signs or vanish."""
    coeffs = tuple(x + scale * y for x, y in zip(a, b))
    if not any(coeffs):
        return None
    if any(c > 0 for c in coeffs) and any(c < 0 for c in coeffs):
        return None
    return Root(coeffs)


@dataclass(frozen=True, eq=False)
class RootSystem:
    spec: CartanSpec
    positive_roots: Tuple[Root, ...]
    cartan_matrix: Tuple[Tuple[int, ...], ...]
    sum_table: Dict[Tuple[Root, Root], Root]
    heights: Dict[Root, int]
    # squared lengths (r, r) of the positive roots in the symmetrized form
    lengths: Dict[Root, Fraction] = field(repr=False)

    @property
    def l(self) -> int:
        return len(self.positive_roots)

    @property
    def rank(self) -> int:
        return self.spec.rank

    @property
    def simple_roots(self) -> Tuple[Root, ...]:
        return tuple(r for r in self.positive_roots if self.heights[r] == 1)

    def index(self, root: Root) -> int:
        return self._positions[root]

    @property
    def _positions(self) -> Dict[Root, int]:
        cached = self.__dict__.get("_position_cache")
        if cached is None:
            cached = {r: i for i, r in enumerate(self.positive_roots)}
            object.__setattr__(self, "_position_cache", cached)
        return cached

    def is_positive_root(self, root: Root) -> bool:
        return root in self._positions

    def is_root(self, root: Root) -> bool:
        return root in self._positions or (-root) in self._positions

    def length(self, root: Root) -> Fraction:
        return self.lengths[root if root.is_positive else -root]

    def sum(self, a: Root, b: Root) -> Optional[Root]:
        """Return a + b when it is a root (any signs), else None."""
        total = combine(a.coeffs, b.coeffs)
        if total is None or not self.is_root(total):
            return None
        return total

    def all_roots(self) -> Iterator[Root]:
        yield from self.positive_roots
        for r in self.positive_roots:
            yield -r

    def root_by_name(self, name: str) -> Root:
        text = name.strip()
        if not (text.startswith("[") and text.endswith("]")):
            raise ValueError(f"Root name {name!r} must look like [c1,...,cn]")
        try:
            coeffs = tuple(int(part) for part in text[1:-1].split(","))
        except ValueError as e:
            raise ValueError(f"Root name {name!r} has non-integer coefficients") from e
        if len(coeffs) != self.rank:
            raise ValueError(f"Root name {name!r} has {len(coeffs)} coefficients, {self.spec.name} needs {self.rank}")
        root = Root(coeffs)
        if root not in self._positions:
            raise ValueError(f"{name} is not a positive root of {self.spec.name}")
        return root

    def height_histogram(self) -> Dict[int, int]:
        histogram: Dict[int, int] = {}
        for r in self.positive_roots:
            histogram[self.heights[r]] = histogram.get(self.heights[r], 0) + 1
        return dict(sorted(histogram.items()))


@dataclass(frozen=True, eq=False)
class StructureConstants:
    table: Dict[Tuple[Root, Root], Fraction]
    flipped: bool = False

    def m(self, a: Root, b: Root) -> Fraction:
        return self.table.get((a, b), Fraction(0))

    def __len__(self) -> int:
        return len(self.table)
