from dataclasses import dataclass, field
from fractions import Fraction
from typing import ClassVar, Dict, Iterable, Mapping, Optional, Tuple

import numpy as np

from helpers.linalg import Real, is_exact, is_zero, real_to_json
from models.algebra import Root, RootSystem

# Ordered per-root basis: A, S, -S*, A*
BASIS_LABELS = ("A", "S", "-S*", "A*")

_LABEL_COORDS = {
    "A": (1, 0, 0, 0),
    "S": (0, 1, 0, 0),
    "-S*": (0, 0, 1, 0),
    "S*": (0, 0, -1, 0),
    "A*": (0, 0, 0, 1),
}

CASE_TAGS = ("1", "2", "3", "4.1", "4.2")


@dataclass(frozen=True, eq=False)
class GeneralizedVector:
    """Element of (m + m*) ⊗ C, stored as a 4-vector per positive root."""

    components: Mapping[Root, np.ndarray] = field(default_factory=dict)

    @classmethod
    def on_root(cls, root: Root, coords: Iterable[complex]) -> "GeneralizedVector":
        block = np.array([complex(c) for c in coords], dtype=complex)
        if block.shape != (4,):
            raise ValueError("A root block has exactly four coordinates")
        return cls({root: block})

    @classmethod
    def basis(cls, root: Root, label: str) -> "GeneralizedVector":
        if label not in _LABEL_COORDS:
            raise ValueError(f"Unknown basis label {label!r}; expected one of {sorted(_LABEL_COORDS)}")
        return cls.on_root(root, _LABEL_COORDS[label])

    @property
    def roots(self) -> Tuple[Root, ...]:
        return tuple(self.components)

    def block(self, root: Root) -> np.ndarray:
        return self.components.get(root, np.zeros(4, dtype=complex))

    def __add__(self, other: "GeneralizedVector") -> "GeneralizedVector":
        merged = {r: self.block(r).copy() for r in self.components}
        for r, block in other.components.items():
            merged[r] = merged.get(r, np.zeros(4, dtype=complex)) + block
        return GeneralizedVector(merged)


class PerRootCase:
    tag: ClassVar[str]

    def params(self) -> Dict[str, object]:
        return {}

    def to_json(self) -> Dict[str, object]:
        payload: Dict[str, object] = {"case": self.tag}
        for key, value in self.params().items():
            payload[key] = value if key == "epsilon" else real_to_json(value)
        return payload

    def __str__(self) -> str:
        params = ", ".join(f"{k}={v}" for k, v in self.params().items())
        return f"{self.tag}({params})" if params else self.tag


@dataclass(frozen=True)
class Case1(PerRootCase):
    """Tangent plane span{A, S}."""
    tag: ClassVar[str] = "1"


@dataclass(frozen=True)
class Case2(PerRootCase):
    """Cotangent plane span{-S*, A*}."""
    tag: ClassVar[str] = "2"


@dataclass(frozen=True)
class Case3(PerRootCase):
    tag: ClassVar[str] = "3"
    epsilon: int = 1

    def __post_init__(self):
        if self.epsilon not in (1, -1):
            raise ValueError(f"Case 3 needs epsilon = +1 or -1, got {self.epsilon!r}")

    def params(self) -> Dict[str, object]:
        return {"epsilon": self.epsilon}


@dataclass(frozen=True)
class Case41(PerRootCase):
    """span{A + r A*, S + r S*} with real ratio r = b1/a1."""
    tag: ClassVar[str] = "4.1"
    ratio: Real = Fraction(1)

    def __post_init__(self):
        if is_zero(self.ratio, 0.0):
            raise ValueError("Case 4.1 needs b1 != 0")

    @classmethod
    def from_pair(cls, a1, b1, tol: float) -> "Case41":
        if is_zero(a1, 0.0) or is_zero(b1, 0.0):
            raise ValueError("Case 4.1 needs a1 != 0 and b1 != 0")
        if is_exact(a1) and is_exact(b1):
            return cls(Fraction(b1) / Fraction(a1))
        ratio = complex(b1) / complex(a1)
        if abs(ratio.imag) > tol:
            raise ValueError(f"Case 4.1 needs b1/a1 real, got {ratio}")
        return cls(ratio.real)

    @property
    def a1(self) -> Real:
        return Fraction(1)

    @property
    def b1(self) -> Real:
        return self.ratio

    def params(self) -> Dict[str, object]:
        return {"a1": self.a1, "b1": self.b1}


@dataclass(frozen=True)
class Case42(PerRootCase):
    """span{x A + (a - i) A*, x S + (a - i) S*} with real x != 0."""
    tag: ClassVar[str] = "4.2"
    x: Real = Fraction(1)
    a: Real = Fraction(0)

    def __post_init__(self):
        if is_zero(self.x, 0.0):
            raise ValueError("Case 4.2 needs x != 0")

    def params(self) -> Dict[str, object]:
        return {"x": self.x, "a": self.a}


@dataclass(frozen=True, eq=False)
class DiracStructure:
    rs: RootSystem
    assignment: Mapping[Root, PerRootCase]

    def __post_init__(self):
        missing = [r.name for r in self.rs.positive_roots if r not in self.assignment]
        extra = [r.name for r in self.assignment if not self.rs.is_positive_root(r)]
        if missing or extra:
            raise ValueError(f"Assignment must cover each positive root once (missing: {missing}, unknown: {extra})")
        ordered = {r: self.assignment[r] for r in self.rs.positive_roots}
        object.__setattr__(self, "assignment", ordered)

    @classmethod
    def from_cases(cls, rs: RootSystem, cases: Iterable[PerRootCase]) -> "DiracStructure":
        """Assign cases to the positive roots in their canonical order."""
        cases = list(cases)
        if len(cases) != rs.l:
            raise ValueError(f"{rs.spec.name} has {rs.l} positive roots, got {len(cases)} cases")
        return cls(rs, dict(zip(rs.positive_roots, cases)))

    def case(self, root: Root) -> PerRootCase:
        return self.assignment[root]

    def tags(self) -> Tuple[str, ...]:
        return tuple(c.tag for c in self.assignment.values())

    def swapped(self, a: Root, b: Root) -> "DiracStructure":
        assignment = dict(self.assignment)
        assignment[a], assignment[b] = assignment[b], assignment[a]
        return DiracStructure(self.rs, assignment)


@dataclass(frozen=True)
class SubspaceReport:
    e: int
    e_cap_ebar: int
    e_plus_ebar: int
    k: int
    order: int
    type: int
    real_index: int
    omega: Optional[Dict[str, float]] = None

    def __post_init__(self):
        if self.order > self.real_index:
            raise ValueError(f"order {self.order} exceeds real index {self.real_index}")


@dataclass(frozen=True)
class PlaneClass:
    """Family (a)-(f) of a maximal isotropic plane in one root block."""
    family: str
    params: Dict[str, complex] = field(default_factory=dict)

    NOT_ISOTROPIC: ClassVar[str] = "not maximal isotropic"

    @property
    def is_isotropic(self) -> bool:
        return self.family != self.NOT_ISOTROPIC


@dataclass(frozen=True)
class RootPlane:
    root: Root
    generators: Tuple[np.ndarray, np.ndarray] = field(compare=False)
    case: Optional[PerRootCase] = None


@dataclass(frozen=True, eq=False)
class BField:
    coefficients: Mapping[Root, Real] = field(default_factory=dict)

    def coefficient(self, root: Root) -> Real:
        return self.coefficients.get(root, 0)


@dataclass(frozen=True)
class NormalForm:
    """
    B-transformation class of one root plane.

    (a) tangent, (b) cotangent, (c) complex type with sign epsilon, and
    (d) symplectic type with real x. The (d) representative is Case42(x, 0),
    i.e. span{x A - i A*, x S - i S*} = span{A - (i/x) A*, S - (i/x) S*},
    so its omega coefficient is -1/x. Writing the plane as A + (i/x') A*
    gives x' = -x.
    """
    tag: str
    epsilon: Optional[int] = None
    x: Optional[Real] = None

    LABELS: ClassVar[Dict[str, str]] = {
        "a": "tangent",
        "b": "cotangent",
        "c": "complex type",
        "d": "symplectic type",
    }

    def __post_init__(self):
        if self.tag not in self.LABELS:
            raise ValueError(f"Unknown normal form tag {self.tag!r}")
        if (self.tag == "c") != (self.epsilon is not None):
            raise ValueError("Only the complex-type normal form carries epsilon")
        if (self.tag == "d") != (self.x is not None):
            raise ValueError("Only the symplectic-type normal form carries x")

    def __str__(self) -> str:
        if self.tag == "c":
            return f"(c) {self.LABELS['c']}, epsilon={self.epsilon:+d}"
        if self.tag == "d":
            return f"(d) {self.LABELS['d']}, x={self.x}"
        return f"({self.tag}) {self.LABELS[self.tag]}"


@dataclass(frozen=True)
class NijenhuisWitness:
    triple: Tuple[Root, Root, Root]
    generator_indices: Tuple[int, int, int]
    value: complex

    def describe(self) -> str:
        names = ", ".join(f"g{i + 1}[{r.name}]" for r, i in zip(self.triple, self.generator_indices))
        return f"Nij({names}) = {self.value:.6g}"


@dataclass(frozen=True)
class TripleVerdict:
    triple: Tuple[Root, Root, Root]
    cases: Tuple[PerRootCase, PerRootCase, PerRootCase]
    involutive: bool
    condition_id: str
    witness: Optional[NijenhuisWitness] = None
    oracle_involutive: Optional[bool] = None

    def __post_init__(self):
        if self.oracle_involutive is not None and self.oracle_involutive != (self.witness is None):
            raise ValueError("Oracle verdict and witness disagree")

    @property
    def agrees(self) -> bool:
        return self.oracle_involutive is None or self.oracle_involutive == self.involutive

    @property
    def tags(self) -> Tuple[str, str, str]:
        return tuple(c.tag for c in self.cases)
