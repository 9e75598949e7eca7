import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from controllers.DiracModelController import DiracModelController, case_blocks
from helpers.config import Config
from helpers.linalg import Real, as_complex, is_exact
from models.algebra import RootSystem
from models.dirac import (
    BField, Case1, Case2, Case3, Case41, Case42, CASE_TAGS, DiracStructure,
    NormalForm, PerRootCase, RootPlane, TripleVerdict,
)
from services.InvolutivityService import InvolutivityService

logger = logging.getLogger(__name__)

AGREEMENT_FILTERS = (None, "agree", "disagree")


class EnumerationCapExceeded(ValueError):
    def __init__(self, count: int, cap: int):
        super().__init__(f"Grid yields {count} assignments, above the cap of {cap}")
        self.count = count
        self.cap = cap


@dataclass(frozen=True)
class Grid:
    """Per-root case/parameter grid for enumeration."""
    cases: Tuple[str, ...] = CASE_TAGS
    epsilons: Tuple[int, ...] = (1, -1)
    ratios: Tuple[Real, ...] = (Fraction(-2), Fraction(-1), Fraction(1), Fraction(2))
    xs: Tuple[Real, ...] = (Fraction(-1), Fraction(1), Fraction(2))
    offsets: Tuple[Real, ...] = (Fraction(-1), Fraction(0), Fraction(1))

    def __post_init__(self):
        unknown = [c for c in self.cases if c not in CASE_TAGS]
        if unknown:
            raise ValueError(f"Unknown case tags in grid: {unknown}")

    def options(self) -> List[PerRootCase]:
        options: List[PerRootCase] = []
        if "1" in self.cases:
            options.append(Case1())
        if "2" in self.cases:
            options.append(Case2())
        if "3" in self.cases:
            options.extend(Case3(e) for e in self.epsilons)
        if "4.1" in self.cases:
            options.extend(Case41(r) for r in self.ratios)
        if "4.2" in self.cases:
            options.extend(Case42(x, a) for x in self.xs for a in self.offsets)
        return options

    def to_json(self) -> Dict[str, list]:
        return {
            "cases": list(self.cases),
            "epsilons": list(self.epsilons),
            "ratios": [str(r) for r in self.ratios],
            "xs": [str(x) for x in self.xs],
            "offsets": [str(a) for a in self.offsets],
        }

    @classmethod
    def from_json(cls, data: Dict[str, list]) -> "Grid":
        return cls(
            cases=tuple(data["cases"]),
            epsilons=tuple(int(e) for e in data["epsilons"]),
            ratios=tuple(Fraction(r) for r in data["ratios"]),
            xs=tuple(Fraction(x) for x in data["xs"]),
            offsets=tuple(Fraction(a) for a in data["offsets"]),
        )


@dataclass
class SweepSummary:
    spec: str
    total: int = 0
    involutive: int = 0
    agreements: int = 0
    by_real_index: Dict[int, Dict[str, int]] = field(default_factory=dict)
    disagreements: List[Dict[str, object]] = field(default_factory=list)

    def add(self, real_index: int, involutive: bool, agree: bool) -> None:
        self.total += 1
        bucket = self.by_real_index.setdefault(real_index, {"total": 0, "involutive": 0})
        bucket["total"] += 1
        if involutive:
            self.involutive += 1
            bucket["involutive"] += 1
        if agree:
            self.agreements += 1

    def merge(self, other: "SweepSummary") -> None:
        self.total += other.total
        self.involutive += other.involutive
        self.agreements += other.agreements
        for index, counts in other.by_real_index.items():
            bucket = self.by_real_index.setdefault(index, {"total": 0, "involutive": 0})
            bucket["total"] += counts["total"]
            bucket["involutive"] += counts["involutive"]
        self.disagreements.extend(other.disagreements)

    @property
    def agreement_rate(self) -> float:
        return 1.0 if self.total == 0 else self.agreements / self.total

    def to_json(self) -> Dict[str, object]:
        return {
            "spec": self.spec,
            "total": self.total,
            "involutive": self.involutive,
            "agreements": self.agreements,
            "agreement_rate": self.agreement_rate,
            "by_real_index": {str(k): v for k, v in sorted(self.by_real_index.items())},
            "disagreements": sorted(self.disagreements, key=lambda d: d["index"]),
        }

    @classmethod
    def from_json(cls, data: Dict[str, object]) -> "SweepSummary":
        return cls(
            spec=data["spec"],
            total=data["total"],
            involutive=data["involutive"],
            agreements=data["agreements"],
            by_real_index={int(k): dict(v) for k, v in data["by_real_index"].items()},
            disagreements=list(data["disagreements"]),
        )


class ClassificationService:

    def __init__(self, conf=None, involutivity: Optional[InvolutivityService] = None):
        self.conf = conf or Config()
        self.model = DiracModelController(self.conf)
        self.involutivity = involutivity or InvolutivityService(self.conf)

    def construct_with_real_index(self, rs: RootSystem, k: int, epsilon: Optional[int] = None) -> DiracStructure:
        """
        Involutive structure of real index 2k.

        The k lowest roots in height order get the cotangent case, every other
        root the complex-type case with one common sign. A triple never has a
        cotangent sum above a complex-type summand, so only the shapes
        (3,3,3), (2,3,3), (3,2,3), (2,2,3) and (2,2,2) occur.
        """
        if isinstance(k, bool) or not isinstance(k, int) or not 0 <= k <= rs.l:
            raise ValueError(f"k must be an integer between 0 and {rs.l} for {rs.spec.name}, got {k!r}")
        sign = self.conf.default_epsilon if epsilon is None else epsilon
        cases = [Case2() if i < k else Case3(sign) for i in range(rs.l)]
        structure = DiracStructure.from_cases(rs, cases)
        logger.info(f"Constructed {rs.spec.name} structure with real index {2 * k}")
        return structure

    @staticmethod
    def shear_block(block: np.ndarray, b: Real) -> np.ndarray:
        """X + ξ -> X + ξ + i_X B on one root block."""
        b = as_complex(b)
        sheared = np.array(block, dtype=complex)
        sheared[2] -= b * block[1]
        sheared[3] += b * block[0]
        return sheared

    def apply_b_field(self, structure: DiracStructure, bfield: BField) -> List[RootPlane]:
        planes = []
        for root, case in structure.assignment.items():
            b = bfield.coefficient(root)
            g1, g2 = (self.shear_block(g, b) for g in case_blocks(case))
            plane = self.model.classify_block(g1, g2)
            image = self.model.invariant_case(plane) if plane.is_isotropic else None
            planes.append(RootPlane(root=root, generators=(g1, g2), case=image))
        return planes

    @staticmethod
    def trivializing_b_field(structure: DiracStructure) -> BField:
        """B-field that shears every Case 4.1 to Case 1 and removes a from every Case 4.2."""
        coefficients = {}
        for root, case in structure.assignment.items():
            if isinstance(case, Case41):
                coefficients[root] = -case.ratio
            elif isinstance(case, Case42):
                coefficients[root] = -case.a / case.x
        return BField(coefficients)

    @staticmethod
    def b_normal_form(case: PerRootCase) -> NormalForm:
        if isinstance(case, (Case1, Case41)):
            return NormalForm("a")
        if isinstance(case, Case2):
            return NormalForm("b")
        if isinstance(case, Case3):
            return NormalForm("c", epsilon=case.epsilon)
        if isinstance(case, Case42):
            return NormalForm("d", x=case.x)
        raise ValueError(f"Unsupported per-root case {case!r}")

    @staticmethod
    def normal_form_case(form: NormalForm) -> PerRootCase:
        """Representative case of a normal form (the symplectic one is Case 4.2 with a = 0)."""
        if form.tag == "a":
            return Case1()
        if form.tag == "b":
            return Case2()
        if form.tag == "c":
            return Case3(form.epsilon)
        return Case42(form.x, Fraction(0) if is_exact(form.x) else 0.0)

    def count_assignments(self, rs: RootSystem, grid: Grid) -> int:
        return len(grid.options()) ** rs.l

    def check_cap(self, rs: RootSystem, grid: Grid, cap: Optional[int] = None) -> int:
        cap = self.conf.enumeration_cap if cap is None else cap
        count = self.count_assignments(rs, grid)
        if count > cap:
            logger.warning(f"Refusing to enumerate {count} assignments on {rs.spec.name} (cap {cap})")
            raise EnumerationCapExceeded(count, cap)
        return count

    def enumerate_assignments(self, rs: RootSystem, grid: Grid, real_index: Optional[int] = None,
                              agreement: Optional[str] = None, cap: Optional[int] = None,
                              start: int = 0, stop: Optional[int] = None
                              ) -> Iterator[Tuple[DiracStructure, List[TripleVerdict]]]:
        """
        Lazily yield every assignment of the grid with verdicts from both deciders.

        Args:
            rs: Root system
            grid: Per-root options
            real_index: Keep only structures of this real index
            agreement: None, "agree" or "disagree" between the deciders
            cap: Override of the configured enumeration cap
            start, stop: Index range in itertools.product order

        Yields:
            (structure, verdicts) pairs
        """
        for _, structure, verdicts in self._indexed(rs, grid, real_index, agreement, cap, start, stop):
            yield structure, verdicts

    def _indexed(self, rs: RootSystem, grid: Grid, real_index: Optional[int], agreement: Optional[str],
                 cap: Optional[int], start: int, stop: Optional[int]
                 ) -> Iterator[Tuple[int, DiracStructure, List[TripleVerdict]]]:
        if agreement not in AGREEMENT_FILTERS:
            raise ValueError(f"agreement filter must be one of {AGREEMENT_FILTERS}")
        count = self.check_cap(rs, grid, cap)
        options = grid.options()
        option_index = [self.model.per_root_real_index(c) for c in options]
        stop = count if stop is None else min(stop, count)
        digits = range(len(options))
        product = itertools.islice(itertools.product(digits, repeat=rs.l), start, stop)
        for index, picks in enumerate(product, start):
            if real_index is not None and sum(option_index[p] for p in picks) != real_index:
                continue
            structure = DiracStructure.from_cases(rs, [options[p] for p in picks])
            verdicts = self.involutivity.decide(structure)
            if agreement is not None and (agreement == "agree") != all(v.agrees for v in verdicts):
                continue
            yield index, structure, verdicts

    def sweep(self, rs: RootSystem, grid: Grid, real_index: Optional[int] = None, cap: Optional[int] = None,
              start: int = 0, stop: Optional[int] = None, method: str = "both") -> SweepSummary:
        summary = SweepSummary(spec=rs.spec.name)
        for index, structure, verdicts in self._indexed(rs, grid, real_index, None, cap, start, stop):
            involutive, agree = self.involutivity.summarize(verdicts, method)
            summary.add(self.model.real_index(structure), involutive, agree)
            if not agree:
                summary.disagreements.append({
                    "index": index,
                    "assignment": {r.name: c.to_json() for r, c in structure.assignment.items()},
                    "triples": [
                        {
                            "triple": [r.name for r in v.triple],
                            "table": v.involutive,
                            "oracle": v.oracle_involutive,
                            "row": v.condition_id,
                        }
                        for v in verdicts if not v.agrees
                    ],
                })
        return summary
