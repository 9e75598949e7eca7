import logging
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from helpers.config import Config
from helpers.linalg import as_complex, rank
from models.algebra import Root
from models.dirac import (
    Case1, Case2, Case3, Case41, Case42, DiracStructure, GeneralizedVector,
    PerRootCase, PlaneClass, SubspaceReport,
)

logger = logging.getLogger(__name__)

# Gram matrix of the pairing in the basis (A, S, -S*, A*)
GRAM = np.array(
    [[0, 0, -1, 0],
     [0, 0, 0, -1],
     [-1, 0, 0, 0],
     [0, -1, 0, 0]],
    dtype=complex,
)

# Infinitesimal torus rotation: A -> S, S -> -A, -S* -> A*, A* -> S*
ROTATION = np.array(
    [[0, -1, 0, 0],
     [1, 0, 0, 0],
     [0, 0, 0, -1],
     [0, 0, 1, 0]],
    dtype=complex,
)

Block = np.ndarray


@lru_cache(maxsize=4096)
def _blocks(case: PerRootCase) -> Tuple[Block, Block]:
    if isinstance(case, Case1):
        rows = ((1, 0, 0, 0), (0, 1, 0, 0))
    elif isinstance(case, Case2):
        rows = ((0, 0, 1, 0), (0, 0, 0, 1))
    elif isinstance(case, Case3):
        ie = 1j * case.epsilon
        rows = ((1, ie, 0, 0), (0, 0, -ie, 1))
    elif isinstance(case, Case41):
        r = as_complex(case.ratio)
        rows = ((1, 0, 0, r), (0, 1, -r, 0))
    elif isinstance(case, Case42):
        x = as_complex(case.x)
        q = as_complex(case.a) - 1j
        rows = ((x, 0, 0, q), (0, x, -q, 0))
    else:
        raise ValueError(f"Unsupported per-root case {case!r}")
    g1, g2 = (np.array(row, dtype=complex) for row in rows)
    g1.setflags(write=False)
    g2.setflags(write=False)
    return g1, g2


@lru_cache(maxsize=4096)
def _real_index(case: PerRootCase, tol: float) -> int:
    g1, g2 = _blocks(case)
    return 4 - rank([g1, g2, np.conj(g1), np.conj(g2)], tol)


def case_blocks(case: PerRootCase) -> Tuple[Block, Block]:
    """Generator coordinates of a normalized case inside one root block."""
    return _blocks(case)


def block_pairing(u: Block, v: Block) -> complex:
    return complex(u @ GRAM @ v)


class DiracModelController:

    def __init__(self, conf=None):
        self.conf = conf or Config()

    def _tol(self, tol: Optional[float]) -> float:
        return self.conf.tolerance if tol is None else tol

    def generators(self, case: PerRootCase, root: Root) -> Tuple[GeneralizedVector, GeneralizedVector]:
        g1, g2 = case_blocks(case)
        return GeneralizedVector.on_root(root, g1), GeneralizedVector.on_root(root, g2)

    def pairing(self, v: GeneralizedVector, w: GeneralizedVector) -> complex:
        return sum((block_pairing(block, w.block(root)) for root, block in v.components.items()), 0j)

    def is_isotropic(self, vectors: Sequence[GeneralizedVector], tol: Optional[float] = None) -> bool:
        tol = self._tol(tol)
        for i, v in enumerate(vectors):
            for w in vectors[i:]:
                if abs(self.pairing(v, w)) > tol:
                    return False
        return True

    @staticmethod
    def _single_root(g1: GeneralizedVector, g2: GeneralizedVector) -> Root:
        roots = set(g1.roots) | set(g2.roots)
        if len(roots) != 1:
            raise ValueError(f"Plane generators must live on a single root block, got {sorted(r.name for r in roots)}")
        return roots.pop()

    def classify_plane(self, g1: GeneralizedVector, g2: GeneralizedVector, tol: Optional[float] = None) -> PlaneClass:
        root = self._single_root(g1, g2)
        return self.classify_block(g1.block(root), g2.block(root), tol)

    def classify_block(self, b1: Block, b2: Block, tol: Optional[float] = None) -> PlaneClass:
        """
        Place a plane of one root block in one of the families (a)-(f).

        Args:
            b1, b2: Linearly independent coordinate vectors in (A, S, -S*, A*)
            tol: Zero threshold

        Returns:
            PlaneClass with the family letter and recovered parameters
        """
        tol = self._tol(tol)
        if rank([b1, b2], tol) < 2:
            raise ValueError("Plane generators are linearly dependent")
        if any(abs(block_pairing(u, v)) > tol for u, v in ((b1, b1), (b1, b2), (b2, b2))):
            return PlaneClass(PlaneClass.NOT_ISOTROPIC)

        vectors = np.array([b1[:2], b2[:2]])
        covectors = np.array([b1[2:], b2[2:]])
        vector_rank = rank(vectors, tol)
        if vector_rank == 0:
            return PlaneClass("b")
        if vector_rank == 2:
            # covector part is v M with M skew; M[0][1] is the ratio b/a of family (f)
            shear = np.linalg.solve(vectors, covectors)
            ratio = complex(shear[0][1])
            if abs(ratio) <= tol:
                return PlaneClass("a")
            return PlaneClass("f", {"a": 1 + 0j, "b": ratio})

        row = vectors[0] if np.abs(vectors[0]).max() >= np.abs(vectors[1]).max() else vectors[1]
        a, b = complex(row[0]), complex(row[1])
        if abs(b) <= tol * max(1.0, abs(a)):
            return PlaneClass("c")
        if abs(a) <= tol * max(1.0, abs(b)):
            return PlaneClass("d")
        return PlaneClass("e", {"a": 1 + 0j, "b": b / a})

    def invariant_case(self, plane: PlaneClass, tol: Optional[float] = None) -> Optional[PerRootCase]:
        """Map an invariant plane back to its normalized case, or None."""
        tol = self._tol(tol)
        if plane.family == "a":
            return Case1()
        if plane.family == "b":
            return Case2()
        if plane.family == "e":
            b = plane.params["b"]
            if abs(b.real) <= tol and abs(abs(b.imag) - 1) <= tol:
                return Case3(1 if b.imag > 0 else -1)
            return None
        if plane.family == "f":
            r = plane.params["b"]
            if abs(r.imag) <= tol:
                return Case41(r.real)
            x = -1.0 / r.imag
            return Case42(x, r.real * x)
        return None

    def is_invariant(self, g1: GeneralizedVector, g2: GeneralizedVector, tol: Optional[float] = None) -> bool:
        root = self._single_root(g1, g2)
        return self.is_invariant_block(g1.block(root), g2.block(root), tol)

    def is_invariant_block(self, b1: Block, b2: Block, tol: Optional[float] = None) -> bool:
        tol = self._tol(tol)
        return rank([b1, b2, ROTATION @ b1, ROTATION @ b2], tol) == rank([b1, b2], tol)

    def per_root_real_index(self, case: PerRootCase, tol: Optional[float] = None) -> int:
        return _real_index(case, self._tol(tol))

    def real_index(self, structure: DiracStructure, tol: Optional[float] = None) -> int:
        return sum(self.per_root_real_index(c, tol) for c in structure.assignment.values())

    def root_report(self, case: PerRootCase, tol: Optional[float] = None) -> Dict[str, object]:
        """Complex dimensions of E, E∩Ē, E+Ē, L∩L̄ for one root block, plus the ω_Δ coefficient."""
        tol = self._tol(tol)
        g1, g2 = case_blocks(case)
        vectors = np.array([g1[:2], g2[:2]])
        e = rank(vectors, tol)
        e_plus = rank(np.vstack([vectors, np.conj(vectors)]), tol)
        omega = None
        if e == 2:
            shear = np.linalg.solve(vectors, np.array([g1[2:], g2[2:]]))
            omega = float(np.imag(shear[0][1]))
        return {
            "e": e,
            "e_cap_ebar": 2 * e - e_plus,
            "e_plus_ebar": e_plus,
            "k": self.per_root_real_index(case, tol),
            "order": 2 - e_plus,
            "type": e_plus - e,
            "omega": omega,
        }

    def subspace_report(self, structure: DiracStructure, with_omega: bool = False,
                        tol: Optional[float] = None) -> SubspaceReport:
        totals = {"e": 0, "e_cap_ebar": 0, "e_plus_ebar": 0, "k": 0, "order": 0, "type": 0}
        omega: Dict[str, float] = {}
        for root, case in structure.assignment.items():
            data = self.root_report(case, tol)
            for key in totals:
                totals[key] += data[key]
            if data["omega"] is not None:
                omega[root.name] = data["omega"]
        return SubspaceReport(
            e=totals["e"],
            e_cap_ebar=totals["e_cap_ebar"],
            e_plus_ebar=totals["e_plus_ebar"],
            k=totals["k"],
            order=totals["order"],
            type=totals["type"],
            real_index=totals["k"],
            omega=omega if with_omega else None,
        )

    def plane_subspace_data(self, blocks: List[Tuple[Block, Block]], tol: Optional[float] = None) -> Dict[str, int]:
        """Real index, order and type of raw per-root planes (used after B-transformations)."""
        tol = self._tol(tol)
        real_index = order = type_ = 0
        for b1, b2 in blocks:
            vectors = np.array([b1[:2], b2[:2]])
            e = rank(vectors, tol)
            e_plus = rank(np.vstack([vectors, np.conj(vectors)]), tol)
            real_index += 4 - rank([b1, b2, np.conj(b1), np.conj(b2)], tol)
            order += 2 - e_plus
            type_ += e_plus - e
        return {"real_index": real_index, "order": order, "type": type_}
