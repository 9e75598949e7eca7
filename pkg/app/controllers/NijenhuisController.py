import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from controllers.DiracModelController import case_blocks
from controllers.RootSystemController import RootSystemController
from controllers.WeylAlgebraController import WeylAlgebraController
from helpers.config import Config
from models.algebra import Root, RootSystem, StructureConstants
from models.dirac import DiracStructure, GeneralizedVector, NijenhuisWitness

logger = logging.getLogger(__name__)

# Nonzero values on a root triple (α, β, α+β), as multiples of m_{α,β}.
# Arguments are (label on α, label on β, label on α+β).
LISTED_PATTERNS: Tuple[Tuple[Tuple[str, str, str], int], ...] = (
    (("A", "S", "A*"), 1),
    (("A", "A", "S*"), -1),
    (("S", "S", "S*"), 1),
    (("S", "A", "A*"), 1),
    (("A", "S*", "A"), -1),
    (("A", "A*", "S"), 1),
    (("S", "S*", "S"), -1),
    (("S", "A*", "A"), -1),
    (("A*", "S", "A"), -1),
    (("A*", "A", "S"), 1),
    (("S*", "S", "S"), -1),
    (("S*", "A", "A"), -1),
)

# label -> (coordinate index, sign) in the basis (A, S, -S*, A*)
_LABEL_INDEX = {"A": (0, 1), "S": (1, 1), "-S*": (2, 1), "S*": (2, -1), "A*": (3, 1)}


def _pattern_tensor() -> np.ndarray:
    tensor = np.zeros((4, 4, 4), dtype=complex)
    for labels, sign in LISTED_PATTERNS:
        (i, si), (j, sj), (k, sk) = (_LABEL_INDEX[label] for label in labels)
        tensor[i, j, k] = sign * si * sj * sk
    tensor.setflags(write=False)
    return tensor


PATTERN = _pattern_tensor()

# (slot permutation, sign) for the antisymmetric extension
_PERMUTATIONS = (
    ((0, 1, 2), 1), ((1, 0, 2), -1), ((2, 1, 0), -1),
    ((0, 2, 1), -1), ((1, 2, 0), 1), ((2, 0, 1), 1),
)


@dataclass(frozen=True, eq=False)
class NijenhuisForm:
    rs: RootSystem
    sc: StructureConstants
    triples: List[Tuple[Root, Root, Root]] = field(default_factory=list)

    def base(self, triple: Tuple[Root, Root, Root]) -> Fraction:
        return self.sc.m(triple[0], triple[1])

    def value(self, u: GeneralizedVector, v: GeneralizedVector, w: GeneralizedVector) -> complex:
        args = (u, v, w)
        total = 0j
        for triple in self.triples:
            scale = complex(float(self.base(triple)))
            for order, sign in _PERMUTATIONS:
                x, y, z = (args[p] for p in order)
                bx, by, bz = x.block(triple[0]), y.block(triple[1]), z.block(triple[2])
                if not (bx.any() and by.any() and bz.any()):
                    continue
                total += sign * scale * complex(np.einsum("ijk,i,j,k->", PATTERN, bx, by, bz))
        return total

    def block_values(self, triple: Tuple[Root, Root, Root], ga: np.ndarray, gb: np.ndarray, gc: np.ndarray) -> np.ndarray:
        """Values on generator rows ga, gb, gc of the three root blocks, indexed [a, b, c]."""
        scale = complex(float(self.base(triple)))
        return scale * np.einsum("ijk,ai,bj,ck->abc", PATTERN, ga, gb, gc)


class NijenhuisController:

    def __init__(self, conf=None):
        self.conf = conf or Config()
        self.root_systems = RootSystemController(self.conf)
        self.weyl = WeylAlgebraController(self.conf)

    def nijenhuis_form(self, rs: RootSystem, sc: Optional[StructureConstants] = None) -> NijenhuisForm:
        sc = sc or self.weyl.structure_constants(rs)
        return NijenhuisForm(rs=rs, sc=sc, triples=self.root_systems.sum_triples(rs))

    def nijenhuis(self, form: NijenhuisForm, u: GeneralizedVector, v: GeneralizedVector,
                  w: GeneralizedVector) -> complex:
        return form.value(u, v, w)

    def triple_witness(self, form: NijenhuisForm, structure: DiracStructure, triple: Tuple[Root, Root, Root],
                       tol: Optional[float] = None) -> Optional[NijenhuisWitness]:
        tol = self.conf.tolerance if tol is None else tol
        blocks = [np.array(case_blocks(structure.case(r))) for r in triple]
        values = form.block_values(triple, *blocks)
        hits = np.argwhere(np.abs(values) > tol)
        if len(hits) == 0:
            return None
        a, b, c = (int(i) for i in hits[0])
        return NijenhuisWitness(triple=triple, generator_indices=(a, b, c), value=complex(values[a, b, c]))

    def is_involutive_oracle(self, structure: DiracStructure, form: Optional[NijenhuisForm] = None,
                             tol: Optional[float] = None) -> Tuple[bool, Optional[NijenhuisWitness]]:
        """
        Decide involutivity by evaluating Nij on every generator triple.

        Args:
            structure: Invariant Dirac structure
            form: Precomputed Nijenhuis form for structure.rs
            tol: Zero threshold for Nij values

        Returns:
            (involutive, witness) where witness is the first nonzero evaluation
        """
        form = form or self.nijenhuis_form(structure.rs)
        for triple in form.triples:
            witness = self.triple_witness(form, structure, triple, tol)
            if witness is not None:
                logger.debug(f"Oracle witness: {witness.describe()}")
                return False, witness
        return True, None
