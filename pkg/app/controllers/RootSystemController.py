import logging
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Tuple

from helpers.config import Config
from models.algebra import CartanSpec, Root, RootSystem

logger = logging.getLogger(__name__)

Triple = Tuple[Root, Root, Root]


def cartan_matrix(spec: CartanSpec) -> Tuple[Tuple[int, ...], ...]:
    """
    Cartan matrix in Bourbaki numbering with a[i][j] = 2(α_i, α_j) / (α_i, α_i).

    B places the short simple root last, C the long one, D and E attach
    the branch node to the last position.
    """
    n = spec.rank
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        a[i][i] = 2
    chain = n if spec.family in ("A", "B", "C", "F", "G") else n - 1
    for i in range(chain - 1):
        a[i][i + 1] = a[i + 1][i] = -1

    if spec.family == "B":
        a[n - 2][n - 1], a[n - 1][n - 2] = -1, -2
    elif spec.family == "C":
        a[n - 2][n - 1], a[n - 1][n - 2] = -2, -1
    elif spec.family == "D":
        a[n - 3][n - 1] = a[n - 1][n - 3] = -1
    elif spec.family == "E":
        a[n - 4][n - 1] = a[n - 1][n - 4] = -1
    elif spec.family == "F":
        a[1][2], a[2][1] = -1, -2
    elif spec.family == "G":
        a[0][1], a[1][0] = -3, -1
    return tuple(tuple(row) for row in a)


def _simple_lengths(a: Tuple[Tuple[int, ...], ...]) -> List[Fraction]:
    # a[i][j] * len_i = a[j][i] * len_j along every Dynkin edge
    n = len(a)
    lengths: List[Fraction] = [None] * n
    lengths[0] = Fraction(2)
    frontier = [0]
    while frontier:
        i = frontier.pop()
        for j in range(n):
            if j != i and a[i][j] != 0 and lengths[j] is None:
                lengths[j] = lengths[i] * a[i][j] / a[j][i]
                frontier.append(j)
    shortest = min(lengths)
    return [length * 2 / shortest for length in lengths]


def _closure(a: Tuple[Tuple[int, ...], ...]) -> List[Tuple[int, ...]]:
    n = len(a)
    simple = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    found = set(simple)
    level = list(simple)
    while level:
        next_level = []
        for gamma in level:
            for i in range(n):
                # p: how far the α_i-string through γ extends downwards
                p = 0
                lower = list(gamma)
                while True:
                    lower[i] -= 1
                    if tuple(lower) in found:
                        p += 1
                    else:
                        break
                pairing = sum(gamma[j] * a[i][j] for j in range(n))
                if p - pairing > 0:
                    raised = tuple(c + (1 if k == i else 0) for k, c in enumerate(gamma))
                    if raised not in found:
                        found.add(raised)
                        next_level.append(raised)
        level = next_level
    return sorted(found, key=lambda c: (sum(c), tuple(-x for x in c)))


@lru_cache(maxsize=64)
def _build(spec: CartanSpec) -> RootSystem:
    a = cartan_matrix(spec)
    simple_lengths = _simple_lengths(a)
    n = spec.rank

    def form(x: Tuple[int, ...], y: Tuple[int, ...]) -> Fraction:
        return sum(
            (x[i] * y[j] * a[i][j] * simple_lengths[i] / 2 for i in range(n) for j in range(n)),
            Fraction(0),
        )

    roots = tuple(Root(c) for c in _closure(a))
    positions = set(roots)
    sum_table: Dict[Tuple[Root, Root], Root] = {}
    for x in roots:
        for y in roots:
            total = x + y
            if total in positions:
                sum_table[(x, y)] = total
    return RootSystem(
        spec=spec,
        positive_roots=roots,
        cartan_matrix=a,
        sum_table=sum_table,
        heights={r: r.height for r in roots},
        lengths={r: form(r.coeffs, r.coeffs) for r in roots},
    )


class RootSystemController:

    def __init__(self, conf=None):
        self.conf = conf or Config()

    def build_root_system(self, spec: CartanSpec) -> RootSystem:
        """
        Build the positive system of a Cartan type by root-string closure.

        Args:
            spec: Validated Cartan type

        Returns:
            RootSystem with roots ordered by height, then by coefficients
            with larger leading entries first
        """
        rs = _build(spec)
        logger.debug(f"Root system {spec.name}: {rs.l} positive roots, heights {rs.height_histogram()}")
        return rs

    def sum_triples(self, rs: RootSystem) -> List[Triple]:
        triples = []
        for i, alpha in enumerate(rs.positive_roots):
            for beta in rs.positive_roots[i + 1:]:
                total = rs.sum_table.get((alpha, beta))
                if total is not None:
                    triples.append((alpha, beta, total))
        return triples

    def height(self, rs: RootSystem, root: Root) -> int:
        if not rs.is_positive_root(root):
            raise ValueError(f"{root.name} is not a positive root of {rs.spec.name}")
        return rs.heights[root]
