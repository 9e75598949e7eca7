import logging
from fractions import Fraction
from typing import Any, Dict, List, Tuple

from helpers.config import Config
from models.algebra import Root, RootSystem, StructureConstants, combine

logger = logging.getLogger(__name__)


def string_depth(rs: RootSystem, alpha: Root, beta: Root) -> int:
    """Largest p such that beta - p*alpha is a root."""
    p = 0
    while True:
        lower = combine(beta.coeffs, alpha.coeffs, -(p + 1))
        if lower is None or not rs.is_root(lower):
            return p
        p += 1


class _ChevalleySigns:
    """
    Signs of a Chevalley basis fixed by extraspecial pairs.

    Positive pairs are filled in order of the height of their sum; every other
    signed pair is reduced to a positive one through antisymmetry, the
    negation rule and the length-weighted relation for r + s + t = 0.
    """

    def __init__(self, rs: RootSystem, sign: int):
        self.rs = rs
        self.positive: Dict[Tuple[Root, Root], Fraction] = {}
        self.extraspecial: Dict[Root, Tuple[Root, Root]] = {}
        for xi in rs.positive_roots:
            pairs = [
                (a, b) for (a, b), total in rs.sum_table.items()
                if total == xi and rs.index(a) < rs.index(b)
            ]
            if not pairs:
                continue
            pairs.sort(key=lambda pair: rs.index(pair[0]))
            gamma, delta = pairs[0]
            self.extraspecial[xi] = (gamma, delta)
            self._store(gamma, delta, Fraction(sign * (string_depth(rs, gamma, delta) + 1)))
            for alpha, beta in pairs[1:]:
                self._store(alpha, beta, self._special(alpha, beta, gamma, delta, xi))

    def _store(self, a: Root, b: Root, value: Fraction) -> None:
        self.positive[(a, b)] = value
        self.positive[(b, a)] = -value

    def _special(self, alpha: Root, beta: Root, gamma: Root, delta: Root, xi: Root) -> Fraction:
        rs = self.rs
        total = Fraction(0)
        if rs.sum(beta, -gamma) is not None:
            total += self.n(beta, -gamma) * self.n(alpha, -delta) / rs.length(beta - gamma)
        if rs.sum(alpha, -gamma) is not None:
            total += self.n(-gamma, alpha) * self.n(beta, -delta) / rs.length(alpha - gamma)
        return rs.length(xi) / self.positive[(gamma, delta)] * total

    def n(self, r: Root, s: Root) -> Fraction:
        if r.is_positive and s.is_positive:
            return self.positive[(r, s)]
        if not r.is_positive and not s.is_positive:
            return -self.positive[(-r, -s)]
        if not r.is_positive:
            return -self.n(s, r)
        total = r + s
        t = -total
        if total.is_positive:
            return self.rs.length(t) / self.rs.length(r) * self.n(s, t)
        return self.rs.length(t) / self.rs.length(s) * self.n(t, r)


class WeylAlgebraController:

    def __init__(self, conf=None):
        self.conf = conf or Config()

    def structure_constants(self, rs: RootSystem, flip_signs: bool = False) -> StructureConstants:
        """
        Structure constants m_{α,β} = ±(p+1) for every signed pair whose sum is a root.

        Args:
            rs: Root system
            flip_signs: Negate the sign chosen on every extraspecial pair

        Returns:
            StructureConstants over all signed roots
        """
        signs = _ChevalleySigns(rs, -1 if flip_signs else 1)
        table: Dict[Tuple[Root, Root], Fraction] = {}
        roots = list(rs.all_roots())
        for r in roots:
            for s in roots:
                if rs.sum(r, s) is not None:
                    table[(r, s)] = signs.n(r, s)
        logger.debug(f"Structure constants for {rs.spec.name}: {len(table)} nonzero entries")
        return StructureConstants(table=table, flipped=flip_signs)

    def check_structure_identities(self, sc: StructureConstants, rs: RootSystem) -> List[Dict[str, Any]]:
        violations: List[Dict[str, Any]] = []

        def report(identity: str, roots, detail: str):
            violations.append({"identity": identity, "roots": [r.name for r in roots], "detail": detail})

        for (a, b), value in sc.table.items():
            if sc.m(b, a) != -value:
                report("antisymmetry", (a, b), f"m(a,b)={value}, m(b,a)={sc.m(b, a)}")
            if sc.m(-a, -b) != -value:
                report("negation", (a, b), f"m(a,b)={value}, m(-a,-b)={sc.m(-a, -b)}")

        roots = list(rs.all_roots())
        for a in roots:
            for b in roots:
                if rs.sum(a, b) is None:
                    continue
                expected = string_depth(rs, a, b) + 1
                if abs(sc.m(a, b)) != expected:
                    report("magnitude", (a, b), f"|m(a,b)|={abs(sc.m(a, b))}, expected {expected}")

        def bracket(x: Root, y: Root) -> Tuple[Fraction, Root]:
            total = rs.sum(x, y)
            return (sc.m(x, y), total) if total is not None else (Fraction(0), None)

        for a in roots:
            for b in roots:
                if a == -b:
                    continue
                for c in roots:
                    if c == -a or c == -b:
                        continue
                    abc = combine(tuple(x + y for x, y in zip(a.coeffs, b.coeffs)), c.coeffs)
                    if abc is None or not rs.is_root(abc):
                        continue
                    total = Fraction(0)
                    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                        value, xy = bracket(x, y)
                        if xy is not None:
                            total += value * sc.m(xy, z)
                    if total != 0:
                        report("jacobi", (a, b, c), f"cyclic sum {total}")
        if violations:
            logger.warning(f"{len(violations)} structure identity violations for {rs.spec.name}")
        return violations
