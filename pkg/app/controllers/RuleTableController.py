import logging
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Tuple

import yaml

from helpers.config import Config
from helpers.linalg import same
from models.dirac import PerRootCase

logger = logging.getLogger(__name__)

RULES_PATH = os.path.join(os.path.dirname(__file__), "../data/involutivity_rules.yaml")
NO_MATCH = "no matching row"

Cases = Tuple[PerRootCase, PerRootCase, PerRootCase]


@dataclass(frozen=True)
class RuleRow:
    id: str
    group: str
    cases: Tuple[Tuple[str, ...], Tuple[str, ...], Tuple[str, ...]]
    condition: str
    text: str

    def matches(self, tags: Tuple[str, str, str]) -> bool:
        return all(tag in allowed for tag, allowed in zip(tags, self.cases))


# Conditions receive the cases in row order (α, β, α+β) and the tolerance.
def _always(ca, cb, cc, tol) -> bool:
    return True


def _sign_balance(ca, cb, cc, tol) -> bool:
    ea, eb, ec = ca.epsilon, cb.epsilon, cc.epsilon
    return ec - ea - eb + ea * eb * ec == 0


def _epsilon_opposite(ca, cb, cc, tol) -> bool:
    return ca.epsilon == -cb.epsilon


def _epsilon_alpha_matches_sum(ca, cb, cc, tol) -> bool:
    return ca.epsilon == cc.epsilon


def _epsilon_beta_matches_sum(ca, cb, cc, tol) -> bool:
    return cb.epsilon == cc.epsilon


def _symplectic_triple(ca, cb, cc, tol) -> bool:
    xa, xb, xc = ca.x, cb.x, cc.x
    first = cc.a * xa * xb - cb.a * xa * xc - ca.a * xb * xc
    second = xa * xb - xa * xc - xb * xc
    return same(first, 0, tol) and same(second, 0, tol)


def _symplectic_beta_matches_sum(ca, cb, cc, tol) -> bool:
    return same(cb.x, cc.x, tol) and same(cb.a, cc.a, tol)


def _symplectic_opposite(ca, cb, cc, tol) -> bool:
    return same(ca.x, -cb.x, tol) and same(ca.a, cb.a, tol)


def _sheared_alpha_symplectic_pair(ca, cb, cc, tol) -> bool:
    return same(cb.x, cc.x, tol) and same(ca.ratio, cc.a / cc.x - cb.a / cb.x, tol)


def _symplectic_pair_sheared_sum(ca, cb, cc, tol) -> bool:
    return same(ca.x, -cb.x, tol) and same(cc.ratio, cb.a / cb.x + ca.a / ca.x, tol)


def _ratio_additive(ca, cb, cc, tol) -> bool:
    return same(cc.ratio, cb.ratio + ca.ratio, tol)


def _ratio_beta_matches_sum(ca, cb, cc, tol) -> bool:
    return same(cb.ratio, cc.ratio, tol)


def _ratio_opposite(ca, cb, cc, tol) -> bool:
    return same(ca.ratio, -cb.ratio, tol)


CONDITIONS: Dict[str, Callable[..., bool]] = {
    "always": _always,
    "sign_balance": _sign_balance,
    "epsilon_opposite": _epsilon_opposite,
    "epsilon_alpha_matches_sum": _epsilon_alpha_matches_sum,
    "epsilon_beta_matches_sum": _epsilon_beta_matches_sum,
    "symplectic_triple": _symplectic_triple,
    "symplectic_beta_matches_sum": _symplectic_beta_matches_sum,
    "symplectic_opposite": _symplectic_opposite,
    "sheared_alpha_symplectic_pair": _sheared_alpha_symplectic_pair,
    "symplectic_pair_sheared_sum": _symplectic_pair_sheared_sum,
    "ratio_additive": _ratio_additive,
    "ratio_beta_matches_sum": _ratio_beta_matches_sum,
    "ratio_opposite": _ratio_opposite,
}


def _as_options(entry) -> Tuple[str, ...]:
    return tuple(str(e) for e in entry) if isinstance(entry, list) else (str(entry),)


@lru_cache(maxsize=4)
def load_rules(path: str = RULES_PATH) -> Tuple[RuleRow, ...]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            raw = yaml.safe_load(f)
    except FileNotFoundError:
        logger.error(f"Rule table not found at {path}")
        raise
    rows = []
    for group, entries in raw.items():
        for entry in entries:
            if entry["condition"] not in CONDITIONS:
                raise ValueError(f"Rule {entry['id']} uses unknown condition {entry['condition']!r}")
            cases = tuple(_as_options(e) for e in entry["cases"])
            if len(cases) != 3:
                raise ValueError(f"Rule {entry['id']} must list exactly three case slots")
            rows.append(RuleRow(id=str(entry["id"]), group=group, cases=cases,
                                condition=entry["condition"], text=entry["text"]))
    logger.debug(f"Loaded {len(rows)} involutivity rules from {path}")
    return tuple(rows)


class RuleTableController:

    def __init__(self, conf=None, rules_path: str = RULES_PATH):
        self.conf = conf or Config()
        self.rules = load_rules(rules_path)

    def groups(self) -> Dict[str, List[RuleRow]]:
        grouped: Dict[str, List[RuleRow]] = {}
        for row in self.rules:
            grouped.setdefault(row.group, []).append(row)
        return grouped

    def match(self, tags: Tuple[str, str, str]) -> Optional[Tuple[RuleRow, bool]]:
        """Find the row for a tag triple; the flag tells whether α and β were exchanged."""
        for row in self.rules:
            if row.matches(tags):
                return row, False
        swapped = (tags[1], tags[0], tags[2])
        for row in self.rules:
            if row.matches(swapped):
                return row, True
        return None

    def evaluate(self, ca: PerRootCase, cb: PerRootCase, cc: PerRootCase,
                 tol: Optional[float] = None) -> Tuple[bool, str]:
        tol = self.conf.tolerance if tol is None else tol
        found = self.match((ca.tag, cb.tag, cc.tag))
        if found is None:
            return False, NO_MATCH
        row, swapped = found
        if swapped:
            ca, cb = cb, ca
        return CONDITIONS[row.condition](ca, cb, cc, tol), row.id

    def triple_predicate(self, ca: PerRootCase, cb: PerRootCase, cc: PerRootCase,
                         tol: Optional[float] = None) -> bool:
        return self.evaluate(ca, cb, cc, tol)[0]
