import itertools
import logging
import os
from functools import lru_cache
from typing import Dict, List, Optional, Set, Tuple

import yaml

from controllers.RootSystemController import RootSystemController
from controllers.RuleTableController import RuleTableController
from helpers.config import Config
from models.algebra import CartanSpec
from models.dirac import CASE_TAGS, Case3
from services.ClassificationService import ClassificationService, Grid

logger = logging.getLogger(__name__)

REFERENCE_PATH = os.path.join(os.path.dirname(__file__), "../data/reference_tables.yaml")
STORED_TABLES = ("integrability", "involutivity", "real-index-0", "real-index-2", "real-index-4", "real-index-6")
GENERATED_TABLES = {"sl2": CartanSpec("A", 1), "sl3": CartanSpec("A", 2)}
TABLE_NAMES = STORED_TABLES + tuple(GENERATED_TABLES)

Tags = Tuple[str, ...]


@lru_cache(maxsize=2)
def load_reference_tables(path: str = REFERENCE_PATH) -> Dict[str, object]:
    with open(path, "r", encoding="utf-8") as f:
        return yaml.safe_load(f)


def _tag_key(tags: Tags) -> Tuple[int, ...]:
    return tuple(CASE_TAGS.index(t) for t in tags)


def expand_row(row: List[object]) -> List[Tags]:
    options = [entry if isinstance(entry, list) else [entry] for entry in row]
    return [tuple(str(t) for t in combo) for combo in itertools.product(*options)]


def expand_signs(pattern: str) -> Set[Tuple[int, int, int]]:
    """Read "±,∓,±" as the two sign triples obtained with the upper and the lower signs."""
    symbols = pattern.split(",")
    triples = set()
    for upper in (1, -1):
        triples.add(tuple(upper if s.strip() == "±" else -upper for s in symbols))
    return triples


class TableService:

    def __init__(self, conf=None):
        self.conf = conf or Config()
        self.rules = RuleTableController(self.conf)
        self.root_systems = RootSystemController(self.conf)
        self.classification = ClassificationService(self.conf)
        self.reference = load_reference_tables()

    def canonical(self, tags: Tags) -> Tags:
        """Orientation of a triple as keyed in the rule table, else with the smaller α tag first."""
        if len(tags) != 3:
            return tags
        found = self.rules.match(tags)
        if found is not None:
            return (tags[1], tags[0], tags[2]) if found[1] else tags
        swapped = (tags[1], tags[0], tags[2])
        return min(tags, swapped, key=_tag_key)

    def integrability(self) -> Dict[str, object]:
        return self.reference["integrability"]

    def involutivity(self) -> Dict[str, object]:
        return self.reference["involutivity"]

    def real_index_rows(self, real_index: int) -> List[Dict[str, object]]:
        group = f"real_index_{real_index}"
        rows = self.rules.groups().get(group)
        if rows is None:
            raise ValueError(f"No decision rows for real index {real_index}; expected 0, 2, 4 or 6")
        return [
            {"id": row.id, "cases": [list(options) if len(options) > 1 else options[0] for options in row.cases],
             "condition": row.text}
            for row in rows
        ]

    def accepted_sign_triples(self) -> Set[Tuple[int, int, int]]:
        """Sign triples accepted by the decision rows for three complex-type planes."""
        accepted = set()
        for signs in itertools.product((1, -1), repeat=3):
            if self.rules.triple_predicate(*(Case3(s) for s in signs)):
                accepted.add(signs)
        return accepted

    def stored_sign_triples(self) -> Set[Tuple[int, int, int]]:
        stored = set()
        for pattern in self.integrability()["sign_combinations"]:
            stored |= expand_signs(pattern)
        return stored

    def generated(self, name: str, real_index: Optional[int] = None) -> Dict[int, List[Dict[str, object]]]:
        """
        Regenerate the involutive case-tag listing of a small algebra.

        Every assignment of the default grid is decided by both deciders; a tag
        triple is reported when some parameter choice is involutive under both.
        Rows are annotated with whether the stored listing contains them.
        """
        if name not in GENERATED_TABLES:
            raise ValueError(f"No generated table for {name!r}; expected one of {sorted(GENERATED_TABLES)}")
        rs = self.root_systems.build_root_system(GENERATED_TABLES[name])
        found: Dict[int, Set[Tags]] = {}
        for structure, verdicts in self.classification.enumerate_assignments(rs, Grid(), real_index=real_index):
            involutive, agree = self.classification.involutivity.summarize(verdicts, "both")
            if not (involutive and agree):
                continue
            index = self.classification.model.real_index(structure)
            found.setdefault(index, set()).add(self.canonical(structure.tags()))

        listing = self.reference["listings"][name]
        tables: Dict[int, List[Dict[str, object]]] = {}
        for index in sorted(found):
            listed = set()
            for row in listing.get(f"real_index_{index}", []):
                listed |= {self._unordered(t) for t in expand_row(row)}
            tables[index] = [
                {"cases": list(tags), "listed": self._unordered(tags) in listed}
                for tags in sorted(found[index], key=_tag_key)
            ]
        logger.info(f"Generated {name} tables for real indices {sorted(tables)}")
        return tables

    @staticmethod
    def _unordered(tags: Tags) -> Tags:
        if len(tags) != 3:
            return tags
        first, second = sorted(tags[:2], key=lambda t: CASE_TAGS.index(t))
        return (first, second, tags[2])
