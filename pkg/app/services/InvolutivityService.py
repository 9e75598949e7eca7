import logging
from typing import Dict, List, Optional, Tuple

from controllers.NijenhuisController import NijenhuisController, NijenhuisForm
from controllers.RootSystemController import RootSystemController
from controllers.RuleTableController import RuleTableController
from controllers.WeylAlgebraController import WeylAlgebraController
from api.metrics_routes import record_decider_evaluation, record_disagreement
from helpers.config import Config
from models.algebra import RootSystem
from models.dirac import DiracStructure, NijenhuisWitness, TripleVerdict

logger = logging.getLogger(__name__)

METHODS = ("table", "oracle", "both")


class InvolutivityService:

    def __init__(self, conf=None, flip_signs: bool = False):
        self.conf = conf or Config()
        self.flip_signs = flip_signs
        self.root_systems = RootSystemController(self.conf)
        self.weyl = WeylAlgebraController(self.conf)
        self.nijenhuis = NijenhuisController(self.conf)
        self.rules = RuleTableController(self.conf)
        self._forms: Dict[str, NijenhuisForm] = {}

    def form_for(self, rs: RootSystem) -> NijenhuisForm:
        form = self._forms.get(rs.spec.name)
        if form is None or form.rs is not rs:
            sc = self.weyl.structure_constants(rs, flip_signs=self.flip_signs)
            form = self.nijenhuis.nijenhuis_form(rs, sc)
            self._forms[rs.spec.name] = form
        return form

    def is_involutive_table(self, structure: DiracStructure) -> Tuple[bool, List[TripleVerdict]]:
        verdicts = []
        for triple in self.form_for(structure.rs).triples:
            cases = tuple(structure.case(r) for r in triple)
            involutive, row_id = self.rules.evaluate(*cases)
            verdicts.append(TripleVerdict(triple=triple, cases=cases, involutive=involutive, condition_id=row_id))
        return all(v.involutive for v in verdicts), verdicts

    def is_involutive_oracle(self, structure: DiracStructure,
                             tol: Optional[float] = None) -> Tuple[bool, Optional[NijenhuisWitness]]:
        return self.nijenhuis.is_involutive_oracle(structure, self.form_for(structure.rs), tol)

    def decide(self, structure: DiracStructure, tol: Optional[float] = None) -> List[TripleVerdict]:
        """
        Per-triple verdicts from both deciders.

        Returns:
            One TripleVerdict per sum triple carrying the table verdict, the
            matching row id and the oracle verdict with its witness
        """
        form = self.form_for(structure.rs)
        verdicts = []
        for triple in form.triples:
            cases = tuple(structure.case(r) for r in triple)
            involutive, row_id = self.rules.evaluate(*cases, tol=tol)
            witness = self.nijenhuis.triple_witness(form, structure, triple, tol)
            verdict = TripleVerdict(
                triple=triple,
                cases=cases,
                involutive=involutive,
                condition_id=row_id,
                witness=witness,
                oracle_involutive=witness is None,
            )
            record_decider_evaluation("table", involutive)
            record_decider_evaluation("oracle", witness is None)
            if not verdict.agrees:
                record_disagreement(structure.rs.spec.name)
                logger.warning(
                    f"Deciders disagree on {[r.name for r in triple]} with cases "
                    f"{[str(c) for c in cases]}: table={involutive}, oracle={witness is None}"
                )
            verdicts.append(verdict)
        return verdicts

    @staticmethod
    def summarize(verdicts: List[TripleVerdict], method: str) -> Tuple[bool, bool]:
        """Return (involutive under method, deciders agree)."""
        if method not in METHODS:
            raise ValueError(f"Unknown method {method!r}; expected one of {METHODS}")
        table_ok = all(v.involutive for v in verdicts)
        oracle_ok = all(v.oracle_involutive for v in verdicts)
        agree = all(v.agrees for v in verdicts)
        if method == "table":
            return table_ok, agree
        if method == "oracle":
            return oracle_ok, agree
        return table_ok and oracle_ok, agree
