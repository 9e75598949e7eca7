import json
import logging
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from controllers.RootSystemController import RootSystemController
from helpers.linalg import real_to_json, to_real
from models.algebra import CartanSpec, RootSystem
from models.dirac import (
    Case1, Case2, Case3, Case41, Case42, DiracStructure, PerRootCase,
    SubspaceReport, TripleVerdict,
)
from models.models import CaseEntry, StructureFile

logger = logging.getLogger(__name__)


class StructureFileError(ValueError):
    """A structure file failed validation; diagnostics name the offending roots."""

    def __init__(self, diagnostics: List[str]):
        super().__init__("; ".join(diagnostics))
        self.diagnostics = diagnostics


def _to_complex_or_real(value, field: str):
    if isinstance(value, list):
        if len(value) != 2:
            raise ValueError(f"{field}: complex values are written as [re, im]")
        re, im = (to_real(v, field) for v in value)
        return re if im == 0 else complex(float(re), float(im))
    return to_real(value, field)


def case_from_entry(entry: CaseEntry, tol: float) -> PerRootCase:
    tag = entry.case.strip()
    if tag == "1":
        return Case1()
    if tag == "2":
        return Case2()
    if tag == "3":
        if entry.epsilon is None:
            raise ValueError("case 3 needs epsilon")
        return Case3(entry.epsilon)
    if tag == "4.1":
        if entry.a1 is None or entry.b1 is None:
            raise ValueError("case 4.1 needs a1 and b1")
        return Case41.from_pair(_to_complex_or_real(entry.a1, "a1"), _to_complex_or_real(entry.b1, "b1"), tol)
    if tag == "4.2":
        if entry.x is None or entry.a is None:
            raise ValueError("case 4.2 needs x and a")
        return Case42(to_real(entry.x, "x"), to_real(entry.a, "a"))
    raise ValueError(f"unknown case {entry.case!r}; expected 1, 2, 3, 4.1 or 4.2")


def parse_structure(data: Dict[str, Any], tol: float,
                    root_systems: Optional[RootSystemController] = None) -> DiracStructure:
    """
    Validate a structure document and build the DiracStructure it describes.

    Raises:
        StructureFileError: with one diagnostic per problem
    """
    root_systems = root_systems or RootSystemController()
    try:
        model = data if isinstance(data, StructureFile) else StructureFile.model_validate(data)
    except ValidationError as e:
        raise StructureFileError([f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors()])

    try:
        spec = CartanSpec(model.algebra.family.strip().upper(), model.algebra.rank)
    except ValueError as e:
        raise StructureFileError([f"algebra: {e}"])
    rs = root_systems.build_root_system(spec)

    diagnostics: List[str] = []
    assignment = {}
    rejected = set()
    for name, entry in model.assignment.items():
        try:
            root = rs.root_by_name(name)
        except ValueError as e:
            diagnostics.append(str(e))
            continue
        if root in assignment:
            diagnostics.append(f"{name}: root assigned more than once")
            continue
        try:
            assignment[root] = case_from_entry(entry, tol)
        except ValueError as e:
            rejected.add(root)
            diagnostics.append(f"{root.name}: {e}")
    for root in rs.positive_roots:
        if root not in assignment and root not in rejected:
            diagnostics.append(f"{root.name}: missing from assignment")
    if diagnostics:
        logger.warning(f"Structure file rejected with {len(diagnostics)} problems")
        raise StructureFileError(diagnostics)
    return DiracStructure(rs, assignment)


def load_structure_file(path: str, tol: float, root_systems: Optional[RootSystemController] = None) -> DiracStructure:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except FileNotFoundError:
        raise StructureFileError([f"{path}: file not found"])
    except json.JSONDecodeError as e:
        raise StructureFileError([f"{path}: invalid JSON ({e.msg} at line {e.lineno})"])
    return parse_structure(data, tol, root_systems)


def serialize_structure(structure: DiracStructure) -> Dict[str, Any]:
    spec = structure.rs.spec
    return {
        "algebra": {"family": spec.family, "rank": spec.rank},
        "assignment": {root.name: case.to_json() for root, case in structure.assignment.items()},
    }


def verdict_to_json(verdict: TripleVerdict) -> Dict[str, Any]:
    return {
        "triple": [r.name for r in verdict.triple],
        "cases": [c.to_json() for c in verdict.cases],
        "involutive": verdict.involutive,
        "condition_id": verdict.condition_id,
        "oracle_involutive": verdict.oracle_involutive,
        "witness": verdict.witness.describe() if verdict.witness else None,
    }


def report_to_json(report: SubspaceReport) -> Dict[str, Any]:
    payload = {
        "e": report.e,
        "e_cap_ebar": report.e_cap_ebar,
        "e_plus_ebar": report.e_plus_ebar,
        "k": report.k,
        "order": report.order,
        "type": report.type,
        "real_index": report.real_index,
    }
    if report.omega is not None:
        payload["omega"] = report.omega
    return payload


def roots_to_json(rs: RootSystem, triples) -> Dict[str, Any]:
    return {
        "algebra": rs.spec.name,
        "positive_roots": [{"root": r.name, "height": rs.heights[r]} for r in rs.positive_roots],
        "triples": [[r.name for r in t] for t in triples],
        "heights": {str(h): n for h, n in rs.height_histogram().items()},
    }


def verify_payload(structure: DiracStructure, method: str, involutivity, model) -> Dict[str, Any]:
    """Combined verdicts, totals and subspace data of one structure, ready for JSON."""
    verdicts = involutivity.decide(structure)
    involutive, agree = involutivity.summarize(verdicts, method)
    return {
        "algebra": structure.rs.spec.name,
        "method": method,
        "involutive": involutive,
        "agree": agree,
        "real_index": model.real_index(structure),
        "report": report_to_json(model.subspace_report(structure)),
        "verdicts": [verdict_to_json(v) for v in verdicts],
    }


def classify_payload(structure: DiracStructure, classification, with_omega: bool = False) -> Dict[str, Any]:
    """Per-root B-normal forms and subspace data plus the B-field that reaches them."""
    model = classification.model
    bfield = classification.trivializing_b_field(structure)
    roots = []
    for root, case in structure.assignment.items():
        form = classification.b_normal_form(case)
        data = model.root_report(case)
        roots.append({
            "root": root.name,
            "case": case.to_json(),
            "normal_form": form.tag,
            "normal_form_text": str(form),
            "real_index": data["k"],
            "order": data["order"],
            "type": data["type"],
        })
    return {
        "algebra": structure.rs.spec.name,
        "roots": roots,
        "b_field": {r.name: real_to_json(b) for r, b in bfield.coefficients.items()},
        "report": report_to_json(model.subspace_report(structure, with_omega=with_omega)),
    }
