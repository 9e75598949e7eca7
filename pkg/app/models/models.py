from pydantic import BaseModel, Field
from typing import List, Optional, Dict, Any, Union

Scalar = Union[int, float, str]
ComplexScalar = Union[int, float, str, List[Scalar]]


class AlgebraModel(BaseModel):
    family: str = Field(..., example="A", description="Cartan family A-G")
    rank: int = Field(..., example=2, description="Rank of the simple Lie algebra")


class CaseEntry(BaseModel):
    case: str = Field(..., example="3", description="Per-root case: 1, 2, 3, 4.1 or 4.2")
    epsilon: Optional[int] = Field(None, example=1, description="Sign for case 3")
    a1: Optional[ComplexScalar] = Field(None, example="1", description="Case 4.1 coefficient of A; [re, im] for complex values")
    b1: Optional[ComplexScalar] = Field(None, example="2", description="Case 4.1 coefficient of A*; b1/a1 must be real")
    x: Optional[Scalar] = Field(None, example="1", description="Case 4.2 real x != 0")
    a: Optional[Scalar] = Field(None, example="0", description="Case 4.2 real offset a")


class StructureFile(BaseModel):
    algebra: AlgebraModel
    assignment: Dict[str, CaseEntry] = Field(..., description="Root name such as [1,1] mapped to its case")


class VerifyRequest(BaseModel):
    structure: StructureFile
    method: str = Field("both", example="both", description="table, oracle or both")


class ClassifyRequest(BaseModel):
    structure: StructureFile
    with_omega: bool = Field(False, description="Include the ω_Δ coefficients")


class SweepRequest(BaseModel):
    algebra: str = Field(..., example="A2")
    cases: Optional[List[str]] = Field(None, example=["1", "2"], description="Restrict the per-root cases")
    real_index: Optional[int] = Field(None, example=4)
    method: str = Field("both", example="both")


class TripleVerdictModel(BaseModel):
    triple: List[str]
    cases: List[Dict[str, Any]]
    involutive: bool
    condition_id: str
    oracle_involutive: Optional[bool] = None
    witness: Optional[str] = None


class SubspaceReportModel(BaseModel):
    e: int
    e_cap_ebar: int
    e_plus_ebar: int
    k: int
    order: int
    type: int
    real_index: int
    omega: Optional[Dict[str, float]] = None


class VerifyResponse(BaseModel):
    algebra: str
    method: str
    involutive: bool
    agree: bool
    real_index: int
    report: SubspaceReportModel
    verdicts: List[TripleVerdictModel]


class RootsResponse(BaseModel):
    algebra: str
    positive_roots: List[Dict[str, Any]]
    triples: List[List[str]]
    heights: Dict[str, int]
