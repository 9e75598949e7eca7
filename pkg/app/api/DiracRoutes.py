from typing import Optional
from slowapi import Limiter
from slowapi.util import get_remote_address
from fastapi import APIRouter, HTTPException, Request
from helpers.config import Config
from models.algebra import CartanSpec
from models.models import ClassifyRequest, RootsResponse, SweepRequest, VerifyRequest, VerifyResponse
from controllers.RootSystemController import RootSystemController
from services import ClassificationService, InvolutivityService, TableService
from services.ClassificationService import EnumerationCapExceeded, Grid
from services.InvolutivityService import METHODS
from services.TableService import TABLE_NAMES
from services.helper import (
    StructureFileError, classify_payload, parse_structure, roots_to_json,
    serialize_structure, verify_payload,
)
from api.metrics_routes import record_structure_verified
from celery_tasks.tasks import dispatch_sweep
import logging

router = APIRouter()
logger = logging.getLogger(__name__)

limiter = Limiter(key_func=get_remote_address)


class _State:
    conf = Config()
    root_systems = RootSystemController(conf)
    classification = ClassificationService(conf)
    tables = TableService(conf)


state = _State()


def configure(conf: Config) -> None:
    """Rebuild the shared services for a new configuration."""
    state.conf = conf
    state.root_systems = RootSystemController(conf)
    state.classification = ClassificationService(conf)
    state.tables = TableService(conf)


def _spec(name: str) -> CartanSpec:
    try:
        return CartanSpec.parse(name)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))


def _structure(body):
    try:
        return parse_structure(body.model_dump(), state.conf.tolerance, state.root_systems)
    except StructureFileError as e:
        logger.warning(f"Rejected structure: {e.diagnostics}")
        raise HTTPException(status_code=400, detail=e.diagnostics)


@router.get("/roots/{cartan_type}", response_model=RootsResponse)
async def roots(cartan_type: str):
    rs = state.root_systems.build_root_system(_spec(cartan_type))
    return roots_to_json(rs, state.root_systems.sum_triples(rs))


@router.post("/verify", response_model=VerifyResponse)
async def verify(body: VerifyRequest):
    if body.method not in METHODS:
        raise HTTPException(status_code=400, detail=f"method must be one of {list(METHODS)}")
    structure = _structure(body.structure)
    payload = verify_payload(structure, body.method, state.classification.involutivity, state.classification.model)
    record_structure_verified(payload["algebra"], "involutive" if payload["involutive"] else "not_involutive")
    return payload


@router.post("/classify")
async def classify(body: ClassifyRequest):
    structure = _structure(body.structure)
    return classify_payload(structure, state.classification, with_omega=body.with_omega)


@router.get("/construct/{cartan_type}")
async def construct(cartan_type: str, real_index: int, epsilon: Optional[int] = None):
    rs = state.root_systems.build_root_system(_spec(cartan_type))
    if real_index % 2:
        raise HTTPException(status_code=400, detail=f"real index must be even, got {real_index}")
    try:
        structure = state.classification.construct_with_real_index(rs, real_index // 2, epsilon)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    return serialize_structure(structure)


@router.get("/tables/{which}")
async def tables(which: str, real_index: Optional[int] = None):
    if which not in TABLE_NAMES:
        raise HTTPException(status_code=400, detail=f"Unknown table {which!r}; expected one of {list(TABLE_NAMES)}")
    try:
        if which == "integrability":
            return state.tables.integrability()
        if which == "involutivity":
            return state.tables.involutivity()
        if which.startswith("real-index-"):
            return {"rows": state.tables.real_index_rows(int(which.rsplit("-", 1)[1]))}
        generated = state.tables.generated(which, real_index)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    return {"algebra": which, "tables": {str(k): rows for k, rows in generated.items()}}


@router.post("/sweep")
@limiter.limit(lambda: state.conf.sweep_rate_limit)
async def sweep(request: Request, body: SweepRequest):
    rs = state.root_systems.build_root_system(_spec(body.algebra))
    if body.method not in METHODS:
        raise HTTPException(status_code=400, detail=f"method must be one of {list(METHODS)}")
    try:
        grid = Grid(cases=tuple(body.cases)) if body.cases else Grid()
        summary = dispatch_sweep(rs, grid, state.conf, real_index=body.real_index, method=body.method)
    except EnumerationCapExceeded as e:
        raise HTTPException(status_code=413, detail=str(e))
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    return summary.to_json()
