import logging

from fastapi import APIRouter, HTTPException

from ..core.errors import QuasiGateError
from ..core.rings import parse_ring
from ..core.surface import validate
from ..core.verifier import verify
from ..models import LoopRequest, OpRequest, ScenarioModel, VerifyRequest, word_json
from ..scenario import Scenario, loop_json

logger = logging.getLogger(__name__)

router = APIRouter(tags=["quasigate"])


def _bad_input(exc: QuasiGateError) -> HTTPException:
    logger.info("[API] rejected request: %s", exc)
    return HTTPException(status_code=400, detail=f"{type(exc).__name__}: {exc}")


@router.post("/scenario/validate")
def validate_scenario(scenario: ScenarioModel):
    report = validate(scenario.surface.to_core())
    payload = report.to_json()
    if report.valid:
        try:
            Scenario.from_model(scenario)
        except QuasiGateError as exc:
            payload.update(valid=False, problems=[str(exc)])
        else:
            payload["loops"] = sorted(scenario.loops)
    return payload


@router.post("/scenario/class")
def loop_class(request: LoopRequest):
    try:
        word = Scenario.from_model(request.scenario).class_of(request.loop)
    except QuasiGateError as exc:
        raise _bad_input(exc)
    return {"loop": request.loop, **word_json(word)}


@router.post("/scenario/simplify")
def simplify_loop(request: LoopRequest):
    try:
        scenario = Scenario.from_model(request.scenario)
        result = scenario.simplify(request.loop)
    except QuasiGateError as exc:
        raise _bad_input(exc)
    return {
        "loop": request.loop,
        "class": str(scenario.class_of(request.loop)),
        "moves": result.moves,
        "rounds": result.rounds,
        "result": loop_json(result.loop),
    }


@router.post("/ops/{name}")
def evaluate_op(name: str, request: OpRequest):
    try:
        scenario = Scenario.from_model(request.scenario, ring=request.ring, omega=request.omega, seed=request.seed)
        value = scenario.evaluate(name, request.args, m=request.m, gate=request.gate)
    except QuasiGateError as exc:
        raise _bad_input(exc)
    return {"op": name, "args": request.args, "ring": scenario.ring.name,
            "omega": scenario.omega.bits(), "value": value.to_json()}


@router.post("/verify")
def run_verify(request: VerifyRequest):
    try:
        report = verify(request.theorem, seed=request.seed, trials=request.trials,
                        ring=parse_ring(request.ring), flip_gate_sign=request.flip_gate_sign)
    except QuasiGateError as exc:
        raise _bad_input(exc)
    return report.to_json()
