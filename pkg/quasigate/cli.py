"""
qg: command-line front end.

Exit codes: 0 success, 1 an identity failed, 2 bad input.
"""
import functools
import json
import logging
from typing import Optional

import click
import uvicorn

from . import config
from .core.rings import parse_ring
from .core.verifier import THEOREMS, verify
from .core.surface import validate
from .models import word_json
from .scenario import INPUT_ERRORS, OPERATIONS, Scenario, loop_json, read_model

logger = logging.getLogger(__name__)


def _emit(payload) -> None:
    click.echo(json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=2))


def guarded(command):
    """Report bad input on stderr with exit code 2."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except INPUT_ERRORS as exc:
            click.echo(f"error: {exc}", err=True)
            raise SystemExit(2)

    return wrapper


scenario_option = click.option("--scenario", "scenario_path", required=True, type=click.Path(dir_okay=False),
                               help="Scenario JSON file")
ring_option = click.option("--ring", default=None, help="Coefficient ring: Z, Q or Zn:<n>")
omega_option = click.option("--omega", default=None, help="Gate orientation bitstring, 1 = increasing u")
seed_option = click.option("--seed", default=None, type=click.IntRange(min=0), help="RNG seed")
json_option = click.option("--json", "as_json", is_flag=True, help="Machine readable output")


@click.group()
@click.option("--log-level", default=None, help="Overrides QG_LOG_LEVEL")
def qg(log_level: Optional[str]):
    """Loop operations on quasi-surfaces."""
    config.configure_logging(log_level)


@qg.command("validate")
@scenario_option
@json_option
@guarded
def validate_command(scenario_path: str, as_json: bool):
    """Check the surface and every loop of a scenario."""
    model = read_model(scenario_path)
    surface = model.surface.to_core()
    report = validate(surface)
    payload = report.to_json()
    if report.valid:
        Scenario.from_model(model)
        payload["loops"] = sorted(model.loops)
    if as_json:
        _emit(payload)
    elif report.valid:
        click.echo(f"valid: {len(surface.gates)} gates, rank {surface.rank}, loops {', '.join(payload['loops'])}")
    else:
        for problem in report.problems:
            click.echo(f"invalid: {problem}", err=True)
    if not report.valid:
        raise SystemExit(2)


@qg.command("class")
@scenario_option
@click.argument("loop")
@json_option
@guarded
def class_command(scenario_path: str, loop: str, as_json: bool):
    """Free homotopy class of a named loop."""
    word = Scenario.load(scenario_path).class_of(loop)
    if as_json:
        _emit({"loop": loop, **word_json(word)})
    else:
        click.echo(str(word))


@qg.command("simplify")
@scenario_option
@click.argument("loop")
@seed_option
@json_option
@guarded
def simplify_command(scenario_path: str, loop: str, seed: Optional[int], as_json: bool):
    """A representative of the loop's class without self-crossings."""
    scenario = Scenario.load(scenario_path, seed=seed)
    result = scenario.simplify(loop)
    payload = {
        "loop": loop,
        "class": str(scenario.class_of(loop)),
        "moves": result.moves,
        "rounds": result.rounds,
        "result": loop_json(result.loop),
    }
    if as_json:
        _emit(payload)
    else:
        click.echo(f"{loop}: {payload['class']} in {len(result.loop.chords)} chords after {result.moves} moves")
        click.echo(json.dumps(payload["result"], sort_keys=True))


@qg.command("op")
@scenario_option
@click.argument("name", type=click.Choice(OPERATIONS))
@click.argument("args", nargs=-1)
@click.option("--m", "m", default=None, type=click.IntRange(min=1), help="Arity for mu / degree for gamma")
@click.option("--gate", default=None, help="Restrict a gate operation to one gate")
@ring_option
@omega_option
@seed_option
@json_option
@guarded
def op_command(scenario_path, name, args, m, gate, ring, omega, seed, as_json):
    """Evaluate one operation on loop names or word texts."""
    scenario = Scenario.load(scenario_path, ring=ring, omega=omega, seed=seed)
    value = scenario.evaluate(name, list(args), m=m, gate=gate)
    if as_json:
        _emit({"op": name, "args": list(args), "ring": scenario.ring.name,
               "omega": scenario.omega.bits(), "value": value.to_json()})
    else:
        click.echo(value.dumps())


@qg.command("verify")
@click.option("--theorem", required=True, type=click.Choice(THEOREMS))
@click.option("--trials", default=None, type=click.IntRange(min=1), help="Defaults to QG_TRIALS")
@ring_option
@seed_option
@click.option("--flip-gate-sign", is_flag=True, help="Negate ε(ω,k); a negative control that makes jacobi fail")
@json_option
@guarded
def verify_command(theorem, trials, ring, seed, flip_gate_sign, as_json):
    """Check one identity on random instances."""
    report = verify(theorem, seed=seed, trials=trials, ring=parse_ring(ring or "Z"), flip_gate_sign=flip_gate_sign)
    payload = report.to_json()
    if as_json:
        _emit(payload)
    else:
        status = "PASS" if report.passed else "FAIL"
        click.echo(f"{theorem}: {status} ({report.trials} trials, {payload['checked']} checks, seed {report.seed})")
        if not report.passed:
            click.echo(json.dumps(payload["first_witness"], sort_keys=True, ensure_ascii=False))
    if not report.passed:
        raise SystemExit(1)


@qg.command("serve")
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8000, type=int)
def serve_command(host: str, port: int):
    """Run the HTTP service."""
    uvicorn.run("quasigate.main:app", host=host, port=port)


def main():
    qg()


if __name__ == "__main__":
    main()
