import json

from click.testing import CliRunner

from quasigate.cli import qg


def _run(*args):
    return CliRunner().invoke(qg, [str(a) for a in args])


def test_class_of_a_loop(scenario_dir):
    result = _run("class", "--scenario", scenario_dir / "fixture.json", "a")
    assert result.exit_code == 0
    assert result.stdout.strip() == "g1.g2^-1.y1^-1"

    result = _run("class", "--scenario", scenario_dir / "fixture.json", "e", "--json")
    assert json.loads(result.stdout) == {"loop": "e", "word": "1", "letters": []}


def test_bracket_of_crossing_copies(scenario_dir):
    fixture = scenario_dir / "fixture.json"
    assert _run("op", "--scenario", fixture, "bracket", "a", "a2").stdout.strip() == "{}"
    result = _run("op", "--scenario", fixture, "bracket-omega", "a", "a2")
    assert json.loads(result.stdout) == {"g1.g2^-1.y1^-1.g1.g2^-1.y1^-1": "1"}


def test_gate_restricted_operations(scenario_dir):
    fixture = scenario_dir / "fixture.json"
    result = _run("op", "--scenario", fixture, "mu", "--gate", "G1", "a")
    assert json.loads(result.stdout) == {"g1.g2^-1.y1^-1": "1"}
    assert _run("op", "--scenario", fixture, "mu", "a").stdout.strip() == "{}"
    assert _run("op", "--scenario", fixture, "gamma", "--m", "1", "a").stdout.strip() == "{}"
    result = _run("op", "--scenario", fixture, "zeta", "--gate", "G2", "a", "a2", "--json")
    payload = json.loads(result.stdout)
    assert payload["value"] == {"g1.g2^-1.y1^-1 ⊗ g1.g2^-1.y1^-1": "-1"}
    assert payload["omega"] == "11" and payload["ring"] == "Z"


def test_word_arguments_and_ring_override(scenario_dir):
    w2 = scenario_dir / "w2.json"
    result = _run("op", "--scenario", w2, "nu-omega", "w2", "--ring", "Zn:5", "--json")
    payload = json.loads(result.stdout)
    assert payload["ring"] == "Zn:5"
    assert payload["value"] == {"g1.g2^-1.y1^-1 ⊗ g1.g2^-1.y1^-1": "2"}
    result = _run("op", "--scenario", w2, "nu-omega", "w2", "--omega", "00")
    assert json.loads(result.stdout) == {"g1.g2^-1.y1^-1 ⊗ g1.g2^-1.y1^-1": "-2"}
    result = _run("op", "--scenario", w2, "nu", "g1.g2^-1.y1^-1.g1.g2^-1.y1^-1")
    assert result.exit_code == 0 and result.stdout.strip() == "{}"


def test_validate(scenario_dir):
    result = _run("validate", "--scenario", scenario_dir / "fixture.json")
    assert result.exit_code == 0
    assert result.stdout.startswith("valid: 2 gates, rank 2")

    result = _run("validate", "--scenario", scenario_dir / "bad_arc.json")
    assert result.exit_code == 2
    assert "not a proper subinterval" in result.output


def test_bad_input_exits_with_2(scenario_dir, tmp_path):
    fixture = scenario_dir / "fixture.json"
    # 1. unknown loop name
    result = _run("class", "--scenario", fixture, "nope")
    assert result.exit_code == 2
    assert "error:" in result.output

    # 2. wrong number of arguments
    assert _run("op", "--scenario", fixture, "bracket", "a").exit_code == 2

    # 3. unreadable scenario
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    assert _run("class", "--scenario", broken, "a").exit_code == 2

    # 4. bad ring and bad omega
    assert _run("op", "--scenario", fixture, "mu", "a", "--ring", "R").exit_code == 2
    assert _run("op", "--scenario", fixture, "mu", "a", "--omega", "1").exit_code == 2


def test_simplify_forced_crossing(scenario_dir):
    result = _run("simplify", "--scenario", scenario_dir / "forced_crossing.json", "x", "--json")
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert payload["class"] == "g1.g3^-1.g2.g4^-1"
    assert payload["moves"] > 0
    assert len(payload["result"]["strands"]) > 4


def test_verify_command():
    result = _run("verify", "--theorem", "lemma22", "--trials", "3", "--seed", "5")
    assert result.exit_code == 0
    assert result.stdout.startswith("lemma22: PASS (3 trials")

    result = _run("verify", "--theorem", "cojacobi", "--trials", "2", "--seed", "5", "--json")
    payload = json.loads(result.stdout)
    assert payload["passed"] and payload["seed"] == 5 and payload["trials"] == 2


def test_verify_rejects_unknown_theorem():
    assert _run("verify", "--theorem", "nonsense").exit_code == 2


def test_flipped_gate_sign_breaks_jacobi():
    # 1. the honest run passes
    args = ["verify", "--theorem", "jacobi", "--trials", "40", "--seed", "11", "--json"]
    assert _run(*args).exit_code == 0

    # 2. negating every ε(ω,k) fails with a witness
    result = _run(*args, "--flip-gate-sign")
    assert result.exit_code == 1
    payload = json.loads(result.stdout)
    assert payload["flip_gate_sign"] is True
    assert not payload["passed"] and payload["failed_trials"]
    witness = payload["first_witness"]
    assert witness["trial"] == payload["failed_trials"][0]
    assert "property" in witness or "error" in witness
