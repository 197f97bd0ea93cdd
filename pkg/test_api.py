import json
from pathlib import Path

from fastapi.testclient import TestClient

from quasigate.main import app

client = TestClient(app)
SCENARIOS = Path(__file__).parent / "data" / "scenarios"


def _scenario(name="fixture.json"):
    return json.loads((SCENARIOS / name).read_text(encoding="utf-8"))


def test_root():
    resp = client.get("/")
    assert resp.status_code == 200
    assert resp.json()["status"] == "ok"


def test_api():
    scenario = _scenario()

    # 1. Validate the scenario
    resp = client.post("/scenario/validate", json=scenario)
    assert resp.status_code == 200
    assert resp.json() == {"valid": True, "problems": [], "loops": ["a", "a2", "c", "e", "t"]}

    # 2. Class of a named loop
    resp = client.post("/scenario/class", json={"scenario": scenario, "loop": "a"})
    assert resp.json()["word"] == "g1.g2^-1.y1^-1"
    assert resp.json()["letters"] == ["g1", "g2^-1", "y1^-1"]

    # 3. One operation
    resp = client.post("/ops/bracket-omega", json={"scenario": scenario, "args": ["a", "a2"]})
    assert resp.status_code == 200
    assert resp.json()["value"] == {"g1.g2^-1.y1^-1.g1.g2^-1.y1^-1": "1"}

    # 4. Simplify
    resp = client.post("/scenario/simplify", json={"scenario": _scenario("forced_crossing.json"), "loop": "x"})
    assert resp.status_code == 200
    assert resp.json()["class"] == "g1.g3^-1.g2.g4^-1"


def test_invalid_inputs():
    scenario = _scenario()

    # 1. Invalid surface is reported, not raised
    resp = client.post("/scenario/validate", json=_scenario("bad_arc.json"))
    assert resp.status_code == 200
    assert resp.json()["valid"] is False

    # 2. Unknown loop and unknown operation
    resp = client.post("/scenario/class", json={"scenario": scenario, "loop": "zz"})
    assert resp.status_code == 400
    resp = client.post("/ops/associator", json={"scenario": scenario, "args": ["a"]})
    assert resp.status_code == 400

    # 3. Malformed rational fails schema validation
    scenario["surface"]["gates"][0]["arc"] = ["one tenth", "1/5"]
    resp = client.post("/scenario/validate", json=scenario)
    assert resp.status_code == 422


def test_verify_endpoint():
    resp = client.post("/verify", json={"theorem": "lemma22", "trials": 2, "seed": 3})
    assert resp.status_code == 200
    assert resp.json()["passed"] is True
    resp = client.post("/verify", json={"theorem": "lemma22", "trials": 1, "ring": "R"})
    assert resp.status_code == 400


if __name__ == "__main__":
    test_root()
    test_api()
    test_invalid_inputs()
    test_verify_endpoint()
