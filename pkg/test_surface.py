from fractions import Fraction
from itertools import combinations

import pytest

from quasigate.core.errors import GenericityError, InputError, SurfaceError
from quasigate.core.surface import (
    Gate,
    GateOrientation,
    QuasiSurface,
    YEdge,
    all_orientations,
    chords_cross,
    chords_interleave,
    find_concurrences,
    precedes,
    realize,
    segments_intersect,
    validate,
)

F = Fraction


def _two_gate_surface(**changes):
    parts = dict(
        gates=(Gate("G1", F(1, 10), F(1, 5), "v1"), Gate("G2", F(2, 5), F(1, 2), "v2")),
        vertices=("v1", "v2"),
        edges=(YEdge("y1", "v1", "v2"),),
    )
    parts.update(changes)
    return QuasiSurface(**parts)


def _on_ccw_arc(start, end, u):
    if start < end:
        return start < u < end
    return not end <= u <= start


def test_fixture_surface_is_valid():
    qs = _two_gate_surface()
    report = validate(qs)
    assert report.valid and report.problems == []
    assert qs.rank == 1
    assert qs.gate_at(F(3, 20)).id == "G1"
    assert qs.gate_at(F(3, 10)) is None
    assert qs.require_valid() is qs


def test_validation_collects_every_problem():
    qs = _two_gate_surface(
        gates=(Gate("G1", F(1, 5), F(1, 10), "v1"), Gate("G2", F(2, 5), F(1, 2), "v9")),
        edges=(YEdge("y1", "v1", "v3"),),
    )
    report = validate(qs)
    assert not report.valid
    text = " | ".join(report.problems)
    assert "gate G1: arc [1/5, 1/10] is not a proper subinterval of (0,1)" in text
    assert "gate G2: vertex 'v9' is not in Y" in text
    assert "edge y1: endpoint 'v3' is not a Y vertex" in text
    with pytest.raises(SurfaceError):
        qs.require_valid()


def test_overlapping_gates_are_rejected():
    qs = _two_gate_surface(gates=(Gate("G1", F(1, 10), F(1, 2), "v1"), Gate("G2", F(2, 5), F(3, 5), "v2")))
    assert any("overlap" in p for p in validate(qs).problems)


def test_disconnected_y_is_rejected():
    qs = _two_gate_surface(vertices=("v1", "v2", "v3"))
    assert validate(qs).problems == ["Y + star is not connected"]


def test_edge_id_cannot_shadow_star_letter():
    qs = _two_gate_surface(edges=(YEdge("g1", "v1", "v2"),))
    assert any("collides with a star letter" in p for p in validate(qs).problems)


def test_unknown_gate_and_edge():
    qs = _two_gate_surface()
    with pytest.raises(SurfaceError):
        qs.gate("G7")
    with pytest.raises(SurfaceError):
        qs.edge("y9")


def test_realize_is_exact_and_on_circle():
    assert realize(F(1, 4)) == (F(-55, 73), F(-48, 73))
    assert realize(F(1, 2)) == (F(1), F(0))
    for k in range(1, 16):
        x, y = realize(F(k, 16))
        assert x * x + y * y == 1
    with pytest.raises(InputError):
        realize(F(0))


def test_interleave_agrees_with_exact_segments():
    grid = [F(k, 16) for k in range(1, 16)]
    checked = 0
    for a, b, c, d in combinations(grid, 4):
        for first, second in (((a, b), (c, d)), ((a, c), (b, d)), ((a, d), (b, c))):
            for c1 in (first, first[::-1]):
                for c2 in (second, second[::-1]):
                    assert chords_interleave(c1, c2) == segments_intersect(c1, c2)
                    checked += 1
    assert checked == 1365 * 12


def test_five_point_configurations_agree_and_signs_are_antisymmetric():
    grid = [F(k, 16) for k in range(1, 16)]
    checked = 0
    for points in combinations(grid, 5):
        for first, second in combinations(combinations(points, 2), 2):
            if set(first) & set(second):
                continue
            for c1 in (first, first[::-1]):
                for c2 in (second, second[::-1]):
                    crossing = segments_intersect(c1, c2)
                    assert chords_interleave(c1, c2) == crossing
                    sign, back = chords_cross(c1, c2), chords_cross(c2, c1)
                    assert (sign is None) == (not crossing) == (back is None)
                    if crossing:
                        assert sign == -back
                    checked += 1
    assert checked == 3003 * 60


def test_crossing_sign_rule_and_antisymmetry():
    grid = [F(k, 16) for k in range(1, 16)]
    for a, b, c, d in combinations(grid, 4):
        # the only interleaving pairing of four sorted points
        for c1 in ((a, c), (c, a)):
            for c2 in ((b, d), (d, b)):
                sign = chords_cross(c1, c2)
                assert sign == -chords_cross(c2, c1)
                assert (sign == 1) == _on_ccw_arc(c1[0], c1[1], c2[0])
        assert chords_cross((a, b), (c, d)) is None


def test_shared_endpoint_is_not_generic():
    with pytest.raises(GenericityError):
        chords_cross((F(1, 8), F(1, 2)), (F(1, 8), F(3, 4)))


def test_find_concurrences_groups_chords_through_one_point():
    # chords 1 and 2 coincide, so chord 0 meets both at one point
    spans = [(0, (F(1, 8), F(5, 8))), (1, (F(1, 4), F(3, 4))), (2, (F(3, 4), F(1, 4)))]
    assert find_concurrences(spans[:2]) == []
    found = find_concurrences(spans)
    assert len(found) == 1
    point, labels = found[0]
    assert sorted(labels) == [0, 1, 2]
    assert point[0] == F(-55, 73)


def test_orientations():
    qs = _two_gate_surface()
    omega = GateOrientation.from_bits(qs, "10")
    assert omega["G1"] == 1 and omega["G2"] == -1
    assert omega.reversed().bits() == "01"
    assert GateOrientation.from_mapping(qs, {"G1": -3, "G2": 2}).bits() == "01"
    assert len(all_orientations(qs)) == 4
    with pytest.raises(InputError):
        GateOrientation.from_bits(qs, "1")
    with pytest.raises(InputError):
        GateOrientation.from_mapping(qs, {"G1": 1})


def test_precedes_follows_orientation():
    qs = _two_gate_surface()
    omega = GateOrientation.from_bits(qs, "10")
    assert precedes(omega, "G1", F(3, 25), F(13, 100))
    assert not precedes(omega, "G1", F(13, 100), F(3, 25))
    assert precedes(omega, "G2", F(23, 50), F(9, 20))
