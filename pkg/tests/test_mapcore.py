import random

import pytest

from curvetight.fileio import curve_from_text, curve_to_text
from curvetight.generate import figure_eight, random_multicurve, two_circle_bigon
from curvetight.mapcore import Curve, euler_check, faces
from curvetight.schema import base_schema

SURFACES = [(0, 0), (0, 1), (0, 2), (0, 3), (1, 0), (1, 1), (2, 0), (2, 2), (3, 1)]


@pytest.mark.parametrize("g,b", SURFACES)
def test_bare_schema_builds(g, b):
    cur = Curve(base_schema(g, b))
    arr = cur.arrangement()
    assert euler_check(cur)
    # one big region regardless of walls
    assert len(arr.regions) == 1
    assert sorted(arr.regions[0].punctures) == list(range(b))


def test_empty_curve_on_sphere_valid():
    cur = Curve(base_schema(0, 0))
    assert cur.validate().ok
    assert cur.component_count() == 0


def test_figure_eight_faces():
    f8 = figure_eight()
    assert f8.validate().ok
    assert f8.n_crossings() == 1
    assert len(f8.trace_components()) == 1
    fs = faces(f8)
    assert len(fs) == 3
    monogons = [f for f in fs if f.n_sides == 1 and f.is_disk and f.punctures == 0]
    assert len(monogons) == 2
    outer = [f for f in fs if f.punctures == 1]
    assert len(outer) == 1 and outer[0].n_sides == 2


def test_two_circles_faces():
    tc = two_circle_bigon()
    fs = faces(tc)
    assert len(fs) == 4
    empties = [f for f in fs if f.n_sides == 2 and f.is_disk and f.punctures == 0]
    assert len(empties) >= 1


def test_degree_violation_reported():
    f8 = figure_eight()
    v = f8.crossings()[0]
    f8.rot[v] = f8.rot[v][:3]
    f8.touch()
    rep = f8.validate()
    assert not rep.ok and any("degree" in e for e in rep.errors)


def test_random_curves_valid(rng):
    for _ in range(30):
        g, b = rng.choice([s for s in SURFACES if s != (0, 0)])
        cur = random_multicurve(g, b, rng, max_crossings=30)
        assert cur.validate().ok
        assert euler_check(cur)


def test_fileio_roundtrip(rng):
    for _ in range(15):
        g, b = rng.choice([(0, 1), (1, 0), (2, 2), (0, 3)])
        cur = random_multicurve(g, b, rng, max_crossings=20)
        text = curve_to_text(cur)
        back = curve_from_text(text)
        assert curve_to_text(back) == text
        assert back.state_hash() == cur.state_hash()
        assert back.validate().ok


def test_component_trace():
    tc = two_circle_bigon()
    assert len(tc.trace_components()) == 2
    f8 = figure_eight()
    assert len(f8.trace_components()) == 1
