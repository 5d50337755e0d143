import random

import pytest

from conftest import empty_face_keys
from curvetight.generate import figure_eight, random_multicurve, two_circle_bigon
from curvetight.mapcore import euler_check
from curvetight.moves import IllegalMove, MoveLog, Runner, _cancel_pair_face, total_crossings
from curvetight.words import class_multiset

SURFACES = [(0, 1), (0, 2), (0, 3), (1, 0), (1, 1), (2, 0), (2, 2), (3, 1)]


def test_m10_figure_eight():
    for g, b in [(0, 1), (1, 0), (2, 2)]:
        f8 = figure_eight(g, b)
        w0 = class_multiset(f8)
        r = Runner(f8, check=True)
        r.m10(empty_face_keys(f8, 1)[0])
        assert f8.n_crossings() == 0
        assert euler_check(f8)
        assert class_multiset(f8) == w0
        assert f8.component_count() == 1


def test_m20_two_circles():
    tc = two_circle_bigon()
    w0 = class_multiset(tc)
    r = Runner(tc, check=True)
    r.m20(empty_face_keys(tc, 2)[0])
    assert tc.n_crossings() == 0
    assert euler_check(tc)
    assert class_multiset(tc) == w0
    assert tc.component_count() == 2


def test_illegal_move_rejected():
    f8 = figure_eight()
    r = Runner(f8, check=True)
    with pytest.raises(IllegalMove):
        r.m20(empty_face_keys(f8, 1)[0])
    with pytest.raises(IllegalMove):
        r.m33("d99999")


def test_move_fuzz_invariants(rng):
    counts = {1: 0, 2: 0, 3: 0}
    for _ in range(30):
        g, b = rng.choice(SURFACES)
        cur = random_multicurve(g, b, rng, max_crossings=20)
        r = Runner(cur, check=True)
        for _step in range(60):
            w0 = class_multiset(cur)
            n0 = total_crossings(cur)
            cands = [(s, k) for s in (1, 2, 3) for k in empty_face_keys(cur, s)]
            if not cands:
                break
            s, key = rng.choice(cands)
            (r.m10, r.m20, r.m33)[s - 1](key)
            counts[s] += 1
            assert euler_check(cur)
            assert class_multiset(cur) == w0
            n1 = total_crossings(cur)
            assert n1 == n0 - {1: 1, 2: 2, 3: 0}[s]
    assert counts[3] > 50 and counts[2] > 5 and counts[1] > 5


def test_smoothing_component_delta(rng):
    for _ in range(20):
        g, b = rng.choice(SURFACES)
        cur = random_multicurve(g, b, rng, max_crossings=15)
        r = Runner(cur, check=True)
        while cur.rot:
            c0 = cur.component_count()
            n0 = total_crossings(cur)
            v = rng.choice(sorted(cur.rot))
            r.smooth(v, rng.choice("AB"))
            assert abs(cur.component_count() - c0) <= 1
            assert total_crossings(cur) == n0 - 1
            assert euler_check(cur)


def test_e21_drops_one_crossing(rng):
    done = 0
    for _ in range(20):
        g, b = rng.choice(SURFACES)
        cur = random_multicurve(g, b, rng, max_crossings=15)
        keys = empty_face_keys(cur, 2)
        if not keys:
            continue
        n0 = cur.n_crossings()
        r = Runner(cur, check=True)
        r.e21(keys[0])
        assert total_crossings(cur) == n0 - 1
        assert euler_check(cur)
        done += 1
    assert done >= 5


def test_iso_cancel_preserves_diagram(rng):
    done = 0
    for _ in range(40):
        g, b = rng.choice(SURFACES)
        cur = random_multicurve(g, b, rng, max_crossings=15)
        pairs = []
        for k in sorted(cur.edges):
            anch = cur.edges[k].anch
            for i in range(len(anch) - 1):
                if _cancel_pair_face(cur, anch[i], anch[i + 1]):
                    pairs.append((anch[i], anch[i + 1]))
        if not pairs:
            continue
        code0 = cur.diagram_code()
        w0 = class_multiset(cur)
        r = Runner(cur, check=True)
        r.iso_cancel(*pairs[0])
        assert cur.diagram_code() == code0
        assert class_multiset(cur) == w0
        assert euler_check(cur)
        done += 1
    assert done >= 5


def test_log_records_monotone(rng):
    cur = random_multicurve(1, 1, rng, max_crossings=20)
    r = Runner(cur, check=True)
    for _ in range(40):
        cands = [(s, k) for s in (1, 2, 3) for k in empty_face_keys(cur, s)]
        if not cands:
            break
        s, key = rng.choice(cands)
        (r.m10, r.m20, r.m33)[s - 1](key)
    ns = [rec.n_after for rec in r.log.recs]
    assert all(a >= b for a, b in zip(ns, ns[1:]))
    # log round-trip
    text = "\n".join(r.log.dump_lines())
    back = MoveLog.parse_lines(text.splitlines())
    assert [x.line() for x in back.recs] == [x.line() for x in r.log.recs]
