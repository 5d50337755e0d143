import random

from conftest import empty_face_keys
from curvetight.generate import figure_eight, random_multicurve, two_circle_bigon
from curvetight.mapcore import euler_check
from curvetight.moves import Runner
from curvetight.steinitz import (
    cleanup_contractible,
    find_embedded,
    find_empty,
    find_minimal_bigon,
    remove_minimal_bigon,
)
from curvetight.words import class_multiset

SURFACES = [(0, 1), (0, 2), (0, 3), (1, 0), (1, 1), (2, 0)]


def test_find_empty_examples():
    f8 = figure_eight()
    assert len(find_empty(f8, "monogon")) == 2
    tc = two_circle_bigon()
    assert 1 <= len(find_empty(tc, "bigon")) <= 4


def test_cleanup_figure_eight():
    f8 = figure_eight()
    r = Runner(f8, check=True)
    cleanup_contractible(r)
    kinds = [rec.kind for rec in r.log.recs]
    assert kinds == ["M10", "DROP"]
    assert f8.n_crossings() == 0 and f8.component_count() == 0


def test_cleanup_two_circles():
    tc = two_circle_bigon()
    r = Runner(tc, check=True)
    cleanup_contractible(r)
    kinds = [rec.kind for rec in r.log.recs]
    assert kinds == ["M20", "DROP", "DROP"]
    assert tc.component_count() == 0


def test_cleanup_random(rng):
    for _ in range(20):
        g, b = rng.choice(SURFACES)
        cur = random_multicurve(g, b, rng, max_crossings=16)
        w0 = sorted(w for w in class_multiset(cur) if w)
        n0 = cur.n_crossings()
        r = Runner(cur, check=True)
        moves = cleanup_contractible(r)
        assert euler_check(cur)
        assert find_minimal_bigon(cur) is None
        assert not find_empty(cur, "monogon")
        assert not find_empty(cur, "bigon")
        assert sorted(w for w in class_multiset(cur) if w) == w0
        assert moves <= 6 * n0 * n0 + n0 + 16


def test_count_law_random(rng):
    tested = 0
    with_content = 0
    while tested < 40:
        g, b = rng.choice(SURFACES)
        cur = random_multicurve(g, b, rng, max_crossings=16)
        bigs = find_embedded(cur)
        for big in bigs:
            if big.y is None:
                continue
            if any(o is not big and o.inside_faces < big.inside_faces for o in bigs):
                continue
            c2 = cur.copy()
            cand = [
                bb
                for bb in find_embedded(c2)
                if (bb.x, bb.y, bb.darts_x) == (big.x, big.y, big.darts_x)
            ]
            if not cand:
                continue
            r = Runner(c2, check=True)
            moves = remove_minimal_bigon(r, cand[0])
            assert moves == big.n_interior + big.n_strands + 1
            assert euler_check(c2)
            tested += 1
            if big.n_interior + big.n_strands > 0:
                with_content += 1
    assert with_content >= 3
