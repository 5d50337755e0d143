import random

import pytest

from curvetight.mapcore import region_key
from curvetight.moves import _walk_din, _walk_dout


def empty_face_keys(cur, sides):
    """Region keys of empty monogon/bigon/trigon faces (test helper)."""
    arr = cur.arrangement()
    out = []
    for reg in arr.regions:
        if not (reg.is_disk and not reg.punctures):
            continue
        vis = reg.segments[0]
        if len(vis) != sides or len({v for v, _, _ in vis}) != sides:
            continue
        if sides == 2 and cur.edge_of[_walk_dout(cur, reg, 0, 0)] == cur.edge_of[_walk_dout(cur, reg, 0, 1)]:
            continue
        if sides == 1 and cur.edge_of[_walk_din(cur, reg, 0, 0)] != cur.edge_of[_walk_dout(cur, reg, 0, 0)]:
            continue
        out.append(region_key(arr, reg))
    return out


@pytest.fixture
def rng():
    return random.Random(20260810)
