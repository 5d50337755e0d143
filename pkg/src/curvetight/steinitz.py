"""
Steinitz-style cleanup: embedded monogon/bigon removal and tangle tools.

A minimal embedded bigon with n interior vertices and s transversal strands
is removed by exactly n + s + 1 monotone moves: n trigon flips pushing the
interior crossings out through the bounding sides, s flips sweeping the
strands out across a corner, and one final 2->0 move.
"""

from __future__ import annotations

from dataclasses import dataclass

from .mapcore import Curve, Region, region_key
from .moves import IllegalMove, Runner, _walk_din, _walk_dout
from .words import ring_is_contractible


class NotMinimal(Exception):
    pass


# ---------------------------------------------------------------------------
# empty face finders
# ---------------------------------------------------------------------------


def find_empty(cur: Curve, kind: str) -> list[str]:
    """Region keys of empty monogon/bigon/trigon faces."""
    sides = {"monogon": 1, "bigon": 2, "trigon": 3}[kind]
    arr = cur.arrangement()
    out = []
    for reg in arr.regions:
        if _empty_face_matches(cur, reg, sides):
            out.append(region_key(arr, reg))
    return out


def _empty_face_matches(cur: Curve, reg: Region, sides: int) -> bool:
    if not (reg.is_disk and not reg.punctures):
        return False
    vis = reg.segments[0]
    if len(vis) != sides or len({v for v, _, _ in vis}) != sides:
        return False
    if sides == 1:
        return cur.edge_of[_walk_din(cur, reg, 0, 0)] == cur.edge_of[_walk_dout(cur, reg, 0, 0)]
    if sides == 2:
        return cur.edge_of[_walk_dout(cur, reg, 0, 0)] != cur.edge_of[_walk_dout(cur, reg, 0, 1)]
    return True


# ---------------------------------------------------------------------------
# embedded (not necessarily empty) monogons and bigons
# ---------------------------------------------------------------------------


@dataclass
class Bigon:
    """Embedded monogon (y is None) or bigon with its interior content."""

    x: int
    y: int | None
    darts_x: tuple[int, int]  # corner darts at x, ccw-adjacent (side1, side2)
    darts_y: tuple[int, int] | None
    n_interior: int
    n_strands: int
    n_faces: int
    inside_faces: frozenset[int]


def _straight_path(cur: Curve, d0: int, cap: int) -> list[int]:
    """Darts of the strand ray starting at dart d0, passing straight through
    each crossing, up to cap steps."""
    out = [d0]
    d = d0
    for _ in range(cap):
        far = cur.twin[d]
        d = cur.opposite(far)
        out.append(d)
        if False:
            break
    return out


def _corner_flood(cur: Curve, x: int, a: int, b: int, cycle_edges: set[int]) -> set[int] | None:
    """Faces on the disk side of a candidate cycle, seeded at corner (a, b).

    Returns None if the flood escapes across a non-cycle route around the
    surface (detected by the caller via the Euler count instead).
    """
    arr = cur.arrangement()
    # seed: the face in the corner between darts a and b at x; the ccw sector
    # from a to b is the face on the left of the outgoing dart a
    seed_dart = arr.arr_dart_for_curve_dart(a)
    seed = arr.face_of[seed_dart]
    blocked = cycle_edges
    seen = {seed}
    stack = [seed]
    while stack:
        f = stack.pop()
        for d in arr.faces[f]:
            if arr.kind[d] == "c" and arr.ref[d][1] in blocked:
                continue
            g = arr.face_of[arr.twin[d]]
            if g not in seen:
                seen.add(g)
                stack.append(g)
    return seen


def find_embedded(cur: Curve) -> list[Bigon]:
    """All embedded monogons and bigons whose strand sides are simple."""
    out: list[Bigon] = []
    arr = cur.arrangement()
    nv = cur.n_crossings()
    cap = 4 * nv + 4
    seen_keys = set()
    for x in cur.crossings():
        r = cur.rot[x]
        for i in range(4):
            a, b = r[i], r[(i + 1) % 4]
            # ray from a; monogon if it returns to x arriving next to b
            mono = _try_monogon(cur, arr, x, a, b, cap)
            if mono is not None:
                key = ("m", x, min(a, b))
                if key not in seen_keys:
                    seen_keys.add(key)
                    out.append(mono)
            for big in _try_bigons(cur, arr, x, a, b, cap):
                key = ("b", frozenset((big.x, big.y)), big.inside_faces)
                if key not in seen_keys:
                    seen_keys.add(key)
                    out.append(big)
    return out


def _ray_vertices(cur: Curve, d0: int, cap: int):
    """Yield (vertex reached, arriving far dart, darts walked so far)."""
    d = d0
    walked = [d0]
    for _ in range(cap):
        far = cur.twin[d]
        v = cur.dart_vertex[far]
        yield v, far, list(walked)
        d = cur.opposite(far)
        walked.append(d)


def _try_monogon(cur: Curve, arr, x: int, a: int, b: int, cap: int) -> Bigon | None:
    for v, far, walked in _ray_vertices(cur, a, cap):
        if v == x:
            if far != b:
                return None
            edges = {cur.edge_of[d] for d in walked}
            interior_vs = {cur.dart_vertex[cur.twin[d]] for d in walked[:-1]}
            interior_vs.discard(x)
            if len(interior_vs) != len(walked) - 1:
                return None  # side not simple
            return _assemble(cur, arr, x, None, (a, b), None, edges)
        # passing through v; simplicity is checked at the end
    return None


def _try_bigons(cur: Curve, arr, x: int, a: int, b: int, cap: int):
    # vertices reached by the ray from a, with their arrival darts
    reach_a: dict[int, tuple[int, list[int]]] = {}
    visited: set[int] = {x}
    for v, far, walked in _ray_vertices(cur, a, cap):
        if v == x:
            break
        if v in visited:
            break  # side self-intersects beyond here
        visited.add(v)
        reach_a[v] = (far, walked)
    visited_b: set[int] = {x}
    for v, far_b, walked_b in _ray_vertices(cur, b, cap):
        if v == x or v in visited_b:
            break
        visited_b.add(v)
        if v not in reach_a:
            continue
        far_a, walked_a = reach_a[v]
        # arrival darts must be ccw-adjacent to close a corner at y; the
        # sides must be interior-disjoint
        ry = cur.rot[v]
        ia, ib = ry.index(far_a), ry.index(far_b)
        if (ia - ib) % 4 not in (1, 3):
            continue
        vs_a = {cur.dart_vertex[d] for d in walked_a}
        vs_b = {cur.dart_vertex[d] for d in walked_b}
        if (vs_a & vs_b) - {x, v}:
            continue
        edges = {cur.edge_of[d] for d in walked_a + walked_b}
        big = _assemble(cur, arr, x, v, (a, b), (far_b, far_a), edges)
        if big is not None:
            yield big


def _assemble(cur: Curve, arr, x: int, y: int | None, dx, dy, cycle_edges: set[int]) -> Bigon | None:
    flood = _corner_flood(cur, x, dx[0], dx[1], cycle_edges)
    # the flood must not wrap around and touch the cycle from both sides:
    # it is a disk iff its euler count is 1 and it misses the other corner side
    fset = frozenset(flood)
    euler, punct, whole = _flood_euler(cur, arr, fset, cycle_edges)
    if whole or euler != 1 or punct:
        return None
    # interior crossings: not on the cycle, incident to flooded faces only
    inside_vs = set()
    boundary_vs = set()
    for d in arr.twin:
        node = arr.node_of[d]
        if node[0] != "x":
            continue
        if arr.kind[d] == "c" and arr.ref[d][1] in cycle_edges:
            boundary_vs.add(node[1])
    for d in arr.twin:
        node = arr.node_of[d]
        if node[0] == "x" and node[1] not in boundary_vs and arr.face_of[d] in fset:
            inside_vs.add(node[1])
    corners = {x} | ({y} if y is not None else set())
    passthrough = boundary_vs - corners
    n = len(inside_vs)
    s = len(passthrough) // 2 if y is not None else len(passthrough) // 2
    return Bigon(x, y, dx, dy, n, s, len(fset), fset)


def _flood_euler(cur: Curve, arr, fset: frozenset[int], cycle_edges: set[int]):
    """Euler characteristic of the closed flooded side, puncture flag, and
    whether the flood ate the whole surface."""
    whole = len(fset) == len(arr.faces)
    punct = [p for p, f in arr.puncture_face.items() if f in fset]
    w_in = 0
    for d in arr.twin:
        if d < arr.twin[d] and arr.face_of[d] in fset and arr.face_of[arr.twin[d]] in fset:
            if arr.kind[d] == "w" or arr.ref[d][1] not in cycle_edges:
                w_in += 1
    v_in = 0
    for node in {arr.node_of[d] for d in arr.twin}:
        darts = [d for d in arr.twin if arr.node_of[d] == node]
        if all(arr.face_of[d] in fset for d in darts):
            if all(arr.kind[d] == "w" or arr.ref[d][1] not in cycle_edges for d in darts):
                v_in += 1
    return len(fset) - w_in + v_in, punct, whole


def find_minimal_bigon(cur: Curve) -> Bigon | None:
    """Innermost embedded bigon or monogon (fewest disk faces, lowest corner)."""
    found = find_embedded(cur)
    if not found:
        return None
    return min(found, key=lambda b: (b.n_faces, b.x))


# ---------------------------------------------------------------------------
# removal with the exact move budget
# ---------------------------------------------------------------------------


def remove_minimal_bigon(runner: Runner, bigon: Bigon, sat: int | None = None) -> int:
    """Remove a minimal bigon with exactly n + s + 1 moves (monogons: one).

    Raises NotMinimal if an inner monogon or bigon turns up mid-flight.
    """
    cur = runner.curve if sat is None else runner.curve.satellites[sat]
    moves = 0
    if bigon.y is None:
        if bigon.n_interior or bigon.n_strands:
            raise NotMinimal("monogon with content is not minimal")
        key = _face_key_of_monogon(cur, bigon)
        runner.m10(key, sat)
        return 1
    budget = bigon.n_interior + bigon.n_strands + 1
    x, y = bigon.x, bigon.y
    dx = bigon.darts_x
    while True:
        big = _refind(cur, x, y, dx)
        if big is None:
            raise NotMinimal("bigon lost during removal")
        if big.n_interior != max(0, bigon.n_interior - moves):
            raise NotMinimal("interior count off; inner bigon suspected")
        if big.n_interior > 0:
            key, mover = _interior_flip(cur, big)
        elif big.n_strands > 0:
            key, mover = _strand_sweep(cur, big)
        else:
            break
        runner.m33(key, sat, mover=mover)
        moves += 1
        if moves > budget:
            raise NotMinimal("move budget exceeded")
    big = _refind(cur, x, y, dx)
    arr = cur.arrangement()
    for reg in arr.regions:
        if _empty_face_matches(cur, reg, 2) and {v for v, _, _ in reg.segments[0]} == {x, y}:
            runner.m20(region_key(arr, reg), sat)
            moves += 1
            assert moves == budget, f"steinitz count law violated: {moves} != {budget}"
            return moves
    raise NotMinimal("no empty bigon at the end of removal")


def _face_key_of_monogon(cur: Curve, bigon: Bigon) -> str:
    arr = cur.arrangement()
    for reg in arr.regions:
        if _empty_face_matches(cur, reg, 1) and reg.segments[0][0][0] == bigon.x:
            return region_key(arr, reg)
    raise NotMinimal("no empty monogon face at the corner")


def _refind(cur: Curve, x: int, y: int, dx: tuple[int, int]) -> Bigon | None:
    cands = [
        b
        for b in find_embedded(cur)
        if b.y is not None and {b.x, b.y} == {x, y} and (b.x, b.darts_x) == (x, dx)
    ]
    if not cands:
        return None
    return min(cands, key=lambda b: b.n_faces)


def _interior_flip(cur: Curve, big: Bigon) -> tuple[str, int]:
    """Empty trigon inside the bigon with two strand sides and one side on
    the boundary; the boundary strand is the mover."""
    arr = cur.arrangement()
    inside = big.inside_faces
    for reg in arr.regions:
        if not (reg.is_disk and not reg.punctures):
            continue
        vis = reg.segments[0]
        if len(vis) != 3 or len({v for v, _, _ in vis}) != 3:
            continue
        if not all(f in inside for f in reg.faces):
            continue
        corners = {v for v, _, _ in vis}
        if big.x in corners or big.y in corners:
            continue
        # exactly one side on a boundary edge of the bigon
        bedges = _boundary_edges(cur, big)
        side_on = [k for k in range(3) if cur.edge_of[_walk_dout(cur, reg, 0, k)] in bedges]
        if len(side_on) == 1:
            return region_key(arr, reg), side_on[0]
    raise NotMinimal("no boundary trigon found for interior vertex")


def _strand_sweep(cur: Curve, big: Bigon) -> tuple[str, int]:
    """Empty trigon at a bigon corner between the two sides and a strand;
    the strand is the mover."""
    arr = cur.arrangement()
    inside = big.inside_faces
    bedges = _boundary_edges(cur, big)
    for reg in arr.regions:
        if not (reg.is_disk and not reg.punctures):
            continue
        vis = reg.segments[0]
        if len(vis) != 3 or len({v for v, _, _ in vis}) != 3:
            continue
        if not all(f in inside for f in reg.faces):
            continue
        corners = [v for v, _, _ in vis]
        hit = [k for k, v in enumerate(corners) if v in (big.x, big.y)]
        if len(hit) != 1:
            continue
        side_strand = [
            k for k in range(3) if cur.edge_of[_walk_dout(cur, reg, 0, k)] not in bedges
        ]
        if len(side_strand) == 1:
            return region_key(arr, reg), side_strand[0]
    raise NotMinimal("no corner trigon found for strand sweep")


def _boundary_edges(cur: Curve, big: Bigon) -> set[int]:
    edges = set()
    for d0 in big.darts_x:
        d = d0
        for _ in range(8 * cur.n_crossings() + 8):
            edges.add(cur.edge_of[d])
            far = cur.twin[d]
            v = cur.dart_vertex[far]
            if v in (big.x, big.y):
                break
            d = cur.opposite(far)
    return edges


# ---------------------------------------------------------------------------
# full cleanup
# ---------------------------------------------------------------------------


def cleanup_contractible(runner: Runner, sat: int | None = None, budget_factor: int = 6) -> int:
    """Remove all embedded monogons/bigons, then drop contractible pieces.

    Returns the number of moves used; asserts the quadratic move budget.
    """
    from .moves import total_crossings

    cur = runner.curve if sat is None else runner.curve.satellites[sat]
    n0 = cur.n_crossings()
    budget = budget_factor * n0 * n0 + n0 + 16
    moves = 0
    while True:
        # contractible circles first: a circle inside a monogon or bigon disk
        # would block its removal
        for rid in sorted(cur.rings):
            if ring_is_contractible(cur, rid):
                runner.drop_ring(rid, sat)
        while cur.free_loops:
            runner.drop_free_loop(sat)
        big = find_minimal_bigon(cur)
        if big is None:
            break
        moves += remove_minimal_bigon(runner, big, sat)
        if moves > budget:
            raise NotMinimal("cleanup exceeded the quadratic budget")
    for sid in sorted(cur.satellites):
        if sat is not None:
            raise IllegalMove("nested satellites unsupported in cleanup")
        moves += cleanup_contractible(runner, sid)
        runner.drop_shell(sid)
    return moves
