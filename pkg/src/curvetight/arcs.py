"""
Systems of arcs and wall rebasing.

A system of arcs is a set of 2g+b-1 disjoint boundary-to-boundary arcs
cutting the surface into a single disk.  Arcs are routed as simple paths in
the dual graph of the current arrangement (stepping across curve segments
and old crossable wall segments, never across balloon loops or previously
placed arcs) and then realized as new wall edges.  Old wall edges crossed on
the way gain degree-4 wall vertices that dissolve with the old schema.

All routing and placement choices are deterministic so that a REBASE log
record replays by re-running the construction.
"""

from __future__ import annotations

from .mapcore import Curve, euler_check
from .schema import wdart, wdart_edge, wdart_end


class ArcError(Exception):
    pass


class ClosedSurface(ArcError):
    pass


def system_of_arcs_count(genus: int, punctures: int) -> int:
    return 2 * genus + punctures - 1


def rebase_to_arc_system(curve: Curve) -> list[int]:
    """Cut along a fresh system of arcs and drop the old walls (in place).

    Returns the arc wall-edge ids.  Each arc crosses each curve edge at most
    twice; the complement of arcs and boundary is a single disk.
    """
    schema = curve.schema
    if schema.punctures == 0:
        raise ClosedSurface("system of arcs needs boundary")
    want = system_of_arcs_count(schema.genus, schema.punctures)
    for k in range(want):
        if not _place_best_arc(curve, f"xi{k}"):
            raise ArcError(f"no admissible arc found for arc {k}")
    _dissolve_old_walls(curve)
    arcs = [e for e, w in sorted(curve.schema.wedges.items()) if w.kind == "arc"]
    assert len(arcs) == want
    _assert_single_disk(curve)
    return arcs


# ---------------------------------------------------------------------------
# routing
# ---------------------------------------------------------------------------


def _loop_targets(curve: Curve) -> list[tuple[int, int]]:
    """(puncture, outer arrangement dart) per balloon loop segment."""
    arr = curve.arrangement()
    out = []
    for p in sorted(curve.schema.puncture_loops):
        loop = curve.schema.puncture_loops[p]
        # all loop pieces of this puncture share the label; collect via kind
        for e, w in sorted(curve.schema.wedges.items()):
            if w.kind != "loop" or w.label != curve.schema.wedges[loop].label:
                continue
            for f, b in arr.wall_chain_darts[e]:
                inner = _puncture_inner_faces(curve, arr)
                d = f if arr.face_of[f] not in inner else b
                if arr.face_of[d] in inner:
                    continue
                out.append((p, d))
    return out


def _puncture_inner_faces(curve: Curve, arr) -> set[int]:
    return set(arr.puncture_face.values())


def _steppable(curve: Curve, arr) -> dict[int, int]:
    out = {}
    for d in arr.twin:
        if arr.kind[d] == "w":
            w = curve.schema.wedges[arr.ref[d][1]]
            if w.kind in ("loop", "arc"):
                continue
        out[d] = arr.face_of[arr.twin[d]]
    return out


def _plan_routes(curve: Curve, max_plan_len: int, variants: int = 1):
    """Routes realizing short wall-crossing plans.

    A plan is a word over the old crossable wall edges; the route crosses
    exactly those walls in order, connected by shortest runs of curve-segment
    crossings (layered BFS).  Plans up to the given length are enumerated in
    deterministic order, with optional seeded reshuffles of the BFS expansion.
    """
    import random as _random
    from itertools import product

    arr = curve.arrangement()
    targets = _loop_targets(curve)
    step = _steppable(curve, arr)
    curve_by_face: dict[int, list[int]] = {}
    wall_by_face: dict[int, dict[int, list[int]]] = {}
    for d in sorted(step):
        f = arr.face_of[d]
        if arr.kind[d] == "c":
            curve_by_face.setdefault(f, []).append(d)
        else:
            wall_by_face.setdefault(f, {}).setdefault(arr.ref[d][1], []).append(d)
    target_faces: dict[int, list[tuple[int, int]]] = {}
    for q, d1 in targets:
        target_faces.setdefault(arr.face_of[d1], []).append((q, d1))

    alphabet = sorted({arr.ref[d][1] for d in step if arr.kind[d] == "w"})
    plans = [()]
    for ln in range(1, max_plan_len + 1):
        plans.extend(product(alphabet, repeat=ln))

    routes = []
    for variant in range(variants):
        for p, d0 in targets:
            f0 = arr.face_of[d0]
            shuffler = _random.Random((variant, p, d0))
            for plan in plans:
                # layered BFS: node (face, layer); curve steps stay in layer,
                # crossing plan[layer] advances it
                prev: dict[tuple, tuple] = {(f0, 0): None}
                order = [(f0, 0)]
                qi = 0
                while qi < len(order):
                    f, layer = order[qi]
                    qi += 1
                    cands = [(d, layer) for d in curve_by_face.get(f, [])]
                    if layer < len(plan):
                        cands += [(d, layer + 1) for d in wall_by_face.get(f, {}).get(plan[layer], [])]
                    if variant:
                        shuffler.shuffle(cands)
                    for d, nl in cands:
                        g = arr.face_of[arr.twin[d]]
                        if (g, nl) not in prev:
                            prev[(g, nl)] = ((f, layer), d)
                            order.append((g, nl))
                for q, d1 in targets:
                    f1 = arr.face_of[d1]
                    node = (f1, len(plan))
                    if node not in prev:
                        continue
                    path = []
                    while prev[node] is not None:
                        pn, d = prev[node]
                        path.append(d)
                        node = pn
                    path.reverse()
                    if (p, d0) == (q, d1) and not path:
                        continue
                    used = set(path)
                    if len(used) != len(path) or any(arr.twin[d] in used for d in path):
                        continue
                    routes.append(((p, d0), tuple(path), (q, d1)))
    uniq = sorted(set(routes), key=lambda r: (len(r[1]), r[0], r[2], r[1]))
    return arr, uniq


def _route_precheck(curve: Curve, arr, route) -> bool:
    """Each curve edge may be crossed at most twice."""
    per_edge: dict[int, int] = {}
    for d in route[1]:
        if arr.kind[d] == "c":
            k = arr.ref[d][1]
            per_edge[k] = per_edge.get(k, 0) + 1
            if per_edge[k] > 2:
                return False
    return True


def _complement_connected(curve: Curve) -> bool:
    """One region once boundary loops and arcs are treated as barriers."""
    arr = curve.arrangement()
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for d in arr.twin:
        if arr.kind[d] == "w":
            w = curve.schema.wedges[arr.ref[d][1]]
            if w.kind in ("loop", "arc"):
                continue
        a, b = find(arr.face_of[d]), find(arr.face_of[arr.twin[d]])
        if a != b:
            parent[max(a, b)] = min(a, b)
    inner = _puncture_inner_faces(curve, arr)
    roots = {find(f) for f in range(len(arr.faces)) if f not in inner}
    return len(roots) == 1


def _place_best_arc(curve: Curve, label: str) -> bool:
    tried: set = set()
    for plan_len, variants in ((2, 1), (3, 2), (4, 4)):
        arr, routes = _plan_routes(curve, plan_len, variants)
        for route in routes:
            if route in tried:
                continue
            tried.add(route)
            if not _route_precheck(curve, arr, route):
                continue
            for end_side in (0, 1):
                trial = curve.copy()
                try:
                    _realize_arc(trial, route, label, end_side)
                except ArcError:
                    continue
                if trial.validate().ok and euler_check(trial) and _complement_connected(trial):
                    _realize_arc(curve, route, label, end_side)
                    curve.touch()
                    return True
    return False


# ---------------------------------------------------------------------------
# realization (single atomic mutation planned from one snapshot)
# ---------------------------------------------------------------------------


def _realize_arc(curve: Curve, route, label: str, end_side: int) -> None:
    arr = curve.arrangement()
    schema = curve.schema
    (p0, d0), path, (p1, d1) = route

    # plan: walk the route, splitting it at old-wall crossings
    legs: list[list[tuple]] = [[]]  # curve crossings per arc piece
    wall_hits: list[tuple] = []  # (old edge, seg idx, from_left)
    for d in path:
        ref = arr.ref[d]
        if arr.kind[d] == "c":
            owner = ("e", ref[1]) if ref[0] == "e" else ("r", ref[1])
            gap = ref[2] if owner[0] == "e" else (ref[2] + 1) % max(1, len(curve.rings[owner[1]]))
            sign = -1 if ref[3] else 1
            legs[-1].append((owner, gap, sign))
        else:
            wall_hits.append((ref[1], ref[2], ref[3]))
            legs.append([])

    v_start = _attach_on_loop(curve, arr, d0, end_side=None)
    same_dart = d1 == d0
    v_mid: list[int] = []
    # translation for wall edges this arc crosses more than once
    split_map: dict[int, list[tuple[int, int, int]]] = {}  # old -> [(lo, piece, off)]
    for old_edge, seg_idx, from_left in wall_hits:
        target, local = old_edge, seg_idx
        for lo, piece, off in split_map.get(old_edge, []):
            if seg_idx >= lo:
                target, local = piece, seg_idx - off
        u, e1, e2, cut = _split_wall_at(curve, target, local, from_left)
        base = next((off for lo, piece, off in split_map.get(old_edge, []) if piece == target), 0)
        split_map.setdefault(old_edge, []).append((0, e1, base))
        split_map[old_edge].append((base + cut, e2, base + cut))
        split_map[old_edge] = [t for t in split_map[old_edge] if t[1] in curve.schema.wedges]
        split_map[old_edge].sort()
        v_mid.append(u)
    v_end = _attach_on_loop(curve, arr, d1, end_side=end_side if same_dart else None, near=v_start if same_dart else None)

    verts = [v_start] + v_mid + [v_end]
    piece_ids = []
    for i in range(len(verts) - 1):
        e = schema.new_edge(verts[i], verts[i + 1], True, "arc", label)
        curve.worder[e] = []
        piece_ids.append(e)
    # attach arc darts into rotations: loop attach points take the arc in the
    # reserved middle slot; mid-route verts were built as [wA, arc_in, wB]
    _fill_slot(schema, v_start, wdart(piece_ids[0], 0))
    for i, u in enumerate(v_mid):
        _fill_arc_in(schema, u, wdart(piece_ids[i], 1))
        schema.vrot[u].append(wdart(piece_ids[i + 1], 0))
    _fill_slot(schema, v_end, wdart(piece_ids[-1], 1))

    # curve events, grouped per owner with ascending-gap offsets
    by_owner: dict[tuple, list[tuple]] = {}
    for i, leg in enumerate(legs):
        for j, (owner, gap, sign) in enumerate(leg):
            by_owner.setdefault(owner, []).append((gap, i, j, sign))
    piece_events: dict[tuple, int] = {}
    for owner in sorted(by_owner):
        for off, (gap, i, j, sign) in enumerate(sorted(by_owner[owner])):
            ev = curve.new_event(piece_ids[i], sign, owner)
            seq = curve.edges[owner[1]].anch if owner[0] == "e" else curve.rings[owner[1]]
            seq.insert(gap + off, ev)
            piece_events[(i, j)] = ev
    for i, leg in enumerate(legs):
        curve.worder[piece_ids[i]] = [piece_events[(i, j)] for j in range(len(leg))]
    curve.touch()


def _fill_slot(schema, v: int, dart: int) -> None:
    rot = schema.vrot[v]
    i = rot.index(None)
    rot[i] = dart


def _fill_arc_in(schema, u: int, dart: int) -> None:
    rot = schema.vrot[u]
    i = rot.index(None)
    rot[i] = dart


def _attach_on_loop(curve: Curve, arr, loop_dart: int, end_side, near: int | None = None) -> int:
    """Subdivide a balloon loop at its outer side; returns the new vertex.

    The rotation gets a reserved None slot where the arc dart will land,
    placed on the outer side.  For a second attachment on the same original
    dart, ``end_side`` picks which of the two new pieces is split.
    """
    schema = curve.schema
    ref = arr.ref[loop_dart]
    loop_edge = ref[1]
    outer_fwd = ref[3]
    if loop_edge not in schema.wedges:
        # split previously in this realization (self-arc): pick a piece
        cands = [e for e, w in sorted(schema.wedges.items()) if w.kind == "loop" and near in (w.v1, w.v2)]
        if not cands:
            raise ArcError("lost track of the split loop")
        loop_edge = cands[min(end_side or 0, len(cands) - 1)]
        w = schema.wedges[loop_edge]
        outer_fwd = outer_fwd if w.v1 == near or w.v2 == near else outer_fwd
    w = schema.wedges[loop_edge]
    u = schema.new_vertex()
    e1 = schema.new_edge(w.v1, u, False, "loop", w.label)
    e2 = schema.new_edge(u, w.v2, False, "loop", w.label)
    curve.worder[e1] = []
    curve.worder[e2] = []
    if outer_fwd:
        schema.vrot[u] = [wdart(e2, 0), None, wdart(e1, 1)]
    else:
        schema.vrot[u] = [wdart(e1, 1), None, wdart(e2, 0)]
    for v in (w.v1, w.v2):
        rot = schema.vrot[v]
        for i, dw in enumerate(rot):
            if dw is not None and wdart_edge(dw) == loop_edge:
                rot[i] = wdart(e1, 0) if wdart_end(dw) == 0 else wdart(e2, 1)
    del schema.wedges[loop_edge]
    del curve.worder[loop_edge]
    for p, le in list(schema.puncture_loops.items()):
        if le == loop_edge:
            schema.puncture_loops[p] = e1
    return u


def _split_wall_at(curve: Curve, old_edge: int, seg_idx: int, from_left: bool) -> int:
    """Split an old wall edge at a segment; returns (vertex, e1, e2, cut).

    The new degree-4 vertex rotation reserves a None slot for the incoming
    arc dart; the outgoing dart is appended by the caller."""
    schema = curve.schema
    if old_edge not in schema.wedges:
        raise ArcError("wall edge already consumed by this arc")
    w = schema.wedges[old_edge]
    u = schema.new_vertex()
    e1 = schema.new_edge(w.v1, u, w.crossable, w.kind, w.label)
    e2 = schema.new_edge(u, w.v2, w.crossable, w.kind, w.label)
    evs = curve.worder[old_edge]
    if seg_idx > len(evs):
        raise ArcError("stale wall segment index")
    curve.worder[e1] = evs[:seg_idx]
    curve.worder[e2] = evs[seg_idx:]
    for ev in curve.worder[e1]:
        curve.events[ev].wedge = e1
    for ev in curve.worder[e2]:
        curve.events[ev].wedge = e2
    if from_left:
        schema.vrot[u] = [wdart(e2, 0), None, wdart(e1, 1)]
    else:
        schema.vrot[u] = [wdart(e1, 1), None, wdart(e2, 0)]
    for v in (w.v1, w.v2):
        rot = schema.vrot[v]
        for i, dw in enumerate(rot):
            if dw is not None and wdart_edge(dw) == old_edge:
                rot[i] = wdart(e1, 0) if wdart_end(dw) == 0 else wdart(e2, 1)
    del schema.wedges[old_edge]
    del curve.worder[old_edge]
    return u, e1, e2, seg_idx


# ---------------------------------------------------------------------------
# dissolving the old schema
# ---------------------------------------------------------------------------


def _dissolve_old_walls(curve: Curve) -> None:
    """Remove all side/stem wall edges and smooth leftover degree-2 vertices."""
    schema = curve.schema
    for e in sorted(schema.wedges):
        w = schema.wedges.get(e)
        if w is None or w.kind not in ("side", "stem"):
            continue
        for ev in list(curve.worder[e]):
            owner = curve.events[ev].owner
            seq = curve.edges[owner[1]].anch if owner[0] == "e" else curve.rings[owner[1]]
            seq.remove(ev)
            del curve.events[ev]
        for v in (w.v1, w.v2):
            if v in schema.vrot:
                schema.vrot[v] = [dw for dw in schema.vrot[v] if wdart_edge(dw) != e]
        del schema.wedges[e]
        del curve.worder[e]
    # drop isolated wall vertices and series-contract degree-2 ones
    changed = True
    while changed:
        changed = False
        for v in sorted(schema.vrot):
            rot = schema.vrot[v]
            if not rot:
                del schema.vrot[v]
                changed = True
            elif len(rot) == 2 and wdart_edge(rot[0]) != wdart_edge(rot[1]):
                _series_merge(curve, v)
                changed = True
    # components that crossed only old walls lose every anchor: crossing-free
    # ones become free loops, crossing clusters become satellites
    for rid in sorted(curve.rings):
        if not curve.rings[rid]:
            del curve.rings[rid]
            curve.free_loops += 1
    from .moves import _postprocess

    _postprocess(curve)
    curve.touch()


def _series_merge(curve: Curve, v: int) -> None:
    """Merge the two wall edges at a degree-2 wall vertex."""
    schema = curve.schema
    da, db = schema.vrot[v]
    ea, eb = wdart_edge(da), wdart_edge(db)
    wa, wb = schema.wedges[ea], schema.wedges[eb]
    # orient: keep wa's far end as v1, wb's far end as v2
    far_a = wa.v1 if wdart_end(da) == 1 else wa.v2
    far_b = wb.v2 if wdart_end(db) == 0 else wb.v1
    evs_a = curve.worder[ea] if wdart_end(da) == 1 else _flip_events(curve, ea)
    evs_b = curve.worder[eb] if wdart_end(db) == 0 else _flip_events(curve, eb)
    e = schema.new_edge(far_a, far_b, wa.crossable, wa.kind, wa.label)
    curve.worder[e] = evs_a + evs_b
    for ev in curve.worder[e]:
        curve.events[ev].wedge = e
    for vv, old_end, new_end in ((far_a, (ea, 0 if wdart_end(da) == 1 else 1), (e, 0)), (far_b, (eb, 1 if wdart_end(db) == 0 else 0), (e, 1))):
        rot = schema.vrot[vv]
        for i, dw in enumerate(rot):
            if dw == wdart(*old_end):
                rot[i] = wdart(*new_end)
    for p, le in list(schema.puncture_loops.items()):
        if le in (ea, eb):
            schema.puncture_loops[p] = e
    for x in (ea, eb):
        del schema.wedges[x]
        del curve.worder[x]
    del schema.vrot[v]


def _flip_events(curve: Curve, wedge: int) -> list[int]:
    evs = list(reversed(curve.worder[wedge]))
    for ev in evs:
        curve.events[ev].sign = -curve.events[ev].sign
    return evs


def _assert_single_disk(curve: Curve) -> None:
    arr = curve.arrangement()
    inner = _puncture_inner_faces(curve, arr)
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for d in arr.twin:
        if arr.kind[d] == "w":
            w = curve.schema.wedges[arr.ref[d][1]]
            if w.kind in ("loop", "arc"):
                continue
        a, b = find(arr.face_of[d]), find(arr.face_of[arr.twin[d]])
        if a != b:
            parent[max(a, b)] = min(a, b)
    roots = {find(f) for f in range(len(arr.faces)) if f not in inner}
    if len(roots) != 1:
        raise ArcError("arc system does not cut the surface into one piece")
