"""
Breadth-first minimality oracle over homotopy moves in both directions.

States are whole decorated arrangements, eagerly normalized (contractible
junk dropped, trivial wall bigons cancelled) and deduplicated by a canonical
code that relabels darts, vertices and events.  Forward moves are the empty
monogon/bigon/trigon rewrites; backward moves add kinks (reverse 1->0) and
push fingers across pieces that share an arrangement face (reverse 2->0).
The crossing cap keeps the search finite.

The oracle shares none of the tightening pipeline's logic: moves are applied
through the same verified local surgeries, but which moves to try and when
to stop is exhaustive search.
"""

from __future__ import annotations

from .mapcore import Curve, euler_check
from .moves import MoveLog, Runner, _walk_din, _walk_dout, _cancel_pair_face
from .steinitz import cleanup_contractible, find_empty
from .words import class_multiset, ring_is_contractible


class OracleError(Exception):
    pass


# ---------------------------------------------------------------------------
# canonical state code
# ---------------------------------------------------------------------------


def canonical_code(cur: Curve) -> str:
    """Canonical form of the decorated curve with walls pinned in place."""
    eid = {}
    ev_lines = []
    for w in sorted(cur.worder):
        for ev in cur.worder[w]:
            eid[ev] = len(eid)
            ev_lines.append((w, eid[ev]))

    best = None
    roots = sorted(cur.twin)
    if not roots:
        code = repr((tuple(ev_lines), _ring_code(cur, eid), cur.free_loops))
        return code
    for root in roots:
        enc = _encode_from(cur, root, eid)
        if best is None or enc < best:
            best = enc
    return repr((tuple(ev_lines), best, _ring_code(cur, eid), cur.free_loops))


def _ring_code(cur: Curve, eid) -> tuple:
    out = []
    for rid in cur.rings:
        evs = cur.rings[rid]
        cands = []
        seqs = [[(eid[e], cur.events[e].sign) for e in evs]]
        seqs.append([(eid[e], -cur.events[e].sign) for e in reversed(evs)])
        for seq in seqs:
            for k in range(len(seq)):
                cands.append(tuple(seq[k:] + seq[:k]))
        out.append(min(cands))
    return tuple(sorted(out))


def _encode_from(cur: Curve, root: int, eid) -> tuple:
    order: dict[int, int] = {}
    out = []
    queue = [root]
    qi = 0
    while True:
        while qi < len(queue):
            d = queue[qi]
            qi += 1
            if d in order:
                continue
            order[d] = len(order)
            v = cur.dart_vertex[d]
            r = cur.rot[v]
            i = r.index(d)
            rr = r[i:] + r[:i]
            far = cur.twin[d]
            rec = cur.edges[cur.edge_of[d]]
            if d == rec.da:
                evs = tuple((eid[e], cur.events[e].sign) for e in rec.anch)
            else:
                evs = tuple((eid[e], -cur.events[e].sign) for e in reversed(rec.anch))
            out.append((tuple(order.get(x, -1) for x in rr), order.get(far, -1), evs))
            queue.extend(rr[1:])
            queue.append(far)
        missing = [d for d in sorted(cur.twin) if d not in order]
        if not missing:
            break
        # deterministic continuation for disconnected curve parts: anchored
        # parts restart at the dart whose edge carries the smallest event
        def key(d):
            rec = cur.edges[cur.edge_of[d]]
            evs = [eid[e] for e in rec.anch]
            return (min(evs) if evs else 1 << 30, len(order))

        queue.append(min(missing, key=key))
    # second pass: emit with final numbering resolved
    final = []
    for d in sorted(order, key=order.get):
        v = cur.dart_vertex[d]
        r = cur.rot[v]
        i = r.index(d)
        rr = r[i:] + r[:i]
        far = cur.twin[d]
        rec = cur.edges[cur.edge_of[d]]
        if d == rec.da:
            evs = tuple((eid[e], cur.events[e].sign) for e in rec.anch)
        else:
            evs = tuple((eid[e], -cur.events[e].sign) for e in reversed(rec.anch))
        final.append((tuple(order[x] for x in rr), order[far], evs))
    return tuple(final)


# ---------------------------------------------------------------------------
# state normalization
# ---------------------------------------------------------------------------


def normalize_state(cur: Curve) -> Curve:
    """Eagerly shed contractible junk and cancel trivial wall bigons."""
    cur = cur.copy()
    runner = Runner(cur, MoveLog())
    for sid in sorted(cur.satellites):
        cleanup_contractible(runner, sid)
        runner.drop_shell(sid)
    changed = True
    while changed:
        changed = False
        for rid in sorted(cur.rings):
            if ring_is_contractible(cur, rid):
                runner.drop_ring(rid)
                changed = True
        cur.free_loops = 0
        for k in sorted(cur.edges):
            rec = cur.edges[k]
            for i in range(len(rec.anch) - 1):
                if _cancel_pair_face(cur, rec.anch[i], rec.anch[i + 1]):
                    runner.iso_cancel(rec.anch[i], rec.anch[i + 1])
                    changed = True
                    break
            if changed:
                break
        if changed:
            continue
        for rid in sorted(cur.rings):
            evs = cur.rings[rid]
            if len(evs) < 2:
                continue
            for i in range(len(evs)):
                e1, e2 = evs[i], evs[(i + 1) % len(evs)]
                if _cancel_pair_face(cur, e1, e2):
                    runner.iso_cancel(e1, e2)
                    changed = True
                    break
            if changed:
                break
    return cur


# ---------------------------------------------------------------------------
# backward moves (oracle-local surgeries, no logging)
# ---------------------------------------------------------------------------


def _split_at(cur: Curve, owner: tuple, gap: int, new_da: int, new_db: int) -> None:
    """Split an edge or ring at an anchor gap into a path through two fresh
    endpoint darts (new_da ends the first part, new_db starts the second)."""
    if owner[0] == "e":
        rec = cur.edges[owner[1]]
        da, db, anch = rec.da, rec.db, list(rec.anch)
        cur.drop_edge(owner[1])
        cur.add_edge(da, new_da)
        cur.edges[da].anch = anch[:gap]
        for e in anch[:gap]:
            cur.events[e].owner = ("e", da)
        cur.add_edge(new_db, db)
        cur.edges[new_db].anch = anch[gap:]
        for e in anch[gap:]:
            cur.events[e].owner = ("e", new_db)
    else:
        rid = owner[1]
        evs = cur.rings.pop(rid)
        rot = evs[gap:] + evs[:gap]
        cur.add_edge(new_db, new_da)
        cur.edges[new_db].anch = rot
        for e in rot:
            cur.events[e].owner = ("e", new_db)


def reverse_m10(cur: Curve, owner: tuple, gap: int, side: int) -> None:
    s_in = cur.new_dart()
    s_out = cur.new_dart()
    l1 = cur.new_dart()
    l2 = cur.new_dart()
    _split_at(cur, owner, gap, s_in, s_out)
    cur.add_edge(l1, l2)
    if side == 0:
        cur.new_vertex([s_in, l1, s_out, l2])
    else:
        cur.new_vertex([s_in, l2, s_out, l1])
    cur.touch()


def reverse_m20(cur: Curve, u1: int, u2: int, flip: bool) -> None:
    """Push a finger of u1's piece across u2's piece (same arrangement face).

    u1, u2 are arrangement darts of curve segments bounding a common face.
    """
    arr = cur.arrangement()
    assert arr.face_of[u1] == arr.face_of[u2] and u1 != u2
    ref1, ref2 = arr.ref[u1], arr.ref[u2]
    own1 = (ref1[0], ref1[1]) if ref1[0] == "r" else ("e", ref1[1])
    own2 = (ref2[0], ref2[1]) if ref2[0] == "r" else ("e", ref2[1])
    # a cut in edge segment k sits at anchor gap k; ring segment k runs from
    # event k to event k+1, so the cut lands at cyclic gap k+1
    gap1 = ref1[2] if own1[0] == "e" else (ref1[2] + 1) % max(1, len(cur.rings[own1[1]]))
    gap2 = ref2[2] if own2[0] == "e" else (ref2[2] + 1) % max(1, len(cur.rings[own2[1]]))

    p1a = cur.new_dart()
    p1b = cur.new_dart()
    p2a = cur.new_dart()
    p2b = cur.new_dart()
    mids = [cur.new_dart() for _ in range(4)]  # p1 bridge, p2 middle
    _split_at(cur, own1, gap1, p1a, p1b)
    own2b = own2
    if own2 == own1:
        # the first split may have rebuilt the owner; locate the second gap
        # inside whichever new edge carries it
        own2b, gap2 = _relocate_gap(cur, p1a, p1b, gap1, gap2)
    _split_at(cur, own2b, gap2, p2a, p2b)

    # P1: ...p1a -> v1 -> bridge -> v2 -> p1b...; P2: ...p2a -> v1 -> mid -> v2 -> p2b...
    cur.add_edge(mids[0], mids[1])  # P1 bridge between the crossings
    cur.add_edge(mids[2], mids[3])  # P2 middle piece
    if not flip:
        cur.new_vertex([mids[0], mids[2], p1a, p2a])  # v1
        cur.new_vertex([p1b, p2b, mids[1], mids[3]])  # v2
    else:
        cur.new_vertex([mids[0], p2a, p1a, mids[2]])
        cur.new_vertex([p1b, mids[3], mids[1], p2b])
    cur.touch()


def _relocate_gap(cur: Curve, p1a: int, p1b: int, gap1: int, gap2: int):
    e_first = cur.edge_of[p1a]
    n_first = len(cur.edges[e_first].anch)
    if gap2 <= n_first and gap2 <= gap1:
        return ("e", e_first), gap2
    return ("e", cur.edge_of[p1b]), gap2 - gap1


# ---------------------------------------------------------------------------
# the search
# ---------------------------------------------------------------------------


def min_crossings(start: Curve, cap_extra: int = 2, max_states: int = 300000) -> int:
    """Minimum crossing count over all diagrams reachable by homotopy moves
    with at most n + cap_extra crossings."""
    base = normalize_state(start)
    cap = base.n_crossings() + cap_extra
    seen = {canonical_code(base)}
    frontier = [base]
    best = base.n_crossings()
    while frontier:
        nxt = []
        for cur in frontier:
            for child in _children(cur, cap):
                code = canonical_code(child)
                if code in seen:
                    continue
                seen.add(code)
                if len(seen) > max_states:
                    raise OracleError("state cap exceeded")
                best = min(best, child.n_crossings())
                nxt.append(child)
        frontier = nxt
    return best


def _children(cur: Curve, cap: int):
    runner = None
    # forward moves
    for kind, sides in (("monogon", 1), ("bigon", 2), ("trigon", 3)):
        for key in find_empty(cur, kind):
            if sides == 3:
                for mover in range(3):
                    c2 = cur.copy()
                    Runner(c2, MoveLog()).m33(key, mover=mover)
                    yield normalize_state(c2)
            else:
                c2 = cur.copy()
                r2 = Runner(c2, MoveLog())
                if sides == 1:
                    r2.m10(key)
                else:
                    r2.m20(key)
                yield normalize_state(c2)
    want_class = class_multiset(cur)
    # backward kinks
    if cur.n_crossings() + 1 <= cap:
        owners = [("e", k) for k in sorted(cur.edges)] + [("r", r) for r in sorted(cur.rings)]
        for owner in owners:
            n_anch = len(cur.edges[owner[1]].anch) if owner[0] == "e" else len(cur.rings[owner[1]])
            gaps = range(n_anch + 1) if owner[0] == "e" else range(n_anch)
            for gap in gaps:
                for side in (0, 1):
                    c2 = cur.copy()
                    reverse_m10(c2, owner, gap, side)
                    if not c2.validate().ok or not euler_check(c2):
                        continue
                    if class_multiset(c2) != want_class:
                        continue
                    yield normalize_state(c2)
    # backward fingers
    if cur.n_crossings() + 2 <= cap:
        arr = cur.arrangement()
        cds = [d for d in sorted(arr.twin) if arr.kind[d] == "c"]
        for i, u1 in enumerate(cds):
            for u2 in cds:
                if u1 == u2 or arr.face_of[u1] != arr.face_of[u2]:
                    continue
                for flip in (False, True):
                    c2 = cur.copy()
                    try:
                        reverse_m20(c2, u1, u2, flip)
                    except AssertionError:
                        continue
                    if not c2.validate().ok or not euler_check(c2):
                        continue
                    if class_multiset(c2) != want_class:
                        continue
                    yield normalize_state(c2)
