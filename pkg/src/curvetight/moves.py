"""
Homotopy and electrical moves as local surgeries, with replayable logs.

Every operation that changes the curve goes through this module so that a
MoveLog can reproduce the exact state evolution.  Records fall into two
groups: genuine diagram moves (M10, M20, M33, E21, TLC; crossing count never
increases) and bookkeeping records (ISO isotopies of the wall decoration,
SMOOTH analysis smoothings, DROP of contractible components, plus
REBASE/PUNCTURE/REDRAW phase markers handled by their own modules).

Conventions.  Region walks carry the region on the left; at a crossing visit
the walk leaves by the ccw-predecessor of the arriving dart, so the region
occupies the ccw corner between them.  In an M33 the sliding strand is the
one owning the region segment with the smallest dart id.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .mapcore import Curve, InvalidCurve, Region, region_by_key


class IllegalMove(Exception):
    pass


MOVE_KINDS = ("M10", "M20", "M33", "E21", "TLC")


@dataclass
class Rec:
    kind: str
    args: tuple
    n_after: int
    hash_after: str

    def line(self) -> str:
        a = " ".join(str(x) for x in self.args)
        return f"{self.kind} {a} ;n={self.n_after} ;h={self.hash_after}".replace("  ;", " ;")

    @staticmethod
    def parse(line: str) -> "Rec":
        body, _, tail = line.partition(";n=")
        n_s, _, h_s = tail.partition(";h=")
        parts = body.split()
        return Rec(parts[0], tuple(parts[1:]), int(n_s.strip()), h_s.strip())


@dataclass
class MoveLog:
    initial_lines: list[str] = field(default_factory=list)
    recs: list[Rec] = field(default_factory=list)

    def moves_only(self) -> list[Rec]:
        return [r for r in self.recs if r.kind in MOVE_KINDS]

    def dump_lines(self) -> list[str]:
        return ["moves v1"] + [r.line() for r in self.recs]

    @staticmethod
    def parse_lines(lines: list[str]) -> "MoveLog":
        body = [ln for ln in lines if ln.strip() and not ln.startswith("#")]
        assert body and body[0].startswith("moves"), "not a moves file"
        return MoveLog(recs=[Rec.parse(ln) for ln in body[1:]])


def total_crossings(curve: Curve) -> int:
    return curve.n_crossings() + sum(total_crossings(s) for s in curve.satellites.values())


class Runner:
    """Applies moves to a curve (or its satellites) and appends log records.

    ``on_reduce(kind, key, sat)`` may be set to intercept crossing-reducing
    moves; returning "E21" substitutes an electrical 2->1 for an M20.
    """

    def __init__(self, curve: Curve, log: MoveLog | None = None, check: bool = False):
        self.curve = curve
        self.log = log if log is not None else MoveLog()
        if not self.log.initial_lines:
            self.log.initial_lines = curve.state_lines()
        self.check = check
        self.on_reduce = None

    def _rec(self, kind: str, args: tuple, sat: int | None = None) -> Rec:
        if sat is not None:
            args = (f"s{sat}",) + args
        self.curve.touch()
        r = Rec(kind, tuple(str(a) for a in args), total_crossings(self.curve), self.curve.state_hash())
        self.log.recs.append(r)
        if self.check:
            rep = self.curve.validate()
            if not rep.ok:
                raise InvalidCurve(f"after {kind} {args}: {rep}")
            for s in self.curve.satellites.values():
                srep = s.validate()
                if not srep.ok:
                    raise InvalidCurve(f"satellite after {kind} {args}: {srep}")
        return r

    def _target(self, sat: int | None) -> Curve:
        return self.curve if sat is None else self.curve.satellites[sat]

    # moves ----------------------------------------------------------------

    def m10(self, key: str, sat: int | None = None) -> Rec:
        cur = self._target(sat)
        reg = _need_region(cur, key)
        _check_monogon(cur, reg)
        if self.on_reduce is not None:
            self.on_reduce("M10", key, sat)
        _do_m10(cur, reg)
        _postprocess(cur)
        return self._rec("M10", (key,), sat)

    def m20(self, key: str, sat: int | None = None) -> Rec:
        cur = self._target(sat)
        reg = _need_region(cur, key)
        _check_bigon(cur, reg)
        if self.on_reduce is not None:
            if self.on_reduce("M20", key, sat) == "E21":
                return self.e21(key, sat)
        _do_m20(cur, reg)
        _postprocess(cur)
        return self._rec("M20", (key,), sat)

    def m33(self, key: str, sat: int | None = None, mover: int | None = None) -> Rec:
        cur = self._target(sat)
        reg = _need_region(cur, key)
        _check_trigon(cur, reg)
        mv = _do_m33(cur, reg, mover)
        _postprocess(cur)
        return self._rec("M33", (key, mv), sat)

    def e21(self, key: str, sat: int | None = None) -> Rec:
        cur = self._target(sat)
        reg = _need_region(cur, key)
        _check_bigon(cur, reg)
        visits = [v for v, _, _ in reg.segments[0]]
        keep, kill = min(visits), max(visits)
        pairing = _bigon_collapse_pairing(cur, reg, kill)
        _do_smoothing(cur, kill, pairing)
        _postprocess(cur)
        return self._rec("E21", (key, keep), sat)

    def tlc(self, tip: int, puncture: int, sat: int | None = None) -> Rec:
        cur = self._target(sat)
        reg = _punctured_monogon_region(cur, tip, puncture)
        if reg is None:
            raise IllegalMove(f"no empty punctured monogon at vertex {tip}")
        din = _walk_din(cur, reg, 0, 0)
        dout = _walk_dout(cur, reg, 0, 0)
        r = cur.rot[tip]
        i, j = r.index(din), r.index(dout)
        if (i - j) % 4 != 1:
            raise IllegalMove("malformed monogon corner")
        # the pairing joining (dout, din) splits the puncture loop off; the
        # terminal-leaf contraction uses the connecting one
        pairing = [(dout, r[(j - 1) % 4]), (din, r[(i + 1) % 4])]
        _do_smoothing(cur, tip, pairing)
        _postprocess(cur)
        return self._rec("TLC", (tip, puncture), sat)

    def smooth(self, vertex: int, choice: str, sat: int | None = None) -> Rec:
        cur = self._target(sat)
        if vertex not in cur.rot:
            raise IllegalMove(f"no vertex {vertex}")
        r = list(cur.rot[vertex])
        pairing = [(r[0], r[1]), (r[2], r[3])] if choice == "A" else [(r[1], r[2]), (r[3], r[0])]
        _do_smoothing(cur, vertex, pairing)
        _postprocess(cur)
        return self._rec("SMOOTH", (vertex, choice), sat)

    # bookkeeping ------------------------------------------------------------

    def drop_free_loop(self, sat: int | None = None) -> Rec:
        cur = self._target(sat)
        if cur.free_loops <= 0:
            raise IllegalMove("no free loop to drop")
        cur.free_loops -= 1
        return self._rec("DROP", ("loop",), sat)

    def drop_ring(self, rid: int, sat: int | None = None) -> Rec:
        from .words import ring_is_contractible

        cur = self._target(sat)
        if rid not in cur.rings:
            raise IllegalMove(f"no ring {rid}")
        if not ring_is_contractible(cur, rid):
            raise IllegalMove(f"ring {rid} is not contractible")
        for ev in cur.rings.pop(rid):
            cur.worder[cur.events[ev].wedge].remove(ev)
            del cur.events[ev]
        return self._rec("DROP", (f"ring{rid}",), sat)

    def drop_shell(self, sat: int) -> Rec:
        s = self.curve.satellites[sat]
        if s.rot or s.rings or s.free_loops or s.satellites:
            raise IllegalMove("satellite not exhausted")
        del self.curve.satellites[sat]
        return self._rec("DROP", ("shell",), sat)

    def iso_cancel(self, e1: int, e2: int, sat: int | None = None) -> Rec:
        cur = self._target(sat)
        if not _cancel_pair_face(cur, e1, e2):
            raise IllegalMove(f"events {e1},{e2} do not bound a trivial wall bigon")
        _do_cancel(cur, e1, e2)
        _postprocess(cur)
        return self._rec("ISO", ("cancel", e1, e2), sat)

    def iso_wall_trigon(self, e1: int, e2: int, sat: int | None = None) -> Rec:
        cur = self._target(sat)
        data = _wall_trigon_data(cur, e1, e2)
        if data is None:
            raise IllegalMove(f"events {e1},{e2} do not bound a wall trigon")
        _do_wall_trigon(cur, e1, e2, data)
        return self._rec("ISO", ("walltri", e1, e2), sat)

    def iso_corner(self, e1: int, e2: int, sat: int | None = None) -> Rec:
        cur = self._target(sat)
        data = _corner_data(cur, e1, e2)
        if data is None:
            raise IllegalMove(f"events {e1},{e2} do not bound a corner face")
        _do_corner(cur, e1, e2, data)
        return self._rec("ISO", ("corner", e1, e2), sat)

    def mark(self, kind: str, *args) -> Rec:
        return self._rec(kind, tuple(args))


# ---------------------------------------------------------------------------
# region checks
# ---------------------------------------------------------------------------


def _need_region(cur: Curve, key: str) -> Region:
    reg = region_by_key(cur.arrangement(), str(key))
    if reg is None:
        raise IllegalMove(f"no face {key}")
    return reg


def _check_empty_disk(reg: Region, sides: int) -> list:
    if not reg.is_disk:
        raise IllegalMove("face is not a disk")
    if reg.punctures:
        raise IllegalMove("face contains punctures")
    visits = reg.segments[0]
    if len(visits) != sides:
        raise IllegalMove(f"face has {len(visits)} corners, want {sides}")
    return visits


def _check_monogon(cur: Curve, reg: Region) -> None:
    _check_empty_disk(reg, 1)
    if cur.edge_of[_walk_din(cur, reg, 0, 0)] != cur.edge_of[_walk_dout(cur, reg, 0, 0)]:
        raise IllegalMove("monogon side is not a single loop edge")


def _check_bigon(cur: Curve, reg: Region) -> None:
    visits = _check_empty_disk(reg, 2)
    if visits[0][0] == visits[1][0]:
        raise IllegalMove("bigon corners coincide")
    if cur.edge_of[_walk_dout(cur, reg, 0, 0)] == cur.edge_of[_walk_dout(cur, reg, 0, 1)]:
        raise IllegalMove("bigon sides are one edge")


def _check_trigon(cur: Curve, reg: Region) -> None:
    visits = _check_empty_disk(reg, 3)
    if len({v for v, _, _ in visits}) != 3:
        raise IllegalMove("trigon corners not distinct")


def _walk_dout(cur: Curve, reg: Region, walk_idx: int, visit_idx: int) -> int:
    """Curve dart by which the region walk leaves this crossing visit."""
    arr = cur.arrangement()
    _, _, arrdart = reg.segments[walk_idx][visit_idx]
    _, key, _, fwd = arr.ref[arrdart]
    rec = cur.edges[key]
    return rec.da if fwd else rec.db


def _walk_din(cur: Curve, reg: Region, walk_idx: int, visit_idx: int) -> int:
    """Curve dart (at this visit) of the edge by which the walk arrives."""
    prev = (visit_idx - 1) % len(reg.segments[walk_idx])
    arr = cur.arrangement()
    _, _, arrdart = reg.segments[walk_idx][prev]
    _, key, _, fwd = arr.ref[arrdart]
    rec = cur.edges[key]
    return rec.db if fwd else rec.da


def _punctured_monogon_region(cur: Curve, tip: int, puncture: int) -> Region | None:
    arr = cur.arrangement()
    for reg in arr.regions:
        if reg.euler != 1 or len(reg.walks) != 1 or reg.punctures != [puncture]:
            continue
        visits = reg.segments[0]
        if len(visits) == 1 and visits[0][0] == tip:
            if cur.edge_of[_walk_din(cur, reg, 0, 0)] == cur.edge_of[_walk_dout(cur, reg, 0, 0)]:
                return reg
    return None


# ---------------------------------------------------------------------------
# edge splicing
# ---------------------------------------------------------------------------


def _far_dart(cur: Curve, d: int) -> int:
    rec = cur.edges[cur.edge_of[d]]
    return rec.db if d == rec.da else rec.da


def _signed_anch_from(cur: Curve, d: int) -> list[tuple[int, int]]:
    """(event, sign-as-traveled) leaving from dart d along its edge."""
    rec = cur.edges[cur.edge_of[d]]
    if d == rec.da:
        return [(ev, cur.events[ev].sign) for ev in rec.anch]
    return [(ev, -cur.events[ev].sign) for ev in reversed(rec.anch)]


def _set_edge_anch(cur: Curve, key: int, seq: list[tuple[int, int]]) -> None:
    rec = cur.edges[key]
    rec.anch = [e for e, _ in seq]
    for e, s in seq:
        cur.events[e].sign = s
        cur.events[e].owner = ("e", key)


def _remove_vertex(cur: Curve, v: int) -> None:
    for d in cur.rot[v]:
        cur.dart_vertex.pop(d, None)
    del cur.rot[v]


def _make_ring_from_edge(cur: Curve, key: int) -> None:
    rec = cur.edges[key]
    evs = list(rec.anch)
    cur.drop_edge(key)
    if not evs:
        cur.free_loops += 1
        return
    rid = cur.new_ring_id()
    cur.rings[rid] = evs
    for ev in evs:
        cur.events[ev].owner = ("r", rid)


def _splice_pair(cur: Curve, du: int, dv: int) -> None:
    """Join strands so du's edge continues into dv's edge (both darts die)."""
    eu, ev_ = cur.edge_of[du], cur.edge_of[dv]
    if eu == ev_:
        _make_ring_from_edge(cur, eu)
        return
    fu, fv = _far_dart(cur, du), _far_dart(cur, dv)
    seq = _signed_anch_from(cur, fu) + _signed_anch_from(cur, dv)
    cur.drop_edge(eu)
    cur.drop_edge(ev_)
    cur.add_edge(fu, fv)
    _set_edge_anch(cur, fu, seq)


def _do_smoothing(cur: Curve, v: int, pairing: list[tuple[int, int]]) -> None:
    first, second = pairing
    _splice_pair(cur, *first)
    # the first splice never consumes the other pair's darts
    _splice_pair(cur, *second)
    _remove_vertex(cur, v)


def _bigon_collapse_pairing(cur: Curve, reg: Region, kill: int) -> list[tuple[int, int]]:
    visits = reg.segments[0]
    idx = 0 if visits[0][0] == kill else 1
    din = _walk_din(cur, reg, 0, idx)
    dout = _walk_dout(cur, reg, 0, idx)
    r = cur.rot[kill]
    i, j = r.index(din), r.index(dout)
    assert (i - j) % 4 == 1, "corner convention violated"
    return [(dout, din), (r[(j - 1) % 4], r[(i + 1) % 4])]


# ---------------------------------------------------------------------------
# the homotopy moves
# ---------------------------------------------------------------------------


def _do_m10(cur: Curve, reg: Region) -> None:
    x = reg.segments[0][0][0]
    loop_key = cur.edge_of[_walk_din(cur, reg, 0, 0)]
    for ev in cur.edges[loop_key].anch:
        cur.worder[cur.events[ev].wedge].remove(ev)
        del cur.events[ev]
    loop_darts = (cur.edges[loop_key].da, cur.edges[loop_key].db)
    cur.drop_edge(loop_key)
    strand = [d for d in cur.rot[x] if d not in loop_darts]
    _splice_pair(cur, strand[0], strand[1])
    _remove_vertex(cur, x)


def _do_m20(cur: Curve, reg: Region) -> None:
    """Remove an empty bigon: one side stays put, the other sweeps across it.

    The swept strand ends up hugging the stationary side from the far side,
    so it trades its own wall events for copies of the stationary side's,
    reversed, placed just beyond the originals.
    """
    arr = cur.arrangement()
    # stationary side: the walk segment containing the smallest curve dart
    seg_min = []
    for k in range(2):
        darts = [d for d in arr.walk_edge_path(reg, 0, k) if arr.kind[d] == "c"]
        keys = [arr.ref[d][1] for d in darts]
        seg_min.append(min(min(cur.edges[k0].da, cur.edges[k0].db) for k0 in keys))
    st = seg_min.index(min(seg_min))

    x = reg.segments[0][st][0]
    y = reg.segments[0][(st + 1) % 2][0]
    dout_x = _walk_dout(cur, reg, 0, st)  # stationary side e_P at x
    din_y = _walk_din(cur, reg, 0, (st + 1) % 2)  # e_P at y
    dout_y = _walk_dout(cur, reg, 0, (st + 1) % 2)  # swept side e_Q at y
    din_x = _walk_din(cur, reg, 0, st)  # e_Q at x

    e_Q = cur.edge_of[dout_y]
    # the swept strand hugs e_P reversed (from y back to x) on the far side
    hug = _signed_anch_from(cur, din_y)  # e_P traversed y -> x
    rfaces = set(reg.faces)
    sides = [_away_side(cur, arr, ev, rfaces) for ev, _ in hug]

    for ev in cur.edges[e_Q].anch:
        cur.worder[cur.events[ev].wedge].remove(ev)
        del cur.events[ev]
    copies: list[tuple[int, int]] = []
    for (orig, s), side in zip(hug, sides):
        w = cur.events[orig].wedge
        nev = cur.new_event(w, s, ("e", e_Q))
        pos = cur.worder[w].index(orig)
        cur.worder[w].insert(pos + (1 if side == "after" else 0), nev)
        copies.append((nev, s))
    # store relative to e_Q's own orientation: copies are traveled y -> x
    if cur.dart_vertex[cur.edges[e_Q].da] == y and cur.edges[e_Q].da == dout_y:
        _set_edge_anch(cur, e_Q, copies)
    else:
        _set_edge_anch(cur, e_Q, [(e, -s) for e, s in reversed(copies)])

    for v in (x, y):
        r = list(cur.rot[v])
        _splice_pair(cur, r[0], r[2])
        _splice_pair(cur, r[1], r[3])
        _remove_vertex(cur, v)


def _do_m33(cur: Curve, reg: Region, mover: int | None = None) -> int:
    arr = cur.arrangement()
    if mover is None:
        # default sliding strand: segment with the smallest curve dart id
        seg_min = []
        for k in range(3):
            darts = [d for d in arr.walk_edge_path(reg, 0, k) if arr.kind[d] == "c"]
            keys = [arr.ref[d][1] for d in darts]
            seg_min.append(min(min(cur.edges[k0].da, cur.edges[k0].db) for k0 in keys))
        mv = seg_min.index(min(seg_min))
    else:
        mv = int(mover)

    x = reg.segments[0][mv][0]
    y = reg.segments[0][(mv + 1) % 3][0]
    z = reg.segments[0][(mv + 2) % 3][0]
    dout_x = _walk_dout(cur, reg, 0, mv)  # e_C at x
    din_y = _walk_din(cur, reg, 0, (mv + 1) % 3)  # e_C at y
    dout_y = _walk_dout(cur, reg, 0, (mv + 1) % 3)  # e_A at y
    din_z = _walk_din(cur, reg, 0, (mv + 2) % 3)  # e_A at z
    dout_z = _walk_dout(cur, reg, 0, (mv + 2) % 3)  # e_B at z
    din_x = _walk_din(cur, reg, 0, mv)  # e_B at x

    e_C = cur.edge_of[dout_x]
    c_in_d = cur.opposite(dout_x)  # at x, toward c_in
    c_out_d = cur.opposite(din_y)  # at y, toward c_out
    a_in_d = cur.opposite(dout_y)  # at y
    a_out_d = cur.opposite(din_z)  # at z
    b_in_d = cur.opposite(dout_z)  # at z
    b_out_d = cur.opposite(din_x)  # at x

    # capture hug sequences and their wall insertion sides before mutating
    hug_B = _signed_anch_from(cur, din_x)  # e_B traversed x -> z
    hug_A = _signed_anch_from(cur, din_z)  # e_A traversed z -> y
    rfaces = set(reg.faces)
    sides_B = [_away_side(cur, arr, ev, rfaces) for ev, _ in hug_B]
    sides_A = [_away_side(cur, arr, ev, rfaces) for ev, _ in hug_A]

    # drop the moved side and its wall events
    for ev in cur.edges[e_C].anch:
        cur.worder[cur.events[ev].wedge].remove(ev)
        del cur.events[ev]
    cur.drop_edge(e_C)

    # merge A1+e_A across y and e_B+B3 across x
    _splice_pair(cur, a_in_d, dout_y)
    _splice_pair(cur, din_x, b_out_d)
    _remove_vertex(cur, x)
    _remove_vertex(cur, y)

    # split the far edges just beyond z and insert the flipped trigon; the
    # splits run on live data so shared outer edges come out right
    n1 = cur.new_dart()  # tiny_A at y'
    n2 = cur.new_dart()  # A3 remainder at y'
    n3 = cur.new_dart()  # tiny_B at x'
    n4 = cur.new_dart()  # B1 remainder at x'
    c_top_x = cur.new_dart()
    c_top_y = cur.new_dart()

    _split_edge_end(cur, a_out_d, n2)
    cur.add_edge(a_out_d, n1)
    _split_edge_end(cur, b_in_d, n4)
    cur.add_edge(n3, b_in_d)
    cur.add_edge(c_top_x, c_top_y)

    # x' is the new C x B crossing (met by the c_out extension), y' the new
    # C x A crossing (met by the c_in extension hugging e_B)
    xp = cur.new_vertex([n4, c_top_x, n3, c_out_d])
    yp = cur.new_vertex([c_top_y, n2, c_in_d, n1])
    del xp, yp

    # hug_B already runs toward y'; hug_A runs away from x', so flip it
    _extend_edge_at(cur, c_in_d, hug_B, sides_B)
    _extend_edge_at(cur, c_out_d, [(e, -s) for e, s in reversed(hug_A)], list(reversed(sides_A)))
    return mv


def _split_edge_end(cur: Curve, end_dart: int, new_dart: int) -> None:
    """Detach end_dart from its edge; the remainder keeps the far dart and
    all anchors, with new_dart as its fresh endpoint."""
    seq = _signed_anch_from(cur, end_dart)
    far = _far_dart(cur, end_dart)
    cur.drop_edge(cur.edge_of[end_dart])
    cur.add_edge(new_dart, far)
    _set_edge_anch(cur, new_dart, seq)


def _away_side(cur: Curve, arr, ev: int, rfaces: set[int]) -> str:
    """Which side of event ev (along its wall edge) is away from the region."""
    evs = cur.worder[cur.events[ev].wedge]
    k = evs.index(ev)
    segs = arr.wall_chain_darts[cur.events[ev].wedge]
    prev_seg = segs[k]  # segment before the event (toward v1)
    f1 = arr.face_of[prev_seg[0]]
    f2 = arr.face_of[prev_seg[1]]
    return "after" if (f1 in rfaces or f2 in rfaces) else "before"


def _extend_edge_at(cur: Curve, end_dart: int, hug: list[tuple[int, int]], sides: list[str]) -> None:
    """Append hug-copy events at the end_dart end of its (current) edge.

    ``hug`` lists (original event, sign as traveled toward end_dart's new
    vertex); copies are created adjacent to the originals on their away side.
    """
    key = cur.edge_of[end_dart]
    rec = cur.edges[key]
    copies: list[tuple[int, int]] = []
    for (orig, s), side in zip(hug, sides):
        w = cur.events[orig].wedge
        nev = cur.new_event(w, s, ("e", key))
        pos = cur.worder[w].index(orig)
        cur.worder[w].insert(pos + (1 if side == "after" else 0), nev)
        copies.append((nev, s))
    if end_dart == rec.db:
        seq = _signed_anch_from(cur, rec.da) + copies
        _set_edge_anch(cur, key, seq)
    else:
        seq = [(e, -s) for e, s in reversed(copies)] + _signed_anch_from(cur, rec.da)
        _set_edge_anch(cur, key, seq)


# ---------------------------------------------------------------------------
# satellite extraction
# ---------------------------------------------------------------------------


def _postprocess(cur: Curve) -> None:
    """Extract crossing clusters that lost all wall anchors into satellites."""
    comps = cur.trace_components()
    for walk in comps:
        keys = {cur.edge_of[d] for d in walk}
        if any(cur.edges[k].anch for k in keys):
            continue
        _extract_satellite(cur, walk)


def _extract_satellite(cur: Curve, walk: list[int]) -> None:
    from .schema import base_schema

    # gather the whole crossing-connected cluster containing this component
    seen_v: set[int] = set()
    stack = [cur.dart_vertex[walk[0]]]
    while stack:
        v = stack.pop()
        if v in seen_v:
            continue
        seen_v.add(v)
        for d in cur.rot[v]:
            w = cur.dart_vertex[_far_dart_safe(cur, d)]
            if w not in seen_v:
                stack.append(w)
    keys = {cur.edge_of[d] for v in seen_v for d in cur.rot[v]}
    if any(cur.edges[k].anch for k in keys):
        return  # cluster still anchored through another component

    sat = Curve(base_schema(0, 0))
    sat._next_dart = cur._next_dart
    sat._next_vertex = cur._next_vertex
    sat._next_event = 0
    for v in sorted(seen_v):
        sat.rot[v] = list(cur.rot[v])
        for d in cur.rot[v]:
            sat.dart_vertex[d] = v
        del cur.rot[v]
    for k in sorted(keys):
        rec = cur.edges[k]
        sat.add_edge(rec.da, rec.db)
        cur.drop_edge(k)
    for v in seen_v:
        for d in sat.rot[v]:
            cur.dart_vertex.pop(d, None)
    # tether the cluster across the sphere wall so the arrangement connects
    w0 = sat.schema.crossable_edges()[0]
    key0 = min(sat.edges)
    ev1 = sat.new_event(w0, 1, ("e", key0))
    ev2 = sat.new_event(w0, -1, ("e", key0))
    sat.edges[key0].anch = [ev1, ev2]
    sat.worder[w0] = [ev1, ev2]
    sid = cur._next_sat
    cur._next_sat += 1
    cur.satellites[sid] = sat
    sat.touch()


def _far_dart_safe(cur: Curve, d: int) -> int:
    return _far_dart(cur, d)


# ---------------------------------------------------------------------------
# isotopy atoms
# ---------------------------------------------------------------------------


def _owner_seq(cur: Curve, owner: tuple) -> list[int]:
    return cur.edges[owner[1]].anch if owner[0] == "e" else cur.rings[owner[1]]


def _cancel_pair_face(cur: Curve, e1: int, e2: int) -> bool:
    """True iff e1,e2 co-bound a 2-sided face (one curve seg, one wall seg)."""
    if e1 not in cur.events or e2 not in cur.events:
        return False
    a, b = cur.events[e1], cur.events[e2]
    if a.wedge != b.wedge or a.owner != b.owner:
        return False
    arr = cur.arrangement()
    for face in _faces_between(arr, cur, e1, e2):
        kinds = [arr.kind[d] for d in face]
        nodes = {arr.node_of[d] for d in face}
        if nodes == {("e", e1), ("e", e2)} and kinds.count("c") == 1 and kinds.count("w") == 1:
            return True
    return False


def _faces_between(arr, cur: Curve, e1: int, e2: int):
    seen = set()
    for d in arr.twin:
        if arr.node_of[d] in (("e", e1), ("e", e2)):
            f = arr.face_of[d]
            if f not in seen:
                seen.add(f)
                yield arr.faces[f]


def _do_cancel(cur: Curve, e1: int, e2: int) -> None:
    owner = cur.events[e1].owner
    seq = _owner_seq(cur, owner)
    for e in (e1, e2):
        seq.remove(e)
        cur.worder[cur.events[e].wedge].remove(e)
        del cur.events[e]
    if owner[0] == "r" and not seq:
        del cur.rings[owner[1]]
        cur.free_loops += 1


def _wall_trigon_data(cur: Curve, e1: int, e2: int):
    """Face bounded by [seg P: e1->v, seg Q: v->e2, wall seg e2..e1]."""
    if e1 not in cur.events or e2 not in cur.events:
        return None
    if cur.events[e1].wedge != cur.events[e2].wedge:
        return None
    arr = cur.arrangement()
    for face in _faces_between(arr, cur, e1, e2):
        xnodes = [arr.node_of[d] for d in face if arr.node_of[d][0] == "x"]
        enodes = {arr.node_of[d] for d in face if arr.node_of[d][0] == "e"}
        wnodes = [arr.node_of[d] for d in face if arr.node_of[d][0] == "w"]
        kinds = [arr.kind[d] for d in face]
        if len(xnodes) == 1 and enodes == {("e", e1), ("e", e2)} and not wnodes:
            if kinds.count("c") == 2 and kinds.count("w") == 1:
                v = xnodes[0][1]
                return (v, face)
    return None


def _do_wall_trigon(cur: Curve, e1: int, e2: int, data) -> None:
    v, _face = data
    w = cur.events[e1].wedge
    evs = cur.worder[w]
    i1, i2 = evs.index(e1), evs.index(e2)
    assert abs(i1 - i2) == 1, "wall trigon events not adjacent on the wall"
    new_pair = []
    for e in (e1, e2):
        owner = cur.events[e].owner
        assert owner[0] == "e"
        key = owner[1]
        rec = cur.edges[key]
        # the event must be the extreme event toward v on its edge
        if cur.dart_vertex.get(rec.db) == v and rec.anch and rec.anch[-1] == e:
            to_v_dart, last = rec.db, True
        elif cur.dart_vertex.get(rec.da) == v and rec.anch and rec.anch[0] == e:
            to_v_dart, last = rec.da, False
        else:
            raise IllegalMove("event is not adjacent to the sliding crossing")
        traveled = cur.events[e].sign if last else -cur.events[e].sign
        rec.anch.remove(e)
        far = cur.opposite(to_v_dart)
        fkey = cur.edge_of[far]
        frec = cur.edges[fkey]
        nev = cur.new_event(w, traveled if far == frec.da else -traveled, ("e", fkey))
        if far == frec.da:
            frec.anch.insert(0, nev)
        else:
            frec.anch.append(nev)
        new_pair.append(nev)
        del cur.events[e]
    lo = min(i1, i2)
    # remove old events and insert the new pair swapped, in place
    keep_order = [new_pair[1], new_pair[0]] if i1 < i2 else [new_pair[0], new_pair[1]]
    del evs[lo : lo + 2]
    evs[lo:lo] = keep_order


def _corner_data(cur: Curve, e1: int, e2: int):
    """Face bounded by one curve seg and a wall run through one wall vertex."""
    if e1 not in cur.events or e2 not in cur.events:
        return None
    if cur.events[e1].owner != cur.events[e2].owner:
        return None
    arr = cur.arrangement()
    for face in _faces_between(arr, cur, e1, e2):
        enodes = {arr.node_of[d] for d in face if arr.node_of[d][0] == "e"}
        wnodes = [arr.node_of[d] for d in face if arr.node_of[d][0] == "w"]
        xnodes = [n for n in (arr.node_of[d] for d in face) if n[0] == "x"]
        kinds = [arr.kind[d] for d in face]
        if xnodes or enodes != {("e", e1), ("e", e2)}:
            continue
        if len(set(wnodes)) == 1 and kinds.count("c") == 1 and kinds.count("w") == 2:
            u = wnodes[0][1]
            if len(cur.schema.vrot[u]) == 3:
                return (u, face)
    return None


def _do_corner(cur: Curve, e1: int, e2: int, data) -> None:
    """Slide a strand across a degree-3 wall vertex (2 events become 1)."""
    from .schema import wdart_edge, wdart_end

    u, _face = data
    owner = cur.events[e1].owner
    seq = _owner_seq(cur, owner)
    we1, we2 = cur.events[e1].wedge, cur.events[e2].wedge
    others = [wd for wd in cur.schema.vrot[u] if wdart_edge(wd) not in (we1, we2)]
    if len(others) != 1:
        raise IllegalMove("corner slide needs exactly one free wall edge")
    w3, end3 = wdart_edge(others[0]), wdart_end(others[0])

    # order the pair along the owner traversal (first immediately precedes
    # second, cyclically for rings)
    i1 = seq.index(e1)
    cyc = owner[0] == "r"
    nxt = seq[(i1 + 1) % len(seq)] if cyc else (seq[i1 + 1] if i1 + 1 < len(seq) else None)
    first, second = (e1, e2) if nxt == e2 else (e2, e1)

    # circling direction: ccw around u iff stepping ccw in u's rotation from
    # first's wall dart meets the free edge before second's dart
    rotu = cur.schema.vrot[u]
    wd_first = _udart_for_event(cur, u, first)
    wd_second = _udart_for_event(cur, u, second)
    ccw = rotu[(rotu.index(wd_first) + 1) % 3] != wd_second
    # crossing sign while circling: ccw meets an edge leaving u right-to-left
    trav = (-1 if end3 == 0 else 1) if ccw else (1 if end3 == 0 else -1)

    nev = cur.new_event(w3, trav, owner)
    j = seq.index(first)
    seq.remove(first)
    seq.remove(second)
    seq.insert(min(j, len(seq)), nev)
    # the new crossing sits between u and every existing event on w3
    if end3 == 0:
        cur.worder[w3].insert(0, nev)
    else:
        cur.worder[w3].append(nev)
    for e in (first, second):
        cur.worder[cur.events[e].wedge].remove(e)
        del cur.events[e]


def _udart_for_event(cur: Curve, u: int, ev: int) -> int:
    from .schema import wdart_edge

    w = cur.events[ev].wedge
    for wd in cur.schema.vrot[u]:
        if wdart_edge(wd) == w:
            return wd
    raise IllegalMove("event wedge not incident to corner vertex")


