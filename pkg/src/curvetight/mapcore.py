"""
Combinatorial multicurves on surfaces.

A multicurve is stored as a 4-valent combinatorial map (rotation system) of
its crossings, together with *anchor events*: ordered crossings of each curve
edge against the crossable wall edges of the schema.  Each wall edge also
stores the order of its events, so the pair (map, events) pins down the
embedded arrangement of curve plus walls on the surface.

The :class:`Arrangement` is the fully subdivided map of curve union walls.
It is rebuilt on demand and supplies faces, dissolved curve-level regions
(with Euler characteristic and puncture content), and boundary walks.

Components with no crossings but at least one anchor event are kept as
*rings* (vertex-free cycles of events).  Crossing-free contractible loops are
only counted (``free_loops``); contractible clusters that detach from the
walls entirely live in ``satellites`` as bare planar maps.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .schema import Schema, base_schema, wdart, wdart_edge, wdart_end

CURVE_KIND = "c"
WALL_KIND = "w"


@dataclass
class Event:
    id: int
    wedge: int
    sign: int  # +1: owner crosses the wall edge left-to-right (wall oriented v1->v2)
    owner: tuple  # ("e", edge_key) or ("r", ring_id)


@dataclass
class EdgeRec:
    """Curve edge between two crossing darts, anchors oriented da -> db."""

    da: int
    db: int
    anch: list[int] = field(default_factory=list)


class ValidationReport:
    def __init__(self) -> None:
        self.errors: list[str] = []

    def add(self, msg: str) -> None:
        self.errors.append(msg)

    @property
    def ok(self) -> bool:
        return not self.errors

    def __repr__(self) -> str:
        return "valid" if self.ok else "invalid: " + "; ".join(self.errors)


class InvalidCurve(Exception):
    pass


class Curve:
    """Embedded multicurve with anchor bookkeeping against a wall schema."""

    def __init__(self, schema: Schema):
        self.schema = schema
        self.rot: dict[int, list[int]] = {}
        self.twin: dict[int, int] = {}
        self.dart_vertex: dict[int, int] = {}
        self.edges: dict[int, EdgeRec] = {}  # key: the da dart
        self.edge_of: dict[int, int] = {}  # dart -> edge key
        self.events: dict[int, Event] = {}
        self.worder: dict[int, list[int]] = {e: [] for e in schema.wedges}
        self.rings: dict[int, list[int]] = {}
        self.free_loops = 0
        self.satellites: dict[int, "Curve"] = {}
        self._next_dart = 0
        self._next_vertex = 0
        self._next_event = 0
        self._next_ring = 0
        self._next_sat = 0
        self.version = 0
        self._arr: Arrangement | None = None

    # -- allocation ----------------------------------------------------------

    def new_dart(self) -> int:
        d = self._next_dart
        self._next_dart += 1
        return d

    def new_vertex(self, darts: list[int]) -> int:
        v = self._next_vertex
        self._next_vertex += 1
        self.rot[v] = darts
        for d in darts:
            self.dart_vertex[d] = v
        return v

    def new_event(self, wedge: int, sign: int, owner: tuple) -> int:
        e = self._next_event
        self._next_event += 1
        self.events[e] = Event(e, wedge, sign, owner)
        return e

    def new_ring_id(self) -> int:
        r = self._next_ring
        self._next_ring += 1
        return r

    def add_edge(self, da: int, db: int, anch: list[int] | None = None) -> int:
        self.edges[da] = EdgeRec(da, db, anch or [])
        self.edge_of[da] = da
        self.edge_of[db] = da
        self.twin[da] = db
        self.twin[db] = da
        for ev in self.edges[da].anch:
            self.events[ev].owner = ("e", da)
        return da

    def drop_edge(self, key: int) -> None:
        rec = self.edges.pop(key)
        for d in (rec.da, rec.db):
            self.edge_of.pop(d, None)
            self.twin.pop(d, None)

    def touch(self) -> None:
        self.version += 1
        self._arr = None

    # -- basic queries ---------------------------------------------------------

    def crossings(self) -> list[int]:
        return sorted(self.rot)

    def n_crossings(self) -> int:
        return len(self.rot)

    def opposite(self, d: int) -> int:
        v = self.dart_vertex[d]
        r = self.rot[v]
        return r[(r.index(d) + 2) % 4]

    def anch_from(self, d: int) -> list[int]:
        """Anchor events of d's edge, oriented leaving from dart d."""
        rec = self.edges[self.edge_of[d]]
        return list(rec.anch) if d == rec.da else list(reversed(rec.anch))

    def event_sign_from(self, ev: int, d: int) -> int:
        """Sign of event ev when its edge is traversed starting at dart d."""
        rec = self.edges[self.edge_of[d]]
        s = self.events[ev].sign
        return s if d == rec.da else -s

    def trace_components(self) -> list[list[int]]:
        """Partition crossing darts into closed strand walks (one per component).

        Each component is returned as the list of darts it leaves vertices by.
        Rings, free loops and satellites are not included here.
        """
        seen: set[int] = set()
        comps = []
        for d0 in sorted(self.twin):
            if d0 in seen:
                continue
            walk = []
            d = d0
            while d not in seen:
                seen.add(d)
                walk.append(d)
                d2 = self.twin[d]  # arrive at other endpoint
                seen.add(d2)
                d = self.opposite(d2)
            comps.append(walk)
        return comps

    def component_count(self) -> int:
        n = len(self.trace_components()) + len(self.rings) + self.free_loops
        for sat in self.satellites.values():
            n += sat.component_count()
        return n

    # -- validation ------------------------------------------------------------

    def validate(self) -> ValidationReport:
        rep = ValidationReport()
        for v, r in self.rot.items():
            if len(r) != 4:
                rep.add(f"vertex {v} has degree {len(r)}")
            for d in r:
                if self.dart_vertex.get(d) != v:
                    rep.add(f"dart {d} vertex backref broken at {v}")
        for d, t in self.twin.items():
            if self.twin.get(t) != d:
                rep.add(f"involution broken at dart {d}")
            if d not in self.edge_of:
                rep.add(f"dart {d} not in any edge")
        for key, rec in self.edges.items():
            if key != rec.da:
                rep.add(f"edge key {key} mismatched")
            for d in (rec.da, rec.db):
                if d not in self.dart_vertex:
                    rep.add(f"edge {key} endpoint dart {d} has no vertex")
            for ev in rec.anch:
                if ev not in self.events:
                    rep.add(f"edge {key} references missing event {ev}")
                elif self.events[ev].owner != ("e", key):
                    rep.add(f"event {ev} owner backref broken")
        for rid, evs in self.rings.items():
            if not evs:
                rep.add(f"ring {rid} has no events")
            for ev in evs:
                if self.events[ev].owner != ("r", rid):
                    rep.add(f"ring event {ev} owner backref broken")
        in_order = [ev for w in sorted(self.worder) for ev in self.worder[w]]
        if sorted(in_order) != sorted(self.events):
            rep.add("wall event order does not match event set")
        for w, evs in self.worder.items():
            if not self.schema.wedges[w].crossable and evs:
                rep.add(f"uncrossable wall edge {w} carries events")
            for ev in evs:
                if self.events[ev].wedge != w:
                    rep.add(f"event {ev} listed on wrong wall edge")
        anchored = [ev for rec in self.edges.values() for ev in rec.anch]
        anchored += [ev for evs in self.rings.values() for ev in evs]
        if sorted(anchored) != sorted(self.events):
            rep.add("event ownership does not cover event set")
        if rep.ok:
            try:
                self.arrangement()
            except Exception as exc:  # noqa: BLE001 - report, don't crash
                rep.add(f"arrangement build failed: {exc}")
        return rep

    # -- arrangement -----------------------------------------------------------

    def arrangement(self) -> "Arrangement":
        if self._arr is None or self._arr.version != self.version:
            self._arr = Arrangement(self)
        return self._arr

    # -- canonical forms ---------------------------------------------------------

    def state_lines(self) -> list[str]:
        """Deterministic serialization of the full state (wall + curve)."""
        out = [f"surface {self.schema.genus} {self.schema.punctures}"]
        for v in sorted(self.schema.vrot):
            out.append("wvertex %d: %s" % (v, " ".join(map(str, self.schema.vrot[v]))))
        for e in sorted(self.schema.wedges):
            w = self.schema.wedges[e]
            out.append(f"wedge {e} {w.v1} {w.v2} {int(w.crossable)} {w.kind} {w.label}")
        for p in sorted(self.schema.puncture_loops):
            out.append(f"puncture {p} {self.schema.puncture_loops[p]}")
        for v in sorted(self.rot):
            out.append("vertex %d: %s" % (v, " ".join(map(str, self.rot[v]))))
        for key in sorted(self.edges):
            rec = self.edges[key]
            evs = ",".join(f"{'+' if self.events[e].sign > 0 else '-'}{self.events[e].wedge}@{e}" for e in rec.anch)
            out.append(f"anchor {rec.da} {rec.db}: {evs}")
        for rid in sorted(self.rings):
            evs = ",".join(f"{'+' if self.events[e].sign > 0 else '-'}{self.events[e].wedge}@{e}" for e in self.rings[rid])
            out.append(f"ring {rid}: {evs}")
        for w in sorted(self.worder):
            if self.worder[w]:
                out.append("worder %d: %s" % (w, " ".join(map(str, self.worder[w]))))
        out.append(f"loops {self.free_loops}")
        out.append(
            "counters %d %d %d %d %d"
            % (self._next_dart, self._next_vertex, self._next_event, self._next_ring, self._next_sat)
        )
        for sid in sorted(self.satellites):
            for ln in self.satellites[sid].state_lines():
                out.append(f"sat {sid} | {ln}")
        return out

    def state_hash(self) -> str:
        return hashlib.sha1("\n".join(self.state_lines()).encode()).hexdigest()[:12]

    def diagram_code(self) -> str:
        """Code of the curve-only map with dart labels kept literal.

        Stable under wall-bookkeeping isotopies (which never relabel darts),
        so it serves as the diagram-invariance check for ISO records.
        """
        rot: dict[int, list[int]] = {}
        twin: dict[int, int] = {}
        circles = 0
        stack: list[Curve] = [self]
        while stack:
            c = stack.pop()
            rot.update(c.rot)
            twin.update(c.twin)
            circles += len(c.rings) + c.free_loops
            stack.extend(c.satellites.values())
        rots = tuple((v, tuple(rot[v])) for v in sorted(rot))
        twins = tuple(sorted((d, t) for d, t in twin.items() if d < t))
        return repr((rots, twins, circles))

    # -- copying -----------------------------------------------------------------

    def copy(self) -> "Curve":
        c = Curve(self.schema.copy())
        c.rot = {v: list(r) for v, r in self.rot.items()}
        c.twin = dict(self.twin)
        c.dart_vertex = dict(self.dart_vertex)
        c.edges = {k: EdgeRec(r.da, r.db, list(r.anch)) for k, r in self.edges.items()}
        c.edge_of = dict(self.edge_of)
        c.events = {e: Event(ev.id, ev.wedge, ev.sign, ev.owner) for e, ev in self.events.items()}
        c.worder = {w: list(evs) for w, evs in self.worder.items()}
        c.rings = {r: list(evs) for r, evs in self.rings.items()}
        c.free_loops = self.free_loops
        c.satellites = {s: sat.copy() for s, sat in self.satellites.items()}
        c._next_dart = self._next_dart
        c._next_vertex = self._next_vertex
        c._next_event = self._next_event
        c._next_ring = self._next_ring
        c._next_sat = self._next_sat
        return c


# ---------------------------------------------------------------------------
# The full arrangement of curve plus walls
# ---------------------------------------------------------------------------


@dataclass
class Region:
    """Curve-level face: union of arrangement faces glued across walls."""

    idx: int
    faces: list[int]
    euler: int
    punctures: list[int]
    walks: list[list[int]]  # cyclic lists of curve arrangement darts
    segments: list[list[tuple]]  # per walk: list of (crossing visits) segments

    @property
    def is_disk(self) -> bool:
        return self.euler == 1 and len(self.walks) == 1

    def crossing_visits(self) -> list[int]:
        return [v for walk_segs in self.segments for (v, _, _) in walk_segs]


class Arrangement:
    """Subdivided map of the curve together with the wall complex."""

    def __init__(self, curve: Curve):
        self.curve = curve
        self.version = curve.version
        self.twin: dict[int, int] = {}
        self.nxt: dict[int, int] = {}
        self.node_of: dict[int, tuple] = {}
        self.kind: dict[int, str] = {}
        self.ref: dict[int, tuple] = {}  # dart -> (owner kind, owner, seg index, forward?)
        self._build()

    # construction

    def _build(self) -> None:
        c = self.curve
        s = c.schema
        nd = 0
        rot_at: dict[tuple, dict] = {}

        def attach(node: tuple, slot, dart: int) -> None:
            rot_at.setdefault(node, {})[slot] = dart

        def mk_dart(node: tuple, kind: str, ref: tuple) -> int:
            nonlocal nd
            d = nd
            nd += 1
            self.node_of[d] = node
            self.kind[d] = kind
            self.ref[d] = ref
            return d

        # wall edge chains
        self.wall_chain_darts: dict[int, list[tuple[int, int]]] = {}
        for we in sorted(s.wedges):
            w = s.wedges[we]
            evs = c.worder.get(we, [])
            nodes = [("w", w.v1)] + [("e", ev) for ev in evs] + [("w", w.v2)]
            segs = []
            for k in range(len(nodes) - 1):
                f = mk_dart(nodes[k], WALL_KIND, ("w", we, k, True))
                b = mk_dart(nodes[k + 1], WALL_KIND, ("w", we, k, False))
                self.twin[f] = b
                self.twin[b] = f
                segs.append((f, b))
            self.wall_chain_darts[we] = segs
            # endpoint attachment into the schema rotations
            attach(("w", w.v1), ("wd", wdart(we, 0)), segs[0][0])
            attach(("w", w.v2), ("wd", wdart(we, 1)), segs[-1][1])
            for k, ev in enumerate(evs):
                attach(("e", ev), "w_prev", segs[k][1])
                attach(("e", ev), "w_next", segs[k + 1][0])

        # curve edge chains
        self.curve_chain_darts: dict[tuple, list[tuple[int, int]]] = {}
        for key in sorted(c.edges):
            rec = c.edges[key]
            evs = rec.anch
            va, vb = c.dart_vertex[rec.da], c.dart_vertex[rec.db]
            nodes = [("x", va)] + [("e", ev) for ev in evs] + [("x", vb)]
            segs = []
            for k in range(len(nodes) - 1):
                f = mk_dart(nodes[k], CURVE_KIND, ("e", key, k, True))
                b = mk_dart(nodes[k + 1], CURVE_KIND, ("e", key, k, False))
                self.twin[f] = b
                self.twin[b] = f
                segs.append((f, b))
            self.curve_chain_darts[("e", key)] = segs
            attach(("x", va), ("cd", rec.da), segs[0][0])
            attach(("x", vb), ("cd", rec.db), segs[-1][1])
            for k, ev in enumerate(evs):
                attach(("e", ev), "c_in", segs[k][1])
                attach(("e", ev), "c_out", segs[k + 1][0])

        # rings: cyclic chains through their events
        for rid in sorted(c.rings):
            evs = c.rings[rid]
            segs = []
            m = len(evs)
            for k in range(m):
                f = mk_dart(("e", evs[k]), CURVE_KIND, ("r", rid, k, True))
                b = mk_dart(("e", evs[(k + 1) % m]), CURVE_KIND, ("r", rid, k, False))
                self.twin[f] = b
                self.twin[b] = f
                segs.append((f, b))
            self.curve_chain_darts[("r", rid)] = segs
            for k in range(m):
                attach(("e", evs[k]), "c_out", segs[k][0])
                attach(("e", evs[k]), "c_in", segs[(k - 1) % m][1])

        # rotations (ccw); faces are traced with the face on the left, which
        # for darts pointing out of their node means stepping to the previous
        # dart in ccw order after crossing to the twin
        self.prv: dict[int, int] = {}
        for node, slots in rot_at.items():
            knd, ident = node
            if knd == "w":
                order = [slots[("wd", d)] for d in s.vrot[ident]]
            elif knd == "x":
                order = [slots[("cd", d)] for d in c.rot[ident]]
            else:
                ev = c.events[ident]
                # orient the crossing relative to the owner traversal direction
                if ev.sign > 0:
                    order = [slots["c_out"], slots["w_next"], slots["c_in"], slots["w_prev"]]
                else:
                    order = [slots["c_in"], slots["w_next"], slots["c_out"], slots["w_prev"]]
            for i, d in enumerate(order):
                self.nxt[d] = order[(i + 1) % len(order)]
                self.prv[order[(i + 1) % len(order)]] = d

        # connectivity check (satellites live outside the arrangement)
        if self.twin:
            seen = {min(self.twin)}
            stack = [min(self.twin)]
            while stack:
                d = stack.pop()
                for x in (self.twin[d], self.nxt[d]):
                    if x not in seen:
                        seen.add(x)
                        stack.append(x)
            if len(seen) != len(self.twin):
                raise InvalidCurve("arrangement is disconnected")

        self._faces()
        self._regions()

    def phi(self, d: int) -> int:
        return self.prv[self.twin[d]]

    def _faces(self) -> None:
        self.faces: list[list[int]] = []
        self.face_of: dict[int, int] = {}
        for d0 in sorted(self.twin):
            if d0 in self.face_of:
                continue
            walk = []
            d = d0
            while d not in self.face_of:
                self.face_of[d] = len(self.faces)
                walk.append(d)
                d = self.phi(d)
            self.faces.append(walk)
        # puncture faces: the side of each balloon loop bounded by loop darts
        # only (loops may be subdivided into several pieces by arc endpoints)
        self.puncture_face: dict[int, int] = {}
        s = self.curve.schema
        for p, loop in s.puncture_loops.items():
            label = s.wedges[loop].label
            loop_edges = {e for e, w in s.wedges.items() if w.kind == "loop" and w.label == label}
            cands = set()
            for e in loop_edges:
                for f, b in self.wall_chain_darts[e]:
                    cands.add(self.face_of[f])
                    cands.add(self.face_of[b])
            for fidx in sorted(cands):
                if all(self.ref[d][1] in loop_edges for d in self.faces[fidx]):
                    self.puncture_face[p] = fidx
                    break
            else:
                raise InvalidCurve(f"puncture {p} has no inner face")

    def _regions(self) -> None:
        parent = list(range(len(self.faces)))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a: int, b: int) -> None:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

        for d in self.twin:
            if self.kind[d] == WALL_KIND:
                union(self.face_of[d], self.face_of[self.twin[d]])
        groups: dict[int, list[int]] = {}
        for f in range(len(self.faces)):
            groups.setdefault(find(f), []).append(f)

        self.regions: list[Region] = []
        self.region_of_face: dict[int, int] = {}
        for root in sorted(groups):
            faces = groups[root]
            fset = set(faces)
            idx = len(self.regions)
            for f in faces:
                self.region_of_face[f] = idx
            # interior wall segments and wall vertices
            wseg = 0
            for d in self.twin:
                if self.kind[d] == WALL_KIND and d < self.twin[d] and self.face_of[d] in fset:
                    wseg += 1
            wvert = 0
            for node in {self.node_of[d] for d in self.twin}:
                if node[0] == "w":
                    any_dart = next(d for d in self.twin if self.node_of[d] == node)
                    if self.face_of[any_dart] in fset:
                        wvert += 1
            punct = [p for p, f in self.puncture_face.items() if f in fset]
            walks = self._region_walks(fset)
            segments = [self._walk_segments(w) for w in walks]
            self.regions.append(Region(idx, faces, len(faces) - wseg + wvert, sorted(punct), walks, segments))

    def _region_walks(self, fset: set[int]) -> list[list[int]]:
        walks = []
        seen: set[int] = set()
        for d0 in sorted(self.twin):
            if d0 in seen or self.kind[d0] != CURVE_KIND or self.face_of[d0] not in fset:
                continue
            walk = []
            d = d0
            while d not in seen:
                seen.add(d)
                walk.append(d)
                d = self.phi(d)
                while self.kind[d] == WALL_KIND:
                    d = self.phi(self.twin[d])
            walks.append(walk)
        return walks

    def _walk_segments(self, walk: list[int]) -> list[tuple]:
        """Split a region boundary walk at crossing visits.

        Returns a list of (crossing, dart index in walk where the visit
        happens, dart leaving the crossing along the walk).
        """
        visits = []
        for i, d in enumerate(walk):
            node = self.node_of[d]
            if node[0] == "x":
                visits.append((node[1], i, d))
        return visits

    # queries used by the move engine and finders

    def region_of_curve_dart(self, d: int) -> Region:
        return self.regions[self.region_of_face[self.face_of[d]]]

    def arr_dart_for_curve_dart(self, cd: int) -> int:
        """First arrangement dart of the curve edge leaving crossing dart cd."""
        key = self.curve.edge_of[cd]
        rec = self.curve.edges[key]
        segs = self.curve_chain_darts[("e", key)]
        return segs[0][0] if cd == rec.da else segs[-1][1]

    def walk_edge_path(self, region: Region, walk_idx: int, start_visit: int) -> list[tuple]:
        """Curve darts of one segment of the region boundary, crossing to crossing."""
        walk = region.walks[walk_idx]
        visits = region.segments[walk_idx]
        i0 = visits[start_visit][1]
        i1 = visits[(start_visit + 1) % len(visits)][1]
        n = len(walk)
        idxs = []
        i = i0
        while True:
            idxs.append(walk[i])
            i = (i + 1) % n
            if i == i1:
                break
        return idxs


# ---------------------------------------------------------------------------
# faces() / public reporting per the library interface
# ---------------------------------------------------------------------------


@dataclass
class FaceInfo:
    key: str
    is_disk: bool
    punctures: int
    n_sides: int
    crossings: list[int]


def faces(curve: Curve) -> list[FaceInfo]:
    """All curve-level faces of the arrangement with disk flags and content."""
    rep = curve.validate()
    if not rep.ok:
        raise InvalidCurve(str(rep))
    arr = curve.arrangement()
    out = []
    for reg in arr.regions:
        visits = reg.crossing_visits()
        out.append(
            FaceInfo(
                key=region_key(arr, reg),
                is_disk=reg.is_disk,
                punctures=len(reg.punctures),
                n_sides=len(visits),
                crossings=sorted({v for v in visits}),
            )
        )
    for sid, sat in sorted(curve.satellites.items()):
        for fi in faces(sat):
            out.append(FaceInfo(key=f"s{sid}:{fi.key}", is_disk=fi.is_disk, punctures=0, n_sides=fi.n_sides, crossings=fi.crossings))
    return out


def region_key(arr: Arrangement, reg: Region) -> str:
    """Stable face name: the minimal curve dart id on the region boundary."""
    m = min(min(w) for w in reg.walks) if reg.walks else -1
    return f"d{m}"


def region_by_key(arr: Arrangement, key: str) -> Region | None:
    if not key.startswith("d"):
        return None
    want = int(key[1:])
    for reg in arr.regions:
        if reg.walks and min(min(w) for w in reg.walks) == want:
            return reg
    return None


def euler_check(curve: Curve) -> bool:
    """V - E + F over the full arrangement equals 2 - 2g."""
    arr = curve.arrangement()
    nodes = {arr.node_of[d] for d in arr.twin}
    E = len(arr.twin) // 2
    F = len(arr.faces)
    return len(nodes) - E + F == curve.schema.euler()


def make_curve(genus: int, punctures: int) -> Curve:
    return Curve(base_schema(genus, punctures))
