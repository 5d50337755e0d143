"""
Text serialization of curves and move logs.

The `.curve` format is line-based and bit-exact: wall complex (wvertex /
wedge / puncture lines), curve map (vertex / anchor / ring / worder lines),
free loop count, id counters, and satellites as prefixed nested blocks.
Anchor descriptors read ``<sign><wall edge>@<event id>``.
"""

from __future__ import annotations

from .mapcore import Curve, EdgeRec, Event
from .schema import Schema, WallEdge


class ParseError(Exception):
    pass


def curve_to_text(cur: Curve) -> str:
    return "\n".join(["curve v1"] + cur.state_lines()) + "\n"


def curve_from_text(text: str) -> Curve:
    lines = [ln.rstrip("\n") for ln in text.splitlines()]
    lines = [ln for ln in lines if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or not lines[0].startswith("curve"):
        raise ParseError("not a curve file")
    return parse_state_lines(lines[1:])


def parse_state_lines(lines: list[str]) -> Curve:
    own: list[str] = []
    sat_lines: dict[int, list[str]] = {}
    for ln in lines:
        if ln.startswith("sat "):
            rest = ln[4:]
            sid_s, _, inner = rest.partition(" | ")
            sat_lines.setdefault(int(sid_s), []).append(inner)
        else:
            own.append(ln)

    head = own[0].split()
    if head[0] != "surface":
        raise ParseError("missing surface header")
    g, b = int(head[1]), int(head[2])
    schema = Schema(g, b)
    cur = Curve(schema)
    cur.worder = {}

    for ln in own[1:]:
        parts = ln.split()
        kind = parts[0]
        if kind == "wvertex":
            v = int(parts[1].rstrip(":"))
            schema.vrot[v] = [int(x) for x in parts[2:]]
            schema._next_v = max(schema._next_v, v + 1)
        elif kind == "wedge":
            e = int(parts[1])
            schema.wedges[e] = WallEdge(e, int(parts[2]), int(parts[3]), bool(int(parts[4])), parts[5], parts[6])
            schema._next_e = max(schema._next_e, e + 1)
            cur.worder.setdefault(e, [])
        elif kind == "puncture":
            schema.puncture_loops[int(parts[1])] = int(parts[2])
        elif kind == "vertex":
            v = int(parts[1].rstrip(":"))
            darts = [int(x) for x in parts[2:]]
            cur.rot[v] = darts
            for d in darts:
                cur.dart_vertex[d] = v
        elif kind == "anchor":
            da, db = int(parts[1]), int(parts[2].rstrip(":"))
            evs = _parse_events(cur, ln.split(":", 1)[1], ("e", da))
            cur.edges[da] = EdgeRec(da, db, [e for e, _ in evs])
            cur.edge_of[da] = da
            cur.edge_of[db] = da
            cur.twin[da] = db
            cur.twin[db] = da
        elif kind == "ring":
            rid = int(parts[1].rstrip(":"))
            evs = _parse_events(cur, ln.split(":", 1)[1], ("r", rid))
            cur.rings[rid] = [e for e, _ in evs]
        elif kind == "worder":
            w = int(parts[1].rstrip(":"))
            cur.worder[w] = [int(x) for x in parts[2:]]
        elif kind == "loops":
            cur.free_loops = int(parts[1])
        elif kind == "counters":
            cur._next_dart, cur._next_vertex, cur._next_event, cur._next_ring, cur._next_sat = (
                int(x) for x in parts[1:6]
            )
        else:
            raise ParseError(f"unknown line kind {kind!r}")

    for sid, sl in sorted(sat_lines.items()):
        cur.satellites[sid] = parse_state_lines(sl)
    cur.touch()
    return cur


def _parse_events(cur: Curve, blob: str, owner: tuple) -> list[tuple[int, int]]:
    out = []
    blob = blob.strip()
    if not blob:
        return out
    for tok in blob.split(","):
        tok = tok.strip()
        sign = 1 if tok[0] == "+" else -1
        w_s, _, e_s = tok[1:].partition("@")
        ev = int(e_s)
        cur.events[ev] = Event(ev, int(w_s), sign, owner)
        out.append((ev, sign))
    return out


def log_to_text(log) -> str:
    return "\n".join(log.dump_lines()) + "\n"
