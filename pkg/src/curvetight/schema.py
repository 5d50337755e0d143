"""
Surface schemas as embedded wall complexes.

A surface is represented internally as a closed orientable surface of genus
``g`` carrying ``b`` marked puncture faces (boundary components and punctures
are interchangeable for free homotopy of closed curves, which is all we care
about).  The *wall complex* is a small embedded graph that cuts the surface
into simply connected regions; curves are recorded by their crossing events
against crossable wall edges.

The standard base schema for genus g with b punctures consists of a single
corner vertex with the usual a1 b1 a1' b1' ... rotation (one polygon face),
plus one "balloon" per puncture: a stem edge from the corner to a balloon
vertex carrying an uncrossable loop that bounds the puncture face.

Wall darts are encoded as ``2*edge_id + end`` where end 0 sits at ``v1`` and
end 1 at ``v2`` of the edge.
"""

from __future__ import annotations

from dataclasses import dataclass, field


def wdart(edge: int, end: int) -> int:
    return 2 * edge + end


def wdart_edge(d: int) -> int:
    return d // 2


def wdart_end(d: int) -> int:
    return d % 2


@dataclass
class WallEdge:
    id: int
    v1: int
    v2: int
    crossable: bool
    kind: str  # "side" | "stem" | "loop" | "arc"
    label: str


@dataclass
class Schema:
    """Embedded wall complex with marked puncture loops."""

    genus: int
    punctures: int
    vrot: dict[int, list[int]] = field(default_factory=dict)  # vertex -> ccw wall darts
    wedges: dict[int, WallEdge] = field(default_factory=dict)
    puncture_loops: dict[int, int] = field(default_factory=dict)  # puncture id -> loop edge id
    _next_v: int = 0
    _next_e: int = 0

    # -- construction helpers ------------------------------------------------

    def new_vertex(self) -> int:
        v = self._next_v
        self._next_v += 1
        self.vrot[v] = []
        return v

    def new_edge(self, v1: int, v2: int, crossable: bool, kind: str, label: str) -> int:
        e = self._next_e
        self._next_e += 1
        self.wedges[e] = WallEdge(e, v1, v2, crossable, kind, label)
        return e

    def vertex_of_wdart(self, d: int) -> int:
        we = self.wedges[wdart_edge(d)]
        return we.v1 if wdart_end(d) == 0 else we.v2

    def crossable_edges(self) -> list[int]:
        return sorted(e for e, we in self.wedges.items() if we.crossable)

    def copy(self) -> "Schema":
        s = Schema(self.genus, self.punctures)
        s.vrot = {v: list(r) for v, r in self.vrot.items()}
        s.wedges = {e: WallEdge(w.id, w.v1, w.v2, w.crossable, w.kind, w.label) for e, w in self.wedges.items()}
        s.puncture_loops = dict(self.puncture_loops)
        s._next_v = self._next_v
        s._next_e = self._next_e
        return s

    def euler(self) -> int:
        return 2 - 2 * self.genus

    def signature(self) -> str:
        parts = []
        for e in sorted(self.wedges):
            w = self.wedges[e]
            flag = "x" if w.crossable else "o"
            parts.append(f"{w.label}:{w.kind}:{w.v1}-{w.v2}:{flag}")
        return ",".join(parts)

    # -- validation ----------------------------------------------------------

    def check(self) -> None:
        darts = [d for r in self.vrot.values() for d in r]
        assert len(darts) == len(set(darts)), "duplicate wall dart in rotations"
        for e, w in self.wedges.items():
            for end, v in ((0, w.v1), (1, w.v2)):
                d = wdart(e, end)
                assert d in self.vrot[v], f"wall dart {d} missing at vertex {v}"
        assert len(darts) == 2 * len(self.wedges)
        for p, le in self.puncture_loops.items():
            assert not self.wedges[le].crossable


def add_balloon(schema: Schema, attach_vertex: int, puncture_id: int, rot_index: int | None = None) -> int:
    """Attach a stem+loop balloon for one puncture at ``attach_vertex``.

    Returns the balloon vertex.  The puncture face is the loop's inner side.
    """
    p = schema.new_vertex()
    stem = schema.new_edge(attach_vertex, p, True, "stem", f"s{puncture_id}")
    loop = schema.new_edge(p, p, False, "loop", f"l{puncture_id}")
    # ccw at the balloon vertex: stem end, loop end0, loop end1.  With this
    # order the face traced inside [loop.d1] alone is the puncture face.
    schema.vrot[p] = [wdart(stem, 1), wdart(loop, 0), wdart(loop, 1)]
    if rot_index is None:
        schema.vrot[attach_vertex].append(wdart(stem, 0))
    else:
        schema.vrot[attach_vertex].insert(rot_index, wdart(stem, 0))
    schema.puncture_loops[puncture_id] = loop
    return p


def base_schema(genus: int, punctures: int) -> Schema:
    """Standard one-vertex schema: a1 b1 a1' b1' ... plus puncture balloons.

    For genus 0 the handle sides degenerate to a single crossable loop so the
    wall complex stays connected and cellular.
    """
    s = Schema(genus, punctures)
    v0 = s.new_vertex()
    rot: list[int] = []
    if genus == 0:
        e0 = s.new_edge(v0, v0, True, "side", "e0")
        rot = [wdart(e0, 0), wdart(e0, 1)]
    else:
        for i in range(1, genus + 1):
            a = s.new_edge(v0, v0, True, "side", f"a{i}")
            b = s.new_edge(v0, v0, True, "side", f"b{i}")
            # one-vertex polygon a b a^-1 b^-1 per handle, ccw around v0
            rot.extend([wdart(a, 0), wdart(b, 0), wdart(a, 1), wdart(b, 1)])
    s.vrot[v0] = rot
    for k in range(punctures):
        add_balloon(s, v0, k)
    s.check()
    return s
