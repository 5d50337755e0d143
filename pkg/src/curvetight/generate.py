"""
Constructing multicurves from wall-crossing words.

A component is described by a cyclic word of signed wall-edge crossings, each
with a rational parameter giving its position along the wall edge.  The curve
is drawn face by face as straight chords between boundary points of a convex
rational polygon, so all intersections are computed exactly and the resulting
combinatorial map is valid by construction.

Also hosts the seeded random multicurve generator used by the fuzz suites.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .mapcore import Curve
from .schema import Schema, base_schema

Letter = tuple[int, int, Fraction]  # (wall edge, sign, position on the wall edge)


class DrawError(Exception):
    pass


def _circle_point(t: Fraction) -> tuple[Fraction, Fraction]:
    """Rational point on the unit circle via the tangent half-angle map."""
    d = 1 + t * t
    return ((1 - t * t) / d, 2 * t / d)


def _cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _seg_intersection(p1, p2, q1, q2):
    """Exact proper intersection of open segments, or None."""
    d1 = _cross(q1, q2, p1)
    d2 = _cross(q1, q2, p2)
    d3 = _cross(p1, p2, q1)
    d4 = _cross(p1, p2, q2)
    if (d1 > 0) == (d2 > 0) or (d3 > 0) == (d4 > 0):
        return None
    if 0 in (d1, d2, d3, d4):
        raise DrawError("degenerate chord contact; perturb parameters")
    t = d1 / (d1 - d2)
    x = p1[0] + t * (p2[0] - p1[0])
    y = p1[1] + t * (p2[1] - p1[1])
    return (x, y)


def draw_multicurve(schema: Schema, components: list[list[Letter]], free_loops: int = 0) -> Curve:
    """Draw a multicurve on ``schema`` from per-component crossing words.

    Raises DrawError on inconsistent words (face mismatch) or degenerate
    parameter choices (equal positions, concurrent chords).
    """
    bare = Curve(schema)
    arr = bare.arrangement()

    # every boundary point sits on the unit circle: walk position i plus the
    # in-occurrence parameter u give a global cyclic coordinate that the
    # rational half-angle map sends to a rational circle point (no three of
    # which are ever collinear)
    walk_pos: dict[int, tuple[int, int, int]] = {}
    for fi, walk in enumerate(arr.faces):
        for i, d in enumerate(walk):
            walk_pos[d] = (fi, i, len(walk))

    def occ_point(arr_dart: int, t: Fraction):
        fi, i, k = walk_pos[arr_dart]
        # parameter t runs along the wall edge v1->v2; the backward dart sees it reversed
        fwd = arr.ref[arr_dart][3]
        u = t if fwd else 1 - t
        s = Fraction(i + u, k)
        half = (2 * s - 1) / (2 * s * (1 - s))
        return fi, _circle_point(half)

    curve = Curve(schema)

    # events, one per letter, with endpoints of each chord
    all_events: list[tuple[int, Letter]] = []
    chords = []  # (face, p_start, p_end, comp idx, chord idx)
    comp_events: list[list[int]] = []
    used_params: dict[int, set[Fraction]] = {}
    for ci, word in enumerate(components):
        evs = []
        for w, sign, t in word:
            if not schema.wedges[w].crossable:
                raise DrawError(f"wall edge {w} is not crossable")
            if t in used_params.setdefault(w, set()):
                raise DrawError("duplicate wall position")
            used_params[w].add(t)
            evs.append(curve.new_event(w, sign, ("r", -1)))
        comp_events.append(evs)
        m = len(word)
        for j in range(m):
            w, sign, t = word[j]
            fseg = arr.wall_chain_darts[w][0]
            fwd_dart, bwd_dart = fseg
            # after crossing: the curve stands on the right side for sign +1
            start_occ = bwd_dart if sign > 0 else fwd_dart
            f_start, p_start = occ_point(start_occ, t)
            w2, sign2, t2 = word[(j + 1) % m]
            fseg2 = arr.wall_chain_darts[w2][0]
            end_occ = fseg2[0] if sign2 > 0 else fseg2[1]
            f_end, p_end = occ_point(end_occ, t2)
            if f_start != f_end:
                raise DrawError(f"component {ci}: chord {j} spans two faces")
            chords.append((f_start, p_start, p_end, ci, j))

    # exact pairwise intersections within each face
    points: dict[tuple[int, int], list] = {}  # (ci, j) -> [(t along chord, xing id)]
    xing_info: dict[int, tuple] = {}
    nx = 0
    for i in range(len(chords)):
        fi, p1, p2, ci, ji = chords[i]
        points.setdefault((ci, ji), [])
        for k in range(i + 1, len(chords)):
            fk, q1, q2, ck, jk = chords[k]
            if fi != fk:
                continue
            pt = _seg_intersection(p1, p2, q1, q2)
            if pt is None:
                continue
            xid = nx
            nx += 1
            du = (p2[0] - p1[0], p2[1] - p1[1])
            dv = (q2[0] - q1[0], q2[1] - q1[1])
            ccw = du[0] * dv[1] - du[1] * dv[0] > 0
            xing_info[xid] = ((ci, ji), (ck, jk), ccw)
            ta = _param_along(p1, p2, pt)
            tb = _param_along(q1, q2, pt)
            points[(ci, ji)].append((ta, xid))
            points.setdefault((ck, jk), []).append((tb, xid))

    for key in points:
        ts = [t for t, _ in points[key]]
        if len(ts) != len(set(ts)):
            raise DrawError("concurrent chords; perturb parameters")
        points[key].sort()

    # instantiate crossings with rotation [A_out, B_out, A_in, B_in] (ccw case)
    xdarts: dict[int, dict[str, int]] = {}
    for xid in range(nx):
        (ca, ja), (cb, jb), ccw = xing_info[xid]
        ds = {r: curve.new_dart() for r in ("a_out", "b_out", "a_in", "b_in")}
        xdarts[xid] = ds
        if ccw:
            rotl = [ds["a_out"], ds["b_out"], ds["a_in"], ds["b_in"]]
        else:
            rotl = [ds["a_out"], ds["b_in"], ds["a_in"], ds["b_out"]]
        curve.new_vertex(rotl)

    # walk each component, cutting edges at crossings
    for ci, word in enumerate(components):
        evs = comp_events[ci]
        m = len(word)
        stops: list[tuple] = []  # ("ev", event id) / ("x", xid, in dart, out dart)
        for j in range(m):
            stops.append(("ev", evs[j]))
            for _, xid in points.get((ci, j), []):
                a, b, _ = xing_info[xid]
                role = "a" if (ci, j) == a else "b"
                ds = xdarts[xid]
                stops.append(("x", xid, ds[role + "_in"], ds[role + "_out"]))
        xs = [i for i, s in enumerate(stops) if s[0] == "x"]
        if not xs:
            rid = curve.new_ring_id()
            curve.rings[rid] = evs
            for e in evs:
                curve.events[e].owner = ("r", rid)
            continue
        n_stops = len(stops)
        for idx_pos, i0 in enumerate(xs):
            i1 = xs[(idx_pos + 1) % len(xs)]
            da = stops[i0][3]
            db = stops[i1][2]
            anch = []
            i = (i0 + 1) % n_stops
            while i != i1:
                if stops[i][0] == "ev":
                    anch.append(stops[i][1])
                i = (i + 1) % n_stops
            curve.add_edge(da, db, anch)
            for e in anch:
                curve.events[e].owner = ("e", da)

    # wall event orders by parameter
    ev_param: dict[int, Fraction] = {}
    for ci, word in enumerate(components):
        for j, (w, sign, t) in enumerate(word):
            ev_param[comp_events[ci][j]] = t
    for w in curve.worder:
        evs = [e for e in curve.events if curve.events[e].wedge == w]
        curve.worder[w] = sorted(evs, key=lambda e: ev_param[e])

    curve.free_loops = free_loops
    curve.touch()
    rep = curve.validate()
    if not rep.ok:
        raise DrawError(f"drawn curve invalid: {rep}")
    return curve


def _param_along(p1, p2, pt) -> Fraction:
    if p2[0] != p1[0]:
        return (pt[0] - p1[0]) / (p2[0] - p1[0])
    return (pt[1] - p1[1]) / (p2[1] - p1[1])


# ---------------------------------------------------------------------------
# random generation
# ---------------------------------------------------------------------------


def random_multicurve(
    genus: int,
    punctures: int,
    rng: random.Random,
    n_components: int | None = None,
    word_length: int = 6,
    max_crossings: int | None = None,
) -> Curve:
    """Seeded random multicurve on the standard base schema."""
    schema = base_schema(genus, punctures)
    bare = Curve(schema)
    arr = bare.arrangement()
    # crossable occurrences per face
    occ: dict[int, list[tuple[int, int]]] = {}
    for w in schema.crossable_edges():
        f, b = arr.wall_chain_darts[w][0]
        occ.setdefault(arr.face_of[f], []).append((w, +1))
        occ.setdefault(arr.face_of[b], []).append((w, -1))

    for attempt in range(200):
        k = n_components if n_components is not None else rng.randint(1, 3)
        comps = []
        ok = True
        for _ in range(k):
            word: list[Letter] = []
            faces_ok = [f for f in occ if occ[f]]
            if not faces_ok:
                ok = False
                break
            f = rng.choice(sorted(faces_ok))
            f0 = f
            steps = rng.randint(2, max(2, word_length))
            while True:
                w, sign = rng.choice(sorted(occ[f]))
                t = Fraction(rng.randint(1, 10**6), 10**6 + 1)
                word.append((w, sign, t))
                fwd, bwd = arr.wall_chain_darts[w][0]
                f = arr.face_of[bwd if sign > 0 else fwd]
                if len(word) >= steps and f == f0:
                    break
                if len(word) > 4 * word_length + 8:
                    ok = False
                    break
            if not ok:
                break
            comps.append(word)
        if not ok:
            continue
        try:
            cur = draw_multicurve(schema, comps)
        except DrawError:
            continue
        if max_crossings is not None and cur.n_crossings() > max_crossings:
            continue
        return cur
    raise DrawError("could not generate a random multicurve")


# fixed small instances used across the test-suite


def _search_words(schema: Schema, candidates, accept) -> Curve:
    for comps in candidates:
        try:
            cur = draw_multicurve(schema, comps)
        except DrawError:
            continue
        if accept(cur):
            return cur
    raise DrawError("no candidate word realizes the requested curve")


def _frac(a: int, b: int) -> Fraction:
    return Fraction(a, b)


def figure_eight(genus: int = 0, punctures: int = 1) -> Curve:
    """One component, one crossing, both loops bounding empty monogons."""
    from itertools import permutations

    schema = base_schema(genus, punctures)
    cands = []
    for w in schema.crossable_edges():
        # both loops dip across w; works when both sides of w meet one face
        cands.append([[(w, 1, _frac(1, 3)), (w, 1, _frac(2, 3))]])
        cands.append([[(w, 1, _frac(1, 3)), (w, -1, _frac(2, 3))]])
        # loops dipping across w from the far side (needed on the sphere)
        for perm in permutations([_frac(1, 5), _frac(2, 5), _frac(3, 5), _frac(4, 5)]):
            cands.append([[(w, 1, perm[0]), (w, -1, perm[1]), (w, 1, perm[2]), (w, -1, perm[3])]])

    def ok(cur: Curve) -> bool:
        if cur.n_crossings() != 1 or len(cur.trace_components()) != 1:
            return False
        from .mapcore import faces as _faces

        mono = [f for f in _faces(cur) if f.n_sides == 1 and f.is_disk and f.punctures == 0]
        return len(mono) == 2

    return _search_words(schema, cands, ok)


def two_circle_bigon(genus: int = 0, punctures: int = 1) -> Curve:
    """Two components crossing exactly twice with an empty bigon between them."""
    schema = base_schema(genus, punctures)
    cands = []
    for w in schema.crossable_edges():
        for s1, s2 in ((1, 1), (1, -1), (-1, -1), (-1, 1)):
            cands.append(
                [
                    [(w, s1, _frac(1, 5)), (w, s2, _frac(3, 5))],
                    [(w, s1, _frac(14, 55)), (w, s2, _frac(36, 55))],
                ]
            )
            cands.append(
                [
                    [(w, s1, _frac(1, 5)), (w, s2, _frac(3, 5))],
                    [(w, s1, _frac(14, 55)), (w, s2, _frac(31, 55))],
                ]
            )

    def ok(cur: Curve) -> bool:
        if cur.n_crossings() != 2 or len(cur.trace_components()) != 2:
            return False
        from .mapcore import faces as _faces

        bigs = [
            f
            for f in _faces(cur)
            if f.n_sides == 2 and f.is_disk and f.punctures == 0 and len(f.crossings) == 2
        ]
        return len(bigs) >= 1

    return _search_words(schema, cands, ok)
