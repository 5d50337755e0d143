"""
Tightening on surfaces with boundary: pipe systems and the braid phase.

After rebasing onto a system of arcs, the arcs are the pipes of the initial
pipe system (taken at zero width) and the cut-open polygon is its single
cluster.  Closed walks on the skeleton graph are read off the anchor words.
Cluster and pipe expansions act purely on this bookkeeping (the drawing of
the refined pipes is a choice of pseudolines, which the curve itself already
realizes); each useful-pipe expansion strictly decreases the potential
sum over pipes of (weight - 1), and when no safe useful pipe remains the
skeleton is a disjoint union of cycles.

The remaining crossings are then annular braids.  They are reduced by
interleaved Steinitz cleanup and a bounded breadth-first search over
crossing-count-preserving rewrites (trigon flips and wall-slide isotopies)
that hunts for states exposing an embedded monogon or bigon.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .mapcore import Curve, euler_check, region_key
from .moves import MoveLog, Runner, _cancel_pair_face, _corner_data, _wall_trigon_data
from .steinitz import cleanup_contractible, find_embedded, find_empty
from .words import ring_is_contractible


class PipeError(Exception):
    pass


class SkeletonNotCycles(PipeError):
    pass


class UnsafePipe(PipeError):
    pass


class UselessPipe(PipeError):
    pass


# ---------------------------------------------------------------------------
# skeleton bookkeeping
# ---------------------------------------------------------------------------


@dataclass
class Skeleton:
    """Abstract pipe-system skeleton with closed walks of the multicurve.

    Walks are cyclic lists of end ids, two per pipe traversal (entry end,
    exit end); a cluster visit is the gap between an exit end and the next
    entry end.
    """

    end_cluster: dict[int, int] = field(default_factory=dict)
    pipe_ends: dict[int, tuple[int, int]] = field(default_factory=dict)
    walks: list[list[int]] = field(default_factory=list)
    _next_end: int = 0
    _next_pipe: int = 0
    _next_cluster: int = 0
    expansions: int = 0

    # construction ---------------------------------------------------------

    @staticmethod
    def from_curve(cur: Curve) -> "Skeleton":
        sk = Skeleton()
        u0 = sk.new_cluster()
        arc_pipe: dict[int, int] = {}
        for e, w in sorted(cur.schema.wedges.items()):
            if w.kind != "arc":
                continue
            p = sk.new_pipe()
            e0, e1 = sk.new_end(u0), sk.new_end(u0)
            sk.pipe_ends[p] = (e0, e1)
            arc_pipe[e] = p
        from .words import component_letters

        for walk in cur.trace_components():
            ends = []
            for wedge, sign in component_letters(cur, walk):
                p = arc_pipe[wedge]
                e0, e1 = sk.pipe_ends[p]
                ends.extend([e0, e1] if sign > 0 else [e1, e0])
            if ends:
                sk.walks.append(ends)
        for rid in sorted(cur.rings):
            ends = []
            for ev in cur.rings[rid]:
                p = arc_pipe[cur.events[ev].wedge]
                e0, e1 = sk.pipe_ends[p]
                ends.extend([e0, e1] if cur.events[ev].sign > 0 else [e1, e0])
            sk.walks.append(ends)
        sk.prune()
        return sk

    def new_end(self, cluster: int) -> int:
        e = self._next_end
        self._next_end += 1
        self.end_cluster[e] = cluster
        return e

    def new_pipe(self) -> int:
        p = self._next_pipe
        self._next_pipe += 1
        return p

    def new_cluster(self) -> int:
        c = self._next_cluster
        self._next_cluster += 1
        return c

    # queries ----------------------------------------------------------------

    def pipe_of_end(self, e: int) -> int:
        for p, (a, b) in self.pipe_ends.items():
            if e in (a, b):
                return p
        raise PipeError(f"end {e} belongs to no pipe")

    def other_end(self, e: int) -> int:
        p = self.pipe_of_end(e)
        a, b = self.pipe_ends[p]
        return b if e == a else a

    def clusters(self) -> set[int]:
        return set(self.end_cluster.values())

    def cluster_ends(self, c: int) -> list[int]:
        return sorted(e for e, cc in self.end_cluster.items() if cc == c)

    def weight(self, p: int) -> int:
        a, b = self.pipe_ends[p]
        n = 0
        for walk in self.walks:
            for i in range(0, len(walk), 2):
                if walk[i] in (a, b):
                    n += 1
        return n

    def potential(self) -> int:
        return sum(self.weight(p) - 1 for p in self.pipe_ends)

    def visits(self, c: int):
        """(arrival end, departure end) pairs of walk visits at cluster c."""
        out = []
        for walk in self.walks:
            m = len(walk)
            for i in range(1, m + 1, 2):
                exit_end = walk[i % m]
                next_entry = walk[(i + 1) % m]
                if self.end_cluster[exit_end] == c:
                    out.append((exit_end, next_entry))
        return out

    def is_base(self, c: int, p: int) -> bool:
        a, b = self.pipe_ends[p]
        for arr, dep in self.visits(c):
            if arr not in (a, b) and dep not in (a, b):
                return False
        return True

    def degree(self, c: int) -> int:
        return len(self.cluster_ends(c))

    def is_safe(self, p: int) -> bool:
        a, b = self.pipe_ends[p]
        ca, cb = self.end_cluster[a], self.end_cluster[b]
        return ca != cb and self.is_base(ca, p) and self.is_base(cb, p)

    def is_useful(self, p: int) -> bool:
        a, b = self.pipe_ends[p]
        return not (self.degree(self.end_cluster[a]) == 2 and self.degree(self.end_cluster[b]) == 2)

    def find_safe_useful_pipe(self) -> int | None:
        cands = [p for p in self.pipe_ends if self.is_safe(p) and self.is_useful(p)]
        if cands:
            return max(cands, key=lambda p: (self.weight(p), -p))
        if not self.is_cycle_union():
            raise PipeError("no safe useful pipe but skeleton is not a cycle union")
        return None

    def is_cycle_union(self) -> bool:
        return all(self.degree(c) == 2 for c in self.clusters())

    def prune(self) -> None:
        """Drop pipes with no traffic and clusters with no ends."""
        used = {e for walk in self.walks for e in walk}
        for p in sorted(self.pipe_ends):
            a, b = self.pipe_ends[p]
            if a not in used and b not in used:
                del self.pipe_ends[p]
                del self.end_cluster[a]
                del self.end_cluster[b]

    def check_spur_free(self) -> None:
        for walk in self.walks:
            m = len(walk)
            for i in range(1, m + 1, 2):
                if walk[i % m] == walk[(i + 1) % m]:
                    raise PipeError("walk contains a spur")

    # expansions --------------------------------------------------------------

    def cluster_expansion(self, c: int) -> None:
        """Replace a cluster by one cluster per end, bundling the passages."""
        for e in self.cluster_ends(c):
            self.end_cluster[e] = self.new_cluster()
        bundles: dict[frozenset, int] = {}
        new_walks = []
        for walk in self.walks:
            m = len(walk)
            out = []
            for i in range(0, m, 2):
                entry, exit_ = walk[i], walk[i + 1]
                out.extend([entry, exit_])
                nxt = walk[(i + 2) % m]
                if self.end_cluster[exit_] != self.end_cluster[nxt]:
                    key = frozenset((exit_, nxt))
                    if key not in bundles:
                        p = self.new_pipe()
                        ea = self.new_end(self.end_cluster[exit_])
                        eb = self.new_end(self.end_cluster[nxt])
                        self.pipe_ends[p] = (ea, eb)
                        bundles[key] = p
                    p = bundles[key]
                    ea, eb = self.pipe_ends[p]
                    if self.end_cluster[ea] != self.end_cluster[exit_]:
                        ea, eb = eb, ea
                    out.extend([ea, eb])
            new_walks.append(out)
        self.walks = new_walks
        self.expansions += 1

    def pipe_expansion(self, p: int) -> None:
        if not self.is_safe(p):
            raise UnsafePipe(f"pipe {p} is not safe")
        if not self.is_useful(p):
            raise UselessPipe(f"pipe {p} is useless")
        a, b = self.pipe_ends[p]
        cu, cv = self.end_cluster[a], self.end_cluster[b]
        # every end of cu and cv except a, b becomes its own cluster
        for e in self.cluster_ends(cu) + self.cluster_ends(cv):
            if e not in (a, b):
                self.end_cluster[e] = self.new_cluster()
        bundles: dict[frozenset, int] = {}
        new_walks = []
        for walk in self.walks:
            m = len(walk)
            out = []
            i = 0
            order = list(range(0, m, 2))
            for i in order:
                entry, exit_ = walk[i], walk[i + 1]
                if entry in (a, b) or exit_ in (a, b):
                    continue  # traversals of p vanish into the new bundles
                out.extend([entry, exit_])
            # rebuild with bundles: walk positions using p get replaced
            out = []
            for i in order:
                entry, exit_ = walk[i], walk[i + 1]
                if entry in (a, b):
                    continue
                out.extend([entry, exit_])
                nxt = walk[(i + 2) % m]
                if nxt in (a, b):
                    # passage exit_ -> p -> following entry
                    j = (i + 4) % m
                    follow = walk[j]
                    key = frozenset((exit_, follow))
                    if key not in bundles:
                        np_ = self.new_pipe()
                        ea = self.new_end(self.end_cluster[exit_])
                        eb = self.new_end(self.end_cluster[follow])
                        self.pipe_ends[np_] = (ea, eb)
                        bundles[key] = np_
                    np_ = bundles[key]
                    ea, eb = self.pipe_ends[np_]
                    if self.end_cluster[ea] != self.end_cluster[exit_]:
                        ea, eb = eb, ea
                    out.extend([ea, eb])
            new_walks.append(out)
        self.walks = new_walks
        del self.pipe_ends[p]
        del self.end_cluster[a]
        del self.end_cluster[b]
        # delete the emptied clusters cu, cv (no ends remain)
        self.expansions += 1

    def run_expansions(self, check=None) -> list[int]:
        """Initial cluster expansion, then useful-pipe expansions to a cycle
        union.  Returns the potential trace; asserts strict descent."""
        self.check_spur_free()
        first = sorted(self.clusters())
        for c in first:
            self.cluster_expansion(c)
        self.prune()
        trace = [self.potential()]
        while True:
            p = self.find_safe_useful_pipe()
            if p is None:
                break
            self.pipe_expansion(p)
            self.prune()
            trace.append(self.potential())
            if trace[-1] >= trace[-2]:
                raise PipeError(f"potential did not decrease: {trace}")
            if check is not None:
                check(self)
        if not self.is_cycle_union():
            raise SkeletonNotCycles("expansion finished off a cycle union")
        return trace


# ---------------------------------------------------------------------------
# making the curve respect the pipe system: spur sweeps
# ---------------------------------------------------------------------------


def _component_event_runs(cur: Curve):
    """Consecutive event pairs along each strand component and ring."""
    from .words import component_letters

    pairs = []
    for walk in cur.trace_components():
        evs = []
        for d in walk:
            rec = cur.edges[cur.edge_of[d]]
            evs.extend(rec.anch if d == rec.da else list(reversed(rec.anch)))
        for i in range(len(evs)):
            pairs.append((evs[i], evs[(i + 1) % len(evs)]))
    for rid in sorted(cur.rings):
        evs = cur.rings[rid]
        for i in range(len(evs)):
            pairs.append((evs[i], evs[(i + 1) % len(evs)]))
    return pairs


def _find_spur(cur: Curve):
    """A consecutive event pair on the same wedge with opposite crossing
    directions (the curve enters a pipe and backs out)."""
    for e1, e2 in _component_event_runs(cur):
        if e1 == e2:
            continue
        a, b = cur.events[e1], cur.events[e2]
        if a.wedge != b.wedge:
            continue
        w = a.wedge
        evs = cur.worder[w]
        # traveled signs: consecutive along the component; entering then
        # leaving the pipe means opposite crossing directions along the wall
        if _traveled_sign(cur, e1, forward=True) == -_traveled_sign(cur, e2, forward=False):
            continue
        return (e1, e2)
    return None


def _traveled_sign(cur: Curve, ev: int, forward: bool) -> int:
    return cur.events[ev].sign


def make_respect(runner: Runner, max_steps: int = 100000) -> int:
    """Sweep spurs away so the closed walks have no [u, v, u] subwalks.

    Uses trigon flips (real and wall-level) plus cancellations; returns the
    number of log records emitted.
    """
    cur = runner.curve
    steps = 0
    while True:
        spur = _find_spur(cur)
        if spur is None:
            break
        steps += _sweep_spur(runner, *spur, budget=max_steps - steps)
        if steps > max_steps:
            raise PipeError("spur sweeping exceeded its budget")
    return steps


def _sweep_spur(runner: Runner, e1: int, e2: int, budget: int) -> int:
    """Pull the excursion between events e1, e2 back across their wall."""
    cur = runner.curve
    steps = 0
    while budget > 0:
        if e1 not in cur.events or e2 not in cur.events:
            return steps
        if _cancel_pair_face(cur, e1, e2):
            runner.iso_cancel(e1, e2)
            return steps + 1
        acted = _shrink_spur_once(runner, e1, e2)
        if not acted:
            return steps
        steps += 1
        budget -= 1
    raise PipeError("single spur sweep exceeded its budget")


def _shrink_spur_once(runner: Runner, e1: int, e2: int) -> bool:
    """One step of emptying the disk between the excursion and the wall."""
    cur = runner.curve
    w = cur.events[e1].wedge
    evs = cur.worder[w]
    i1, i2 = evs.index(e1), evs.index(e2)
    lo, hi = min(i1, i2), max(i1, i2)
    between = evs[lo + 1 : hi]
    # events between the spur feet along the wall belong to strands crossing
    # the swept disk; flip the nearest one across its crossing with the
    # excursion, or across the wall trigon it makes with a foot
    for eb in (between[-1:] + between[:1]) if between else []:
        for foot in (e1, e2):
            data = _wall_trigon_data(cur, min(foot, eb), max(foot, eb))
            if data is not None:
                runner.iso_wall_trigon(min(foot, eb), max(foot, eb))
                return True
    # otherwise some trigon face inside the excursion disk can flip across
    # the excursion; find an empty trigon sharing an edge with the excursion
    exc = _excursion_edges(cur, e1, e2)
    arr = cur.arrangement()
    for reg in arr.regions:
        if not (reg.is_disk and not reg.punctures):
            continue
        vis = reg.segments[0]
        if len(vis) != 3 or len({v for v, _, _ in vis}) != 3:
            continue
        from .moves import _walk_dout

        side_edges = [cur.edge_of[_walk_dout(cur, reg, 0, k)] for k in range(3)]
        on_exc = [k for k in range(3) if side_edges[k] in exc]
        if len(on_exc) == 1:
            runner.m33(region_key(arr, reg), mover=on_exc[0])
            return True
    # corner slides around degree-3 wall vertices blocking the sweep
    for eb in between:
        for foot in (e1, e2):
            pair = (min(foot, eb), max(foot, eb))
            if _corner_data(cur, *pair) is not None:
                runner.iso_corner(*pair)
                return True
    if _corner_data(cur, min(e1, e2), max(e1, e2)) is not None:
        runner.iso_corner(min(e1, e2), max(e1, e2))
        return True
    return False


def _excursion_edges(cur: Curve, e1: int, e2: int) -> set[int]:
    """Curve edges of the excursion between the spur's feet."""
    owner = cur.events[e1].owner
    out = set()
    if owner[0] == "e" and owner == cur.events[e2].owner:
        out.add(owner[1])
    # walk the component between the two events collecting edges
    for walk_edges in _edges_between(cur, e1, e2):
        out.update(walk_edges)
    return out


def _edges_between(cur: Curve, e1: int, e2: int):
    for walk in cur.trace_components():
        stops = []  # (edge key, event) in traversal order
        for d in walk:
            rec = cur.edges[cur.edge_of[d]]
            evs = rec.anch if d == rec.da else list(reversed(rec.anch))
            for ev in evs:
                stops.append((cur.edge_of[d], ev))
        evs_only = [ev for _, ev in stops]
        if e1 in evs_only and e2 in evs_only:
            i1 = evs_only.index(e1)
            out = []
            i = i1
            while True:
                out.append(stops[i][0])
                i = (i + 1) % len(stops)
                if evs_only[i] == e2:
                    break
                if i == i1:
                    break
            yield out


# ---------------------------------------------------------------------------
# braid phase: bounded search for enabling rewrites
# ---------------------------------------------------------------------------


def _rewrite_children(cur: Curve):
    """Crossing-preserving rewrites: (op descriptor, child curve)."""
    for key in find_empty(cur, "trigon"):
        for mover in range(3):
            c2 = cur.copy()
            Runner(c2, MoveLog()).m33(key, mover=mover)
            yield ("m33", key, mover), c2
    # wall trigon flips on adjacent wall-event pairs
    for w in sorted(cur.worder):
        evs = cur.worder[w]
        for i in range(len(evs) - 1):
            pair = (min(evs[i], evs[i + 1]), max(evs[i], evs[i + 1]))
            if _wall_trigon_data(cur, *pair) is not None:
                c2 = cur.copy()
                Runner(c2, MoveLog()).iso_wall_trigon(*pair)
                yield ("walltri",) + pair, c2
            if _corner_data(cur, *pair) is not None:
                c2 = cur.copy()
                Runner(c2, MoveLog()).iso_corner(*pair)
                yield ("corner",) + pair, c2


def search_reduction(cur: Curve, max_states: int = 4000):
    """BFS over crossing-preserving rewrites for a state with an embedded
    monogon or bigon.  Returns the op path, or None when the search space is
    exhausted (tight) or the cap is hit."""
    from .oracle import canonical_code

    if find_embedded(cur):
        return []
    seen = {canonical_code(cur)}
    frontier = [(cur, [])]
    exhausted = True
    while frontier:
        nxt = []
        for state, path in frontier:
            for op, child in _rewrite_children(state):
                code = canonical_code(child)
                if code in seen:
                    continue
                seen.add(code)
                if find_embedded(child):
                    return path + [op]
                if len(seen) < max_states:
                    nxt.append((child, path + [op]))
                else:
                    exhausted = False
        frontier = nxt
    return None if exhausted else None


def apply_ops(runner: Runner, ops) -> None:
    for op in ops:
        if op[0] == "m33":
            runner.m33(op[1], mover=op[2])
        elif op[0] == "walltri":
            runner.iso_wall_trigon(op[1], op[2])
        elif op[0] == "corner":
            runner.iso_corner(op[1], op[2])
        else:
            raise PipeError(f"unknown op {op}")


def braid_reduce(runner: Runner, max_states: int = 4000) -> int:
    """Interleave cleanup with enabling searches until no reduction remains."""
    moves = 0
    while True:
        moves += cleanup_contractible(runner)
        ops = search_reduction(runner.curve, max_states)
        if not ops:
            break
        apply_ops(runner, ops)
        moves += len(ops)
    return moves


# ---------------------------------------------------------------------------
# the full pipeline for surfaces with boundary
# ---------------------------------------------------------------------------


def tighten_with_boundary(runner: Runner, max_states: int = 4000) -> Skeleton:
    """Cleanup, rebase onto arcs, remove spurs, run the expansion bookkeeping
    (asserting potential descent), then reduce the annular braids."""
    from .arcs import rebase_to_arc_system

    cur = runner.curve
    cleanup_contractible(runner)
    if cur.n_crossings() or cur.rings:
        rebase_to_arc_system(cur)
        runner.mark("REBASE", "arcs")
        make_respect(runner)
        sk = Skeleton.from_curve(cur)
        sk.run_expansions()
        braid_reduce(runner, max_states)
    else:
        sk = Skeleton()
    return sk
