"""
Free-homotopy classes of curve components via wall-crossing words.

A component's crossing sequence against the crossable wall edges is a word in
the groupoid of wall-complement regions.  Collapsing a spanning tree of the
region dual graph and eliminating the wall-vertex link relations (Tietze
moves) expresses the fundamental group in a free basis whenever the surface
has punctures; words then compare exactly by free and cyclic reduction.

On closed surfaces the single leftover relation blocks the free basis; only
triviality tests are offered there (Dehn's algorithm for genus >= 2, exponent
sums on the torus, everything trivial on the sphere).
"""

from __future__ import annotations

from .mapcore import Curve
from .schema import Schema, wdart_edge, wdart_end

Word = tuple  # tuple of (generator id, +-1)


def free_reduce(w) -> Word:
    out = []
    for g, s in w:
        if out and out[-1][0] == g and out[-1][1] == -s:
            out.pop()
        else:
            out.append((g, s))
    return tuple(out)


def cyclic_reduce(w) -> Word:
    w = list(free_reduce(w))
    while len(w) >= 2 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
        w = w[1:-1]
    return tuple(w)


def invert(w) -> Word:
    return tuple((g, -s) for g, s in reversed(w))


def canon_cyclic(w) -> Word:
    """Canonical form of a free-homotopy class: cyclic word up to rotation
    and global inversion."""
    w = cyclic_reduce(w)
    if not w:
        return ()
    best = None
    for cand in (w, cyclic_reduce(invert(w))):
        n = len(cand)
        for k in range(n):
            rot = cand[k:] + cand[:k]
            if best is None or rot < best:
                best = rot
    return best


class WordError(Exception):
    pass


class WordContext:
    """Word machinery for one wall schema."""

    def __init__(self, schema: Schema):
        self.schema = schema
        self._build()

    def _build(self) -> None:
        s = self.schema
        bare = Curve(s)
        arr = bare.arrangement()
        puncture_faces = set(arr.puncture_face.values())
        # region dual graph over non-puncture faces
        adj: dict[int, list[tuple[int, int]]] = {}
        for w in s.crossable_edges():
            f, b = arr.wall_chain_darts[w][0]
            fa, fb = arr.face_of[f], arr.face_of[b]
            adj.setdefault(fa, []).append((w, fb))
            adj.setdefault(fb, []).append((w, fa))
        self.tree_edges: set[int] = set()
        if adj:
            root = min(adj)
            seen = {root}
            queue = [root]
            while queue:
                f = queue.pop(0)
                for w, g in sorted(adj.get(f, [])):
                    if g not in seen:
                        seen.add(g)
                        self.tree_edges.add(w)
                        queue.append(g)
        self.generators = [w for w in s.crossable_edges() if w not in self.tree_edges]

        # relations: vertex links of wall vertices not meeting puncture faces
        relations: list[Word] = []
        for u in sorted(s.vrot):
            incident_loops = [wd for wd in s.vrot[u] if not s.wedges[wdart_edge(wd)].crossable]
            if incident_loops:
                continue  # link passes through a puncture face
            rel = []
            for wd in s.vrot[u]:
                w = wdart_edge(wd)
                sign = -1 if wdart_end(wd) == 0 else 1
                if w not in self.tree_edges:
                    rel.append((w, sign))
            rel = free_reduce(tuple(rel))
            if rel:
                relations.append(rel)
        self.raw_relations = list(relations)

        # Tietze-eliminate relations to reach a free basis (punctured case)
        self.solved: dict[int, Word] = {}
        rels = [free_reduce(r) for r in relations]
        progress = True
        while progress:
            progress = False
            for ri, rel in enumerate(rels):
                if rel is None:
                    continue
                counts: dict[int, int] = {}
                for g, _ in rel:
                    counts[g] = counts.get(g, 0) + 1
                once = sorted(g for g, c in counts.items() if c == 1)
                if not once:
                    continue
                g = once[-1]
                i = next(k for k, (h, _) in enumerate(rel) if h == g)
                sgn = rel[i][1]
                # rel = A g^sgn B = 1  =>  g^sgn = A^-1 B^-1
                A, B = rel[:i], rel[i + 1 :]
                expr = free_reduce(invert(A) + invert(B))
                if sgn < 0:
                    expr = invert(expr)
                self.solved[g] = expr
                rels[ri] = None
                rels = [None if r is None else free_reduce(self._subst(r)) for r in rels]
                progress = True
                break
        self.leftover = [r for r in rels if r]
        self.free = not self.leftover
        if self.schema.punctures > 0 and not self.free:
            raise WordError("could not eliminate relations on a punctured schema")

    def _subst(self, w: Word) -> Word:
        out: list[tuple[int, int]] = []
        for g, sgn in w:
            if g in self.solved:
                e = self.solved[g] if sgn > 0 else invert(self.solved[g])
                out.extend(e)
            else:
                out.append((g, sgn))
        return tuple(out)

    def resolve(self, letters: list[tuple[int, int]]) -> Word:
        """Map raw (wedge, sign) crossings to a reduced word in the free basis."""
        w = tuple((g, s) for g, s in letters if g not in self.tree_edges)
        prev = None
        while prev != w:
            prev = w
            w = free_reduce(self._subst(w))
        return w

    def puncture_word(self, puncture: int) -> Word:
        """Class of a small loop around one puncture."""
        loop = self.schema.puncture_loops[puncture]
        p = self.schema.wedges[loop].v1
        letters = []
        for wd in self.schema.vrot[p]:
            w = wdart_edge(wd)
            if not self.schema.wedges[w].crossable:
                continue
            letters.append((w, -1 if wdart_end(wd) == 0 else 1))
        return canon_cyclic(self.resolve(letters))

    # triviality -------------------------------------------------------------

    def is_trivial(self, letters: list[tuple[int, int]]) -> bool:
        if self.free:
            return not cyclic_reduce(self.resolve(letters))
        w = cyclic_reduce(self.resolve(letters))
        if not w:
            return True
        g = self.schema.genus
        if g == 0:
            return True
        if g == 1:
            sums: dict[int, int] = {}
            for h, s in w:
                sums[h] = sums.get(h, 0) + s
            return all(v == 0 for v in sums.values())
        rel = self.leftover[0]
        return _dehn_trivial(w, rel)


def _dehn_trivial(w: Word, rel: Word) -> bool:
    L = len(rel)
    rots = []
    for base in (rel, invert(rel)):
        for k in range(L):
            rots.append(base[k:] + base[:k])
    for _ in range(10000):
        w = cyclic_reduce(w)
        if not w:
            return True
        n = len(w)
        if n < L // 2 + 1:
            return False
        replaced = False
        dbl = w + w
        need = L // 2 + 1
        for start in range(n):
            if replaced:
                break
            piece = dbl[start : start + need]
            if len(piece) < need:
                break
            for r in rots:
                if r[:need] == piece:
                    # take the longest match
                    k = need
                    while k < min(n, L) and k + start < len(dbl) and dbl[start + k] == r[k]:
                        k += 1
                    rest = r[k:]
                    neww = invert(rest) + dbl[start + k : start + n]
                    w = tuple(neww)
                    replaced = True
                    break
        if not replaced:
            return False
    raise WordError("Dehn's algorithm did not terminate")


# ---------------------------------------------------------------------------
# per-curve word extraction
# ---------------------------------------------------------------------------

_ctx_cache: dict[str, WordContext] = {}


def context_for(schema: Schema) -> WordContext:
    key = f"{schema.genus}:{schema.punctures}:{schema.signature()}"
    if key not in _ctx_cache:
        _ctx_cache[key] = WordContext(schema)
    return _ctx_cache[key]


def component_letters(cur: Curve, walk: list[int]) -> list[tuple[int, int]]:
    letters = []
    for d in walk:
        for ev, s in _signed_events_from(cur, d):
            letters.append((cur.events[ev].wedge, s))
    return letters


def _signed_events_from(cur: Curve, d: int):
    rec = cur.edges[cur.edge_of[d]]
    if d == rec.da:
        return [(ev, cur.events[ev].sign) for ev in rec.anch]
    return [(ev, -cur.events[ev].sign) for ev in reversed(rec.anch)]


def ring_letters(cur: Curve, rid: int) -> list[tuple[int, int]]:
    return [(cur.events[ev].wedge, cur.events[ev].sign) for ev in cur.rings[rid]]


def component_words(cur: Curve) -> list[Word]:
    """Canonical free-homotopy class of every component (satellites trivial)."""
    ctx = context_for(cur.schema)
    out = []
    for walk in cur.trace_components():
        out.append(canon_cyclic(ctx.resolve(component_letters(cur, walk))))
    for rid in sorted(cur.rings):
        out.append(canon_cyclic(ctx.resolve(ring_letters(cur, rid))))
    out.extend(() for _ in range(cur.free_loops))
    for sat in cur.satellites.values():
        out.extend(() for _ in range(sat.component_count()))
    return out


def word_multiset(cur: Curve):
    return tuple(sorted(component_words(cur)))


def abelianized(w: Word) -> tuple:
    sums: dict[int, int] = {}
    for g, s in w:
        sums[g] = sums.get(g, 0) + s
    vec = tuple(sorted((g, v) for g, v in sums.items() if v))
    neg = tuple(sorted((g, -v) for g, v in sums.items() if v))
    return min(vec, neg)


def class_multiset(cur: Curve):
    """Free-homotopy class multiset at the sharpest sound resolution.

    Exact on punctured surfaces (free group); abelianized on closed ones
    (exact on the torus, a sound invariant for genus >= 2).
    """
    if cur.schema.punctures > 0:
        return word_multiset(cur)
    ctx = context_for(cur.schema)
    out = []
    for walk in cur.trace_components():
        out.append(abelianized(ctx.resolve(component_letters(cur, walk))))
    for rid in sorted(cur.rings):
        out.append(abelianized(ctx.resolve(ring_letters(cur, rid))))
    out.extend(() for _ in range(cur.free_loops))
    for sat in cur.satellites.values():
        out.extend(() for _ in range(sat.component_count()))
    return tuple(sorted(out))


def ring_is_contractible(cur: Curve, rid: int) -> bool:
    ctx = context_for(cur.schema)
    return ctx.is_trivial(ring_letters(cur, rid))


def strand_component_trivial(cur: Curve, walk: list[int]) -> bool:
    ctx = context_for(cur.schema)
    return ctx.is_trivial(component_letters(cur, walk))
