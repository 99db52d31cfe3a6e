"""Local-rewriting Khovanov engine that sweeps a diagram one event at a time.

Instead of materializing the full resolution cube (2^n vertices), the diagram
is swept bottom to top as a word of elementary events: ``cap`` (a strand pair
is born), ``cross`` (a crossing on two adjacent strands), ``cup`` (two
adjacent strands join).  The partial chain complex lives over crossingless
matchings of the sweep frontier.  Circles are removed the moment they close,
splitting an object into two graded copies, and invertible differential
entries are cancelled immediately, so for braid-like diagrams the complex
stays near the size of its homology.

Morphisms are stored as GF(2) sums of dotted product cobordisms: one disk per
circle of the source/target overlay, each carrying at most one dot.  Gluing
two such morphisms is Euler-characteristic bookkeeping plus the usual local
evaluation (a sphere needs exactly one dot, two dots or any genus kill a
term, an undotted connected piece neck-cuts into a sum over its boundary
circles).

The sweep computes the unreduced theory; reduced groups are recovered at the
end by dividing off the free rank-two circle factor, which is an exact
operation over GF(2).
"""
from __future__ import annotations

from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from .diagram import DiagramError, PlanarDiagram
from .khovanov import DEFAULT_MAX_GENERATORS, BudgetError

Matching = Tuple[int, ...]
Event = Tuple


# ---------------------------------------------------------------------------
# matchings


def _insert_pair(m: Matching, i: int) -> Matching:
    """Insert a newly matched pair at positions i, i+1."""
    w = len(m)
    out = [0] * (w + 2)
    for p in range(w):
        np = p + 2 if p >= i else p
        nq = m[p] + 2 if m[p] >= i else m[p]
        out[np] = nq
    out[i], out[i + 1] = i + 1, i
    return tuple(out)


def _join(m: Matching, i: int) -> Tuple[Matching, bool]:
    """Join the strands at i, i+1; returns (matching, closed_a_circle)."""
    j = i + 1
    pi, pj = m[i], m[j]
    closed = pi == j

    def newpos(p: int) -> int:
        return p - (1 if p > i else 0) - (1 if p > j else 0)

    out = [0] * (len(m) - 2)
    for p in range(len(m)):
        if p in (i, j) or m[p] in (i, j) or p > m[p]:
            continue
        a, b = newpos(p), newpos(m[p])
        out[a], out[b] = b, a
    if not closed:
        a, b = newpos(pi), newpos(pj)
        out[a], out[b] = b, a
    return tuple(out), closed


def _apply_pairing(m: Matching, i: int, pairing: str) -> Tuple[Matching, bool]:
    """Resolve a crossing site: 'v' keeps strands parallel, 'h' is cup+cap."""
    if pairing == "v":
        return m, False
    joined, closed = _join(m, i)
    return _insert_pair(joined, i), closed


def _is_noncrossing(m: Matching) -> bool:
    stack: List[int] = []
    for p, q in enumerate(m):
        if q > p:
            stack.append(q)
        else:
            if not stack or stack[-1] != p:
                return False
            stack.pop()
    return True


def _overlay(ms: Matching, mt: Matching) -> List[Tuple[int, ...]]:
    """Circles of the union of two matchings on the same points."""
    w = len(ms)
    seen = [False] * w
    circles = []
    for start in range(w):
        if seen[start]:
            continue
        comp = []
        p = start
        while True:
            comp.append(p)
            seen[p] = True
            q = ms[p]
            if not seen[q]:
                comp.append(q)
                seen[q] = True
            p = mt[q]
            if p == start:
                break
        circles.append(tuple(sorted(comp)))
    circles.sort(key=lambda c: c[0])
    return circles


def _point_to_circle(circles: Sequence[Tuple[int, ...]]) -> Dict[int, int]:
    out = {}
    for idx, c in enumerate(circles):
        for p in c:
            out[p] = idx
    return out


# ---------------------------------------------------------------------------
# cobordism gluing: pieces, Euler characteristic, local evaluation

# A "structure" is the mask-independent part of a glued cobordism: a list of
# components (chi, final-circle bits, f-circle bits, g-circle bits, loop keys)
# plus the number of final circles.  Masks assign dots; evaluation applies the
# local relations.

_FBIT, _GBIT = 0, 1


class _Gluer:
    def __init__(self) -> None:
        self.parent: List[int] = []
        self.chi: List[int] = []
        self.tags: List[Tuple] = []  # per piece: ("f",i) | ("g",i) | ("loop",key) | ()

    def piece(self, tag: Tuple = ()) -> int:
        i = len(self.parent)
        self.parent.append(i)
        self.chi.append(1)
        self.tags.append(tag)
        return i

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def glue(self, a: int, b: int, interval: bool = True) -> None:
        ra, rb = self.find(a), self.find(b)
        drop = 1 if interval else 0
        if ra == rb:
            self.chi[ra] -= drop
        else:
            self.parent[rb] = ra
            self.chi[ra] = self.chi[ra] + self.chi[rb] - drop

    def components(self, circle_piece: Sequence[int]) -> List[Tuple]:
        """Group pieces; returns (chi, b_bits, f_bits, g_bits, loop_keys)."""
        groups: Dict[int, List[int]] = {}
        for p in range(len(self.parent)):
            groups.setdefault(self.find(p), []).append(p)
        root_circles: Dict[int, int] = {}
        for ci, piece in enumerate(circle_piece):
            root_circles[self.find(piece)] = root_circles.get(self.find(piece), 0) | (1 << ci)
        comps = []
        for root, members in sorted(groups.items()):
            fbits = gbits = 0
            loops: List[str] = []
            for p in members:
                tag = self.tags[p]
                if not tag:
                    continue
                if tag[0] == "f":
                    fbits |= 1 << tag[1]
                elif tag[0] == "g":
                    gbits |= 1 << tag[1]
                else:
                    loops.append(tag[1])
            comps.append((self.chi[root], root_circles.get(root, 0), fbits, gbits, tuple(loops)))
        return comps


def _evaluate(comps: Sequence[Tuple], fmask: int, gmask: int, loopdots) -> Optional[List[int]]:
    """Dot masks for the glued cobordism, or None when the term vanishes."""
    acc = [0]
    for chi, bbits, fbits, gbits, loops in comps:
        dots = (fmask & fbits).bit_count() + (gmask & gbits).bit_count()
        for key in loops:
            dots += loopdots[key]
        if dots >= 2:
            return None
        b = bbits.bit_count()
        handles = 2 - chi - b
        if handles < 0 or handles % 2:
            raise AssertionError("inconsistent surface bookkeeping")
        if handles:
            return None  # positive genus kills the component
        if b == 0:
            if dots == 1:
                continue  # a once-dotted sphere evaluates to 1
            return None
        if dots == 1:
            acc = [m | bbits for m in acc]
        else:
            bits = [c for c in range(bbits.bit_length()) if bbits >> c & 1]
            acc = [m | (bbits & ~(1 << c)) for m in acc for c in bits]
    return acc


# structure caches, keyed by the matchings involved
_COMPOSE_CACHE: Dict[Tuple, Tuple] = {}
_LIFT_CACHE: Dict[Tuple, Tuple] = {}
_SADDLE_CACHE: Dict[Tuple, Tuple] = {}


def _compose_structure(mx: Matching, mmid: Matching, my: Matching) -> Tuple:
    key = (mx, mmid, my)
    hit = _COMPOSE_CACHE.get(key)
    if hit is not None:
        return hit
    fcircles = _overlay(mx, mmid)
    gcircles = _overlay(mmid, my)
    fof = _point_to_circle(fcircles)
    gof = _point_to_circle(gcircles)
    gl = _Gluer()
    fp = [gl.piece(("f", i)) for i in range(len(fcircles))]
    gp = [gl.piece(("g", i)) for i in range(len(gcircles))]
    for p in range(len(mmid)):
        if p < mmid[p]:
            gl.glue(fp[fof[p]], gp[gof[p]])
    final = _overlay(mx, my)
    circle_piece = [fp[fof[c[0]]] for c in final]
    comps = gl.components(circle_piece)
    out = (comps, len(final))
    _COMPOSE_CACHE[key] = out
    return out


def _lift_structure(kind: str, i: int, pairing: Optional[str], ma: Matching, mb: Matching) -> Tuple:
    """Structure for an existing edge carried through one event.

    Returns (comps, n_final, src_loop, tgt_loop).
    """
    key = (kind, i, pairing, ma, mb)
    hit = _LIFT_CACHE.get(key)
    if hit is not None:
        return hit
    fcircles = _overlay(ma, mb)
    fof = _point_to_circle(fcircles)
    gl = _Gluer()
    fp = [gl.piece(("f", ci)) for ci in range(len(fcircles))]
    src_loop = tgt_loop = False

    if kind == "cap":
        sheet = gl.piece()
        child_a, child_b = _insert_pair(ma, i), _insert_pair(mb, i)

        def piece_at(p: int) -> int:
            if p in (i, i + 1):
                return sheet
            return fp[fof[p - 2 if p > i + 1 else p]]

    elif kind == "cup":
        sheet = gl.piece()
        gl.glue(sheet, fp[fof[i]])
        gl.glue(sheet, fp[fof[i + 1]])
        child_a, src_loop = _join(ma, i)
        child_b, tgt_loop = _join(mb, i)
        if src_loop:
            gl.glue(gl.piece(("loop", "s")), sheet, interval=False)
        if tgt_loop:
            gl.glue(gl.piece(("loop", "t")), sheet, interval=False)

        def piece_at(p: int) -> int:
            return fp[fof[p + 2 if p >= i else p]]

    elif kind == "cross" and pairing == "v":
        left = gl.piece()
        right = gl.piece()
        gl.glue(left, fp[fof[i]])
        gl.glue(right, fp[fof[i + 1]])
        child_a, child_b = ma, mb

        def piece_at(p: int) -> int:
            if p == i:
                return left
            if p == i + 1:
                return right
            return fp[fof[p]]

    elif kind == "cross" and pairing == "h":
        cup = gl.piece()
        cap = gl.piece()
        gl.glue(cup, fp[fof[i]])
        gl.glue(cup, fp[fof[i + 1]])
        child_a, src_loop = _apply_pairing(ma, i, "h")
        child_b, tgt_loop = _apply_pairing(mb, i, "h")
        if src_loop:
            gl.glue(gl.piece(("loop", "s")), cup, interval=False)
        if tgt_loop:
            gl.glue(gl.piece(("loop", "t")), cup, interval=False)

        def piece_at(p: int) -> int:
            if p in (i, i + 1):
                return cap
            return fp[fof[p]]

    else:  # pragma: no cover
        raise ValueError(kind)

    final = _overlay(child_a, child_b)
    comps = gl.components([piece_at(c[0]) for c in final])
    out = (comps, len(final), src_loop, tgt_loop)
    _LIFT_CACHE[key] = out
    return out


def _saddle_structure(m: Matching, i: int, pairing0: str, pairing1: str) -> Tuple:
    """Structure of the new differential entry created by a crossing event."""
    key = (m, i, pairing0)
    hit = _SADDLE_CACHE.get(key)
    if hit is not None:
        return hit
    arcs = [(p, m[p]) for p in range(len(m)) if p < m[p]]
    arc_at = {}
    for idx, (p, q) in enumerate(arcs):
        arc_at[p] = idx
        arc_at[q] = idx
    gl = _Gluer()
    sheets = [gl.piece() for _ in arcs]
    saddle = gl.piece()
    gl.glue(saddle, sheets[arc_at[i]])
    gl.glue(saddle, sheets[arc_at[i + 1]])
    child0, src_loop = _apply_pairing(m, i, pairing0)
    child1, tgt_loop = _apply_pairing(m, i, pairing1)
    if src_loop:
        gl.glue(gl.piece(("loop", "s")), saddle, interval=False)
    if tgt_loop:
        gl.glue(gl.piece(("loop", "t")), saddle, interval=False)
    final = _overlay(child0, child1)

    def piece_at(p: int) -> int:
        if p in (i, i + 1):
            return saddle
        return sheets[arc_at[p]]

    comps = gl.components([piece_at(c[0]) for c in final])
    out = (comps, len(final), src_loop, tgt_loop)
    _SADDLE_CACHE[key] = out
    return out


# ---------------------------------------------------------------------------
# the sweeping complex


def _src_dot(eps: int) -> int:
    # a circle reborn from the q+1 copy enters through an undotted cup
    return 0 if eps > 0 else 1


def _tgt_dot(eps: int) -> int:
    # projecting onto the q+1 copy caps the circle with a dotted disk
    return 1 if eps > 0 else 0


class _ScanComplex:
    def __init__(self, max_objects: int) -> None:
        self.obj: Dict[int, Tuple[Matching, int, int]] = {0: ((), 0, 0)}
        self.out: Dict[int, Dict[int, Set[int]]] = {}
        self.in_: Dict[int, Set[int]] = {}
        self.next_id = 1
        self.max_objects = max_objects

    # -- plumbing

    def _new_obj(self, m: Matching, h: int, q: int) -> int:
        oid = self.next_id
        self.next_id += 1
        self.obj[oid] = (m, h, q)
        return oid

    def _xor_edge(self, a: int, b: int, masks: Set[int]) -> None:
        if not masks:
            return
        row = self.out.setdefault(a, {})
        cur = row.get(b)
        if cur is None:
            row[b] = set(masks)
            self.in_.setdefault(b, set()).add(a)
        else:
            cur.symmetric_difference_update(masks)
            if not cur:
                del row[b]
                self.in_[b].discard(a)

    def _drop(self, o: int) -> None:
        for b in list(self.out.get(o, ())):
            self.in_[b].discard(o)
        self.out.pop(o, None)
        for a in list(self.in_.get(o, ())):
            self.out[a].pop(o, None)
        self.in_.pop(o, None)
        del self.obj[o]

    # -- events

    def apply(self, ev: Event) -> None:
        kind = ev[0]
        if kind == "cross":
            self._apply_cross(ev[1], ev[2])
        elif kind in ("cap", "cup"):
            self._apply_simple(kind, ev[1])
        else:  # pragma: no cover
            raise ValueError(f"unknown event {ev!r}")
        if len(self.obj) > self.max_objects:
            raise BudgetError(
                f"scan frontier grew past {self.max_objects} objects; "
                "raise max_generators to proceed"
            )
        self._eliminate()

    def _children(self, oid: int, kind: str, i: int, pairing: Optional[str], dh: int, dq: int):
        m, h, q = self.obj[oid]
        if kind == "cap":
            child, loop = _insert_pair(m, i), False
        elif kind == "cup":
            child, loop = _join(m, i)
        else:
            child, loop = _apply_pairing(m, i, pairing)
        if not loop:
            return [(self._new_obj(child, h + dh, q + dq), 0)]
        return [
            (self._new_obj(child, h + dh, q + dq + eps), eps)
            for eps in (1, -1)
        ]

    def _apply_simple(self, kind: str, i: int) -> None:
        old_obj = self.obj
        old_out = self.out
        self.obj, self.out, self.in_ = {}, {}, {}
        kids: Dict[int, List[Tuple[int, int]]] = {}
        for oid in sorted(old_obj):
            self.obj[oid] = old_obj[oid]  # temporary for _children lookup
        for oid in sorted(old_obj):
            kids[oid] = self._children(oid, kind, i, None, 0, 0)
        for oid in sorted(old_obj):
            del self.obj[oid]
        for a in sorted(old_out):
            ma = old_obj[a][0]
            for b in sorted(old_out[a]):
                masks = old_out[a][b]
                mb = old_obj[b][0]
                comps, _, sloop, tloop = _lift_structure(kind, i, None, ma, mb)
                for na, epsa in kids[a]:
                    for nb, epsb in kids[b]:
                        dots = {}
                        if sloop:
                            dots["s"] = _src_dot(epsa)
                        if tloop:
                            dots["t"] = _tgt_dot(epsb)
                        acc: Set[int] = set()
                        for mk in masks:
                            res = _evaluate(comps, mk, 0, dots)
                            if res:
                                acc.symmetric_difference_update(res)
                        self._xor_edge(na, nb, acc)

    def _apply_cross(self, i: int, pos_type: bool) -> None:
        p0, p1 = ("v", "h") if pos_type else ("h", "v")
        old_obj = self.obj
        old_out = self.out
        self.obj, self.out, self.in_ = {}, {}, {}
        kids: Dict[int, List[List[Tuple[int, int]]]] = {}
        for oid in sorted(old_obj):
            self.obj[oid] = old_obj[oid]
        for oid in sorted(old_obj):
            kids[oid] = [
                self._children(oid, "cross", i, p0, 0, 0),
                self._children(oid, "cross", i, p1, 1, 1),
            ]
        for oid in sorted(old_obj):
            del self.obj[oid]
        # saddle entries
        for oid in sorted(old_obj):
            m = old_obj[oid][0]
            comps, _, sloop, tloop = _saddle_structure(m, i, p0, p1)
            for n0, eps0 in kids[oid][0]:
                for n1, eps1 in kids[oid][1]:
                    dots = {}
                    if sloop:
                        dots["s"] = _src_dot(eps0)
                    if tloop:
                        dots["t"] = _tgt_dot(eps1)
                    res = _evaluate(comps, 0, 0, dots)
                    self._xor_edge(n0, n1, set(res) if res else set())
        # carried entries
        for a in sorted(old_out):
            ma = old_obj[a][0]
            for b in sorted(old_out[a]):
                masks = old_out[a][b]
                mb = old_obj[b][0]
                for r, pairing in ((0, p0), (1, p1)):
                    comps, _, sloop, tloop = _lift_structure("cross", i, pairing, ma, mb)
                    for na, epsa in kids[a][r]:
                        for nb, epsb in kids[b][r]:
                            dots = {}
                            if sloop:
                                dots["s"] = _src_dot(epsa)
                            if tloop:
                                dots["t"] = _tgt_dot(epsb)
                            acc: Set[int] = set()
                            for mk in masks:
                                res = _evaluate(comps, mk, 0, dots)
                                if res:
                                    acc.symmetric_difference_update(res)
                            self._xor_edge(na, nb, acc)

    # -- cancellation

    def _is_identity(self, a: int, b: int, masks: Set[int]) -> bool:
        return 0 in masks and self.obj[a][0] == self.obj[b][0]

    def _eliminate(self) -> None:
        stack = [
            (a, b)
            for a in sorted(self.out)
            for b in sorted(self.out[a])
            if self._is_identity(a, b, self.out[a][b])
        ]
        while stack:
            a, b = stack.pop()
            if a not in self.obj or b not in self.obj:
                continue
            masks = self.out.get(a, {}).get(b)
            if masks is None or not self._is_identity(a, b, masks):
                continue
            if len(masks) != 1:
                raise AssertionError("identity entry with extra inhomogeneous terms")
            mmid = self.obj[a][0]
            ins = [(x, set(self.out[x][b])) for x in sorted(self.in_.get(b, ())) if x != a]
            outs = [(y, set(ms)) for y, ms in sorted(self.out.get(a, {}).items()) if y != b]
            self._drop(a)
            self._drop(b)
            for x, bmasks in ins:
                mx = self.obj[x][0]
                for y, gmasks in outs:
                    my = self.obj[y][0]
                    comps, _ = _compose_structure(mx, mmid, my)
                    acc: Set[int] = set()
                    for fm in bmasks:
                        for gm in gmasks:
                            res = _evaluate(comps, fm, gm, {})
                            if res:
                                acc.symmetric_difference_update(res)
                    if acc:
                        self._xor_edge(x, y, acc)
                        if self._is_identity(x, y, self.out[x].get(y, set())):
                            stack.append((x, y))

    # -- output

    def table(self) -> Dict[Tuple[int, int], int]:
        if self.out:
            raise AssertionError("sweep finished with differentials left over")
        out: Dict[Tuple[int, int], int] = {}
        for m, h, q in self.obj.values():
            if m != ():
                raise AssertionError("sweep finished with open strands")
            out[(h, q)] = out.get((h, q), 0) + 1
        return out


def run_events(
    events: Sequence[Event],
    n_plus: int,
    n_minus: int,
    max_generators: int = DEFAULT_MAX_GENERATORS,
) -> Dict[Tuple[int, int], int]:
    """Sweep an event word; returns unreduced homology dims by (h, q)."""
    cx = _ScanComplex(max_generators)
    for ev in events:
        cx.apply(ev)
    raw = cx.table()
    return {
        (h - n_minus, q + n_plus - 2 * n_minus): dim
        for (h, q), dim in raw.items()
    }


# ---------------------------------------------------------------------------
# compiling a planar diagram to an event word


_SWEEP_ATTEMPT_LIMIT = 300_000


def compile_events(d: PlanarDiagram) -> List[Event]:
    """Find a planar sweep of the diagram as a cap/cross/cup word.

    Crossings are attached to a growing frontier of open strand ends one at a
    time.  A crossing may consume two adjacent open ends, or one open end
    plus a freshly capped partner (the leftover cap end rejoins its strand at
    a later cup), and whenever two ends of the same arc become adjacent they
    are cupped off immediately.  The attachment order is found by depth-first
    search, preferring moves that keep the frontier narrow; any completed
    sweep realizes exactly the input diagram, so a wrong branch can only fail
    to close, never mislead.

    Raises DiagramError when no sweep is found (wildly tangled inputs); every
    diagram produced by the builders in this package compiles.
    """
    n = len(d.crossings)
    if n == 0:
        return []
    all_done = (1 << n) - 1

    def attach(frontier: List[int], events: List[Event], cand: Tuple) -> Tuple[List[int], List[Event]]:
        ci, mode, p, k = cand
        arcs = d.crossings[ci]
        xk, xk1 = arcs[k], arcs[(k + 1) % 4]
        xk2, xk3 = arcs[(k + 2) % 4], arcs[(k + 3) % 4]
        f, ev = list(frontier), list(events)
        pos_type = k % 2 == 1
        if mode == 0:  # floating start: cap both inputs
            ev += [("cap", 0), ("cap", 1), ("cross", 0, pos_type)]
            f = [xk3, xk2, xk1, xk]
        elif mode == 1:  # both inputs already open and adjacent
            ev.append(("cross", p, pos_type))
            f[p : p + 2] = [xk3, xk2]
        elif mode == 2:  # left input open, cap the right one
            ev += [("cap", p + 1), ("cross", p, pos_type)]
            f[p : p + 1] = [xk3, xk2, xk1]
        else:  # right input open, cap the left one
            ev += [("cap", p), ("cross", p + 1, pos_type)]
            f[p : p + 1] = [xk, xk3, xk2]
        q = 0
        while q + 1 < len(f):
            if f[q] == f[q + 1]:
                ev.append(("cup", q))
                del f[q : q + 2]
                q = max(0, q - 1)
            else:
                q += 1
        return f, ev

    def candidates(frontier: List[int], done: int) -> List[Tuple]:
        out = []
        for ci in range(n):
            if done >> ci & 1:
                continue
            arcs = d.crossings[ci]
            if not frontier:
                out.extend((ci, 0, 0, k) for k in range(4))
                continue
            for k in range(4):
                xk, xk1 = arcs[k], arcs[(k + 1) % 4]
                for p, a in enumerate(frontier):
                    if a == xk and p + 1 < len(frontier) and frontier[p + 1] == xk1:
                        out.append((ci, 1, p, k))
                    if xk != xk1:
                        if a == xk:
                            out.append((ci, 2, p, k))
                        if a == xk1:
                            out.append((ci, 3, p, k))
        return out

    failed: Set[Tuple] = set()
    attempts = 0

    def search(frontier: List[int], events: List[Event], done: int) -> Optional[List[Event]]:
        nonlocal attempts
        if done == all_done:
            return events if not frontier else None
        key = (tuple(frontier), done)
        if key in failed:
            return None
        attempts += 1
        if attempts > _SWEEP_ATTEMPT_LIMIT:
            raise DiagramError("no planar sweep found (search budget exhausted)")
        scored = []
        for cand in candidates(frontier, done):
            f2, ev2 = attach(frontier, events, cand)
            scored.append((len(f2), cand[0], cand[1], cand[2], cand[3], f2, ev2))
        # narrowest frontier first, then stored order: builders emit crossings
        # along the diagram spine, and sweeping in that order keeps the
        # intermediate complexes small (crossing a long cable sideways is
        # exponentially worse than walking along it)
        scored.sort(key=lambda t: t[:5])
        for _, ci, _, _, _, f2, ev2 in scored:
            res = search(f2, ev2, done | (1 << ci))
            if res is not None:
                return res
        failed.add(key)
        return None

    res = search([], [], 0)
    if res is None:
        raise DiagramError("no planar sweep found for this diagram")
    return res


# ---------------------------------------------------------------------------
# public API


def _tensor_unit_circle(entries: Dict[Tuple[int, int], int]) -> Dict[Tuple[int, int], int]:
    out: Dict[Tuple[int, int], int] = {}
    for (h, q), dim in entries.items():
        for dq in (1, -1):
            out[(h, q + dq)] = out.get((h, q + dq), 0) + dim
    return out


def divide_unit_circle(entries: Dict[Tuple[int, int], int]) -> Dict[Tuple[int, int], int]:
    """Invert tensoring with the rank-two circle factor (exact over GF(2))."""
    by_h: Dict[int, Dict[int, int]] = {}
    for (h, q), dim in entries.items():
        by_h.setdefault(h, {})[q] = dim
    out: Dict[Tuple[int, int], int] = {}
    for h, qd in by_h.items():
        qs = sorted(qd)
        if any((q - qs[0]) % 2 for q in qs):
            raise ArithmeticError("mixed q parity; not a circle multiple")
        prev = 0
        for q in range(qs[0], qs[-1] + 2, 2):
            r = qd.get(q, 0) - prev
            if r < 0:
                raise ArithmeticError("table is not divisible by the circle factor")
            if r:
                out[(h, q + 1)] = r
            prev = r
        if prev:
            raise ArithmeticError("nonzero remainder dividing by the circle factor")
    return out


def scan_unreduced_kh(
    d: PlanarDiagram, max_generators: int = DEFAULT_MAX_GENERATORS
) -> Dict[Tuple[int, int], int]:
    events = compile_events(d)
    entries = run_events(events, d.n_plus, d.n_minus, max_generators)
    for _ in range(d.free_loops):
        entries = _tensor_unit_circle(entries)
    return entries


def scan_reduced_kh(
    d: PlanarDiagram, max_generators: int = DEFAULT_MAX_GENERATORS
) -> Dict[Tuple[int, int], int]:
    return divide_unit_circle(scan_unreduced_kh(d, max_generators))
