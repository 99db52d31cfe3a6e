"""Symmetric plats and their quotient tangle templates.

A knot drawn as a plat on ``2m`` strands is *transvergent* when the diagram
is carried to itself by a half-turn about a vertical axis between strands
``m`` and ``m+1``.  Such a word uses two kinds of letters:

* a **pair letter** ``j`` (``1 <= j < m``) stands for the symmetric pair of
  braid generators ``j`` and ``2m-j`` with a common sign;
* an **axis letter** (``j == m``) is the single middle generator, which the
  half-turn fixes.

Caps are the standard adjacent ones top and bottom, so the axis meets the
knot exactly twice, at the two middle caps; ``m`` must be odd for the side
caps to pair up symmetrically.

``quotient_template`` builds the associated filling family: fold the diagram
in half, keeping lanes ``1..m`` plus the image of the axis (an unknotted
circle drawn as a vertical chord at the right edge).  The folded knot becomes
an arc ending on the circle at the two branch points; thickening it to a band
yields a two-cable diagram in which

* each pair letter contributes the four crossings of a cabled crossing,
* each axis letter contributes a four-crossing clasp of the band around the
  axis circle,
* the branch points splice the band ends into the circle,

and the band keeps an open twist site just above the lower splice.  Filling
the site with slope ``n`` inserts ``n`` half-twists; the integer family
``fill(template, n)`` is the object the step/transition analysis consumes.
Slope infinity cuts the band, collapsing everything to an unknot, and the
determinants of integer fillings grow as ``|n - n0|`` for a template offset
``n0`` — both facts are pinned per template by the test suite.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple

from .diagram import Crossing, DiagramError, PlanarDiagram, _emit_crossing, plat_closure
from .tangles import TangleTemplate

__all__ = ["SymmetricPlat", "quotient_template", "upstairs_diagram"]


@dataclass(frozen=True)
class SymmetricPlat:
    """A transvergent plat word on ``2 * half_strands`` strands."""

    half_strands: int
    word: Tuple[int, ...]
    name: str = ""

    def __post_init__(self):
        m = self.half_strands
        if m < 1 or m % 2 == 0:
            raise DiagramError("half_strands must be odd (side caps pair up)")
        word = tuple(int(x) for x in self.word)
        object.__setattr__(self, "word", word)
        for x in word:
            if x == 0 or abs(x) > m:
                raise DiagramError(f"letter {x} out of range for half_strands={m}")

    @property
    def axis_letter_count(self) -> int:
        m = self.half_strands
        return sum(1 for x in self.word if abs(x) == m)

    def mirror(self) -> "SymmetricPlat":
        return SymmetricPlat(
            self.half_strands,
            tuple(-x for x in self.word),
            name=f"{self.name}.mirror" if self.name else "",
        )


def upstairs_diagram(plat: SymmetricPlat, name: str = "") -> PlanarDiagram:
    """The symmetric plat itself, on ``2m`` strands with standard caps."""
    m = plat.half_strands
    expanded: List[int] = []
    for x in plat.word:
        j, s = abs(x), (1 if x > 0 else -1)
        if j == m:
            expanded.append(s * m)
        else:
            expanded.extend((s * j, s * (2 * m - j)))
    caps = [(i, i + 1) for i in range(1, 2 * m, 2)]
    return plat_closure(
        2 * m,
        expanded,
        caps_top=caps,
        caps_bottom=caps,
        name=name or plat.name,
    )


def quotient_template(plat: SymmetricPlat, name: str = "") -> TangleTemplate:
    """The two-cable filling template of the folded diagram.

    Wire lanes, left to right: two cable wires per folded strand lane
    (``2j-1``, ``2j`` for lane ``j``), then the axis-circle chord, then the
    circle's return wire at the far right.
    """
    m = plat.half_strands
    seg, ret = 2 * m + 1, 2 * m + 2  # axis chord and its closing return wire
    counter = [0]

    def fresh() -> int:
        counter[0] += 1
        return counter[0]

    crossings: List[Crossing] = []
    wire: Dict[int, int] = {}

    def cross(pos: int, positive: bool) -> None:
        l, r = wire[pos], wire[pos + 1]
        lo, ro = fresh(), fresh()
        crossings.append(_emit_crossing(l, r, lo, ro, positive))
        wire[pos], wire[pos + 1] = ro, lo

    # top boundary: cabled caps on the side lanes, band-into-circle splice at m
    for i in range(1, m - 1, 2):
        wire[2 * i - 1] = wire[2 * i + 2] = fresh()
        wire[2 * i] = wire[2 * i + 1] = fresh()
    wire[2 * m] = wire[seg] = fresh()
    wire[2 * m - 1] = wire[ret] = fresh()

    # body
    for x in plat.word:
        j, positive = abs(x), x > 0
        if j < m:
            base = 2 * j - 1
            cross(base + 1, positive)
            cross(base, positive)
            cross(base + 2, positive)
            cross(base + 1, positive)
        else:
            # the folded strand rounds the axis chord, entering on one sheet
            # and returning on the other: over on the way in, under on the
            # way back (or the reverse, by sign).  All four cabled crossings
            # carry the same lane flag.
            cross(2 * m, positive)
            cross(2 * m - 1, positive)
            cross(2 * m - 1, positive)
            cross(2 * m, positive)

    # the twist site: the band's wires stop at the hole, fresh wires resume
    nw, ne = wire[2 * m - 1], wire[2 * m]
    sw, se = fresh(), fresh()
    wire[2 * m - 1], wire[2 * m] = sw, se

    # bottom boundary mirrors the top; cups merge arc labels
    parent: Dict[int, int] = {}

    def find(x: int) -> int:
        parent.setdefault(x, x)
        r = x
        while parent[r] != r:
            r = parent[r]
        while parent[x] != r:
            parent[x], x = r, parent[x]
        return r

    loops = 0

    def cup(a: int, b: int) -> None:
        nonlocal loops
        ra, rb = find(a), find(b)
        if ra == rb:
            loops += 1
        else:
            parent[max(ra, rb)] = min(ra, rb)

    for i in range(1, m - 1, 2):
        cup(wire[2 * i], wire[2 * i + 1])
        cup(wire[2 * i - 1], wire[2 * i + 2])
    cup(wire[2 * m], wire[seg])
    cup(wire[2 * m - 1], wire[ret])

    relabeled = tuple(tuple(find(a) for a in c) for c in crossings)
    # hole corners follow the knocked-out-crossing convention of the filling
    # layer, which reads the four stubs mirrored left-to-right
    ends = (find(ne), find(nw), find(sw), find(se))
    return TangleTemplate(
        name=name or plat.name or f"plat{m}-template",
        crossings=relabeled,
        ends=ends,
        free_loops=loops,
    )
