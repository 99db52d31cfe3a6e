"""Twist-filling families and the kappa invariant.

A tangle template with one open site defines a family of links indexed by
the number of half-twists inserted at the site.  Consecutive members differ
by one crossing whose other resolution is the unknotted infinity fill, so
each step map on reduced homology is either injective with one-dimensional
cokernel or surjective with one-dimensional kernel — total dimensions move
by exactly one per step.  Far enough down the index every step is injective
and far enough up every step is surjective; ``kappa`` is the stable image
caught between the two regimes.  Its homological grading is absolute, and
its quantum grading is translated step by step into the frame of the zero
fill (the band closed without extra twists sits at index zero of a raw
template; calibrated templates put the determinant-zero fill there).

One wrinkle is handled explicitly: the untwisted band closure typically
carries two extra generators, so the dimension sequence has a local bump
whose two flanking steps read surjective-then-injective.  That reversed
pair is recognised as a bump, recorded, and excluded from the monotone
pattern; a genuine transition reads injective-then-surjective and is
unaffected.  The invariant is always the two-step image at the transition,
so families whose transition sits right next to a bump inherit a one-sided
reading from the exclusion rule; families with clear margin on both sides
(all the headline examples) are insensitive to it.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .diagram import DiagramError
from .khovanov import DEFAULT_MAX_GENERATORS, BudgetError, KhTable, kh_table, width
from .tangles import TangleTemplate, fill, template_from_json, template_to_json

__all__ = [
    "INJECTIVE",
    "SURJECTIVE",
    "StepError",
    "TransitionError",
    "FillingFamily",
    "StepClass",
    "TransitionProfile",
    "KappaTable",
    "KappaRun",
    "compute_family",
    "classify_steps",
    "find_transition",
    "compute_kappa",
    "kappa_width",
    "kappa_for_template",
]

INJECTIVE = "injective"
SURJECTIVE = "surjective"


class StepError(RuntimeError):
    """A consecutive pair of fills violates the one-step structure."""


class TransitionError(RuntimeError):
    """No transition index is visible (or the pattern is inconsistent)."""


@dataclass
class FillingFamily:
    """Reduced homology tables of integer fills n_lo..n_hi of one template.

    ``offsets[n]`` aligns table ``n`` with table ``n-1``: shifting table
    ``n`` by ``q -> q - 1 + offsets[n]`` makes the graded difference from
    table ``n-1`` a single entry of value +-1.
    """

    template: TangleTemplate
    n_lo: int
    n_hi: int
    tables: Dict[int, KhTable]
    offsets: Dict[int, int] = field(default_factory=dict)

    def table(self, n: int) -> KhTable:
        try:
            return self.tables[n]
        except KeyError:
            raise StepError(f"fill {n} not computed (range {self.n_lo}..{self.n_hi})")

    def dims(self) -> Dict[int, int]:
        return {n: t.total_dim for n, t in sorted(self.tables.items())}

    def widths(self) -> Dict[int, int]:
        return {n: width(t) for n, t in sorted(self.tables.items())}

    def step_rule(self, n: int) -> int:
        """Net q-translation of the step map out of fill ``n``."""
        return self.offsets[n] - 1

    def shift_to_zero(self, n: int) -> int:
        """Total q-translation expressing frame ``n`` in the zero frame."""
        if n >= 0:
            return sum(self.step_rule(k) for k in range(1, n + 1))
        return -sum(self.step_rule(k) for k in range(n + 1, 1))


@dataclass(frozen=True)
class StepClass:
    """One step map, read off by comparing consecutive tables.

    The defect bigrading (the lone kernel or cokernel generator) is quoted
    in the coordinates of the target table, fill ``n - 1``.
    """

    n: int
    kind: str
    defect_bigrading: Tuple[int, int]


@dataclass(frozen=True)
class TransitionProfile:
    """Where the family flips from injective steps to surjective ones.

    ``margin`` counts verified monotone steps (below, above) the transition;
    ``bumps`` lists fill indices whose reversed step pair was excluded.
    """

    N: int
    evidence: Tuple[StepClass, ...]
    margin: Tuple[int, int]
    bumps: Tuple[int, ...] = ()


@dataclass
class KappaTable:
    """The kappa invariant: graded dimensions of the stable image.

    Homological grading absolute; quantum grading in the zero-fill frame.
    """

    entries: Dict[Tuple[int, int], int]
    template: str = ""
    N: int = 0
    n_range: Tuple[int, int] = (0, 0)

    def __post_init__(self):
        self.entries = {
            (int(h), int(q)): int(v) for (h, q), v in self.entries.items() if v
        }
        if any(v < 0 for v in self.entries.values()):
            raise ValueError("dimensions must be positive")

    @property
    def total_dim(self) -> int:
        return sum(self.entries.values())

    def delta_support(self) -> List[int]:
        return sorted({q - 2 * h for h, q in self.entries})

    def as_kh_table(self) -> KhTable:
        return KhTable(dict(self.entries), link=f"kappa({self.template})")

    def to_json_dict(self) -> dict:
        return {
            "format": "kf-1",
            "template": self.template,
            "N": self.N,
            "entries": [
                {"h": h, "q": q, "dim": v}
                for (h, q), v in sorted(self.entries.items())
            ],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "KappaTable":
        return cls(
            entries={(e["h"], e["q"]): e["dim"] for e in d["entries"]},
            template=d.get("template", ""),
            N=d.get("N", 0),
        )

    def to_text(self) -> str:
        return self.as_kh_table().to_text()

    def to_latex(self) -> str:
        return self.as_kh_table().to_latex()


@dataclass
class KappaRun:
    """Bundle returned by the automatic driver."""

    family: FillingFamily
    profile: TransitionProfile
    table: KappaTable


# ---------------------------------------------------------------------------
# Family construction


def _fill_table(args):
    data, n, max_generators = args
    t = template_from_json(data)
    return n, kh_table(fill(t, n), max_generators=max_generators).entries


def _compute_tables(
    template: TangleTemplate,
    wanted: Sequence[int],
    threads: int,
    max_generators: int,
) -> Dict[int, KhTable]:
    wanted = sorted(set(wanted))
    if threads > 1 and len(wanted) > 1:
        data = template_to_json(template)
        jobs = [(data, n, max_generators) for n in wanted]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            done = dict(pool.map(_fill_table, jobs))
        return {
            n: KhTable(done[n], link=f"{template.name}({n})") for n in wanted
        }
    return {
        n: kh_table(fill(template, n), max_generators=max_generators)
        for n in wanted
    }


def _step_offset_candidates(prev: KhTable, cur: KhTable) -> List[Tuple[int, Tuple[int, int], int]]:
    """All rules r making ``prev - shifted(cur, dq=r)`` one-point of +-1.

    Returns (offset, defect bigrading, defect sign) triples, offset being
    the stored convention r + 1.
    """
    if not prev.entries or not cur.entries:
        raise StepError("cannot align an empty table")
    prev_qs = [q for _, q in prev.entries]
    cur_qs = [q for _, q in cur.entries]
    out = []
    for r in range(min(prev_qs) - max(cur_qs) - 2, max(prev_qs) - min(cur_qs) + 3):
        diff: Dict[Tuple[int, int], int] = dict(prev.entries)
        for (h, q), v in cur.entries.items():
            key = (h, q + r)
            diff[key] = diff.get(key, 0) - v
        nonzero = {k: v for k, v in diff.items() if v}
        if len(nonzero) == 1:
            (spot, value), = nonzero.items()
            if abs(value) == 1:
                out.append((r + 1, spot, value))
    return out


def _resolve_offsets(
    steps: List[int],
    candidates: Dict[int, List[Tuple[int, Tuple[int, int], int]]],
) -> Dict[int, Tuple[int, Tuple[int, int], int]]:
    """Pick one candidate per step: unique ones first, then neighbours."""
    chosen: Dict[int, Tuple[int, Tuple[int, int], int]] = {
        n: cands[0] for n, cands in candidates.items() if len(cands) == 1
    }
    pending = [n for n in steps if n not in chosen]
    while pending:
        progress = []
        for n in pending:
            picks = []
            for nb in (n - 1, n + 1):
                if nb in chosen:
                    match = [c for c in candidates[n] if c[0] == chosen[nb][0]]
                    picks.extend(match)
            if len({p[0] for p in picks}) == 1:
                chosen[n] = picks[0]
                progress.append(n)
        if not progress:
            stuck = {n: [c[0] for c in candidates[n]] for n in pending}
            raise StepError(
                f"ambiguous q-offsets not settled by neighbouring steps: {stuck}"
            )
        pending = [n for n in pending if n not in chosen]
    return chosen


def _family_from_tables(
    template: TangleTemplate, tables: Dict[int, KhTable], lo: int, hi: int
) -> FillingFamily:
    fam = FillingFamily(
        template=template,
        n_lo=lo,
        n_hi=hi,
        tables={n: tables[n] for n in range(lo, hi + 1)},
    )
    steps = list(range(lo + 1, hi + 1))
    candidates: Dict[int, List[Tuple[int, Tuple[int, int], int]]] = {}
    for n in steps:
        prev, cur = fam.table(n - 1), fam.table(n)
        if abs(cur.total_dim - prev.total_dim) != 1:
            raise StepError(
                f"fills {n - 1} and {n} of {template.name!r} differ by "
                f"{cur.total_dim - prev.total_dim} generators, not one"
            )
        cands = _step_offset_candidates(prev, cur)
        if not cands:
            raise StepError(
                f"no q-offset concentrates the difference of fills {n - 1},{n}"
            )
        candidates[n] = cands
    fam.offsets = {n: c[0] for n, c in _resolve_offsets(steps, candidates).items()}
    return fam


def compute_family(
    template: TangleTemplate,
    n_range: Tuple[int, int],
    threads: int = 1,
    max_generators: int = DEFAULT_MAX_GENERATORS,
) -> FillingFamily:
    """Tables for every integer fill in ``n_range`` plus step alignments."""
    lo, hi = int(n_range[0]), int(n_range[1])
    if lo > hi:
        raise DiagramError(f"empty fill range {lo}..{hi}")
    tables = _compute_tables(template, range(lo, hi + 1), threads, max_generators)
    return _family_from_tables(template, tables, lo, hi)


# ---------------------------------------------------------------------------
# Step classification and the transition


def classify_steps(fam: FillingFamily) -> List[StepClass]:
    """Read each step map off the total-dimension change."""
    out = []
    for n in range(fam.n_lo + 1, fam.n_hi + 1):
        prev, cur = fam.table(n - 1), fam.table(n)
        kind = SURJECTIVE if cur.total_dim == prev.total_dim + 1 else INJECTIVE
        cands = _step_offset_candidates(prev, cur)
        spot = next(c[1] for c in cands if c[0] == fam.offsets[n])
        out.append(StepClass(n=n, kind=kind, defect_bigrading=spot))
    return out


def _split_bumps(steps: Sequence[StepClass]) -> Tuple[List[StepClass], List[int]]:
    """Drop reversed surjective/injective pairs flanking a dimension bump."""
    kept: List[StepClass] = []
    bumps: List[int] = []
    i = 0
    ordered = sorted(steps, key=lambda s: s.n)
    while i < len(ordered):
        cur = ordered[i]
        nxt = ordered[i + 1] if i + 1 < len(ordered) else None
        if (
            nxt is not None
            and nxt.n == cur.n + 1
            and cur.kind == SURJECTIVE
            and nxt.kind == INJECTIVE
        ):
            bumps.append(cur.n)
            i += 2
            continue
        kept.append(cur)
        i += 1
    return kept, bumps


def find_transition(fam: FillingFamily) -> TransitionProfile:
    """Locate the unique index with injective steps below, surjective above."""
    steps = classify_steps(fam)
    kept, bumps = _split_bumps(steps)
    inj = [s.n for s in kept if s.kind == INJECTIVE]
    sur = [s.n for s in kept if s.kind == SURJECTIVE]
    if not inj or not sur:
        missing = "injective" if not inj else "surjective"
        raise TransitionError(
            f"no {missing} step inside fills {fam.n_lo}..{fam.n_hi}; widen the range"
        )
    if max(inj) > min(sur):
        raise TransitionError(
            f"step pattern is not monotone (injective at {max(inj)} above "
            f"surjective at {min(sur)}); wrong template or grading bug"
        )
    return TransitionProfile(
        N=max(inj),
        evidence=tuple(steps),
        margin=(len(inj), len(sur)),
        bumps=tuple(bumps),
    )


# ---------------------------------------------------------------------------
# The invariant


def _step_kind(profile: TransitionProfile, n: int) -> Optional[str]:
    for s in profile.evidence:
        if s.n == n:
            return s.kind
    return None


def compute_kappa(fam: FillingFamily, profile: TransitionProfile) -> KappaTable:
    """Stable image at the transition, quoted in the zero-fill frame.

    The step out of fill N+1 is surjective, so the two-step image equals
    the image of the step out of fill N: a copy of table N when that step
    is injective, and all of table N-1 when it is surjective.
    """
    N = profile.N
    for n in (N - 1, N, N + 1):
        fam.table(n)
    if fam.n_lo > min(0, N - 1) or fam.n_hi < max(0, N + 1):
        raise StepError(
            f"family {fam.n_lo}..{fam.n_hi} does not reach the zero fill; "
            "normalization needs every step between"
        )
    if _step_kind(profile, N) == INJECTIVE:
        source, frame = fam.table(N), N
    else:
        source, frame = fam.table(N - 1), N - 1
    shift = fam.shift_to_zero(frame)
    if frame >= 1:
        two_path = fam.shift_to_zero(1) + sum(
            fam.step_rule(k) for k in range(2, frame + 1)
        )
        if two_path != shift:
            raise StepError("normalization self-check failed: paths disagree")
    entries = {(h, q + shift): v for (h, q), v in source.entries.items()}
    table = KappaTable(
        entries=entries,
        template=fam.template.name,
        N=N,
        n_range=(fam.n_lo, fam.n_hi),
    )
    # the image embeds in every fill of the injective stretch below the
    # transition; a bump ends that stretch, so stop the check there
    floor = fam.n_lo
    for b in profile.bumps:
        if b < N:
            floor = max(floor, b + 1)
    for k in range(floor, N):
        ambient = fam.shift_to_zero(k)
        for (h, q), v in table.entries.items():
            if fam.table(k).dim(h, q - ambient) < v:
                raise StepError(
                    f"stable image exceeds fill {k} at {(h, q)}; offset chain broken"
                )
    return table


def kappa_width(table: KappaTable) -> int:
    """Count of diagonals the invariant occupies."""
    return width(table.as_kh_table())


# ---------------------------------------------------------------------------
# Automatic driver


def kappa_for_template(
    template: TangleTemplate,
    hint: int = 0,
    margin: int = 4,
    threads: int = 1,
    max_generators: int = DEFAULT_MAX_GENERATORS,
    max_fills: int = 120,
) -> KappaRun:
    """Widen a window around ``hint`` until the transition shows, then solve.

    The window starts five fills either side of the hint and each failed
    attempt doubles the extension on the side that lacks evidence, up to
    ``max_fills`` tables in total.  The final family always reaches the
    zero fill so the quantum normalization is anchored.
    """
    lo, hi = hint - 5, hint + 5
    grow_lo = grow_hi = 5
    tables: Dict[int, KhTable] = {}

    def ensure(a: int, b: int):
        missing = [n for n in range(a, b + 1) if n not in tables]
        if len(tables) + len(missing) > max_fills:
            raise BudgetError(
                f"transition not found within {max_fills} fills of {template.name!r}"
            )
        tables.update(
            _compute_tables(template, missing, threads, max_generators)
        )

    while True:
        ensure(lo, hi)
        fam = _family_from_tables(template, tables, lo, hi)
        try:
            profile = find_transition(fam)
        except TransitionError as err:
            if "no injective" in str(err):
                lo -= grow_lo
                grow_lo *= 2
                continue
            if "no surjective" in str(err):
                hi += grow_hi
                grow_hi *= 2
                continue
            raise
        below, above = profile.margin
        if below < margin:
            lo -= grow_lo
            grow_lo *= 2
            continue
        if above < margin:
            hi += grow_hi
            grow_hi *= 2
            continue
        if lo > min(0, profile.N - 1) or hi < max(0, profile.N + 1):
            lo = min(lo, min(0, profile.N - 1))
            hi = max(hi, max(0, profile.N + 1))
            continue
        return KappaRun(fam, profile, compute_kappa(fam, profile))
