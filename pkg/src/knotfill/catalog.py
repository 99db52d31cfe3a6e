"""Built-in catalog of named diagrams, templates, and their pinned fixtures.

Entries ship as JSON files next to this module (``data/``).  Each entry
names a knot or a tangle template, optionally points at its twist-family
template, and carries a list of fixtures: quantities whose values are pinned
either because they were computed here once and frozen (``computed``), taken
from the source tables the catalog reproduces (``reported``), or true by
unwinding definitions (``definition``).  ``selftest`` recomputes the cheap
fixtures on every run; the expensive family fixtures are marked ``deep``.

Users can overlay their own entries — typically bare PD codes exported from
link tables — by pointing ``KF_CATALOG_DIR`` at a directory of JSON files.
A file may hold a full entry object or a simple ``{"name": [[pd]...]}``
mapping.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Dict, Optional, Tuple

from .diagram import PlanarDiagram, braid_closure, mirror, parse_braid, parse_pd
from .tangles import TangleTemplate, mirror_template, template_from_json, template_to_json

__all__ = [
    "CatalogEntry",
    "CatalogError",
    "Fixture",
    "entry_from_json",
    "entry_to_json",
    "get_entry",
    "load_catalog",
    "read_pd_table",
    "resolve_template",
]

CATALOG_FORMAT = "kf-1"
ENV_CATALOG_DIR = "KF_CATALOG_DIR"

PROVENANCES = ("reported", "computed", "definition")


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class Fixture:
    """One pinned quantity: what it is, its value, and where it came from."""

    quantity: str
    value: object
    provenance: str
    deep: bool = False

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise CatalogError(
                f"provenance {self.provenance!r} not in {PROVENANCES}"
            )


@dataclass(frozen=True)
class CatalogEntry:
    """A named object: a diagram source, an optional template, fixtures.

    ``mirror`` flips every diagram produced from the entry (and the template,
    including the sign of filling slopes); it is fixed once per entry so that
    homological gradings match the pinned tables.  ``template_ref`` lets a
    knot entry borrow the template of its own twist family.
    """

    name: str
    summary: str = ""
    braid: Optional[str] = None
    pd: Optional[dict] = None
    template: Optional[TangleTemplate] = None
    template_ref: Optional[str] = None
    mirror: bool = False
    transition_hint: Optional[int] = None
    fixtures: Tuple[Fixture, ...] = ()

    def has_diagram(self) -> bool:
        return self.braid is not None or self.pd is not None

    def diagram(self) -> PlanarDiagram:
        if self.braid is not None:
            d = braid_closure(parse_braid(self.braid), name=self.name)
        elif self.pd is not None:
            d = parse_pd({"name": self.name, **self.pd})
        else:
            raise CatalogError(f"entry {self.name!r} has no diagram source")
        return mirror(d) if self.mirror else d

    def fixture(self, quantity: str) -> Optional[Fixture]:
        for f in self.fixtures:
            if f.quantity == quantity:
                return f
        return None


def entry_to_json(entry: CatalogEntry) -> dict:
    out: dict = {"format": CATALOG_FORMAT, "name": entry.name}
    if entry.summary:
        out["summary"] = entry.summary
    if entry.braid is not None:
        out["braid"] = entry.braid
    if entry.pd is not None:
        out["pd"] = entry.pd
    if entry.template is not None:
        out["template"] = template_to_json(entry.template)
    if entry.template_ref is not None:
        out["template_ref"] = entry.template_ref
    if entry.mirror:
        out["mirror"] = True
    if entry.transition_hint is not None:
        out["transition_hint"] = entry.transition_hint
    if entry.fixtures:
        out["fixtures"] = [
            {
                "quantity": f.quantity,
                "value": f.value,
                "provenance": f.provenance,
                **({"deep": True} if f.deep else {}),
            }
            for f in entry.fixtures
        ]
    return out


def entry_from_json(data: dict) -> CatalogEntry:
    if data.get("format") != CATALOG_FORMAT:
        raise CatalogError(f"not a {CATALOG_FORMAT} catalog entry: {data.get('format')!r}")
    if "name" not in data:
        raise CatalogError("catalog entry needs a name")
    template = None
    if "template" in data:
        template = template_from_json(data["template"])
    fixtures = tuple(
        Fixture(
            quantity=f["quantity"],
            value=f["value"],
            provenance=f["provenance"],
            deep=bool(f.get("deep", False)),
        )
        for f in data.get("fixtures", ())
    )
    return CatalogEntry(
        name=data["name"],
        summary=data.get("summary", ""),
        braid=data.get("braid"),
        pd=data.get("pd"),
        template=template,
        template_ref=data.get("template_ref"),
        mirror=bool(data.get("mirror", False)),
        transition_hint=data.get("transition_hint"),
        fixtures=fixtures,
    )


def read_pd_table(path: Path) -> Dict[str, CatalogEntry]:
    """Read a file of named PD codes: ``{"L14n24290": [[1,2,3,4], ...]}``."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise CatalogError(f"{path}: expected a JSON object")
    out: Dict[str, CatalogEntry] = {}
    for name, code in data.items():
        if name == "format":
            continue
        out[name] = CatalogEntry(name=name, pd={"pd": code})
    return out


def _builtin_entries() -> Dict[str, CatalogEntry]:
    out: Dict[str, CatalogEntry] = {}
    root = resources.files("knotfill").joinpath("data")
    for item in sorted(root.iterdir(), key=lambda p: p.name):
        if not item.name.endswith(".json"):
            continue
        entry = entry_from_json(json.loads(item.read_text(encoding="utf-8")))
        out[entry.name] = entry
    return out


def _external_entries(directory: Path) -> Dict[str, CatalogEntry]:
    out: Dict[str, CatalogEntry] = {}
    for path in sorted(directory.glob("*.json")):
        data = json.loads(path.read_text(encoding="utf-8"))
        if isinstance(data, dict) and data.get("format") == CATALOG_FORMAT:
            entry = entry_from_json(data)
            out[entry.name] = entry
        else:
            out.update(read_pd_table(path))
    return out


def load_catalog(extra_dir: Optional[str] = None) -> Dict[str, CatalogEntry]:
    """Built-in entries, overlaid with ``KF_CATALOG_DIR`` (or ``extra_dir``)."""
    catalog = _builtin_entries()
    directory = extra_dir if extra_dir is not None else os.environ.get(ENV_CATALOG_DIR)
    if directory:
        p = Path(directory)
        if not p.is_dir():
            raise CatalogError(f"catalog directory {directory!r} does not exist")
        catalog.update(_external_entries(p))
    return catalog


def get_entry(name: str, catalog: Optional[Dict[str, CatalogEntry]] = None) -> CatalogEntry:
    catalog = catalog if catalog is not None else load_catalog()
    try:
        return catalog[name]
    except KeyError:
        known = ", ".join(sorted(catalog))
        raise CatalogError(f"no catalog entry {name!r} (known: {known})") from None


def resolve_template(
    entry: CatalogEntry, catalog: Optional[Dict[str, CatalogEntry]] = None
) -> TangleTemplate:
    """The entry's template with its mirror convention applied."""
    seen = {entry.name}
    cur = entry
    while cur.template is None:
        if cur.template_ref is None:
            raise CatalogError(f"entry {entry.name!r} has no template")
        if cur.template_ref in seen:
            raise CatalogError(f"template_ref cycle at {cur.template_ref!r}")
        seen.add(cur.template_ref)
        cur = get_entry(cur.template_ref, catalog)
    t = cur.template
    # the family convention belongs to the entry that owns the template
    return mirror_template(t) if cur.mirror else t
