"""Khovanov homology of tangle filling families and related invariants."""

from __future__ import annotations

from .diagram import (
    BraidWord,
    DiagramError,
    PlanarDiagram,
    braid_closure,
    mirror,
    parse_braid,
    parse_pd,
    plat_closure,
    unknot_diagram,
)
from .kappa import (
    FillingFamily,
    KappaRun,
    KappaTable,
    StepClass,
    StepError,
    TransitionError,
    TransitionProfile,
    classify_steps,
    compute_family,
    compute_kappa,
    find_transition,
    kappa_for_template,
    kappa_width,
)
from .khovanov import (
    BudgetError,
    KhTable,
    jones_from_kh,
    kauffman_jones,
    kh_table,
    kh_table_unreduced,
    width,
)
from .lspace import (
    AlexanderPoly,
    FormalSemigroup,
    alexander,
    determinant,
    formal_semigroup,
    is_actual_semigroup,
    is_lspace_form,
    semigroup_series_elements,
)
from .symmetric import SymmetricPlat, quotient_template, upstairs_diagram
from .tangles import (
    INFINITY,
    TangleTemplate,
    ValidationReport,
    fill,
    mirror_template,
    parse_slope,
    template_from_json,
    template_to_json,
    validate_template,
)

__version__ = "0.1.0"

__all__ = [
    "AlexanderPoly",
    "BraidWord",
    "BudgetError",
    "DiagramError",
    "FillingFamily",
    "FormalSemigroup",
    "INFINITY",
    "KappaRun",
    "KappaTable",
    "KhTable",
    "PlanarDiagram",
    "StepClass",
    "StepError",
    "SymmetricPlat",
    "TangleTemplate",
    "TransitionError",
    "TransitionProfile",
    "ValidationReport",
    "alexander",
    "braid_closure",
    "classify_steps",
    "compute_family",
    "compute_kappa",
    "determinant",
    "fill",
    "find_transition",
    "formal_semigroup",
    "is_actual_semigroup",
    "is_lspace_form",
    "jones_from_kh",
    "kappa_for_template",
    "kappa_width",
    "kauffman_jones",
    "kh_table",
    "kh_table_unreduced",
    "mirror",
    "mirror_template",
    "parse_braid",
    "parse_pd",
    "parse_slope",
    "plat_closure",
    "quotient_template",
    "semigroup_series_elements",
    "template_from_json",
    "template_to_json",
    "unknot_diagram",
    "upstairs_diagram",
    "validate_template",
    "width",
]
