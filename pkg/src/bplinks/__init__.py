"""Exact topological invariants of Brieskorn-Pham links.

The package computes, in exact arithmetic: Milnor numbers and weights,
Milnor fibre signatures (three independent routes), homology of cyclic
branched covers via integer Smith normal form, orders of the groups
bP_{4m} of homotopy spheres bounding parallelizable manifolds, and the
diffeomorphism-type counts D_n(k) of the distinguished link families,
reproducing the published tables for dimensions 7 and 11 bit for bit.
"""

__version__ = "0.1.0"

from .errors import (
    AmbiguousRounding,
    BudgetExceeded,
    IncomparableLinks,
    InvalidExponent,
    LinkInvariantError,
    NotCommonMultiple,
    NotDivisibleBy8,
    NotFiniteOrder,
    OddDimension,
)
from .exact_arith import (
    CertifiedReal,
    Rational,
    bernoulli,
    bernoulli_modern,
    certified_integer,
    cot_pi,
    numerator_of,
    round_to_integer,
)
from .link_model import (
    BrieskornLink,
    Family,
    FamilySpec,
    build_family,
    family_exponents,
    is_ricci_positive,
    make_link,
    milnor_number,
    stabilize,
)
from .signature import (
    Method,
    SignatureReport,
    compute_signature,
    residue_distribution,
    signature_dp,
    signature_lattice,
    signature_zagier,
    t_pair,
    tau,
    tau_via_signatures,
)
from .monodromy import (
    FgAbelianGroup,
    MonodromyOperator,
    cover_homology,
    link_rank,
    milnor_lattice,
    monodromy_period,
    smith_normal_decomposition,
    smith_normal_form,
)
from .classify import (
    BpOrder,
    ClassificationRecord,
    KervaireCase,
    TableData,
    TableRow,
    bp_order,
    bp_order_4m_plus_2,
    classification_record,
    diffeo_count,
    diffeo_offset,
    table_emit,
)
from .verification import CriterionResult, VerifyOptions, run_all, run_criterion

__all__ = [
    "__version__",
    "AmbiguousRounding",
    "BpOrder",
    "BrieskornLink",
    "BudgetExceeded",
    "CertifiedReal",
    "ClassificationRecord",
    "CriterionResult",
    "Family",
    "FamilySpec",
    "FgAbelianGroup",
    "IncomparableLinks",
    "InvalidExponent",
    "KervaireCase",
    "LinkInvariantError",
    "Method",
    "MonodromyOperator",
    "NotCommonMultiple",
    "NotDivisibleBy8",
    "NotFiniteOrder",
    "OddDimension",
    "Rational",
    "SignatureReport",
    "TableData",
    "TableRow",
    "VerifyOptions",
    "bernoulli",
    "bernoulli_modern",
    "bp_order",
    "bp_order_4m_plus_2",
    "build_family",
    "certified_integer",
    "classification_record",
    "compute_signature",
    "cot_pi",
    "cover_homology",
    "diffeo_count",
    "diffeo_offset",
    "family_exponents",
    "is_ricci_positive",
    "link_rank",
    "make_link",
    "milnor_lattice",
    "milnor_number",
    "monodromy_period",
    "numerator_of",
    "residue_distribution",
    "round_to_integer",
    "run_all",
    "run_criterion",
    "signature_dp",
    "signature_lattice",
    "signature_zagier",
    "smith_normal_decomposition",
    "smith_normal_form",
    "stabilize",
    "t_pair",
    "table_emit",
    "tau",
    "tau_via_signatures",
]
