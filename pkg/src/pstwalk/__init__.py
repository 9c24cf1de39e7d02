"""Perfect state transfer on matrix-group graphs, certified exactly.

The package builds two kinds of graphs on 2x2 matrix groups over small
finite fields and decides -- in exact arithmetic -- whether the
continuous-time quantum walk on them admits perfect state transfer:

* class-union Cayley graphs on GL(2, q), GU(2, q) and SL(2, q), where
  transfer happens between every vertex ``x`` and its antipode ``-x``
  (:mod:`pstwalk.cayley`);
* a double-coset graph on the cosets GL(2, q^2) / GL(2, q) for
  ``q = 3 (mod 4)``, where transfer happens between each coset ``rH``
  and ``(z r)H`` for a fixed order-4 scalar ``z`` (:mod:`pstwalk.orbital`).

Eigenvalues come from character sums over hand-built character tables
(:mod:`pstwalk.groups`, :mod:`pstwalk.chars`), the transfer criterion is
a mod-4 congruence on the integral spectrum (:mod:`pstwalk.scheme`), and
every certificate can be cross-checked against a numeric walk simulation
at small sizes (:mod:`pstwalk.ctqw`).  The ``pstwalk`` command-line tool
(:mod:`pstwalk.cli`) wraps the whole pipeline and exports reproducible
reports, spectra and edge lists.
"""

from pstwalk.cayley import (
    FAMILY_TAGS,
    SMALL_ORDERS,
    STANDARD,
    CayleyAnalysis,
    CayleyCertificate,
    ConnectionSet,
    SpectrumRow,
    analyze,
    build_connection_set,
    certify,
    closed_form_audit,
    component_count,
    explicit_graph,
    make_family,
    spectrum,
    transfer_pairs,
    variants_for,
)
from pstwalk.chars import CycSum, MultChar, char_sum
from pstwalk.ctqw import TransferReport, integer_rows_with_signs, pst_scan
from pstwalk.gf import FiniteField, FieldTower, make_field, make_tower
from pstwalk.groups import ClassLabel, GLGroup, GUGroup, IrrLabel, Mat2, SLGroup
from pstwalk.orbital import (
    CosetSpace,
    GammaGraph,
    OrbitalCertificate,
    OrbitalRow,
    build_coset_space,
    build_gamma,
    certify_orbital,
    linear_energy_display_audit,
    orbital_spectrum,
)
from pstwalk.scheme import ConjugacyScheme, EigenRow, PSTCertificate, pst_test

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # fields and exact arithmetic
    "FiniteField",
    "FieldTower",
    "make_field",
    "make_tower",
    "CycSum",
    "MultChar",
    "char_sum",
    # groups and labels
    "Mat2",
    "ClassLabel",
    "IrrLabel",
    "GLGroup",
    "GUGroup",
    "SLGroup",
    # Cayley pipeline
    "FAMILY_TAGS",
    "STANDARD",
    "SMALL_ORDERS",
    "make_family",
    "variants_for",
    "ConnectionSet",
    "build_connection_set",
    "SpectrumRow",
    "spectrum",
    "CayleyCertificate",
    "certify",
    "closed_form_audit",
    "CayleyAnalysis",
    "analyze",
    "explicit_graph",
    "transfer_pairs",
    "component_count",
    # double-coset pipeline
    "CosetSpace",
    "GammaGraph",
    "OrbitalRow",
    "OrbitalCertificate",
    "build_coset_space",
    "build_gamma",
    "orbital_spectrum",
    "certify_orbital",
    "linear_energy_display_audit",
    # scheme layer and walk checks
    "ConjugacyScheme",
    "EigenRow",
    "PSTCertificate",
    "pst_test",
    "TransferReport",
    "integer_rows_with_signs",
    "pst_scan",
]
