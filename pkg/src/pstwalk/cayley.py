"""Cayley graphs with certified perfect state transfer on matrix groups.

Three families are built, with connection sets that are unions of
conjugacy classes, closed under inversion and avoiding the identity:

* ``gl`` -- the general linear group GL(2, q);
* ``gu`` -- the unitary group GU(2, q);
* ``sl`` -- the special linear group SL(2, q), q an odd prime.

The ``standard`` connection set takes the split class of ``diag(1, -1)``,
every unipotent-type (Jordan) class, and the nonsplit classes whose
eigenvalue norm is 1 or a non-square (GL: the norm to the base field;
GU: the relative norm ``z^(q-1)`` landing in the norm-one torus).  For
SL it is the central involution together with every Jordan class.
GL(2, 3) additionally supports the ``small-orders`` variant: all
non-central classes of elements of order 2, 3, 4 or 6.

Because the connection set is a union of classes, the adjacency matrix
lives in the group's conjugacy-class association scheme: each
irreducible character contributes one exact integer eigenvalue (a
character sum, multiplicity the squared degree).  Perfect state
transfer between every vertex ``x`` and its antipode ``-x`` at time
``pi/g`` is certified by a mod-4 congruence on that spectrum, split by
the character's sign on ``-I``.

Closed-form eigenvalue expressions that were derived by hand while
designing these sets are retained as audit oracles:
:func:`closed_form_audit` recomputes them next to the exact character
sums and reports every disagreement instead of silently preferring
either side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from .chars import CycSum, NonIntegralError, integer_part
from .groups import ClassLabel, GLGroup, GUGroup, IrrLabel, Mat2, SLGroup
from .scheme import ConjugacyScheme, class_sum_eigenvalue

__all__ = [
    "FAMILY_TAGS",
    "STANDARD",
    "SMALL_ORDERS",
    "make_family",
    "variants_for",
    "ConnectionSet",
    "build_connection_set",
    "SpectrumRow",
    "spectrum",
    "spectrum_trace",
    "CayleyCertificate",
    "certify",
    "FormulaCheck",
    "closed_form_audit",
    "CayleyAnalysis",
    "analyze",
    "explicit_graph",
    "transfer_pairs",
    "component_count",
    "sl_order_based_elements",
]

FAMILY_TAGS = ("gl", "gu", "sl")

STANDARD = "standard"
SMALL_ORDERS = "small-orders"
_SMALL_ORDER_SET = frozenset({2, 3, 4, 6})

_FAMILY_CLASSES = {"gl": GLGroup, "gu": GUGroup, "sl": SLGroup}


@lru_cache(maxsize=None)
def make_family(tag: str, q: int):
    """Shared, cached group-family instance for (tag, q)."""
    try:
        cls = _FAMILY_CLASSES[tag]
    except KeyError:
        raise ValueError(
            f"unknown family {tag!r}; expected one of {', '.join(FAMILY_TAGS)}"
        ) from None
    return cls(q)


def variants_for(tag: str, q: int) -> tuple[str, ...]:
    """Connection-set variants available for a family at a given q."""
    if (tag, q) == ("gl", 3):
        return (STANDARD, SMALL_ORDERS)
    return (STANDARD,)


# ---------------------------------------------------------------------------
# connection sets


@dataclass(frozen=True)
class ConnectionSet:
    """A union of conjugacy classes used as a Cayley connection set."""

    family: str
    q: int
    variant: str
    labels: tuple[ClassLabel, ...]
    degree: int


def _gl_standard_labels(fam: GLGroup) -> list[ClassLabel]:
    F, tw = fam.field, fam.tower
    labels = [fam.classify(Mat2(1, 0, 0, F.neg(1)))]
    labels += [lab for lab in fam.classes() if lab.kind == "jordan"]
    for lab in fam.classes():
        if lab.kind != "nonsplit":
            continue
        # keep z when Nm(z) = z^(q+1) is 1 or a non-square in F_q
        nm = tw.norm(lab.params[0])
        if nm == 1 or not F.is_square(nm):
            labels.append(lab)
    return labels


def _gu_standard_labels(fam: GUGroup) -> list[ClassLabel]:
    F, tw = fam.field, fam.tower
    n = fam.root_order
    labels = [fam.classify(Mat2(1, 0, 0, F.neg(1)))]
    labels += [lab for lab in fam.classes() if lab.kind == "jordan"]
    keep = frozenset(tw.E_nonsquares()) | {1}
    for lab in fam.classes():
        if lab.kind != "nonsplit":
            continue
        # keep z when the relative norm z^(q-1) is 1 or a non-square in E
        dz = F.dlog(lab.params[0])
        if F.exp[(dz * (fam.q - 1)) % n] in keep:
            labels.append(lab)
    return labels


def _sl_standard_labels(fam: SLGroup) -> list[ClassLabel]:
    labels = [fam.central_involution_class()]
    labels += [lab for lab in fam.classes() if lab.kind == "jordan"]
    return labels


def _small_order_labels(fam) -> list[ClassLabel]:
    return [
        lab
        for lab in fam.classes()
        if lab.kind != "central"
        and fam.element_order(fam.class_rep(lab)) in _SMALL_ORDER_SET
    ]


def build_connection_set(family, variant: str = STANDARD) -> ConnectionSet:
    """Assemble the connection set for a family instance.

    Raises ``ValueError`` for a variant the family/q pair does not
    support.  The result is checked to be identity-free and closed
    under inversion (a requirement for an undirected Cayley graph).
    """
    tag = family.family
    if variant not in variants_for(tag, family.q):
        raise ValueError(
            f"unsupported variant {variant!r} for {tag}(2,{family.q}); "
            f"available: {', '.join(variants_for(tag, family.q))}"
        )
    if variant == SMALL_ORDERS:
        labels = _small_order_labels(family)
    elif tag == "gl":
        labels = _gl_standard_labels(family)
    elif tag == "gu":
        labels = _gu_standard_labels(family)
    else:
        labels = _sl_standard_labels(family)

    label_set = frozenset(labels)
    if len(label_set) != len(labels):
        raise RuntimeError("connection set lists a class twice")
    ident = family.classify(family.identity())
    if ident in label_set:
        raise RuntimeError("connection set contains the identity class")
    for lab in labels:
        if family.classify(family.inv(family.class_rep(lab))) not in label_set:
            raise RuntimeError(f"connection set is not inverse-closed at {lab}")

    degree = sum(family.class_size(lab) for lab in labels)
    return ConnectionSet(tag, family.q, variant, tuple(labels), degree)


# ---------------------------------------------------------------------------
# exact spectra


class SpectrumRow(NamedTuple):
    """One eigenvalue of a class-union Cayley graph.

    ``sign`` is the character's value on the central involution divided
    by its degree (the side of the transfer congruence the eigenvalue
    must land on); ``multiplicity`` is the squared character degree.
    """

    irr: IrrLabel
    theta: int
    sign: int
    multiplicity: int


def spectrum(family, conn: ConnectionSet) -> list[SpectrumRow]:
    """Exact integer spectrum, one row per irreducible character."""
    rows = []
    for irr in family.irreducibles():
        try:
            theta = class_sum_eigenvalue(family, irr, conn.labels)
        except NonIntegralError as exc:
            raise NonIntegralError(
                f"character {_render_irr(irr)} of {family.family}(2,{family.q}): {exc}"
            ) from exc
        rows.append(
            SpectrumRow(irr, theta, family.involution_sign(irr), family.degree(irr) ** 2)
        )
    return rows


def spectrum_trace(rows: Sequence[SpectrumRow]) -> int:
    """Sum of eigenvalues weighted by multiplicity (zero for a loopless graph)."""
    return sum(r.theta * r.multiplicity for r in rows)


def _render_irr(irr: IrrLabel | None) -> str:
    if irr is None:
        return "unlabeled character"
    return f"{irr.kind}({', '.join(map(str, irr.params))})"


# ---------------------------------------------------------------------------
# certification


@dataclass(frozen=True)
class CayleyCertificate:
    """Spectral certificate for antipodal state transfer on a Cayley graph.

    ``ok`` records whether every eigenvalue is congruent mod 4 to
    ``residue`` on the +1 side and ``residue + 2`` on the -1 side; when
    it holds, the continuous-time walk has perfect state transfer
    between ``x`` and ``-x`` for every vertex ``x`` at ``time = pi/gap``.
    ``connected`` reports whether the top eigenvalue is simple.
    ``fidelity_deviation`` is filled in later by a numeric walk check,
    when one is run.
    """

    family: str
    q: int
    variant: str
    degree: int
    ok: bool
    reason: str
    integral: bool = True
    residue: int | None = None
    gap: int | None = None
    time: float | None = None
    connected: bool | None = None
    transfer_rule: str = "x <-> -x for every vertex x"
    fidelity_deviation: float | None = None


def certify(conn: ConnectionSet, rows: Sequence[SpectrumRow]) -> CayleyCertificate:
    """Run the mod-4 transfer test on an exact spectrum."""
    base = dict(family=conn.family, q=conn.q, variant=conn.variant, degree=conn.degree)
    theta0 = max(r.theta for r in rows)
    top_mult = sum(r.multiplicity for r in rows if r.theta == theta0)
    connected = top_mult == 1
    gap = math.gcd(*(theta0 - r.theta for r in rows))
    if gap == 0:
        return CayleyCertificate(
            ok=False,
            reason="all eigenvalues are equal; there is no walk",
            connected=connected,
            **base,
        )
    time = math.pi / gap
    a = theta0 % 4
    for r in rows:
        want = a if r.sign == 1 else (a + 2) % 4
        if r.theta % 4 != want:
            side = "+1" if r.sign == 1 else "-1"
            return CayleyCertificate(
                ok=False,
                reason=(
                    f"eigenvalue {r.theta} of {_render_irr(r.irr)} on the {side} side "
                    f"is {r.theta % 4} mod 4, expected {want}"
                ),
                residue=a,
                gap=gap,
                time=time,
                connected=connected,
                **base,
            )
    return CayleyCertificate(
        ok=True,
        reason=(
            f"all eigenvalues are congruent to {a} mod 4 on the +1 side and "
            f"{(a + 2) % 4} on the -1 side; transfer time pi/{gap}"
        ),
        residue=a,
        gap=gap,
        time=time,
        connected=connected,
        **base,
    )


# ---------------------------------------------------------------------------
# hand-derived closed forms, kept as audit oracles


class FormulaCheck(NamedTuple):
    """One comparison between a hand-derived closed form and the exact value."""

    family: str
    q: int
    formula: str
    row: str
    hand_value: int
    exact_value: int
    agrees: bool


def _gl_hand_value(q: int, irr: IrrLabel) -> int:
    kind = irr.kind
    if kind in ("linear", "steinberg"):
        j = irr.params[0]
        sgn = -1 if j % 2 else 1
        trivial = j == 0
        quadratic = j == (q - 1) // 2
        if kind == "linear":
            if trivial:
                return (
                    q * (q + 1)
                    + (q * q - 1) * (q - 1)
                    + q * (q - 1) ** 2 // 2
                    + q * (q + 1) * (q - 1) ** 2 // 4
                )
            if quadratic:
                return (
                    q * (q + 1) * sgn
                    + (q * q - 1) * (q - 1)
                    + q * (q - 1) ** 2 // 2
                    - q * (q + 1) * (q - 1) ** 2 // 4
                )
            return q * (q + 1) * sgn + q * (q - 1) ** 2 // 2
        if trivial:
            return (q + 1) + (q - 1) ** 2 // 2 + (q + 1) * (q - 1) ** 2 // 4
        if quadratic:
            return (q + 1) * sgn + (q - 1) ** 2 // 2 - (q + 1) * (q - 1) ** 2 // 4
        return (q + 1) * sgn + (q - 1) ** 2 // 2
    if kind == "cuspidal":
        m = irr.params[0]
        if m % 2:
            return 0
        if m % (q - 1) == 0:
            return -(q * q - 1) + 2 * q
        return 2 * q
    i, j = irr.params
    base = q * ((-1) ** i + (-1) ** j)
    return base + (q - 1) ** 2 if (i + j) % (q - 1) == 0 else base


def _gu_hand_value(q: int, irr: IrrLabel) -> int:
    kind = irr.kind
    if kind in ("linear", "steinberg"):
        j = irr.params[0]
        sgn = -1 if j % 2 else 1
        trivial = j == 0
        quadratic = j == (q + 1) // 2
        if kind == "linear":
            if trivial:
                return (
                    q * (q - 1)
                    + (q * q - 1) * (q + 1)
                    + q * (q + 1) * (q - 3) // 2
                    + q * (q + 1) * (q - 3) * (q - 1) // 4
                )
            if quadratic:
                return (
                    q * (q - 1) * sgn
                    + (q * q - 1) * (q + 1)
                    + q * (q + 1) * (q - 3) // 2
                    - q * (q + 1) * (q - 3) * (q - 1) // 4
                )
            return q * (q - 1) * sgn + q * (q + 1) * (q - 3) // 2
        if trivial:
            return (q - 1) + (q + 1) * (q - 3) // 2 + (q + 1) * (q - 3) * (q - 1) // 4
        if quadratic:
            return (q - 1) * sgn + (q + 1) * (q - 3) // 2 - (q + 1) * (q - 3) * (q - 1) // 4
        return (q - 1) * sgn + (q + 1) * (q - 3) // 2
    if kind == "cuspidal":
        m = irr.params[0]
        if m % 2:
            return 0
        if m % (q + 1) == 0:
            return (q * q - 1) - 2 * q
        return -2 * q
    i, j = irr.params
    base = -q * ((-1) ** i + (-1) ** j)
    return base - (q + 1) ** 2 if (i + j) % (q + 1) == 0 else base


def _sl_ratio_value(family: SLGroup, irr: IrrLabel) -> int:
    """Reconstruct the eigenvalue from the central-involution ratio.

    For the SL connection set the eigenvalue decomposes as
    ``chi(-I)/chi(1) + (q^2 - 1)/(2 chi(1)) * r`` where ``r`` sums the
    character over the four Jordan classes.  The second term is always
    divisible by 4, which is what forces the transfer congruence.
    """
    q = family.q
    d = family.degree(irr)
    ratio = family.involution_sign(irr)
    r = CycSum.zero(family.root_order)
    for lab in family.classes():
        if lab.kind == "jordan":
            r = r + family.char_value_full(irr, lab)
    r_int = integer_part(r)
    num = (q * q - 1) * r_int
    if num % (2 * d):
        raise NonIntegralError(
            f"Jordan character sum of {_render_irr(irr)} is not divisible by 2*degree"
        )
    return ratio + num // (2 * d)


def closed_form_audit(family, conn: ConnectionSet, rows: Sequence[SpectrumRow]) -> list[FormulaCheck]:
    """Compare hand-derived closed forms against the exact spectrum.

    Only the ``standard`` connection sets have closed forms.  Every row
    is reported, agreeing or not; disagreements mean the retained hand
    derivation is wrong for that case, never that the exact character
    sum is in doubt.
    """
    if conn.variant != STANDARD:
        return []
    tag, q = family.family, family.q
    out = []
    for row in rows:
        if tag == "gl":
            hand = _gl_hand_value(q, row.irr)
            formula = row.irr.kind
        elif tag == "gu":
            hand = _gu_hand_value(q, row.irr)
            formula = row.irr.kind
        else:
            hand = _sl_ratio_value(family, row.irr)
            formula = "involution-ratio"
        out.append(
            FormulaCheck(
                tag, q, formula, _render_irr(row.irr), hand, row.theta, hand == row.theta
            )
        )
    return out


# ---------------------------------------------------------------------------
# one-call analysis


class CayleyAnalysis(NamedTuple):
    family: object
    connection: ConnectionSet
    rows: list[SpectrumRow]
    certificate: CayleyCertificate
    audit: list[FormulaCheck]


def analyze(tag: str, q: int, variant: str = STANDARD) -> CayleyAnalysis:
    """Build the connection set, exact spectrum, certificate and audit."""
    family = make_family(tag, q)
    conn = build_connection_set(family, variant)
    rows = spectrum(family, conn)
    cert = certify(conn, rows)
    audit = closed_form_audit(family, conn, rows)
    return CayleyAnalysis(family, conn, rows, cert, audit)


# ---------------------------------------------------------------------------
# explicit graphs (small q)


def explicit_graph(
    family, conn: ConnectionSet, bound: int = 10_000
) -> tuple[np.ndarray, ConjugacyScheme]:
    """Adjacency matrix over an explicit group enumeration.

    Refuses groups larger than ``bound`` elements; the scheme object is
    returned alongside so callers can map vertices back to elements.
    """
    if family.order > bound:
        raise ValueError(
            f"group order {family.order} exceeds the enumeration bound {bound}"
        )
    sch = ConjugacyScheme(family)
    return sch.adjacency(conn.labels), sch


def transfer_pairs(sch: ConjugacyScheme) -> list[tuple[int, int]]:
    """Vertex index pairs (x, -x), each unordered pair listed once."""
    fam = sch.family
    t = fam.central_involution()
    pairs = []
    for i, g in enumerate(sch.elements):
        j = sch.index[fam.mul(t, g)]
        if i < j:
            pairs.append((i, j))
    return pairs


def component_count(adjacency: np.ndarray) -> int:
    """Number of connected components, by depth-first search."""
    a = np.asarray(adjacency)
    n = a.shape[0]
    seen = np.zeros(n, dtype=bool)
    count = 0
    for start in range(n):
        if seen[start]:
            continue
        count += 1
        seen[start] = True
        stack = [start]
        while stack:
            v = stack.pop()
            for w in np.flatnonzero(a[v]):
                if not seen[w]:
                    seen[w] = True
                    stack.append(int(w))
    return count


# ---------------------------------------------------------------------------
# independent membership description for the SL set


def sl_order_based_elements(family: SLGroup) -> frozenset:
    """The SL connection set described by element orders alone.

    The class-based set (central involution plus the four Jordan
    classes) should coincide with "the central involution together with
    every element of order p or 2p"; this enumerates the latter so the
    coincidence can be checked rather than assumed.
    """
    p = family.p
    out = {family.central_involution()}
    for m in family.enumerate_group():
        o = family.element_order(m)
        if o == p or o == 2 * p:
            out.add(m)
    return frozenset(out)
