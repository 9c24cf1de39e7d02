"""Tests for the GL(2, q^2) / GL(2, q) double-coset graph layer.

Frozen tables below were derived independently before implementation:
eigenvalue rows via hand evaluation of the transversal character sums,
counts via the group-order arithmetic, and the audit rows by evaluating
the hand-derived closed form exactly as printed.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np
import pytest

from pstwalk.chars import CycSum, integer_part
from pstwalk.groups import IrrLabel, Mat2
from pstwalk import orbital
from pstwalk.ctqw import pst_scan
from pstwalk.orbital import (
    EXPLICIT_LIMIT,
    build_coset_space,
    build_gamma,
    certify_orbital,
    coset_char_sum,
    coset_irreducibles,
    double_coset_of,
    h_multiplicity,
    linear_energy_display_audit,
    m_theta,
    orbital_spectrum,
    p_theta_trace,
    spectrum_trace,
)

# ---------------------------------------------------------------------------
# frozen expectations

# (kind, params) -> (energy, sign, theta, multiplicity) at q = 3
Q3_ROWS = {
    ("linear", (0,)): (72, 1, 73, 1),
    ("linear", (2,)): (0, 1, 1, 1),
    ("linear", (4,)): (-24, 1, -23, 1),
    ("linear", (6,)): (0, 1, 1, 1),
    ("steinberg", (0,)): (12, 1, 13, 9),
    ("steinberg", (2,)): (0, 1, 1, 9),
    ("steinberg", (4,)): (-4, 1, -3, 9),
    ("steinberg", (6,)): (0, 1, 1, 9),
    ("principal", (0, 2)): (0, -1, -1, 10),
    ("principal", (0, 4)): (0, 1, 1, 10),
    ("principal", (0, 6)): (0, -1, -1, 10),
    ("principal", (2, 4)): (0, -1, -1, 10),
    ("principal", (2, 6)): (-12, 1, -11, 10),
    ("principal", (4, 6)): (0, -1, -1, 10),
    ("principal", (1, 5)): (0, -1, -1, 10),
    ("principal", (3, 7)): (0, -1, -1, 10),
}

# row -> (printed closed-form value, exact energy) at q = 3
Q3_DISPLAY_AUDIT = {
    "linear(0)": (336, 72),
    "linear(2)": (0, 0),
    "linear(4)": (-48, -24),
    "linear(6)": (0, 0),
}

Q3_DEGREE = 73
Q3_COSETS = 120
Q3_EDGES = 4380
Q3_DOUBLE_COSETS = 16

Q7_DEGREE = 1569
Q7_ROWS = 64
Q7_COSETS = 2800


@lru_cache(maxsize=None)
def space3():
    return build_coset_space(3)


@lru_cache(maxsize=None)
def graph3():
    return build_gamma(space3())


@lru_cache(maxsize=None)
def rows_for(q):
    return orbital_spectrum(q)


@lru_cache(maxsize=None)
def invariant_fibers():
    """Group elements fibered by the Frobenius double-coset invariant."""
    sp = space3()
    fibers = {}
    for x in sp.elements:
        fibers.setdefault(double_coset_of(sp, x), []).append(x)
    return fibers


def diag(sp, a, b):
    return Mat2(sp.rep_set[a], 0, 0, sp.rep_set[b])


def rows_by_label(rows):
    return {(r.irr.kind, r.irr.params): (r.energy, r.sign, r.theta, r.multiplicity) for r in rows}


# ---------------------------------------------------------------------------
# coset space


def test_coset_space_counts():
    sp = space3()
    assert sp.explicit
    assert sp.n_cosets == Q3_COSETS
    assert len(sp.reps) == Q3_COSETS
    assert sp.hsize == 48
    assert len(sp.h_elements) == 48
    assert len(sp.elements) == 5760


def test_coset_space_vertex_anchors():
    sp = space3()
    assert sp.coset_index[sp.group.identity()] == sp.h_vertex
    assert sp.coset_index[sp.z] == sp.z_vertex
    assert sp.h_vertex != sp.z_vertex


def test_zeta_is_smallest_order_four_scalar():
    sp = space3()
    F = sp.group.field
    assert F.order(sp.zeta) == 4
    assert F.dlog(sp.zeta) == (sp.group.q - 1) // 4
    square = F.mul(sp.zeta, sp.zeta)
    assert square == F.neg(1)


def test_z_squared_lies_in_h():
    sp = space3()
    zz = sp.group.mul(sp.z, sp.z)
    assert sp.in_h(zz)
    assert not sp.in_h(sp.z)


def test_z_normalizes_h():
    sp = space3()
    G = sp.group
    zinv = G.inv(sp.z)
    conjugated = {G.mul(G.mul(sp.z, h), zinv) for h in sp.h_elements}
    assert conjugated == set(sp.h_elements)


def test_representatives_pairwise_distinct_cosets():
    sp = space3()
    G = sp.group
    inverses = [G.inv(r) for r in sp.reps]
    for i, r_inv in enumerate(inverses):
        for j in range(i + 1, len(sp.reps)):
            assert not sp.in_h(G.mul(r_inv, sp.reps[j]))


def test_rep_set_is_subfield_transversal():
    sp = space3()
    F = sp.group.field
    q = sp.q
    assert len(sp.rep_set) == q + 1
    seen = {F.dlog(x) % (q + 1) for x in sp.rep_set}
    assert seen == set(range(q + 1))


@pytest.mark.parametrize("q", [1, 5, 9, 13])
def test_non_admissible_q_rejected(q):
    with pytest.raises(ValueError, match=r"q = 3 \(mod 4\)"):
        build_coset_space(q)


def test_larger_q_runs_character_sum_only():
    sp = build_coset_space(7)
    assert not sp.explicit
    assert sp.reps is None and sp.elements is None
    assert sp.n_cosets == Q7_COSETS
    with pytest.raises(ValueError, match="character-sum-only"):
        build_gamma(sp)


# ---------------------------------------------------------------------------
# the Frobenius double-coset invariant


def test_invariant_of_subgroup_elements_is_identity_class():
    sp = space3()
    G = sp.group
    identity_class = G.classify(G.identity())
    for h in sp.h_elements[::7]:
        assert double_coset_of(sp, h) == identity_class


def test_invariant_of_z_is_class_of_minus_identity():
    sp = space3()
    F = sp.group.field
    m = F.neg(1)
    assert double_coset_of(sp, sp.z) == sp.group.classify(Mat2(m, 0, 0, m))


def test_invariant_of_diagonal_reps():
    sp = space3()
    G, F = sp.group, sp.group.field
    for a, b in itertools.combinations(range(4), 2):
        m = diag(sp, a, b)
        x, y = m.a, m.d
        image = Mat2(
            F.div(F.frobenius(x, 1), x), 0, 0, F.div(F.frobenius(y, 1), y)
        )
        assert double_coset_of(sp, m) == G.classify(image)


def test_invariant_partition_matches_literal_double_cosets():
    """Full 5760-element check: fibers of the invariant are literal HxH."""
    sp = space3()
    fibers = invariant_fibers()
    assert sum(len(v) for v in fibers.values()) == 5760
    for members in fibers.values():
        assert orbital._double_coset(sp, members[0]) == frozenset(members)


def test_rank_equals_number_of_irreducibles():
    assert len(invariant_fibers()) == Q3_DOUBLE_COSETS
    assert len(coset_irreducibles(3)) == Q3_DOUBLE_COSETS


# ---------------------------------------------------------------------------
# the irreducibles of the coset module


def test_coset_irreducibles_q3_frozen():
    labels = [(irr.kind, irr.params) for irr in coset_irreducibles(3)]
    assert labels == [
        ("linear", (0,)),
        ("linear", (2,)),
        ("linear", (4,)),
        ("linear", (6,)),
        ("steinberg", (0,)),
        ("steinberg", (2,)),
        ("steinberg", (4,)),
        ("steinberg", (6,)),
        ("principal", (0, 2)),
        ("principal", (0, 4)),
        ("principal", (0, 6)),
        ("principal", (2, 4)),
        ("principal", (2, 6)),
        ("principal", (4, 6)),
        ("principal", (1, 5)),
        ("principal", (3, 7)),
    ]


def test_coset_irreducibles_are_group_irreducibles():
    sp = space3()
    all_irr = set(sp.group.irreducibles())
    assert set(coset_irreducibles(3)) <= all_irr


def test_component_dimensions_sum_to_coset_count():
    sp = space3()
    assert sum(sp.group.degree(irr) for irr in coset_irreducibles(3)) == Q3_COSETS
    sp7 = build_coset_space(7)
    assert sum(sp7.group.degree(irr) for irr in coset_irreducibles(7)) == Q7_COSETS


def test_h_multiplicity_matches_literal_inner_products():
    """All 80 irreducibles of GL(2,9): restriction to H is multiplicity free,
    the constituents are exactly the tabulated ones, and no cuspidal
    character appears."""
    sp = space3()
    G = sp.group
    roster = set(coset_irreducibles(3))
    h_classes = [G.classify(h) for h in sp.h_elements]
    for irr in G.irreducibles():
        acc = CycSum.zero(G.root_order)
        for cls in h_classes:
            acc = acc + G.char_value(irr, cls)
        total = integer_part(acc)
        assert total % sp.hsize == 0
        literal = total // sp.hsize
        assert literal == h_multiplicity(3, irr)
        assert literal in (0, 1)
        assert (irr in roster) == (literal == 1)
        if irr.kind == "cuspidal":
            assert literal == 0


# ---------------------------------------------------------------------------
# the summed induced representation


def test_m_theta_trivial_entries():
    sp = space3()
    M = m_theta(sp, (0, 0))
    # both points on the subfield line: the triangular-subgroup order
    assert integer_part(M[0][0]) == 12
    assert integer_part(M[1][0]) == 12
    oo = sp.group.field.q
    assert integer_part(M[oo][0]) == 12
    # mixed pairs vanish
    outside = [x for x in range(oo) if not sp.in_subfield(x)]
    assert integer_part(M[0][outside[0]]) == 0
    assert integer_part(M[outside[0]][oo]) == 0
    # both points outside: the torus order
    assert integer_part(M[outside[0]][outside[1]]) == 8


def test_m_theta_nontrivial_blocks_vanish_off_kernel():
    sp = space3()
    M = m_theta(sp, (1, 2))  # neither kernel condition holds
    size = sp.group.field.q + 1
    for row in range(size):
        for col in range(size):
            assert integer_part(M[row][col]) == 0


def test_trace_of_m_theta_reproduces_inner_product_display():
    """<1, I[theta]|_H> from Trace(M_theta)/|H|: 2 / 1 / 1 / 0 by case."""
    sp = space3()
    expected = {
        (0, 0): 2,  # equal pair, trivial on the subfield units
        (2, 2): 2,
        (2, 4): 1,  # distinct pair, both trivial on the subfield units
        (0, 6): 1,
        (1, 5): 1,  # conjugate-inverse pair
        (3, 7): 1,
        (0, 1): 0,
        (1, 2): 0,
        (0, 3): 0,
    }
    for theta, want in expected.items():
        M = m_theta(sp, theta)
        tr = CycSum.zero(sp.group.root_order)
        for a in range(len(M)):
            tr = tr + M[a][a]
        value = integer_part(tr)
        assert value % sp.hsize == 0
        assert value // sp.hsize == want, theta


def test_trace_identity_against_literal_monomial_sums():
    """Tr(P(g) M_theta) equals the literal sum of Tr(P(gh)) over h in H."""
    sp = space3()
    G = sp.group
    oo = G.field.q
    samples_g = [sp.reps[17], sp.reps[63], diag(sp, 1, 2), sp.z]
    for theta in [(0, 0), (2, 4), (1, 5), (3, 3), (1, 2)]:
        M = m_theta(sp, theta)
        for g in samples_g:
            product = CycSum.zero(G.root_order)
            for alpha in range(oo + 1):
                sigma, t1, t2 = orbital._coset_action(sp, g, alpha)
                product = product + orbital._cocycle_value(sp, theta, t1, t2) * M[alpha][sigma]
            literal = CycSum.zero(G.root_order)
            for h in sp.h_elements:
                literal = literal + p_theta_trace(sp, theta, G.mul(g, h))
            assert (product - literal).is_zero(), (theta, g)


def test_p_theta_trace_at_identity_is_line_size():
    sp = space3()
    assert integer_part(p_theta_trace(sp, (0, 0), sp.group.identity())) == 10


# ---------------------------------------------------------------------------
# coset character sums


def test_coset_sums_match_literal_character_table_sums():
    """Closed forms against literal sums over all 48 coset elements, for
    every tabulated character and every supported coset at q = 3."""
    sp = space3()
    G = sp.group
    cosets = [diag(sp, a, b) for a, b in itertools.permutations(range(4), 2)]
    cosets.append(sp.z)
    for irr in coset_irreducibles(3):
        for g in cosets:
            closed = coset_char_sum(sp, irr, g)
            literal = CycSum.zero(G.root_order)
            for h in sp.h_elements:
                literal = literal + G.char_value(irr, G.classify(G.mul(g, h)))
            assert (closed - literal).is_zero(), (irr, g)


def test_trivial_induced_sum_is_56():
    sp = space3()
    for a, b in itertools.combinations(range(4), 2):
        assert integer_part(coset_char_sum(sp, (0, 0), diag(sp, a, b))) == 56
    assert 2 * 12 + 2 * 8 * 2 == 56


def test_induced_pair_matches_trace_path_everywhere():
    """The diagonal closed form against Tr(P(m) M_theta) for all 64 pairs."""
    sp = space3()
    G = sp.group
    oo = G.field.q
    ms = [diag(sp, a, b) for a, b in itertools.permutations(range(4), 2)]
    for i in range(8):
        for j in range(8):
            M = m_theta(sp, (i, j))
            for g in ms:
                product = CycSum.zero(G.root_order)
                for alpha in range(oo + 1):
                    sigma, t1, t2 = orbital._coset_action(sp, g, alpha)
                    product = product + orbital._cocycle_value(sp, (i, j), t1, t2) * M[alpha][sigma]
                assert (coset_char_sum(sp, (i, j), g) - product).is_zero(), (i, j, g)


def test_linear_sum_is_determinant_value_times_group_order():
    sp = space3()
    F = sp.group.field
    n = sp.group.q - 1
    root = sp.group.root_order
    m = diag(sp, 0, 1)
    d = (F.dlog(m.a) + F.dlog(m.d)) % n
    for j in (0, 2, 4, 6):
        value = coset_char_sum(sp, IrrLabel("gl", "linear", (j,)), m)
        want = CycSum.monomial(root, (j * d * (root // n)) % root) * 48
        assert (value - want).is_zero()


def test_central_coset_sums_are_sign_times_order():
    sp = space3()
    for irr in coset_irreducibles(3):
        value = integer_part(coset_char_sum(sp, irr, sp.z))
        sign = orbital._involution_sign(sp, irr)
        assert value == sign * 48


def test_central_coset_sum_vanishes_off_the_module():
    sp = space3()
    assert integer_part(coset_char_sum(sp, IrrLabel("gl", "linear", (1,)), sp.z)) == 0
    cuspidal = next(i for i in sp.group.irreducibles() if i.kind == "cuspidal")
    assert integer_part(coset_char_sum(sp, cuspidal, sp.z)) == 0


def test_coset_sum_rejects_unsupported_cosets():
    sp = space3()
    F = sp.group.field
    with pytest.raises(ValueError, match="tabulated only"):
        coset_char_sum(sp, (0, 0), Mat2(1, 1, 0, 1))
    # diagonal but both entries in one subfield coset
    same = Mat2(1, 0, 0, F.exp[4])
    with pytest.raises(ValueError, match="distinct subfield cosets"):
        coset_char_sum(sp, (0, 0), same)


def test_coset_sum_rejects_cuspidal_labels():
    sp = space3()
    cuspidal = next(i for i in sp.group.irreducibles() if i.kind == "cuspidal")
    with pytest.raises(ValueError, match="no closed-form coset sum"):
        coset_char_sum(sp, cuspidal, diag(sp, 0, 1))


# ---------------------------------------------------------------------------
# the spectrum


def test_spectrum_q3_frozen_rows():
    assert rows_by_label(rows_for(3)) == Q3_ROWS


def test_spectrum_rows_internally_consistent():
    for q in (3, 7):
        rows = rows_for(q)
        for r in rows:
            assert r.theta == r.sign + r.energy
            assert r.sign in (-1, 1)
            assert r.energy % 4 == 0
        assert spectrum_trace(rows) == 0


def test_spectrum_q3_aggregates():
    rows = rows_for(3)
    assert sum(r.multiplicity for r in rows) == Q3_COSETS
    assert max(r.theta for r in rows) == Q3_DEGREE


def test_spectrum_q7_aggregates():
    rows = rows_for(7)
    assert len(rows) == Q7_ROWS
    assert sum(r.multiplicity for r in rows) == Q7_COSETS
    assert max(r.theta for r in rows) == Q7_DEGREE


def test_spectrum_q7_paired_transversal_rows():
    """Principal rows with indices summing to 0 mod q+1 carry energy -q(q+1)."""
    rows = rows_by_label(rows_for(7))
    for a, b in [(1, 7), (2, 6), (3, 5)]:
        energy, sign, theta, mult = rows[("principal", (6 * a, 6 * b))]
        assert energy == -56
        assert sign == 1
        assert theta == -55
        assert mult == 50


def test_energies_match_kernel_form_closed_expressions():
    for q in (3, 7):
        for r in rows_for(q):
            kind, params = r.irr.kind, r.irr.params
            if kind == "linear":
                value = orbital._linear_energy_closed(q, params[0])
            elif kind == "steinberg":
                j = params[0]
                value = orbital._induced_energy_closed(q, (j, j)) - orbital._linear_energy_closed(q, j)
            else:
                value = orbital._induced_energy_closed(q, params)
            assert value == r.energy, r.irr


def test_trivial_energy_is_diagonal_part_degree():
    rows = rows_by_label(rows_for(3))
    assert rows[("linear", (0,))][0] == Q3_DEGREE - 1 == 72
    assert rows[("steinberg", (0,))][0] == 84 - 72 == 12


# ---------------------------------------------------------------------------
# the hand-derived display for linear energies (audit oracle)


def test_linear_energy_display_audit_frozen_q3():
    audit = linear_energy_display_audit(3)
    assert {fc.row: (fc.hand_value, fc.exact_value) for fc in audit} == Q3_DISPLAY_AUDIT
    assert all(fc.agrees == (fc.hand_value == fc.exact_value) for fc in audit)
    assert [fc.agrees for fc in audit] == [False, True, False, True]
    for fc in audit:
        assert fc.family == "orbital"
        assert fc.formula == "linear-energy-display"
        assert fc.q == 3
        # the printed form still satisfies the divisibility conclusion
        assert fc.hand_value % 4 == 0


def test_linear_energy_display_disagrees_at_q7_too():
    audit = {fc.row: fc for fc in linear_energy_display_audit(7)}
    trivial = audit["linear(0)"]
    assert not trivial.agrees
    assert trivial.exact_value == 1568
    assert trivial.hand_value != trivial.exact_value
    assert trivial.hand_value % 4 == 0


# ---------------------------------------------------------------------------
# the explicit graph


def test_graph_shape_and_degree():
    g = graph3()
    assert g.adjacency.shape == (Q3_COSETS, Q3_COSETS)
    assert g.degree == Q3_DEGREE
    assert (g.adjacency.sum(axis=1) == Q3_DEGREE).all()
    assert g.adjacency.sum() // 2 == Q3_EDGES
    assert np.array_equal(g.adjacency, g.adjacency.T)
    assert np.trace(g.adjacency) == 0


def test_graph_h_adjacent_to_zh():
    g = graph3()
    assert g.adjacency[g.h_vertex, g.z_vertex] == 1
    assert g.involution[g.h_vertex, g.z_vertex] == 1


def test_involution_part_is_fixed_point_free_matching():
    g = graph3()
    n = g.involution.shape[0]
    assert (g.involution.sum(axis=1) == 1).all()
    assert np.trace(g.involution) == 0
    assert np.array_equal(g.involution @ g.involution, np.eye(n, dtype=np.int64))
    pairs = g.transfer_pairs()
    assert len(pairs) == n // 2
    assert (g.h_vertex, g.z_vertex) in [tuple(sorted(p)) for p in pairs]


def test_involution_edges_are_inside_the_graph():
    g = graph3()
    assert ((g.adjacency - g.involution) >= 0).all()


def test_numeric_spectrum_matches_character_rows():
    g = graph3()
    exact = sorted(r.theta for r in rows_for(3) for _ in range(r.multiplicity))
    numeric = np.linalg.eigvalsh(g.adjacency.astype(float))
    assert np.abs(numeric - np.array(exact, dtype=float)).max() < 1e-8


def test_numeric_diagonal_part_matches_energies():
    """The graph minus its matching has the energies as its spectrum."""
    g = graph3()
    exact = sorted(r.energy for r in rows_for(3) for _ in range(r.multiplicity))
    numeric = np.linalg.eigvalsh((g.adjacency - g.involution).astype(float))
    assert np.abs(numeric - np.array(exact, dtype=float)).max() < 1e-8


def test_diagonal_part_row_sum_is_trivial_energy():
    g = graph3()
    d = g.adjacency - g.involution
    assert (d.sum(axis=1) == 72).all()


# ---------------------------------------------------------------------------
# certification


def test_certificate_q3():
    cert = certify_orbital(3)
    assert cert.ok
    assert cert.mode == "explicit"
    assert cert.q == 3
    assert cert.degree == Q3_DEGREE
    assert cert.residue == 1
    assert cert.gap == 2
    assert cert.connected is True
    assert math.isclose(cert.time, math.pi / 2)
    assert "pi/2" in cert.reason
    assert cert.fidelity_deviation is not None
    assert cert.fidelity_deviation <= 1e-9
    assert cert.transfer_rule == "rH <-> (z r)H for every coset rH"


def test_certificate_q7_character_sum_mode():
    cert = certify_orbital(7)
    assert cert.ok
    assert cert.mode == "character-sum"
    assert cert.degree == Q7_DEGREE
    assert cert.residue == 1
    assert cert.gap == 2
    assert cert.connected is True
    assert cert.fidelity_deviation is None


def test_certificate_without_involution_refuses():
    cert = certify_orbital(3, include_involution=False)
    assert not cert.ok
    assert "order-2 relation" in cert.reason
    assert cert.degree == 72
    assert cert.residue is None


def test_walk_reaches_every_matched_pair():
    g = graph3()
    report = pst_scan(g.adjacency, g.transfer_pairs())
    assert report.ok
    assert math.isclose(report.time, math.pi / 2)
    assert report.min_fidelity >= 1 - 1e-9
    assert report.pairs_checked == Q3_COSETS // 2


def test_congruence_sides_q3():
    residue = Q3_DEGREE % 4
    assert residue == 1
    for r in rows_for(3):
        want = residue if r.sign == 1 else (residue + 2) % 4
        assert r.theta % 4 == want
