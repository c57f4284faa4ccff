from fractions import Fraction

import pytest

from heckeplan.residual import (
    TheoremViolation,
    TorusPoint,
    canonical_point,
    casselman_discrete,
    casselman_tempered,
    classification_suite,
    coset_index,
    graded_labels,
    graded_residual_points,
    kl_real_point_check,
    point_index,
    residual_cosets,
    residual_points,
    scaling_check,
    steinberg_point,
    trivial_point,
    unitary_candidates,
)
from heckeplan.rootdata import LabelFunction, RootDatum

F = Fraction


def root_values(datum, point):
    """Values (u, r) of the simple roots at the point."""
    return tuple(point.value_of(datum.simple_roots[i])
                 for i in range(datum.n_simple))


def orbit_value_sets(datum, points):
    from heckeplan.residual import orbit_of_point
    out = []
    for p in points:
        out.append({root_values(datum, q) for q in orbit_of_point(datum, p)})
    return out


# -- unitary candidates --------------------------------------------------------


def test_unitary_candidates_a1():
    d = RootDatum.from_type("A1", "Q")
    cands = unitary_candidates(d)
    assert not cands.rank_deficient
    vals = sorted(c.point.value_of(d.simple_roots[0])[0] for c in cands.points)
    assert vals == [0, F(1, 2)]  # s = 1 and s = -1 on the root


def test_unitary_candidates_b2_q():
    d = RootDatum.from_type("B2", "Q")
    cands = unitary_candidates(d)
    vals = sorted((c.point.value_of(d.simple_roots[0])[0],
                   c.point.value_of(d.simple_roots[1])[0])
                  for c in cands.points)
    # (1,1), (1,-1), (-1,1) in root values (u-parts 0 or 1/2)
    assert vals == [(0, 0), (0, F(1, 2)), (F(1, 2), 0)]


def test_unitary_candidates_b2_p():
    d = RootDatum.from_type("B2", "P")
    cands = unitary_candidates(d)
    assert len(cands.points) == 3


# -- graded search -------------------------------------------------------------


def test_graded_points_a1():
    d = RootDatum.from_type("A1", "P")
    labels = LabelFunction.equal(d)
    cand = unitary_candidates(d).points[0]
    kl = graded_labels(d, labels, cand)
    pts = graded_residual_points(d, cand.r_s0, kl)
    assert len(pts) == 1
    gamma, = pts
    alpha = d.simple_roots[0]
    assert sum(F(v) * gamma[i] for i, v in enumerate(alpha)) == 1


def test_graded_points_a2_equal():
    d = RootDatum.from_type("A2", "Q")
    labels = LabelFunction.equal(d)
    cand = next(c for c in unitary_candidates(d).points
                if all(x == 0 for x in c.point.u))
    kl = graded_labels(d, labels, cand)
    pts = graded_residual_points(d, cand.r_s0, kl)
    # single orbit: alpha_1(g) = alpha_2(g) = 1 and its Weyl images
    doms = [g for g in pts
            if all(sum(F(v) * g[i] for i, v in enumerate(s)) >= 0
                   for s in d.simple_roots)]
    assert len(doms) == 1
    g = doms[0]
    assert all(sum(F(v) * g[i] for i, v in enumerate(s)) == 1
               for s in d.simple_roots)


def test_graded_points_b2_minus_plus_empty():
    # the candidate with alpha_1(s) = -1, alpha_2(s) = 1 has zero labels on
    # its graded system and carries no residual points
    d = RootDatum.from_type("B2", "Q")
    labels = LabelFunction.equal(d)
    cand = next(c for c in unitary_candidates(d).points
                if c.point.value_of(d.simple_roots[0])[0] == F(1, 2))
    kl = graded_labels(d, labels, cand)
    assert graded_residual_points(d, cand.r_s0, kl) == []


# -- residual points: the rank-2 worked example ---------------------------------


def test_residual_points_b2_q():
    d = RootDatum.from_type("B2", "Q")
    labels = LabelFunction.equal(d)
    points = residual_points(d, labels)
    assert len(points) == 2
    value_sets = orbit_value_sets(d, points)
    # orbit representatives with simple values (q, q) and (q, -1)
    qq = ((F(0), F(1)), (F(0), F(1)))
    qm1 = ((F(0), F(1)), (F(1, 2), F(0)))
    assert any(qq in s for s in value_sets)
    assert any(qm1 in s for s in value_sets)


def test_residual_points_b2_p():
    d = RootDatum.from_type("B2", "P")
    labels = LabelFunction.equal(d)
    points = residual_points(d, labels)
    assert len(points) == 3
    # displayed in the paper's basis (alpha_1/2, alpha_2): the three orbits
    # carry values (q^{1/2}, q), (q^{1/2}, -1), (-q^{1/2}, q); on the roots
    # themselves: (q, q) twice (distinguished by the value on the half of
    # alpha_1, i.e. by the unitary part) and (q, -1)
    vsets = orbit_value_sets(d, points)
    qq = ((F(0), F(1)), (F(0), F(1)))
    qm1 = ((F(0), F(1)), (F(1, 2), F(0)))
    count_qq = sum(1 for s in vsets if qq in s)
    assert count_qq == 2
    assert sum(1 for s in vsets if qm1 in s) == 1
    # the two (q, q)-valued orbits differ in the unitary part
    reps = [p for p in points
            if any(root_values(d, q) == qq
                   for q in [p])]  # placeholder to keep points ordered
    us = {p.u for p in points}
    assert len(us) == 3


def test_steinberg_point_in_unique_a1_orbit():
    d = RootDatum.from_type("A1", "Q")
    labels = LabelFunction.equal(d)
    points = residual_points(d, labels)
    assert len(points) == 1
    st = steinberg_point(d, labels)
    assert st.value_of(d.simple_roots[0]) == (0, -1)
    assert canonical_point(d, st) == points[0]


def test_trivial_point_values():
    # alpha(r_triv) = q^{a(alpha)} on every simple root
    d = RootDatum.from_type("B2", "Q")
    labels = LabelFunction.from_affine_nodes(d, [F(3), F(2), F(1)])
    tr = trivial_point(d, labels)
    for i in range(2):
        vec = d.simple_roots[i]
        assert tr.value_of(vec) == (0, labels.pole_exponent(vec))


# -- index ----------------------------------------------------------------------


def test_point_index_a1():
    d = RootDatum.from_type("A1", "Q")
    labels = LabelFunction.equal(d)
    alpha = d.simple_roots[0]
    t = TorusPoint.make([0], [F(1) / alpha[0]])   # alpha(t) = q
    assert point_index(d, labels, t) == 1
    assert point_index(d, labels, TorusPoint.identity(1)) == -2
    assert coset_index(d, labels, (), TorusPoint.identity(1)) == 0


def test_coset_index_t():
    d = RootDatum.from_type("B2", "Q")
    labels = LabelFunction.equal(d)
    assert coset_index(d, labels, (), TorusPoint.identity(2)) == 0


# -- residual cosets -------------------------------------------------------------


def test_residual_cosets_b2_q():
    d = RootDatum.from_type("B2", "Q")
    labels = LabelFunction.equal(d)
    cosets = residual_cosets(d, labels)
    by_dim = {}
    for c in cosets:
        by_dim.setdefault(c.dim, []).append(c)
    assert len(by_dim.get(0, [])) == 2
    assert len(by_dim.get(1, [])) == 2
    assert len(by_dim.get(2, [])) == 1
    assert sorted(c.k_l for c in by_dim[1]) == [1, 2]
    t = by_dim[2][0]
    assert t.index == 0 and t.k_l == 1


def test_residual_cosets_b2_p():
    d = RootDatum.from_type("B2", "P")
    labels = LabelFunction.equal(d)
    cosets = residual_cosets(d, labels)
    by_dim = {}
    for c in cosets:
        by_dim.setdefault(c.dim, []).append(c)
    assert len(by_dim.get(0, [])) == 3
    assert len(by_dim.get(1, [])) == 3
    assert len(by_dim.get(2, [])) == 1
    assert sorted(c.k_l for c in by_dim[1]) == [1, 1, 2]


def test_trivial_labels_only_t():
    d = RootDatum.from_type("A1", "Q")
    labels = LabelFunction.equal(d, 0)
    cosets = residual_cosets(d, labels)
    assert len(cosets) == 1
    assert cosets[0].support == ()


# -- suite, scaling, degenerate labels -------------------------------------------


@pytest.mark.parametrize("tag,lattice", [
    ("A1", "Q"), ("A2", "Q"), ("B2", "Q"), ("B2", "P"), ("G2", "Q")])
def test_classification_suite_passes(tag, lattice):
    d = RootDatum.from_type(tag, lattice)
    labels = LabelFunction.equal(d)
    report = classification_suite(d, labels, check_nonintersection=True)
    assert report.passed, report.to_json()


def test_classification_suite_unequal_labels():
    d = RootDatum.from_type("B2", "Q")
    labels = LabelFunction.from_affine_nodes(d, [F(5, 2), F(2), F(1)])
    report = classification_suite(d, labels)
    assert report.passed, report.to_json()


def test_scaling_invariance():
    for tag, lattice in (("A1", "Q"), ("B2", "Q"), ("B2", "P"), ("G2", "Q")):
        d = RootDatum.from_type(tag, lattice)
        labels = LabelFunction.equal(d)
        for eps in (F(1, 2), F(2), F(3)):
            assert scaling_check(d, labels, eps)


def test_g2_has_subregular_point():
    # G2 equal labels: real residual points include one with simple values
    # (q, 1) or (1, q) (the subregular distinguished diagram)
    d = RootDatum.from_type("G2", "Q")
    labels = LabelFunction.equal(d)
    ok, vectors = kl_real_point_check(d, labels)
    assert ok
    assert any(sorted(v) == [0, 1] for v in vectors)
    # and the regular one (q, q)
    assert any(v == (1, 1) for v in vectors)


def test_kl_check_a2():
    d = RootDatum.from_type("A2", "P")
    labels = LabelFunction.equal(d)
    ok, vectors = kl_real_point_check(d, labels)
    assert ok
    assert vectors == [(1, 1)]


def test_kl_check_c3_subregular():
    d = RootDatum.from_type("C3", "P")
    labels = LabelFunction.equal(d)
    ok, vectors = kl_real_point_check(d, labels)
    assert ok
    assert (1, 0, 1) in vectors


# -- Casselman ------------------------------------------------------------------


def test_casselman_steinberg_discrete():
    d = RootDatum.from_type("B2", "Q")
    labels = LabelFunction.equal(d)
    st = steinberg_point(d, labels)
    assert casselman_discrete([st], d)
    assert casselman_tempered([st], d)


def test_casselman_trivial_not_tempered():
    d = RootDatum.from_type("B2", "Q")
    labels = LabelFunction.equal(d)
    tr = trivial_point(d, labels)
    assert not casselman_tempered([tr], d)
    assert not casselman_discrete([tr], d)


def test_casselman_unitary_tempered_not_discrete():
    d = RootDatum.from_type("B2", "Q")
    w = TorusPoint.make([F(1, 3), F(1, 5)], [0, 0])
    assert casselman_tempered([w], d)
    assert not casselman_discrete([w], d)
