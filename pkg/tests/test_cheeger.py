import numpy as np
import pytest

from stiefel_curvature import cheeger as ch
from stiefel_curvature import curvature as cv
from stiefel_curvature import stiefel as sf
from stiefel_curvature.matlin import inner_frob, matrix_space_basis

TS = [0.5, 1.0, 2.0, 4.0]


def triples(rng, k, n=6, p=3, in_m=False):
    return [ch.random_triple(n, p, rng, in_m=in_m) for _ in range(k)]


def test_skew_triple_validation():
    with pytest.raises(ValueError, match="shapes"):
        ch.SkewTriple(np.zeros((2, 2)), np.zeros((3, 3)), np.zeros((3, 3)))
    with pytest.raises(ValueError, match="antisymmetric"):
        ch.SkewTriple(np.ones((2, 2)), np.zeros((3, 2)), np.zeros((3, 3)))


def test_assembly_round_trip(rng):
    w = ch.random_triple(6, 2, rng)
    M = w.assemble()
    np.testing.assert_array_equal(M, -M.T)
    back = ch.SkewTriple.from_matrix(M, 2)
    assert (back - w).max_abs() == 0


def test_biinvariant_examples(rng):
    E = np.array([[0.0, 1.0], [-1.0, 0.0]])
    a = ch.SkewTriple(E, np.zeros((2, 2)), np.zeros((2, 2)))
    assert ch.biinvariant_inner(a, a) == 1.0
    B = np.zeros((2, 2))
    B[0, 0] = 1.0
    b = ch.SkewTriple(np.zeros((2, 2)), B, np.zeros((2, 2)))
    assert ch.biinvariant_inner(b, b) == 1.0
    for _ in range(20):
        u, v = triples(rng, 2)
        assert ch.biinvariant_inner(u, v) == pytest.approx(0.5 * inner_frob(u.assemble(), v.assemble()), abs=1e-12)


def test_bracket_is_matrix_commutator(rng):
    for _ in range(20):
        u, v = triples(rng, 2)
        M = u.assemble() @ v.assemble() - v.assemble() @ u.assemble()
        assert (ch.bracket(u, v) - ch.SkewTriple.from_matrix(M, 3)).max_abs() <= 1e-12
        assert ch.bracket(u, u).max_abs() <= 1e-15


def test_jacobi(rng):
    for _ in range(20):
        x, y, z = triples(rng, 3)
        jac = ch.bracket(x, ch.bracket(y, z)) + ch.bracket(y, ch.bracket(z, x)) + ch.bracket(z, ch.bracket(x, y))
        assert jac.max_abs() <= 1e-11


def test_shape_mismatch(rng):
    with pytest.raises(ValueError):
        ch.bracket(ch.random_triple(5, 2, rng), ch.random_triple(5, 3, rng))


def test_bracket_P_undeformed(rng):
    u, v = triples(rng, 2)
    assert (ch.bracket_P(1.0, u, v) - ch.bracket(u, v)).max_abs() <= 1e-15


@pytest.mark.parametrize("t", TS)
def test_bracket_P_identities(rng, t):
    for _ in range(50):
        a, x, y = triples(rng, 3)
        lhs = ch.pt_inner(t, ch.bracket_P(t, a, x), y) + ch.pt_inner(t, x, ch.bracket_P(t, a, y))
        assert abs(lhs) <= 1e-11 * max(1.0, abs(ch.pt_inner(t, ch.bracket_P(t, a, x), y)))
        anti = ch.bracket_P(t, a, x) - ch.bracket_P(t, x, a) - 2 * ch.bracket(a, x)
        assert anti.max_abs() <= 1e-12 * max(1.0, ch.bracket(a, x).max_abs())
        pa, px = ch.decompose_abh(a), ch.decompose_abh(x)
        eq = ch.bracket(a, x) + (1 - t) * (ch.bracket(pa.a, px.b) + ch.bracket(px.a, pa.b))
        assert (ch.bracket_P(t, a, x) - eq).max_abs() <= 1e-12 * max(1.0, eq.max_abs())


def test_bracket_P_is_bracket_minus_adjoints(rng):
    for t in TS:
        u, v = triples(rng, 2)
        alt = ch.bracket(u, v) - ch.ad_dagger(t, u, v) - ch.ad_dagger(t, v, u)
        assert (ch.bracket_P(t, u, v) - alt).max_abs() <= 1e-12 * max(1.0, alt.max_abs())


def test_ad_dagger_undeformed_is_minus_ad(rng):
    u, v = triples(rng, 2)
    assert (ch.ad_dagger(1.0, u, v) + ch.bracket(u, v)).max_abs() <= 1e-14


@pytest.mark.parametrize("t", TS)
def test_ad_dagger_adjointness_and_operator_form(rng, t):
    for _ in range(200):
        w, x, y = triples(rng, 3, n=5, p=2)
        lhs = ch.pt_inner(t, ch.bracket(w, x), y)
        assert lhs == pytest.approx(ch.pt_inner(t, x, ch.ad_dagger(t, w, y)), abs=1e-11 * max(1.0, abs(lhs)))
        op = -ch.apply_P_inv(t, ch.bracket(w, ch.apply_P(t, x)))
        assert (ch.ad_dagger(t, w, x) - op).max_abs() <= 1e-12 * max(1.0, op.max_abs())


def test_check_t():
    for bad in (0.0, -1.0, np.nan):
        with pytest.raises(ValueError):
            ch.check_t(bad)


def test_group_curvature_basics(rng):
    w, v, z = triples(rng, 3)
    assert ch.group_curvature(0.7, w, w, z).max_abs() <= 1e-13
    quarter = 0.25 * ch.bracket(ch.bracket(w, v), z)
    assert (ch.group_curvature(1.0, w, v, z) - quarter).max_abs() <= 1e-12 * max(1.0, quarter.max_abs())


@pytest.mark.parametrize("t", [0.2, 0.5, 0.9, 1.0])
def test_group_sectional_nonnegative_for_t_at_most_one(rng, t):
    for _ in range(200):
        w, v = triples(rng, 2)
        assert ch.pt_inner(t, ch.group_curvature(t, w, v, w), v) >= -1e-12


def test_projections(rng):
    w = ch.random_triple(6, 3, rng)
    pr = ch.decompose_abh(w)
    assert (pr.a + pr.b + pr.h - w).max_abs() == 0
    assert (pr.m - (pr.a + pr.b)).max_abs() == 0
    assert (pr.n - (pr.b + pr.h)).max_abs() == 0
    assert pr.k is pr.h
    assert ch.bracket(pr.a, pr.h).max_abs() == 0
    for blk in (pr.a, pr.h):
        br = ch.bracket(blk, pr.b)
        assert np.max(np.abs(br.A)) <= 1e-12 and np.max(np.abs(br.H)) <= 1e-12


@pytest.mark.parametrize("n,p", [(4, 2), (5, 2), (5, 3), (6, 2), (6, 3), (6, 4)])
def test_involution_centralizer_is_h(n, p):
    # w in b + h with [w, a] = 0 for every basis element a of o(p): solution space must be exactly h
    q = n - p
    coords = [("B", M) for M in matrix_space_basis((q, p))] + [("H", M) for M in matrix_space_basis((q, q), "skew")]
    a_basis = [ch.SkewTriple(E, np.zeros((q, p)), np.zeros((q, q))) for E in matrix_space_basis((p, p), "skew")]
    columns = []
    for kind, M in coords:
        w = ch.SkewTriple(np.zeros((p, p)), M if kind == "B" else np.zeros((q, p)), M if kind == "H" else np.zeros((q, q)))
        columns.append(np.concatenate([ch.bracket(w, a).assemble().ravel() for a in a_basis]))
    system = np.stack(columns, axis=1)
    _, s, vt = np.linalg.svd(system)
    rank = int(np.sum(s > 1e-10))
    null = vt[rank:]
    assert null.shape[0] == q * (q - 1) // 2
    if null.size:
        assert np.max(np.abs(null[:, : q * p])) <= 1e-12


@pytest.mark.parametrize("t", TS)
def test_hom_curvature_matches_coordinate_formula(rng, t):
    for n, p in [(4, 2), (5, 3), (6, 5), (7, 3)]:
        xs = [sf.random_tangent(n, p, rng) for _ in range(3)]
        hom = ch.hom_curvature(t, *[ch.triple_from_coords(x) for x in xs])
        R = cv.curvature_coords(t / 2, *xs)
        ref = max(1.0, np.max(np.abs(R.B)))
        assert np.max(np.abs(hom.A - R.A)) <= 1e-10 * ref
        assert np.max(np.abs(hom.B - R.B)) <= 1e-10 * ref
        assert not hom.H.any()


def test_hom_curvature_requires_m(rng):
    w = ch.random_triple(5, 2, rng)
    with pytest.raises(ValueError, match="m"):
        ch.hom_curvature(1.0, w, w, w)
    with pytest.raises(ValueError):
        ch.curvature_Pt_decomposed(w, w, w)
    with pytest.raises(ValueError):
        ch.gz_sectional(1.0, w, w)


def test_hom_curvature_vanishes_on_equal_pair(rng):
    w, z = triples(rng, 2, in_m=True)
    assert ch.hom_curvature(1.3, w, w, z).max_abs() <= 1e-13


def test_oneil_terms_already_in_m(rng):
    for _ in range(50):
        w1, w2, w3 = triples(rng, 3, in_m=True)
        term = ch.oneil_term(w3, ch.decompose_abh(ch.bracket(w1, w2)).k)
        assert np.max(np.abs(term.H)) <= 1e-12


@pytest.mark.parametrize("t", [0.3, 1.0, 1.7])
def test_decomposition(rng, t):
    for _ in range(30):
        w1, w2, w3 = triples(rng, 3, n=6, p=4, in_m=True)
        parts = ch.curvature_Pt_decomposed(w1, w2, w3)
        hom = ch.hom_curvature(t, w1, w2, w3)
        assert (ch.combine_decomposition(t, parts) - hom).max_abs() <= 1e-10 * max(1.0, hom.max_abs())
        assert (ch.hom_curvature(1.0, w1, w2, w3) - parts[0]).max_abs() <= 1e-12 * max(1.0, hom.max_abs())
        assert np.max(np.abs(parts[2].A)) == 0


def test_decomposition_by_interpolation(rng):
    for _ in range(30):
        w = triples(rng, 3, n=5, p=3, in_m=True)
        f = {s: ch.hom_curvature(s, *w) for s in (0.5, 1.0, 1.5)}
        R0, R1, R2 = ch.curvature_Pt_decomposed(*w)
        scale = max(1.0, f[1.0].max_abs())
        assert (f[1.0] - R0).max_abs() <= 1e-9 * scale
        assert ((f[0.5] - f[1.5]) - R1).max_abs() <= 1e-9 * scale
        assert (2 * (f[0.5] + f[1.5] - 2 * f[1.0]) - R2).max_abs() <= 1e-9 * scale


def test_horizontal_lift(rng):
    frame = sf.random_frame(6, 2, rng)
    assert not ch.horizontal_lift(frame, np.zeros((6, 2))).any()
    eta = sf.from_coords(frame, sf.random_tangent(6, 2, rng))
    w = ch.lift_triple(frame, eta)
    assert not w.H.any() or np.max(np.abs(w.H)) <= 1e-12
    np.testing.assert_allclose(w.A, frame.Y.T @ eta, atol=1e-12)
    np.testing.assert_allclose(w.B, frame.Yperp.T @ eta, atol=1e-12)
    for t in (0.5, 1.0, 3.0):
        induced = np.trace(eta @ eta.T + (t / 2 - 1) * frame.Y @ frame.Y.T @ eta @ eta.T)
        assert ch.pt_inner(t, w, w) == pytest.approx(induced, abs=1e-12 * max(1.0, induced))
    with pytest.raises(ValueError, match="tangent"):
        ch.horizontal_lift(frame, rng.standard_normal((6, 2)))


@pytest.mark.parametrize("t", TS)
def test_gz_formula(rng, t):
    for _ in range(50):
        w1, w2 = triples(rng, 2, in_m=True)
        direct = ch.pt_inner(t, ch.hom_curvature(t, w1, w2, w1), w2)
        assert ch.gz_sectional(t, w1, w2) == pytest.approx(direct, abs=1e-10 * max(1.0, abs(direct)))
    assert abs(ch.gz_sectional(t, w1, w1)) <= 1e-12


def test_gz_nonnegative_for_t_at_most_one():
    r = np.random.default_rng(3)
    worst = np.inf
    for i in range(10_000):
        t = 0.05 + 0.95 * r.random()
        n = 3 + i % 4
        w1, w2 = (ch.random_triple(n, 2 + i % (n - 2), r, in_m=True) for _ in range(2))
        worst = min(worst, ch.gz_sectional(t, w1, w2))
    assert worst >= -1e-12


def test_coords_triple_round_trip(rng):
    x = sf.random_tangent(5, 3, rng)
    y = ch.coords_from_triple(ch.triple_from_coords(x))
    np.testing.assert_array_equal(x.A, y.A)
    np.testing.assert_array_equal(x.B, y.B)
