"""Oracle-equivalence suites: independent computation paths compared on random instances.

Each suite returns a :class:`SuiteResult` holding the worst deviation seen per
check and the tolerance it must meet. Library functions are looked up through
their modules at call time, so a patched implementation is what gets tested.
"""

from dataclasses import dataclass, field

import numpy as np

from . import cheeger as ch
from . import curvature as cv
from . import einstein as ein
from . import matlin as ml
from . import stiefel as st

__all__ = ["Check", "SuiteResult", "SUITES", "LEVELS", "run_suites"]

ALPHAS = (0.25, 0.5, 1.0, 1.5, 2.0)


@dataclass
class Check:
    name: str
    tol: float
    worst: float = 0.0
    count: int = 0

    def update(self, value):
        value = float(value)
        # NaN must fail, so compare with "not <="
        if not value <= self.worst:
            self.worst = value
        self.count += 1

    @property
    def passed(self):
        return self.worst <= self.tol


@dataclass
class SuiteResult:
    name: str
    checks: dict = field(default_factory=dict)

    def check(self, name, tol):
        if name not in self.checks:
            self.checks[name] = Check(name, tol)
        return self.checks[name]

    @property
    def passed(self):
        return all(c.passed for c in self.checks.values())

    @property
    def worst(self):
        return max((c.worst for c in self.checks.values()), default=0.0)


def _rel(x, ref):
    x, ref = np.asarray(x), np.asarray(ref)
    return float(np.max(np.abs(x - ref)) / max(1.0, float(np.max(np.abs(ref)))))


def _triple_rel(w, ref):
    return _rel(np.concatenate([w.A.ravel(), w.B.ravel(), w.H.ravel()]), np.concatenate([ref.A.ravel(), ref.B.ravel(), ref.H.ravel()]))


def _random_shape(rng, n_max, n_min=3):
    n = int(rng.integers(n_min, n_max + 1))
    p = int(rng.integers(2, n))
    return n, p


def suite_cross_path(instances=100, n_max=5, seed=0, alphas=ALPHAS, fd=True):
    """Coordinate formula vs ambient analytic vs Cheeger quotient vs finite differences."""
    res = SuiteResult("cross_path")
    rng = np.random.default_rng(seed)
    for _ in range(instances):
        n, p = _random_shape(rng, n_max)
        alpha = float(rng.choice(alphas))
        frame = st.random_frame(n, p, rng)
        xs = [st.random_tangent(n, p, rng) for _ in range(3)]
        ws = [st.from_coords(frame, x) for x in xs]
        r_coords = st.from_coords(frame, cv.curvature_coords(alpha, *xs))
        r_ambient = cv.curvature_ambient_analytic(alpha, frame.Y, *ws)
        hom = ch.hom_curvature(2 * alpha, *[ch.triple_from_coords(x) for x in xs])
        r_cheeger = ch.stiefel_projection(frame, hom)
        res.check("coords_vs_ambient", 1e-10).update(_rel(r_coords, r_ambient))
        res.check("coords_vs_cheeger", 1e-10).update(_rel(r_coords, r_cheeger))
        res.check("ambient_vs_cheeger", 1e-10).update(_rel(r_ambient, r_cheeger))
        if fd:
            r_fd = cv.curvature_ambient_fd(alpha, frame, *ws)
            res.check("fd_vs_ambient", 1e-6).update(_rel(r_fd, r_ambient))
    return res


def suite_symmetry(instances=100, n_max=5, seed=1, alphas=ALPHAS):
    """Algebraic curvature-tensor identities, numerator forms and alpha = 1/2 non-negativity."""
    res = SuiteResult("symmetry")
    rng = np.random.default_rng(seed)
    for _ in range(instances):
        n, p = _random_shape(rng, n_max)
        alpha = float(rng.choice(alphas))
        x, y, z, w = (st.random_tangent(n, p, rng) for _ in range(4))

        def R(a, b, c):
            return cv.curvature_coords(alpha, a, b, c)

        def g(a, b):
            return st.metric_inner(alpha, a, b)

        r4 = g(R(x, y, z), w)
        scale = max(1.0, abs(r4))
        res.check("antisym_first_pair", 1e-10).update(abs(r4 + g(R(y, x, z), w)) / scale)
        res.check("antisym_second_pair", 1e-10).update(abs(r4 + g(R(x, y, w), z)) / scale)
        res.check("pair_symmetry", 1e-10).update(abs(r4 - g(R(z, w, x), y)) / scale)
        b = R(x, y, z) + R(y, z, x) + R(z, x, y)
        ref = max(1.0, float(np.max(np.abs(R(x, y, z).B))), float(np.max(np.abs(R(x, y, z).A), initial=0.0)))
        res.check("first_bianchi", 1e-10).update(max(np.max(np.abs(b.A)), np.max(np.abs(b.B))) / ref)
        forms = [cv.sectional_numerator(alpha, x, y, f) for f in cv.NUMERATOR_FORMS]
        num_scale = max(1.0, abs(forms[0]))
        res.check("numerator_forms", 1e-10).update((max(forms) - min(forms)) / num_scale)
        res.check("tensor_vs_numerator", 1e-10).update(abs(g(R(x, y, x), y) - forms[0]) / num_scale)
        half = cv.sectional_numerator(0.5, x, y)
        res.check("nonneg_at_half", 1e-12).update(max(0.0, -half))
    return res


def suite_ricci(instances=100, n_max=5, seed=2, alphas=ALPHAS, scalar_cases=((5, 2, 1.0), (6, 3, 0.3), (7, 4, 1.7))):
    """Closed-form Ricci and scalar curvature vs traces of the curvature tensor."""
    res = SuiteResult("ricci")
    rng = np.random.default_rng(seed)
    for _ in range(instances):
        n, p = _random_shape(rng, n_max)
        alpha = float(rng.choice(alphas))
        x, y = st.random_tangent(n, p, rng), st.random_tangent(n, p, rng)
        closed = cv.ricci(alpha, n, p, x, y)
        res.check("ricci_closed_vs_trace", 1e-10).update(abs(closed - cv.ricci_trace(alpha, x, y)) / max(1.0, abs(closed)))
    for n, p, alpha in scalar_cases:
        closed = cv.scalar_curvature(alpha, n, p)
        res.check("scalar_closed_vs_trace", 1e-9).update(abs(closed - cv.scalar_curvature_trace(alpha, n, p)) / max(1.0, abs(closed)))
    return res


def suite_trace_lemma(instances=100, dim_max=6, seed=3):
    """Closed-form traces of operators on matrix spaces vs basis-sum brute force."""
    res = SuiteResult("trace_lemma")
    rng = np.random.default_rng(seed)
    for _ in range(instances):
        m, n = (int(v) for v in rng.integers(1, dim_max + 1, size=2))
        p = int(rng.integers(2, dim_max + 1))
        A, B = rng.standard_normal((m, m)), rng.standard_normal((n, n))
        full = ml.matrix_space_basis((m, n), "full")
        res.check("axb_full", 1e-12).update(abs(ml.trace_op_axb(A, B) - ml.operator_trace(lambda X: A @ X @ B, full)))
        res.check("ax_full", 1e-12).update(abs(n * np.trace(A) - ml.operator_trace(lambda X: A @ X, full)))
        res.check("xb_full", 1e-12).update(abs(m * np.trace(B) - ml.operator_trace(lambda X: X @ B, full)))
        C, D = rng.standard_normal((m, n)), rng.standard_normal((m, n))
        res.check("axtb_full", 1e-12).update(abs(ml.trace_op_axtb(C, D) - ml.operator_trace(lambda X: C @ X.T @ D, full)))

        P, Q = rng.standard_normal((p, p)), rng.standard_normal((p, p))
        sym = ml.matrix_space_basis((p, p), "symmetric")
        skw = ml.matrix_space_basis((p, p), "skew")

        def sandwich(X):
            return P @ X @ Q + Q.T @ X @ P.T

        res.check("sym_sandwich", 1e-12).update(abs(ml.trace_op_axb(P, Q, "symmetric") - ml.operator_trace(sandwich, sym)))
        res.check("sym_ax_plus_xat", 1e-12).update(abs((p + 1) * np.trace(P) - ml.operator_trace(lambda X: P @ X + X @ P.T, sym)))
        S = Q + Q.T
        res.check("sym_rank_one", 1e-12).update(abs(ml.trace_op_rank_one(P, S) - ml.operator_trace(lambda X: np.trace(P @ X) * S, sym)))
        res.check("skew_sandwich", 1e-12).update(abs(ml.trace_op_axb(P, Q, "skew") - ml.operator_trace(sandwich, skw)))
        Ps, Qs = P - P.T, Q - Q.T
        res.check("skew_double_commutator", 1e-12).update(
            abs(ml.trace_op_double_commutator(Ps, Qs) - ml.operator_trace(lambda X: ml.commutator(ml.commutator(Ps, X), Qs), skw))
        )
    return res


def suite_cheeger(instances=100, n_max=5, seed=4, ts=(0.5, 1.0, 2.0, 4.0)):
    """Deformed-bracket identities, O'Neil term, decomposition in ``t`` and the weighted-sum formula."""
    res = SuiteResult("cheeger")
    rng = np.random.default_rng(seed)
    for _ in range(instances):
        n, p = _random_shape(rng, n_max)
        t = float(rng.choice(ts))
        u, x, y = (ch.random_triple(n, p, rng) for _ in range(3))
        lhs = ch.pt_inner(t, ch.bracket_P(t, u, x), y) + ch.pt_inner(t, x, ch.bracket_P(t, u, y))
        scale = max(1.0, abs(ch.pt_inner(t, ch.bracket_P(t, u, x), y)))
        res.check("bracket_P_adjoint", 1e-10).update(abs(lhs) / scale)
        res.check("bracket_P_antisym", 1e-12).update(
            _triple_rel(ch.bracket_P(t, u, x) - ch.bracket_P(t, x, u), 2.0 * ch.bracket(u, x))
        )
        pr_u, pr_x = ch.decompose_abh(u), ch.decompose_abh(x)
        eq23 = ch.bracket(u, x) + (1 - t) * (ch.bracket(pr_u.a, pr_x.b) + ch.bracket(pr_x.a, pr_u.b))
        res.check("bracket_P_projection_form", 1e-12).update(_triple_rel(ch.bracket_P(t, u, x), eq23))
        lhs = ch.pt_inner(t, ch.bracket(u, x), y)
        res.check("ad_dagger_adjoint", 1e-10).update(abs(lhs - ch.pt_inner(t, x, ch.ad_dagger(t, u, y))) / max(1.0, abs(lhs)))
        res.check("ad_dagger_operator", 1e-12).update(
            _triple_rel(ch.ad_dagger(t, u, x), -ch.apply_P_inv(t, ch.bracket(u, ch.apply_P(t, x))))
        )
        K = ch.decompose_abh(y).k
        res.check("oneil_term", 1e-10).update(_triple_rel(ch.decompose_abh(ch.ad_dagger(t, u, K)).m, ch.oneil_term(u, K)))

        w1, w2, w3 = (ch.random_triple(n, p, rng, in_m=True) for _ in range(3))
        hom = ch.hom_curvature(t, w1, w2, w3)
        parts = ch.curvature_Pt_decomposed(w1, w2, w3)
        res.check("decomposition_total", 1e-10).update(_triple_rel(ch.combine_decomposition(t, parts), hom))
        f_lo, f_mid, f_hi = (ch.hom_curvature(s, w1, w2, w3) for s in (0.5, 1.0, 1.5))
        recovered = (f_mid, f_lo - f_hi, 2.0 * (f_lo + f_hi - 2.0 * f_mid))
        for name, got, want in zip(("R0", "R1", "R2"), recovered, parts):
            res.check(f"interpolate_{name}", 1e-9).update(_triple_rel(got, want))
        res.check("R2_a_block", 1e-12).update(float(np.max(np.abs(parts[2].A), initial=0.0)))
        gz = ch.gz_sectional(t, w1, w2)
        direct = ch.pt_inner(t, ch.hom_curvature(t, w1, w2, w1), w2)
        res.check("gz_vs_hom", 1e-10).update(abs(gz - direct) / max(1.0, abs(direct)))
    return res


EINSTEIN_CASES = {"fast": ((5, 2), (4, 3), (5, 4)), "full": ((10, 2), (4, 3), (5, 4), (9, 5), (8, 3))}


def suite_einstein(level="fast", trials=None, seed=5):
    """Ricci proportionality at each Einstein root, eigenvalue match, and a non-root control."""
    res = SuiteResult("einstein")
    trials = trials if trials is not None else (100 if level == "fast" else 1000)
    for n, p in EINSTEIN_CASES[level]:
        sol = ein.einstein_alphas(n, p)
        for r in sol.roots:
            res.check("quadratic_residual", 1e-12).update(abs(ein.einstein_residual(r, n, p)))
            lam_a, lam_b = cv.ricci_eigenvalues(r, n, p)
            res.check("eigenvalue_match", 1e-12).update(abs(lam_a - lam_b))
            res.check("ricci_proportional", 1e-10).update(ein.verify_einstein(r, n, p, trials=trials, seed=seed))
    # a non-root must be detected; record how far the control falls short of 1e-3
    control = ein.verify_einstein(1.0, 4, 3, trials=min(trials, 100), seed=seed)
    res.check("non_root_detected", 0.0).update(max(0.0, 1e-3 - control))
    return res


LEVELS = {
    "fast": {"instances": 100, "n_max": 5},
    "full": {"instances": 500, "n_max": 8},
}

SUITES = ("cross_path", "symmetry", "ricci", "trace_lemma", "cheeger", "einstein")


def run_suites(level="fast", seed=0, names=SUITES):
    """Run the named suites at ``level``; returns the list of results in order."""
    if level not in LEVELS:
        raise ValueError(f"unknown level {level!r}, expected one of {sorted(LEVELS)}")
    cfg = LEVELS[level]
    k, n_max = cfg["instances"], cfg["n_max"]
    runners = {
        "cross_path": lambda: suite_cross_path(k, n_max, seed),
        "symmetry": lambda: suite_symmetry(k, n_max, seed + 1),
        "ricci": lambda: suite_ricci(k, n_max, seed + 2),
        "trace_lemma": lambda: suite_trace_lemma(k, 6 if level == "fast" else 8, seed + 3),
        "cheeger": lambda: suite_cheeger(k, n_max, seed + 4),
        "einstein": lambda: suite_einstein(level, seed=seed + 5),
    }
    return [runners[name]() for name in names]
