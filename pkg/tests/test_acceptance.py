"""Acceptance criteria, one test per criterion, each printing a single PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py``.
"""

import time

import numpy as np
import pytest

from stiefel_curvature import einstein as ein
from stiefel_curvature import sectional_range as rg
from stiefel_curvature import verify as vf
from stiefel_curvature.curvature import sectional, sectional_numerator
from stiefel_curvature.stiefel import random_tangent

TABLE_ALPHAS = (0.1, 0.3, 0.5, 2 / 3, 1.0, 1.5, 2.0, 3.0)


@pytest.fixture
def report(request):
    """Print ``PASS|FAIL <criterion>: <detail>`` and assert the outcome."""
    reporter = request.config.pluginmanager.get_plugin("terminalreporter")

    def emit(label, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} {label}: {detail}"
        if reporter is not None:
            reporter.write_line("")
            reporter.write_line(line)
        else:
            print(line)
        assert ok, line

    return emit


def checks_detail(res, names):
    return ", ".join(f"{n} {res.checks[n].worst:.1e}/{res.checks[n].tol:.0e} (x{res.checks[n].count})" for n in names)


def test_01_cross_path_equivalence(report):
    start = time.perf_counter()
    res = vf.suite_cross_path(instances=500, n_max=7, seed=101)
    elapsed = time.perf_counter() - start
    names = ("coords_vs_ambient", "coords_vs_cheeger", "ambient_vs_cheeger", "fd_vs_ambient")
    ok = res.passed and all(res.checks[n].count == 500 for n in names) and elapsed < 60
    report("1 cross-path curvature", ok, f"{checks_detail(res, names)}; {elapsed:.1f}s")


def test_02_representative_sections(report):
    worst, evaluated, rows = 0.0, 0, set()
    # shapes chosen so every row applies somewhere
    for n, p in [(5, 2), (4, 3), (6, 3), (6, 4), (7, 5), (5, 4)]:
        for alpha in TABLE_ALPHAS:
            for corner in rg.corner_sections(n, p, alpha):
                ev = sectional(alpha, *corner.build(n, p, alpha))
                worst = max(worst, abs(ev.kappa - corner.kappa(alpha)) if ev.defined else np.inf)
                evaluated += 1
                rows.add(corner.label)
    ok = worst <= 1e-12 and rows == set(rg.all_corner_labels())
    report("2 representative sections", ok, f"{len(rows)} rows, {evaluated} evaluations, max error {worst:.1e}")


def test_03_p2_endpoints(report):
    start = time.perf_counter()
    one = rg.optimize_range(5, 2, 1.0, restarts=50, seed=0)
    half = rg.optimize_range(5, 2, 0.5, restarts=50, seed=0)
    elapsed = time.perf_counter() - start
    ok = (
        abs(one.kappa_min + 0.5) <= 1e-3
        and abs(one.kappa_max - 1.0) <= 1e-3
        and half.kappa_min >= -1e-6
        and abs(half.kappa_max - 1.25) <= 1e-3
        and elapsed < 120
    )
    detail = (
        f"alpha=1 [{one.kappa_min:.6f}, {one.kappa_max:.6f}], "
        f"alpha=1/2 [{half.kappa_min:.6f}, {half.kappa_max:.6f}]; {elapsed:.1f}s"
    )
    report("3 p=2 range endpoints", ok, detail)


def test_04_nonnegativity_regimes(report):
    rng = np.random.default_rng(404)
    mins = {}
    for n, p in [(4, 3), (6, 4), (7, 3)]:
        rep = rg.optimize_range(n, p, 0.5, restarts=20, seed=4)
        sampled = min(
            sectional_numerator(0.5, random_tangent(n, p, rng), random_tangent(n, p, rng)) for _ in range(5000)
        )
        mins[(n, p)] = min(rep.kappa_min, sampled)
    l23 = rg.frak_l(2 / 3)
    neg = {(n, p): rg.optimize_range(n, p, 2 / 3, restarts=10, seed=4).kappa_min for n, p in [(4, 3), (6, 3), (6, 4)]}
    ok = all(v >= -1e-6 for v in mins.values()) and -0.03 < l23 < -0.01 and all(v <= l23 + 1e-6 for v in neg.values())
    detail = (
        "alpha=1/2 min " + ", ".join(f"{k}: {v:.2e}" for k, v in mins.items())
        + f"; l(2/3)={l23:.6f}, alpha=2/3 min " + ", ".join(f"{k}: {v:.6f}" for k, v in neg.items())
    )
    report("4 non-negativity regimes", ok, detail)


def test_05_einstein(report):
    worst, roots = 0.0, 0
    for n, p in [(10, 2), (4, 3), (5, 4), (9, 5)]:
        for r in ein.einstein_alphas(n, p).roots:
            worst = max(worst, ein.verify_einstein(r, n, p, trials=1000, seed=5))
            roots += 1
    control = ein.verify_einstein(1.0, 4, 3, trials=1000, seed=5)
    ok = worst <= 1e-10 and control > 1e-3
    report("5 Einstein verification", ok, f"{roots} roots, max deviation {worst:.1e}; non-root control {control:.2e}")


def test_06_ricci_scalar(report):
    res = vf.suite_ricci(instances=300, n_max=7, seed=606)
    names = ("ricci_closed_vs_trace", "scalar_closed_vs_trace")
    ok = res.passed and res.checks["scalar_closed_vs_trace"].count == 3
    report("6 Ricci and scalar oracles", ok, checks_detail(res, names))


def test_07_cheeger_identities(report):
    res = vf.suite_cheeger(instances=200, n_max=6, seed=707)
    names = (
        "bracket_P_adjoint",
        "ad_dagger_adjoint",
        "oneil_term",
        "gz_vs_hom",
        "interpolate_R0",
        "interpolate_R1",
        "interpolate_R2",
    )
    ok = res.passed and all(res.checks[n].count >= 200 for n in names)
    report("7 homogeneous-space identities", ok, checks_detail(res, names))


def test_08_trace_lemmas(report):
    res = vf.suite_trace_lemma(instances=100, dim_max=6, seed=808)
    ok = res.passed and all(c.count >= 100 for c in res.checks.values())
    report("8 operator trace lemmas", ok, f"{len(res.checks)} items, worst {res.worst:.1e} (tol 1e-12)")


def test_09_special_values(report):
    l_half = rg.frak_l(0.5)
    l_end = rg.frak_l(0.7)
    near_end = rg.frak_l(0.7 - 1e-7)
    worst_slope = 0.0
    for alpha in np.linspace(0.001, 0.69, 400):
        g = rg.gamma_min(alpha)
        h = 1e-4 * (2 * alpha + g)

        def c(x):
            return rg.frak_c(alpha, x)

        slope = (-c(g + 2 * h) + 8 * c(g + h) - 8 * c(g - h) + c(g - 2 * h)) / (12 * h)
        worst_slope = max(worst_slope, abs(slope))
    ok = abs(l_half) <= 1e-12 and l_end == -0.05 and abs(near_end + 0.05) <= 1e-5 and worst_slope <= 1e-10
    detail = f"l(1/2)={l_half:.1e}, l(7/10)={l_end}, l(7/10-1e-7)={near_end:.8f}, max |dc/dgamma| at gamma_min {worst_slope:.1e}"
    report("9 special values", ok, detail)


def test_10_tensor_symmetries(report):
    res = vf.suite_symmetry(instances=500, n_max=7, seed=1010)
    names = ("antisym_first_pair", "antisym_second_pair", "pair_symmetry", "first_bianchi")
    ok = all(res.checks[n].passed and res.checks[n].count == 500 for n in names)
    report("10 tensor symmetries", ok, checks_detail(res, names))
