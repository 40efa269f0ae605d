"""End-to-end acceptance checks.

Each test prints one `[criterion NN] PASS/FAIL - <summary>` line straight to
the terminal (see the `criterion` fixture).  Tolerances here are contract
values: do not tighten or loosen them to make a run green.
"""

import itertools
import json
import math
import time

import numpy as np

import betageo as bg
from betageo.cli import main as cli_main
from betageo.metric import _curvature_values, _det_values

GRID_AXIS = np.geomspace(1e-3, 1e3, 100)


def _log_uniform(rng, lo, hi, size):
    return np.exp(rng.uniform(math.log(lo), math.log(hi), size=size))


def test_criterion_01_curvature_negative_on_grid(criterion):
    with criterion(1, "curvature < 0 on the 100x100 log grid in < 5 s"):
        A, B = np.meshgrid(GRID_AXIS, GRID_AXIS)
        _curvature_values(A[:2, :2], B[:2, :2])  # compile before timing
        t0 = time.perf_counter()
        K = _curvature_values(A, B)
        elapsed = time.perf_counter() - t0
        assert K.shape == (100, 100)
        assert np.all(np.isfinite(K))
        assert np.max(K) < 0.0
        assert elapsed < 5.0, f"grid took {elapsed:.2f} s"


def test_criterion_02_curvature_limits(criterion):
    with criterion(2, "curvature corner values and k1/k2 endpoint limits"):
        assert abs(bg.sectional_curvature(bg.BetaPoint(1e3, 1e3)) + 0.5) <= 1e-2
        assert abs(bg.sectional_curvature(bg.BetaPoint(1e-4, 1e4)) + 0.25) <= 1e-2
        k_origin = bg.sectional_curvature(bg.BetaPoint(1e-5, 1e-5))
        assert abs(k_origin) <= 1e-2 and k_origin < 0.0
        assert abs(bg.curvature_limit_k1(1e-6) - 0.0) <= 1e-3
        assert abs(bg.curvature_limit_k1(1e6) + 0.25) <= 1e-3
        assert abs(bg.curvature_limit_k2(1e-6) + 0.25) <= 1e-3
        assert abs(bg.curvature_limit_k2(1e6) + 0.5) <= 1e-3


def test_criterion_03_determinant_lower_bound(criterion):
    with criterion(3, "det > elementary bound on the grid; ratio -> 1 on the diagonal"):
        A, B = np.meshgrid(GRID_AXIS, GRID_AXIS)
        det = _det_values(A, B)
        bound = (1.0 + A + B) / (2.0 * A * B * (A + B) ** 2)
        assert np.all(det > bound)
        x = 1e4
        p = bg.BetaPoint(x, x)
        ratio = bg.det_metric(p) / bg.det_metric_lower_bound(p)
        assert 1.0 <= ratio <= 1.05


def test_criterion_04_integral_representation(criterion):
    with criterion(4, "quadrature of the determinant integral, 1e-6 relative in < 10 s"):
        pts = [(0.5, 0.5), (1.0, 1.0), (2.0, 3.0), (10.0, 7.0)]
        t0 = time.perf_counter()
        for a, b in pts:
            p = bg.BetaPoint(a, b)
            got = bg.det_metric_quadrature(p, rel_tol=1e-8)
            want = bg.det_metric(p)
            assert abs(got - want) <= 1e-6 * abs(want), (a, b)
        elapsed = time.perf_counter() - t0
        assert elapsed < 10.0, f"quadrature took {elapsed:.2f} s"


def test_criterion_05_geodesic_solver(criterion):
    with criterion(5, "exp/log round trips, constant speed, diagonal preservation"):
        rng = np.random.default_rng(2024)
        worst_rt = 0.0
        for _ in range(100):
            a1, b1, a2, b2 = _log_uniform(rng, 0.2, 20.0, 4)
            p, q = bg.BetaPoint(a1, b1), bg.BetaPoint(a2, b2)
            v = bg.log_map(p, q)
            end = bg.exp_map(p, v, steps_hint=1).end
            err = max(abs(end.alpha - q.alpha), abs(end.beta - q.beta))
            worst_rt = max(worst_rt, err / (1.0 + max(abs(q.alpha), abs(q.beta))))
        assert worst_rt <= 1e-6, f"round-trip error {worst_rt:.3e}"

        worst_speed = 0.0
        for _ in range(10):
            a, b = _log_uniform(rng, 0.2, 20.0, 2)
            da, db = rng.normal(scale=0.8, size=2)
            p = bg.BetaPoint(a, b)
            v = bg.TangentVector(p, da, db)
            path = bg.exp_map(p, v, steps_hint=50)
            s0 = v.fisher_norm()
            for x, w in zip(path.points, path.velocities):
                s = bg.metric_tensor(x).norm((w.d_alpha, w.d_beta))
                worst_speed = max(worst_speed, abs(s - s0) / s0)
        assert worst_speed <= 1e-8, f"speed drift {worst_speed:.3e}"

        worst_diag = 0.0
        for g0 in (0.5, 1.0, 2.0, 5.0):
            p = bg.BetaPoint(g0, g0)
            for dv in (-0.6, 0.4, 1.0):
                path = bg.exp_map(p, bg.TangentVector(p, dv, dv), steps_hint=50)
                worst_diag = max(worst_diag,
                                 max(abs(x.alpha - x.beta) for x in path.points))
        assert worst_diag <= 1e-8, f"diagonal drift {worst_diag:.3e}"


def test_criterion_06_clt_convergence(criterion):
    with criterion(6, "distance along the diagonal ray approaches ln(2)/sqrt(2)"):
        lim = math.log(2.0) / math.sqrt(2.0)
        errs = []
        for n in (10, 100, 1000):
            d = bg.distance(bg.BetaPoint(n, n), bg.BetaPoint(2 * n, 2 * n))
            errs.append(abs(d - lim))
        assert errs[0] > errs[1] > errs[2]
        assert errs[2] <= 1e-3


def test_criterion_07_frechet_mean(criterion):
    with criterion(7, "mean independent of initialization, tiny gradient, symmetry"):
        rng = np.random.default_rng(777)
        for _ in range(20):
            pts = [bg.BetaPoint(*_log_uniform(rng, 0.3, 8.0, 2)) for _ in range(5)]
            m0 = bg.frechet_mean(pts, tol=1e-9)
            m1 = bg.frechet_mean(pts, tol=1e-9, initial=pts[0])
            far = bg.BetaPoint(float(10.0 + rng.uniform(0, 5)), 10.0)
            m2 = bg.frechet_mean(pts, tol=1e-9, initial=far)
            for m in (m1, m2):
                assert abs(m.alpha - m0.alpha) <= 1e-6
                assert abs(m.beta - m0.beta) <= 1e-6
            grad = np.zeros(2)
            for p in pts:
                v = bg.log_map(m0, p)
                grad += np.array([v.d_alpha, v.d_beta]) / len(pts)
            gnorm = bg.metric_tensor(m0).norm((grad[0], grad[1]))
            assert gnorm <= 1e-8, f"gradient norm {gnorm:.3e}"
        for _ in range(5):
            half = [bg.BetaPoint(*_log_uniform(rng, 0.4, 5.0, 2)) for _ in range(3)]
            pts = half + [bg.BetaPoint(p.beta, p.alpha) for p in half]
            m = bg.frechet_mean(pts, tol=1e-9)
            assert abs(m.alpha - m.beta) <= 1e-8


def test_criterion_08_hankel_identity(criterion):
    with criterion(8, "Hankel determinant identity to 1e-10 relative, n <= 8"):
        rng = np.random.default_rng(888)
        for _ in range(100):
            L = int(rng.integers(2, 9))
            p = rng.uniform(0.15, 0.85, size=L)
            c = bg.from_canonical(tuple(p)).values
            for n in range(1, L):
                h_n = bg.hankel(c, n)
                h_m = bg.hankel(c, n - 1)
                h_p = bg.hankel(c, n + 1)
                lhs = h_n.lower * h_n.upper
                rhs = h_m.lower * h_p.upper + h_m.upper * h_p.lower
                rel = abs(lhs - rhs) / max(abs(lhs), abs(rhs))
                assert rel <= 1e-10, (list(p), n, rel)


def test_criterion_09_canonical_round_trip(criterion):
    with criterion(9, "canonical round trip, uniform example, symmetric measures"):
        rng = np.random.default_rng(999)
        for _ in range(60):
            n = int(rng.integers(1, 9))
            p = rng.uniform(0.25, 0.75, size=n)
            back = np.array(bg.to_canonical(bg.from_canonical(tuple(p))).values)
            assert np.max(np.abs(back - p)) <= 1e-10

        p = bg.to_canonical((0.5, 1.0 / 3.0)).values
        assert abs(p[0] - 0.5) <= 1e-10 and abs(p[1] - 1.0 / 3.0) <= 1e-10
        c = bg.from_canonical((0.5, 1.0 / 3.0)).values
        assert abs(c[0] - 0.5) <= 1e-10 and abs(c[1] - 1.0 / 3.0) <= 1e-10

        def beta_moments(a, b, n):
            out, c = [], 1.0
            for j in range(n):
                c *= (a + j) / (a + b + j)
                out.append(c)
            return out

        symmetric_cases = [
            beta_moments(2.0, 2.0, 8),
            beta_moments(0.5, 0.5, 8),
            [0.5 * (u + v) for u, v in zip(beta_moments(2.0, 5.0, 8),
                                           beta_moments(5.0, 2.0, 8))],
        ]
        for c in symmetric_cases:
            p = bg.to_canonical(c).values
            for i in range(0, len(p), 2):  # odd-order coordinates
                assert abs(p[i] - 0.5) <= 1e-10


def test_criterion_10_jacobian_formula(criterion):
    with criterion(10, "Jacobian closed form vs central differences, 1e-4 relative"):
        rng = np.random.default_rng(1010)
        h = 1e-5
        for _ in range(20):
            n = int(rng.integers(1, 6))
            p = rng.uniform(0.2, 0.8, size=n)
            jac = np.empty((n, n))
            for j in range(n):
                up, dn = p.copy(), p.copy()
                up[j] += h
                dn[j] -= h
                cu = np.array(bg.from_canonical(tuple(up)).values)
                cd = np.array(bg.from_canonical(tuple(dn)).values)
                jac[:, j] = (cu - cd) / (2.0 * h)
            want = float(np.linalg.det(jac))
            got = bg.jacobian_det_formula(tuple(p))
            assert abs(got - want) <= 1e-4 * abs(want), (list(p), got, want)


def test_criterion_11_embedding(criterion):
    with criterion(11, "embedding center exactness, orthogonality, triangle inequality"):
        for n in range(1, 7):
            image = bg.phi_map((0.5,) * n)
            for k, comp in enumerate(image.components, start=1):
                m = float(n - k + 1)
                assert comp.alpha == m and comp.beta == m

        rng = np.random.default_rng(1111)
        for _ in range(6):
            b = bg.BetaPoint(*_log_uniform(rng, 0.5, 6.0, 2))
            line = bg.MeanLine(rng.uniform(0.2, 0.8))
            x = bg.project_to_line(b, line)
            v = bg.log_map(x, b)
            g = bg.metric_tensor(x)
            t = (x.alpha, x.beta)
            vn = g.norm((v.d_alpha, v.d_beta))
            res = abs(g.inner(t, (v.d_alpha, v.d_beta))) / (g.norm(t) * vn)
            assert res <= 1e-6

        pool = [bg.from_canonical(tuple(rng.uniform(0.25, 0.75, size=3)))
                for _ in range(12)]
        rho = {}
        for i in range(12):
            for j in range(i + 1, 12):
                rho[i, j] = rho[j, i] = bg.rho_distance(pool[i], pool[j])
        triples = list(itertools.combinations(range(12), 3))
        rng.shuffle(triples)
        for (i, j, k) in triples[:50]:
            for (x, y, z) in ((i, j, k), (j, k, i), (k, i, j)):
                slack = rho[x, y] + rho[y, z] - rho[x, z]
                assert slack >= -1e-9, (x, y, z, slack)


def test_criterion_12_cli_outputs(criterion, capsys):
    with criterion(12, "ball and curvature-grid CSVs well-formed and deterministic"):
        grid_args = ["curvature-grid", "--alpha-min", "1e-3", "--alpha-max", "1e3",
                     "--beta-min", "1e-3", "--beta-max", "1e3",
                     "--resolution", "30", "--spacing", "log"]
        assert cli_main(grid_args) == 0
        grid_out = capsys.readouterr().out
        assert cli_main(grid_args) == 0
        assert capsys.readouterr().out == grid_out
        lines = grid_out.splitlines()
        assert lines[0] == "alpha,beta,curvature"
        assert len(lines) == 1 + 30 * 30
        for ln in lines[1:]:
            a, b, k = map(float, ln.split(","))
            assert 1e-3 <= a <= 1e3 and 1e-3 <= b <= 1e3
            assert math.isfinite(k) and k < 0.0

        ball_args = ["ball", "--center", "2,2", "--radius", "0.35",
                     "--directions", "64"]
        assert cli_main(ball_args) == 0
        ball_out = capsys.readouterr().out
        assert cli_main(ball_args) == 0
        assert capsys.readouterr().out == ball_out
        lines = ball_out.splitlines()
        assert lines[0] == "theta,alpha,beta"
        assert len(lines) == 1 + 64
        center = bg.BetaPoint(2.0, 2.0)
        for ln in lines[1::8]:
            theta, a, b = map(float, ln.split(","))
            assert 0.0 <= theta < 2.0 * math.pi
            d = bg.distance(center, bg.BetaPoint(a, b))
            assert abs(d - 0.35) <= 1e-6

        code = cli_main(["distance", "--from", "2,2", "--to", "3,1"])
        out = capsys.readouterr().out
        assert code == 0 and json.loads(out)["distance"] > 0.0
