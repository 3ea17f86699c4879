"""Acceptance criteria 1 to 11, one test each, at their stated tolerances.

Each test records a one-line verdict that the terminal summary prints, and
prints the same line itself (visible with ``-s``).
"""
import io
import json
import math
import time
from contextlib import redirect_stdout

import numpy as np
import pytest
from scipy import integrate

from conftest import record_criterion
from genhyp import cli
from genhyp import complexes as C
from genhyp import packing, pattern, penner, trig, verify
from genhyp.appendix import appendix_laws
from genhyp.packing import PackingConfig
from genhyp.pattern import PatternConfig
from oracles import direct_h0_trajectory, direct_h0_velocity

SEED = 20240917
SAMPLES = 1000


def _verdict(number, title, passed, detail):
    record_criterion(number, title, passed, detail)
    print(f"criterion {number} {'PASS' if passed else 'FAIL'}  {title}: {detail}")
    assert passed, detail


@pytest.fixture(scope="module")
def law_report():
    return verify.law_report(trig.TRIANGLE_TYPES, SAMPLES, SEED)


def _worst(report, key):
    return max(row["checks"][key]["max_error"] for row in report["types"])


# 1 ---------------------------------------------------------------------------------------------

def test_criterion_01_law_consistency():
    start = time.perf_counter()
    rng = verify.make_rng(SEED)
    worst = 0.0
    count = 0
    for ttype in trig.TRIANGLE_TYPES:
        for tri in verify.sample_triangles(ttype, SAMPLES, rng):
            worst = max(
                worst,
                verify._rel(appendix_laws(ttype, angles=tri.theta).lengths, tri.l),
                verify._rel(appendix_laws(ttype, lengths=tri.l).angles, tri.theta),
            )
            count += 1
    elapsed = time.perf_counter() - start
    ok = count == 10 * SAMPLES and worst <= 1e-10 and elapsed <= 10.0
    _verdict(1, "uniform vs table laws", ok, f"{count} triangles, max rel error {worst:.2e}, {elapsed:.1f} s")


# 2 ---------------------------------------------------------------------------------------------

def test_criterion_02_identities(law_report):
    limits = {
        "det_lengths": 1e-9,
        "det_angles": 1e-9,
        "m_product": 1e-10,
        "sine_spread": 1e-12,
        "tau_identity": 1e-12,
        "rho_identity": 1e-12,
    }
    worst = {k: _worst(law_report, k) for k in limits}
    ok = all(worst[k] <= limits[k] for k in limits)
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    _verdict(2, "determinant, M-product, sine and pair identities", ok, detail)


# 3 ---------------------------------------------------------------------------------------------

def test_criterion_03_derivative_laws(law_report):
    fd = _worst(law_report, "jacobian_fd")
    prod = _worst(law_report, "jacobian_product")
    samples = min(verify.FD_SAMPLES, SAMPLES)
    ok = fd <= 1e-5 and prod <= 1e-10 and samples == 200
    _verdict(3, "Jacobians vs central differences", ok,
             f"{samples} samples/type, fd rel {fd:.1e}, product {prod:.1e}")


# 4 ---------------------------------------------------------------------------------------------

def test_criterion_04_penner_round_trip():
    rng = np.random.default_rng(SEED)
    worst_l, worst_it, worst_cycle = 0.0, 0, 0.0
    for name in ("punctured_torus", "thrice_punctured_sphere"):
        s = C.builtin(name)
        cycles = C.enumerate_edge_cycles(s)
        for _ in range(50):
            l = rng.uniform(-1, 1, s.n_edges)
            res = penner.psi_solve(s, penner.psi_map(s, l))
            worst_l = max(worst_l, float(np.max(np.abs(res.x - l))))
            worst_it = max(worst_it, res.iterations)
            for c in cycles:
                lhs, rhs = penner.edge_cycle_sum_identity(s, l, c)
                worst_cycle = max(worst_cycle, abs(lhs - rhs))
    torus = C.punctured_torus()
    ok_zero, witness = penner.polytope_check(torus, np.zeros(3))
    rejected = not ok_zero and witness is not None
    ok = worst_l <= 1e-8 and worst_it <= 30 and worst_cycle <= 1e-12 and rejected
    _verdict(4, "Penner round trip and cycle identity", ok,
             f"max |dl| {worst_l:.1e}, max iterations {worst_it}, cycle identity {worst_cycle:.1e}, "
             f"z=0 rejected with witness {rejected}")


# 5 ---------------------------------------------------------------------------------------------

def test_criterion_05_penner_concavity():
    rng = np.random.default_rng(SEED)
    asym, top = 0.0, -math.inf
    for _ in range(1000):
        hess = penner.triangle_energy_hessian(rng.uniform(-3, 3, 3))
        asym = max(asym, float(np.max(np.abs(hess - hess.T))))
        top = max(top, float(np.max(np.linalg.eigvalsh(hess))))
    quad_err = 0.0
    for l in [np.array([0.3, -0.2, 0.5])] + [rng.uniform(-2, 2, 3) for _ in range(20)]:
        val, _ = integrate.quad(lambda s: float(penner.radius_invariants(s * l) @ l), 0, 1, epsabs=1e-13, epsrel=1e-13)
        quad_err = max(quad_err, abs(penner.triangle_energy_W(l) - val))
    ok = asym <= 1e-12 and top < 0 and quad_err <= 1e-10
    _verdict(5, "Penner energy concavity", ok,
             f"asymmetry {asym:.1e}, max eigenvalue {top:.3g}, closed form vs quadrature {quad_err:.1e}")


# 6 ---------------------------------------------------------------------------------------------

def test_criterion_06_packing_eps0():
    rng = np.random.default_rng(SEED)
    worst_const, worst_res = 0.0, 0.0
    for surface in (C.tetrahedron(), C.octahedron()):
        for delta, phi in ((-1, 0.7), (0, 2.0), (1, 1.2)):
            cfg = PackingConfig.uniform(0, delta, phi, surface)
            c = packing.eps0_constant(cfg, surface)
            for _ in range(10):
                r = rng.uniform(-2, 2, surface.n_vertices)
                prod = packing.curvature_tilde(cfg, surface, r) * np.exp(r)
                worst_const = max(worst_const, float(np.max(np.abs(prod - c) / c)))
                target = 10.0 ** rng.uniform(-2, 2, surface.n_vertices)
                worst_res = max(worst_res, packing.packing_solve(cfg, surface, target).residual)
    ok = worst_const <= 1e-12 and worst_res <= 1e-12
    _verdict(6, "eps = 0 closed form", ok, f"K~ e^r vs C rel {worst_const:.1e}, solve residual {worst_res:.1e}")


# 7 ---------------------------------------------------------------------------------------------

def _interior(cfg, surface, rng):
    while True:
        r = rng.uniform(0.3, 2.0, surface.n_vertices)
        if packing.u_feasible(cfg, surface, packing.u_of_r(cfg, r)):
            return r


def test_criterion_07_packing_solver():
    rng = np.random.default_rng(SEED)
    tet, octa = C.tetrahedron(), C.octahedron()
    cases = []
    for delta, phi in ((1, math.pi / 2), (0, 1.5), (-1, 2.0)):
        cases.append((-1, delta, lambda s, p=phi: (p,) * s.n_edges))
    # Thurston weights anywhere in [pi/2, pi], edge by edge
    cases.append((1, 1, lambda s: tuple(rng.uniform(math.pi / 2, math.pi, s.n_edges))))
    asym, top, worst_rt, worst_it = 0.0, -math.inf, 0.0, 0
    for eps, delta, weights in cases:
        cfg = PackingConfig(eps, delta, weights(tet))
        for _ in range(500):
            r = _interior(cfg, tet, rng)
            t = int(rng.integers(tet.n_faces))
            a = packing.packing_jacobian(cfg, tet, r, t)
            asym = max(asym, float(np.max(np.abs(a - a.T))))
            top = max(top, float(np.max(np.linalg.eigvalsh(0.5 * (a + a.T)))))
        for surface in (tet, octa):
            cfg = PackingConfig(eps, delta, weights(surface))
            for _ in range(5):
                r = _interior(cfg, surface, rng)
                res = packing.packing_solve(cfg, surface, packing.curvature_tilde(cfg, surface, r))
                worst_rt = max(worst_rt, float(np.max(np.abs(res.x - r))))
                worst_it = max(worst_it, res.iterations)
    solved = 0
    worst_res = 0.0
    for delta, phi in ((1, math.pi / 2), (0, 1.5), (-1, 2.0)):
        for surface in (tet, octa):
            cfg = PackingConfig.uniform(-1, delta, phi, surface)
            for _ in range(50):
                target = 10.0 ** rng.uniform(-2, 2, surface.n_vertices)
                res = packing.packing_solve(cfg, surface, target)
                worst_res = max(worst_res, res.residual)
                solved += res.residual <= 1e-10
    ok = asym <= 1e-10 and top < 0 and worst_rt <= 1e-8 and worst_it <= 50 and solved == 300
    _verdict(7, "packing Jacobian and solver", ok,
             f"asymmetry {asym:.1e}, max eigenvalue {top:.3g}, round trip {worst_rt:.1e} in <= {worst_it} "
             f"iterations, {solved}/300 random eps=-1 targets solved (max residual {worst_res:.1e})")


# 8 ---------------------------------------------------------------------------------------------

def test_criterion_08_limit_decay():
    rows = []
    ok = True
    for delta, phi in ((1, math.pi / 2), (0, 1.5), (-1, 2.0)):
        vals = [packing.limit_decay(-1, delta, (phi,) * 3, 1.0, 1.0, R) for R in (5, 10, 20, 40)]
        ok &= vals[-1] <= 1e-8 and all(b < a for a, b in zip(vals, vals[1:])) and vals[-1] > 0
        rows.append(f"delta={delta}: theta(40)={vals[-1]:.1e}")
    _verdict(8, "angle decay at a large radius", ok, ", ".join(rows))


# 9 ---------------------------------------------------------------------------------------------

PATTERN_THETA = {1: math.pi / 2, 0: 1.5, -1: 2.0}
HS = (-1.0, 0.0, 0.5, 1.0, 2.0)


def test_criterion_09_pattern_suite():
    start = time.perf_counter()
    rng = np.random.default_rng(SEED)
    cube, digon = C.cube_cells(), C.digon_pair()
    fd_err, asym, top, worst_rt = 0.0, 0.0, -math.inf, 0.0
    for eps in (-1, 0, 1):
        for delta in (-1, 0, 1):
            t = PATTERN_THETA[delta]
            for h in HS:
                cfg = PatternConfig.uniform(eps, delta, h, t, cube)
                l1, l2 = rng.uniform(1.0, 2.0, 2)
                w = pattern.w_of_r(cfg, [l1, l2])
                g = pattern.f_gradient(cfg, t, *w)
                for i in range(2):
                    d = np.zeros(2)
                    d[i] = 1e-6
                    fd = (pattern.f_energy(cfg, t, *(w + d)) - pattern.f_energy(cfg, t, *(w - d))) / 2e-6
                    fd_err = max(fd_err, abs(fd - g[i]) / max(1.0, abs(g[i])))
                a = pattern.a_matrix(cfg, t, l1, l2)
                asym = max(asym, abs(a[0, 1] - a[1, 0]))
                top = max(top, float(np.max(np.linalg.eigvalsh(pattern.f_hessian(cfg, t, *w)))))
                for surface in (cube, digon):
                    scfg = PatternConfig.uniform(eps, delta, h, t, surface)
                    r = rng.uniform(1.0, 2.0, surface.n_faces)
                    res = pattern.pattern_solve(scfg, surface, pattern.kh_curvature(scfg, surface, r))
                    worst_rt = max(worst_rt, float(np.max(np.abs(res.x - r))))
    elapsed = time.perf_counter() - start
    ok = fd_err <= 1e-5 and asym <= 1e-10 and top < 0 and worst_rt <= 1e-8 and elapsed <= 120
    _verdict(9, "pattern energy and solver, 9 types x 5 h", ok,
             f"gradient fd {fd_err:.1e}, A asymmetry {asym:.1e}, max Hessian eigenvalue {top:.3g}, "
             f"round trip {worst_rt:.1e}, {elapsed:.1f} s")


# 10 --------------------------------------------------------------------------------------------

def _monotone(energies):
    return all(b >= a - 1e-14 for a, b in zip(energies, energies[1:]))


def test_criterion_10_flows():
    tet = C.tetrahedron()
    details = []
    ok = True
    # packing
    cfg = PackingConfig.uniform(-1, 1, math.pi / 2, tet)
    target = packing.curvature_tilde(cfg, tet, [1.0, 1.2, 0.9, 1.1])
    traj = packing.packing_flow(cfg, tet, np.full(4, 1.3), target, dt=0.01, steps=5000, stop_tol=1e-9)
    newton = packing.packing_solve(cfg, tet, target)
    gap = float(np.max(np.abs(traj.curvatures[-1] - target)))
    agree = float(np.max(np.abs(traj.final - newton.x)))
    ok &= gap <= 1e-6 and agree <= 1e-6 and _monotone(traj.energies)
    details.append(f"packing |K-K^| {gap:.1e}, vs Newton {agree:.1e}")
    # pattern
    digon = C.digon_pair()
    pcfg = PatternConfig.uniform(-1, -1, 2.0, 2.0, digon)
    ptarget = pattern.kh_curvature(pcfg, digon, [1.2, 1.7])
    ptraj = pattern.pattern_flow(pcfg, digon, [1.5, 1.5], ptarget, dt=0.05, steps=20000, stop_tol=1e-9)
    pnewton = pattern.pattern_solve(pcfg, digon, ptarget)
    pgap = float(np.max(np.abs(ptraj.curvatures[-1] - ptarget)))
    pagree = float(np.max(np.abs(ptraj.final - pnewton.x)))
    ok &= pgap <= 1e-6 and pagree <= 1e-6 and _monotone(ptraj.energies)
    details.append(f"pattern |K-K^| {pgap:.1e}, vs Newton {pagree:.1e}")
    # h = 0 against the direct coding
    cube = C.cube_cells()
    fi = cube.face_index
    quads = [(fi[q.f], fi[q.f2]) for q in cube.quadrilaterals()]
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for ttype, theta in (((1, 1, 1), math.pi / 2), ((-1, -1, -1), 2.0)):
        hcfg = PatternConfig.uniform(ttype[0], ttype[2], 0.0, theta, cube)
        htarget = pattern.kh_curvature(hcfg, cube, rng.uniform(1.0, 2.0, 6))
        for _ in range(10):
            r = rng.uniform(1.0, 2.0, 6)
            tau = np.array([trig.tau(hcfg.epsdelta, x) for x in r])
            ours = packing.flow_velocity(pattern.kh_curvature(hcfg, cube, r), htarget, tau, "literal", 1.0)
            worst = max(worst, float(np.max(np.abs(ours - direct_h0_velocity(ttype, theta, quads, r, htarget, -1.0)))))
        r0 = rng.uniform(1.0, 2.0, 6)
        htraj = pattern.pattern_flow(hcfg, cube, r0, htarget, dt=0.01, steps=20)
        for ours, ref in zip(htraj.states, direct_h0_trajectory(ttype, theta, quads, r0, htarget, 0.01, 20)):
            worst = max(worst, float(np.max(np.abs(ours - ref))))
    ok &= worst <= 1e-12
    details.append(f"h=0 vs direct coding {worst:.1e}, energies monotone")
    _verdict(10, "curvature flows", ok, "; ".join(details))


# 11 --------------------------------------------------------------------------------------------

def _cli_bytes(tmp_path, tag, argv):
    out = tmp_path / f"{tag}.json"
    with redirect_stdout(io.StringIO()) as buf:
        code = cli.main(argv + ["--out" if argv[0] != "verify-laws" else "--json", str(out)])
    return code, buf.getvalue().encode(), out.read_bytes()


def test_criterion_11_determinism(tmp_path):
    cube = C.cube_cells()
    pcfg = PatternConfig.uniform(1, 1, 0.5, math.pi / 2, cube)
    cube_target = pattern.kh_curvature(pcfg, cube, np.linspace(1.0, 1.5, 6))
    runs = [
        ["verify-laws", "--types", "all", "--samples", "50", "--seed", "7"],
        ["penner", "solve", "--mesh", "thrice_punctured_sphere", "--z", "1,2,1.5"],
        ["packing", "flow", "--mesh", "octahedron", "--eps", "-1", "--delta", "0", "--phi", "1.5", "--r", "1.2",
         "--target", "1", "--steps", "20", "--trace", str(tmp_path / "trace.csv")],
        ["pattern", "solve", "--mesh", "cube", "--eps", "1", "--delta", "1", "--theta", "1.5707963267948966",
         "--h", "0.5", "--target", ",".join(repr(float(x)) for x in cube_target)],
    ]
    identical = 0
    for k, argv in enumerate(runs):
        first = _cli_bytes(tmp_path, f"a{k}", argv)
        trace = (tmp_path / "trace.csv").read_bytes() if "--trace" in argv else b""
        second = _cli_bytes(tmp_path, f"b{k}", argv)
        trace2 = (tmp_path / "trace.csv").read_bytes() if "--trace" in argv else b""
        identical += first == second and trace == trace2 and first[0] == 0
    report = verify.law_report(trig.TRIANGLE_TYPES, 30, SEED)
    again = verify.law_report(trig.TRIANGLE_TYPES, 30, SEED)
    same = json.dumps(report, sort_keys=True) == json.dumps(again, sort_keys=True)
    ok = identical == len(runs) and same
    _verdict(11, "determinism", ok, f"{identical}/{len(runs)} CLI commands byte-identical, seeded report repeatable {same}")
