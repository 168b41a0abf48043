"""Acceptance checks: nine end-to-end guarantees, one verdict line each.

Every test prints a single "[acceptance i] name: PASS/FAIL (detail)" line,
visible even under plain pytest, and then asserts.  The tolerance of each
check is pinned in the code next to it and repeated in the printed detail.
"""

import math
import time

import numpy as np

from icicfair import (LemmaCheckConfig, PRESET_ROWS, Params, ScenarioConfig,
                      WeightedBipartiteGraph, brute_force_mis,
                      cond1_beta_threshold, cond2_beta_threshold, cond2_growth,
                      cond3_beta_threshold, default_p0, exhaustive_search,
                      f1_eval, f1_limit, f_eval, f_limit, generate,
                      is_feasible, max_weight_matching, mis_gadget_scenario,
                      p0_star, preset_configs, recover_mis_size,
                      run_distributed, scalar_condition_holds,
                      solve_distributed, solve_via_matching, verify_sublevel)
from icicfair.cli import main

from conftest import CANONICAL_GRAPHS, brute_matching_best, certified_instance


def _verdict(capsys, num, name, ok, detail):
    with capsys.disabled():
        status = "PASS" if ok else "FAIL"
        print(f"\n[acceptance {num}] {name}: {status} ({detail})")
    assert ok, f"[acceptance {num}] {name}: {detail}"


def _trend(groups, direction):
    """Check a mean trend across adjacent grid points on paired samples.

    groups is one array of per-seed values per grid point.  At most one
    adjacent pair may run against the direction, and only if the mean paired
    difference of that pair is within one standard error of zero.
    Returns (ok, description).
    """
    arrs = [np.asarray(g, dtype=float) for g in groups]
    violations = []
    for a, b in zip(arrs, arrs[1:]):
        diffs = b - a
        mean = float(diffs.mean())
        se = float(diffs.std(ddof=1) / math.sqrt(diffs.size))
        wrong = mean > 0.0 if direction == "non-increasing" else mean < 0.0
        if wrong:
            violations.append((mean, se))
    if not violations:
        return True, "monotone"
    if len(violations) == 1 and abs(violations[0][0]) <= violations[0][1]:
        mean, se = violations[0]
        return True, f"one reversal within stderr (|{mean:.2e}| <= {se:.2e})"
    return False, f"{len(violations)} reversals beyond stderr"


def _means(groups):
    return "[" + ", ".join(f"{np.mean(g):.4f}" for g in groups) + "]"


def test_acceptance_1_matching_equals_exhaustive(capsys):
    # tolerance: relative utility gap <= 1e-9 on every certified instance
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    worst = 0.0
    count = 0
    uncertified = 0
    for alpha in (0.5, 1.0, 2.8):
        for _ in range(34):
            k = int(rng.integers(2, 4))
            n = int(rng.integers(2, 4))
            # at least as many MSs as subchannels: with spare subchannels
            # the optimum stacks several onto one MS, which no matching
            # represents, so the reduction only targets this regime
            m = int(rng.integers(n, 9))
            scn, p = certified_instance(rng, alpha, k, m, n)
            exact = exhaustive_search(scn, p)
            matched = solve_via_matching(scn, p)
            if not matched.certified:
                uncertified += 1
            gap = abs(matched.utility - exact.utility)
            rel = gap / abs(exact.utility) if exact.utility != 0.0 else gap
            worst = max(worst, rel)
            count += 1
    elapsed = time.perf_counter() - start
    ok = (count >= 100 and uncertified == 0 and worst <= 1e-9
          and elapsed < 60.0)
    _verdict(capsys, 1,
             "matching solver attains the exhaustive optimum whenever its "
             "certificate holds", ok,
             f"{count} certified instances, worst relative gap {worst:.2e} "
             f"(tolerance 1e-9), {uncertified} uncertified, "
             f"{elapsed:.1f}s of 60s")


def test_acceptance_2_independent_set_recovery(capsys):
    # tolerance: recovered set size must equal brute force exactly
    rng = np.random.default_rng(202)
    start = time.perf_counter()
    graphs = [(order, edges) for _, order, edges in CANONICAL_GRAPHS]
    while len(graphs) < 55:
        order = int(rng.integers(1, 9))
        prob = float(rng.choice((0.2, 0.5, 0.8)))
        edges = tuple((u, v) for u in range(order)
                      for v in range(u + 1, order) if rng.random() < prob)
        graphs.append((order, edges))
    checked = 0
    mismatches = 0
    for order, edges in graphs:
        brute = brute_force_mis(order, edges)
        scn, template = mis_gadget_scenario(order, edges)
        for alpha, tau in ((0.5, 0.5), (1.0, 0.5), (2.0, 1.0)):
            p = Params(alpha=alpha, tau=tau, **template)
            rep = exhaustive_search(scn, p)
            if recover_mis_size(rep, order, p) != brute:
                mismatches += 1
            checked += 1
    elapsed = time.perf_counter() - start
    ok = checked == 165 and mismatches == 0 and elapsed < 60.0
    _verdict(capsys, 2,
             "independent-set sizes decode exactly from gadget optima", ok,
             f"{len(graphs)} graphs x 3 utility settings = {checked} checks, "
             f"{mismatches} mismatches (exact equality), "
             f"{elapsed:.1f}s of 60s")


# Bundled preset corners whose own growth prerequisite fails: at alpha = 2.7
# the alpha >= 2 certificate needs tau < alpha (2^(alpha-1) - 1) / (alpha-1)
# = 3.5719..., and these (eta, tau-offset) corners land above that, so no
# beta whatsoever can certify them.  Keys are (alpha, eta, tau) built with
# the same expressions the preset expansion uses, hence exact float matches.
UNCERTIFIABLE_PRESETS = frozenset(
    (2.7, eta, math.log1p(eta) + k)
    for eta, k in ((31.5, 1e-1), (33.0, 5.5e-2), (33.0, 1e-1)))


def _sublevel_by_direct_scan(cfg):
    """x = 1 maximizes f over the grid and in the limit, checked without
    any certificate (for points no certificate covers)."""
    grid = np.geomspace(1.0, cfg.x_max, int(cfg.grid_points))
    vals = f_eval(grid, cfg.alpha, cfg.tau, cfg.eta, cfg.beta)
    base = float(vals[0])
    tail = f_limit(cfg.alpha, cfg.tau, cfg.beta)
    return float(np.max(vals - base)) <= cfg.slack and tail - base <= cfg.slack


def test_acceptance_3_sublevel_lemmas(capsys):
    # tolerances: sublevel slack 1e-12 on the grid; the x=1e8 evaluation
    # must sit within 1e-4 relative of the closed-form limit
    rng = np.random.default_rng(303)
    configs = [cfg for row in PRESET_ROWS for cfg in preset_configs(row)]
    n_presets = len(configs)
    for _ in range(200):
        band = int(rng.integers(3))
        for _ in range(1000):
            if band == 0:
                alpha = 1.0
                tau = float(rng.uniform(0.9, 0.9999))
                eta_v = float(rng.uniform(50.0, 1000.0))
                thr = cond3_beta_threshold(tau, eta_v)
            elif band == 1:
                low = bool(rng.integers(2))
                alpha = float(rng.uniform(0.05, 0.95) if low
                              else rng.uniform(1.05, 1.95))
                tau = alpha * float(rng.uniform(0.5, 0.999))
                eta_v = float(rng.uniform(50.0, 1000.0))
                thr = cond1_beta_threshold(alpha, tau, eta_v)
            else:
                alpha = float(rng.uniform(2.0, 5.0))
                eta_v = float(rng.uniform(30.0, 900.0))
                tau = math.log1p(eta_v) + float(rng.uniform(0.01, 5.0))
                if cond2_growth(alpha, tau) <= 1.0:
                    continue
                thr = cond2_beta_threshold(alpha, tau, eta_v)
            beta_v = thr * float(rng.uniform(1.01, 2.0))
            _, holds = scalar_condition_holds(alpha, tau, eta_v, beta_v)
            if holds:
                configs.append(LemmaCheckConfig(alpha=alpha, tau=tau,
                                                eta=eta_v, beta=beta_v))
                break
        else:
            raise RuntimeError("could not draw a prerequisite-satisfying "
                               "parameter point")
    failures = 0
    certified = 0
    pinned_seen = 0
    worst_tail = 0.0
    for cfg in configs:
        rep = verify_sublevel(cfg)
        if (cfg.alpha, cfg.eta, cfg.tau) in UNCERTIFIABLE_PRESETS:
            # These three bundled corners contradict their own growth
            # prerequisite (the alpha >= 2 certificate needs
            # alpha (2^(alpha-1) - 1) / (tau (alpha-1)) > 1, which fails at
            # alpha = 2.7 once tau exceeds ~3.572), so no beta can make the
            # certificate apply and the checker must refuse them.  The x = 1
            # maximum itself still has to verify by direct scan.
            if (not rep.applicable
                    and cond2_growth(cfg.alpha, cfg.tau) <= 1.0
                    and _sublevel_by_direct_scan(cfg)):
                pinned_seen += 1
            else:
                failures += 1
            continue
        if not (rep.applicable and rep.holds):
            failures += 1
            continue
        certified += 1
        if cfg.alpha == 1.0:
            tail = abs(f1_eval(1e8, cfg.tau, cfg.eta, cfg.beta)
                       / f1_limit(cfg.tau, cfg.beta) - 1.0)
        else:
            tail = abs(f_eval(1e8, cfg.alpha, cfg.tau, cfg.eta, cfg.beta)
                       / f_limit(cfg.alpha, cfg.tau, cfg.beta) - 1.0)
        worst_tail = max(worst_tail, float(tail))
    ok = (failures == 0 and pinned_seen == len(UNCERTIFIABLE_PRESETS)
          and worst_tail <= 1e-4)
    _verdict(capsys, 3,
             "the scalar maximizer sits at x=1 under every certificate", ok,
             f"{n_presets} preset points + 200 random draws: {certified} "
             f"certified and verified (slack 1e-12), {failures} failures; "
             f"{pinned_seen} known corners at alpha=2.7 fail their own "
             f"growth prerequisite, are refused by the checker, and still "
             f"verify by direct scan; worst x=1e8 limit deviation "
             f"{worst_tail:.2e} (tolerance 1e-4)")


def test_acceptance_4_alpha_tradeoff_at_the_optimum(capsys):
    # trend check on paired seeds; at most one reversal within one stderr
    alphas = (0.0, 0.5, 1.0, 2.0, 4.0)
    scns = [generate(ScenarioConfig(num_bs=2, num_ms=7, num_subchannels=4,
                                    seed=9000 + i)) for i in range(50)]
    thr, fi = [], []
    for alpha in alphas:
        p = Params(alpha=alpha, tau=8.0)
        reps = [exhaustive_search(scn, p) for scn in scns]
        thr.append([r.total_throughput for r in reps])
        fi.append([r.fairness_index for r in reps])
    ok_thr, why_thr = _trend(thr, "non-increasing")
    ok_fi, why_fi = _trend(fi, "non-decreasing")
    ok = ok_thr and ok_fi
    _verdict(capsys, 4,
             "raising alpha trades throughput for fairness at the global "
             "optimum", ok,
             f"50 seeds, alpha={alphas}: throughput means {_means(thr)} "
             f"{why_thr}; fairness means {_means(fi)} {why_fi}")


def test_acceptance_5_distributed_invariants(capsys):
    # no tolerance: feasibility, the round bound, nonempty service, and
    # per-BS candidate monotonicity must hold exactly on every instance
    problems = []
    for i in range(100):
        m = 100 if i % 2 == 0 else 300
        scn = generate(ScenarioConfig(num_bs=12, num_ms=m,
                                      num_subchannels=16, seed=7000 + i))
        p = Params(alpha=0.0, tau=8.5)
        alloc, trace = run_distributed(scn, p, default_p0(12, m, 16, 0.0))
        if not is_feasible(alloc, scn):
            problems.append((i, "infeasible"))
            continue
        if len(trace.rounds) > min(m, 12 * 16) + 12:
            problems.append((i, "round bound exceeded"))
            continue
        if not alloc.triples:
            problems.append((i, "nothing served"))
            continue
        series = {}
        for rec in trace.rounds:
            for a, v in rec.pa:
                series.setdefault(a, []).append(v)
        if any(b > a for vals in series.values()
               for a, b in zip(vals, vals[1:])):
            problems.append((i, "candidate value increased"))
    ok = not problems
    _verdict(capsys, 5,
             "the distributed protocol keeps its invariants on large "
             "instances", ok,
             f"100 instances (K=12, N=16, M alternating 100/300), "
             f"{len(problems)} violations: {problems[:3]}")


def test_acceptance_6_p0_controls_the_tradeoff(capsys):
    # fairness means must be non-increasing along the grid with NO
    # tolerance; throughput at p0* must beat both grid extremes
    ps = p0_star(12, 300, 16)
    grid = (0.2, 0.6, 1.0, ps, 2.0 * ps)
    scns = [generate(ScenarioConfig(num_bs=12, num_ms=300,
                                    num_subchannels=16, seed=i))
            for i in range(30)]
    p = Params(alpha=0.0, tau=8.5)
    fi_means, thr_means = [], []
    for p0 in grid:
        reps = [solve_distributed(scn, p, p0)[0] for scn in scns]
        fi_means.append(float(np.mean([r.fairness_index for r in reps])))
        thr_means.append(float(np.mean([r.total_throughput for r in reps])))
    fi_ok = all(b <= a for a, b in zip(fi_means, fi_means[1:]))
    thr_ok = thr_means[3] >= thr_means[0] and thr_means[3] >= thr_means[4]
    ok = fi_ok and thr_ok
    _verdict(capsys, 6,
             "lowering p0 favors fairness and p0* favors throughput", ok,
             f"30 seeds, grid {tuple(round(g, 4) for g in grid)}: fairness "
             f"means {[round(v, 4) for v in fi_means]} "
             f"{'non-increasing' if fi_ok else 'NOT monotone'}; throughput "
             f"means {[round(v, 1) for v in thr_means]} interior max "
             f"{'holds' if thr_ok else 'fails'}")


def test_acceptance_7_alpha_tradeoff_distributed(capsys):
    # trend check on paired seeds; at most one reversal within one stderr
    alphas = (0.0, 1.0, 2.0, 4.0)
    scns = [generate(ScenarioConfig(num_bs=12, num_ms=300,
                                    num_subchannels=16, seed=6000 + i))
            for i in range(30)]
    thr, fi = [], []
    for alpha in alphas:
        p = Params(alpha=alpha, tau=8.5)
        p0 = default_p0(12, 300, 16, alpha)
        reps = [solve_distributed(scn, p, p0)[0] for scn in scns]
        thr.append([r.total_throughput for r in reps])
        fi.append([r.fairness_index for r in reps])
    ok_thr, why_thr = _trend(thr, "non-increasing")
    ok_fi, why_fi = _trend(fi, "non-decreasing")
    ok = ok_thr and ok_fi
    _verdict(capsys, 7,
             "the alpha-adjusted threshold carries the fairness trade-off "
             "into the protocol", ok,
             f"30 seeds, alpha={alphas}: throughput means {_means(thr)} "
             f"{why_thr}; fairness means {_means(fi)} {why_fi}")


def test_acceptance_8_assignment_solver_is_exact(capsys):
    # exact float equality of the optimal matching value on every draw
    rng = np.random.default_rng(808)
    mismatches = 0
    for _ in range(100):
        w = rng.uniform(-1.0, 1.0, (5, 5))
        matching = max_weight_matching(WeightedBipartiteGraph(5, 5, w))
        mine = sum(w[i, j] for i, j in sorted(matching))
        if mine != brute_matching_best(w):
            mismatches += 1
    ok = mismatches == 0
    _verdict(capsys, 8,
             "the assignment solver matches full matching enumeration", ok,
             f"100 random 5x5 weight matrices with signs, exact equality, "
             f"{mismatches} mismatches")


def test_acceptance_9_csv_outputs_are_reproducible(tmp_path, capsys):
    # byte identity of both CSV files across two identical CLI runs
    args = ["sweep", "-K", "3", "-M", "12", "-N", "3", "--seed", "42",
            "--var", "p0", "--grid", "0.5,1.0,1.5",
            "--method", "distributed", "--num-seeds", "10",
            "--alpha", "0.0", "--tau", "8.5"]
    payloads = []
    codes = []
    for name in ("first", "second"):
        out = tmp_path / f"{name}.csv"
        codes.append(main(args + ["--out", str(out)]))
        capsys.readouterr()
        payloads.append((out.read_bytes(),
                         (tmp_path / f"{name}_agg.csv").read_bytes()))
    ok = codes == [0, 0] and payloads[0] == payloads[1]
    _verdict(capsys, 9,
             "identical CLI invocations write byte-identical CSVs", ok,
             f"sweep over p0 grid (0.5, 1.0, 1.5), 10 seeds, exit codes "
             f"{codes}, raw and aggregate files compared")
