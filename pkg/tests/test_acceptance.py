"""End-to-end acceptance criteria, one test per criterion.

Each test prints a single ``ACCEPTANCE <n> [PASS|FAIL] ...`` line (shown even
without ``-s``) before asserting.
"""

import numpy as np
import pytest
import scipy.linalg

from csarray.array_model import AngleGrid, array_factor_full, array_factor_symmetric, SymmetricArray
from csarray.cs_synthesis import (
    Dictionary,
    PositionGrid,
    SolverConfig,
    build_dictionary,
    sample_target,
    solve_l1,
    solve_l2_baseline,
)
from csarray.cs_theory import restricted_isometry_constant
from csarray.metrics import sidelobe_peaks
from csarray.reference_patterns import ChebyshevSpec, chebyshev_excitations
from csarray.repro import run_example

from oracles import dolph_weights_oracle, gaussian_unit_columns, l1_vertex_oracle, rip_pairs_oracle

pytestmark = pytest.mark.acceptance

# equality-constrained recovery: the residual ball shrinks to rounding level
EXACT = SolverConfig(epsilon=1e-9)


@pytest.fixture
def report(capsys):
    def emit(n, passed, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {n} [{'PASS' if passed else 'FAIL'}] {detail}")
        return passed

    return emit


def _repro(report, n, key):
    rep, checks, agreement, _ = run_example(key)
    within = sum(d <= 0.2 for _, _, d in agreement)
    summary = "; ".join(c.line() for c in checks)
    ok = all(c.passed for c in checks)
    report(n, ok, f"{key}: {summary}; positional agreement {within}/{len(agreement)} within 0.2 lambda (informative)")
    assert ok, summary


def test_criterion_1_example1(report):
    _repro(report, 1, "example1")


def test_criterion_2_example2(report):
    _repro(report, 2, "example2")


def test_criterion_3_chebyshev(report):
    arr = chebyshev_excitations(ChebyshevSpec(20, -30.0))
    levels = np.array([lvl for _, lvl in sidelobe_peaks(array_factor_symmetric(arr, AngleGrid.uniform(2001)))])
    weight_err = float(np.max(np.abs(arr.excitations - dolph_weights_oracle(20, -30.0))))
    ok = levels.size > 0 and bool(np.all((levels >= -30.1) & (levels <= -29.9))) and weight_err <= 1e-9
    report(
        3,
        ok,
        f"{levels.size} sidelobes in [{levels.min():.4f}, {levels.max():.4f}] dB; max weight error {weight_err:.2e}",
    )
    assert ok


def _planted(rng, m, n, k, lo):
    A = gaussian_unit_columns(rng, m, n)
    r0 = np.zeros(n)
    idx = rng.choice(n, k, replace=False)
    r0[idx] = rng.uniform(lo, lo + 1.0, k) * rng.choice([-1.0, 1.0], k)
    return A, r0, np.sort(idx)


def test_criterion_4_recovery(report):
    rng = np.random.default_rng(20240601)
    exact = 0
    for _ in range(100):
        A, r0, idx = _planted(rng, 20, 50, 3, 0.5)
        sol = solve_l1(Dictionary(A, None, None), A @ r0, EXACT)
        if np.array_equal(sol.support(), idx) and np.abs(sol.coefficients - r0).max() <= 1e-4:
            exact += 1

    worst = 0.0
    n_small = 0
    for seed in range(30):
        small = np.random.default_rng(seed)
        m, n = [(4, 8), (5, 10), (6, 12)][seed % 3]
        A, r0, _ = _planted(small, m, n, 1 + seed % 3, 0.2)
        f = A @ r0
        best, _ = l1_vertex_oracle(A, f)
        sol = solve_l1(Dictionary(A, None, None), f, EXACT)
        worst = max(worst, abs(sol.l1_norm - best) / best)
        n_small += 1
    ok = exact >= 90 and worst <= 1e-4
    report(4, ok, f"exact recovery in {exact}/100 trials; worst l1 gap vs oracle {worst:.2e} over {n_small} small instances")
    assert ok


def test_criterion_5_sparsity_contrast(report, example_dictionary, chebyshev_ref, example_grid):
    f = sample_target(chebyshev_ref, example_grid)
    l1 = solve_l1(example_dictionary, f).support().size
    l2 = solve_l2_baseline(example_dictionary, f).support().size
    ok = l1 <= 0.25 * l2
    report(5, ok, f"l1 support {l1} vs l2 support {l2} (ratio {l1 / l2:.3f}, limit 0.25)")
    assert ok


def test_criterion_6_rip(report):
    worst = 0.0
    monotone = True
    for seed in range(20):
        Phi = gaussian_unit_columns(np.random.default_rng(seed), 6, 10)
        worst = max(worst, abs(restricted_isometry_constant(Phi, 2).delta_k - rip_pairs_oracle(Phi)))
        d = [restricted_isometry_constant(Phi, k).delta_k for k in (1, 2, 3)]
        monotone &= d[0] <= d[1] <= d[2]
    # exactly representable orthonormal columns, so the Gram matrix is exactly I
    ortho = [np.eye(6), scipy.linalg.hadamard(16) / 4, scipy.linalg.hadamard(4)[:, :3] / 2]
    zeros = [restricted_isometry_constant(Q, k).delta_k for Q in ortho for k in (1, 2, 3, Q.shape[1])]
    Q, _ = np.linalg.qr(np.random.default_rng(0).standard_normal((8, 5)))
    rounded = max(restricted_isometry_constant(Q, k).delta_k for k in range(1, 6))
    ok = worst <= 1e-12 and monotone and all(z == 0.0 for z in zeros)
    report(
        6,
        ok,
        f"max |delta_2 - oracle| {worst:.2e}; monotone K=1..3: {monotone}; exact orthonormal max delta {max(zeros):.1e} "
        f"(QR-orthonormal, informative: {rounded:.1e})",
    )
    assert ok


def test_criterion_7_model_consistency(report):
    rng = np.random.default_rng(7)
    grid = AngleGrid.uniform(201, -1, 1)
    pos_grid = PositionGrid(10.0, 0.1)
    D = build_dictionary(pos_grid, grid)
    worst_sym = worst_dict = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 21))
        pos = np.sort(rng.choice(np.linspace(0, 10, 100001), n, replace=False))
        exc = rng.uniform(0, 1, n)
        arr = SymmetricArray(pos, exc)
        scale = 2 * exc.sum()
        sym = array_factor_symmetric(arr, grid).values
        full = array_factor_full(arr.mirrored(), grid).values
        worst_sym = max(worst_sym, np.max(np.abs(sym - full)) / scale)

        idx = np.sort(rng.choice(pos_grid.n, n, replace=False))
        r = np.zeros(pos_grid.n)
        r[idx] = exc
        f = sample_target(SymmetricArray(pos_grid.positions[idx], exc), grid)
        worst_dict = max(worst_dict, np.max(np.abs(D.matrix @ r - f)) / scale)
    ok = worst_sym <= 1e-12 and worst_dict <= 1e-12
    report(7, ok, f"1000 arrays: symmetric vs mirrored {worst_sym:.2e}, dictionary vs direct {worst_dict:.2e} (relative to 2*sum R)")
    assert ok
