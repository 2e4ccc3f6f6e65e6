import math

import numpy as np
import pytest
from scipy.linalg import expm

from decoherence.errors import DomainEscapeError
from decoherence.evolution import GridSpec
from decoherence.zeno_toy import (SCAN_COLUMNS, ZenoToyParams, _ModeEvolver, build_zeno_toy,
                                  classify_regime, gamma_sweep, initial_pointer,
                                  momentum_eigenvalues, momentum_matrix, pointer_grid_for,
                                  run_zeno_toy)


def test_momentum_spectrum_matches_fft():
    grid = GridSpec(-4.0, 3.75, 32)
    ev = np.sort(np.linalg.eigvalsh(momentum_matrix(grid)))
    np.testing.assert_allclose(ev, np.sort(momentum_eigenvalues(grid)), atol=1e-12)


def test_mode_evolution_matches_dense_propagator():
    grid = pointer_grid_for(3.0, 1.0, points_per_width=4)
    params = ZenoToyParams(V=1.0, E=2.0, gammaCoupling=3.0, pointerGrid=grid)
    op = build_zeno_toy(params).matrix
    n = grid.nPoints
    psi0 = np.concatenate([initial_pointer(params), np.zeros(n)])
    psi = expm(-1j * op * 0.7) @ psi0
    p2_dense = float(np.sum(np.abs(psi[n:]) ** 2))
    assert _ModeEvolver(params).p2(0.7) == pytest.approx(p2_dense, abs=1e-10)


def test_uncoupled_is_rabi():
    params = ZenoToyParams(1.0, 0.0, 0.0, pointer_grid_for(0.0, math.pi / 2))
    rec = run_zeno_toy(params, math.pi / 2, 0.01)
    np.testing.assert_allclose(rec.p2, np.sin(rec.times) ** 2, atol=1e-12)


def test_early_slope_is_two():
    recs = gamma_sweep([0.0, 10.0], V=1.0, E=20.0)
    for r in recs:
        assert r.early_slope == pytest.approx(2.0, abs=0.1)


def test_strong_coupling_suppresses():
    weak, strong = gamma_sweep([0.0, 2000.0], V=1.0, E=20.0)
    assert strong.max_p2 < 0.1 * weak.max_p2
    assert strong.regime == "suppressed"


def test_classifier():
    assert classify_regime(2.0, 1.05, 0.5, 1.0) == "linear"
    assert classify_regime(2.0, 1.5, 0.5, 1.0) == "quadratic"
    assert classify_regime(2.0, 1.0, 0.01, 1.0) == "suppressed"


def test_small_grid_escapes():
    params = ZenoToyParams(1.0, 0.0, 50.0, GridSpec(-6.0, 5.875, 96))
    with pytest.raises(DomainEscapeError):
        run_zeno_toy(params, 1.0, 0.01)


def test_scan_row_layout():
    rec = gamma_sweep([1.0], V=1.0, E=20.0)[0]
    assert len(rec.scan_row()) == len(SCAN_COLUMNS)
    assert rec.scan_row()[1] == 1.0  # tResolve = width / gamma


def test_threaded_sweep_is_deterministic():
    a = gamma_sweep([0.0, 4.0, 16.0], V=1.0, E=20.0)
    b = gamma_sweep([0.0, 4.0, 16.0], V=1.0, E=20.0, workers=3)
    for x, y in zip(a, b):
        assert np.array_equal(x.p2, y.p2)
