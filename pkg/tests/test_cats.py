import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from decoherence.cats import (CatSpec, amplitude_damping_fock, cat_dephase, cat_sector, cat_state,
                              coherence_time, coherent_overlap, coherent_state, cutoff_rule,
                              dephasing_factor, fringe_visibility, mandated_cutoff,
                              mixture_sector, visibility_curve)
from decoherence.errors import TruncationError


def test_cutoff_rule():
    assert cutoff_rule(0) == 6
    assert cutoff_rule(3) == 28
    # the rule alone leaves a tail above 1e-8 at alpha = 3
    assert mandated_cutoff(3) == 31


def test_truncation_enforced():
    with pytest.raises(TruncationError):
        coherent_state(3.0, 20)
    with pytest.raises(TruncationError):
        CatSpec(2.0, 5)


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 3), st.floats(0, 2 * math.pi))
def test_overlap_matches_closed_form(mag, phase):
    a = mag * np.exp(1j * phase)
    n = mandated_cutoff(a)
    ov = coherent_state(a, n).inner(coherent_state(-a, n))
    assert abs(abs(ov) - oracles.coherent_overlap_modulus(a)) < 1e-6
    assert abs(coherent_overlap(a, -a) - math.exp(-2 * mag**2)) < 1e-15


def test_mean_photon_number():
    assert coherent_state(2.0).mean_photon_number() == pytest.approx(4.0, abs=1e-6)


def test_cat_has_even_parity():
    cat = cat_state(CatSpec(1.5, mandated_cutoff(1.5)))
    assert np.all(cat.amplitudes[1::2] == 0)
    assert cat.inner(cat).real == pytest.approx(1.0)


def test_sector_matches_fock():
    a = 1.3
    sector = cat_sector(a)
    fock = sector.to_fock()
    cat = cat_state(CatSpec(a, mandated_cutoff(a)))
    np.testing.assert_allclose(fock, cat.density_matrix(), atol=1e-8)
    assert sector.trace() == pytest.approx(1.0, abs=1e-14)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.3, 2.5), st.floats(0, 3))
def test_dephasing_matches_kraus_oracle(a, kt):
    n = mandated_cutoff(a) + 10
    sector = cat_sector(a)
    damped = amplitude_damping_fock(sector.to_fock(n), math.exp(-kt))
    ours = cat_dephase(sector, 1.0, kt)
    np.testing.assert_allclose(ours.to_fock(n), damped, atol=1e-9)
    assert ours.trace() == pytest.approx(1.0, abs=1e-12)


def test_visibility_endpoints():
    assert fringe_visibility(cat_sector(2.0)) == pytest.approx(1.0)
    assert fringe_visibility(mixture_sector(2.0)) == 0.0
    # full relaxation leaves the cross terms at exp(-2 |alpha|^2), the vacuum overlap
    assert fringe_visibility(cat_dephase(cat_sector(2.0), 1.0, 50.0)) == pytest.approx(math.exp(-8.0))


def test_dephasing_factor_closed_form():
    assert dephasing_factor(2.0, 1.0, 0.0) == 1.0
    assert dephasing_factor(2.0, 1.0, 0.01) == pytest.approx(math.exp(-8 * (1 - math.exp(-0.01))))


def test_coherence_time_order_of_magnitude():
    # |alpha|^2 = 5 and a 100 us cavity lifetime put the 1/e time near 10 us
    t = coherence_time(math.sqrt(5), 1e4)
    assert 1e-6 < t < 1e-4
    assert dephasing_factor(math.sqrt(5), 1e4, t) == pytest.approx(math.exp(-1))


def test_visibility_curve_rows():
    rows = list(visibility_curve(1.0, 2.0, [0.0, 0.5]))
    assert rows[0][1] == 1.0
    assert rows[1][1] == pytest.approx(rows[1][2])
