import json
import math

import numpy as np
import pytest
from scipy.linalg import expm

import squeezelab as sq
from squeezelab.fock import (
    FockState,
    QuadratureSpec,
    SqueezeParams,
    TruncationError,
    _rotation_blocks,
    apply_ladder,
    default_cutoff,
)


def dense_ladder(dim):
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1)
    return a, a.conj().T


# ---------------------------------------------------------------------------
# constructors

def test_vacuum_identity():
    st = sq.vacuum_state(8)
    assert st.mean_photons() == 0.0
    mean, var, intensity = sq.quadrature_stats(st, QuadratureSpec.x2())
    assert (mean, var, intensity) == (0.0, 1.0, 1.0)


def test_coherent_alpha_zero_is_vacuum():
    st = sq.coherent_state(0.0)
    assert st.mean_photons() == 0.0
    assert abs(st.amps[0] - 1.0) < 1e-15


@pytest.mark.parametrize("alpha", [2.0, 1.0 + 1.0j, -0.5 + 2.3j])
def test_coherent_moments(alpha):
    st = sq.coherent_state(alpha)
    assert abs(st.norm() - 1.0) < 1e-9
    assert abs(st.mean_photons() - abs(alpha) ** 2) < 1e-8
    assert abs(sq.expectation(st, (("a", 0),)) - alpha) < 1e-8
    for angle in (0.0, 0.7, 2.0):
        _, var, _ = sq.quadrature_stats(st, QuadratureSpec.generic(0, angle))
        assert abs(var - 1.0) < 1e-6


def test_coherent_y2_intensity_against_dense_oracle():
    """<Y2† Y2> = 4N + 1 for a real amplitude, checked with dense matrices."""
    alpha = 2.0
    st = sq.coherent_state(alpha)
    a, ad = dense_ladder(st.mode_dims[0])
    y = a + ad
    brute = np.vdot(st.amps, y @ y @ st.amps).real
    mean, var, intensity = sq.quadrature_stats(st, QuadratureSpec.y2())
    assert abs(intensity - brute) < 1e-10
    assert abs(intensity - (4.0 * alpha**2 + 1.0)) < 1e-8
    assert abs(mean - 2.0 * alpha) < 1e-8


def test_coherent_phase_resolution_is_amplitude():
    res = sq.phase_resolution_of_mode(sq.coherent_state(3.0))
    assert abs(res.s - 3.0) < 1e-4


@pytest.mark.parametrize("mag", [1.0, 2.5, 4.0, 6.0])
def test_coherent_phase_resolution_invariance(mag):
    alpha = mag * np.exp(0.9j)
    res = sq.phase_resolution_of_mode(sq.coherent_state(alpha))
    assert abs(res.s - mag) < 1e-4


def test_coherent_small_cutoff_auto_raised():
    st = sq.coherent_state(2.0, cutoff=3)
    assert st.mode_dims[0] >= default_cutoff(4.0) + 1
    assert abs(st.mean_photons() - 4.0) < 1e-8


def test_squeezed_mean_photons():
    st = sq.squeezed_vacuum(SqueezeParams(1.0))
    assert abs(st.mean_photons() - math.sinh(1.0) ** 2) < 1e-6


@pytest.mark.parametrize("s,theta", [(0.6, 0.0), (1.0, 0.7), (1.3, math.pi)])
def test_squeezed_amplitudes_match_expm_oracle(s, theta):
    """Coefficient recursion vs exponentiating the squeeze generator."""
    st = sq.squeezed_vacuum(SqueezeParams(s, theta))
    dim = st.mode_dims[0]
    a, ad = dense_ladder(dim + 40)
    gen = 0.5 * s * (np.exp(-1j * theta) * a @ a - np.exp(1j * theta) * ad @ ad)
    vac = np.zeros(dim + 40, dtype=complex)
    vac[0] = 1.0
    ref = expm(gen) @ vac
    assert np.max(np.abs(st.amps - ref[:dim])) < 1e-9


def test_squeezed_zero_is_vacuum():
    st = sq.squeezed_vacuum(SqueezeParams(0.0))
    assert st.mean_photons() == 0.0
    _, var, _ = sq.quadrature_stats(st, QuadratureSpec.y2())
    assert var == pytest.approx(1.0, abs=1e-12)


def test_squeezed_odd_amplitudes_exactly_zero():
    st = sq.squeezed_vacuum(SqueezeParams(1.2, 0.4))
    assert np.all(st.amps[1::2] == 0.0)


def test_squeezed_minimal_variance():
    """theta=0 squeezes the cosine quadrature to exp(-2s)."""
    s = 1.0
    st = sq.squeezed_vacuum(SqueezeParams(s))
    variances = []
    for angle in np.linspace(0.0, math.pi, 37):
        _, var, _ = sq.quadrature_stats(st, QuadratureSpec.generic(0, angle))
        variances.append(var)
    assert abs(min(variances) - math.exp(-2.0 * s)) < 1e-6
    assert int(np.argmin(variances)) == 0  # squeezed axis at angle 0
    assert abs(max(variances) - math.exp(2.0 * s)) < 1e-5


def test_squeezed_a_squared_sign_convention():
    """<a²> = -sinh(s)cosh(s) at theta=0, by direct amplitude sum."""
    s = 1.0
    st = sq.squeezed_vacuum(SqueezeParams(s))
    amps = st.amps
    n = np.arange(amps.size - 2)
    brute = np.sum(np.conj(amps[:-2]) * amps[2:] * np.sqrt((n + 1.0) * (n + 2.0)))
    expected = -math.sinh(s) * math.cosh(s)
    assert abs(brute - expected) < 1e-8
    assert abs(sq.expectation(st, (("a", 0), ("a", 0))) - expected) < 1e-8


def test_squeezed_explicit_cutoff_too_small():
    with pytest.raises(TruncationError):
        sq.squeezed_vacuum(SqueezeParams(1.5), cutoff=8)


def test_squeeze_params_validation():
    with pytest.raises(ValueError):
        SqueezeParams(-0.1)
    assert SqueezeParams(1.0, 2.0 * math.pi + 0.3).theta == pytest.approx(0.3)
    assert SqueezeParams(1.0).mean_photons == pytest.approx(math.sinh(1.0) ** 2)


# ---------------------------------------------------------------------------
# expectation machinery

def test_expectation_number_operator():
    st = sq.number_state(3, 6)
    val = sq.expectation(st, (("ad", 0), ("a", 0)))
    assert abs(val - 3.0) < 1e-12


def test_expectation_hermitian_is_real():
    st = sq.coherent_state(1.5 + 0.5j)
    val = sq.expectation(st, (("ad", 0), ("a", 0)))
    assert abs(val.imag) < 1e-10


def test_expectation_term_sum():
    st = sq.coherent_state(2.0)
    terms = [(2.0, (("a", 0),)), (1.0, (("ad", 0), ("a", 0)))]
    val = sq.expectation(st, terms)
    assert abs(val - (2.0 * 2.0 + 4.0)) < 1e-8


def test_expectation_mode_out_of_range():
    st = sq.vacuum_state(4)
    with pytest.raises(ValueError):
        sq.expectation(st, (("a", 1),))


def test_apply_ladder_matches_dense():
    rng = np.random.default_rng(7)
    amps = rng.normal(size=(5, 4)) + 1j * rng.normal(size=(5, 4))
    a0, ad0 = dense_ladder(5)
    assert np.allclose(apply_ladder(amps, "a", 0), np.tensordot(a0, amps, axes=(1, 0)))
    assert np.allclose(apply_ladder(amps, "ad", 0), np.tensordot(ad0, amps, axes=(1, 0)))


# ---------------------------------------------------------------------------
# quadratures

def test_two_mode_vacuum_x3_normalized_and_raw():
    vac = sq.vacuum_state((3, 3))
    mean, var, intensity = sq.quadrature_stats(vac, QuadratureSpec.x3())
    assert (mean, var, intensity) == (0.0, 1.0, 1.0)
    # the bare i(a2 - a3) combination carries vacuum variance 2
    raw = [
        (-1.0, (("ad", 0), ("ad", 0))),
        (-1.0, (("a", 0), ("a", 0))),
        (1.0, (("ad", 1), ("ad", 1))),
        (1.0, (("a", 1), ("a", 1))),
        (1.0, (("ad", 0), ("a", 0))),
        (1.0, (("a", 0), ("ad", 0))),
        (1.0, (("ad", 1), ("a", 1))),
        (1.0, (("a", 1), ("ad", 1))),
        (-1.0, (("ad", 0), ("a", 1))),
        (-1.0, (("a", 0), ("ad", 1))),
        (-1.0, (("ad", 1), ("a", 0))),
        (-1.0, (("a", 1), ("ad", 0))),
    ]
    assert abs(sq.expectation(vac, raw) - 2.0) < 1e-12


@pytest.mark.parametrize(
    "state",
    [
        sq.coherent_state(1.5),
        sq.squeezed_vacuum(SqueezeParams(0.8)),
        sq.number_state(2, 12),
    ],
)
def test_uncertainty_product(state):
    _, var_x, _ = sq.quadrature_stats(state, QuadratureSpec.x2())
    _, var_y, _ = sq.quadrature_stats(state, QuadratureSpec.y2())
    assert var_x * var_y >= 1.0 - 1e-9


def test_distance_intensity_is_photon_number():
    st = sq.coherent_state(2.0 * np.exp(0.4j))
    for angle in (0.0, 0.4, 1.9):
        assert abs(sq.distance_intensity(st, QuadratureSpec.generic(0, angle)) - 4.0) < 1e-8
    sv = sq.squeezed_vacuum(SqueezeParams(0.9))
    assert abs(sq.distance_intensity(sv, QuadratureSpec.y2()) - math.sinh(0.9) ** 2) < 1e-8


def test_quadrature_mode_count_mismatch():
    with pytest.raises(ValueError):
        sq.quadrature_stats(sq.vacuum_state(4), QuadratureSpec.y3())


# ---------------------------------------------------------------------------
# beam splitter / mode mixing

def test_identity_splitter_preserves_state():
    cfg = sq.BeamSplitterConfig(t1=1.0, r1=0.0, t2=1.0, r2=0.0)
    inp = sq.product_state(sq.coherent_state(1.2 + 0.3j), sq.vacuum_state(2))
    out = sq.apply_beam_splitter(inp, cfg)
    d1 = inp.mode_dims[0]
    assert np.max(np.abs(out.amps[:d1, 0] - inp.amps[:, 0])) < 1e-12
    assert abs(out.norm() - 1.0) < 1e-9


def test_5050_splitter_on_coherent():
    alpha = 2.0
    cfg = sq.BeamSplitterConfig.from_reflectivity(math.sqrt(0.5))
    inp = sq.product_state(sq.coherent_state(alpha), sq.vacuum_state(2))
    out = sq.apply_beam_splitter(inp, cfg)
    assert abs(sq.expectation(out, (("a", 0),)) - alpha / math.sqrt(2.0)) < 1e-8
    assert abs(out.mean_photons(0) - alpha**2 / 2.0) < 1e-8
    assert abs(out.mean_photons(1) - alpha**2 / 2.0) < 1e-8
    _, var, _ = sq.quadrature_stats(out, QuadratureSpec.generic(0, 0.0))
    assert abs(var - 1.0) < 1e-8


def test_mixing_conserves_norm_and_photons():
    amps = np.zeros((4, 5), dtype=complex)
    amps[0, 0], amps[2, 1], amps[3, 4], amps[1, 2] = 0.5, 0.5j, -0.5, 0.5
    inp = FockState(amps)
    total_before = inp.mean_photons(0) + inp.mean_photons(1)
    cfg = sq.BeamSplitterConfig.from_reflectivity(0.6, delta=0.2, psi=1.1)
    out = sq.apply_beam_splitter(inp, cfg)
    assert abs(out.norm() - 1.0) < 1e-9
    assert abs(out.mean_photons(0) + out.mean_photons(1) - total_before) < 1e-9


def test_rotation_blocks_orthogonal_at_large_n():
    for theta in (0.2, 0.9):
        blocks = _rotation_blocks(theta, 200)
        for n in (50, 120, 200):
            b = blocks[n]
            assert np.max(np.abs(b @ b.T - np.eye(n + 1))) < 1e-11


def test_coherent_inputs_transform_by_mode_matrix():
    cfg = sq.BeamSplitterConfig.from_reflectivity(0.7, delta=-0.4, psi=0.9)
    m = cfg.mode_matrix()
    a1, a2 = 1.1 - 0.2j, 0.4 + 0.8j
    out = sq.apply_mode_unitary(sq.product_state(sq.coherent_state(a1), sq.coherent_state(a2)), m)
    got = np.array([sq.expectation(out, (("a", 0),)), sq.expectation(out, (("a", 1),))])
    assert np.max(np.abs(got - m @ np.array([a1, a2]))) < 1e-8


def test_bs_variance_matches_squeezing_formula():
    """Bright-port variance 1 - r2²(1 - e^{-2s}) at the optimal phases."""
    cfg = sq.BeamSplitterConfig.from_reflectivity(math.sqrt(0.3))
    inp = sq.product_state(sq.coherent_state(2.0), sq.squeezed_vacuum(SqueezeParams(0.5)))
    out = sq.apply_beam_splitter(inp, cfg)
    _, var, _ = sq.quadrature_stats(out, QuadratureSpec.generic(0, 0.0))
    assert abs(var - (1.0 - 0.3 * (1.0 - math.exp(-1.0)))) < 1e-6


def test_nonunitary_coefficients_rejected():
    cfg = sq.BeamSplitterConfig(t1=0.6, r1=0.8, t2=0.8, r2=0.6)
    inp = sq.product_state(sq.vacuum_state(2), sq.vacuum_state(2))
    with pytest.raises(ValueError):
        sq.apply_beam_splitter(inp, cfg)


def test_mixing_requires_two_modes():
    with pytest.raises(ValueError):
        sq.apply_mode_unitary(sq.vacuum_state(4), np.eye(2))


# ---------------------------------------------------------------------------
# serialization

def test_json_round_trip():
    st = sq.product_state(sq.coherent_state(1.0), sq.squeezed_vacuum(SqueezeParams(0.4)))
    payload = json.loads(json.dumps(sq.state_to_json(st)))
    back = sq.state_from_json(payload)
    assert back.mode_dims == st.mode_dims
    assert np.max(np.abs(back.amps - st.amps)) < 1e-15
