"""Propagator, dense oracle, pass maps, protocol, approximation table."""

import math

import numpy as np
import pytest

from tpjc import (
    DensityMatrix,
    DimensionMismatch,
    FockVector,
    Mode,
    QubitFieldState,
    RabiFrequency,
    TpjcParams,
    TruncationTooSmall,
    add_photons_ideal,
    approx_error,
    build_hamiltonian,
    evolve_closed_form,
    evolve_oracle,
    fock_distribution,
    make_coherent,
    make_fock,
    mean_photon,
    pass_add,
    pass_subtract,
    pure_density,
    run_protocol,
    subtract_photons_ideal,
)

# cos^2(pi sqrt(27*26)) and sin^2 of the same, at 60-digit precision.
PASS_ADD_25_STAY = 0.00021962083683362364
PASS_ADD_25_MOVE = 0.99978037916316638


def random_joint_state(rng, dim):
    raw = rng.standard_normal(2 * dim) + 1j * rng.standard_normal(2 * dim)
    raw[dim - 2 : dim] = 0.0
    raw /= np.linalg.norm(raw)
    return QubitFieldState(raw[:dim], raw[dim:])


def random_density(rng, dim, zero_top=2):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    if zero_top:
        a[dim - zero_top :, :] = 0.0
    rho = a @ a.conj().T
    return DensityMatrix(rho / np.trace(rho).real)


def deviation(a: QubitFieldState, b: QubitFieldState) -> float:
    return float(
        np.linalg.norm(np.concatenate([a.e_amps - b.e_amps, a.g_amps - b.g_amps]))
    )


# ---------------------------------------------------------------------------
# parameters and frequency


def test_params_validation():
    with pytest.raises(ValueError):
        TpjcParams(g=0.0, t=1.0)
    with pytest.raises(ValueError):
        TpjcParams(g=1.0, t=-0.1)


def test_rabi_frequency():
    omega = RabiFrequency(2.0)
    assert omega(0) == pytest.approx(2.0 * math.sqrt(2.0))
    values = omega(np.arange(20))
    assert np.all(np.diff(values) > 0)


# ---------------------------------------------------------------------------
# closed-form propagator


def test_evolve_t0_identity():
    rng = np.random.default_rng(1)
    state = random_joint_state(rng, 24)
    out = evolve_closed_form(state, TpjcParams(g=1.0, t=0.0))
    assert deviation(out, state) < 1e-15


def test_evolve_vacuum_excited_block():
    # |0, e> oscillates against |2, g> at Omega(0) = g sqrt(2)
    dim = 16
    e = np.zeros(dim, dtype=complex)
    e[0] = 1.0
    state = QubitFieldState(e, np.zeros(dim, dtype=complex))
    for gt in (0.3, 0.7, 2.0):
        out = evolve_closed_form(state, TpjcParams(g=1.0, t=gt))
        assert abs(out.e_amps[0] - math.cos(math.sqrt(2.0) * gt)) < 1e-14
        assert abs(out.g_amps[2] - (-1j) * math.sin(math.sqrt(2.0) * gt)) < 1e-14
        others = np.concatenate([out.e_amps[1:], out.g_amps[:2], out.g_amps[3:]])
        assert np.all(others == 0.0)


def test_evolve_vacuum_ground_is_dark():
    dim = 12
    g = np.zeros(dim, dtype=complex)
    g[0] = 1.0
    state = QubitFieldState(np.zeros(dim, dtype=complex), g)
    for gt in (0.5, math.pi, 9.0):
        out = evolve_closed_form(state, TpjcParams(g=1.0, t=gt))
        assert deviation(out, state) == 0.0


def test_evolve_guards_top_excited_amplitudes():
    dim = 16
    e = np.zeros(dim, dtype=complex)
    e[dim - 1] = 1.0
    state = QubitFieldState(e, np.zeros(dim, dtype=complex))
    with pytest.raises(TruncationTooSmall):
        evolve_closed_form(state, TpjcParams(g=1.0, t=1.0))


def test_evolve_preserves_joint_norm():
    rng = np.random.default_rng(4)
    for _ in range(10):
        state = random_joint_state(rng, 48)
        out = evolve_closed_form(state, TpjcParams(g=1.0, t=math.pi))
        assert abs(out.joint_norm() - 1.0) < 1e-10


# ---------------------------------------------------------------------------
# Hamiltonian and oracle


def test_hamiltonian_matrix_elements():
    dim = 8
    h = build_hamiltonian(dim, 1.3)
    assert h[dim + 2, 0] == pytest.approx(1.3 * math.sqrt(2.0))
    assert h[dim + 5, 3] == pytest.approx(1.3 * math.sqrt(5.0 * 4.0))
    # no coupling inside the excited or ground blocks
    assert np.all(h[:dim, :dim] == 0.0)
    assert np.all(h[dim:, dim:] == 0.0)
    assert np.max(np.abs(h - h.conj().T)) == 0.0


def test_hamiltonian_needs_three_levels():
    with pytest.raises(ValueError):
        build_hamiltonian(2, 1.0)


def test_oracle_t0_identity_and_unitarity():
    rng = np.random.default_rng(6)
    state = random_joint_state(rng, 20)
    out0 = evolve_oracle(state, TpjcParams(g=1.0, t=0.0))
    assert deviation(out0, state) < 1e-12
    out = evolve_oracle(state, TpjcParams(g=1.0, t=math.pi))
    assert abs(out.joint_norm() - 1.0) < 1e-10


def test_closed_form_matches_oracle():
    rng = np.random.default_rng(8)
    worst = 0.0
    for _ in range(20):
        state = random_joint_state(rng, 48)
        for gt in (0.3, math.pi, 7.1):
            params = TpjcParams(g=1.0, t=gt)
            worst = max(
                worst, deviation(evolve_closed_form(state, params), evolve_oracle(state, params))
            )
    assert worst < 1e-8


def test_closed_form_matches_oracle_g_not_one():
    rng = np.random.default_rng(15)
    state = random_joint_state(rng, 32)
    params = TpjcParams(g=0.37, t=5.0)
    assert deviation(evolve_closed_form(state, params), evolve_oracle(state, params)) < 1e-10


# ---------------------------------------------------------------------------
# pass maps


def test_pass_add_on_fock_25():
    rho = pure_density(make_fock(25, 64))
    out = pass_add(rho)
    stay = out.elems[25, 25].real
    move = out.elems[27, 27].real
    assert abs(stay - PASS_ADD_25_STAY) < 1e-14
    assert abs(move - PASS_ADD_25_MOVE) < 1e-14
    assert abs(stay + move - 1.0) < 1e-14


def test_pass_add_trace_and_hermiticity():
    rng = np.random.default_rng(10)
    rho = random_density(rng, 40)
    out = pass_add(rho)
    assert abs(out.trace() - 1.0) < 1e-12
    assert out.hermiticity_defect() < 1e-14


def test_pass_add_guards_top_mass():
    with pytest.raises(TruncationTooSmall):
        pass_add(pure_density(make_fock(63, 64)))


def test_pass_subtract_vacuum_dark():
    rho = pure_density(make_fock(0, 16))
    out = pass_subtract(rho)
    np.testing.assert_array_equal(out.elems, rho.elems)


def test_pass_subtract_trace_preserving():
    rng = np.random.default_rng(12)
    rho = random_density(rng, 40, zero_top=0)
    out = pass_subtract(rho)
    assert abs(out.trace() - 1.0) < 1e-12
    assert out.hermiticity_defect() < 1e-14


def test_pass_maps_match_reduced_evolution():
    # one pass = evolve the pure state with the qubit attached at gt = pi,
    # then trace the qubit out
    rng = np.random.default_rng(14)
    dim = 48
    psi = FockVector(
        np.concatenate(
            [
                (rng.standard_normal(dim - 2) + 1j * rng.standard_normal(dim - 2)),
                np.zeros(2),
            ]
        )
    ).normalized()
    params = TpjcParams(g=1.0, t=math.pi)

    excited = QubitFieldState(psi.amps, np.zeros(dim, dtype=complex))
    out = evolve_closed_form(excited, params)
    reduced = np.outer(out.e_amps, out.e_amps.conj()) + np.outer(out.g_amps, out.g_amps.conj())
    np.testing.assert_allclose(pass_add(pure_density(psi)).elems, reduced, atol=1e-12)

    ground = QubitFieldState(np.zeros(dim, dtype=complex), psi.amps)
    out = evolve_closed_form(ground, params)
    reduced = np.outer(out.e_amps, out.e_amps.conj()) + np.outer(out.g_amps, out.g_amps.conj())
    np.testing.assert_allclose(pass_subtract(pure_density(psi)).elems, reduced, atol=1e-12)


# ---------------------------------------------------------------------------
# single-pass consistency with the ideal ladder states


def test_single_pass_approximates_photon_addition():
    rng = np.random.default_rng(16)
    dim = 64
    raw = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    raw[:3] = 0.0  # support on j >= 3
    raw[dim - 2 :] = 0.0
    psi = FockVector(raw).normalized()

    out = evolve_closed_form(
        QubitFieldState(psi.amps, np.zeros(dim, dtype=complex)), TpjcParams(g=1.0, t=math.pi)
    )
    ideal = add_photons_ideal(psi, 1)
    overlap_sq = abs(np.vdot(ideal.amps, out.g_amps)) ** 2

    p = fock_distribution(psi)
    # sqrt((j+2)(j+1)) < j+2, so (j+2) * relative error bounds the absolute
    # detuning of each block from the half-integer multiple of pi
    eps = sum(
        p[j] * (math.pi * (j + 2) * approx_error(j, Mode.ADD)) ** 2
        for j in range(3, dim)
        if p[j] > 0
    )
    assert overlap_sq >= 1.0 - eps
    # the qubit ends (approximately) flipped to the ground state
    assert float(np.linalg.norm(out.e_amps)) ** 2 <= eps


def test_single_pass_approximates_photon_subtraction():
    rng = np.random.default_rng(18)
    dim = 64
    raw = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    raw[:6] = 0.0  # support on j >= 6
    psi = FockVector(raw).normalized()

    out = evolve_closed_form(
        QubitFieldState(np.zeros(dim, dtype=complex), psi.amps), TpjcParams(g=1.0, t=math.pi)
    )
    ideal, _ = subtract_photons_ideal(psi, 1)
    overlap_sq = abs(np.vdot(ideal.amps, out.e_amps)) ** 2

    p = fock_distribution(psi)
    eps = sum(
        p[j] * (math.pi * j * approx_error(j, Mode.SUBTRACT)) ** 2
        for j in range(6, dim)
        if p[j] > 0
    )
    assert overlap_sq >= 1.0 - eps
    assert float(np.linalg.norm(out.g_amps)) ** 2 <= eps


# ---------------------------------------------------------------------------
# protocol


def test_protocol_m0_is_identity():
    psi = make_coherent(3, 64)
    result = run_protocol(psi, 0, Mode.ADD)
    assert len(result.fidelity_series) == 1
    assert result.fidelity_series[0][0] == 0
    assert result.fidelity_series[0][1] == pytest.approx(1.0, abs=1e-12)
    assert result.final_dist == result.initial_dist
    assert result.mean_photon_final == result.mean_photon_initial


def test_protocol_small_add_run():
    psi = make_coherent(3, 80)
    result = run_protocol(psi, 3, Mode.ADD)
    assert len(result.fidelity_series) == 4
    assert result.fidelity_series[0][1] == pytest.approx(1.0, abs=1e-12)
    fids = [f for _, f in result.fidelity_series]
    assert all(0.0 <= f <= 1.0 for f in fids)
    assert all(b <= a + 1e-6 for a, b in zip(fids, fids[1:]))
    assert fids[1] >= 0.99
    assert abs(result.mean_photon_final - (9.0 + 6.0)) < 0.01
    assert abs(sum(p for _, p in result.final_dist) - 1.0) < 1e-10
    assert result.warnings == []


def test_protocol_subtract_warns_on_low_components():
    psi = make_coherent(3, 80)
    result = run_protocol(psi, 2, Mode.SUBTRACT)
    assert any("low-component mass" in w for w in result.warnings)


def test_protocol_pads_to_requested_dim():
    psi = make_coherent(3, 60)
    result = run_protocol(psi, 1, Mode.ADD, dim=80)
    assert len(result.final_dist) == 80
    with pytest.raises(DimensionMismatch):
        run_protocol(psi, 1, Mode.ADD, dim=40)


def test_protocol_mean_photon_matches_distribution():
    psi = make_coherent(4, 90)
    result = run_protocol(psi, 2, Mode.ADD)
    mean_from_dist = sum(j * p for j, p in result.final_dist)
    assert abs(mean_from_dist - result.mean_photon_final) < 1e-10


# ---------------------------------------------------------------------------
# linearized-Rabi error table


def test_approx_error_reference_points():
    assert abs(approx_error(3, Mode.ADD) - 6.2305898749053634e-3) < 1e-15
    assert abs(approx_error(6, Mode.SUBTRACT) - 4.1580220928045413e-3) < 1e-15


def test_approx_error_monotone_decreasing():
    add_errors = [approx_error(j, Mode.ADD) for j in range(201)]
    assert all(b < a for a, b in zip(add_errors, add_errors[1:]))
    sub_errors = [approx_error(j, Mode.SUBTRACT) for j in range(2, 201)]
    assert all(b < a for a, b in zip(sub_errors, sub_errors[1:]))


def test_approx_error_asymptotics():
    err = approx_error(100, Mode.ADD)
    assert err < 1.3e-5
    # err ~ 1/(8 j^2) for large j
    assert abs(approx_error(200, Mode.ADD) * 8 * 200**2 - 1.0) < 0.05


def test_approx_error_domain():
    with pytest.raises(ValueError):
        approx_error(-1, Mode.ADD)
    with pytest.raises(ValueError):
        approx_error(1, Mode.SUBTRACT)
