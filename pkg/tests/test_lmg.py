"""Collective-spin model: sector matrices against brute-force tensor oracles,
full-trace thermodynamics, and the finite-temperature mean field."""

import math

import numpy as np
import pytest
from scipy.special import logsumexp

from thermofid import core
from thermofid.errors import DomainError
from thermofid.lmg import (
    Lmg,
    LmgParams,
    lmg_build_matrix,
    lmg_full_log_z,
    lmg_log_z,
    lmg_meanfield_critical_temperature,
    lmg_meanfield_free_energy,
    lmg_meanfield_residual,
    lmg_meanfield_solve,
    lmg_sector_energies,
    log_sector_degeneracy,
)

M_ROOT_T05 = 0.9575040240772686   # m = tanh(2m), bisection
TC_08 = 0.7281913813014699        # 0.8 / atanh(0.8)

SX = np.array([[0.0, 1.0], [1.0, 0.0]])
SY = np.array([[0.0, -1.0j], [1.0j, 0.0]])
SZ = np.diag([1.0, -1.0])


def brute_hamiltonian(n, gamma, lam):
    def site(op, i):
        out = np.array([[1.0]])
        for j in range(n):
            out = np.kron(out, op if j == i else np.eye(2))
        return out

    h = np.zeros((2**n, 2**n), dtype=complex)
    for i in range(n):
        for j in range(i + 1, n):
            h -= (site(SX, i) @ site(SX, j) + gamma * site(SY, i) @ site(SY, j)) / n
        h -= lam * site(SZ, i)
    assert np.abs(h.imag).max() < 1e-14
    return h.real


def test_params_validation():
    with pytest.raises(DomainError):
        LmgParams(1, 0.2, 0.0)
    with pytest.raises(DomainError):
        LmgParams(4, 1.2, 0.0)
    with pytest.raises(DomainError):
        LmgParams(4, 0.2, -0.1)


def test_matrix_is_banded_and_symmetric():
    mat = lmg_build_matrix(LmgParams(6, 0.3, 0.4))
    assert np.array_equal(mat, mat.T)
    for i in range(7):
        for j in range(7):
            if abs(i - j) not in (0, 2):
                assert mat[i, j] == 0.0


def test_matrix_entries_explicit():
    n, gamma, lam = 4, 0.3, 0.7
    mat = lmg_build_matrix(LmgParams(n, gamma, lam))
    s = n / 2.0
    c = s * (s + 1.0)
    for idx in range(n + 1):
        m = idx - s
        expected = -(1 + gamma) / n * (c - m * m - n / 2.0) - 2.0 * lam * m
        assert mat[idx, idx] == pytest.approx(expected, rel=1e-14)
    for idx in range(n - 1):
        m = idx - s
        expected = -(1 - gamma) / (2.0 * n) * math.sqrt(
            (c - m * (m + 1)) * (c - (m + 1) * (m + 2))
        )
        assert mat[idx, idx + 2] == pytest.approx(expected, rel=1e-14)


def test_gamma_one_matrix_is_diagonal():
    mat = lmg_build_matrix(LmgParams(5, 1.0, 0.3))
    assert np.abs(mat - np.diag(np.diag(mat))).max() == 0.0


def test_two_spin_sector_matches_tensor_oracle():
    # project the explicit two-spin Hamiltonian onto the triplet
    gamma, lam = 0.2, 0.5
    h = brute_hamiltonian(2, gamma, lam)
    up_up = np.array([1.0, 0.0, 0.0, 0.0])
    sym = np.array([0.0, 1.0, 1.0, 0.0]) / math.sqrt(2.0)
    down_down = np.array([0.0, 0.0, 0.0, 1.0])
    basis = np.column_stack([down_down, sym, up_up])  # m = -1, 0, +1
    triplet = basis.T @ h @ basis
    oracle = np.sort(np.linalg.eigvalsh(triplet))
    ours = lmg_sector_energies(LmgParams(2, gamma, lam))
    assert np.allclose(ours, oracle, atol=1e-13)
    z_oracle = float(logsumexp(-1.0 * oracle))
    assert lmg_log_z(1.0, LmgParams(2, gamma, lam)) == pytest.approx(z_oracle, abs=1e-12)


def test_sector_spectrum_matches_dense_eigh():
    params = LmgParams(30, 0.4, 0.6)
    dense = np.sort(np.linalg.eigvalsh(lmg_build_matrix(params)))
    assert np.allclose(lmg_sector_energies(params), dense, atol=1e-10)


def test_sector_log_z_ground_state_dominance():
    # polarized field: nondegenerate ground state (no parity doublet)
    params = LmgParams(12, 0.2, 1.5)
    energies = lmg_sector_energies(params)
    beta = 200.0
    assert lmg_log_z(beta, params) / (-beta) == pytest.approx(energies.min(), abs=1e-3)


@pytest.mark.parametrize("n,gamma,lam,beta", [
    (2, 0.2, 0.5, 1.0),
    (5, 0.2, 0.4, 0.8),
    (8, 0.7, 0.9, 1.3),
])
def test_full_trace_matches_brute_force(n, gamma, lam, beta):
    brute = float(logsumexp(-beta * np.linalg.eigvalsh(brute_hamiltonian(n, gamma, lam))))
    assert lmg_full_log_z(beta, LmgParams(n, gamma, lam)) == pytest.approx(brute, abs=1e-10)


def test_degeneracies_sum_to_hilbert_dimension():
    n = 9
    total = 0.0
    for k in range(n // 2 + 1):
        s = 0.5 * n - k
        dim = int(round(2 * s)) + 1
        total += dim * math.exp(log_sector_degeneracy(n, s))
    assert total == pytest.approx(2.0**n, rel=1e-12)


def test_full_trace_exceeds_sector_trace():
    params = LmgParams(20, 0.2, 0.5)
    assert lmg_full_log_z(1.0, params) > lmg_log_z(1.0, params)


def test_fidelity_two_evaluation_routes_agree():
    # overlap of level populations vs the lnZ combination
    from thermofid.lmg import _full_levels

    n, gamma, lam = 120, 0.2, 0.5
    model = Lmg(n, gamma)
    energies, weights = _full_levels(n, gamma, lam)
    beta0, beta1 = 0.9, 1.1

    def log_populations(beta):
        ln = weights - beta * energies
        return ln - logsumexp(ln)

    overlap = math.exp(logsumexp(0.5 * log_populations(beta0) + 0.5 * log_populations(beta1)))
    assert core.fidelity_beta(model, beta0, beta1, lam) == pytest.approx(overlap, abs=1e-12)


def test_exact_cv_peak_approaches_meanfield_line():
    lam = 0.5
    tc = lmg_meanfield_critical_temperature(lam)
    t_axis = np.round(np.arange(0.70, 1.10001, 0.004), 10)
    gaps = []
    for n in (100, 200, 400, 800):
        model = Lmg(n, 0.2)
        col = [core.specific_heat(model, core.ThermoPoint(1.0 / t, lam), 2e-3) / n
               for t in t_axis]
        gaps.append(abs(t_axis[int(np.argmax(col))] - tc))
    assert all(b <= a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < gaps[0]


# ---------------------------------------------------------------------------
# mean field
# ---------------------------------------------------------------------------

def test_residual_vs_single_spin_gibbs_oracle():
    # decoupled-spin Hamiltonian -m_x sx - gamma m_y sy - lam sz: the map's
    # output magnetization is the thermal expectation of (sx, sy)
    rng = np.random.default_rng(11)
    for _ in range(25):
        m_x, m_y = rng.uniform(-0.9, 0.9, 2)
        beta = rng.uniform(0.3, 4.0)
        lam = rng.uniform(0.0, 1.2)
        gamma = rng.uniform(0.0, 0.95)
        h = -m_x * SX - gamma * m_y * SY - lam * SZ
        w, v = np.linalg.eigh(h)
        p = np.exp(-beta * (w - w.min()))
        p /= p.sum()
        rho = (v * p) @ v.conj().T
        exp_x = float(np.trace(rho @ SX).real)
        exp_y = float(np.trace(rho @ SY).real)
        res = lmg_meanfield_residual(m_x, m_y, beta, lam, gamma)
        assert res[0] == pytest.approx(m_x - exp_x, abs=1e-12)
        assert res[1] == pytest.approx(m_y - exp_y, abs=1e-12)


def test_residual_trivial_solution():
    assert lmg_meanfield_residual(0.0, 0.0, 2.0, 0.0, 0.3) == (0.0, 0.0)


def test_meanfield_solve_zero_field_root():
    sol = lmg_meanfield_solve(2.0, 0.0, 0.0)
    assert sol.branch == "m_x"
    assert sol.m_y == 0.0
    assert sol.m_x == pytest.approx(M_ROOT_T05, abs=1e-10)
    res = lmg_meanfield_residual(sol.m_x, 0.0, 2.0, 0.0, 0.0)
    assert abs(res[0]) < 1e-10


def test_meanfield_trivial_above_critical_line():
    lam = 0.4
    tc = lmg_meanfield_critical_temperature(lam)
    sol = lmg_meanfield_solve(1.0 / (tc * 1.05), lam, 0.2)
    assert sol.branch == "trivial"
    assert sol.m_x == 0.0


def test_meanfield_nonzero_root_below_critical_line():
    lam = 0.4
    tc = lmg_meanfield_critical_temperature(lam)
    sol = lmg_meanfield_solve(1.0 / (0.9 * tc), lam, 0.2)
    assert sol.branch == "m_x"
    assert sol.m_x > 0.05
    f_trivial = lmg_meanfield_free_energy(0.0, 0.0, 1.0 / (0.9 * tc), lam, 0.2)
    assert sol.free_energy_per_spin < f_trivial


def test_meanfield_order_parameter_monotone_and_continuous():
    lam = 0.3
    tc = lmg_meanfield_critical_temperature(lam)
    ts = np.linspace(0.2, tc * 0.999, 25)
    ms = [lmg_meanfield_solve(1.0 / t, lam, 0.0).m_x for t in ts]
    assert all(b < a for a, b in zip(ms, ms[1:]))
    assert ms[-1] < 0.1  # second-order: vanishes approaching the line


def test_meanfield_gamma_independent_on_supported_branch():
    for t in (0.4, 0.7, 0.95):
        sols = [lmg_meanfield_solve(1.0 / t, 0.3, g).m_x for g in (0.0, 0.2, 0.5)]
        assert sols[0] == sols[1] == sols[2]


def test_meanfield_solve_domain():
    with pytest.raises(DomainError):
        lmg_meanfield_solve(1.0, 0.3, 1.0)
    with pytest.raises(DomainError):
        lmg_meanfield_solve(-1.0, 0.3, 0.0)


def test_critical_temperature_endpoints_and_value():
    assert lmg_meanfield_critical_temperature(0.0) == 1.0
    assert lmg_meanfield_critical_temperature(1.0) == 0.0
    assert lmg_meanfield_critical_temperature(0.8) == pytest.approx(TC_08, abs=1e-14)
    with pytest.raises(DomainError):
        lmg_meanfield_critical_temperature(1.1)


def test_critical_temperature_matches_solver_onset():
    lam = 0.6
    tc = lmg_meanfield_critical_temperature(lam)
    assert lmg_meanfield_solve(1.0 / (tc * 0.999), lam, 0.0).m_x > 0.0
    assert lmg_meanfield_solve(1.0 / (tc * 1.001), lam, 0.0).m_x == 0.0


def test_catalog_model_metadata():
    model = Lmg(64, 0.2)
    assert model.name == "lmg"
    assert model.size_hint == 64
    assert model.log_z(1.0, 0.5) == pytest.approx(
        lmg_full_log_z(1.0, LmgParams(64, 0.2, 0.5)), abs=1e-12
    )


def test_catalog_model_even_in_field():
    # a pi rotation about x flips the field sign; the central stencil
    # therefore works at lam = 0
    model = Lmg(24, 0.2)
    assert model.log_z(1.0, -0.3) == model.log_z(1.0, 0.3)
    chi0 = core.susceptibility_lambda(model, core.ThermoPoint(1.0, 0.0), 1e-3)
    assert math.isfinite(chi0)
