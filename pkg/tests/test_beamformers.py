import numpy as np
import pytest

from dmsecrecy.array import ArrayConfig, Scenario
from dmsecrecy.beamformers import (
    BeamformerSolution,
    init_an_leakage,
    init_precoder_leakage,
    optimize_an_fixed_precoder,
    optimize_precoder_fixed_an,
    random_solution,
    solve,
    solve_leakage,
    solve_max_sr,
    solve_nsp,
)
from dmsecrecy.metrics import AnProjection, PowerProfile, an_power_at, anlnr, rate_at, secrecy_rate

from conftest import random_unit, same_up_to_phase

# N=4, d/lambda=0.5: cos 60 - cos 90 = 2/N, so h(60) and h(90) are orthogonal
ORTHO = Scenario.from_degrees(4, 60, 90)


def test_orthogonal_fixture():
    assert abs(np.vdot(ORTHO.h_d, ORTHO.h_e)) < 1e-15


class TestLeakageInit:
    def test_precoder_orthogonal_case(self, power10):
        assert same_up_to_phase(init_precoder_leakage(ORTHO, power10), ORTHO.h_d, tol=1e-12)

    def test_precoder_noise_limited(self, ref_scenario):
        p = PowerProfile.from_snr_db(-80.0)
        assert same_up_to_phase(init_precoder_leakage(ref_scenario, p), ref_scenario.h_d, tol=1e-6)

    def test_precoder_cross_solver(self, ref_scenario, power10):
        # second solver: non-Hermitian eigendecomposition of M^{-1} K
        M = ref_scenario.gram_e + power10.noise_var / (power10.beta1**2 * power10.total_power) * np.eye(8)
        vals, vecs = np.linalg.eig(np.linalg.solve(M, ref_scenario.gram_d))
        top = vecs[:, np.argmax(vals.real)]
        assert same_up_to_phase(init_precoder_leakage(ref_scenario, power10), top / np.linalg.norm(top), tol=1e-9)

    def test_an_orthogonal_case(self, power10):
        an = init_an_leakage(ORTHO, power10)
        for col in an.matrix.T:
            assert same_up_to_phase(col / np.linalg.norm(col), ORTHO.h_e, tol=1e-12)
        assert an_power_at(ORTHO.array, ORTHO.theta_d, an) < 1e-28

    def test_an_matches_dense_kron_eigen(self, ref_scenario, power10):
        N = 8
        I = np.eye(N - 1)
        M = np.kron(I, ref_scenario.gram_d + power10.noise_var / (power10.beta2**2 * power10.total_power) * np.eye(N))
        K = np.kron(I, ref_scenario.gram_e)
        top = np.linalg.eigvals(np.linalg.solve(M, K)).real.max()
        an = init_an_leakage(ref_scenario, power10)
        assert anlnr(ref_scenario, an, power10) == pytest.approx(top, rel=1e-10)

    def test_an_any_top_eigenspace_vector_is_equivalent(self, ref_scenario, power10, rng):
        an = init_an_leakage(ref_scenario, power10)
        u = an.matrix[:, 0]
        coeffs = random_unit(rng, 7)
        other = AnProjection.from_matrix(np.outer(u, coeffs))
        assert anlnr(ref_scenario, other, power10) == pytest.approx(anlnr(ref_scenario, an, power10), rel=1e-12)

    def test_an_needs_beta2(self, ref_scenario):
        with pytest.raises(ValueError):
            init_an_leakage(ref_scenario, PowerProfile(10.0, 1.0, 0.0))


class TestRandomSolution:
    def test_deterministic(self, ref_scenario):
        v1, a1 = random_solution(ref_scenario, 7)
        v2, a2 = random_solution(ref_scenario, 7)
        np.testing.assert_array_equal(v1, v2)
        np.testing.assert_array_equal(a1.matrix, a2.matrix)

    def test_normalized(self, ref_scenario):
        v, an = random_solution(ref_scenario, 3)
        assert np.linalg.norm(v) == pytest.approx(1, abs=1e-12)
        assert an.alpha**2 * np.vdot(an.matrix, an.matrix).real == pytest.approx(1, abs=1e-10)

    def test_distinct_seeds(self, ref_scenario):
        for s in range(100):
            v1, _ = random_solution(ref_scenario, 2 * s)
            v2, _ = random_solution(ref_scenario, 2 * s + 1)
            assert abs(np.vdot(v1, v2)) < 1 - 1e-6


class TestAnStep:
    def test_fixed_point_is_stable(self, ref_scenario, power10):
        v = init_precoder_leakage(ref_scenario, power10)
        first, _ = optimize_an_fixed_precoder(ref_scenario, power10, v, init_an_leakage(ref_scenario, power10), tol=1e-13, max_iter=5000)
        again, rep = optimize_an_fixed_precoder(ref_scenario, power10, v, first)
        w1 = first.normalized.ravel()
        w2 = again.normalized.ravel()
        assert same_up_to_phase(w1, w2, tol=1e-8)
        assert rep.iterations <= 2

    def test_two_element_sampling_oracle(self, power10, rng):
        sc = Scenario.from_degrees(2, 50, 110)
        v = random_unit(rng, 2)
        an0 = AnProjection.from_matrix(random_unit(rng, 2)[:, None])
        an, _ = optimize_an_fixed_precoder(sc, power10, v, an0)
        got = 2 ** secrecy_rate(sc, v, an, power10, clamp=False)
        samples = random_unit(rng, 2, size=100_000)
        best = max(
            2 ** secrecy_rate(sc, v, AnProjection.from_matrix(w[:, None]), power10, clamp=False) for w in samples
        )
        assert got >= 0.99 * best

    @pytest.mark.parametrize("snr", [0, 5, 10, 15])
    def test_never_lowers_secrecy_rate(self, ref_scenario, snr):
        p = PowerProfile.from_snr_db(snr)
        for seed in range(3):
            v, an0 = random_solution(ref_scenario, seed)
            an, _ = optimize_an_fixed_precoder(ref_scenario, p, v, an0)
            assert secrecy_rate(ref_scenario, v, an, p, clamp=False) >= secrecy_rate(
                ref_scenario, v, an0, p, clamp=False
            ) - 1e-9

    def test_dense_path_agrees(self, power10):
        sc = Scenario.from_degrees(5, 40, 75)
        v, an0 = random_solution(sc, 1)
        a, _ = optimize_an_fixed_precoder(sc, power10, v, an0)
        b, _ = optimize_an_fixed_precoder(sc, power10, v, an0, dense=True)
        assert secrecy_rate(sc, v, a, power10) == pytest.approx(secrecy_rate(sc, v, b, power10), abs=1e-8)


class TestPrecoderStep:
    def test_separable_no_an(self):
        p = PowerProfile(10.0, 1.0, 0.0)
        an = AnProjection.from_matrix(np.ones((4, 3)))
        assert same_up_to_phase(optimize_precoder_fixed_an(ORTHO, p, an), ORTHO.h_d, tol=1e-12)

    def test_shared_shift(self, power10, rng):
        # equal AN leakage at both receivers gives A_d = A_e
        sc = Scenario.from_degrees(5, 60, 120)  # mirror-image directions
        P = np.zeros((5, 4), complex)
        P[:, 0] = np.ones(5)  # broadside beam sees both mirror directions equally
        an = AnProjection.from_matrix(P)
        leak = an_power_at(sc.array, sc.theta_d, an), an_power_at(sc.array, sc.theta_e, an)
        assert leak[0] == pytest.approx(leak[1], abs=1e-12)
        A = an.alpha**2 * power10.beta2**2 / power10.beta1**2 * leak[0] + 1 / (power10.beta1**2 * power10.total_power)
        I = np.eye(5)
        vals, vecs = np.linalg.eig(np.linalg.solve(sc.gram_e + A * I, sc.gram_d + A * I))
        top = vecs[:, np.argmax(vals.real)]
        assert same_up_to_phase(optimize_precoder_fixed_an(sc, power10, an), top / np.linalg.norm(top), tol=1e-9)

    @pytest.mark.parametrize("N", [2, 4, 8])
    def test_dominates_random_precoders(self, rng, power10, N):
        sc = Scenario.from_degrees(N, 50, 80)
        _, an = random_solution(sc, N)
        best = secrecy_rate(sc, optimize_precoder_fixed_an(sc, power10, an), an, power10, clamp=False)
        for v in random_unit(rng, N, size=10_000):
            assert secrecy_rate(sc, v, an, power10, clamp=False) <= best + 1e-12


class TestMaxSr:
    def test_coincident_directions(self, power10):
        sc = Scenario.from_degrees(8, 45, 45)
        sol, trace = solve_max_sr(sc, power10)
        assert trace.sr_per_iteration == [0.0, 0.0]
        assert trace.iterations == 2 and trace.degenerate
        assert sol.secrecy_rate == 0.0

    def test_reference_leakage_init_converges_fast(self, ref_scenario, power10):
        sol, trace = solve_max_sr(ref_scenario, power10)
        assert trace.terminated_by == "tolerance"
        assert trace.iterations <= 6
        assert abs(trace.sr_per_iteration[-1] - trace.sr_per_iteration[-2]) < 1e-4

    def test_random_init_reaches_same_rate(self, ref_scenario, power10):
        ref, _ = solve_max_sr(ref_scenario, power10)
        sol, trace = solve_max_sr(ref_scenario, power10, init="random", seed=11)
        assert trace.terminated_by == "tolerance"
        assert sol.secrecy_rate == pytest.approx(ref.secrecy_rate, rel=0.02)

    def test_first_iterate_is_leakage(self, ref_scenario, power10):
        _, trace = solve_max_sr(ref_scenario, power10)
        assert trace.sr_per_iteration[0] == solve_leakage(ref_scenario, power10).secrecy_rate

    def test_solution_invariants(self, ref_scenario, power10):
        sol, _ = solve_max_sr(ref_scenario, power10)
        assert isinstance(sol, BeamformerSolution) and sol.method == "max_sr"
        assert np.linalg.norm(sol.precoder) == pytest.approx(1, abs=1e-12)
        assert sol.an.alpha**2 * np.vdot(sol.an.matrix, sol.an.matrix).real == pytest.approx(1, abs=1e-10)
        assert sol.secrecy_rate == pytest.approx(secrecy_rate(ref_scenario, sol.precoder, sol.an, power10), abs=1e-10)

    def test_deterministic(self, ref_scenario, power10):
        a = solve_max_sr(ref_scenario, power10, init="random", seed=5)[1]
        b = solve_max_sr(ref_scenario, power10, init="random", seed=5)[1]
        assert a.sr_per_iteration == b.sr_per_iteration
        assert a.inner_gpi_iterations == b.inner_gpi_iterations

    def test_max_outer_reported(self, ref_scenario, power10):
        _, trace = solve_max_sr(ref_scenario, power10, init="random", seed=0, delta=1e-15, max_outer=3)
        assert trace.terminated_by == "max_iter" and trace.iterations == 3

    def test_no_an(self, ref_scenario):
        p = PowerProfile.from_snr_db(10.0, beta1_sq=1.0)
        sol, trace = solve_max_sr(ref_scenario, p)
        assert sol.secrecy_rate > 0 and trace.terminated_by == "tolerance"

    def test_argument_errors(self, ref_scenario, power10):
        with pytest.raises(ValueError):
            solve_max_sr(ref_scenario, power10, delta=0)
        with pytest.raises(ValueError):
            solve_max_sr(ref_scenario, power10, init="random")
        with pytest.raises(ValueError):
            solve_max_sr(ref_scenario, power10, init="bogus")

    def test_monotone_traces(self, rng):
        for k in range(10):
            N = int(rng.integers(3, 9))
            d, e = rng.uniform(10, 170, size=2)
            sc = Scenario.from_degrees(N, d, e)
            p = PowerProfile.from_snr_db(rng.uniform(0, 15))
            _, trace = solve_max_sr(sc, p, init="random", seed=k)
            assert np.all(np.diff(trace.sr_per_iteration) >= -1e-9)


class TestBaselines:
    def test_nsp_exact(self, ref_scenario, power10):
        sol = solve_nsp(ref_scenario, power10)
        assert np.linalg.norm(ref_scenario.h_d.conj() @ sol.an.matrix) < 1e-12
        expected = np.log2(1 + power10.beta1**2 * power10.total_power / power10.noise_var)
        assert rate_at(ref_scenario.array, ref_scenario.theta_d, sol.precoder, sol.an, power10) == pytest.approx(
            expected, abs=1e-10
        )
        # orthonormal columns
        np.testing.assert_allclose(sol.an.matrix.conj().T @ sol.an.matrix, np.eye(7), atol=1e-12)

    def test_leakage_equals_first_max_sr_iterate(self, ref_scenario, power10):
        sol = solve_leakage(ref_scenario, power10)
        v = init_precoder_leakage(ref_scenario, power10)
        np.testing.assert_array_equal(sol.precoder, v)
        assert sol.method == "leakage"

    def test_leakage_orthogonal_case(self, power10):
        sol = solve_leakage(ORTHO, power10)
        ceiling = np.log2(1 + power10.beta1**2 * power10.total_power / power10.noise_var)
        eve = rate_at(ORTHO.array, ORTHO.theta_e, sol.precoder, sol.an, power10)
        assert eve == pytest.approx(0.0, abs=1e-12)
        assert sol.secrecy_rate == pytest.approx(ceiling - eve, abs=1e-10)

    def test_ordering_at_15db(self, ref_scenario):
        p = PowerProfile.from_snr_db(15.0)
        nsp = solve_nsp(ref_scenario, p).secrecy_rate
        leak = solve_leakage(ref_scenario, p).secrecy_rate
        best = solve_max_sr(ref_scenario, p)[0].secrecy_rate
        assert nsp < leak <= best
        assert nsp < best

    def test_dispatch(self, ref_scenario, power10):
        assert solve("nsp", ref_scenario, power10).method == "nsp"
        with pytest.raises(ValueError):
            solve("magic", ref_scenario, power10)
