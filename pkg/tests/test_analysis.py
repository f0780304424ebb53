import numpy as np
import pytest

from qbm import analysis, bfgs, grad, model, opalg


def energy_gradient_closed_form(a, b, r, phi):
    """Stationarity residuals of the mean energy in (r, phi)."""
    dr = (4 * a * r * np.cos(2 * phi)
          + 4 * b * np.sin(phi + np.pi / 4) * (1 - 2 * r**2) / np.sqrt(1 - r**2)
          + 4 * r)
    dphi = (-4 * a * r**2 * np.sin(2 * phi)
            + 4 * b * r * np.sqrt(1 - r**2) * np.cos(phi + np.pi / 4))
    return dr, dphi


def hessian_entries_closed_form(r, phi):
    """Explicit Hessian entries at the stationary coefficients."""
    s2 = np.sin(2 * phi)
    den = 1 - r**2 * (1 + s2)
    h11 = 4 * s2 / ((1 - r**2) * den)
    h12 = 4 * r * s2 / np.tan(phi + np.pi / 4) / den
    h22 = 4 * r**2 * (1 - r**2) * (2 - s2) / den
    return h11, h12, h22


def regular_points(rng, n):
    pts = []
    while len(pts) < n:
        r = rng.uniform(0.15, 0.85)
        phi = rng.uniform(0, 2 * np.pi)
        if abs(1 - 2 * r**2 * np.sin(phi + np.pi / 4) ** 2) < 0.05:
            continue
        if abs(1 + np.sin(2 * phi)) < 0.05 or abs(np.sin(2 * phi)) < 0.05:
            continue
        pts.append((r, phi))
    return pts


class TestBaselines:
    def test_rim_special_angles(self):
        assert analysis.baseline_r1(0.0) == pytest.approx(0.0, abs=1e-12)
        assert analysis.baseline_r1(np.pi / 4) == pytest.approx(1.0, abs=1e-12)

    def test_rim_quarter_period(self, rng):
        for _ in range(20):
            phi = rng.uniform(0, 2 * np.pi)
            assert analysis.baseline_r1(phi + np.pi / 2) == pytest.approx(
                analysis.baseline_r1(phi), abs=1e-12)

    def test_antidiagonal_values(self):
        assert analysis.baseline_phi_3pi4(0.0) == pytest.approx(1.0, abs=1e-12)
        assert analysis.baseline_phi_3pi4(np.sqrt(2) / 2) == pytest.approx(
            2.0, abs=1e-12)
        assert analysis.baseline_phi_3pi4(1.0) == pytest.approx(
            analysis.baseline_r1(3 * np.pi / 4), abs=1e-12)

    def test_antidiagonal_domain(self):
        with pytest.raises(ValueError):
            analysis.baseline_phi_3pi4(1.5)


class TestMeanEnergy:
    def test_zz_limits(self):
        assert analysis.mean_energy(0, 0, 1.0, 0.3) == pytest.approx(1.0)
        assert analysis.mean_energy(0, 0, 0.0, 0.3) == pytest.approx(-1.0)

    def test_matrix_element_oracle(self, rng):
        # direct 4x4 expectation value of the certificate Hamiltonian
        z1 = opalg.pauli_string("ZI")
        z2 = opalg.pauli_string("IZ")
        x1 = opalg.pauli_string("XI")
        x2 = opalg.pauli_string("IX")
        zz = opalg.pauli_string("ZZ")
        for _ in range(30):
            a, b = rng.uniform(-2, 2, 2)
            r, phi = rng.uniform(0.02, 0.98), rng.uniform(0, 2 * np.pi)
            h = a * (z1 + z2) + b * (x1 + x2) + zz
            psi = model.target_state(r, phi).state
            direct = float(np.real(psi.conj() @ h @ psi))
            assert abs(analysis.mean_energy(a, b, r, phi) - direct) < 1e-12


class TestExtremeParams:
    def test_diagonal_angle_kills_z_coefficient(self):
        pt = analysis.extreme_params(0.35, np.pi / 4)
        assert pt.a_star == pytest.approx(0.0, abs=1e-12)

    def test_stationarity_residuals(self):
        pt = analysis.extreme_params(0.5, np.pi / 3)
        dr, dphi = energy_gradient_closed_form(pt.a_star, pt.b_star,
                                               0.5, np.pi / 3)
        assert abs(dr) < 1e-8 and abs(dphi) < 1e-8

    def test_stationarity_residuals_random(self, rng):
        for r, phi in regular_points(rng, 50):
            pt = analysis.extreme_params(r, phi)
            dr, dphi = energy_gradient_closed_form(pt.a_star, pt.b_star,
                                                   r, phi)
            assert abs(dr) < 1e-7 and abs(dphi) < 1e-7

    def test_singular_locus_rejected(self):
        with pytest.raises(analysis.SingularityError):
            analysis.extreme_params(np.sqrt(2) / 2, np.pi / 4)


class TestHessianDet:
    def test_sign_follows_quadrant(self):
        assert analysis.hessian_det(0.5, np.pi / 3) > 0
        assert analysis.hessian_det(0.5, 2 * np.pi / 3) < 0

    def test_vanishes_at_origin(self):
        assert analysis.hessian_det(0.0, 1.0) == pytest.approx(0.0, abs=1e-14)

    def test_matches_entry_determinant(self, rng):
        for r, phi in regular_points(rng, 100):
            h11, h12, h22 = hessian_entries_closed_form(r, phi)
            expected = h11 * h22 - h12**2
            got = analysis.hessian_det(r, phi)
            assert abs(got - expected) / abs(expected) < 1e-9

    def test_singular_angles_rejected(self):
        with pytest.raises(analysis.SingularityError):
            analysis.hessian_det(0.5, 3 * np.pi / 4)
        with pytest.raises(analysis.SingularityError):
            analysis.hessian_det(0.5, 7 * np.pi / 4)


class TestGroundStateCertificate:
    def test_first_quadrant_boundary(self):
        cert = analysis.ground_state_certificate(0.5, np.pi / 4)
        assert cert.boundary
        assert cert.fidelity > 1 - 1e-8
        assert cert.gap > 0

    def test_second_quadrant_interior(self):
        cert = analysis.ground_state_certificate(0.5, 2 * np.pi / 3)
        assert not cert.boundary

    def test_third_quadrant_boundary(self):
        cert = analysis.ground_state_certificate(0.5, 5 * np.pi / 4)
        assert cert.boundary

    def test_dichotomy_matches_hessian_sign(self, rng):
        for r, phi in regular_points(rng, 60):
            cert = analysis.ground_state_certificate(r, phi)
            det = analysis.hessian_det(r, phi)
            assert cert.boundary == (det > 0)


class TestSurfacePoint:
    def test_rim(self, rng):
        for _ in range(10):
            phi = rng.uniform(0, 2 * np.pi)
            z, x, zz = analysis.surface_point(1.0, phi)
            assert z == pytest.approx(2 * np.cos(2 * phi), abs=1e-12)
            assert x == pytest.approx(0.0, abs=1e-12)
            assert zz == pytest.approx(1.0)

    def test_center_of_antidiagonal(self):
        z, x, zz = analysis.surface_point(np.sqrt(2) / 2, 3 * np.pi / 4)
        assert abs(z) < 1e-12 and abs(x) < 1e-12 and abs(zz) < 1e-12

    def test_matches_moment_oracle(self, rng):
        m = model.visible_model_2q()
        for _ in range(30):
            r, phi = rng.uniform(0, 1), rng.uniform(0, 2 * np.pi)
            mom = model.moments(model.target_state(r, phi).density, m.basis)
            z, x, zz = analysis.surface_point(r, phi)
            assert abs(z - (mom[2] + mom[3])) < 1e-12
            assert abs(x - (mom[0] + mom[1])) < 1e-12
            assert abs(zz - mom[4]) < 1e-12


class TestNumericalRangeCloud:
    def test_box_bounds(self):
        cloud = analysis.numerical_range_cloud(5000, seed=1)
        assert np.all(np.abs(cloud[:, 0]) <= 2 + 1e-12)
        assert np.all(np.abs(cloud[:, 1]) <= 2 + 1e-12)
        assert np.all(np.abs(cloud[:, 2]) <= 1 + 1e-12)

    def test_deterministic_under_seed(self):
        c1 = analysis.numerical_range_cloud(100, seed=7)
        c2 = analysis.numerical_range_cloud(100, seed=7)
        assert np.array_equal(c1, c2)

    def test_cloud_inside_support_oracle(self, rng):
        # membership in the convex body via its exact support function
        cloud = analysis.numerical_range_cloud(2000, seed=3)
        for _ in range(50):
            u = rng.standard_normal(3)
            u /= np.linalg.norm(u)
            support = analysis.range_support(u)
            assert np.max(cloud @ u) <= support + 1e-10

    def test_surface_points_inside_support_oracle(self, rng):
        directions = rng.standard_normal((200, 3))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        supports = np.array([analysis.range_support(u) for u in directions])
        for _ in range(50):
            r, phi = rng.uniform(0, 1), rng.uniform(0, 2 * np.pi)
            s = np.array(analysis.surface_point(r, phi))
            assert np.all(directions @ s <= supports + 1e-6)

    def test_tangent_plane_attained_in_first_and_third_quadrant(self, rng):
        # the certificate normal (a*, b*, 1) supports the body exactly at
        # the surface point
        for r, phi in regular_points(rng, 40):
            det = analysis.hessian_det(r, phi)
            if det <= 0:
                continue
            pt = analysis.extreme_params(r, phi)
            n = np.array([pt.a_star, pt.b_star, 1.0])
            value = n @ np.array(analysis.surface_point(r, phi))
            hi = analysis.range_support(n)
            lo = -analysis.range_support(-n)
            assert min(abs(value - hi), abs(value - lo)) < 1e-8


class TestSymmetryMap:
    def test_visible_xx_sign_pattern(self):
        m = model.hidden_model_3q()
        op = analysis.SymmetryOp("XX", "I")
        out = analysis.symmetry_map(op, np.ones(9), m)
        assert np.allclose(out, [1, 1, 1, -1, -1, 1, -1, -1, 1])

    def test_hidden_flip_sign_pattern(self):
        m = model.hidden_model_3q()
        op = analysis.SymmetryOp("I", "X")
        out = analysis.symmetry_map(op, np.ones(9), m)
        assert np.allclose(out, [1, 1, 1, 1, 1, -1, -1, -1, 1])

    def test_generators_are_involutions(self, rng):
        m = model.hidden_model_3q()
        a = rng.uniform(-2, 2, 9)
        for op in analysis.all_symmetry_ops():
            twice = analysis.symmetry_map(op, analysis.symmetry_map(op, a, m),
                                          m)
            assert np.allclose(twice, a, atol=1e-14)

    def test_conjugation_identity(self, rng):
        # U H(a) U^dag = H(a') as matrices, for all 16 operations
        m = model.hidden_model_3q()
        for op in analysis.all_symmetry_ops():
            u = op.unitary(m.dim_h)
            a = rng.uniform(-2, 2, 9)
            lhs = u @ model.hamiltonian(m, a) @ u.conj().T
            rhs = model.hamiltonian(m, analysis.symmetry_map(op, a, m))
            assert np.linalg.norm(lhs - rhs) < 1e-12

    def test_visible_model_restriction(self):
        mv = model.visible_model_2q()
        op = analysis.SymmetryOp("XX", "I")
        out = analysis.symmetry_map(op, np.ones(5), mv)
        assert np.allclose(out, [1, 1, -1, -1, 1])

    def test_hidden_part_rejected_on_visible_model(self):
        mv = model.visible_model_2q()
        with pytest.raises(ValueError):
            analysis.symmetry_map(analysis.SymmetryOp("I", "X"), np.ones(5),
                                  mv)


class TestSymmetryInvariance:
    def test_identity_op_exact(self):
        op = analysis.SymmetryOp("I", "I")
        lhs, rhs = analysis.symmetry_invariance_check(0.4, 1.3,
                                                      np.linspace(-1, 1, 9),
                                                      op)
        assert lhs == rhs

    def test_visible_mirror(self, rng):
        op = analysis.SymmetryOp("XX", "I")
        for _ in range(20):
            a = rng.uniform(-1.5, 1.5, 9)
            lhs, rhs = analysis.symmetry_invariance_check(
                rng.uniform(0, 1), rng.uniform(0, 2 * np.pi), a, op)
            assert abs(lhs - rhs) < 1e-10

    def test_hidden_flip_same_target(self, rng):
        op = analysis.SymmetryOp("I", "X")
        for _ in range(20):
            a = rng.uniform(-1.5, 1.5, 9)
            lhs, rhs = analysis.symmetry_invariance_check(
                rng.uniform(0, 1), rng.uniform(0, 2 * np.pi), a, op)
            assert abs(lhs - rhs) < 1e-10

    def test_all_ops_random(self, rng):
        for op in analysis.all_symmetry_ops():
            a = rng.uniform(-1.5, 1.5, 9)
            lhs, rhs = analysis.symmetry_invariance_check(
                rng.uniform(0, 1), rng.uniform(0, 2 * np.pi), a, op)
            assert abs(lhs - rhs) < 1e-10


class TestSweep:
    def test_grid_validation(self):
        with pytest.raises(ValueError):
            analysis.SweepGrid(r_values=np.array([0.5, 0.2]),
                               phi_values=np.array([0.0]))
        with pytest.raises(ValueError):
            analysis.SweepGrid(r_values=np.array([0.5]),
                               phi_values=np.array([]))

    def test_default_grid_shape(self):
        grid = analysis.SweepGrid.default()
        assert grid.shape == (21, 121)

    def test_small_visible_sweep(self):
        grid = analysis.SweepGrid(
            r_values=np.array([0.5, np.sqrt(2) / 2]),
            phi_values=np.array([np.pi / 4, 3 * np.pi / 4, 7 * np.pi / 4]))
        table = analysis.sweep(model.visible_model_2q(), grid,
                               bfgs.BfgsOptions(),
                               bfgs.MultiStartOptions.constant(0.0))
        assert table.s_min.shape == (2, 3)
        assert table.s_min[0, 0] < 0.01                      # first quadrant
        assert table.s_min[1, 1] == pytest.approx(2.0, abs=1e-3)
        assert table.s_min[1, 2] == pytest.approx(2.0, abs=1e-3)
        assert table.converged.all()

    def test_sweep_deterministic(self):
        grid = analysis.SweepGrid(r_values=np.array([0.3]),
                                  phi_values=np.array([2.0, 4.0]))
        ms = bfgs.MultiStartOptions.uniform(3, seed=5)
        m = model.hidden_model_3q()
        t1 = analysis.sweep(m, grid, bfgs.BfgsOptions(), ms)
        t2 = analysis.sweep(m, grid, bfgs.BfgsOptions(), ms)
        assert np.array_equal(t1.s_min, t2.s_min)
        assert np.array_equal(t1.a_opt, t2.a_opt)

    def test_parallel_matches_serial(self):
        grid = analysis.SweepGrid(r_values=np.array([0.4, 0.6]),
                                  phi_values=np.array([1.0, 2.5]))
        m = model.visible_model_2q()
        ms = bfgs.MultiStartOptions.constant(0.0)
        serial = analysis.sweep(m, grid, bfgs.BfgsOptions(), ms, threads=1)
        parallel = analysis.sweep(m, grid, bfgs.BfgsOptions(), ms, threads=2)
        assert np.array_equal(serial.s_min, parallel.s_min)
        assert np.array_equal(serial.a_opt, parallel.a_opt)
