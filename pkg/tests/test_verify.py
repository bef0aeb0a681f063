import math

import numpy as np
import pytest

from berg.scalars import ExactComplex
from berg.verify import (
    IntegrationSpec,
    check_deck_symmetry,
    check_orthogonality,
    check_pullback_isometry,
    check_reproducing,
    check_transformation_law,
    disk_monomial_norm,
    integrate,
    suite_isometry,
)

N_FAST = 200_000


def test_disk_area():
    est, se = integrate(IntegrationSpec("disk", N_FAST, seed=1), lambda p: np.ones(len(p)))
    assert abs(est.real - math.pi) <= 3 * se
    assert se < 0.02 * math.pi


def test_ball2_volume():
    est, se = integrate(IntegrationSpec("ball-2", N_FAST, seed=1), lambda p: np.ones(len(p)))
    assert abs(est.real - math.pi**2 / 2) <= 3 * se


def test_annulus_area():
    spec = IntegrationSpec("annulus", N_FAST, seed=2, inner_radius=0.5)
    est, se = integrate(spec, lambda p: np.ones(len(p)))
    assert abs(est.real - math.pi * 0.75) <= 3 * se


def test_omega_fiber_norm_mc():
    # || lambda ||^2 in the top-form inner product (factor 8 wrt Lebesgue)
    spec = IntegrationSpec("omega", N_FAST, seed=3)
    est, se = integrate(spec, lambda p: 8.0 * np.abs(p[:, 2]) ** 2)
    target = (2 * math.pi) ** 3 / 2
    assert abs(est.real - target) <= 3 * se
    assert se <= 0.02 * target


def test_unknown_domain_and_bad_spec():
    with pytest.raises(ValueError):
        integrate(IntegrationSpec("torus", 10), lambda p: p)
    with pytest.raises(ValueError):
        IntegrationSpec("disk", 0)
    with pytest.raises(ValueError):
        IntegrationSpec("disk", 10, method="quadrature")


def test_stderr_scaling():
    ses = []
    for n in (10_000, 100_000, 1_000_000):
        _, se = integrate(IntegrationSpec("disk", n, seed=4), lambda p: np.ones(len(p)))
        ses.append(se)
    for a, b in ((0, 1), (1, 2)):
        ratio = ses[a] / ses[b]
        assert math.sqrt(10) / 2 <= ratio <= math.sqrt(10) * 2


def test_reproducing_disk():
    report = check_reproducing("disk", 1, 0.3, IntegrationSpec("disk", N_FAST, seed=5))
    assert report.passed
    assert abs(report.estimate - 0.3) <= 3 * report.stderr


def test_reproducing_omega():
    report = check_reproducing(
        "omega", (1, (0, 0)), (0.0, 0.0, 0.4), IntegrationSpec("omega", N_FAST, seed=5)
    )
    assert report.passed
    assert abs(report.estimate - 0.4) <= 3 * report.stderr


def test_reproducing_rejects_divergent_monomial():
    with pytest.raises(ValueError):
        check_reproducing("omega", (1, (1, 0)), (0.0, 0.0, 0.4))


def test_orthogonality_distinct_fiber_degrees():
    spec = IntegrationSpec("omega", N_FAST, seed=6)
    report = check_orthogonality((1, (0, 0)), (2, (0, 0)), spec)
    assert report.passed
    assert abs(report.estimate) <= 3 * report.stderr
    with pytest.raises(ValueError):
        check_orthogonality((1, (0, 0)), (1, (0, 0)), spec)


def test_deterministic_replay():
    spec = IntegrationSpec("omega", 50_000, seed=7)
    a = check_reproducing("omega", (1, (0, 0)), (0.0, 0.0, 0.4), spec)
    b = check_reproducing("omega", (1, (0, 0)), (0.0, 0.0, 0.4), spec)
    assert a.to_json() == b.to_json()


def test_isometry_exact_values():
    chk = check_pullback_isometry(2, 0)
    assert chk.equal
    assert chk.pullback_norm == ExactComplex(2, 0, 1)  # 4 pi / 2
    chk = check_pullback_isometry(2, 3)
    assert chk.pullback_norm == disk_monomial_norm(7) * ExactComplex(4)
    assert chk.scaled_norm == disk_monomial_norm(3) * ExactComplex(2)
    assert chk.equal
    assert check_pullback_isometry(1, 4).equal  # trivial cover, factor 1
    assert all(r.passed for r in suite_isometry())


def test_transformation_disk_covers():
    for k in (2, 3, 4, 5):
        report = check_transformation_law(f"disk-{k}", count=50, seed=8)
        assert report.passed, report
        assert report.residual <= 1e-12


def test_transformation_ball_quotients():
    for cover in ("minus-identity", "scalar-i"):
        report = check_transformation_law(cover, count=25, seed=8)
        assert report.passed
        assert report.residual <= 1e-12


def test_trivial_cover_transformation_is_exact():
    report = check_transformation_law("disk-1", count=10, seed=9)
    assert report.residual <= 1e-15  # float route: two roundings of one formula
    # on exact inputs the trivial deck sum IS the kernel, identically
    from fractions import Fraction

    from berg.ball import ball_kernel
    from berg.quotient import deck_sum_kernel, disk_power_cover

    group = disk_power_cover(1).group
    z, w = (Fraction(1, 3),), (Fraction(1, 5),)
    assert deck_sum_kernel(group, 1, z, w) == ball_kernel(1, z, w)


def test_deck_symmetry_reports():
    for cover in ("disk-2", "minus-identity", "scalar-i"):
        report = check_deck_symmetry(cover, seed=10)
        assert report.passed
        assert report.residual <= 1e-12
