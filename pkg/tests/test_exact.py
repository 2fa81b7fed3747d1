import math
from fractions import Fraction

import pytest

from uipt import exact as ex
from uipt.exact import DomainError, TriType

from oracles import phi2_by_recurrence


def test_small_counts():
    assert ex.phi(2, 1, 1) == 4
    assert ex.phi(3, 1, 2) == 5
    assert ex.phi(2, 0, 0) == 1
    assert [ex.phi(2, 0, m) for m in range(8)] == [ex.catalan(m) for m in range(8)]
    assert [ex.phi(3, 0, m) for m in range(1, 8)] == [ex.catalan(m) for m in range(1, 8)]


def test_sphere_counts():
    assert [ex.sphere_count(2, n) for n in range(3, 10)] == [1, 4, 24, 176, 1456, 13056, 124032]
    assert [ex.sphere_count(3, n) for n in range(3, 10)] == [1, 1, 3, 13, 68, 399, 2530]


def test_type_parsing():
    assert TriType.parse("II") is TriType.TypeII
    assert TriType.parse(3) is TriType.TypeIII
    assert str(TriType.TypeIII) == "III"
    with pytest.raises(DomainError):
        TriType.parse("IV")


@pytest.mark.parametrize("args", [(2, -1, 0), (2, 0, -1), (3, 0, 0)])
def test_phi_domain(args):
    with pytest.raises(DomainError):
        ex.phi(*args)


def test_phi_matches_independent_recurrence():
    for n in range(31):
        for m in range(31):
            assert ex.phi(2, n, m) == phi2_by_recurrence(n, m)


def test_recurrence_residual_zero():
    assert all(ex.phi_recurrence_residual("II", n, m) == 0
               for n in range(31) for m in range(31))
    with pytest.raises(DomainError):
        ex.phi_recurrence_residual(3, 1, 1)


def test_constants():
    for t in (2, 3):
        assert ex.constants(t).check()
    assert ex.constants(2).alpha == Fraction(27, 2)
    assert ex.constants(3).alpha == Fraction(256, 27)


def test_z_recurrence_type2():
    a = ex.constants(2).alpha
    Z = [ex.z_critical(2, m) for m in range(202)]
    for m in range(201):
        rhs = Z[m + 1] / a + sum(Z[k - 1] * Z[m - k] for k in range(1, m + 1))
        if m == 0:
            rhs += 1
        assert Z[m] == rhs


def test_critical_values():
    assert ex.z_critical(2, 0) == Fraction(9, 8)
    assert ex.free_empty_prob() == Fraction(8, 9)
    assert ex.z_critical(3, 0) == 1
    assert ex.z_critical(2, 1) == ex.z_closed(2, 1, Fraction(1, 6))
    for m in range(1, 20):
        assert ex.z_critical(3, m) == ex.z_closed(3, m, Fraction(1, 4))
        assert ex.z_critical(2, m) == ex.z_closed(2, m, Fraction(1, 6))


@pytest.mark.parametrize("t,theta", [(2, Fraction(1, 10)), (2, Fraction(1, 8)),
                                     (3, Fraction(1, 5)), (3, Fraction(0))])
def test_z_closed_against_series(t, theta):
    if t == 2:
        w = theta * (1 - 2 * theta) ** 2
    else:
        w = theta * (1 - theta) ** 3
    for m in (1, 2, 3):
        z = ex.z_closed(t, m, theta)
        s = sum(ex.phi(t, n, m) * w ** n for n in range(1500))
        assert float(abs(z - s) / z) < 1e-9


def test_z_series_bound_brackets_closed_form():
    for t in (2, 3):
        for m in (1, 4):
            partial, tail = ex.z_series_partial(t, m, 200)
            z = ex.z_critical(t, m)
            assert partial <= z <= partial + tail


def test_theta_domain():
    with pytest.raises(DomainError):
        ex.z_closed(2, 1, Fraction(1, 5))
    with pytest.raises(DomainError):
        ex.z_closed(3, 1, Fraction(-1, 5))


def test_pointed_partition_function():
    # w dZ/dw at criticality, as a limit in the theta parametrization
    import sympy as sp
    th, mm = sp.symbols("theta m")
    for m in (0, 1, 2, 5):
        z = (sp.factorial(2 * m) / (sp.factorial(m) * sp.factorial(m + 2))
             * ((1 - 6 * th) * m + 2 - 6 * th) / (1 - 2 * th) ** (2 * m + 2))
        w = th * (1 - 2 * th) ** 2
        lim = sp.limit(w * sp.diff(z, th) / sp.diff(w, th), th, sp.Rational(1, 6))
        assert Fraction(str(sp.nsimplify(lim))) == ex.z_pointed(m)


def test_c_hat_is_limit():
    # phi_{n,m} alpha^-n n^{5/2} -> kappa C_m
    kappa = math.sqrt(3) / (4 * math.sqrt(math.pi))
    a = ex.constants(2).alpha
    n = 4000
    for m in (0, 1, 3):
        v = float(Fraction(ex.phi(2, n, m)) / a ** n) * n ** 2.5
        assert v / (kappa * float(ex.c_hat(2, m))) == pytest.approx(1, rel=0.01)


def test_peel_normalization():
    for m in range(1, 501):
        tot = ex.peel_grow_prob(m) + 2 * sum(ex.peel_swallow_prob(m, k) for k in range(1, m + 1))
        assert tot == 1
    assert ex.peel_grow_prob(1) == Fraction(5, 6)
    assert ex.peel_swallow_prob(1, 1) == Fraction(1, 12)


def test_free_normalization():
    for m in range(1, 200):
        tot = ex.free_grow_prob(m) + sum(ex.free_split_prob(m, k) for k in range(1, m + 1))
        assert tot == 1


def test_inf_face_distribution():
    assert ex.inf_face_distribution(2, [1, 2]) == [Fraction(3, 13), Fraction(10, 13)]
    assert ex.inf_face_distribution(2, [3, 3]) == [Fraction(1, 2), Fraction(1, 2)]
    assert ex.inf_face_distribution(3, [2, 2]) == [Fraction(1, 2), Fraction(1, 2)]
    assert sum(ex.inf_face_distribution(3, [1, 2, 5])) == 1
    with pytest.raises(DomainError):
        ex.inf_face_distribution(2, [])


def test_unenclosed_weight():
    assert ex.unenclosed_weight() == Fraction(4, 9)


def test_z0_power_coeff():
    assert ex.z0_power_coeff(1, 5) == ex.phi(2, 5, 0)
    assert ex.z0_power_coeff(0, 0) == 1
    assert ex.z0_power_coeff(0, 3) == 0
    # (sum phi x^n)^2 at x^2
    assert ex.z0_power_coeff(2, 2) == 2 * ex.phi(2, 2, 0) + ex.phi(2, 1, 0) ** 2


def test_core_probabilities():
    assert ex.core_size_prob(3) == Fraction(9, 32)
    assert ex.core_size_prob(4) == Fraction(243, 4096)
    direct = sum(ex.core_size_prob(n) for n in range(3, 200))
    assert ex.core_size_partial_sum(199) == direct
    assert ex.core_size_partial_sum(2) == 0


def test_core_size_tail():
    c = ex.core_size_tail_constant()
    for n, tol in ((1000, 5e-3), (5000, 1e-3)):
        assert float(ex.core_size_prob(n)) * n ** 1.5 == pytest.approx(c, rel=tol)


def test_core_sum_extrapolates_to_half():
    # the slowly converging partial sum plus its n^{-1/2} tail reaches 1/2
    assert abs(ex.core_size_sum_extrapolated(10_000) - 0.5) < 1e-4
    assert abs(ex.core_size_sum_extrapolated(2_000) - 0.5) < 1e-4


def test_deg3_law():
    assert ex.deg3_limit(3) == Fraction(27, 256)
    s = ex.deg3_normalization(10_000)
    assert abs(float(s) - 1) < 1e-3
    assert ex.deg3_normalization(60) == sum(ex.deg3_limit(k, Fraction(1)) for k in range(3, 61))
    with pytest.raises(DomainError):
        ex.deg3_limit(2)


def test_sub_prob_values():
    assert ex.sub_prob(2, 3, [1]) == 1
    assert ex.sub_prob(2, 4, [2]) == Fraction(5, 6)
    with pytest.raises(DomainError):
        ex.sub_prob(2, 3, [])
