import math

import pytest

import maslov_box as mb


def test_wedge_of_basis_vectors():
    import numpy as np

    e = np.eye(3)
    coform = mb.columns_to_coform(e[:, 1:])
    assert mb.wedge_top(e[:, 0], coform) == pytest.approx(1.0)
    assert mb.wedge_top(e[:, 1], coform) == pytest.approx(0.0)


def test_gkdv_profile_peak():
    g = mb.GkdvModel(2.0, 0.5)
    u, u1, _, _ = g.jet(0.0)
    assert u1 == pytest.approx(0.0, abs=1e-14)
    assert u == pytest.approx(g.alpha)


def test_quadratic_roots_bracket_zero():
    r1, r2 = mb.gkdv_quadratic_roots(3.5)
    assert r1 < 0 < r2


def test_evans_matches_linear_closed_form():
    s = 0.5
    sys = mb.gkdv_system(1.0, s)
    lam = -1.0
    # mu is the positive real root of mu^3 - s mu + lam = 0 on the right
    # end; the p = 1 Evans function has the closed form ((mu - sqrt s)/(mu + sqrt s))^2.
    import numpy as np

    roots = np.roots([1.0, 0.0, -s, lam])
    mu = max(r.real for r in roots if abs(r.imag) < 1e-12)
    expected = ((mu - math.sqrt(s)) / (mu + math.sqrt(s))) ** 2
    assert mb.evans(sys, lam) == pytest.approx(expected, rel=1e-5)


def test_box_index_p_seven_halves():
    sys = mb.gkdv_system(3.5, 0.5)
    b = mb.box(sys, -7.0, 0.0, -5.0, 5.0, 65, 65)
    assert b["m"] == -2
    assert b["right"]["index"] == -2


def test_verdicts():
    assert mb.gkdv_verdict(2.0, 0.5)["status"] == "consistent with stability"
    assert mb.gkdv_verdict(4.5, 0.5)["status"] == "unstable"


def test_critical_power_rejected():
    with pytest.raises(ValueError):
        mb.gkdv_verdict(4.0, 0.5)


def test_kdvb_left_bound_value():
    # eps = delta = min(nu/4, 1/(3C)) = 1/32 for nu = 1/8, C = 1
    assert mb.kdvb_left_shelf_bound(0.125, 1.0) == pytest.approx(-(512.0 + 48.0))
