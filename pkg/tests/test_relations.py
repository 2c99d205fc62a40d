import numpy as np
import pytest

import helpers
from conftest import FAST_FACTOR
from locnash.errors import InsufficientSamples
from locnash.lattices import Lattice1
from locnash.relations import (
    dependent,
    find_relation,
    monomial_exponents,
    translate_algebraicity_check,
    verify_aat,
    wp_sampler,
)
from locnash.structures import exp_map, identity_map, sin_map, wp_real


def wp_s(lat):
    return wp_sampler(lat, trunc_radius_factor=FAST_FACTOR)


# -- monomial basis ---------------------------------------------------------------

def test_monomial_order_graded_lex():
    monos = monomial_exponents(2, 2)
    assert monos[0] == (0, 0)
    assert monos[1:3] == [(1, 0), (0, 1)]
    assert len(monos) == 9  # per-variable bound: (d+1)^arity
    assert monos.index((2, 0)) < monos.index((1, 1)) < monos.index((0, 2))


def test_monomial_budget_guard():
    with pytest.raises(ValueError):
        find_relation([lambda u: u] * 6, 9, domain_dim=1)


# -- basic detections ---------------------------------------------------------------

def test_linear_identity_relation():
    cert = find_relation(
        [lambda u, v: u, lambda u, v: v, lambda u, v: u + v],
        max_degree=1, seed=7, domain_dim=2,
    )
    assert cert is not None and cert.max_degree == 1
    assert cert.residual < 1e-12
    c = np.array([cert.coefficient_of(e) for e in [(1, 0, 0), (0, 1, 0), (0, 0, 1)]])
    assert np.allclose(c / c[0], [1, 1, -1], atol=1e-9)
    assert abs(cert.coefficient_of((0, 0, 0))) < 1e-9


def test_exponential_functional_equation():
    cert = find_relation(
        [lambda u, v: np.exp(u), lambda u, v: np.exp(v), lambda u, v: np.exp(u + v)],
        max_degree=2, seed=7, domain_dim=2,
    )
    assert cert is not None and cert.residual < 1e-10
    c12 = cert.coefficient_of((1, 1, 0))
    c3 = cert.coefficient_of((0, 0, 1))
    assert abs(c12 / c3 + 1) < 1e-9
    others = [abs(c) for e, c in zip(cert.exponents, cert.coefficients)
              if e not in ((1, 1, 0), (0, 0, 1))]
    assert max(others) < 1e-8


def test_wp_differential_equation_matches_eisenstein_oracle():
    lat = Lattice1(1, 2j)
    ctx_sampler = wp_s(lat)
    from locnash.weierstrass import get_context

    ctx = get_context(lat, FAST_FACTOR)

    def wpp(u):
        v, _, p = ctx.wp_prime_many(np.asarray(u, dtype=complex))
        v = np.array(v)
        v[p | (np.abs(v) > 1e3)] = complex("nan")
        return v

    cert = find_relation([ctx_sampler, wpp], max_degree=3, seed=5, domain_dim=1)
    assert cert is not None and cert.max_degree == 3
    assert cert.residual < 1e-6
    c22 = cert.coefficient_of((0, 2))
    assert abs(cert.coefficient_of((3, 0)) / c22 + 4) < 1e-6
    g2_cert = cert.coefficient_of((1, 0)) / c22
    g3_cert = cert.coefficient_of((0, 0)) / c22
    g2o, g3o = helpers.eisenstein_oracle(lat)
    assert abs(g2_cert - g2o) / abs(g2o) < 1e-6
    assert abs(g3_cert - g3o) / abs(g3o) < 1e-6


# -- determinism and scale invariance ---------------------------------------------------

def test_determinism_bit_identical():
    def run():
        return find_relation(
            [lambda u, v: np.exp(u), lambda u, v: np.exp(v), lambda u, v: np.exp(u + v)],
            max_degree=2, seed=123, domain_dim=2,
        )

    a, b = run(), run()
    assert a == b  # dataclass equality: exact floats, same exponent order


def test_scale_invariance_of_acceptance():
    lat1, lat2 = Lattice1(1, 1j), Lattice1(2, 2j)
    s1, s2 = wp_s(lat1), wp_s(lat2)
    ok_plain, cert_plain = dependent(s1, s2, 4, seed=2)
    ok_scaled, cert_scaled = dependent(lambda u: 1e3 * s1(u), s2, 4, seed=2)
    assert ok_plain and ok_scaled
    assert cert_scaled.max_degree == cert_plain.max_degree
    assert cert_scaled.residual < 1e-6
    # coefficients differ (absorbing the factor) but acceptance did not change
    assert not np.allclose(
        [abs(c) for c in cert_plain.coefficients],
        [abs(c) for c in cert_scaled.coefficients],
    )


# -- dependence fixtures ------------------------------------------------------------------

def test_dependent_sublattice_pair():
    ok, cert = dependent(wp_s(Lattice1(1, 1j)), wp_s(Lattice1(2, 2j)), 8, seed=2)
    assert ok and cert.max_degree <= 4 and cert.residual < 1e-6


def test_dependent_same_function():
    ok, cert = dependent(wp_s(Lattice1(1, 1j)), wp_s(Lattice1(1, 1j)), 2, seed=2)
    assert ok and cert.max_degree == 1
    assert abs(cert.coefficient_of((1, 0)) / cert.coefficient_of((0, 1)) + 1) < 1e-9


def test_dependent_incommensurable_lattices_not_found():
    ok, cert = dependent(
        wp_s(Lattice1(1, 1j)), wp_s(Lattice1(1, np.pi * 1j)), 8, seed=2
    )
    assert not ok and cert is None


def test_dependent_u_exp_u_not_found():
    ok, _ = dependent(lambda u: u, lambda u: np.exp(u), 8, seed=2)
    assert not ok


# -- AAT verification -----------------------------------------------------------------------

def test_verify_aat_identity():
    rep = verify_aat(identity_map(), 1, seed=3)
    assert rep.success and rep.certificates[0].residual < 1e-12


def test_verify_aat_exp():
    rep = verify_aat(exp_map(), 2, seed=3)
    cert = rep.certificates[0]
    assert rep.success and cert.residual < 1e-10
    assert abs(cert.coefficient_of((1, 1, 0)) / cert.coefficient_of((0, 0, 1)) + 1) < 1e-8


def test_verify_aat_sin_degree_four():
    rep = verify_aat(sin_map(), 4, seed=3)
    cert = rep.certificates[0]
    assert rep.success and cert.max_degree == 4
    # the sine addition surface: symmetric sextic with the X1^2 X2^2 X3^2 term
    c = cert.coefficient_of((4, 0, 0))
    assert abs(cert.coefficient_of((2, 2, 2)) / c - 4) < 1e-6
    assert abs(cert.coefficient_of((2, 2, 0)) / c + 2) < 1e-6


def test_verify_aat_wp():
    rep = verify_aat(wp_real(1.0), 6, seed=3, trunc_radius_factor=FAST_FACTOR)
    cert = rep.certificates[0]
    assert rep.success and cert.residual < 1e-6
    assert cert.max_degree <= 6  # found at 2: the classical biquadratic


def test_verify_aat_wp_matches_classical_biquadratic():
    """The found addition relation must be the classical biquadratic

        (x-y)^2 z^2 - [(x+y)(2xy - g2/2) - g3] z + (xy + g2/4)^2 + g3 (x+y)

    with x = f(u), y = f(v), z = f(u+v), up to overall scale."""
    lat = Lattice1(1, 2j)
    d = wp_real(2.0)
    rep = verify_aat(d, 6, seed=3, trunc_radius_factor=FAST_FACTOR)
    cert = rep.certificates[0]
    assert rep.success and cert.max_degree == 2
    g2, g3 = helpers.eisenstein_oracle(lat)
    expected = {
        (2, 0, 2): 1.0, (0, 2, 2): 1.0, (1, 1, 2): -2.0,
        (2, 1, 1): -2.0, (1, 2, 1): -2.0,
        (1, 0, 1): g2 / 2, (0, 1, 1): g2 / 2, (0, 0, 1): g3,
        (2, 2, 0): 1.0, (1, 1, 0): g2 / 2,
        (1, 0, 0): g3, (0, 1, 0): g3,
        (0, 0, 0): g2**2 / 16,
    }
    ref = np.array([expected.get(e, 0.0) for e in cert.exponents], dtype=complex)
    ref /= np.linalg.norm(ref)
    got = np.array(cert.coefficients)
    # align overall phase on the largest reference entry
    k = int(np.argmax(np.abs(ref)))
    got = got * (ref[k] / got[k])
    assert np.max(np.abs(got - ref)) < 1e-7


def test_verify_aat_p3_both_coordinates():
    from locnash.structures import painleve

    rep = verify_aat(painleve("p3"), 1, seed=3)
    assert rep.success and len(rep.certificates) == 2


def test_verify_aat_reports_failure():
    # u and e^u are independent: no relation for the exp coordinate at degree 1
    # over a map whose sum coordinate breaks the box; use a degree too low for sin
    rep = verify_aat(sin_map(), 2, seed=3)
    assert not rep.success and rep.certificates[0] is None


# -- translates -------------------------------------------------------------------------------

def test_translate_exp():
    cert = translate_algebraicity_check(exp_map(), 1.0, 2, seed=4)
    ratio = cert.coefficient_of((1, 0)) / cert.coefficient_of((0, 1))
    assert abs(ratio + np.e) < 1e-9


def test_translate_identity():
    cert = translate_algebraicity_check(identity_map(), 1.0, 2, seed=4)
    c0 = cert.coefficient_of((0, 0))
    assert abs(cert.coefficient_of((1, 0)) / c0 - 1) < 1e-9
    assert abs(cert.coefficient_of((0, 1)) / c0 + 1) < 1e-9


def test_translate_wp():
    cert = translate_algebraicity_check(
        wp_real(1.0), 0.3, 6, seed=4, trunc_radius_factor=FAST_FACTOR
    )
    assert cert is not None and cert.max_degree <= 6
    assert cert.residual < 1e-6


# -- failure modes ------------------------------------------------------------------------------

def test_insufficient_samples():
    def always_pole(u):
        return np.full(np.shape(u), complex("nan"))

    with pytest.raises(InsufficientSamples):
        find_relation([always_pole], 1, seed=0, domain_dim=1)


def test_certificate_serialization():
    cert = find_relation(
        [lambda u, v: u, lambda u, v: v, lambda u, v: u + v],
        max_degree=1, seed=7, domain_dim=2,
    )
    text = cert.serialize()
    assert text.startswith("relation_certificate\narity = 3\ndegree = 1\n")
    assert "residual = " in text and "singular_gap = " in text
    assert text.count("term (") == len(cert.exponents)
