from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st
from mpmath import mp, mpf

import oracles
from thetaunits import qseries
from thetaunits.bigreal import eps, rel_diff
from thetaunits.errors import DomainError, PrecisionExhaustedError

P = 256
TOL = eps(P - 32)

nomes = st.fractions(min_value=Fraction(1, 1000), max_value=Fraction(9, 10), max_denominator=1000)
rationals = st.fractions(min_value=Fraction(1, 12), max_value=Fraction(60), max_denominator=12)


def close(a, b, tol=TOL):
    return rel_diff(a, b) < tol


# -- golden values -------------------------------------------------------------

def test_qpochhammer_at_one_tenth():
    # pentagonal expansion 1 - q - q^2 + q^5 + q^7 - q^12 - q^15 + q^22 + q^26, next term q^35
    with mp.workprec(160):
        q = mpf("0.1")
        pent = 1 - q - q**2 + q**5 + q**7 - q**12 - q**15 + q**22 + q**26
        assert abs(qseries.qpochhammer_inf(q, q, 128) - pent) < mpf("1e-34")


def test_theta_values_at_one_tenth():
    with mp.workprec(160):
        q = mpf("0.1")
        phi = 1 + 2 * (q + q**4 + q**9 + q**16 + q**25)
        psi = 1 + q + q**3 + q**6 + q**10 + q**15 + q**21 + q**28
        assert abs(qseries.theta_phi(q, 128) - phi) < mpf("1e-35")
        assert abs(qseries.theta_psi(q, 128) - psi) < mpf("1e-35")
        assert mpmath.nstr(phi, 8) == "1.2002" and mpmath.nstr(psi, 11) == "1.1010010001"


def test_eta_at_i():
    # eta(i) = Gamma(1/4) / (2 pi^(3/4))
    with mp.workprec(P + 32):
        expected = mpmath.gamma(mpf(1) / 4) / (2 * mpmath.pi ** (mpf(3) / 4))
    assert close(qseries.eta_imag(1, P), expected)


def test_b_10_3_is_sqrt2_minus_1_squared():
    with mp.workprec(P + 32):
        expected = (mpmath.sqrt(2) - 1) ** 2
    assert close(qseries.b_numeric(10, 3, P), expected)


def test_b_trivial_n_is_one():
    assert qseries.b_numeric(7, 1, P) == 1
    assert qseries.a_numeric(7, 1, P) == 1


def test_g2_is_one():
    assert close(qseries.class_invariant_numeric("g", 2, 128), mpf(1), eps(96))


def test_G1_is_one():
    assert close(qseries.class_invariant_numeric("G", 1, 128), mpf(1), eps(96))


def test_g322_golden():
    v = qseries.class_invariant_numeric("g", 322, 512)
    assert mpmath.nstr(v, 17) == "8.8076814477471434"


# -- against independent oracles ------------------------------------------------

@given(a=st.fractions(min_value=-2, max_value=Fraction(9, 10), max_denominator=50), q=nomes)
def test_qpochhammer_matches_mpmath(a, q):
    a, q = mpf(a.numerator) / a.denominator, mpf(q.numerator) / q.denominator
    if a == 0:
        return
    assert close(qseries.qpochhammer_inf(a, q, P), oracles.qp(a, q), eps(P - 48))


@given(q=st.fractions(min_value=Fraction(-9, 10), max_value=Fraction(9, 10), max_denominator=1000))
def test_theta_phi_matches_jtheta(q):
    q = mpf(q.numerator) / q.denominator
    assert close(qseries.theta_phi(q, P), oracles.phi(q, P))


@given(q=nomes)
def test_theta_psi_matches_jtheta(q):
    q = mpf(q.numerator) / q.denominator
    assert close(qseries.theta_psi(q, P), oracles.psi(q, P))


@given(q=st.fractions(min_value=Fraction(-9, 10), max_value=Fraction(9, 10), max_denominator=1000))
def test_product_and_sum_forms_agree(q):
    q = mpf(q.numerator) / q.denominator
    assert close(qseries.theta_phi(q, P), qseries.theta_phi_sum(q, P))
    assert close(qseries.theta_psi(q, P), qseries.theta_psi_sum(q, P))


@given(t=st.fractions(min_value=Fraction(1, 10), max_value=Fraction(12), max_denominator=100))
def test_eta_modular_transformation(t):
    # eta(i/t) = sqrt(t) eta(i t)
    with mp.workprec(P + 32):
        tv = mpf(t.numerator) / t.denominator
        assert close(qseries.eta_imag(1 / tv, P), mpmath.sqrt(tv) * qseries.eta_imag(tv, P))


@given(t=st.fractions(min_value=Fraction(1, 4), max_value=Fraction(8), max_denominator=50))
def test_eta_methods_agree_with_oracle(t):
    tv = mpf(t.numerator) / t.denominator
    ref = oracles.eta_imag(tv, P)
    for method in ("auto", "pentagonal", "product"):
        assert close(qseries.eta_imag(tv, P, method), ref)


@given(n=rationals)
def test_g_invariant_matches_oracle(n):
    assert close(qseries.class_invariant_numeric("g", n, P), oracles.g_invariant(n, P))


# -- identities -----------------------------------------------------------------

@given(a=st.fractions(min_value=Fraction(-3, 2), max_value=Fraction(1, 2), max_denominator=20), q=nomes)
def test_qpochhammer_shift(a, q):
    # (a; q)_inf = (1 - a) (aq; q)_inf
    with mp.workprec(P + 32):
        a, q = mpf(a.numerator) / a.denominator, mpf(q.numerator) / q.denominator
        assert close(qseries.qpochhammer_inf(a, q, P), (1 - a) * qseries.qpochhammer_inf(a * q, q, P), eps(P - 48))


@given(n=rationals)
def test_weber_relation_g_G(n):
    # (g G)^8 (G^8 - g^8) = 1/4
    g = qseries.class_invariant_numeric("g", n, P)
    G = qseries.class_invariant_numeric("G", n, P)
    with mp.workprec(P + 32):
        val = (g * G) ** 8 * (G ** 8 - g ** 8)
        assert abs(val - mpf(1) / 4) < eps(P - 48) * max(1, (g * G) ** 16)


@given(n=st.fractions(min_value=Fraction(1, 8), max_value=Fraction(40), max_denominator=8))
def test_g_inversion(n):
    # g_{4/n} = 1 / g_n
    with mp.workprec(P + 32):
        a = qseries.class_invariant_numeric("g", Fraction(4) / n, P)
        b = qseries.class_invariant_numeric("g", n, P)
        assert close(a * b, mpf(1))


@given(m=rationals, n=st.integers(min_value=1, max_value=9))
def test_b_three_representations(m, n):
    reps = qseries.b_representations(m, n, P)
    assert close(reps["theta"], reps["mixed"])
    assert close(reps["theta"], reps["eta"])
    assert reps["theta"] > 0


@given(m=rationals, n=st.integers(min_value=1, max_value=9))
def test_a_product_matches_sum(m, n):
    reps = qseries.a_representations(m, n, P)
    assert close(reps["product"], reps["sum"])


@pytest.mark.parametrize("m,n", [(10, 3), (34, 7), (Fraction(7, 3), 5)])
def test_b_precision_monotone(m, n):
    lo = qseries.b_numeric(m, n, 256)
    hi = qseries.b_numeric(m, n, 512)
    assert rel_diff(lo, hi) < eps(224)


# -- errors ---------------------------------------------------------------------

@pytest.mark.parametrize("q", [0, 1, -0.5, 1.5])
def test_qpochhammer_rejects_bad_nome(q):
    with pytest.raises(DomainError):
        qseries.qpochhammer_inf(mpf("0.5"), q, P)


def test_bad_arguments():
    with pytest.raises(DomainError):
        qseries.b_numeric(-1, 3, P)
    with pytest.raises(DomainError):
        qseries.b_numeric(3, 0, P)
    with pytest.raises(DomainError):
        qseries.b_numeric(3, 3, 32)
    with pytest.raises(DomainError):
        qseries.theta_phi(mpf(1), P)
    with pytest.raises(DomainError):
        qseries.eta_imag(0, P)
    with pytest.raises(ValueError):
        qseries.eta_imag(1, P, method="bogus")


def test_check_flags_disagreement(monkeypatch):
    real = qseries._b_eta

    def off(m, n, prec):
        return real(m, n, prec) * (1 + eps(prec // 2))

    monkeypatch.setattr(qseries, "_b_eta", off)
    with pytest.raises(PrecisionExhaustedError):
        qseries.b_numeric(10, 3, P, check=True)


def test_euler_terms_bound():
    # the tail after K factors is below 2^-(prec+16)
    q = mpf("0.9")
    K = qseries.euler_terms(1, q, P)
    with mp.workprec(P + 64):
        assert q ** K / (1 - q) < eps(P + 16)
        assert q ** (K - 2) / (1 - q) > eps(P + 16) * q ** 2


def test_nome_value():
    nm = qseries.Nome(Fraction(10), 3, P)
    with mp.workprec(P + 32):
        assert close(nm.q, mpmath.exp(-mpmath.pi * mpmath.sqrt(mpf(10) / 3)))
    assert "Nome" in repr(nm)
