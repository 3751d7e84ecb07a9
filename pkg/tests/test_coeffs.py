"""Coefficient ring: GF(p) inverses and Laurent parameter arithmetic."""

import random

import pytest

from conewalk.coeffs import FieldElem, ParamCoeff, ParamRing, ff_inv, ff_inv_int
from conewalk.errors import InvertibleAssignedZero, ModulusMismatch, UnassignedParameter, ZeroInverse

RING = ParamRing(101)
RING7 = ParamRing(7)


def C(ring, **monomials):
    """Convenience: C(RING, c=3) scalar, or explicit term dicts in tests."""
    return ParamCoeff.from_int(ring, monomials.get("c", 0))


def test_ff_inv_identity():
    assert ff_inv(FieldElem(1, 101)) == FieldElem(1, 101)


def test_ff_inv_two_mod_101():
    # extended Euclid oracle: 2 * 51 = 102 = 1 (mod 101)
    assert ff_inv(FieldElem(2, 101)) == FieldElem(51, 101)
    assert (FieldElem(2, 101) * FieldElem(51, 101)).value == 1


def test_ff_inv_zero_raises():
    with pytest.raises(ZeroInverse):
        ff_inv(FieldElem(0, 7))


def test_ff_inv_involution():
    for a in range(1, 101):
        x = FieldElem(a, 101)
        assert ff_inv(ff_inv(x)) == x


def test_ff_inv_oracle_against_exhaustive():
    # brute-force inverse table over GF(7)
    for a in range(1, 7):
        expected = next(b for b in range(1, 7) if a * b % 7 == 1)
        assert ff_inv_int(a, 7) == expected


def test_laurent_cancellation():
    lam_inv = ParamCoeff.param(RING, "lam", -1)
    lam = ParamCoeff.param(RING, "lam", 1)
    assert lam_inv * lam == ParamCoeff.one(RING)


def test_additive_inverse_closes():
    pi = ParamCoeff.param(RING7, "pi")
    one = ParamCoeff.one(RING7)
    # (pi + 1) + (p-1)*pi = 1
    assert (pi + one) + pi.scale(6) == one


def test_negative_laurent_square():
    # (-lam^-1)^2 = lam^-2
    neg = -ParamCoeff.param(RING, "lam", -1)
    assert neg * neg == ParamCoeff.param(RING, "lam", -2)


def test_negative_exponent_rejected_for_non_invertible():
    with pytest.raises(ValueError):
        ParamCoeff.param(RING, "pi", -1)


def test_specialize_laurent_inverse():
    lam_inv = ParamCoeff.param(RING, "lam", -1)
    assert lam_inv.specialize({"lam": 2}) == FieldElem(51, 101)


def test_specialize_affine():
    pi = ParamCoeff.param(RING7, "pi")
    one = ParamCoeff.one(RING7)
    assert (pi + one).specialize({"pi": 0}) == FieldElem(1, 7)


def test_specialize_invertible_zero_raises():
    lam_inv = ParamCoeff.param(RING, "lam", -1)
    with pytest.raises(InvertibleAssignedZero):
        lam_inv.specialize({"lam": 0})
    # even the non-inverted occurrence is rejected: lam is flagged
    lam = ParamCoeff.param(RING, "lam", 1)
    with pytest.raises(InvertibleAssignedZero):
        lam.specialize({"lam": 0})


def test_specialize_unassigned_raises():
    pi = ParamCoeff.param(RING, "pi")
    with pytest.raises(UnassignedParameter):
        pi.specialize({})


def test_modulus_mismatch():
    with pytest.raises(ModulusMismatch):
        ParamCoeff.one(RING) + ParamCoeff.one(RING7)


def _random_coeff(rng, ring):
    terms = {}
    for _ in range(rng.randint(0, 4)):
        exps = [0] * ring.nparams
        for i, name in enumerate(ring.names):
            lo = -2 if name in ring.invertible else 0
            exps[i] = rng.randint(lo, 2)
        terms[tuple(exps)] = rng.randrange(ring.p)
    return ParamCoeff(ring, terms)


def test_ring_axioms_randomized():
    rng = random.Random(20240)
    for _ in range(200):
        a, b, c = (_random_coeff(rng, RING) for _ in range(3))
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


def test_specialize_is_ring_homomorphism():
    rng = random.Random(99)
    for _ in range(100):
        a, b = _random_coeff(rng, RING), _random_coeff(rng, RING)
        assignment = {name: rng.randrange(1, 101) for name in RING.names}
        sa, sb = a.specialize(assignment), b.specialize(assignment)
        assert (a * b).specialize(assignment) == sa * sb
        assert (a + b).specialize(assignment) == sa + sb


def test_derivative_of_laurent_term():
    # d/dlam lam^-1 = -lam^-2
    lam_inv = ParamCoeff.param(RING, "lam", -1)
    assert lam_inv.derivative("lam") == ParamCoeff.param(RING, "lam", -2).scale(-1)


def test_no_zero_terms_stored():
    c = ParamCoeff(RING, {RING.zero_exps(): 101})
    assert c.is_zero()
    assert c.terms == {}


def test_caller_flagged_invertible_parameter():
    ring = ParamRing(101, invertible=frozenset({"lam", "rho"}))
    rho_inv = ParamCoeff.param(ring, "rho", -1)
    assert rho_inv.specialize({"rho": 2}).value == 51
    with pytest.raises(InvertibleAssignedZero):
        rho_inv.specialize({"rho": 0})
    # pi stays non-invertible
    with pytest.raises(ValueError):
        ParamCoeff.param(ring, "pi", -1)
