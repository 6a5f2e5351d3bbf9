import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistjones.symphase import (DEFAULT_CONTEXT, Coefficient, Context, ContextMismatchError,
                                 MissingAssignmentError, SymbolicScalar, UnsupportedPhaseError,
                                 parse_angle, parse_radians)

import randsym

CTX = DEFAULT_CONTEXT


@st.composite
def scalars(draw):
    seed = draw(st.integers(0, 2**32 - 1))
    return randsym.scalar(np.random.default_rng(seed))


@settings(max_examples=150, deadline=None)
@given(scalars(), scalars(), scalars())
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == CTX.zero()
    assert a * CTX.one() == a
    assert a + CTX.zero() == a


@settings(max_examples=150, deadline=None)
@given(scalars(), scalars())
def test_conjugation_is_an_involutive_ring_map(a, b):
    assert a.conj().conj() == a
    assert (a * b).conj() == a.conj() * b.conj()
    assert (a + b).conj() == a.conj() + b.conj()


@settings(max_examples=100, deadline=None)
@given(scalars(), scalars(), st.integers(0, 2**31))
def test_numeric_evaluation_is_a_homomorphism(a, b, seed):
    assign, eta = randsym.assignment(np.random.default_rng(seed), 4)
    ea, eb = a.eval_numeric(assign, eta), b.eval_numeric(assign, eta)
    np.testing.assert_allclose((a * b).eval_numeric(assign, eta), ea * eb, atol=1e-9)
    np.testing.assert_allclose((a + b).eval_numeric(assign, eta), ea + eb, atol=1e-9)
    np.testing.assert_allclose(a.conj().eval_numeric(assign, eta), np.conj(ea), atol=1e-9)


@settings(max_examples=100, deadline=None)
@given(scalars())
def test_records_round_trip_through_json(a):
    recs = json.loads(json.dumps(a.to_records()))
    assert SymbolicScalar.from_records(CTX, recs) == a


def test_eighth_roots_fold_into_the_coefficient():
    z = CTX.expi("pi/4")
    assert z.as_constant() == Coefficient(Fraction(0), Fraction(0), Fraction(1, 2), Fraction(1, 2))
    assert z ** 8 == CTX.one()
    assert CTX.expi("pi/2") == CTX.const(1j)
    assert CTX.expi("pi") == CTX.const(-1)


def test_sqrt2_arithmetic_is_exact():
    r = CTX.sqrt2()
    assert r * r == CTX.const(2)
    assert r * CTX.sqrt2(-1) == CTX.one()
    assert (r + 1) * (r - 1) == CTX.one()


def test_euler_and_pythagoras():
    c, s = CTX.cos("2*vartheta"), CTX.sin("2*vartheta")
    assert c * c + s * s == CTX.one()
    assert c + s * 1j == CTX.expi("2*vartheta")
    assert CTX.cos("vartheta + alpha") == CTX.cos("vartheta") * CTX.cos("alpha") - \
        CTX.sin("vartheta") * CTX.sin("alpha")


def test_cancellation_gives_canonical_zero():
    z = CTX.expi("vartheta") - CTX.expi("vartheta")
    assert z.is_zero() and z == CTX.zero() and z.terms == []


def test_eta_grades_and_phase_support():
    x = CTX.eta(3) * CTX.cos("2*vartheta") + CTX.eta(1)
    assert x.eta_grades() == {1, 3}
    assert x.exponents_of("vartheta") == {-2, 0, 2}
    parts = x.split_by("vartheta")
    assert set(parts) == {-2, 0, 2}
    assert sum(parts.values(), CTX.zero()) == x
    assert parts[2].without_symbol("vartheta", 2) == CTX.eta(3) * Fraction(1, 2)


def test_evaluation_matches_direct_formula():
    x = CTX.eta(2) * CTX.sin("3*vartheta - alpha") * 2 + CTX.sqrt2()
    t, a, eta = 0.7, 1.9, 1.3
    want = 2 * eta ** 2 * math.sin(3 * t - a) + math.sqrt(2)
    assert abs(x.eval_numeric({"vartheta": t, "alpha": a}, eta) - want) < 1e-12


def test_evaluation_broadcasts_constants_to_grid_shape():
    grid = np.linspace(0, 1, 7)
    v = CTX.const(3).eval_numeric({"vartheta": grid}, 1.0)
    assert v.shape == (7,) and np.allclose(v, 3)


def test_missing_assignment_is_reported_by_name():
    with pytest.raises(MissingAssignmentError, match="alpha"):
        CTX.expi("alpha").eval_numeric({}, 1.0)


def test_nonpositive_eta_rejected():
    with pytest.raises(ValueError):
        CTX.eta().eval_numeric({}, 0.0)


def test_context_mismatch():
    other = Context(("x",))
    with pytest.raises(ContextMismatchError):
        CTX.one() + other.one()


def test_phase_restrictions():
    with pytest.raises(UnsupportedPhaseError):
        CTX.expi("pi/3")
    with pytest.raises(UnsupportedPhaseError):
        CTX.expi("vartheta/2")


def test_angle_parser():
    a = parse_angle(CTX, "2*vartheta - alpha + pi/4")
    assert a == CTX.sym("vartheta") * 2 - CTX.sym("alpha") + CTX.pi(Fraction(1, 4))
    assert parse_angle(CTX, "ϑ") == CTX.sym("vartheta")
    with pytest.raises(ValueError):
        parse_angle(CTX, "0.3")
    with pytest.raises((ValueError, KeyError)):
        parse_angle(CTX, "gamma")


def test_radians_parser():
    assert parse_radians("pi/4") == pytest.approx(math.pi / 4)
    assert parse_radians("pi-0.05") == pytest.approx(math.pi - 0.05)
    assert parse_radians("0.5") == 0.5


def test_pretty_groups_conjugate_pairs():
    assert CTX.cos("2*vartheta").pretty() == "cos(2*vartheta)"
    assert "sin(2*vartheta)" in CTX.sin("2*vartheta").pretty()
    assert (CTX.one() - CTX.eta()).pretty() == "1 - eta"
