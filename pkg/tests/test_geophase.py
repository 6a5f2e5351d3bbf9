import cmath
import math

import numpy as np
import pytest

from twistjones.geophase import (NormalizationError, gamma_audit, pancharatnam, paper_gamma_alpha,
                                 paper_gamma_minus_theta, paper_gamma_theta)
from twistjones.jones import GadgetSpec, compose, plate_H
from twistjones.states import PolState, named_ket
from twistjones.symphase import DEFAULT_CONTEXT as CTX

import oracles


def vcr():
    return plate_H(0) @ plate_H("vartheta")


def test_vcr_phases_exact():
    gl = pancharatnam(named_ket("L"), vcr()).amplitude
    gr = pancharatnam(named_ket("R"), vcr()).amplitude
    assert gl == -CTX.eta(2) * CTX.expi("2*vartheta")
    assert gr == -CTX.eta(2) * CTX.expi("-2*vartheta")
    assert gr == gl.conj()


def test_numeric_fields():
    r = pancharatnam(named_ket("L"), vcr(), {"vartheta": 0.3}, 1.5)
    assert r.magnitude_numeric == pytest.approx(1.5 ** 2)
    assert r.arg_numeric == pytest.approx(cmath.phase(-cmath.exp(0.6j)))


def test_qhq_phase_on_h_matches_numpy():
    op = compose(GadgetSpec.parse("Q(vartheta) H(alpha) Q(vartheta)"))
    amp = pancharatnam(named_ket("h"), op).amplitude
    for t, a, eta in ((0.3, 1.1, 1.2), (2.0, -0.4, 0.8)):
        want = np.vdot(oracles.KET_H, oracles.qhq(t, a, eta) @ oracles.KET_H)
        assert abs(amp.eval_numeric({"vartheta": t, "alpha": a}, eta) - want) < 1e-12


def test_engine_phase_vanishes_when_middle_plate_follows_the_twist():
    op = compose(GadgetSpec.parse("Q(vartheta) H(vartheta) Q(vartheta)"))
    assert pancharatnam(named_ket("h"), op).amplitude.is_zero()
    op = compose(GadgetSpec.parse("Q(-vartheta) H(-vartheta) Q(-vartheta)"))
    assert pancharatnam(named_ket("h"), op).amplitude.is_zero()


def test_unnormalized_input_rejected():
    s = named_ket("h") * 2
    with pytest.raises(NormalizationError):
        pancharatnam(s, vcr())


def test_published_closed_forms_by_substitution():
    t, a, eta = 0.37, 0.91, 1.3
    want = 2 * eta ** 3 * (math.sin(2 * a) - math.sin(4 * t + 2 * a) - 2j * math.sin(2 * t + 2 * a))
    assert abs(paper_gamma_alpha(a, t, eta) - want) < 1e-12
    assert paper_gamma_theta(t, eta) == paper_gamma_minus_theta(t, eta)
    assert abs(paper_gamma_theta(t, eta) - paper_gamma_alpha(t, t, eta)) < 1e-12


def test_gamma_audit_verdicts():
    vr = gamma_audit(GadgetSpec.parse("H(0) H(vartheta)"), "L", "VCR-phase-L", samples=200)
    assert vr.verdict == "exact"
    ga = gamma_audit(GadgetSpec.parse("Q(vartheta) H(alpha) Q(vartheta)"), "h", "gamma-alpha",
                     samples=200)
    assert ga.verdict == "structural-mismatch"
    with pytest.raises(KeyError):
        gamma_audit(GadgetSpec.parse("H(0)"), "h", "C-h-prime")
