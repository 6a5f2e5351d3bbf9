"""Published closed forms, transcribed verbatim as reference oracles.

Nothing here is derived by the engine.  Each symbolic form is returned as a
:class:`Printed` object: a list of labelled terms whose sum is the expression
exactly as published, so the auditor can flag terms individually.  The kets
inside a printed form follow the handedness of the convention passed in.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

import numpy as np

from .jones import (DEFAULT_CONVENTION, Convention, Matrix2, pauli_x, pauli_y,
                    quarter_turn, reflection_K, rotation_S)
from .states import PolState, named_ket
from .symphase import DEFAULT_CONTEXT, Context, SymbolicScalar

__all__ = [
    "Printed",
    "REGISTRY",
    "closed_form_C_h1",
    "closed_form_C_h2",
    "gamma_alpha",
    "gamma_minus_theta",
    "gamma_theta",
    "printed",
]

Obj = Union[SymbolicScalar, Matrix2, PolState]


@dataclass(frozen=True)
class Printed:
    name: str
    terms: tuple[tuple[str, Obj], ...]

    @property
    def total(self) -> Obj:
        out = self.terms[0][1]
        for _, t in self.terms[1:]:
            out = out + t
        return out


def _kets(conv: Convention, ctx: Context):
    return named_ket("L", conv, ctx), named_ket("R", conv, ctx)


def _e(ctx: Context, text: str) -> SymbolicScalar:
    return ctx.expi(ctx.angle(text))


# -- twisted differential matrix and basis relations ------------------------

def twisted_N(conv=DEFAULT_CONVENTION, ctx=DEFAULT_CONTEXT) -> Printed:
    eta = ctx.eta()
    return Printed("twisted-N", (
        ("eta cos(phi) J", quarter_turn(ctx) * (eta * ctx.cos("phi"))),
        ("-i eta sin(phi) K(vartheta)", reflection_K("vartheta", ctx) * (eta * ctx.sin("phi") * -1j)),
    ))


def h_from_circular(conv=DEFAULT_CONVENTION, ctx=DEFAULT_CONTEXT) -> Printed:
    L, R = _kets(conv, ctx)
    r = ctx.sqrt2(-1)
    return Printed("h-from-circular", (("L/sqrt2", L * r), ("R/sqrt2", R * r)))


def v_from_circular(conv=DEFAULT_CONVENTION, ctx=DEFAULT_CONTEXT) -> Printed:
    L, R = _kets(conv, ctx)
    r = ctx.sqrt2(-1)
    return Printed("v-from-circular", (("L/sqrt2", L * r), ("-R/sqrt2", R * -r)))


def twisted_N_on_h(conv=DEFAULT_CONVENTION, ctx=DEFAULT_CONTEXT) -> Printed:
    L, R = _kets(conv, ctx)
    eta = ctx.eta()
    v = named_ket("v", conv, ctx)
    k = eta * ctx.sin("phi") * ctx.sqrt2(-1)
    return Printed("twisted-N-on-h", (
        ("-i eta cos(phi) |v>", v * (eta * ctx.cos("phi") * -1j)),
        ("eta sin(phi)/sqrt2 |R> e^{2i vartheta}", R * (k * _e(ctx, "2*vartheta"))),
        ("-eta sin(phi)/sqrt2 |L> e^{-2i vartheta}", L * (-k * _e(ctx, "-2*vartheta"))),
    ))


def twisted_N_on_h_aniso(conv=DEFAULT_CONVENTION, ctx=DEFAULT_CONTEXT) -> Printed:
    p = twisted_N_on_h(conv, ctx)
    return Printed("twisted-N-on-h-K-part", p.terms[1:])


def twisted_N_on_h_iso(conv=DEFAULT_CONVENTION, ctx=DEFAULT_CONTEXT) -> Printed:
    p = twisted_N_on_h(conv, ctx)
    return Printed("twisted-N-on-h-J-part", p.terms[:1])


# -- circular retarder ------------------------------------------------------

def _ket_term(conv, ctx, label, spin, coeff) -> Printed:
    L, R = _kets(conv, ctx)
    return Printed(label, ((label, (L if spin == "L" else R) * coeff),))


def H_on_L(conv=DEFAULT_CONVENTION, ctx=DEFAULT_CONTEXT) -> Printed:
    return _ket_term(conv, ctx, "eta |R> e^{2i vartheta}", "R", ctx.eta() * _e(ctx, "2*vartheta"))


def H_on_R(conv=DEFAULT_CONVENTION, ctx=DEFAULT_CONTEXT) -> Printed:
    return _ket_term(conv, ctx, "eta |L> e^{-2i vartheta}", "L", ctx.eta() * _e(ctx, "-2*vartheta"))


def VCR_on_L(conv=DEFAULT_CONVENTION, ctx=DEFAULT_CONTEXT) -> Printed:
    return _ket_term(conv, ctx, "-eta^2 |L> e^{2i vartheta}", "L", -ctx.eta(2) * _e(ctx, "2*vartheta"))


def VCR_on_R(conv=DEFAULT_CONVENTION, ctx=DEFAULT_CONTEXT) -> Printed:
    return _ket_term(conv, ctx, "-eta^2 |R> e^{-2i vartheta}", "R", -ctx.eta(2) * _e(ctx, "-2*vartheta"))


def VCR_phase_L(conv=DEFAULT_CONVENTION, ctx=DEFAULT_CONTEXT) -> Printed:
    return Printed("gamma_c^L", (("-eta^2 e^{2i vartheta}", -ctx.eta(2) * _e(ctx, "2*vartheta")),))


def VCR_phase_R(conv=DEFAULT_CONVENTION, ctx=DEFAULT_CONTEXT) -> Printed:
    return Printed("gamma_c^R", (("-eta^2 e^{-2i vartheta}", -ctx.eta(2) * _e(ctx, "-2*vartheta")),))


def HH_offset_on_L(conv=DEFAULT_CONVENTION, ctx=DEFAULT_CONTEXT) -> Printed:
    return _ket_term(conv, ctx, "-i eta^2 |L> e^{2i(omega+alpha)}", "L",
                     ctx.eta(2) * _e(ctx, "2*omega + 2*alpha") * -1j)


def HHH_on_L(conv=DEFAULT_CONVENTION, ctx=DEFAULT_CONTEXT) -> Printed:
    return _ket_term(conv, ctx, "-i eta^2 |R> e^{2i(omega+beta)}", "R",
                     ctx.eta(2) * _e(ctx, "2*omega + 2*beta") * -1j)


# -- linear retarder --------------------------------------------------------

def _qhq_pref(ctx):
    return ctx.eta(3) * complex(0, -0.5)


def _qhq_operator_form(ctx, a: str, b: str, c: str, name: str) -> Printed:
    """-i eta^3/2 [(S(a) - S(b)) sigma_x - 2 S(c) sigma_y]."""
    pref = _qhq_pref(ctx)
    sx, sy = pauli_x(ctx), pauli_y(ctx)
    return Printed(name, (
        (f"S({a}) sigma_x", (rotation_S(a, ctx) @ sx) * pref),
        (f"-S({b}) sigma_x", (rotation_S(b, ctx) @ sx) * -pref),
        (f"-2 S({c}) sigma_y", (rotation_S(c, ctx) @ sy) * (pref * -2)),
    ))


def qhq_operator(conv=DEFAULT_CONVENTION, ctx=DEFAULT_CONTEXT) -> Printed:
    return _qhq_operator_form(ctx, "2*alpha", "4*vartheta + 2*alpha", "2*vartheta + 2*alpha",
                              "QHQ(vartheta, alpha)")


def qhq_plus(conv=DEFAULT_CONVENTION, ctx=DEFAULT_CONTEXT) -> Printed:
    return _qhq_operator_form(ctx, "2*vartheta", "6*vartheta", "4*vartheta", "QHQ(+vartheta)")


def qhq_minus(conv=DEFAULT_CONVENTION, ctx=DEFAULT_CONTEXT) -> Printed:
    return _qhq_operator_form(ctx, "-2*vartheta", "-6*vartheta", "-4*vartheta", "QHQ(-vartheta)")


def _three_pair_state(conv, ctx, a: str, b: str, c: str, third_coeff, name) -> Printed:
    """pref [ i(R e^{ia} - L e^{-ia}) - i(R e^{ib} - L e^{-ib}) + third (L e^{-ic} + R e^{ic}) ]."""
    L, R = _kets(conv, ctx)
    pref = _qhq_pref(ctx)
    one = (R * _e(ctx, a) - L * _e(ctx, f"-({a})")) * (pref * 1j)
    two = (R * _e(ctx, b) - L * _e(ctx, f"-({b})")) * (pref * -1j)
    three = (L * _e(ctx, f"-({c})") + R * _e(ctx, c)) * (pref * third_coeff)
    return Printed(name, (
        (f"i(|R>e^{{i({a})}} - |L>e^{{-i({a})}})", one),
        (f"-i(|R>e^{{i({b})}} - |L>e^{{-i({b})}})", two),
        (f"{third_coeff}(|L>e^{{-i({c})}} + |R>e^{{i({c})}})", three),
    ))


def qhq_on_h(conv=DEFAULT_CONVENTION, ctx=DEFAULT_CONTEXT) -> Printed:
    return _three_pair_state(conv, ctx, "2*alpha", "4*vartheta + 2*alpha",
                             "2*vartheta + 2*alpha", -2, "QHQ|h>")


def pi_state(conv=DEFAULT_CONVENTION, ctx=DEFAULT_CONTEXT) -> Printed:
    """The three-singlet rewriting, whose third coefficient is -2i."""
    return _three_pair_state(conv, ctx, "2*alpha", "4*vartheta + 2*alpha",
                             "2*vartheta + 2*alpha", -2j, "|Pi>")


def h_prime(conv=DEFAULT_CONVENTION, ctx=DEFAULT_CONTEXT) -> Printed:
    return _three_pair_state(conv, ctx, "2*vartheta", "6*vartheta", "4*vartheta", -2, "h'")


def h_double_prime(conv=DEFAULT_CONVENTION, ctx=DEFAULT_CONTEXT) -> Printed:
    L, R = _kets(conv, ctx)
    pref = ctx.eta(6) * Fraction(-1, 4)

    def e(k):
        return _e(ctx, f"{k}*vartheta")

    groups = (
        ("2(|L>e^{-2i} + |R>e^{2i})", (L * e(-2) + R * e(2)) * 2),
        ("-(|L>e^{2i} + |R>e^{-2i})", -(L * e(2) + R * e(-2))),
        ("-(|L>e^{-6i} + |R>e^{6i})", -(L * e(-6) + R * e(6))),
        ("2(|L> - |R>)", (L - R) * 2),
        ("-2(|R>e^{4i} - |L>e^{-4i})", (R * e(4) - L * e(-4)) * -2),
        ("-2i(|L>e^{-8i} + |R>e^{8i})", (L * e(-8) + R * e(8)) * -2j),
        ("-2i(|L>e^{-12i} + |R>e^{12i})", (L * e(-12) + R * e(12)) * -2j),
        ("-2(|L>e^{-10i} + |R>e^{10i})", (L * e(-10) + R * e(10)) * -2),
    )
    return Printed("h''", tuple((lab, st * pref) for lab, st in groups))


def _sin(ctx, text):
    return ctx.sin(ctx.angle(text))


def _cos(ctx, text):
    return ctx.cos(ctx.angle(text))


def gamma_alpha_form(conv=DEFAULT_CONVENTION, ctx=DEFAULT_CONTEXT) -> Printed:
    e3 = ctx.eta(3) * 2
    return Printed("gamma_alpha", (
        ("2eta^3 sin(2alpha)", e3 * _sin(ctx, "2*alpha")),
        ("-2eta^3 sin(4vartheta+2alpha)", -e3 * _sin(ctx, "4*vartheta + 2*alpha")),
        ("-4i eta^3 sin(2vartheta+2alpha)", e3 * _sin(ctx, "2*vartheta + 2*alpha") * -2j),
    ))


def _gamma_theta_form(ctx, name) -> Printed:
    e3 = ctx.eta(3) * 2
    return Printed(name, (
        ("2eta^3 sin(2vartheta)", e3 * _sin(ctx, "2*vartheta")),
        ("-2eta^3 sin(6vartheta)", -e3 * _sin(ctx, "6*vartheta")),
        ("-4i eta^3 sin(4vartheta)", e3 * _sin(ctx, "4*vartheta") * -2j),
    ))


def gamma_theta_form(conv=DEFAULT_CONVENTION, ctx=DEFAULT_CONTEXT) -> Printed:
    return _gamma_theta_form(ctx, "gamma_vartheta")


def gamma_minus_theta_form(conv=DEFAULT_CONVENTION, ctx=DEFAULT_CONTEXT) -> Printed:
    # published character-for-character identical to gamma_vartheta
    return _gamma_theta_form(ctx, "gamma_-vartheta")


def C_h1_form(conv=DEFAULT_CONVENTION, ctx=DEFAULT_CONTEXT) -> Printed:
    e6 = ctx.eta(6) * Fraction(1, 4)
    return Printed("C(h')", (("3eta^6/4", e6 * 3), ("-eta^6/4 cos(4vartheta)", -e6 * _cos(ctx, "4*vartheta"))))


def C_h2_form(conv=DEFAULT_CONVENTION, ctx=DEFAULT_CONTEXT) -> Printed:
    e = ctx.eta(12) * Fraction(1, 16)
    return Printed("C(h'')", (
        ("5", e * 5),
        ("-3cos8", e * _cos(ctx, "8*vartheta") * -3),
        ("2cos12", e * _cos(ctx, "12*vartheta") * 2),
        ("2cos4", e * _cos(ctx, "4*vartheta") * 2),
        ("4i sin10", e * _sin(ctx, "10*vartheta") * 4j),
        ("8i sin2", e * _sin(ctx, "2*vartheta") * 8j),
        ("4i sin6", e * _sin(ctx, "6*vartheta") * 4j),
    ))


REGISTRY: dict[str, Callable[..., Printed]] = {
    "twisted-N": twisted_N,
    "h-from-circular": h_from_circular,
    "v-from-circular": v_from_circular,
    "twisted-N-on-h": twisted_N_on_h,
    "twisted-N-on-h-K-part": twisted_N_on_h_aniso,
    "twisted-N-on-h-J-part": twisted_N_on_h_iso,
    "H-on-L": H_on_L,
    "H-on-R": H_on_R,
    "VCR-on-L": VCR_on_L,
    "VCR-on-R": VCR_on_R,
    "VCR-phase-L": VCR_phase_L,
    "VCR-phase-R": VCR_phase_R,
    "HH-offset-on-L": HH_offset_on_L,
    "HHH-on-L": HHH_on_L,
    "QHQ-operator": qhq_operator,
    "QHQ-on-h": qhq_on_h,
    "Pi-state": pi_state,
    "gamma-alpha": gamma_alpha_form,
    "QHQ-plus": qhq_plus,
    "QHQ-minus": qhq_minus,
    "gamma-vartheta": gamma_theta_form,
    "gamma-minus-vartheta": gamma_minus_theta_form,
    "h-prime": h_prime,
    "h-double-prime": h_double_prime,
    "C-h-prime": C_h1_form,
    "C-h-double-prime": C_h2_form,
}


def printed(name: str, conv: Convention = DEFAULT_CONVENTION, ctx: Context = DEFAULT_CONTEXT) -> Printed:
    try:
        return REGISTRY[name](conv, ctx)
    except KeyError:
        raise KeyError(f"unknown reference form {name!r}") from None


# -- direct numeric evaluation of the published closed forms ----------------

def gamma_alpha(alpha, vartheta, eta):
    a, t = np.asarray(alpha, float), np.asarray(vartheta, float)
    return 2 * np.asarray(eta, float) ** 3 * (
        np.sin(2 * a) - np.sin(4 * t + 2 * a) - 2j * np.sin(2 * t + 2 * a))


def gamma_theta(vartheta, eta):
    t = np.asarray(vartheta, float)
    return 2 * np.asarray(eta, float) ** 3 * (np.sin(2 * t) - np.sin(6 * t) - 2j * np.sin(4 * t))


def gamma_minus_theta(vartheta, eta):
    """Published identically to :func:`gamma_theta`."""
    return gamma_theta(vartheta, eta)


def closed_form_C_h1(vartheta, eta):
    t = np.asarray(vartheta, float)
    return np.asarray(eta, float) ** 6 / 4 * (3 - np.cos(4 * t))


def closed_form_C_h2(vartheta, eta):
    t = np.asarray(vartheta, float)
    re = 5 - 3 * np.cos(8 * t) + 2 * np.cos(12 * t) + 2 * np.cos(4 * t)
    im = 4 * np.sin(10 * t) + 8 * np.sin(2 * t) + 4 * np.sin(6 * t)
    return np.asarray(eta, float) ** 12 / 16 * (re + 1j * im)
