"""Polarization kets with exact amplitudes and OAM bookkeeping.

OAM is tracked only as the integer exponent ``k`` of ``exp(i k * twist)`` on a
designated twist symbol; no spatial mode profile is modelled.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .jones import DEFAULT_CONVENTION, Convention, Matrix2
from .symphase import DEFAULT_CONTEXT, Context, ContextMismatchError, SymbolicScalar

__all__ = [
    "OamTerm",
    "PolState",
    "UnsupportedStateError",
    "apply",
    "circular_amplitudes",
    "from_circular",
    "inner",
    "named_ket",
    "oam_spectrum",
    "qplate_crosscheck",
    "reconstruct_from_spectrum",
]


class UnsupportedStateError(ValueError):
    pass


@dataclass(frozen=True)
class PolState:
    amp0: SymbolicScalar
    amp1: SymbolicScalar

    def __post_init__(self):
        if self.amp0.ctx != self.amp1.ctx:
            raise ContextMismatchError("ket amplitudes use different symbol contexts")

    @property
    def ctx(self) -> Context:
        return self.amp0.ctx

    def __add__(self, other):
        if not isinstance(other, PolState):
            return NotImplemented
        return PolState(self.amp0 + other.amp0, self.amp1 + other.amp1)

    def __sub__(self, other):
        if not isinstance(other, PolState):
            return NotImplemented
        return PolState(self.amp0 - other.amp0, self.amp1 - other.amp1)

    def __neg__(self):
        return PolState(-self.amp0, -self.amp1)

    def __mul__(self, k):
        if isinstance(k, (PolState, Matrix2)):
            return NotImplemented
        return PolState(self.amp0 * k, self.amp1 * k)

    __rmul__ = __mul__

    def __truediv__(self, k):
        return PolState(self.amp0 / k, self.amp1 / k)

    def is_zero(self) -> bool:
        return self.amp0.is_zero() and self.amp1.is_zero()

    def eta_grades(self) -> set[int]:
        return self.amp0.eta_grades() | self.amp1.eta_grades()

    def eval_numeric(self, assign=None, eta=1.0):
        import numpy as np

        a0 = self.amp0.eval_numeric(assign, eta)
        a1 = self.amp1.eval_numeric(assign, eta)
        shape = np.broadcast_shapes(np.shape(a0), np.shape(a1))
        return np.array([np.broadcast_to(a0, shape), np.broadcast_to(a1, shape)], dtype=complex)

    def norm2(self) -> SymbolicScalar:
        return inner(self, self)

    def dump(self, conv: Convention = DEFAULT_CONVENTION) -> dict:
        cl, cr = circular_amplitudes(self, conv)
        return {
            "computational": {"0": self.amp0.to_records(), "1": self.amp1.to_records()},
            "circular": {"L": cl.to_records(), "R": cr.to_records()},
        }

    def pretty(self, conv: Convention = DEFAULT_CONVENTION) -> str:
        cl, cr = circular_amplitudes(self, conv)
        return f"({cl.pretty()})|L> + ({cr.pretty()})|R>"


def _sqrt2_inv(ctx: Context) -> SymbolicScalar:
    return ctx.sqrt2(-1)


def named_ket(name: str, conv: Convention = DEFAULT_CONVENTION,
              ctx: Context = DEFAULT_CONTEXT) -> PolState:
    """|h>=(1,0), |v>=(0,1), |L>,|R> = (1, +-i)/sqrt2 with sign set by handedness."""
    one, zero = ctx.one(), ctx.zero()
    s = _sqrt2_inv(ctx)
    hand = 1 if conv.handedness == "+" else -1
    if name == "h":
        return PolState(one, zero)
    if name == "v":
        return PolState(zero, one)
    if name == "L":
        return PolState(s, s * complex(0, hand))
    if name == "R":
        return PolState(s, s * complex(0, -hand))
    raise UnsupportedStateError(f"unknown ket name {name!r}; expected h, v, L or R")


def apply(op: Matrix2, s: PolState) -> PolState:
    if op.ctx != s.ctx:
        raise ContextMismatchError("operator and state use different symbol contexts")
    return PolState(op.a * s.amp0 + op.b * s.amp1, op.c * s.amp0 + op.d * s.amp1)


def inner(bra: PolState, ket: PolState) -> SymbolicScalar:
    """<bra|ket>, conjugating the bra amplitudes (eta is real)."""
    return bra.amp0.conj() * ket.amp0 + bra.amp1.conj() * ket.amp1


def circular_amplitudes(s: PolState, conv: Convention = DEFAULT_CONVENTION):
    """(<L|s>, <R|s>) for the convention's handedness."""
    L = named_ket("L", conv, s.ctx)
    R = named_ket("R", conv, s.ctx)
    return inner(L, s), inner(R, s)


def from_circular(cl: SymbolicScalar, cr: SymbolicScalar,
                  conv: Convention = DEFAULT_CONVENTION) -> PolState:
    ctx = cl.ctx
    return named_ket("L", conv, ctx) * cl + named_ket("R", conv, ctx) * cr


class OamTerm(NamedTuple):
    spin: str  # "L" or "R"
    k: int
    residual: SymbolicScalar  # free of the twist symbol


def oam_spectrum(s: PolState, twist_symbol: str = "vartheta",
                 conv: Convention = DEFAULT_CONVENTION) -> list[OamTerm]:
    """Regroup the circular amplitudes by exponent of ``twist_symbol``."""
    out = []
    for spin, amp in zip(("L", "R"), circular_amplitudes(s, conv)):
        for k, part in amp.split_by(twist_symbol).items():
            out.append(OamTerm(spin, k, part.without_symbol(twist_symbol, k)))
    return out


def reconstruct_from_spectrum(terms: list[OamTerm], twist_symbol: str = "vartheta",
                              conv: Convention = DEFAULT_CONVENTION,
                              ctx: Context = DEFAULT_CONTEXT) -> PolState:
    amps = {"L": ctx.zero(), "R": ctx.zero()}
    tw = ctx.sym(twist_symbol)
    for t in terms:
        amps[t.spin] = amps[t.spin] + t.residual * ctx.expi(tw * t.k)
    return from_circular(amps["L"], amps["R"], conv)


def spectrum_signature(s: PolState, twist_symbol: str = "vartheta",
                       conv: Convention = DEFAULT_CONVENTION) -> set[tuple[str, int]]:
    """Set of (spin, k) labels carrying nonzero amplitude."""
    return {(t.spin, t.k) for t in oam_spectrum(s, twist_symbol, conv)}


def qplate_crosscheck(s: PolState, q, theta0="0", twist_symbol: str = "vartheta",
                      conv: Convention = DEFAULT_CONVENTION) -> PolState:
    """Label-level q-plate action for comparison with twisted plates.

    |L> -> |R> with OAM +2q, |R> -> |L> with OAM -2q, and |h> splits into
    |L, -2q> + |R, +2q>.  The OAM index is written as the exponent of the twist
    symbol, so ``q`` must be an integer or half-integer.  ``theta0`` adds the
    constant offset phase exp(+-2i theta0) and must be a pi-rational angle.
    """
    ctx = s.ctx
    two_q = Fraction(q) * 2
    if two_q.denominator != 1:
        raise ValueError("q must be an integer or half-integer")
    k = int(two_q)
    tw = ctx.sym(twist_symbol) * k + ctx.angle(theta0) * 2
    L = named_ket("L", conv, ctx)
    R = named_ket("R", conv, ctx)
    if s == L:
        return R * ctx.expi(tw)
    if s == R:
        return L * ctx.expi(-tw)
    if s == named_ket("h", conv, ctx):
        return L * ctx.expi(-tw) + R * ctx.expi(tw)
    raise UnsupportedStateError("q-plate cross-check accepts only |L>, |R> or |h>")
