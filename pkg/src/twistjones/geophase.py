"""Pancharatnam phase of retarder gadgets.

The phase is reported as the full complex projection <in|U|in>; argument and
magnitude are numeric conveniences at a chosen assignment.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

from . import reference
from .jones import DEFAULT_CONVENTION, Convention, GadgetSpec, Matrix2, compose
from .states import PolState, apply, inner
from .symphase import SymbolicScalar

__all__ = [
    "NormalizationError",
    "PhaseResult",
    "gamma_audit",
    "pancharatnam",
    "paper_gamma_alpha",
    "paper_gamma_minus_theta",
    "paper_gamma_theta",
]


class NormalizationError(ValueError):
    pass


@dataclass(frozen=True)
class PhaseResult:
    amplitude: SymbolicScalar
    arg_numeric: float | None = None
    magnitude_numeric: float | None = None

    def at(self, assign, eta=1.0) -> "PhaseResult":
        z = complex(self.amplitude.eval_numeric(assign, eta))
        return PhaseResult(self.amplitude, cmath.phase(z), abs(z))


def pancharatnam(s: PolState, op: Matrix2, assign=None, eta=None) -> PhaseResult:
    """<s|op|s> for a normalized input ket; numeric fields filled if ``assign`` is given."""
    if inner(s, s) != s.ctx.one():
        raise NormalizationError("input state must satisfy <s|s> = 1 exactly")
    res = PhaseResult(inner(s, apply(op, s)))
    if assign is not None or eta is not None:
        res = res.at(assign or {}, 1.0 if eta is None else eta)
    return res


# published closed forms, evaluated directly
paper_gamma_alpha = reference.gamma_alpha
paper_gamma_theta = reference.gamma_theta
paper_gamma_minus_theta = reference.gamma_minus_theta


def gamma_audit(gadget: GadgetSpec, input_state: str, printed_id: str, *,
                samples: int = 1000, seed: int = 20240601, tol: float = 1e-12):
    """Compare the engine phase of ``gadget`` on a named input ket with a
    published phase (``gamma-alpha``, ``gamma-vartheta``,
    ``gamma-minus-vartheta``, ``VCR-phase-L``, ``VCR-phase-R``)."""
    from .oracle import audit_objects
    from .states import named_ket

    allowed = {"gamma-alpha", "gamma-vartheta", "gamma-minus-vartheta", "VCR-phase-L", "VCR-phase-R"}
    if printed_id not in allowed:
        raise KeyError(f"{printed_id!r} is not a published phase; expected one of {sorted(allowed)}")

    def engine(conv: Convention):
        ket = named_ket(input_state, conv)
        return pancharatnam(ket, compose(gadget, conv)).amplitude

    def published(conv: Convention):
        return reference.printed(printed_id, conv)

    return audit_objects(f"{printed_id} vs {gadget} on |{input_state}>", engine, published,
                         samples=samples, seed=seed, tol=tol)
