"""Bell-pair decomposition of SAM x OAM kets and competing concurrence values.

Three strategies are reported side by side and never reconciled:

``sum_alpha2``
    |sum_i alpha_i^2| with pair coefficients alpha = (x +- y)/2 taken straight
    from the unnormalized amplitudes (global gadget prefactor included).
``sum_alpha2_bell``
    the same sum using normalized Bell kets (x +- y)/sqrt2 on the
    unit-normalized state.
``iconc``
    sqrt(2 (1 - Tr rho_spin^2)) of the normalized state, the standard pure-state
    measure for a qubit coupled to a many-level system.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import reference
from .jones import DEFAULT_CONVENTION, Convention
from .states import PolState, circular_amplitudes, from_circular
from .symphase import DEFAULT_CONTEXT, SymbolicScalar

__all__ = [
    "BellPair",
    "ConcurrenceReport",
    "STRATEGIES",
    "bell_decompose",
    "closed_form_C",
    "concurrence_report",
    "concurrence_sum_alpha2",
    "i_concurrence",
    "imag_vanish_check",
    "reconstruct",
    "spin_oam_matrix",
]

STRATEGIES = ("sum_alpha2", "sum_alpha2_bell", "iconc")


@dataclass(frozen=True)
class BellPair:
    """Coefficients on the pair (|L, a>, |R, -a>): x = alpha_plus + alpha_minus is
    the (L, a) amplitude and y = alpha_plus - alpha_minus the (R, -a) one."""

    a: int
    alpha_plus: SymbolicScalar
    alpha_minus: SymbolicScalar

    @property
    def x(self) -> SymbolicScalar:
        return self.alpha_plus + self.alpha_minus

    @property
    def y(self) -> SymbolicScalar:
        return self.alpha_plus - self.alpha_minus


def bell_decompose(s: PolState, twist_symbol: str = "vartheta",
                   conv: Convention = DEFAULT_CONVENTION) -> list[BellPair]:
    cl, cr = circular_amplitudes(s, conv)
    left = cl.split_by(twist_symbol)
    right = cr.split_by(twist_symbol)
    labels = sorted(set(left) | {-k for k in right})
    zero = s.ctx.zero()
    half = Fraction(1, 2)
    pairs = []
    for a in labels:
        x = left.get(a, zero)
        y = right.get(-a, zero)
        pairs.append(BellPair(a, (x + y) * half, (x - y) * half))
    return pairs


def reconstruct(pairs: list[BellPair], ctx, conv: Convention = DEFAULT_CONVENTION) -> PolState:
    cl, cr = ctx.zero(), ctx.zero()
    for p in pairs:
        cl = cl + p.x
        cr = cr + p.y
    return from_circular(cl, cr, conv)


def concurrence_sum_alpha2(pairs: list[BellPair], normalization: str = "printed",
                           ctx=DEFAULT_CONTEXT) -> SymbolicScalar:
    """Pre-modulus sum of squared pair coefficients.

    ``"printed"`` uses alpha = (x +- y)/2; ``"bell"`` uses (x +- y)/sqrt2, which
    is exactly twice the printed sum.  Take ``abs(eval_numeric(...))`` for the
    modulus.  An empty pair list (the zero state) gives zero.
    """
    total = pairs[0].alpha_plus.ctx.zero() if pairs else ctx.zero()
    for p in pairs:
        total = total + p.alpha_plus * p.alpha_plus + p.alpha_minus * p.alpha_minus
    if normalization == "printed":
        return total
    if normalization == "bell":
        return total * 2
    raise ValueError(f"unknown normalization {normalization!r}")


def spin_oam_matrix(s: PolState, assign, eta=1.0, twist_symbol: str = "vartheta",
                    conv: Convention = DEFAULT_CONVENTION):
    """Numeric amplitudes psi[spin, k] (rows L, R; columns sorted k) at ``assign``.

    Returns ``(ks, psi)``; with array-valued assignments ``psi`` has the grid
    shape appended.
    """
    cl, cr = circular_amplitudes(s, conv)
    left, right = cl.split_by(twist_symbol), cr.split_by(twist_symbol)
    ks = sorted(set(left) | set(right))
    rows = []
    for part in (left, right):
        rows.append([part[k].eval_numeric(assign, eta) if k in part else 0j for k in ks])
    shape = np.broadcast_shapes(*(np.shape(v) for r in rows for v in r))
    psi = np.array([[np.broadcast_to(v, shape) for v in r] for r in rows], dtype=complex)
    return ks, psi


def i_concurrence(s: PolState, assign, eta=1.0, twist_symbol: str = "vartheta",
                  conv: Convention = DEFAULT_CONVENTION):
    """sqrt(2(1 - Tr rho_spin^2)) of the normalized state; vectorizes over grids."""
    _, psi = spin_oam_matrix(s, assign, eta, twist_symbol, conv)
    norm2 = np.sum(np.abs(psi) ** 2, axis=(0, 1))
    if np.any(norm2 <= 0):
        raise ZeroDivisionError("zero-norm state has no concurrence")
    rho = np.einsum("ik...,jk...->ij...", psi, psi.conj()) / norm2
    purity = np.einsum("ij...,ji...->...", rho, rho).real
    c = np.sqrt(np.clip(2.0 * (1.0 - purity), 0.0, None))
    return float(c) if np.ndim(c) == 0 else c


def closed_form_C(state_tag: str, vartheta, eta):
    """Published closed forms for the first ("h1") and second ("h2") element."""
    if state_tag in ("h1", "h'", "h_prime"):
        return reference.closed_form_C_h1(vartheta, eta)
    if state_tag in ("h2", "h''", "h_double_prime"):
        return reference.closed_form_C_h2(vartheta, eta)
    raise ValueError(f"unknown state tag {state_tag!r}")


def imag_vanish_check(vartheta_grid, eta=1.0, tol: float = 1e-12) -> list[dict]:
    """Imaginary part of the published second-element concurrence on a grid.

    ``at_reality_point`` marks 2*vartheta = n*pi.
    """
    rows = []
    for t in np.asarray(vartheta_grid, float):
        im = float(np.imag(reference.closed_form_C_h2(t, eta)))
        n = 2 * t / np.pi
        rows.append({
            "vartheta": float(t),
            "imag": im,
            "at_reality_point": bool(abs(n - round(n)) < 1e-9),
            "vanishes": abs(im) <= tol,
        })
    return rows


@dataclass(frozen=True)
class ConcurrenceReport:
    c_sum_alpha2: complex  # pre-modulus
    c_sum_alpha2_abs: float
    c_sum_alpha2_bell: float  # normalized Bell kets on the unit-normalized state
    c_iconc: float
    c_paper_closed_form: complex | None
    imag_residual: float | None

    def as_dict(self) -> dict:
        cf = self.c_paper_closed_form
        return {
            "sum_alpha2_re": self.c_sum_alpha2.real,
            "sum_alpha2_im": self.c_sum_alpha2.imag,
            "sum_alpha2_abs": self.c_sum_alpha2_abs,
            "sum_alpha2_bell": self.c_sum_alpha2_bell,
            "iconc": self.c_iconc,
            "closed_form_re": None if cf is None else cf.real,
            "closed_form_im": None if cf is None else cf.imag,
            "imag_residual": self.imag_residual,
        }


def concurrence_report(s: PolState, assign, eta=1.0, closed_form_tag: str | None = None,
                       twist_symbol: str = "vartheta",
                       conv: Convention = DEFAULT_CONVENTION) -> ConcurrenceReport:
    pairs = bell_decompose(s, twist_symbol, conv)
    sa = complex(concurrence_sum_alpha2(pairs, ctx=s.ctx).eval_numeric(assign, eta))
    norm2 = float(np.real(s.norm2().eval_numeric(assign, eta)))
    if norm2 <= 0:
        raise ZeroDivisionError("zero-norm state has no concurrence")
    bell = 2 * abs(sa) / norm2
    ic = i_concurrence(s, assign, eta, twist_symbol, conv)
    cf = None
    imag = None
    if closed_form_tag is not None:
        cf = complex(closed_form_C(closed_form_tag, assign[twist_symbol], eta))
        imag = abs(cf.imag)
    return ConcurrenceReport(sa, abs(sa), bell, ic, cf, imag)
