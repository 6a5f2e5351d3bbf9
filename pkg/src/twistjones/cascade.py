"""Antenna array of successive QHQ elements.

Element j (1-based) is Q(t) H(j t) Q(t) with t the twist symbol; element j acts
on the output of element j-1, and element 1 acts on |h>.  Elements beyond the
second have no published counterpart and are engine-derived only.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import reference
from .entangle import (BellPair, bell_decompose, concurrence_report,
                       concurrence_sum_alpha2, i_concurrence)
from .geophase import PhaseResult, pancharatnam
from .jones import DEFAULT_CONVENTION, Convention, GadgetSpec, Plate, compose
from .states import PolState, apply, named_ket, oam_spectrum
from .symphase import DEFAULT_CONTEXT, Context

__all__ = [
    "ArrayElement",
    "CascadeTrace",
    "ElementTrace",
    "array_factor",
    "build_array",
    "flatness_report",
    "propagate",
]


@dataclass(frozen=True)
class ArrayElement:
    index: int
    gadget: GadgetSpec


def build_array(n: int, twist_symbol: str = "vartheta",
                ctx: Context = DEFAULT_CONTEXT) -> list[ArrayElement]:
    if n < 1:
        raise ValueError("an array needs at least one element")
    t = ctx.sym(twist_symbol)
    return [
        ArrayElement(j, GadgetSpec((Plate("Q", t), Plate("H", t * j), Plate("Q", t))))
        for j in range(1, n + 1)
    ]


@dataclass(frozen=True)
class ElementTrace:
    index: int
    output: PolState
    phase: PhaseResult  # <h| element |h>, the element's own phase shift
    pairs: tuple[BellPair, ...]
    sum_alpha2: object  # SymbolicScalar, strategy "sum_alpha2" before modulus
    oam_support: tuple[int, ...]


@dataclass(frozen=True)
class CascadeTrace:
    elements: tuple[ElementTrace, ...]
    twist_symbol: str = "vartheta"
    conv: Convention = field(default=DEFAULT_CONVENTION)

    @property
    def oam_widening(self) -> bool:
        """True when the OAM index range never shrinks along the array."""
        widths = [max(e.oam_support) - min(e.oam_support) for e in self.elements]
        return all(b >= a for a, b in zip(widths, widths[1:]))

    def reports(self, assign, eta=1.0):
        out = []
        for e in self.elements:
            tag = {1: "h1", 2: "h2"}.get(e.index)
            out.append(concurrence_report(e.output, assign, eta, tag, self.twist_symbol, self.conv))
        return out


def propagate(input_state: PolState, array: list[ArrayElement],
              conv: Convention = DEFAULT_CONVENTION, twist_symbol: str = "vartheta") -> CascadeTrace:
    h = named_ket("h", conv, input_state.ctx)
    state = input_state
    traces = []
    for el in array:
        op = compose(el.gadget, conv)
        state = apply(op, state)
        pairs = tuple(bell_decompose(state, twist_symbol, conv))
        support = tuple(sorted({t.k for t in oam_spectrum(state, twist_symbol, conv)})) or (0,)
        traces.append(ElementTrace(
            index=el.index,
            output=state,
            phase=pancharatnam(h, op),
            pairs=pairs,
            sum_alpha2=concurrence_sum_alpha2(list(pairs)),
            oam_support=support,
        ))
    return CascadeTrace(tuple(traces), twist_symbol, conv)


def _eta_of_theta(theta):
    return 1.0 / np.sin(theta)


def flatness_report(trace: CascadeTrace, theta_grid, vartheta_grid) -> list[dict]:
    """Minimum over the twist grid of each concurrence value, per element and theta.

    eta = 1/sin(theta).  Published closed forms are attached for elements 1
    and 2: element 1 uses the minimum over the grid, element 2 its real value
    at the reality points 2*vartheta = n*pi contained in the grid.
    """
    tg = np.asarray(theta_grid, float)
    vg = np.asarray(vartheta_grid, float)
    T, V = np.meshgrid(tg, vg, indexing="ij")
    eta = _eta_of_theta(T)
    assign = {trace.twist_symbol: V}
    n = 2 * vg / np.pi
    reality = np.abs(n - np.round(n)) < 1e-9
    rows = []
    for e in trace.elements:
        sa = np.abs(e.sum_alpha2.eval_numeric(assign, eta))
        norm2 = np.real(e.output.norm2().eval_numeric(assign, eta))
        bell = 2 * sa / norm2
        ic = i_concurrence(e.output, assign, eta, trace.twist_symbol, trace.conv)
        ic = np.broadcast_to(ic, T.shape)
        for i, th in enumerate(tg):
            row = {
                "element": e.index,
                "theta": float(th),
                "eta": float(_eta_of_theta(th)),
                "min_sum_alpha2": float(np.min(sa[i])),
                "min_sum_alpha2_bell": float(np.min(bell[i])),
                "min_iconc": float(np.min(ic[i])),
                "closed_form": None,
                "engine_only": e.index > 2,
            }
            if e.index == 1:
                row["closed_form"] = float(np.min(reference.closed_form_C_h1(vg, eta[i])))
            elif e.index == 2 and reality.any():
                row["closed_form"] = float(np.min(np.real(
                    reference.closed_form_C_h2(vg[reality], eta[i][reality]))))
            rows.append(row)
    by_theta: dict[float, list] = {}
    for r in rows:
        if r["closed_form"] is not None and r["element"] in (1, 2):
            by_theta.setdefault(r["theta"], []).append(r)
    for th, rs in by_theta.items():
        rs.sort(key=lambda r: r["element"])
        decreasing = len(rs) == 2 and rs[1]["closed_form"] < rs[0]["closed_form"]
        for r in rs:
            r["closed_form_decreasing"] = decreasing
    return rows


def array_factor(phases, spacing_over_wavelength: float, steer_grid) -> list[tuple[float, float]]:
    """|sum_j exp(i(2 pi (d/lambda) j sin(psi) + phi_j))| over ``steer_grid`` (radians)."""
    phases = np.asarray(phases, float)
    if phases.size == 0:
        raise ValueError("array factor needs at least one element phase")
    if spacing_over_wavelength <= 0:
        raise ValueError("spacing_over_wavelength must be positive")
    psi = np.asarray(steer_grid, float)
    j = np.arange(phases.size)
    arg = 2 * np.pi * spacing_over_wavelength * np.outer(np.sin(psi), j) + phases
    mag = np.abs(np.exp(1j * arg).sum(axis=1))
    return [(float(a), float(m)) for a, m in zip(psi, mag)]
