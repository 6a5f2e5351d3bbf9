"""2x2 operators over exact scalars: rotations, reflections, twisted plates.

Matrix products follow optical order: in ``P0 @ P1 @ P2`` light meets ``P2``
first.  Plates carry one power of ``eta`` each, so a p-plate gadget is
homogeneous of eta-grade p.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .symphase import DEFAULT_CONTEXT, Angle, Context, ContextMismatchError, SymbolicScalar

__all__ = [
    "ALL_CONVENTIONS",
    "Convention",
    "DEFAULT_CONVENTION",
    "DomainError",
    "GadgetSpec",
    "Matrix2",
    "Plate",
    "build_N",
    "compose",
    "derive_N_numeric",
    "identity",
    "pauli_x",
    "pauli_y",
    "pauli_z",
    "plate_H",
    "plate_Q",
    "polarization_M",
    "polarization_M_conjugate",
    "quarter_turn",
    "reflection_K",
    "retarder",
    "rotation_S",
    "twist",
]


class DomainError(ValueError):
    """Numeric input outside the region where a formula is regular."""


@dataclass(frozen=True)
class Matrix2:
    a: SymbolicScalar
    b: SymbolicScalar
    c: SymbolicScalar
    d: SymbolicScalar

    def __post_init__(self):
        ctx = self.a.ctx
        if not all(e.ctx == ctx for e in (self.b, self.c, self.d)):
            raise ContextMismatchError("matrix entries use different symbol contexts")

    @classmethod
    def of(cls, rows: Sequence[Sequence], ctx: Context = DEFAULT_CONTEXT) -> "Matrix2":
        def lift(x):
            return x if isinstance(x, SymbolicScalar) else ctx.const(x)
        (a, b), (c, d) = rows
        return cls(lift(a), lift(b), lift(c), lift(d))

    @property
    def ctx(self) -> Context:
        return self.a.ctx

    @property
    def entries(self) -> tuple[SymbolicScalar, ...]:
        return (self.a, self.b, self.c, self.d)

    def __matmul__(self, other):
        if not isinstance(other, Matrix2):
            return NotImplemented
        return Matrix2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __add__(self, other):
        if not isinstance(other, Matrix2):
            return NotImplemented
        return Matrix2(*(x + y for x, y in zip(self.entries, other.entries)))

    def __sub__(self, other):
        if not isinstance(other, Matrix2):
            return NotImplemented
        return Matrix2(*(x - y for x, y in zip(self.entries, other.entries)))

    def __neg__(self):
        return Matrix2(*(-x for x in self.entries))

    def __mul__(self, k):
        if isinstance(k, Matrix2):
            return NotImplemented
        return Matrix2(*(x * k for x in self.entries))

    __rmul__ = __mul__

    def __truediv__(self, k):
        return Matrix2(*(x / k for x in self.entries))

    def dagger(self) -> "Matrix2":
        return Matrix2(self.a.conj(), self.c.conj(), self.b.conj(), self.d.conj())

    def transpose(self) -> "Matrix2":
        return Matrix2(self.a, self.c, self.b, self.d)

    def det(self) -> SymbolicScalar:
        return self.a * self.d - self.b * self.c

    def trace(self) -> SymbolicScalar:
        return self.a + self.d

    def eta_grades(self) -> set[int]:
        out = set()
        for e in self.entries:
            out |= e.eta_grades()
        return out

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)

    def eval_numeric(self, assign=None, eta=1.0) -> np.ndarray:
        vals = [e.eval_numeric(assign, eta) for e in self.entries]
        shape = np.broadcast_shapes(*(np.shape(v) for v in vals))
        vals = [np.broadcast_to(v, shape) for v in vals]
        return np.array([[vals[0], vals[1]], [vals[2], vals[3]]], dtype=complex)

    def to_records(self) -> list[list[list[dict]]]:
        return [[self.a.to_records(), self.b.to_records()],
                [self.c.to_records(), self.d.to_records()]]

    @classmethod
    def from_records(cls, ctx: Context, grid) -> "Matrix2":
        (a, b), (c, d) = grid
        return cls(*(SymbolicScalar.from_records(ctx, r) for r in (a, b, c, d)))

    def pretty(self) -> str:
        cells = [e.pretty() for e in self.entries]
        return (f"[[{cells[0]},  {cells[1]}],\n"
                f" [{cells[2]},  {cells[3]}]]")


# ---------------------------------------------------------------------------
# conventions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Convention:
    """Sign and handedness choices swept by the auditor.

    twist_sign
        +1 conjugates a plate as S(a) op S(-a); -1 uses S(-a) op S(a).
    j_prefactor
        ``"1"`` or ``"-i"``, multiplying the isotropic quarter-turn part of a
        twisted retarder.
    handedness
        ``"+"`` puts |L> = (1, i)/sqrt2, ``"-"`` puts |L> = (1, -i)/sqrt2.
    """

    twist_sign: int = 1
    j_prefactor: str = "1"
    handedness: str = "+"

    def __post_init__(self):
        if self.twist_sign not in (1, -1):
            raise ValueError("twist_sign must be +1 or -1")
        if self.j_prefactor not in ("1", "-i"):
            raise ValueError("j_prefactor must be '1' or '-i'")
        if self.handedness not in ("+", "-"):
            raise ValueError("handedness must be '+' or '-'")

    @property
    def j_value(self) -> complex:
        return 1 if self.j_prefactor == "1" else -1j

    def __str__(self) -> str:
        return f"twist={self.twist_sign:+d},j={self.j_prefactor},hand={self.handedness}"

    @classmethod
    def parse(cls, text: str) -> "Convention":
        """Parse ``default`` or ``twist=-1,j=-i,hand=-`` (any subset of keys)."""
        text = text.strip()
        if text in ("", "default"):
            return cls()
        kw = {}
        for part in text.split(","):
            key, _, val = part.partition("=")
            key, val = key.strip(), val.strip()
            if key in ("twist", "twist_sign"):
                kw["twist_sign"] = int(val)
            elif key in ("j", "j_prefactor"):
                kw["j_prefactor"] = val
            elif key in ("hand", "handedness"):
                kw["handedness"] = val
            else:
                raise ValueError(f"unknown convention key {key!r}")
        return cls(**kw)


DEFAULT_CONVENTION = Convention()
ALL_CONVENTIONS = tuple(
    Convention(t, j, h) for t, j, h in itertools.product((1, -1), ("1", "-i"), ("+", "-"))
)


# ---------------------------------------------------------------------------
# elementary matrices
# ---------------------------------------------------------------------------


def identity(ctx: Context = DEFAULT_CONTEXT) -> Matrix2:
    return Matrix2(ctx.one(), ctx.zero(), ctx.zero(), ctx.one())


def pauli_x(ctx: Context = DEFAULT_CONTEXT) -> Matrix2:
    return Matrix2.of([[0, 1], [1, 0]], ctx)


def pauli_y(ctx: Context = DEFAULT_CONTEXT) -> Matrix2:
    return Matrix2.of([[0, -1j], [1j, 0]], ctx)


def pauli_z(ctx: Context = DEFAULT_CONTEXT) -> Matrix2:
    return Matrix2.of([[1, 0], [0, -1]], ctx)


def quarter_turn(ctx: Context = DEFAULT_CONTEXT) -> Matrix2:
    """J = S(pi/2) = [[0, -1], [1, 0]]."""
    return Matrix2.of([[0, -1], [1, 0]], ctx)


def rotation_S(angle, ctx: Context = DEFAULT_CONTEXT) -> Matrix2:
    """[[cos a, -sin a], [sin a, cos a]]."""
    a = ctx.angle(angle)
    c, s = ctx.cos(a), ctx.sin(a)
    return Matrix2(c, -s, s, c)


def reflection_K(x, ctx: Context = DEFAULT_CONTEXT) -> Matrix2:
    """[[-sin 2x, cos 2x], [cos 2x, sin 2x]]; K(0) is sigma_x."""
    x2 = ctx.angle(x) * 2
    c, s = ctx.cos(x2), ctx.sin(x2)
    return Matrix2(-s, c, c, s)


def polarization_M(theta="theta", phi="phi", ctx: Context = DEFAULT_CONTEXT) -> Matrix2:
    """Traceless projector 1/2 [[cos t, sin t e^{i p}], [sin t e^{-i p}, -cos t]]."""
    t, p = ctx.angle(theta), ctx.angle(phi)
    half = Fraction(1, 2)
    c, s = ctx.cos(t), ctx.sin(t)
    return Matrix2(c * half, s * ctx.expi(p) * half, s * ctx.expi(-p) * half, -c * half)


def polarization_M_conjugate(theta="theta", phi="phi", ctx: Context = DEFAULT_CONTEXT) -> Matrix2:
    """Lower-hemisphere partner: diagonal sign flipped, off-diagonal kept."""
    m = polarization_M(theta, phi, ctx)
    return Matrix2(-m.a, m.b, m.c, -m.d)


def build_N(phi="phi", ctx: Context = DEFAULT_CONTEXT) -> Matrix2:
    """Untwisted differential matrix eta [[0, -e^{i phi}], [e^{-i phi}, 0]]."""
    p = ctx.angle(phi)
    eta = ctx.eta()
    return Matrix2(ctx.zero(), -eta * ctx.expi(p), eta * ctx.expi(-p), ctx.zero())


def twist(op: Matrix2, angle, conv: Convention = DEFAULT_CONVENTION) -> Matrix2:
    """Conjugate ``op`` by the rotation S(+-angle) according to ``conv.twist_sign``."""
    ctx = op.ctx
    a = ctx.angle(angle) * conv.twist_sign
    if a.is_zero():
        return op
    return rotation_S(a, ctx) @ op @ rotation_S(-a, ctx)


def retarder(phi, orientation, conv: Convention = DEFAULT_CONVENTION,
             ctx: Context = DEFAULT_CONTEXT) -> Matrix2:
    """Twisted differential matrix eta(j cos phi J - i sin phi K(orientation)).

    With ``j_prefactor == "1"`` this is exactly ``twist(build_N(phi), orientation)``.
    """
    p = ctx.angle(phi)
    eta = ctx.eta()
    iso = quarter_turn(ctx) * (eta * ctx.cos(p) * conv.j_value)
    aniso = reflection_K(0, ctx) * (eta * ctx.sin(p) * -1j)
    return twist(iso + aniso, orientation, conv)


def plate_H(orientation=0, conv: Convention = DEFAULT_CONVENTION,
            ctx: Context = DEFAULT_CONTEXT) -> Matrix2:
    """Half-wave instance (phi = pi/2): -i eta K(orientation)."""
    return retarder("pi/2", orientation, conv, ctx)


def plate_Q(orientation=0, conv: Convention = DEFAULT_CONVENTION,
            ctx: Context = DEFAULT_CONTEXT) -> Matrix2:
    """Quarter instance (phi = pi/4): (eta/sqrt2)(j J - i K(orientation)).

    Squares to -eta^2 I rather than to a half-wave plate.
    """
    return retarder("pi/4", orientation, conv, ctx)


# ---------------------------------------------------------------------------
# gadgets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Plate:
    kind: str  # "H", "Q" or "N"
    orientation: Angle
    phi: Angle | None = None

    def matrix(self, conv: Convention = DEFAULT_CONVENTION) -> Matrix2:
        ctx = self.orientation.ctx
        if self.kind == "H":
            return plate_H(self.orientation, conv, ctx)
        if self.kind == "Q":
            return plate_Q(self.orientation, conv, ctx)
        if self.kind == "N":
            if self.phi is None:
                raise ValueError("N plate needs a retardance angle phi")
            return retarder(self.phi, self.orientation, conv, ctx)
        raise ValueError(f"unknown plate kind {self.kind!r}")

    def __str__(self) -> str:
        if self.kind == "N":
            return f"N[{self.phi}]({self.orientation})"
        return f"{self.kind}({self.orientation})"


@dataclass(frozen=True)
class GadgetSpec:
    plates: tuple[Plate, ...]

    def __post_init__(self):
        if not self.plates:
            raise ValueError("a gadget needs at least one plate")

    @classmethod
    def parse(cls, text: str, ctx: Context = DEFAULT_CONTEXT) -> "GadgetSpec":
        """Parse ``"Q(vartheta) H(alpha) Q(vartheta)"`` (written = matrix order)."""
        import re

        plates = []
        pattern = re.compile(r"\s*(H|Q|N\[([^\]]+)\])\s*\(([^()]*)\)\s*,?")
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = pattern.match(text, pos)
            if not m:
                raise ValueError(f"cannot parse gadget near {text[pos:]!r}")
            kind = m.group(1)[0]
            phi = ctx.angle(m.group(2)) if m.group(2) else None
            orient = ctx.angle(m.group(3).strip() or "0")
            plates.append(Plate(kind, orient, phi))
            pos = m.end()
        return cls(tuple(plates))

    @classmethod
    def of(cls, items: Iterable[tuple], ctx: Context = DEFAULT_CONTEXT) -> "GadgetSpec":
        plates = []
        for item in items:
            kind, orient, *rest = item
            phi = ctx.angle(rest[0]) if rest else None
            plates.append(Plate(kind, ctx.angle(orient), phi))
        return cls(tuple(plates))

    def __str__(self) -> str:
        return " ".join(str(p) for p in self.plates)

    def __len__(self) -> int:
        return len(self.plates)


def compose(spec: GadgetSpec, conv: Convention = DEFAULT_CONVENTION) -> Matrix2:
    mats = [p.matrix(conv) for p in spec.plates]
    out = mats[0]
    for m in mats[1:]:
        out = out @ m
    return out


# ---------------------------------------------------------------------------
# numeric derivation of the differential matrix
# ---------------------------------------------------------------------------


def _M_numeric(theta: float, phi: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    e = complex(math.cos(phi), math.sin(phi))
    return 0.5 * np.array([[c, s * e], [s * e.conjugate(), -c]], dtype=complex)


def derive_N_numeric(theta0: float, phi0: float, h: float = 1e-6):
    """Central-difference estimate of N = dM/dz M^-1 with z = cos(theta).

    Returns ``(N, eta_estimate, sign)`` where ``N`` is the numeric 2x2 matrix,
    ``eta_estimate`` the magnitude of the birefringence read from the
    off-diagonal entries and ``sign`` (+1/-1) its sign relative to the
    ``eta [[0, -e^{i phi}], [e^{-i phi}, 0]]`` pattern.
    """
    if not 0.0 < theta0 < math.pi or math.sin(theta0) < 1e-3:
        raise DomainError(f"theta0={theta0!r} is too close to 0 or pi (1/sin singular)")
    z0 = math.cos(theta0)
    if not -1.0 < z0 - h and z0 + h < 1.0:
        raise DomainError("finite-difference stencil leaves the domain |z| < 1")
    dM = (_M_numeric(math.acos(z0 + h), phi0) - _M_numeric(math.acos(z0 - h), phi0)) / (2 * h)
    N = dM @ np.linalg.inv(_M_numeric(theta0, phi0))
    e = complex(math.cos(phi0), math.sin(phi0))
    # N[1,0] = eta e^{-i phi}, N[0,1] = -eta e^{i phi}
    est = 0.5 * (N[1, 0] * e - N[0, 1] / e)
    eta_signed = float(est.real)
    return N, abs(eta_signed), (1 if eta_signed >= 0 else -1)
