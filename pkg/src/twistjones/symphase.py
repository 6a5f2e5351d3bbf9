"""Exact scalar ring for polarization amplitudes.

Every amplitude handled by the package is a finite sum

    sum_t  c_t * eta**n_t * exp(i * <k_t, angles>)

where ``c_t`` lies in Q(i, sqrt2), ``eta`` is a formal positive birefringence
symbol and ``k_t`` is an integer vector over the declared angle symbols.
Constant phases that are multiples of pi/4 are folded into the coefficient,
so two scalars are equal exactly when their canonical term tuples are equal.
"""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple

import numpy as np

__all__ = [
    "AngleSymbol",
    "Angle",
    "Coefficient",
    "Context",
    "ContextMismatchError",
    "DEFAULT_CONTEXT",
    "MissingAssignmentError",
    "PhaseExponent",
    "SymbolicScalar",
    "Term",
    "UnsupportedPhaseError",
    "add",
    "conj",
    "eval_numeric",
    "mul",
    "parse_angle",
    "parse_radians",
]

_F0 = Fraction(0)
_F1 = Fraction(1)

SYMBOL_ALIASES = {
    "ϑ": "vartheta",
    "θ": "theta",
    "α": "alpha",
    "ω": "omega",
    "β": "beta",
    "φ": "phi",
    "π": "pi",
}


class ContextMismatchError(ValueError):
    """Raised when scalars from different symbol contexts are combined."""


class UnsupportedPhaseError(ValueError):
    """Raised for constant phases that are not multiples of pi/4 or for
    non-integer angle coefficients inside an exponential."""


class MissingAssignmentError(KeyError):
    """Raised by numeric evaluation when a symbol has no value."""

    def __init__(self, symbol: str):
        super().__init__(symbol)
        self.symbol = symbol

    def __str__(self) -> str:
        return f"no numeric value assigned to angle symbol {self.symbol!r}"


# ---------------------------------------------------------------------------
# coefficients: (re + i*im) + (re2 + i*im2)*sqrt2
# ---------------------------------------------------------------------------


class Coefficient(NamedTuple):
    """Element of Q(i, sqrt2) stored as ``(re + i im) + (re2 + i im2) * sqrt2``.

    ``monomials()`` yields the ``(re, im, sqrt2_pow)`` view used for
    serialization; the value is the sum of those monomials.
    """

    re: Fraction
    im: Fraction
    re2: Fraction = _F0
    im2: Fraction = _F0

    @classmethod
    def from_monomial(cls, re, im, sqrt2_pow: int = 0) -> "Coefficient":
        re, im = Fraction(re), Fraction(im)
        scale = Fraction(2) ** (sqrt2_pow // 2)
        if sqrt2_pow % 2 == 0:
            return cls(re * scale, im * scale, _F0, _F0)
        return cls(_F0, _F0, re * scale, im * scale)

    def is_zero(self) -> bool:
        return not (self.re or self.im or self.re2 or self.im2)

    def monomials(self) -> list[tuple[Fraction, Fraction, int]]:
        out = []
        if self.re or self.im:
            out.append((self.re, self.im, 0))
        if self.re2 or self.im2:
            out.append((self.re2, self.im2, 1))
        return out

    def __complex__(self) -> complex:
        r2 = math.sqrt(2.0)
        return complex(float(self.re) + float(self.re2) * r2,
                       float(self.im) + float(self.im2) * r2)


_C_ZERO = Coefficient(_F0, _F0, _F0, _F0)
_C_ONE = Coefficient(_F1, _F0, _F0, _F0)


def _c_add(a: Coefficient, b: Coefficient) -> Coefficient:
    return Coefficient(a.re + b.re, a.im + b.im, a.re2 + b.re2, a.im2 + b.im2)


def _c_neg(a: Coefficient) -> Coefficient:
    return Coefficient(-a.re, -a.im, -a.re2, -a.im2)


def _g_mul(ar, ai, br, bi):
    # Gaussian product with zero parts skipped; Fraction arithmetic dominates runtime
    if not ai:
        if not bi:
            return ar * br, _F0
        return ar * br, ar * bi
    if not bi:
        return ar * br, ai * br
    if not ar:
        if not br:
            return -ai * bi, _F0
        return -ai * bi, ai * br
    if not br:
        return -ai * bi, ar * bi
    return ar * br - ai * bi, ar * bi + ai * br


def _c_mul(a: Coefficient, b: Coefficient) -> Coefficient:
    # (p + q r2)(s + t r2) = (ps + 2qt) + (pt + qs) r2, with p,q,s,t Gaussian
    pr, pi_, qr, qi = a
    sr, si, tr, ti = b
    a_rat, a_irr = bool(pr or pi_), bool(qr or qi)
    b_rat, b_irr = bool(sr or si), bool(tr or ti)
    re = im = re2 = im2 = _F0
    if a_rat and b_rat:
        re, im = _g_mul(pr, pi_, sr, si)
    if a_irr and b_irr:
        x, y = _g_mul(qr, qi, tr, ti)
        re, im = re + 2 * x, im + 2 * y
    if a_rat and b_irr:
        re2, im2 = _g_mul(pr, pi_, tr, ti)
    if a_irr and b_rat:
        x, y = _g_mul(qr, qi, sr, si)
        re2, im2 = re2 + x, im2 + y
    return Coefficient(re, im, re2, im2)


def _c_conj(a: Coefficient) -> Coefficient:
    return Coefficient(a.re, -a.im, a.re2, -a.im2)


# exp(i*pi*k/4) for k = 0..7, exactly
_HALF = Fraction(1, 2)
_EIGHTH_ROOTS = (
    Coefficient(_F1, _F0),
    Coefficient(_F0, _F0, _HALF, _HALF),
    Coefficient(_F0, _F1),
    Coefficient(_F0, _F0, -_HALF, _HALF),
    Coefficient(-_F1, _F0),
    Coefficient(_F0, _F0, -_HALF, -_HALF),
    Coefficient(_F0, -_F1),
    Coefficient(_F0, _F0, _HALF, -_HALF),
)


def _coerce_coefficient(value) -> Coefficient:
    if isinstance(value, Coefficient):
        return value
    if isinstance(value, (int, Fraction)):
        return Coefficient(Fraction(value), _F0)
    if isinstance(value, float):
        return Coefficient(Fraction(value), _F0)
    if isinstance(value, complex):
        return Coefficient(Fraction(value.real), Fraction(value.imag))
    raise TypeError(f"cannot use {type(value).__name__} as an exact coefficient")


# ---------------------------------------------------------------------------
# symbols, contexts, angles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AngleSymbol:
    name: str


@dataclass(frozen=True)
class Context:
    """Ordered set of declared angle symbols shared by a family of scalars."""

    names: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate symbol names in {self.names}")
        for n in self.names:
            if not n.isidentifier() or n == "pi":
                raise ValueError(f"invalid symbol name {n!r}")

    def index(self, name: str) -> int:
        name = SYMBOL_ALIASES.get(name, name)
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"angle symbol {name!r} is not declared in {self.names}") from None

    def symbol(self, name: str) -> AngleSymbol:
        return AngleSymbol(self.names[self.index(name)])

    # angle constructors
    def sym(self, name: str) -> "Angle":
        coeffs = [_F0] * len(self.names)
        coeffs[self.index(name)] = _F1
        return Angle(self, tuple(coeffs), _F0)

    def pi(self, multiple=1) -> "Angle":
        return Angle(self, (_F0,) * len(self.names), Fraction(multiple))

    def zero_angle(self) -> "Angle":
        return self.pi(0)

    def angle(self, value) -> "Angle":
        """Coerce ``value`` (Angle, str expression, int 0, AngleSymbol) to an Angle."""
        if isinstance(value, Angle):
            if value.ctx != self:
                raise ContextMismatchError("angle belongs to a different context")
            return value
        if isinstance(value, AngleSymbol):
            return self.sym(value.name)
        if isinstance(value, str):
            return parse_angle(self, value)
        if isinstance(value, (int, Fraction)) and value == 0:
            return self.zero_angle()
        raise TypeError(f"cannot interpret {value!r} as an exact angle; use a pi-rational string")

    # scalar constructors
    def _zero_exps(self) -> tuple[int, ...]:
        return (0,) * len(self.names)

    def zero(self) -> "SymbolicScalar":
        return SymbolicScalar._from_items(self, ())

    def one(self) -> "SymbolicScalar":
        return SymbolicScalar._from_items(self, (((0, self._zero_exps()), _C_ONE),))

    def const(self, value) -> "SymbolicScalar":
        c = _coerce_coefficient(value)
        if c.is_zero():
            return self.zero()
        return SymbolicScalar._from_items(self, (((0, self._zero_exps()), c),))

    def gaussian(self, re, im=0, sqrt2_pow: int = 0) -> "SymbolicScalar":
        return self.const(Coefficient.from_monomial(re, im, sqrt2_pow))

    def sqrt2(self, power: int = 1) -> "SymbolicScalar":
        return self.gaussian(1, 0, power)

    def eta(self, power: int = 1) -> "SymbolicScalar":
        return SymbolicScalar._from_items(self, (((power, self._zero_exps()), _C_ONE),))

    def expi(self, angle) -> "SymbolicScalar":
        """``exp(i * angle)`` as an exact scalar."""
        angle = self.angle(angle)
        exps = []
        for c in angle.coeffs:
            if c.denominator != 1:
                raise UnsupportedPhaseError(
                    f"exponent {angle} has non-integer symbol coefficients")
            exps.append(int(c))
        quarter = angle.pi_part * 4
        if quarter.denominator != 1:
            raise UnsupportedPhaseError(
                f"constant phase {angle.pi_part}*pi is not a multiple of pi/4")
        coeff = _EIGHTH_ROOTS[int(quarter) % 8]
        return SymbolicScalar._from_items(self, (((0, tuple(exps)), coeff),))

    def cos(self, angle) -> "SymbolicScalar":
        angle = self.angle(angle)
        return (self.expi(angle) + self.expi(-angle)) * Fraction(1, 2)

    def sin(self, angle) -> "SymbolicScalar":
        angle = self.angle(angle)
        return (self.expi(angle) - self.expi(-angle)) * complex(0, -0.5)


DEFAULT_CONTEXT = Context(("vartheta", "alpha", "omega", "beta", "theta", "phi"))


@dataclass(frozen=True)
class Angle:
    """Linear angle expression ``sum_j coeffs[j]*symbol_j + pi_part*pi``."""

    ctx: Context
    coeffs: tuple[Fraction, ...]
    pi_part: Fraction

    def _check(self, other: "Angle"):
        if not isinstance(other, Angle):
            return NotImplemented
        if other.ctx != self.ctx:
            raise ContextMismatchError("angles from different contexts")
        return None

    def __add__(self, other):
        if isinstance(other, (int, Fraction)) and other == 0:
            return self
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Angle(self.ctx, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)),
                     self.pi_part + other.pi_part)

    __radd__ = __add__

    def __neg__(self):
        return Angle(self.ctx, tuple(-a for a in self.coeffs), -self.pi_part)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)) and other == 0:
            return self
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __mul__(self, k):
        if not isinstance(k, (int, Fraction)):
            return NotImplemented
        k = Fraction(k)
        return Angle(self.ctx, tuple(a * k for a in self.coeffs), self.pi_part * k)

    __rmul__ = __mul__

    def __truediv__(self, k):
        if not isinstance(k, (int, Fraction)):
            return NotImplemented
        return self * (1 / Fraction(k))

    def is_zero(self) -> bool:
        return not any(self.coeffs) and not self.pi_part

    def integer_part(self) -> tuple[int, ...]:
        if any(c.denominator != 1 for c in self.coeffs):
            raise UnsupportedPhaseError(f"{self} has non-integer coefficients")
        return tuple(int(c) for c in self.coeffs)

    def evaluate(self, assign: Mapping[str, float] | None = None):
        assign = assign or {}
        total = float(self.pi_part) * math.pi
        for name, c in zip(self.ctx.names, self.coeffs):
            if c:
                if name not in assign:
                    raise MissingAssignmentError(name)
                total = total + float(c) * assign[name]
        return total

    def __str__(self) -> str:
        parts = []
        for name, c in zip(self.ctx.names, self.coeffs):
            if c:
                parts.append(_lin_term(c, name))
        if self.pi_part:
            parts.append(_lin_term(self.pi_part, "pi"))
        if not parts:
            return "0"
        s = parts[0]
        for p in parts[1:]:
            s += " - " + p[1:] if p.startswith("-") else " + " + p
        return s


def _lin_term(c: Fraction, name: str) -> str:
    if c == 1:
        return name
    if c == -1:
        return "-" + name
    if c.denominator == 1:
        return f"{c.numerator}*{name}"
    num = "" if c.numerator == 1 else ("-" if c.numerator == -1 else f"{c.numerator}*")
    return f"{num}{name}/{c.denominator}"


# ---------------------------------------------------------------------------
# angle parsing ("2*vartheta + pi/4")
# ---------------------------------------------------------------------------


def _normalize_text(text: str) -> str:
    for k, v in SYMBOL_ALIASES.items():
        text = text.replace(k, v)
    return text.replace("−", "-")


def _parse_linear(node, ctx: Context | None):
    """Return (coeff dict, pi Fraction, plain Fraction) for an AST node."""
    if isinstance(node, ast.Expression):
        return _parse_linear(node.body, ctx)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
            and not isinstance(node.value, bool):
        return {}, _F0, Fraction(node.value)
    if isinstance(node, ast.Name):
        if node.id == "pi":
            return {}, _F1, _F0
        if ctx is None:
            raise ValueError(f"symbol {node.id!r} not allowed in a numeric angle")
        ctx.index(node.id)
        return {ctx.names[ctx.index(node.id)]: _F1}, _F0, _F0
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        d, p, c = _parse_linear(node.operand, ctx)
        if isinstance(node.op, ast.UAdd):
            return d, p, c
        return {k: -v for k, v in d.items()}, -p, -c
    if isinstance(node, ast.BinOp):
        ld, lp, lc = _parse_linear(node.left, ctx)
        rd, rp, rc = _parse_linear(node.right, ctx)
        if isinstance(node.op, (ast.Add, ast.Sub)):
            sgn = 1 if isinstance(node.op, ast.Add) else -1
            d = dict(ld)
            for k, v in rd.items():
                d[k] = d.get(k, _F0) + sgn * v
            return d, lp + sgn * rp, lc + sgn * rc
        l_const = not ld and not lp
        r_const = not rd and not rp
        if isinstance(node.op, ast.Mult):
            if l_const:
                return {k: lc * v for k, v in rd.items()}, lc * rp, lc * rc
            if r_const:
                return {k: rc * v for k, v in ld.items()}, rc * lp, rc * lc
            raise ValueError("angle expressions must be linear")
        if isinstance(node.op, ast.Div):
            if not r_const or rc == 0:
                raise ValueError("can only divide an angle by a nonzero number")
            return {k: v / rc for k, v in ld.items()}, lp / rc, lc / rc
    raise ValueError(f"unsupported syntax in angle expression: {ast.dump(node)}")


def parse_angle(ctx: Context, text: str) -> Angle:
    """Parse a linear angle expression such as ``"2*vartheta - pi/4"``.

    Bare numbers are only accepted when they are zero; exact constants must be
    written as multiples of ``pi``.
    """
    tree = ast.parse(_normalize_text(text).strip(), mode="eval")
    d, p, c = _parse_linear(tree, ctx)
    if c != 0:
        raise ValueError(f"angle {text!r} has a non-pi constant; write it as a multiple of pi")
    coeffs = [_F0] * len(ctx.names)
    for k, v in d.items():
        coeffs[ctx.index(k)] = v
    return Angle(ctx, tuple(coeffs), p)


def parse_radians(text: str | float) -> float:
    """Parse ``"pi/4"``, ``"0.05"``, ``"pi - 0.05"`` etc. into a float."""
    if isinstance(text, (int, float)):
        return float(text)
    tree = ast.parse(_normalize_text(str(text)).strip(), mode="eval")
    _, p, c = _parse_linear(tree, None)
    return float(p) * math.pi + float(c)


# ---------------------------------------------------------------------------
# scalars
# ---------------------------------------------------------------------------


class PhaseExponent(NamedTuple):
    const_part: Fraction  # always 0 after canonicalization
    linear_part: tuple[int, ...]


class Term(NamedTuple):
    coeff: Coefficient
    eta_pow: int
    phase: PhaseExponent


_Key = tuple  # (eta_pow, exps)


class SymbolicScalar:
    """Immutable canonical sum of exponential terms.  Build via :class:`Context`."""

    __slots__ = ("ctx", "_items", "_hash")

    def __init__(self, *_args, **_kw):
        raise TypeError("use Context.const/eta/expi or arithmetic to build scalars")

    @classmethod
    def _from_items(cls, ctx: Context, items) -> "SymbolicScalar":
        obj = object.__new__(cls)
        object.__setattr__(obj, "ctx", ctx)
        object.__setattr__(obj, "_items", tuple(items))
        object.__setattr__(obj, "_hash", None)
        return obj

    @classmethod
    def _from_dict(cls, ctx: Context, d: dict) -> "SymbolicScalar":
        return cls._from_items(ctx, sorted((k, c) for k, c in d.items() if not c.is_zero()))

    def __setattr__(self, *_):
        raise AttributeError("SymbolicScalar is immutable")

    # -- inspection ---------------------------------------------------------
    @property
    def terms(self) -> list[Term]:
        return [Term(c, k[0], PhaseExponent(_F0, k[1])) for k, c in self._items]

    def items(self):
        return self._items

    def is_zero(self) -> bool:
        return not self._items

    def eta_grades(self) -> set[int]:
        return {k[0] for k, _ in self._items}

    def phase_support(self) -> set[tuple[int, ...]]:
        return {k[1] for k, _ in self._items}

    def symbols(self) -> list[str]:
        used = set()
        for (_, exps), _c in self._items:
            used.update(i for i, e in enumerate(exps) if e)
        return [self.ctx.names[i] for i in sorted(used)]

    def exponents_of(self, name: str) -> set[int]:
        i = self.ctx.index(name)
        return {k[1][i] for k, _ in self._items}

    def split_by(self, name: str) -> dict[int, "SymbolicScalar"]:
        """Group terms by exponent of ``name``; residuals keep the full phase."""
        i = self.ctx.index(name)
        groups: dict[int, list] = {}
        for k, c in self._items:
            groups.setdefault(k[1][i], []).append((k, c))
        return {e: SymbolicScalar._from_items(self.ctx, g) for e, g in sorted(groups.items())}

    def without_symbol(self, name: str, exponent: int) -> "SymbolicScalar":
        """Strip ``exp(i*exponent*name)`` from every term (terms must carry it)."""
        i = self.ctx.index(name)
        out = []
        for (p, exps), c in self._items:
            if exps[i] != exponent:
                raise ValueError(f"term exponent {exps[i]} != {exponent}")
            e = list(exps)
            e[i] = 0
            out.append(((p, tuple(e)), c))
        return SymbolicScalar._from_items(self.ctx, out)

    def as_constant(self) -> Coefficient | None:
        """Return the coefficient if this scalar is a plain number, else None."""
        if not self._items:
            return _C_ZERO
        if len(self._items) == 1:
            (p, exps), c = self._items[0]
            if p == 0 and not any(exps):
                return c
        return None

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "SymbolicScalar":
        if isinstance(other, SymbolicScalar):
            if other.ctx != self.ctx:
                raise ContextMismatchError(
                    f"symbol contexts differ: {self.ctx.names} vs {other.ctx.names}")
            return other
        if isinstance(other, (int, float, complex, Fraction, Coefficient)):
            return self.ctx.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        d = dict(self._items)
        for k, c in other._items:
            prev = d.get(k)
            d[k] = c if prev is None else _c_add(prev, c)
        return SymbolicScalar._from_dict(self.ctx, d)

    __radd__ = __add__

    def __neg__(self):
        return SymbolicScalar._from_items(self.ctx, ((k, _c_neg(c)) for k, c in self._items))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, float, complex, Coefficient)):
            c = _coerce_coefficient(other)
            return SymbolicScalar._from_dict(
                self.ctx, {k: _c_mul(v, c) for k, v in self._items})
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        d: dict = {}
        for (p1, e1), c1 in self._items:
            for (p2, e2), c2 in other._items:
                k = (p1 + p2, tuple(a + b for a, b in zip(e1, e2)))
                c = _c_mul(c1, c2)
                prev = d.get(k)
                d[k] = c if prev is None else _c_add(prev, c)
        return SymbolicScalar._from_dict(self.ctx, d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = self.ctx.one()
        for _ in range(n):
            out = out * self
        return out

    def conj(self) -> "SymbolicScalar":
        return SymbolicScalar._from_dict(
            self.ctx, {(p, tuple(-e for e in exps)): _c_conj(c) for (p, exps), c in self._items})

    # -- equality -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, SymbolicScalar):
            return self.ctx == other.ctx and self._items == other._items
        if isinstance(other, (int, Fraction, complex, float)):
            return self._items == self.ctx.const(other)._items
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.ctx, self._items))
            object.__setattr__(self, "_hash", h)
        return h

    # -- numerics -----------------------------------------------------------
    def eval_numeric(self, assign: Mapping[str, float] | None = None, eta=1.0):
        """Evaluate at numeric angles (radians) and birefringence ``eta``.

        Works elementwise when ``assign`` values or ``eta`` are numpy arrays.
        """
        assign = {SYMBOL_ALIASES.get(k, k): v for k, v in (assign or {}).items()}
        if np.any(np.asarray(eta) <= 0):
            raise ValueError("eta must be positive")
        names = self.ctx.names
        for n in self.symbols():
            if n not in assign:
                raise MissingAssignmentError(n)
        total = 0j
        for (p, exps), c in self._items:
            phase = 0.0
            for n, e in zip(names, exps):
                if e:
                    phase = phase + e * np.asarray(assign[n], dtype=float)
            val = complex(c)
            if p:
                val = val * np.asarray(eta, dtype=float) ** p
            if np.ndim(phase) or phase != 0.0:
                val = val * np.exp(1j * phase)
            total = total + val
        shape = np.broadcast_shapes(np.shape(total), np.shape(eta),
                                    *(np.shape(v) for v in assign.values()))
        if shape == ():
            return complex(total)
        return np.broadcast_to(np.asarray(total, dtype=complex), shape).copy()

    # -- serialization ------------------------------------------------------
    def to_records(self) -> list[dict]:
        recs = []
        for (p, exps), c in self._items:
            for re, im, s in c.monomials():
                recs.append({
                    "re": str(re),
                    "im": str(im),
                    "sqrt2_pow": s,
                    "eta_pow": p,
                    "exponents": {n: e for n, e in zip(self.ctx.names, exps) if e},
                })
        return recs

    @classmethod
    def from_records(cls, ctx: Context, records: Iterable[Mapping]) -> "SymbolicScalar":
        out = ctx.zero()
        for r in records:
            exps = [0] * len(ctx.names)
            for n, e in r.get("exponents", {}).items():
                exps[ctx.index(n)] = int(e)
            c = Coefficient.from_monomial(Fraction(r["re"]), Fraction(r["im"]), int(r["sqrt2_pow"]))
            out = out + cls._from_items(ctx, (((int(r["eta_pow"]), tuple(exps)), c),))
        return out

    # -- display ------------------------------------------------------------
    def _phase_str(self, exps) -> str:
        parts = []
        for n, e in zip(self.ctx.names, exps):
            if e:
                parts.append(_lin_term(Fraction(e), n))
        s = parts[0]
        for p in parts[1:]:
            s += " - " + p[1:] if p.startswith("-") else " + " + p
        return s

    def __repr__(self) -> str:
        if not self._items:
            return "0"
        parts = []
        for (p, exps), c in self._items:
            s = _coeff_str(c)
            if p:
                s += f"*eta^{p}" if p != 1 else "*eta"
            if any(exps):
                s += f"*e^(i({self._phase_str(exps)}))"
            parts.append(s)
        return _join_terms(parts)

    def pretty(self) -> str:
        """Regroup conjugate exponential pairs into cos/sin form."""
        if not self._items:
            return "0"
        d = dict(self._items)
        seen = set()
        parts = []
        for (p, exps), _ in self._items:
            if (p, exps) in seen:
                continue
            neg = tuple(-e for e in exps)
            first = next((e for e in exps if e), 0)
            if first < 0 and (p, neg) in d:
                continue
            seen.add((p, exps))
            eta = "" if p == 0 else ("eta" if p == 1 else f"eta^{p}")
            if not any(exps):
                parts.append(_join_factor(_coeff_str(d[(p, exps)]), eta))
                continue
            cp = d.get((p, exps), _C_ZERO)
            cm = d.get((p, neg), _C_ZERO)
            seen.add((p, neg))
            ph = self._phase_str(exps)
            cos_c = _c_add(cp, cm)
            sin_c = _c_mul(Coefficient(_F0, _F1), _c_add(cp, _c_neg(cm)))
            if not cos_c.is_zero():
                parts.append(_join_factor(_coeff_str(cos_c), eta, f"cos({ph})"))
            if not sin_c.is_zero():
                parts.append(_join_factor(_coeff_str(sin_c), eta, f"sin({ph})"))
        return _join_terms(parts)


def _join_terms(parts: list[str]) -> str:
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def _join_factor(coeff: str, *factors: str) -> str:
    fs = [f for f in factors if f]
    if not fs:
        return coeff
    if coeff == "1":
        return "*".join(fs)
    if coeff == "-1":
        return "-" + "*".join(fs)
    return coeff + "*" + "*".join(fs)


def _gauss_str(re: Fraction, im: Fraction) -> str:
    if not im:
        return str(re)
    if not re:
        if im == 1 or im == -1:
            return "i" if im == 1 else "-i"
        return f"{im}i" if im.denominator == 1 else f"({im})i"
    sign = "+" if im > 0 else "-"
    mag = abs(im)
    mag_s = "" if mag == 1 else (str(mag) if mag.denominator == 1 else f"({mag})")
    return f"({re}{sign}{mag_s}i)"


def _coeff_str(c: Coefficient) -> str:
    parts = []
    if c.re or c.im:
        parts.append(_gauss_str(c.re, c.im))
    if c.re2 or c.im2:
        g = _gauss_str(c.re2, c.im2)
        parts.append("sqrt2" if g == "1" else ("-sqrt2" if g == "-1" else f"{g}*sqrt2"))
    if not parts:
        return "0"
    if len(parts) == 2:
        return f"({parts[0]} + {parts[1]})"
    return parts[0]


# functional aliases
def add(a: SymbolicScalar, b: SymbolicScalar) -> SymbolicScalar:
    return a + b


def mul(a: SymbolicScalar, b: SymbolicScalar) -> SymbolicScalar:
    return a * b


def conj(a: SymbolicScalar) -> SymbolicScalar:
    return a.conj()


def eval_numeric(a: SymbolicScalar, assign: Mapping[str, float] | None = None, eta=1.0):
    return a.eval_numeric(assign, eta)
