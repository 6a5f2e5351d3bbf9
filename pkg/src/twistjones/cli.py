"""Command-line interface: derive, apply, phase, concurrence, cascade, sweep,
audit and selftest."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import reference
from .cascade import array_factor, build_array, flatness_report, propagate
from .entangle import (bell_decompose, closed_form_C, concurrence_report,
                       concurrence_sum_alpha2, i_concurrence)
from .geophase import pancharatnam
from .jones import (Convention, GadgetSpec, Matrix2, build_N, compose, plate_H, plate_Q,
                    polarization_M, polarization_M_conjugate, reflection_K, retarder, rotation_S)
from .oracle import DEFAULT_SEED, audit_summary, engine_h_double_prime, engine_h_prime
from .states import PolState, apply, named_ket, oam_spectrum
from .symphase import DEFAULT_CONTEXT, Coefficient, SymbolicScalar, parse_radians

SWEEP_HEADER = [
    "theta", "vartheta", "eta",
    "C_paper_h1", "C_paper_h2_re", "C_paper_h2_im",
    "C_engine_sumalpha2_h1", "C_engine_sumalpha2_h2",
    "C_iconc_h1", "C_iconc_h2",
]


class CliError(Exception):
    pass


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def grid(start: float, stop: float, step: float) -> np.ndarray:
    """Inclusive arithmetic grid start, start+step, ... <= stop."""
    if step <= 0:
        raise CliError("grid step must be positive")
    if stop < start:
        raise CliError(f"empty range {start}..{stop}")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(n)


def parse_range(text: str) -> tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) == 1:
        v = parse_radians(parts[0])
        return v, v, 1.0
    if len(parts) != 3:
        raise CliError(f"range {text!r} must be start:stop:step")
    return tuple(parse_radians(p) for p in parts)


@dataclass(frozen=True)
class SweepSpec:
    vartheta: tuple[float, float, float] = (0.0, math.pi, math.pi / 180)
    theta: tuple[float, float, float] = (0.05, math.pi - 0.05, math.pi / 180)
    elements: int = 2
    strategies: tuple[str, ...] = ("paper", "sum_alpha2", "iconc")

    def validate(self, eta_model: str = "inv-sin") -> None:
        if self.elements not in (1, 2):
            raise CliError("sweep columns cover elements 1 and 2; use cascade for longer arrays")
        unknown = set(self.strategies) - {"paper", "sum_alpha2", "iconc"}
        if unknown or not self.strategies:
            raise CliError("strategies must be a nonempty subset of paper, sum_alpha2, iconc")
        for name, (a, b, s) in (("vartheta", self.vartheta), ("theta", self.theta)):
            if s <= 0:
                raise CliError(f"{name} step must be positive")
            if b < a:
                raise CliError(f"{name} range is empty")
        a, b, _ = self.theta
        if eta_model == "inv-sin" and (a <= 0 or b >= math.pi):
            raise CliError("theta range must stay inside (0, pi) where 1/sin(theta) is finite")


def eta_from_model(model: str, theta):
    if model == "inv-sin":
        return 1.0 / np.sin(theta)
    if model.startswith("const:"):
        v = float(model.split(":", 1)[1])
        if v <= 0:
            raise CliError("constant eta must be positive")
        return np.full_like(np.asarray(theta, float), v)
    raise CliError(f"unknown eta model {model!r}")


def parse_assignments(items) -> dict[str, float]:
    out = {}
    for item in items or []:
        key, sep, val = item.partition("=")
        if not sep:
            raise CliError(f"--at expects name=value, got {item!r}")
        out[key.strip()] = parse_radians(val)
    return out


def _fmt(x: float) -> str:
    return repr(float(x))


def _emit(text: str, out: str | None) -> None:
    if out:
        try:
            Path(out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise CliError(f"cannot write {out}: {exc.strerror}") from None
    else:
        sys.stdout.write(text)


def _numeric_eta(args, assign) -> float:
    if args.eta_model == "inv-sin":
        if "theta" not in assign:
            raise CliError("eta model inv-sin needs --at theta=<value>")
        return float(eta_from_model("inv-sin", assign["theta"]))
    return float(eta_from_model(args.eta_model, 0.0))


# ---------------------------------------------------------------------------
# derive
# ---------------------------------------------------------------------------

_CALL = re.compile(r"^\s*([A-Za-z]+'*|h1|h2)\s*(?:\(([^()]*)\))?\s*$")


def derive_object(name: str, conv: Convention):
    """Build a named object: M, Mtilde, N, N(x), H(x), Q(x), S(x), K(x),
    QHQ(a,b), VCR, h1, h2, or any gadget string such as ``Q(a) H(b) Q(a)``."""
    ctx = DEFAULT_CONTEXT
    m = _CALL.match(name)
    if m:
        head, arg = m.group(1), m.group(2)
        args = [a.strip() for a in arg.split(",")] if arg else []
        if head == "M" and not args:
            return polarization_M("theta", "phi", ctx)
        if head in ("Mtilde", "Mconj") and not args:
            return polarization_M_conjugate("theta", "phi", ctx)
        if head == "N":
            return retarder("phi", args[0], conv, ctx) if args else build_N("phi", ctx)
        if head == "H" and len(args) == 1:
            return plate_H(args[0], conv, ctx)
        if head == "Q" and len(args) == 1:
            return plate_Q(args[0], conv, ctx)
        if head == "S" and len(args) == 1:
            return rotation_S(args[0], ctx)
        if head == "K" and len(args) == 1:
            return reflection_K(args[0], ctx)
        if head == "QHQ" and len(args) in (1, 2):
            a, b = (args[0], args[0]) if len(args) == 1 else args
            return compose(GadgetSpec.parse(f"Q({a}) H({b}) Q({a})", ctx), conv)
        if head == "VCR" and not args:
            return plate_H("0", conv, ctx) @ plate_H("vartheta", conv, ctx)
        if head in ("h1", "h'") and not args:
            return engine_h_prime(conv)
        if head in ("h2", "h''") and not args:
            return engine_h_double_prime(conv)
    try:
        return compose(GadgetSpec.parse(name, ctx), conv)
    except (ValueError, KeyError):
        raise CliError(f"unknown object {name!r}") from None


def _common_monomial(obj):
    """Largest shared (coefficient, eta power) if every entry's terms share it."""
    comps = obj.entries if isinstance(obj, Matrix2) else (obj.amp0, obj.amp1) \
        if isinstance(obj, PolState) else (obj,)
    grades = set()
    for c in comps:
        grades |= c.eta_grades()
    if len(grades) != 1:
        return None
    return grades.pop()


def cmd_derive(args) -> str:
    conv = Convention.parse(args.convention)
    obj = derive_object(args.object, conv)
    grade = _common_monomial(obj)
    if args.format == "structured":
        if isinstance(obj, Matrix2):
            payload = {"kind": "matrix", "records": obj.to_records(), "pretty": obj.pretty()}
        elif isinstance(obj, PolState):
            payload = {"kind": "state", **obj.dump(conv), "pretty": obj.pretty(conv)}
        else:
            payload = {"kind": "scalar", "records": obj.to_records(), "pretty": obj.pretty()}
        payload["object"] = args.object
        payload["convention"] = str(conv)
        payload["eta_grade"] = grade
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    lines = [f"# {args.object}   [{conv}]"]
    if grade is not None:
        lines.append(f"# eta-grade: {grade}")
    if isinstance(obj, PolState):
        lines.append(obj.pretty(conv))
    else:
        lines.append(obj.pretty())
    if isinstance(obj, Matrix2) and args.object.strip().startswith("QHQ") and grade == 3:
        bracket = Matrix2(*(strip_qhq_prefactor(e) for e in obj.entries))
        lines.append("# = (-i eta^3 / 2) *")
        lines.append(bracket.pretty())
    return "\n".join(lines) + "\n"


def strip_qhq_prefactor(s: SymbolicScalar) -> SymbolicScalar:
    """Exact s / (-i eta^3 / 2) for a scalar of pure eta-grade 3."""
    two_i = Coefficient(Fraction(0), Fraction(2))
    out = {}
    for (p, e), c in s.items():
        if p != 3:
            raise ValueError("scalar is not of eta-grade 3")
        out[(0, e)] = c
    return SymbolicScalar._from_dict(s.ctx, out) * two_i


# ---------------------------------------------------------------------------
# apply / phase / concurrence / cascade
# ---------------------------------------------------------------------------


def _state_arg(name: str, conv: Convention) -> PolState:
    if name in ("h1", "h'"):
        return engine_h_prime(conv)
    if name in ("h2", "h''"):
        return engine_h_double_prime(conv)
    try:
        return named_ket(name, conv)
    except ValueError as exc:
        raise CliError(str(exc)) from None


def _spectrum_rows(state: PolState, conv: Convention):
    return [{"spin": t.spin, "k": t.k, "residual": t.residual.pretty(),
             "records": t.residual.to_records()} for t in oam_spectrum(state, "vartheta", conv)]


def cmd_apply(args) -> str:
    conv = Convention.parse(args.convention)
    op = derive_object(args.op, conv)
    if not isinstance(op, Matrix2):
        raise CliError("--op must name an operator")
    out = apply(op, _state_arg(args.state, conv))
    rows = _spectrum_rows(out, conv)
    if args.format == "structured":
        return json.dumps({"state": out.dump(conv), "pretty": out.pretty(conv), "oam": rows},
                          indent=2, sort_keys=True) + "\n"
    lines = [f"{args.op} |{args.state}> = {out.pretty(conv)}", "spin  k  residual"]
    lines += [f"{r['spin']:4s} {r['k']:+3d}  {r['residual']}" for r in rows]
    return "\n".join(lines) + "\n"


def cmd_phase(args) -> str:
    conv = Convention.parse(args.convention)
    op = derive_object(args.op, conv)
    res = pancharatnam(_state_arg(args.state, conv), op)
    payload = {"amplitude": res.amplitude.pretty(), "records": res.amplitude.to_records()}
    assign = parse_assignments(args.at)
    if assign or args.eta_model.startswith("const:"):
        eta = _numeric_eta(args, assign)
        num = res.at(assign, eta)
        payload.update(eta=eta, arg=num.arg_numeric, magnitude=num.magnitude_numeric)
    if args.format == "structured":
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    lines = [f"<{args.state}|{args.op}|{args.state}> = {payload['amplitude']}"]
    if "arg" in payload:
        lines.append(f"eta={_fmt(payload['eta'])} arg={_fmt(payload['arg'])} "
                     f"|.|={_fmt(payload['magnitude'])}")
    return "\n".join(lines) + "\n"


def cmd_concurrence(args) -> str:
    conv = Convention.parse(args.convention)
    state = _state_arg(args.state, conv)
    assign = parse_assignments(args.at)
    if "vartheta" not in assign:
        raise CliError("concurrence needs --at vartheta=<value>")
    eta = _numeric_eta(args, assign)
    tag = args.state if args.state in ("h1", "h2") else None
    rep = concurrence_report(state, assign, eta, tag, "vartheta", conv)
    pairs = bell_decompose(state, "vartheta", conv)
    sym = concurrence_sum_alpha2(pairs, ctx=state.ctx)
    payload = {
        "state": args.state, "eta": eta, "assign": assign, "convention": str(conv),
        "pairs": [{"a": p.a, "alpha_plus": p.alpha_plus.pretty(), "alpha_minus": p.alpha_minus.pretty()}
                  for p in pairs],
        "sum_alpha2_symbolic": sym.pretty(),
        "strategies": rep.as_dict(),
    }
    if args.format == "structured":
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    d = rep.as_dict()
    lines = [
        f"state {args.state} at {assign}, eta={_fmt(eta)}  [{conv}]",
        f"Bell pairs: {len(pairs)} (labels {[p.a for p in pairs]})",
        f"sum alpha^2 (symbolic)        : {payload['sum_alpha2_symbolic']}",
        f"(a) |sum alpha^2|             : {_fmt(d['sum_alpha2_abs'])}",
        f"(b) normalized Bell kets      : {_fmt(d['sum_alpha2_bell'])}",
        f"(c) i-concurrence             : {_fmt(d['iconc'])}",
    ]
    if d["closed_form_re"] is not None:
        lines.append(f"published closed form         : {_fmt(d['closed_form_re'])} "
                     f"{d['closed_form_im']:+.17g}i")
    return "\n".join(lines) + "\n"


def cmd_cascade(args) -> str:
    conv = Convention.parse(args.convention)
    arr = build_array(args.elements)
    trace = propagate(named_ket("h", conv), arr, conv)
    assign = parse_assignments(args.at)
    out = {"elements": [], "oam_widening": trace.oam_widening, "convention": str(conv)}
    eta = None
    if "vartheta" in assign:
        eta = _numeric_eta(args, assign)
    phases = []
    for e, el in zip(trace.elements, arr):
        row = {
            "index": e.index,
            "gadget": str(el.gadget),
            "eta_grade": sorted(e.output.eta_grades()),
            "oam_support": list(e.oam_support),
            "bell_pairs": len(e.pairs),
            "phase": e.phase.amplitude.pretty(),
            "state": e.output.pretty(conv),
            "engine_only": e.index > 2,
        }
        if eta is not None:
            ph = e.phase.at(assign, eta)
            phases.append(ph.arg_numeric)
            row["phase_arg"] = ph.arg_numeric
            row["phase_magnitude"] = ph.magnitude_numeric
        out["elements"].append(row)
    if eta is not None:
        for row, rep in zip(out["elements"], trace.reports(assign, eta)):
            row["concurrence"] = rep.as_dict()
        steer = np.linspace(-math.pi / 2, math.pi / 2, args.steer_points)
        af = array_factor(phases, args.spacing, steer)
        k = int(np.argmax([m for _, m in af]))
        out["array_factor_peak"] = {"angle": af[k][0], "magnitude": af[k][1]}
    if args.flatness:
        thetas = grid(*parse_range(args.flat_theta))
        varthetas = grid(*parse_range(args.flat_vartheta))
        out["flatness"] = flatness_report(trace, thetas, varthetas)
    if args.format == "structured":
        return json.dumps(out, indent=2, sort_keys=True, default=str) + "\n"
    lines = [f"cascade of {args.elements} QHQ elements [{conv}], OAM widening: {trace.oam_widening}"]
    for row in out["elements"]:
        lines.append(f"element {row['index']}: {row['gadget']}  grade={row['eta_grade']} "
                     f"OAM={row['oam_support']} pairs={row['bell_pairs']}"
                     + ("  (engine-derived only)" if row["engine_only"] else ""))
        lines.append(f"  out   = {row['state']}")
        lines.append(f"  phase = {row['phase']}")
        if "concurrence" in row:
            c = row["concurrence"]
            lines.append(f"  C: (a) {_fmt(c['sum_alpha2_abs'])}  (b) {_fmt(c['sum_alpha2_bell'])}  "
                         f"(c) {_fmt(c['iconc'])}  published {c['closed_form_re']}")
    if "array_factor_peak" in out:
        p = out["array_factor_peak"]
        lines.append(f"array factor peak: angle={_fmt(p['angle'])} magnitude={_fmt(p['magnitude'])}")
    for r in out.get("flatness", []):
        lines.append(f"flat el={r['element']} theta={r['theta']:.6f} a={r['min_sum_alpha2']:.6g} "
                     f"b={r['min_sum_alpha2_bell']:.6g} c={r['min_iconc']:.6g} "
                     f"published={r['closed_form']} decreasing={r.get('closed_form_decreasing')}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


def sweep_arrays(spec: SweepSpec, conv: Convention = Convention(), eta_model: str = "inv-sin"):
    """Evaluate every sweep column on the theta x vartheta grid (theta outer)."""
    spec.validate(eta_model)
    th = grid(*spec.theta)
    vt = grid(*spec.vartheta)
    T, V = np.meshgrid(th, vt, indexing="ij")
    eta = eta_from_model(eta_model, T)
    assign = {"vartheta": V}
    cols = {"theta": T, "vartheta": V, "eta": eta}
    tags = ("h1", "h2")[:spec.elements]
    if "paper" in spec.strategies:
        cols["C_paper_h1"] = closed_form_C("h1", V, eta)
        if "h2" in tags:
            c2 = closed_form_C("h2", V, eta)
            cols["C_paper_h2_re"], cols["C_paper_h2_im"] = c2.real, c2.imag
    states = {"h1": engine_h_prime(conv), "h2": engine_h_double_prime(conv)}
    for tag in tags:
        st = states[tag]
        if "sum_alpha2" in spec.strategies:
            sa = concurrence_sum_alpha2(bell_decompose(st, "vartheta", conv), ctx=st.ctx)
            cols[f"C_engine_sumalpha2_{tag}"] = np.abs(
                np.broadcast_to(sa.eval_numeric(assign, eta), T.shape))
        if "iconc" in spec.strategies:
            if st.is_zero():
                # a vanishing state carries no entanglement; keep the column finite
                cols[f"C_iconc_{tag}"] = np.zeros(T.shape)
            else:
                cols[f"C_iconc_{tag}"] = np.broadcast_to(
                    i_concurrence(st, assign, eta, "vartheta", conv), T.shape)
    return cols


def sweep_csv(spec: SweepSpec, conv: Convention = Convention(), eta_model: str = "inv-sin") -> str:
    cols = sweep_arrays(spec, conv, eta_model)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    # columns for strategies or elements left out of the spec stay empty
    blank = [""] * cols["theta"].size
    flat = [[_fmt(x) for x in np.ravel(cols[h])] if h in cols else blank for h in SWEEP_HEADER]
    w.writerows(zip(*flat))
    return buf.getvalue()


def cmd_sweep(args) -> str:
    if args.format != "csv":
        raise CliError("sweep only emits csv")
    conv = Convention.parse(args.convention)
    strategies = tuple(x.strip() for x in args.strategies.split(",") if x.strip())
    spec = SweepSpec(parse_range(args.vartheta), parse_range(args.theta), args.elements, strategies)
    return sweep_csv(spec, conv, args.eta_model)


# ---------------------------------------------------------------------------
# audit / selftest
# ---------------------------------------------------------------------------


def audit_text(records) -> str:
    lines = [f"{'target':42s} {'verdict':22s} {'best convention':28s} {'residual':>12s} {'per-grade':>10s}"]
    for r in records:
        pg = "-" if r.residual_per_eta_grade is None else f"{r.residual_per_eta_grade:.6g}"
        lines.append(f"{r.target:42s} {r.verdict:22s} {str(r.convention):28s} "
                     f"{r.residual:12.6g} {pg:>10s}")
        extras = []
        n = r.notes
        if "published_over_engine" in n:
            extras.append(f"published = ({n['published_over_engine']}) x engine")
        if n.get("engine_identically_zero"):
            extras.append("engine value is identically zero")
        if "terms" in n:
            flags = ", ".join(f"{t['term']}:{'exact' if t['exact'] else ('pattern' if t['pattern'] else 'no')}"
                              for t in n["terms"])
            extras.append(f"terms [{flags}]")
        if "anomaly" in n:
            extras.append(n["anomaly"])
        for e in extras:
            lines.append(f"    {e}")
    return "\n".join(lines) + "\n"


def cmd_audit(args) -> str:
    records = audit_summary(samples=args.samples, seed=args.seed)
    if args.format == "structured":
        return json.dumps([r.as_dict() for r in records], indent=2, sort_keys=True, default=str) + "\n"
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["target", "verdict", "best_convention", "residual", "rel_residual",
                    "residual_per_eta_grade"])
        for r in records:
            w.writerow([r.target, r.verdict, str(r.convention), _fmt(r.residual), _fmt(r.rel_residual),
                        "" if r.residual_per_eta_grade is None else _fmt(r.residual_per_eta_grade)])
        return buf.getvalue()
    return audit_text(records)


def selftest_checks():
    """Fast battery of identities; yields (name, passed)."""
    from .jones import identity, quarter_turn
    from .oracle import convention_audit, finite_diff_N, random_equiv

    ctx = DEFAULT_CONTEXT
    eta2 = ctx.eta(2)
    L, R = named_ket("L"), named_ket("R")
    yield "S(a)S(b)=S(a+b)", random_equiv(rotation_S("alpha") @ rotation_S("beta"),
                                          rotation_S("alpha + beta"), 200)[0]
    yield "K(x)K(y)=S(2x-2y)", reflection_K("alpha") @ reflection_K("beta") == rotation_S("2*alpha - 2*beta")
    yield "J K(x)=K(x+pi/4)", quarter_turn() @ reflection_K("alpha") == reflection_K("alpha + pi/4")
    yield "H(t)^2=-eta^2 I", plate_H("vartheta") @ plate_H("vartheta") == identity() * -eta2
    yield "Q Q^dagger = eta^2 I", plate_Q("vartheta") @ plate_Q("vartheta").dagger() == identity() * eta2
    yield "H(t)|L> = eta e^{2it}|R>", apply(plate_H("vartheta"), L) == R * (ctx.eta() * ctx.expi("2*vartheta"))
    vcr = plate_H("0") @ plate_H("vartheta")
    yield "HH(t)|L> = -eta^2 e^{2it}|L>", apply(vcr, L) == L * (-eta2 * ctx.expi("2*vartheta"))
    yield "HH(t)|R> = -eta^2 e^{-2it}|R>", apply(vcr, R) == R * (-eta2 * ctx.expi("-2*vartheta"))
    yield "finite-difference eta = 1/sin", all(r["deviation"] <= 1e-5 for r in
                                               finite_diff_N(np.linspace(0.05, math.pi - 0.05, 9), [0.3]))
    yield "C(h') spot values", (abs(closed_form_C("h1", math.pi / 4, 1.0) - 1.0) <= 1e-12
                                and abs(closed_form_C("h1", 0.0, 1.0) - 0.5) <= 1e-12)
    yield "C(h'') at 2t=n pi", abs(closed_form_C("h2", math.pi / 2, 1.0) - 0.375) <= 1e-12
    yield "audit H-on-L exact", convention_audit("H-on-L", samples=200).verdict == "exact"


def cmd_selftest(args) -> str:
    lines = []
    ok = True
    for name, passed in selftest_checks():
        ok &= bool(passed)
        lines.append(f"{'PASS' if passed else 'FAIL'}  {name}")
    lines.append("selftest: " + ("all passed" if ok else "FAILURES"))
    text = "\n".join(lines) + "\n"
    if not ok:
        sys.stdout.write(text)
        raise CliError("selftest failed")
    return text


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--convention", default="default",
                        help="e.g. 'default' or 'twist=-1,j=-i,hand=-'")
    common.add_argument("--eta-model", default="inv-sin",
                        help="inv-sin (eta = 1/sin theta) or const:<value>")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--out", default=None, help="write output to this path")
    common.add_argument("--format", choices=("csv", "text", "structured"), default="text")

    p = argparse.ArgumentParser(prog="twistjones", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("derive", parents=[common], help="print an exact symbolic object")
    d.add_argument("object", help="M, Mtilde, N, N(x), H(x), Q(x), S(x), K(x), QHQ(a,b), VCR, h1, h2 "
                                  "or a gadget such as 'Q(vartheta) H(alpha) Q(vartheta)'")
    d.set_defaults(func=cmd_derive)

    a = sub.add_parser("apply", parents=[common], help="apply an operator to a ket")
    a.add_argument("--op", required=True)
    a.add_argument("--state", default="h")
    a.set_defaults(func=cmd_apply)

    ph = sub.add_parser("phase", parents=[common], help="Pancharatnam phase <s|op|s>")
    ph.add_argument("--op", required=True)
    ph.add_argument("--state", default="h")
    ph.add_argument("--at", nargs="*", default=[], help="name=value assignments (radians, pi/4 ok)")
    ph.set_defaults(func=cmd_phase)

    c = sub.add_parser("concurrence", parents=[common], help="concurrence strategies side by side")
    c.add_argument("--state", default="h1", help="h1, h2, h, v, L or R")
    c.add_argument("--at", nargs="*", default=[])
    c.set_defaults(func=cmd_concurrence)

    cs = sub.add_parser("cascade", parents=[common], help="propagate |h> through n QHQ elements")
    cs.add_argument("-n", "--elements", type=int, default=2)
    cs.add_argument("--at", nargs="*", default=[])
    cs.add_argument("--spacing", type=float, default=0.5, help="element spacing / wavelength")
    cs.add_argument("--steer-points", type=int, default=361)
    cs.add_argument("--flatness", action="store_true", help="add the minimum-concurrence table")
    cs.add_argument("--flat-theta", default="pi/2")
    cs.add_argument("--flat-vartheta", default="0:pi:pi/180")
    cs.set_defaults(func=cmd_cascade)

    s = sub.add_parser("sweep", parents=[common], help="concurrence surfaces over (theta, vartheta) as CSV")
    s.add_argument("--vartheta", default="0:pi:pi/180", help="start:stop:step")
    s.add_argument("--theta", default="0.05:pi-0.05:pi/180", help="start:stop:step")
    s.add_argument("--elements", type=int, default=2, help="1 or 2")
    s.add_argument("--strategies", default="paper,sum_alpha2,iconc",
                   help="comma-separated subset of paper, sum_alpha2, iconc")
    s.set_defaults(func=cmd_sweep)

    au = sub.add_parser("audit", parents=[common], help="convention audit of every published form")
    au.add_argument("--samples", type=int, default=1000)
    au.set_defaults(func=cmd_audit)

    st = sub.add_parser("selftest", parents=[common], help="quick identity battery")
    st.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "sweep" and args.format == "text":
        args.format = "csv"
    try:
        text = args.func(args)
        _emit(text, args.out)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, ZeroDivisionError) as exc:
        msg = exc.args[0] if type(exc) is KeyError and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
