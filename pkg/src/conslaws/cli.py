"""Command-line front end.

Exit status: 0 success, 1 negative verdict, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

from . import evolution as ev
from . import families as fam
from . import ode
from . import vorticity as vort
from .expr import Expression
from .calculus import NotADivergence, euler
from .syntax import ParseError, parse, parse_context
from .wronskian import ZeroWronskian

DEFAULT_CONTEXTS = {
    "construct-ode": "vars t; unknowns u",
    "first-integrals": "vars t; unknowns u",
    "verify-factor": "vars t; unknowns u",
    "construct-evolution": "vars t x; unknowns u",
    "verify-current": "vars t x; unknowns u",
    "flux": "vars t x; unknowns u",
    "verify-family": "vars t x y; unknowns psi",
    "construct-family": "vars t x y; unknowns psi",
    "euler": "vars t x; unknowns u",
    "totald": "vars t x; unknowns u",
}


class InputError(Exception):
    pass


class Job:
    """Command tag, context, named bindings and output format."""

    def __init__(self, command, context_text, bindings, fmt="text"):
        self.command = command
        self.context_text = context_text
        self.bindings = dict(bindings)
        self.fmt = fmt
        try:
            self.ctx = parse_context(context_text)
        except ParseError as exc:
            raise InputError(f"context: {exc}") from None

    def raw(self, name, required=True):
        v = self.bindings.get(name)
        if v is None and required:
            raise InputError(f"missing input {name!r}")
        return v

    def expr(self, name, required=True):
        text = self.raw(name, required)
        if text is None:
            return None
        try:
            return parse(text, self.ctx)
        except ParseError as exc:
            raise InputError(f"{name}: {exc}") from None

    def exprs(self, name, required=True):
        text = self.raw(name, required)
        if text is None:
            return None
        items = [s.strip() for s in text.split(";")]
        if any(not s for s in items):
            raise InputError(f"{name}: empty list item")
        out = []
        for s in items:
            try:
                out.append(parse(s, self.ctx))
            except ParseError as exc:
                raise InputError(f"{name}: {exc}") from None
        return out


def read_job_file(path: str):
    """Context header line(s) followed by ``name = expr`` bindings."""
    header = []
    bindings = {}
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" in line:
                name, _, value = line.partition("=")
                name = name.strip()
                if not name.isidentifier():
                    raise InputError(f"{path}:{n}: bad binding name {name!r}")
                bindings[name] = value.strip()
            else:
                header.append(line)
    return " ".join(h if h.endswith(";") else h + ";" for h in header), bindings


class Report:
    def __init__(self, command, inputs):
        self.command = command
        self.inputs = inputs
        self.result = None
        self.verdicts = []
        self.sign_note = ""
        self.order_report = []

    def verdict(self, name, value):
        self.verdicts.append([name, bool(value)])

    @property
    def negative(self):
        return any(not v for _, v in self.verdicts)

    def structured(self) -> str:
        doc = {
            "command": self.command,
            "inputs": self.inputs,
            "result": self.result if self.result is not None else "",
            "verdicts": self.verdicts,
            "sign_note": self.sign_note,
            "order_report": self.order_report,
        }
        return json.dumps(doc, indent=2, sort_keys=False)

    def text(self) -> str:
        lines = []
        if isinstance(self.result, list):
            lines.extend(self.result)
        elif self.result:
            lines.append(self.result)
        if len(self.verdicts) == 1 and self.result is None:
            lines.append("true" if self.verdicts[0][1] else "false")
        else:
            lines.extend(f"{n}: {'true' if v else 'false'}" for n, v in self.verdicts)
        if self.sign_note:
            lines.append(f"note: {self.sign_note}")
        lines.extend(f"{k}: {json.dumps(v)}" for k, v in self.order_report)
        return "\n".join(lines)


def _t(e: Expression) -> str:
    return e.to_text()


# -- command handlers ---------------------------------------------------------------

def cmd_construct_ode(job, rep):
    lams = job.exprs("factors")
    H = job.expr("H")
    if job.bindings.get("alt"):
        L = ode.construct_ode_alt(lams, H)
        for lam in lams:
            rep.verdict(f"factor {_t(lam)}", ode.verify_integrating_factor(L, lam))
    else:
        L = ode.construct_ode(lams, H)
    rep.result = _t(L)
    if job.bindings.get("alt"):
        rep.order_report = [[k, v] for k, v in ode.check_order_bounds(lams, H).as_dict().items()]


def cmd_first_integrals(job, rep):
    rep.result = [_t(I) for I in ode.first_integrals(job.exprs("factors"), job.expr("H"))]


def cmd_verify_factor(job, rep):
    L = job.expr("L")
    for lam in job.exprs("factors"):
        rep.verdict(_t(lam), ode.verify_integrating_factor(L, lam))


def _equation(job):
    try:
        return ev.EvolutionEquation(job.expr("G"), strict=False)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def cmd_construct_evolution(job, rep):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        G = ev.construct_evolution(job.exprs("densities"), job.expr("H"))
    rep.result = _t(G)
    notes = [str(w.message) for w in caught if issubclass(w.category, ev.DegenerateEvolutionWarning)]
    if notes:
        rep.sign_note = "; ".join(notes)


def cmd_verify_current(job, rep):
    rep.verdict("conserved", ev.verify_conserved_current(_equation(job), job.expr("rho"), job.expr("sigma")))


def cmd_flux(job, rep):
    rep.result = _t(ev.flux_from_density(_equation(job), job.expr("rho")))


def _vars(job, name):
    return tuple(v for v in job.raw(name).replace(",", " ").replace(";", " ").split())


def _upper(items, n, antisymmetric, ctx):
    need = n * (n - 1) // 2 if antisymmetric else n * (n + 1) // 2
    if len(items) != need:
        raise InputError(f"expected {need} upper-triangle entries, got {len(items)}")
    zero = Expression.const(ctx, 0)
    M = [[zero] * n for _ in range(n)]
    it = iter(items)
    for i in range(n):
        for j in range(i + 1 if antisymmetric else i, n):
            v = next(it)
            M[i][j] = v
            M[j][i] = -v if antisymmetric else v
    return M


def cmd_verify_family(job, rep):
    kind = job.raw("family")
    L = job.expr("L")
    if kind == "h":
        rep.verdict("family_h", fam.verify_family_h(L, _vars(job, "args")))
    elif kind == "affine":
        rep.verdict("family_affine", fam.verify_family_affine(L, job.raw("base")))
    elif kind == "omega":
        omega = job.expr("omega")
        rep.verdict("family_omega", fam.verify_family_omega(L, omega))
    else:
        raise InputError(f"unknown family {kind!r}")


def cmd_construct_family(job, rep):
    kind = job.raw("family")
    ctx = job.ctx
    if kind == "h":
        args = _vars(job, "args")
        L = fam.construct_family_h(job.exprs("F"), args, ctx)
        rep.verdict("family_h", fam.verify_family_h(L, args))
    elif kind == "affine":
        base = job.raw("base")
        M = _upper(job.exprs("K"), ctx.n - 1, False, ctx)
        L = fam.construct_family_affine(M, base, ctx)
        rep.verdict("family_affine", fam.verify_family_affine(L, base))
    elif kind == "omega":
        omega = job.expr("omega")
        M = _upper(job.exprs("G"), ctx.n, True, ctx)
        L = fam.construct_family_omega(M, omega)
        rep.verdict("family_omega", fam.verify_family_omega(L, omega))
        if ctx.dependent == ("psi",) and ctx.independent == ("t", "x", "y"):
            lhs = vort.vorticity_lhs(ctx)
            sign = fam.compare_up_to_sign(L, lhs)
            if sign is not None:
                rep.sign_note = f"equals {'+' if sign > 0 else '-'}(vorticity left-hand side)"
    else:
        raise InputError(f"unknown family {kind!r}")
    rep.result = _t(L)


def cmd_vorticity_closure(job, rep):
    ctx = vort.vorticity_context()
    vals = {}
    for key in ("P1", "P2", "P3", "S1", "S2", "S3"):
        text = job.bindings.get(key, "0")
        try:
            vals[key] = parse(text, ctx)
        except ParseError as exc:
            raise InputError(f"{key}: {exc}") from None
    data = vort.ClosureData((vals["P1"], vals["P2"], vals["P3"]), (vals["S1"], vals["S2"], vals["S3"]))
    V = vort.build_V(data, ctx)
    rep.result = _t(V)
    for k, v in vort.verify_closed_vorticity(V).as_dict().items():
        rep.verdict(k, v)


def cmd_euler(job, rep):
    f = job.expr("f")
    a = job.bindings.get("unknown") or job.ctx.dependent[0]
    try:
        rep.result = _t(euler(f, a))
    except KeyError as exc:
        raise InputError(str(exc)) from None


def cmd_totald(job, rep):
    f = job.expr("f")
    try:
        rep.result = _t(f.total_derivative(job.raw("var")))
    except KeyError as exc:
        raise InputError(str(exc)) from None


HANDLERS = {
    "construct-ode": (cmd_construct_ode, {"factors": "semicolon-separated integrating factors",
                                          "H": "free function H (or Hhat with --alt)"}),
    "first-integrals": (cmd_first_integrals, {"factors": "semicolon-separated integrating factors",
                                              "H": "free function H"}),
    "verify-factor": (cmd_verify_factor, {"L": "left-hand side", "factors": "candidate factors"}),
    "construct-evolution": (cmd_construct_evolution, {"densities": "semicolon-separated densities",
                                                      "H": "free function H"}),
    "verify-current": (cmd_verify_current, {"G": "right-hand side of u_t = G", "rho": "density",
                                            "sigma": "flux"}),
    "flux": (cmd_flux, {"G": "right-hand side of u_t = G", "rho": "density"}),
    "verify-family": (cmd_verify_family, {"L": "left-hand side", "family": "h, affine or omega",
                                          "args": "argument variables (h)", "base": "base variable (affine)",
                                          "omega": "argument expression (omega)"}),
    "construct-family": (cmd_construct_family, {"family": "h, affine or omega",
                                                "F": "components over the non-argument variables (h)",
                                                "args": "argument variables (h)",
                                                "K": "upper triangle of symmetric K, row-major (affine)",
                                                "base": "base variable (affine)",
                                                "G": "strict upper triangle of antisymmetric G (omega)",
                                                "omega": "argument expression (omega)"}),
    "vorticity-closure": (cmd_vorticity_closure, {k: f"closure component {k}" for k in
                                                  ("P1", "P2", "P3", "S1", "S2", "S3")}),
    "euler": (cmd_euler, {"f": "differential function", "unknown": "unknown name"}),
    "totald": (cmd_totald, {"f": "differential function", "var": "independent variable"}),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="conslaws", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, opts) in HANDLERS.items():
        sp = sub.add_parser(name)
        sp.add_argument("--context", help="context header, e.g. 'vars t x; unknowns u'")
        sp.add_argument("--format", choices=("text", "structured"), default="text")
        sp.add_argument("--job", help="job file: context header, then 'name = expr' lines")
        for opt, help_text in opts.items():
            sp.add_argument(f"--{opt}", dest=opt, help=help_text)
        if name == "construct-ode":
            sp.add_argument("--alt", action="store_true", help="treat H as Hhat and report order bounds")
    return parser


def make_job(ns) -> Job:
    _, opts = HANDLERS[ns.command]
    bindings = {}
    context_text = None
    if ns.job:
        try:
            context_text, bindings = read_job_file(ns.job)
        except OSError as exc:
            raise InputError(f"cannot read job file: {exc}") from None
        if not context_text:
            context_text = None
    for opt in opts:
        v = getattr(ns, opt, None)
        if v is not None:
            bindings[opt] = v
    if getattr(ns, "alt", False):
        bindings["alt"] = "1"
    if ns.context:
        context_text = ns.context
    if ns.command == "vorticity-closure":
        context_text = vort.vorticity_context().header()
    if context_text is None:
        context_text = DEFAULT_CONTEXTS[ns.command]
    return Job(ns.command, context_text, bindings, ns.format)


def run(job: Job) -> tuple:
    """Return (exit status, report text)."""
    handler, opts = HANDLERS[job.command]
    inputs = [f"context = {job.ctx.header()}"]
    rep = Report(job.command, inputs)
    try:
        for name in list(opts) + ["alt"]:
            if name in job.bindings:
                inputs.append(f"{name} = {job.bindings[name]}")
        handler(job, rep)
    except InputError:
        raise
    except (ParseError, ZeroWronskian, NotADivergence, ValueError, KeyError, ZeroDivisionError) as exc:
        raise InputError(str(exc)) from None
    text = rep.structured() if job.fmt == "structured" else rep.text()
    return (1 if rep.negative else 0), text


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        job = make_job(ns)
        status, text = run(job)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
