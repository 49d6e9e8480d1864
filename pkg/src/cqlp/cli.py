"""Command-line front door: ``cqlp <command> --input doc.json --p 3 --seed 0``.

Exit codes: 0 success (including a "diverges" answer), 1 property failure,
2 usage or schema error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from importlib import resources

import jsonschema

from cqlp import forms, gelfand, gns, partialmul, seminorms, suite
from cqlp.corpus import corpus as default_corpus
from cqlp.exponents import Exponent
from cqlp.spaces import (
    DiscreteFunction,
    DiscreteSpace,
    SymbolicDomain,
    SymbolicFunction,
    exponent_set,
    in_lp,
    norm,
    parse_rational,
)

COMMANDS = ("norm", "espace", "forms-check", "alpha", "beta", "gamma", "gns", "gelfand",
            "gamma-table", "witness-search", "suite")

_RATIONAL = {
    "anyOf": [
        {"type": "number"},
        {"type": "string", "pattern": r"^-?\d+(/\d+)?$"},
        {"type": "object", "required": ["num", "den"],
         "properties": {"num": {"type": "integer"}, "den": {"type": "integer", "minimum": 1}}},
    ]
}

_FUNCTION = {
    "oneOf": [
        {
            "type": "object",
            "required": ["terms"],
            "additionalProperties": False,
            "properties": {
                "domain": {"enum": ["unit_interval", "half_line"]},
                "terms": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["c", "a"],
                        "additionalProperties": False,
                        "properties": {"c": _RATIONAL, "a": _RATIONAL,
                                       "support": {"enum": ["near_zero", "tail"]}},
                    },
                },
            },
        },
        {
            "type": "object",
            "required": ["re"],
            "additionalProperties": False,
            "properties": {"re": {"type": "array", "items": {"type": "number"}},
                           "im": {"type": "array", "items": {"type": "number"}}},
        },
    ]
}

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "space": {
            "type": "object",
            "required": ["weights"],
            "properties": {"weights": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0},
                                       "minItems": 1},
                           "atoms": {"type": "array"}},
        },
        "function": _FUNCTION,
        "functions": {"type": "array", "items": _FUNCTION},
        "weight": _FUNCTION,
        "weights": {"type": "array", "items": _FUNCTION},
        "p": {"anyOf": [_RATIONAL, {"const": "inf"}]},
        "domain": {"enum": ["unit_interval", "half_line"]},
        "grid": {"type": "array", "items": _RATIONAL},
    },
}


class UsageError(Exception):
    pass


def _pointer(path) -> str:
    return "/" + "/".join(str(x) for x in path)


def load_document(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path) as fh:
        doc = json.load(fh)
    validator = jsonschema.Draft202012Validator(SCHEMA)
    e = jsonschema.exceptions.best_match(validator.iter_errors(doc))
    if e is not None:
        raise UsageError(f"schema error at {_pointer(e.absolute_path)}: {e.message}")
    return doc


def _function(obj, space: DiscreteSpace | None):
    if "terms" in obj:
        return SymbolicFunction.from_json(obj)
    if space is None:
        raise UsageError("a discrete function needs a 'space'")
    try:
        return DiscreteFunction.from_json(space, obj)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


class Context:
    def __init__(self, doc: dict, args):
        self.doc = doc
        self.args = args
        self.space = DiscreteSpace.from_json(doc["space"]) if "space" in doc else None

    @property
    def p(self) -> Exponent:
        raw = self.args.p if self.args.p is not None else self.doc.get("p")
        if raw is None:
            raise UsageError("no exponent: pass --p or set 'p' in the input")
        try:
            if isinstance(raw, str) and raw != "inf":
                raw = Fraction(raw)
            elif not isinstance(raw, str):
                raw = parse_rational(raw)
            return Exponent.of(raw)
        except (ValueError, TypeError) as exc:
            raise UsageError(f"bad exponent {raw!r}: {exc}") from exc

    def function(self, key="function"):
        if key not in self.doc:
            raise UsageError(f"input needs '{key}'")
        return _function(self.doc[key], self.space)

    def functions(self):
        if "functions" in self.doc:
            items = [_function(o, self.space) for o in self.doc["functions"]]
        else:
            items = default_corpus(self.doc.get("domain", self.args.domain))
        if not items:
            raise UsageError("empty corpus")
        return items


def _num(x: float):
    return "diverges" if isinstance(x, float) and math.isinf(x) else x


# --------------------------------------------------------------------------
# commands return (report, ok)


def cmd_norm(ctx: Context):
    f, p = ctx.function(), ctx.p
    v = norm(f, p)
    return {"p": str(p), "value": _num(v), "in_lp": in_lp(f, p)}, True


def cmd_espace(ctx: Context):
    e = exponent_set(ctx.function())
    return {"interval": str(e), "exponent_set": e.to_json()}, True


def cmd_forms_check(ctx: Context):
    omega = forms.FormWeight(ctx.function("weight"), ctx.p)
    rep = forms.check_form_axioms(omega, seed=ctx.args.seed, tol=ctx.args.tol or 1e-12)
    return {"p": str(ctx.p), "passed": rep.passed, "axioms": rep.to_json()}, rep.passed


def _norm_cmd(fn):
    def run(ctx: Context):
        res = fn(ctx.function(), ctx.p, mode=ctx.args.mode, seed=ctx.args.seed)
        out = res.to_json()
        out["value"] = _num(out["value"])
        ok = True
        if ctx.args.tol is not None and res.gap is not None:
            ok = abs(res.gap) <= ctx.args.tol
        return {"p": str(ctx.p), **out}, ok

    return run


def cmd_gns(ctx: Context):
    p = ctx.p
    omega = forms.FormWeight(ctx.function("weight"), p)
    if not omega.is_discrete:
        f = ctx.function()
        d = gns.domain_check(omega, f)
        return {"in_domain": d.in_domain, "in_lp": d.in_lp, "bounded_on_support": d.bounded_on_support,
                "ratio_sup": _num(d.ratio_sup)}, True
    model = gns.build(ctx.space, omega)
    tol = ctx.args.tol or 1e-12
    rep = gns.representation_axioms_check(model, seed=ctx.args.seed, tol=tol)
    out = {"model": model.to_json(), "dimension": model.dimension, "passed": rep.passed,
           "worst_gap": max(rep.worst_form_gap, rep.worst_adjoint_gap)}
    if rep.failures:
        out["worst_witness"] = max(rep.failures, key=lambda x: x["gap"])
    if "function" in ctx.doc:
        f = ctx.function()
        out["representation"] = gns.represent(model, f).to_json()
        out["domain"] = {"in_domain": gns.domain_check(model, f).in_domain}
    return out, rep.passed


def cmd_gelfand(ctx: Context):
    p = ctx.p
    f = ctx.function()
    extra = [forms.FormWeight(_function(o, ctx.space), p) for o in ctx.doc.get("weights", [])]
    rep = gelfand.transform(f, gelfand.extremal_family(f, p, extra), p, seed=ctx.args.seed)
    tol = ctx.args.tol or 1e-6
    ok = rep.all_properties and rep.isometry_gap <= tol
    return rep.to_json(), ok


def cmd_gamma_table(ctx: Context):
    return {"rows": partialmul.gamma_table(ctx.functions(), ctx.p, seed=ctx.args.seed)}, True


def cmd_witness_search(ctx: Context):
    dom = SymbolicDomain(ctx.doc.get("domain", ctx.args.domain))
    grid = [Fraction(parse_rational(x)) if not isinstance(x, float) else Fraction(x) for x in ctx.doc["grid"]] \
        if "grid" in ctx.doc else list(suite.DEFAULT_GRID)
    p = ctx.p if (ctx.args.p or "p" in ctx.doc) else Exponent.of(2)
    return partialmul.distributivity_witness_search(dom, p, grid).to_json(), True


def cmd_suite(ctx: Context):
    results = suite.run_all(ctx.args.only or None)
    return {"criteria": [r.to_json() for r in results]}, all(r.passed for r in results)


HANDLERS = {
    "norm": cmd_norm,
    "espace": cmd_espace,
    "forms-check": cmd_forms_check,
    "alpha": _norm_cmd(seminorms.alpha_norm),
    "beta": _norm_cmd(seminorms.beta_norm),
    "gamma": _norm_cmd(seminorms.gamma_norm),
    "gns": cmd_gns,
    "gelfand": cmd_gelfand,
    "gamma-table": cmd_gamma_table,
    "witness-search": cmd_witness_search,
    "suite": cmd_suite,
}


def _default(o):
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, float) and not math.isfinite(o):
        return str(o)
    if hasattr(o, "tolist"):
        return o.tolist()
    if hasattr(o, "to_json"):
        return o.to_json()
    return str(o)


def render(report: dict, fmt: str) -> str:
    if fmt == "csv":
        rows = report.get("rows") or report.get("criteria")
        if rows is None:
            rows = [report]
        buf = io.StringIO()
        keys = sorted({k for r in rows for k in r})
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: json.dumps(v, default=_default, sort_keys=True) if isinstance(v, (dict, list)) else v
                        for k, v in r.items()})
        return buf.getvalue()
    return json.dumps(report, default=_default, sort_keys=True, indent=2) + "\n"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cqlp", description="Forms, norms and partial products on L^p spaces.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--input", help="JSON input document")
    ap.add_argument("--p", help="exponent: integer, p/q or inf")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--tol", type=float, default=None, help="tolerance override")
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    ap.add_argument("--out", help="write the report here instead of stdout")
    ap.add_argument("--mode", choices=("closed", "optimize"), default="closed")
    ap.add_argument("--domain", choices=[d.value for d in SymbolicDomain], default="half_line",
                    help="default corpus / search domain")
    ap.add_argument("--only", nargs="*", choices=list(suite.CRITERIA), help="suite: run a subset")
    return ap


def fixture_path(name: str = "x_pow_minus_third.json") -> str:
    return str(resources.files("cqlp").joinpath("data", name))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        ctx = Context(load_document(args.input), args)
        report, ok = HANDLERS[args.command](ctx)
    except UsageError as exc:
        print(f"cqlp: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"cqlp: cannot read input: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"cqlp: {exc}", file=sys.stderr)
        return 2
    text = render({"command": args.command, **report} if args.format == "json" else report, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
