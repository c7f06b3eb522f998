"""Command line interface: ``fewnomial <command> PROBLEM.json [options]``."""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction

import numpy as np

from . import framework as fw
from . import trinomials as tr
from .errors import (
    DegenerateToUnivariate,
    EmptyInterior,
    FewnomialError,
    NoSolutions,
    NonSquare,
    NotDecomposable,
    Unsupported,
)
from .io import Report, fixture_names, load_fixture, problem_from_dict, read_problem_document
from .oracle import OracleConfig, multistart_solve

EXIT_OK, EXIT_ERROR, EXIT_EMPTY, EXIT_USAGE = 0, 1, 2, 64
COMMANDS = ("classify", "solve", "bound", "certify", "oracle", "curve", "examples")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="fewnomial", description="Positive solutions of A (c ∘ x^B) = 0.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("problem", nargs="?", help="problem JSON (or the name of a bundled fixture)")
    ap.add_argument("--tol", type=float, default=1e-9)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--starts", type=int, default=4096)
    ap.add_argument("--format", choices=("json", "text", "csv"), default=None)
    ap.add_argument("--lambda", dest="lam", type=float, nargs="+", help="polytope weights")
    ap.add_argument("--tau", type=float, nargs="+", help="positive parameters along L-perp")
    ap.add_argument("--samples", type=int, default=512, help="points per curve component")
    ap.add_argument("-o", "--output", help="write the rendered report here instead of stdout")
    return ap


# -- helpers ---------------------------------------------------------------------------


def _sol(x, p):
    return {"x": [float(v) for v in x], "residual": fw.residual(p, x)}


def route(p: fw.ProblemInstance) -> str:
    """Which solver applies to an instance."""
    aux = p.aux
    if aux.d == 0:
        return "parametrization"
    if p.ell == 1 and aux.d == 1 and p.m == p.n_eq + 2:
        return "segment"
    if p.n == 2 and p.n_eq == 2 and p.partition.sizes == (3, 3):
        return "two_trinomial"
    if p.ell == 2 and aux.d == 1 and all(len(g.vertices) == 2 for g in p.geometry.classes):
        return "curve"
    return "none"


def _geometry(p):
    g = p.geometry
    return {
        "classes": [list(c.block) for c in g.classes],
        "rays": [[list(r) for r in c.rays] for c in g.classes],
        "vertices": [[list(v) for v in c.vertices] for c in g.classes],
        "Gp": [list(z) for z in p.aux.Gp.columns()],
    }


def cmd_classify(p, args):
    cl = fw.classify(p)
    conds = fw.dependency_conditions(p.aux, p.c)
    data = {
        "classification": cl.as_dict(),
        "geometry": _geometry(p),
        "conditions": [{"z": list(c.z), "log_target": c.log_target} for c in conds],
        "route": route(p),
    }
    return Report("classify", data)


def _sample_weights(par, rng):
    w = []
    for verts in par.vertices:
        d = rng.dirichlet(np.ones(len(verts)))
        w.extend(d[:-1].tolist())
    return w


def cmd_solve(p, args):
    r = route(p)
    if r == "parametrization":
        par = fw.parametrization(p)
        data = {"route": r, "n_lambda": par.n_weights, "n_tau": par.n_taus}
        try:
            xs, lams, taus = par.symbolic()
            data["closed_form"] = [str(e) for e in xs]
        except (TypeError, ValueError):
            pass
        if args.lam is not None or par.n_weights == 0:
            taus_v = args.tau if args.tau is not None else [1.0] * par.n_taus
            x = par.evaluate(args.lam or [], taus_v)
            data["solutions"] = [{"lambda": args.lam or [], "tau": taus_v, **_sol(x, p)}]
        else:
            rng = np.random.default_rng(args.seed)
            pts = []
            for _ in range(3):
                w = _sample_weights(par, rng)
                t = np.exp(rng.normal(size=par.n_taus)).tolist()
                pts.append({"lambda": w, "tau": t, **_sol(par.evaluate(w, t), p)})
            data["samples"] = pts
        return Report("solve", data)
    if r == "segment":
        sp = tr.segment_problem(p)
        sols = tr.segment_solve(sp)
        data = {"route": r, "count": len(sols), "bound": tr.segment_rule_of_signs(sp),
                "solutions": [{"t": s.t, "multiplicity": s.multiplicity, **_sol(s.x, p)} for s in sols]}
        return Report("solve", data, EXIT_OK if sols else EXIT_EMPTY)
    if r == "two_trinomial":
        try:
            tp = tr.two_trinomial_standardize(p)
        except DegenerateToUnivariate as e:
            raise Unsupported(f"{e}; solve the reduced univariate problem {e.reduced}") from None
        sols = tr.two_trinomial_solutions(tp)
        data = {"route": r, "count": len(sols), "bound": tr.two_trinomial_bound(tp),
                "solutions": [{"multiplicity": k, **_sol(x, p)} for x, k, _ in sols]}
        return Report("solve", data, EXIT_OK if sols else EXIT_EMPTY)
    if r == "curve":
        rep = cmd_curve(p, args)
        rep.command = "solve"
        return rep
    raise Unsupported("no exact solver for this structure; try the oracle command")


def cmd_bound(p, args):
    bounds = {}
    r = route(p)
    if r == "parametrization":
        bounds["dependency_zero"] = "solutions are parametrized by the coefficient polytope"
    if r == "segment":
        sp = tr.segment_problem(p)
        bounds["segment"] = tr.segment_rule_of_signs(sp)
        bounds["partial_sums"] = list(sp.partial_sums)
    if r == "two_trinomial":
        tp = tr.two_trinomial_standardize(p)
        bounds["two_trinomial"] = tr.two_trinomial_bound(tp)
        bounds["exponents"] = [list(pr) for pr in tp.pairs]
        bounds["wronskian_zeros"] = tr.w3_zero_count(tp)
    sizes = p.partition.sizes
    if p.n == 2 and p.n_eq == 2 and len(sizes) == 2 and 3 in sizes:
        t = sizes[1] if sizes[0] == 3 else sizes[0]
        if t >= 3:
            bounds["tnomial"] = tr.tnomial_bound(t)
    return Report("bound", {"route": r, "bounds": bounds})


def _cert(c: fw.Certificate):
    return {"holds": c.holds, "witness": list(c.witness) if c.witness else None, "reason": c.reason}


def cmd_certify(p, args):
    return Report("certify", {"uniqueness": _cert(fw.certify_uniqueness(p)),
                              "unique_existence": _cert(fw.certify_unique_existence(p))})


def cmd_oracle(p, args):
    cfg = OracleConfig(seed=args.seed, starts=args.starts)
    res = multistart_solve(p, cfg)
    sols = [{"x": x.tolist(), "residual": float(r)} for x, r in zip(res.solutions, res.residuals)]
    return Report("oracle", {"count": len(res), "seed": cfg.seed, "starts": cfg.starts, "solutions": sols},
                  EXIT_OK if len(res) else EXIT_EMPTY)


def cmd_curve(p, args):
    cd, comps = tr.curve_from_instance(p, args.samples)
    header = ["component", "param1", "param2"] + [f"x{i + 1}" for i in range(p.n)]
    rows = []
    for k, (comp, xs) in enumerate(comps):
        for (l1, l2), x in zip(comp.points, xs):
            rows.append([k, repr(float(l1)), repr(float(l2))] + [repr(float(v)) for v in x])
    resid = max((fw.residual(p, x) for _, xs in comps for x in xs), default=0.0)
    data = {
        "components": len(comps),
        "equation": {"params1": [cd.params1.a, cd.params1.b], "params2": [cd.params2.a, cd.params2.b], "K": cd.K},
        "kinds": [c.kind for c, _ in comps],
        "samples": [len(c) for c, _ in comps],
        "max_residual": resid,
    }
    return Report("curve", data, csv_rows=rows, csv_header=header)


HANDLERS = {
    "classify": cmd_classify,
    "solve": cmd_solve,
    "bound": cmd_bound,
    "certify": cmd_certify,
    "oracle": cmd_oracle,
    "curve": cmd_curve,
}


# -- bundled examples ----------------------------------------------------------------


def _close(a, b, tol=1e-8):
    return abs(float(a) - float(b)) <= tol * max(1.0, abs(float(b)))


def _check_fixture(doc) -> list[str]:
    """Mismatches between the fixture's expected block and fresh results."""
    errs = []
    if "table" in doc:
        tab = doc["table"]
        for i, t in enumerate(tab["t"]):
            row = tr.tnomial_table_row(t)
            want = (t, tab["bound"][i], tab["two_power"][i], Fraction(tab["cubic"][i]))
            if row != want:
                errs.append(f"t={t}: got {row}, expected {want}")
        return errs
    p = problem_from_dict(doc)
    run = doc.get("run", {})
    args = build_parser().parse_args(["solve", "-"])
    args.lam, args.tau = run.get("lambda"), run.get("tau")
    for cmd, exp in doc.get("expected", {}).items():
        rep = HANDLERS[cmd](p, args).data
        if cmd == "classify":
            got = rep["classification"]
            errs += [f"classify.{k}: {got[k]} != {v}" for k, v in exp.items() if got[k] != v]
        elif cmd == "solve":
            sols = rep.get("solutions") or rep.get("samples") or []
            if "count" in exp and rep.get("count") != exp["count"]:
                errs.append(f"solve.count: {rep.get('count')} != {exp['count']}")
            if "x" in exp:
                want = exp["x"] if isinstance(exp["x"][0], list) else [exp["x"]]
                got = sorted(s["x"] for s in sols)
                if len(got) != len(want) or not all(
                    _close(a, b) for g, w in zip(got, sorted(want)) for a, b in zip(g, w)
                ):
                    errs.append(f"solve.x: {got} != {want}")
            bad = [s["residual"] for s in sols if s["residual"] > 1e-8]
            if bad:
                errs.append(f"solve residuals {bad}")
        elif cmd == "bound":
            errs += [f"bound.{k}: {rep['bounds'].get(k)} != {v}" for k, v in exp.items() if rep["bounds"].get(k) != v]
        elif cmd == "certify":
            for k in ("uniqueness", "unique_existence"):
                if k in exp and rep[k]["holds"] != exp[k]:
                    errs.append(f"certify.{k}: {rep[k]['holds']} != {exp[k]}")
            if "witness" in exp and rep["uniqueness"]["witness"] != exp["witness"]:
                errs.append(f"certify.witness: {rep['uniqueness']['witness']} != {exp['witness']}")
        elif cmd == "oracle":
            if rep["count"] != exp["count"]:
                errs.append(f"oracle.count: {rep['count']} != {exp['count']}")
        elif cmd == "curve":
            if rep["components"] != exp["components"]:
                errs.append(f"curve.components: {rep['components']} != {exp['components']}")
    return errs


def cmd_examples(args):
    results = {}
    for name in fixture_names():
        errs = _check_fixture(load_fixture(name))
        results[name] = {"pass": not errs, "mismatches": errs}
    ok = all(r["pass"] for r in results.values())
    return Report("examples", {"fixtures": results}, EXIT_OK if ok else EXIT_ERROR)


# -- entry points ----------------------------------------------------------------------


def run_command(argv) -> tuple[int, Report]:
    try:
        args = build_parser().parse_args(list(argv))
    except UsageError as e:
        return EXIT_USAGE, Report("usage", {"error": str(e)}, EXIT_USAGE)
    return _run(args)


def _run(args) -> tuple[int, Report]:
    if args.command == "examples":
        rep = cmd_examples(args)
        return rep.status, rep
    if args.problem is None:
        return EXIT_USAGE, Report(args.command, {"error": "a problem file is required"}, EXIT_USAGE)
    try:
        doc, _ = read_problem_document(args.problem)
        p = problem_from_dict(doc)
        rep = HANDLERS[args.command](p, args)
    except (EmptyInterior, NoSolutions) as e:
        return EXIT_EMPTY, Report(args.command, {"error": str(e), "kind": type(e).__name__}, EXIT_EMPTY)
    except (FewnomialError, NonSquare, NotDecomposable, FileNotFoundError, ValueError) as e:
        return EXIT_ERROR, Report(args.command, {"error": str(e), "kind": type(e).__name__}, EXIT_ERROR)
    return rep.status, rep


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(f"fewnomial: {e}", file=sys.stderr)
        return EXIT_USAGE
    code, rep = _run(args)
    fmt = args.format or ("csv" if rep.command == "curve" and rep.csv_rows is not None else "text")
    if fmt == "csv" and rep.csv_rows is None:
        fmt = "text"
    text = rep.render(fmt)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
