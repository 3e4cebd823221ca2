"""Command-line front end.

Subcommands:

    analyze mu-max CLASS.json     obstruction loop + solvability + cross-check
    analyze eta CLASS.json --n K  obstruction sequence through level K
    groebner IDEAL.json           reduced Groebner basis of an ideal file
    center-check EQ.json          every applicable criterion + numeric opinion
    verify EQ.json                displacement profile and return-map check
    reproduce TARGET              known-good artifact suite (prop, 1-5, thmC, corC, thmD)

Reports are JSON with a stable schema and deterministic bytes for a given
input and options: dictionaries are emitted sorted, the cross-check sample
point is seeded from a hash of the input, and no wall-clock data goes into
the file (timings, when requested, print on stderr only).  The human summary
is rendered from the JSON dict, never computed separately.

Exit codes: 0 completed, 2 resource budget exhausted, 3 inconsistency
between a symbolic verdict and the numeric verifier (a bug signal, never
silently resolved).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .criteria import (
    CenterVerdict,
    corollaryB1_rule,
    invariant_line_certificate,
    theoremC_check,
    three_term_rule,
    two_term_rule,
)
from .groebner import Budget, BudgetExceeded, IdealBasis, buchberger
from .multiplicity import EtaProcess, MultiplicityReport, mu_max_loop
from .parampoly import MonomialOrder, ParamPoly, parse_poly
from .rationals import GaussianRational, RAT
from .reproduce import RUNNERS, reproduce
from .timealgebra import PeriodSpec, parse_coefficient
from .variational import EquationSpec, LinearTermError, ParamSpec, VariationalEngine
from .verifier import (
    NumericEquation,
    ProfileError,
    displacement_profile,
    estimate_multiplicity,
    verify_center,
)

SCHEMA_VERSION = 1


# -- input files -----------------------------------------------------------------


def load_equation(path: str) -> tuple[EquationSpec, dict]:
    """Equation/class JSON: degree, omega, coeffs (grammar strings), params."""
    raw = json.loads(Path(path).read_text())
    period = PeriodSpec.from_json(raw["omega"])
    coeffs = {int(k): parse_coefficient(src) for k, src in raw["coeffs"].items()}
    params = tuple(
        ParamSpec(p["name"], p.get("domain", "real")) for p in raw.get("params", [])
    )
    eq = EquationSpec(
        degree=int(raw["degree"]),
        period=period,
        coeffs=coeffs,
        params=params,
        label=raw.get("label", Path(path).stem),
        sources={int(k): src for k, src in raw["coeffs"].items()},
    )
    extras = {
        "var_order": raw.get("var_order"),
        "eliminate": tuple(raw.get("eliminate", ())),
        "raw": raw,
    }
    return eq, extras


def load_ideal(path: str) -> tuple[list[ParamPoly], MonomialOrder]:
    raw = json.loads(Path(path).read_text())
    gens = [parse_poly(s) for s in raw["generators"]]
    order = MonomialOrder(raw.get("order", "grevlex"), tuple(raw["variables"]))
    return gens, order


def _order_for(eq: EquationSpec, extras: dict, override_kind=None, override_vars=None) -> MonomialOrder:
    variables = override_vars or extras.get("var_order") or list(eq.param_names)
    kind = override_kind or "grevlex"
    return MonomialOrder(kind, tuple(variables))


# -- report plumbing ----------------------------------------------------------------


def canonical_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=1, ensure_ascii=True) + "\n"


def write_report(report: dict, outdir: str, stem: str, mode: str) -> Path:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{stem}.{mode}.json"
    path.write_text(canonical_json(report))
    return path


def _poly_str(p: ParamPoly | None, order: MonomialOrder | None = None):
    if p is None:
        return None
    return p.to_string(order)


def _basis_json(basis: IdealBasis | None):
    if basis is None:
        return None
    return {
        "order": {"kind": basis.order.kind, "variables": list(basis.order.variable_order)},
        "generators": basis.generator_strings(),
        "is_unit": basis.is_unit,
    }


def _complex_pair(z: complex):
    return [z.real, z.imag]


def multiplicity_report_json(rep: MultiplicityReport, input_echo: dict) -> dict:
    seq = rep.sequence
    eta_rows = []
    for e in seq.entries:
        eta_rows.append({
            "n": e.n,
            "kind": e.kind,
            "d_omega": _poly_str(e.d_omega),
            "reduced": _poly_str(e.reduced),
            "eta": _poly_str(e.eta, rep.order if set(e.eta.variables_used()) <= set(rep.order.variable_order) else None),
            "unit_pi_power": e.unit_pi_power,
            "unit_scalar": str(e.unit_scalar) if e.unit_scalar is not None else None,
            "substitution": (
                {"parameter": e.substitution[0], "solution": _poly_str(e.substitution[1])}
                if e.substitution else None
            ),
        })
    levels = [
        {"upto": n, "basis": _basis_json(b)} for n, b in sorted(seq.bases.items())
    ]
    return {
        "schema_version": SCHEMA_VERSION,
        "generator": f"polycenters {__version__}",
        "mode": "mu-max",
        "input": input_echo,
        "label": rep.label,
        "order": {"kind": rep.order.kind, "variables": list(rep.order.variable_order)},
        "setup_relations": [
            {"level": n, "parameter": p, "solution": _poly_str(s)}
            for (n, p, s) in seq.substitutions
        ],
        "eta": eta_rows,
        "levels": levels,
        "mu_max_complex": rep.mu_max_complex,
        "cap": rep.cap,
        "cap_reached": rep.cap_reached,
        "vmax_basis": _basis_json(rep.vmax_basis),
        "real": {
            "mu_max_real": rep.mu_max_real,
            "infeasibility_level": rep.real_infeasibility_level,
            "certificate": rep.real_certificate,
            "attainment": rep.real_attainment.to_dict() if rep.real_attainment else None,
        },
        "numeric_crosscheck": rep.numeric_crosscheck,
    }


def render_mu_max_summary(report: dict) -> str:
    lines = [f"class: {report['label']}"]
    lines.append(
        "order: %s over [%s]"
        % (report["order"]["kind"], ", ".join(report["order"]["variables"]))
    )
    for rel in report["setup_relations"]:
        lines.append(
            f"  setup relation (level {rel['level']}): {rel['parameter']} = {rel['solution']}"
        )
    for row in report["eta"]:
        if row["kind"] == "generator":
            unit = ""
            if row["unit_pi_power"] or (row["unit_scalar"] not in (None, "1")):
                unit = f"   [unit pi^{row['unit_pi_power']} * {row['unit_scalar']}]"
            lines.append(f"  eta_{row['n']} = {row['eta']}{unit}")
    if report["cap_reached"]:
        lines.append(
            f"no complex-center exclusion up to the cap {report['cap']} (cap reached)"
        )
    else:
        lines.append(f"mu_max(complex) = {report['mu_max_complex']}")
    real = report["real"]
    if real["mu_max_real"] is not None:
        att = real["attainment"] or {}
        lines.append(
            "mu_max(real) = %s  [%s%s]"
            % (
                real["mu_max_real"],
                (real["certificate"] or {}).get("kind", "?"),
                ", attained: " + att.get("real_status", "?") if att else "",
            )
        )
    cc = report.get("numeric_crosscheck")
    if cc:
        lines.append(
            "numeric cross-check: %s (worst relative error %.2e at the sampled point)"
            % (cc["verdict"], cc["worst_rel_err"])
        )
    return "\n".join(lines)


# -- numeric cross-check -------------------------------------------------------------


def _stable_seed(payload: str) -> int:
    return int.from_bytes(hashlib.sha256(payload.encode()).digest()[:8], "big")


def numeric_crosscheck(proc_eq: EquationSpec, rep: MultiplicityReport, seed_text: str,
                       rho: float = 1e-2, m: int = 64) -> dict:
    """Sample one rational parameter point and compare exact d_n against the profile."""
    rng = random.Random(_stable_seed(seed_text))
    free = proc_eq.param_names
    values = {
        name: GaussianRational(RAT(Fraction(rng.randint(-8, 8), rng.randint(1, 4))))
        for name in free
    }
    n_top = min(rep.mu_max_complex or 10, 10)
    engine = VariationalEngine(proc_eq)
    import mpmath
    pi_c = complex(mpmath.pi)
    exact = {}
    for n in range(2, n_top + 1):
        poly = engine.d(n).eval_at_omega(proc_eq.period)
        exact[n] = poly.eval_complex({**{k: v.to_complex() for k, v in values.items()}, "pi": pi_c})
    neq = NumericEquation.from_equation(proc_eq, values)
    prof = displacement_profile(neq, rho, m, n_top, check_radius=False)
    rows = []
    worst = 0.0
    for n in range(2, n_top + 1):
        est = prof.d_hat[n - 1]
        ex = exact[n]
        if abs(ex) > 1e-9:
            err = abs(est - ex) / abs(ex)
        else:
            err = abs(est - ex)
        worst = max(worst, err)
        rows.append({
            "n": n,
            "exact": _complex_pair(ex),
            "estimate": _complex_pair(est),
            "rel_err": err,
        })
    return {
        "point": {k: str(v.re) for k, v in values.items()},
        "rho": rho,
        "samples": m,
        "rows": rows,
        "worst_rel_err": worst,
        "verdict": "agree" if worst <= 1e-7 else "DISAGREE",
    }


# -- commands -------------------------------------------------------------------------


def cmd_mu_max(args) -> int:
    eq, extras = load_equation(args.path)
    order = _order_for(eq, extras, args.order, args.vars.split(",") if args.vars else None)
    budget = Budget(max_pairs=args.max_pairs)
    try:
        rep = mu_max_loop(
            eq,
            nmax_cap=args.cap,
            order=order,
            eliminate=extras["eliminate"],
            budget=budget,
            witness_seed=_stable_seed(json.dumps(extras["raw"], sort_keys=True)),
        )
    except BudgetExceeded as exc:
        report = {
            "schema_version": SCHEMA_VERSION,
            "mode": "mu-max",
            "input": extras["raw"],
            "status": "cap reached",
            "diagnostics": {k: v for k, v in exc.diagnostics.items() if k != "realcoef"},
        }
        path = write_report(report, args.out, Path(args.path).stem, "mu-max")
        print(f"budget exhausted; partial report at {path}")
        return 2
    if not args.skip_crosscheck:
        proc = EtaProcess(eq, order=order, eliminate=extras["eliminate"])
        proc.run_to(3 if rep.sequence.substitutions else 2)
        rep.numeric_crosscheck = numeric_crosscheck(
            proc.eq_current, rep, json.dumps(extras["raw"], sort_keys=True)
        )
    report = multiplicity_report_json(rep, extras["raw"])
    path = write_report(report, args.out, Path(args.path).stem, "mu-max")
    print(render_mu_max_summary(report))
    print(f"report: {path}")
    if rep.cap_reached:
        return 2
    cc = rep.numeric_crosscheck
    if cc and cc["verdict"] != "agree":
        print("INCONSISTENT: numeric cross-check disagrees with the exact values",
              file=sys.stderr)
        return 3
    return 0


def cmd_eta(args) -> int:
    eq, extras = load_equation(args.path)
    order = _order_for(eq, extras, args.order, args.vars.split(",") if args.vars else None)
    proc = EtaProcess(eq, order=order, eliminate=extras["eliminate"])
    proc.run_to(args.n)
    rep = MultiplicityReport(
        label=eq.label, order=proc.seq.order, sequence=proc.seq,
        mu_max_complex=None, vmax_basis=None,
        mu_max_real=None, real_attainment=None, real_infeasibility_level=None,
        real_certificate=None, cap=args.n, cap_reached=False,
    )
    report = multiplicity_report_json(rep, extras["raw"])
    report["mode"] = "eta"
    path = write_report(report, args.out, Path(args.path).stem, "eta")
    for row in report["eta"]:
        tag = {"zero": "= 0 (in the ideal)", "substitution": "setup relation",
               "generator": ""}[row["kind"]]
        print(f"eta_{row['n']}: {row['eta']} {tag}")
    print(f"report: {path}")
    return 0


def cmd_groebner(args) -> int:
    gens, order = load_ideal(args.path)
    if args.order or args.vars:
        order = MonomialOrder(
            args.order or order.kind,
            tuple(args.vars.split(",")) if args.vars else order.variable_order,
        )
    budget = Budget(max_pairs=args.max_pairs)
    try:
        basis = buchberger(gens, order, budget)
    except BudgetExceeded as exc:
        print("budget exhausted:", exc.diagnostics, file=sys.stderr)
        return 2
    report = {
        "schema_version": SCHEMA_VERSION,
        "generator": f"polycenters {__version__}",
        "mode": "groebner",
        "input": {"generators": [str(g) for g in gens]},
        "basis": _basis_json(basis),
    }
    path = write_report(report, args.out, Path(args.path).stem, "groebner")
    for s in basis.generator_strings():
        print(s)
    if basis.is_unit:
        print("unit ideal: the system has no complex solutions")
    print(f"report: {path}")
    return 0


def cmd_center_check(args) -> int:
    eq, extras = load_equation(args.path)
    verdicts: list[tuple[str, CenterVerdict]] = []
    for rule in (two_term_rule, corollaryB1_rule, three_term_rule):
        v = rule(eq)
        if v is not None:
            verdicts.append((v.criterion, v))
    # single nonlinear term: z^N + A_1 z
    idx = sorted(k for k, v in eq.coeffs.items() if not v.is_zero)
    nonlinear = [k for k in idx if k > 1]
    if nonlinear == [eq.degree]:
        lead = eq.coeff(eq.degree)
        try:
            is_monic = lead.constant_poly().is_constant and \
                lead.constant_poly().constant_value() == GaussianRational(1)
        except ValueError:
            is_monic = False
        if is_monic and eq.is_concrete():
            a1 = eq.coeff(1)
            try:
                v = theoremC_check(a1, eq.degree, eq.period)
                verdicts.append((v.criterion, v))
            except (LinearTermError, ValueError):
                pass
    if eq.is_concrete():
        hit = invariant_line_certificate(eq)
        if hit is not None:
            alpha, cert = hit
            verdicts.append((
                "invariant-line",
                CenterVerdict("not-center", None, "invariant-line", cert),
            ))
        # exact obstruction sequence when the linear term is representable
        try:
            proc = EtaProcess(eq, substitute_linear=False)
            mult = None
            for _ in range(2, args.nmax + 1):
                entry = proc.advance()
                if not entry.eta.is_zero:
                    mult = entry.n
                    break
            if mult is not None:
                verdicts.append((
                    "obstruction-sequence",
                    CenterVerdict(
                        "multiplicity-k", mult, "obstruction-sequence",
                        {"first_nonzero_level": mult, "value": str(entry.eta)},
                    ),
                ))
            else:
                verdicts.append((
                    "obstruction-sequence",
                    CenterVerdict(
                        "inconclusive", None, "obstruction-sequence",
                        {"note": f"d_n(omega) = 0 for n <= {args.nmax}"},
                    ),
                ))
        except LinearTermError:
            pass
    numeric = None
    if eq.is_concrete():
        neq = NumericEquation.from_equation(eq)
        try:
            prof = displacement_profile(neq, args.rho, args.samples, args.nmax)
            est = estimate_multiplicity(prof)
            ok, vrep = verify_center(neq, args.rho, 20)
            numeric = {
                "estimate": est if isinstance(est, str) else int(est),
                "profile": [_complex_pair(z) for z in prof.d_hat],
                "noise_floor": prof.noise_floor,
                "verify_center": ok,
                "max_deviation": vrep.get("max_deviation"),
            }
        except ProfileError as exc:
            numeric = {"error": str(exc)}
    # aggregate: exact verdicts first; contradictions are a bug signal
    centers = [v for _n, v in verdicts if v.status == "center-certified"]
    noncenters = [v for _n, v in verdicts
                  if v.status in ("not-center", "multiplicity-k")]
    aggregate: dict = {"status": "inconclusive"}
    inconsistent = False
    if centers and noncenters:
        inconsistent = True
        aggregate = {"status": "INCONSISTENT"}
    elif centers:
        aggregate = {"status": "center-certified", "by": centers[0].criterion}
        if numeric and isinstance(numeric.get("estimate"), int):
            inconsistent = True
            aggregate = {"status": "INCONSISTENT"}
    elif noncenters:
        mults = {v.multiplicity for v in noncenters if v.multiplicity}
        if len(mults) > 1:
            inconsistent = True
            aggregate = {"status": "INCONSISTENT", "multiplicities": sorted(mults)}
        else:
            aggregate = {
                "status": "not-center",
                "multiplicity": (sorted(mults)[0] if mults else None),
                "by": noncenters[0].criterion,
            }
            if numeric and isinstance(numeric.get("estimate"), int) and mults:
                if numeric["estimate"] != sorted(mults)[0]:
                    inconsistent = True
                    aggregate["status"] = "INCONSISTENT"
    elif numeric and isinstance(numeric.get("estimate"), int):
        aggregate = {"status": "not-center", "multiplicity": numeric["estimate"],
                     "by": "numeric-profile"}
    elif numeric and isinstance(numeric.get("estimate"), str):
        aggregate = {"status": "center-consistent-numeric", "by": "numeric-profile"}
    report = {
        "schema_version": SCHEMA_VERSION,
        "generator": f"polycenters {__version__}",
        "mode": "center-check",
        "input": extras["raw"],
        "verdicts": [
            {"criterion": name, **v.to_dict()} for name, v in verdicts
        ],
        "numeric": numeric,
        "aggregate": aggregate,
        "consistent": not inconsistent,
    }
    path = write_report(report, args.out, Path(args.path).stem, "center-check")
    print(f"aggregate: {aggregate['status']}"
          + (f" (multiplicity {aggregate.get('multiplicity')})" if aggregate.get("multiplicity") else ""))
    for row in report["verdicts"]:
        print(f"  {row['criterion']}: {row['status']}"
              + (f" (multiplicity {row['multiplicity']})" if row.get("multiplicity") else ""))
    if numeric:
        print(f"  numeric: estimate = {numeric.get('estimate')}, "
              f"verify_center = {numeric.get('verify_center')}")
    print(f"report: {path}")
    return 3 if inconsistent else 0


def cmd_verify(args) -> int:
    eq, extras = load_equation(args.path)
    if not eq.is_concrete():
        print("verify needs a concrete (parameter-free) equation", file=sys.stderr)
        return 1
    neq = NumericEquation.from_equation(eq)
    try:
        prof = displacement_profile(neq, args.rho, args.samples, args.nmax)
    except ProfileError as exc:
        print(f"profile failed: {exc}", file=sys.stderr)
        return 1
    est = estimate_multiplicity(prof)
    ok, vrep = verify_center(neq, args.rho, 20)
    report = {
        "schema_version": SCHEMA_VERSION,
        "generator": f"polycenters {__version__}",
        "mode": "verify",
        "input": extras["raw"],
        "rho": args.rho,
        "samples": args.samples,
        "profile": [
            {
                "n": n,
                "estimate": _complex_pair(prof.d_hat[n - 1]),
                "noise_floor": prof.noise_floor[n - 1],
                "significant": prof.significant(n),
            }
            for n in range(1, prof.n_max + 1)
        ],
        "converged": prof.converged,
        "multiplicity_estimate": est if isinstance(est, str) else int(est),
        "verify_center": {"returned": ok, **{k: v for k, v in vrep.items()}},
    }
    path = write_report(report, args.out, Path(args.path).stem, "verify")
    if args.csv:
        import csv as _csv

        with open(args.csv, "w", newline="") as fh:
            w = _csv.writer(fh)
            w.writerow(["sample", "re_c", "im_c", "re_q", "im_q"])
            import cmath
            for s, qv in enumerate(prof.q_samples or []):
                c = args.rho * cmath.exp(2j * cmath.pi * s / args.samples)
                w.writerow([s, c.real, c.imag, qv.real, qv.imag])
        print(f"samples: {args.csv}")
    print(f"multiplicity estimate: {est}")
    print(f"verify_center: {ok} (max deviation {vrep.get('max_deviation', float('nan')):.3e})")
    print(f"report: {path}")
    return 0


def cmd_reproduce(args) -> int:
    rows = reproduce(args.target)
    report = {
        "schema_version": SCHEMA_VERSION,
        "generator": f"polycenters {__version__}",
        "mode": "reproduce",
        "target": args.target,
        "rows": rows,
        "ok": all(r["status"] == "PASS" for r in rows),
    }
    path = write_report(report, args.out, f"reproduce-{args.target}", "reproduce")
    width = max(len(r["artifact"]) for r in rows)
    for r in rows:
        print(f"{r['status']:4s}  {r['artifact']:{width}s}  {r['detail']}")
    print(f"report: {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="polycenters",
        description="Multiplicity and center analysis for periodic scalar polynomial ODEs.",
    )
    ap.add_argument("--out", default="reports", help="directory for JSON reports")
    sub = ap.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="symbolic obstruction analyses")
    asub = analyze.add_subparsers(dest="analysis", required=True)

    mm = asub.add_parser("mu-max", help="maximum-multiplicity loop for a class file")
    mm.add_argument("path")
    mm.add_argument("--cap", type=int, default=12)
    mm.add_argument("--order", choices=["lex", "grevlex"], default=None)
    mm.add_argument("--vars", default=None, help="comma-separated variable order")
    mm.add_argument("--max-pairs", type=int, default=2_000_000)
    mm.add_argument("--skip-crosscheck", action="store_true")
    mm.set_defaults(func=cmd_mu_max)

    eta = asub.add_parser("eta", help="obstruction sequence through level K")
    eta.add_argument("path")
    eta.add_argument("--n", type=int, required=True)
    eta.add_argument("--order", choices=["lex", "grevlex"], default=None)
    eta.add_argument("--vars", default=None)
    eta.set_defaults(func=cmd_eta)

    gb = sub.add_parser("groebner", help="reduced Groebner basis of an ideal file")
    gb.add_argument("path")
    gb.add_argument("--order", choices=["lex", "grevlex"], default=None)
    gb.add_argument("--vars", default=None)
    gb.add_argument("--max-pairs", type=int, default=2_000_000)
    gb.set_defaults(func=cmd_groebner)

    cc = sub.add_parser("center-check", help="run every applicable center criterion")
    cc.add_argument("path")
    cc.add_argument("--rho", type=float, default=1e-2)
    cc.add_argument("--samples", type=int, default=64)
    cc.add_argument("--nmax", type=int, default=12)
    cc.set_defaults(func=cmd_center_check)

    vf = sub.add_parser("verify", help="numeric displacement-map verification")
    vf.add_argument("path")
    vf.add_argument("--rho", type=float, default=1e-2)
    vf.add_argument("--samples", type=int, default=64)
    vf.add_argument("--nmax", type=int, default=12)
    vf.add_argument("--csv", default=None, help="write displacement samples as CSV")
    vf.set_defaults(func=cmd_verify)

    rp = sub.add_parser("reproduce", help="recompute known-good artifacts")
    rp.add_argument("target", choices=sorted(RUNNERS))
    rp.set_defaults(func=cmd_reproduce)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (FileNotFoundError, json.JSONDecodeError, KeyError, ValueError, LinearTermError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
