"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 a mathematical verification failed,
3 an enumeration/recognition/factoring budget ran out, 4 precision or pole trouble.
"""

import argparse
import csv
import io
import json
import os
import random
import sys
from fractions import Fraction

import mpmath

from . import drmonoid as drm
from . import quadfield
from . import mvector as mv
from .errors import BudgetExhausted, PoleError, PrecisionError
from .quadfield import (QuadField, class_group, parse_ideal, ray_class_group, reduced_forms)
from .recognize import RecognitionConfig
from .symplectic import (SiegelPoint, check_riemann_conditions, cm_point,
                         zeta5_data)
from .theta import TorsionIndex, classical_g1, theta, theta_null_vector, weber_variant

SCHEMA_VERSION = 1
EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_BUDGET, EXIT_PRECISION = 0, 1, 2, 3, 4

OUTPUT_KEYS = {
    "field-info": ["d", "disc", "omega", "units", "class_number", "class_group"],
    "classgroup": ["divisors", "generators", "forms"],
    "rayclassgroup": ["conductor", "divisors", "generators", "order"],
    "drmonoid": ["conductor", "elements", "mul", "orbit_labels", "units", "size", "target_size"],
    "theta": ["value", "g", "k", "prec"],
    "classical": ["kind", "value", "prec"],
    "mvector-build": ["conductor", "components", "flags", "spec"],
    "mvector-verify": ["spec", "degree_audit", "equivariance", "frobenius", "psi", "crosscheck", "pass"],
    "simn-compare": ["N", "d", "size", "analytic_blocks", "simN_blocks", "equal", "asserted"],
    "duality-check": ["conductor", "congruences", "families", "pass"],
    "cmpoint": ["E", "delta", "tau", "residual", "riemann", "theta_null", "pass"],
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# parsing helpers


def _num(t):
    if "/" in t:
        q = Fraction(t)
        return mpmath.mpf(q.numerator) / q.denominator
    return mpmath.mpf(t)


def parse_complex(text):
    """'2i', '0.5+1.5i', '-i', '3', '1/2+i' -> mpc at the current precision."""
    s = text.replace(" ", "").replace("j", "i")
    if not s:
        raise UsageError("empty complex number")
    if not s.endswith("i"):
        return mpmath.mpc(_num(s))
    body = s[:-1]
    cut = 0
    for k in range(len(body) - 1, 0, -1):
        if body[k] in "+-" and body[k - 1] not in "eE":
            cut = k
            break
    re_part, im_part = body[:cut], body[cut:]
    im = {"": 1, "+": 1, "-": -1}.get(im_part)
    im = mpmath.mpf(im) if im is not None else _num(im_part)
    return mpmath.mpc(_num(re_part) if re_part else 0, im)


def parse_matrix(text):
    rows = [r for r in text.split(";") if r.strip()]
    return [[parse_complex(x) for x in r.split(",")] for r in rows]


def parse_fracs(text):
    return [Fraction(x) for x in text.split(",") if x.strip()]


def _cx(z, prec):
    digits = max(10, int(prec * 0.30103))
    return [mpmath.nstr(mpmath.re(z), digits), mpmath.nstr(mpmath.im(z), digits)]


def _field(args):
    try:
        return QuadField(args.d)
    except ValueError as e:
        raise UsageError(str(e))


def _ideal(K, text):
    try:
        return parse_ideal(K, text)
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(str(e))


def _spec(args):
    a = parse_fracs(args.a) if args.a else [Fraction(0), Fraction(0)]
    if len(a) != 2:
        raise UsageError("--a takes two fractions a1,a2")
    ti = TorsionIndex.of(a[0], a[1])
    N = args.N or ti.N
    if args.kind == "theta":
        return mv.theta_ratio_spec(ti, Fraction(args.k), Fraction(args.l), args.delta, N)
    return mv.ModularVectorSpec(args.kind, ti, N)


def _recog(args):
    return RecognitionConfig(maxdeg=args.maxdeg, height_bits=args.height_bits, prec=args.prec)


def _table_at(K, N):
    return drm.cached_dr_monoid(K, drm.QuadIdeal.from_int(K, N))


# ---------------------------------------------------------------------------
# commands; each returns (payload, ok, csv_rows or None)


def cmd_field_info(args):
    K = _field(args)
    G = class_group(K)
    return {"d": K.d, "disc": K.disc, "omega": "(1+sqrt(-%d))/2" % K.d if K.t else "sqrt(-%d)" % K.d,
            "units": K.unit_count, "class_number": G.order, "class_group": G.to_json()}, True, None


def cmd_classgroup(args):
    K = _field(args)
    G = class_group(K)
    out = G.to_json()
    out["forms"] = [list(f) for f in reduced_forms(K.disc)]
    return out, True, [["divisor"]] + [[e] for e in out["divisors"]]


def cmd_rayclassgroup(args):
    K = _field(args)
    f = _ideal(K, args.conductor)
    G = ray_class_group(K, f)
    out = G.to_json()
    out.update({"conductor": f.to_json(), "order": G.order})
    return out, True, [["divisor"]] + [[e] for e in out["divisors"]]


def cmd_drmonoid(args):
    K = _field(args)
    f = _ideal(K, args.conductor)
    T = drm.build_dr_monoid(K, f, verify=args.verify)
    out = T.to_json()
    target = drm.dr_target_size(K, f)
    out.update({"size": len(T), "target_size": target})
    ok = drm.check_monoid_axioms(T) and len(T) == target
    rows = [["index", "rep", "orbit", "unit"]]
    for i in range(len(T)):
        rows.append([i, T.rep(i).literal(), T.orbit_label[i].literal(), int(i in T.units)])
    return out, ok, rows


def cmd_theta(args):
    with mpmath.workprec(args.prec + 40):
        if args.g == 1:
            tau = [[parse_complex(args.tau)]]
        else:
            tau = parse_matrix(args.tau)
        if len(tau) != args.g or any(len(r) != args.g for r in tau):
            raise UsageError(f"--tau must be a {args.g}x{args.g} matrix (rows ';', entries ',')")
        k = parse_fracs(args.k) if args.k else [Fraction(0)] * args.g
        u = [parse_complex(x) for x in args.u.split(",")] if args.u else [0] * args.g
        if len(k) != args.g or len(u) != args.g:
            raise UsageError("--k and --u need g entries")
        pt = SiegelPoint(mpmath.matrix(tau))
        if not pt.check():
            raise UsageError("tau is not in the Siegel upper half space")
        val = theta(k, u, pt, args.prec)
    return {"value": val.to_json(), "g": args.g, "k": [str(x) for x in k], "prec": args.prec}, True, \
        [["re", "im", "err2exp"], [val.to_json()["re"], val.to_json()["im"], val.to_json()["err2exp"]]]


def cmd_classical(args):
    K = QuadField(args.d) if args.d else None
    variant = args.variant or (weber_variant(K.d) if K else "generic")
    with mpmath.workprec(args.prec + 40):
        tau = parse_complex(args.tau)
        z = parse_complex(args.z) if args.z else None
        a = parse_fracs(args.a) if args.a else None
        if args.kind in ("weierstrass_p", "fricke", "weber") and z is None and a is None:
            raise UsageError(f"{args.kind} needs --z or --a")
        val = classical_g1(args.kind, args.prec, tau=tau, z=z, a=a, variant=variant)
    return {"kind": args.kind, "value": val.to_json(), "prec": args.prec}, True, \
        [["re", "im", "err2exp"], list(val.to_json().values())]


def cmd_mvector_build(args):
    K = _field(args)
    spec = _spec(args)
    T = _table_at(K, spec.N)
    v = mv.build_modular_vector(spec, T, args.prec, _recog(args), jobs=args.jobs)
    return v.to_json(), True, v.csv_rows()


def cmd_mvector_verify(args):
    K = _field(args)
    spec = _spec(args)
    T = _table_at(K, spec.N)
    v = mv.build_modular_vector(spec, T, args.prec, _recog(args), jobs=args.jobs)
    audit = mv.degree_audit(v)
    eqv = mv.verify_equivariance(v)
    frob = []
    for p in args.prime or []:
        frob.append(mv.frobenius_congruence_check(v, _ideal(K, p), modulus=args.modulus))
    psi = [mv.psi_functoriality_check(v, _ideal(K, p)) for p in args.prime or []]
    model = drm.AdelicModel(T, spec.N)
    rng = random.Random(args.seed)
    cross = [mv.crosscheck_theta_path(spec, x, model, args.prec)
             for x in mv.random_adelic_elements(model, args.samples, rng)]
    ok = (all(r["ok"] for r in audit) and all(r["pass"] for r in eqv)
          and all(r["pass"] for r in frob) and all(r.get("pass", True) for r in psi)
          and all(r["pass"] for r in cross) and "representative-dependent" not in v.flags)
    out = {"spec": spec.to_json(), "degree_audit": audit, "equivariance": eqv, "frobenius": frob,
           "psi": psi, "crosscheck": cross, "pass": ok}
    rows = [["check", "item", "pass"]]
    rows += [["degree", r["class"], r["ok"]] for r in audit]
    rows += [["equivariance", r["label"], r["pass"]] for r in eqv]
    rows += [["frobenius", r["P"], r["pass"]] for r in frob]
    rows += [["crosscheck", i, r["pass"]] for i, r in enumerate(cross)]
    return out, ok, rows


def cmd_simn_compare(args):
    K = _field(args)
    N = args.N or 2
    T = _table_at(K, N)
    model = drm.AdelicModel(T, N)
    specs = mv.default_family(K, N, theta_ratios=not args.no_theta)
    vs = [mv.build_modular_vector(s, T, args.prec, _recog(args), jobs=args.jobs,
                                  recognize_values=(s.kind != "theta"), model=model) for s in specs]
    rep = mv.compare_with_simN(vs, N, T, model)
    # equality is asserted only for Q(i); other fields are reported
    rep["asserted"] = K.d == 1
    ok = rep["equal"] or not rep["asserted"]
    rows = [["index", "analytic_block", "simN_block"]]
    ab = {i: b for b, blk in enumerate(rep["analytic_blocks"]) for i in blk}
    sb = {i: b for b, blk in enumerate(rep["simN_blocks"]) for i in blk}
    rows += [[i, ab[i], sb[i]] for i in range(len(T))]
    return rep, ok, rows


def cmd_duality_check(args):
    K = _field(args)
    f = _ideal(K, args.conductor)
    T = drm.cached_dr_monoid(K, f)
    rng = random.Random(args.seed)
    congs = []
    for _ in range(args.count):
        Q = drm.random_congruence(T, rng)
        back = drm.vector_congruence(T, drm.functions_through(Q))
        congs.append({"blocks": Q.blocks(), "is_congruence": Q.is_congruence(), "round_trip": back == Q})
    fams = []
    for _ in range(args.count):
        E = [[rng.randrange(3) for _ in range(len(T))] for _ in range(rng.randint(1, 2))]
        Q = drm.vector_congruence(T, E)
        basis = drm.functions_through(Q)
        rank, span = drm.lambda_algebra_rank(T, E)
        spans = (len(drm._row_basis(basis)) == rank and all(drm.in_span(span, b) for b in basis)
                 and all(drm.in_span(basis, xi) for xi in E))
        fams.append({"family": E, "blocks": Q.blocks(), "spans": spans})
    ok = all(c["round_trip"] and c["is_congruence"] for c in congs) and all(x["spans"] for x in fams)
    rows = [["kind", "index", "pass"]]
    rows += [["congruence", i, c["round_trip"]] for i, c in enumerate(congs)]
    rows += [["family", i, x["spans"]] for i, x in enumerate(fams)]
    return {"conductor": f.to_json(), "congruences": congs, "families": fams, "pass": ok}, ok, rows


def cmd_cmpoint(args):
    prec = args.prec
    res = cm_point(zeta5_data(prec))
    data = zeta5_data(prec)
    jres, mineig, direct = check_riemann_conditions(data, res["E"])
    delta = res["delta"]
    pt = res["point"]
    with mpmath.workprec(prec + 40):
        tn = theta_null_vector(pt, delta, prec)
        hi = cm_point(zeta5_data(2 * prec))
        tn2 = theta_null_vector(hi["point"], delta, 2 * prec)
        drift = max(abs(a.value - b.value) for a, b in zip(tn, tn2))
        errs = max(a.err for a in tn)
        finite = all(mpmath.isfinite(a.value) for a in tn) and any(abs(a.value) > errs for a in tn)
    tol = mpmath.mpf(2) ** (-prec // 2)
    riemann_ok = jres < tol and mineig > 0 and direct < tol
    stable = drift <= max(errs, mpmath.mpf(2) ** (-prec + 16))
    ok = riemann_ok and res["residual"] < mpmath.mpf(2) ** (-prec + 16) and finite and stable
    g = pt.g
    out = {
        "E": res["E"], "U": res["U"], "delta": delta.to_json(), "orientation": res["orientation"],
        "tau": [[_cx(pt.tau[i, j], prec) for j in range(g)] for i in range(g)],
        "residual": mpmath.nstr(res["residual"], 5),
        "riemann": {"j_residual": mpmath.nstr(jres, 5), "min_eigenvalue": mpmath.nstr(mineig, 10),
                    "trace_residual": mpmath.nstr(direct, 5), "pass": riemann_ok},
        "theta_null": {"values": [a.to_json() for a in tn], "finite": finite,
                       "doubling_drift": mpmath.nstr(drift, 5), "stable": stable},
        "pass": ok,
    }
    rows = [["k", "re", "im", "err2exp"]]
    for k, a in zip(delta.characteristics(), tn):
        j = a.to_json()
        rows.append([" ".join(str(x) for x in k), j["re"], j["im"], j["err2exp"]])
    return out, ok, rows


COMMANDS = {
    "field-info": cmd_field_info, "classgroup": cmd_classgroup, "rayclassgroup": cmd_rayclassgroup,
    "drmonoid": cmd_drmonoid, "theta": cmd_theta, "classical": cmd_classical,
    "mvector-build": cmd_mvector_build, "mvector-verify": cmd_mvector_verify,
    "simn-compare": cmd_simn_compare, "duality-check": cmd_duality_check, "cmpoint": cmd_cmpoint,
}


def schema_for(command):
    props = {k: {} for k in OUTPUT_KEYS[command]}
    props["schema"] = {"type": "string", "const": f"drwitt.{command}/{SCHEMA_VERSION}"}
    return {"$schema": "http://json-schema.org/draft-07/schema#", "title": command, "type": "object",
            "required": ["schema"] + OUTPUT_KEYS[command], "properties": props}


# ---------------------------------------------------------------------------
# argument parsing


def _default_prec():
    env = os.environ.get("DRWITT_PREC")
    if env is None:
        return 256
    try:
        return int(env)
    except ValueError:
        return -1


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prec", type=int, default=_default_prec(),
                        help="working precision in bits (default 256 or $DRWITT_PREC)")
    common.add_argument("--maxdeg", type=int, default=24, help="recognition degree budget")
    common.add_argument("--height-bits", type=int, default=128, help="recognition height budget")
    common.add_argument("--factor-bound", type=int, default=10**6,
                        help="trial-division bound for factoring norms")
    common.add_argument("--jobs", type=int, default=1, help="parallel component evaluations")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--schema", action="store_true", help="print the output JSON schema and exit")

    p = _Parser(prog="drwitt", description="Deligne-Ribet monoids, theta functions and modular vectors.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def field_cmd(name, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("-d", type=int, default=1, help="K = Q(sqrt(-d))")
        return sp

    field_cmd("field-info", "discriminant, units and class number")
    field_cmd("classgroup", "class group via reduced forms")
    for name in ("rayclassgroup", "drmonoid", "duality-check"):
        sp = field_cmd(name, {"rayclassgroup": "ray class group C_f", "drmonoid": "finite DR monoid table",
                              "duality-check": "finite galois correspondence round trips"}[name])
        sp.add_argument("-f", "--conductor", default="(1)", help="ideal literal '(g)' or '[a,b,c]'")
        if name == "drmonoid":
            sp.add_argument("--verify", action="store_true", help="check merges against the definition")
        if name == "duality-check":
            sp.add_argument("--count", type=int, default=5)
            sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("theta", parents=[common], help="Siegel theta with characteristic")
    sp.add_argument("-g", type=int, default=1)
    sp.add_argument("--tau", required=True, help="complex number, or rows ';' of entries ','")
    sp.add_argument("--k", help="characteristic, comma separated fractions")
    sp.add_argument("--u", help="argument, comma separated complex numbers")

    sp = sub.add_parser("classical", parents=[common], help="g=1 functions: p, g2, g3, j, fricke, weber")
    sp.add_argument("--kind", required=True,
                    choices=["weierstrass_p", "g2", "g3", "j", "fricke", "weber"])
    sp.add_argument("--tau", required=True)
    sp.add_argument("--z")
    sp.add_argument("--a", help="torsion index a1,a2 (point a1*tau + a2)")
    sp.add_argument("-d", type=int, help="field for the Weber variant")
    sp.add_argument("--variant", choices=["generic", "d1", "d3"])

    for name in ("mvector-build", "mvector-verify"):
        sp = field_cmd(name, "build a modular vector" if name == "mvector-build"
                       else "build and verify a modular vector")
        sp.add_argument("-N", type=int, help="level (default: denominator of a)")
        sp.add_argument("--kind", choices=list(mv.KINDS), default="weber")
        sp.add_argument("--a", help="torsion index a1,a2 with a = a1*omega + a2")
        sp.add_argument("--k", default="1/4", help="theta kind: numerator characteristic")
        sp.add_argument("--l", default="0", help="theta kind: denominator characteristic")
        sp.add_argument("--delta", type=int, default=4, help="theta kind: type [delta]")
        if name == "mvector-verify":
            sp.add_argument("--prime", action="append", help="prime ideal for the Frobenius check (repeatable)")
            sp.add_argument("--modulus", choices=["norm", "prime"], default="norm")
            sp.add_argument("--samples", type=int, default=4, help="theta-path crosscheck samples")
            sp.add_argument("--seed", type=int, default=0)

    sp = field_cmd("simn-compare", "analytic D_Xi versus adelic ~_N")
    sp.add_argument("-N", type=int, default=2)
    sp.add_argument("--no-theta", action="store_true", help="only Weber/j vectors in the family")

    sp = sub.add_parser("cmpoint", parents=[common], help="genus-2 CM point for Q(zeta_5)")
    return p


def _emit(args, payload, rows):
    if args.format == "csv":
        if rows is None:
            raise UsageError("this command has no CSV form")
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        text = buf.getvalue()
    else:
        payload = dict(payload)
        payload["schema"] = f"drwitt.{args.command}/{SCHEMA_VERSION}"
        text = json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.schema:
        sys.stdout.write(json.dumps(schema_for(args.command), indent=2, sort_keys=True) + "\n")
        return EXIT_OK
    try:
        if args.prec < 32:
            raise UsageError("--prec must be an integer >= 32 (check DRWITT_PREC)")
        if args.jobs < 1 or args.maxdeg < 1 or args.factor_bound < 2:
            raise UsageError("numeric budgets must be positive")
        quadfield.DEFAULT_FACTOR_BOUND = args.factor_bound
        payload, ok, rows = COMMANDS[args.command](args)
        _emit(args, payload, rows)
    except UsageError as e:
        print(f"drwitt: {e}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExhausted as e:
        print(f"drwitt: budget exhausted: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (PrecisionError, PoleError) as e:
        print(f"drwitt: {e}", file=sys.stderr)
        return EXIT_PRECISION
    return EXIT_OK if ok else EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
