"""Command-line front end and corpus harness.

Runs the classify -> (mod 3) -> synthesize pipeline with the precision retry
ladder, and emits either a human-readable narrative or a structured JSON
report.  Exit codes: 0 success, 2 out-of-scope case (multiplicative, tame,
non-abelian, or the p = 2 C6 tame factor), 3 precision exhausted, 4 invalid
input.
"""

import argparse
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .padic import PadicError, PrecisionLoss, make_unramified
from .curve import SingularModel, WeierstrassModel
from .classify import TowerBudgetExceeded
from . import galrep

SCHEMA_VERSION = "1"
DEFAULT_PRECISION = 60
RETRY_FACTORS = (1, 2, 4, 8)

EXIT_OK = 0
EXIT_OUT_OF_SCOPE = 2
EXIT_PRECISION = 3
EXIT_INVALID = 4


class InvalidInput(Exception):
    pass


@dataclass
class JobSpec:
    p: int
    n: int
    coefficients: list  # Fractions or (int, dict) generator polynomials
    precision: int = DEFAULT_PRECISION
    fmt: str = "text"
    verify: bool = True
    ell: str = "any prime l != p"

    def validate(self):
        if self.p not in (2, 3):
            raise InvalidInput("p must be 2 or 3")
        if self.n < 1:
            raise InvalidInput("n must be >= 1")
        if len(self.coefficients) != 5:
            raise InvalidInput("exactly five coefficients a1,a2,a3,a4,a6 are required")


def parse_coefficient(tok):
    """An exact rational, or an integer polynomial in the residue generator w.

    Examples: '4', '-1/2', 'w', '6*w', '1+w', '2+3*w^2'.
    """
    tok = tok.strip()
    if "w" not in tok:
        try:
            return Fraction(tok)
        except (ValueError, ZeroDivisionError) as e:
            raise InvalidInput(f"bad coefficient {tok!r}: {e}")
    # polynomial in w with integer coefficients
    terms = tok.replace("-", "+-").split("+")
    poly = {}
    for term in terms:
        term = term.strip()
        if not term:
            continue
        if "w" not in term:
            try:
                poly[0] = poly.get(0, 0) + int(term)
            except ValueError:
                raise InvalidInput(f"bad coefficient term {term!r}")
            continue
        head, _, tail = term.partition("w")
        head = head.strip().rstrip("*").strip()
        coef = -1 if head == "-" else int(head) if head else 1
        exp = 1
        if tail.startswith("^"):
            exp = int(tail[1:])
        poly[exp] = poly.get(exp, 0) + coef
    return ("wpoly", poly)


def coefficient_to_elem(K, c):
    if isinstance(c, tuple) and c[0] == "wpoly":
        x = K.zero()
        g = K.gen()
        for exp, a in c[1].items():
            x = x + K.from_int(a) * g ** exp
        return x
    return None  # rational: handled by the model constructor


def coefficient_str(c):
    if isinstance(c, tuple) and c[0] == "wpoly":
        terms = []
        for exp in sorted(c[1]):
            a = c[1][exp]
            if a == 0:
                continue
            if exp == 0:
                terms.append(str(a))
            else:
                wpart = "w" if exp == 1 else f"w^{exp}"
                terms.append(f"{a}*{wpart}" if a != 1 else wpart)
        return "+".join(terms).replace("+-", "-") or "0"
    return str(c)


def build_model(K, coefficients):
    if any(isinstance(c, tuple) for c in coefficients):
        elems = []
        for c in coefficients:
            e = coefficient_to_elem(K, c)
            if e is None:
                e = K.from_rational(Fraction(c))
            elems.append(e)
        return WeierstrassModel(K, *elems)
    return WeierstrassModel.from_rationals(K, coefficients)


def run(job):
    """Execute one JobSpec; returns (report_dict, exit_code)."""
    job.validate()
    t_start = time.time()
    last_exc = None
    for factor in RETRY_FACTORS:
        N = job.precision * factor
        try:
            K = make_unramified(job.p, job.n, N)
            E = build_model(K, job.coefficients)
            result = galrep.pipeline(E, K)
            report = assemble_report(job, result, N, t_start)
            code = EXIT_OK if result.rep is not None else EXIT_OUT_OF_SCOPE
            return report, code
        except (PrecisionLoss, TowerBudgetExceeded) as e:
            last_exc = e
            continue
        except SingularModel as e:
            raise InvalidInput(f"singular model: {e}")
    report = {
        "schema_version": SCHEMA_VERSION,
        "input": input_echo(job),
        "error": f"precision exhausted after retries up to {job.precision * RETRY_FACTORS[-1]} digits: {last_exc}",
    }
    return report, EXIT_PRECISION


def input_echo(job):
    return {
        "p": job.p,
        "n": job.n,
        "coefficients": [coefficient_str(c) for c in job.coefficients],
        "precision": job.precision,
        "ell": job.ell,
    }


def assemble_report(job, result, precision_used, t_start):
    cls = result.classification
    nd = result.neron
    classification = {
        "tag": cls.label(),
        "inertia_order": cls.order,
        "evidence": {
            k: v
            for k, v in cls.evidence.items()
            if isinstance(v, (int, bool, str)) or v is None
        },
        "neron": {
            "kodaira_type": nd.kodaira_type,
            "v_delta_min": nd.v_delta_min,
            "conductor_exponent": nd.conductor_exponent,
        },
    }
    report = {
        "schema_version": SCHEMA_VERSION,
        "input": input_echo(job),
        "classification": classification,
    }
    if result.rep is not None:
        report["representation"] = result.rep.serialize()
    elif result.partial is not None:
        report["representation"] = result.partial
    else:
        report["representation"] = {"status": "out_of_scope", "reason": result.refusal}
    if job.verify and result.rep is not None:
        vr = galrep.verify(result.rep, result.mod3_rep, result.mod3_twist_rep)
        report["verification"] = vr.serialize()
    elif result.partial is not None:
        report["verification"] = {
            "checks": [
                {
                    "name": "twist_reclassification",
                    "passed": result.partial["twisted_classification"] == "TameCyclic(3)",
                    "detail": f"the twist classifies as {result.partial['twisted_classification']}",
                }
            ],
            "all_passed": result.partial["twisted_classification"] == "TameCyclic(3)",
        }
    report["meta"] = {
        "precision_used": precision_used,
        "timing_ms": int(1000 * (time.time() - t_start)),
    }
    return report


def format_text(report):
    lines = []
    inp = report["input"]
    lines.append(
        f"curve [{', '.join(inp['coefficients'])}] over the unramified extension "
        f"of Q_{inp['p']} of degree {inp['n']}"
    )
    if "error" in report:
        lines.append(f"ERROR: {report['error']}")
        return "\n".join(lines)
    cl = report["classification"]
    lines.append(
        f"classification: {cl['tag']}  (Kodaira {cl['neron']['kodaira_type']}, "
        f"v(disc_min) = {cl['neron']['v_delta_min']}, conductor exponent "
        f"{cl['neron']['conductor_exponent']})"
    )
    rep = report["representation"]
    if rep.get("status") == "out_of_scope":
        lines.append(f"out of scope: {rep['reason']}")
    elif rep.get("case_tag") == "p2C6partial":
        lines.append("case p2C6partial: rho = rho(E') (x) eta with")
        lines.append(f"  eta ramified quadratic, d = {rep['eta']['d']}")
        lines.append(f"  E' classifies as {rep['twisted_classification']}")
        lines.append(f"  tame factor: OUT OF SCOPE ({rep['out_of_scope']})")
    else:
        lines.append(f"case {rep['case_tag']}: {rep['summands']}")
        lines.append(f"  chi(Frob) = {rep['chi_frobenius']}  ({rep['chi']})")
        lines.append(f"  rho(Frob) = {rep['frobenius_matrix']}")
        for g in rep["inertia_generators"]:
            lines.append(f"  rho({g['label']}) = {g['matrix']}  (order {g['order']})")
        for k, v in rep["conventions"].items():
            lines.append(f"  convention[{k}]: {v}")
    if "verification" in report:
        ver = report["verification"]
        lines.append("verification: " + ("all passed" if ver["all_passed"] else "FAILURES"))
        for ch in ver["checks"]:
            status = {True: "pass", False: "FAIL", None: "n/a"}[ch["passed"]]
            lines.append(f"  [{status}] {ch['name']}: {ch['detail']}")
    lines.append(f"(precision {report['meta']['precision_used']} digits)")
    return "\n".join(lines)


def report_to_json(report):
    return json.dumps(report, indent=1, sort_keys=True)


def parse_corpus_line(line):
    body = line.split("#", 1)[0].strip()
    if not body:
        return None
    parts = body.split(None, 2)
    if len(parts) != 3:
        raise InvalidInput(f"malformed corpus line: {line!r}")
    try:
        p = int(parts[0])
        n = int(parts[1])
    except ValueError as e:
        raise InvalidInput(f"malformed corpus line: {line!r} ({e})")
    coeffs = [parse_coefficient(t) for t in parts[2].split(",")]
    return p, n, coeffs


def run_corpus(path, precision=DEFAULT_PRECISION, fmt="text", out=sys.stdout):
    """One job per line: `p n a1,a2,a3,a4,a6`; '#' starts a comment."""
    lines = open(path).read().splitlines()
    summary = {"lines": 0, "ok": 0, "out_of_scope": 0, "errors": 0, "verify_failures": 0}
    reports = []
    for idx, line in enumerate(lines, 1):
        try:
            parsed = parse_corpus_line(line)
        except InvalidInput as e:
            summary["lines"] += 1
            summary["errors"] += 1
            reports.append({"line": idx, "error": str(e)})
            continue
        if parsed is None:
            continue
        summary["lines"] += 1
        p, n, coeffs = parsed
        job = JobSpec(p=p, n=n, coefficients=coeffs, precision=precision, fmt=fmt)
        try:
            report, code = run(job)
        except (InvalidInput, PadicError) as e:
            summary["errors"] += 1
            reports.append({"line": idx, "error": str(e)})
            continue
        reports.append({"line": idx, "report": report, "exit_code": code})
        if code == EXIT_OK:
            summary["ok"] += 1
            if report.get("verification") and not report["verification"]["all_passed"]:
                summary["verify_failures"] += 1
        elif code == EXIT_OUT_OF_SCOPE:
            summary["out_of_scope"] += 1
            ver = report.get("verification")
            if ver and not ver.get("all_passed", True):
                summary["verify_failures"] += 1
        else:
            summary["errors"] += 1
    exit_code = EXIT_OK if summary["verify_failures"] == 0 and summary["errors"] == 0 else 1
    return {"summary": summary, "results": reports}, exit_code


def main(argv=None):
    ap = argparse.ArgumentParser(
        prog="wildrep",
        description="Galois representations of elliptic curves with wild cyclic "
        "reduction over 2-adic and 3-adic fields",
    )
    ap.add_argument("--p", type=int, help="residue characteristic (2 or 3)")
    ap.add_argument("--n", type=int, default=1, help="residue degree of the base field")
    ap.add_argument("--a", help="a1,a2,a3,a4,a6 (exact rationals, or polynomials in w)")
    ap.add_argument("--precision", type=int, default=DEFAULT_PRECISION)
    ap.add_argument("--format", choices=("text", "json"), default="text")
    ap.add_argument("--verify", action="store_true", default=True)
    ap.add_argument("--no-verify", dest="verify", action="store_false")
    ap.add_argument("--ell", default="any prime l != p", help="display label for l")
    ap.add_argument("--corpus", help="run every line of a corpus file")
    args = ap.parse_args(argv)

    try:
        if args.corpus:
            out, code = run_corpus(args.corpus, precision=args.precision, fmt=args.format)
            if args.format == "json":
                print(json.dumps(out, indent=1, sort_keys=True))
            else:
                s = out["summary"]
                for r in out["results"]:
                    if "error" in r:
                        print(f"line {r['line']}: ERROR {r['error']}")
                    else:
                        tag = r["report"].get("representation", {}).get("case_tag")
                        cls = r["report"]["classification"]["tag"]
                        ver = r["report"].get("verification", {}).get("all_passed")
                        print(f"line {r['line']}: {cls} -> {tag or 'out-of-scope'} verify={ver}")
                print(
                    f"corpus: {s['lines']} lines, {s['ok']} synthesized, "
                    f"{s['out_of_scope']} out of scope, {s['errors']} errors, "
                    f"{s['verify_failures']} verification failures"
                )
            return code
        if args.p is None or args.a is None:
            ap.error("either --corpus or both --p and --a are required")
        coeffs = [parse_coefficient(t) for t in args.a.split(",")]
        job = JobSpec(
            p=args.p,
            n=args.n,
            coefficients=coeffs,
            precision=args.precision,
            fmt=args.format,
            verify=args.verify,
            ell=args.ell,
        )
        report, code = run(job)
        if args.format == "json":
            print(report_to_json(report))
        else:
            print(format_text(report))
        return code
    except InvalidInput as e:
        print(f"invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
