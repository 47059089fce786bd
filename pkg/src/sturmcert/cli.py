"""Command-line interface: check, twist-verify, bound, factor-prime, batch.

Exit codes: 0 certified for the full requested exponent, 10 certified for a
smaller exponent, 20 refuted, 30 inconclusive, 64 input or precision error.
A certificate file is written for every completed run (exits 0..30).
"""

import argparse
import itertools
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import bounds
from .engine import (
    CertifiedFull,
    CertifiedPartial,
    InconclusiveVerdict,
    InsufficientPrecisionError,
    ProblemStatement,
    RefutedAtPrime,
    RefutedByCharacterOrder,
    RefutedByWeightCongruence,
    decide,
    decide_theorem2,
    verify_by_twist,
)
from .formats import (
    FormatError,
    certificate_to_obj,
    load_field_file,
    load_form_file,
    serialize_certificate,
    write_atomic,
)
from .numberfield import (
    FieldMismatchError,
    IndexDivisibleError,
    PlaceConstructionError,
    factor_prime,
)
from .qseries import PrecisionError

EXIT_FULL = 0
EXIT_PARTIAL = 10
EXIT_REFUTED = 20
EXIT_INCONCLUSIVE = 30
EXIT_INPUT_ERROR = 64

OUTPUT_DIR_ENV = "STURMCERT_OUTPUT_DIR"


def _verdict_exit_code(verdict):
    if isinstance(verdict, CertifiedFull):
        return EXIT_FULL
    if isinstance(verdict, CertifiedPartial):
        return EXIT_PARTIAL
    if isinstance(
        verdict,
        (RefutedAtPrime, RefutedByWeightCongruence, RefutedByCharacterOrder),
    ):
        return EXIT_REFUTED
    if isinstance(verdict, InconclusiveVerdict):
        return EXIT_INCONCLUSIVE
    raise AssertionError(f"unknown verdict {verdict!r}")


def _common_field(form1, form2):
    if form1.field == form2.field:
        return form1.field
    if form1.field.degree == 1:
        return form2.field
    if form2.field.degree == 1:
        return form1.field
    raise FormatError(
        "the forms have different coefficient fields and neither is "
        "rational; express both over one field"
    )


def _resolve_place_index(field, p, arg_place):
    places = factor_prime(field, p)
    if arg_place is not None:
        if not 0 <= arg_place < len(places):
            raise FormatError(
                f"--place {arg_place} out of range; {len(places)} places: "
                + ", ".join(f"[{i}] e={pl.e} f={pl.f}" for i, pl in enumerate(places))
            )
        return arg_place
    if len(places) == 1:
        return 0
    raise FormatError(
        f"{len(places)} places over {p}; choose one with --place: "
        + ", ".join(f"[{i}] e={pl.e} f={pl.f}" for i, pl in enumerate(places))
    )


def _build_problem(args, form1, form2):
    field = _common_field(form1, form2)
    place_index = _resolve_place_index(field, args.p, args.place)
    psi1 = form1.character if form1.character.modulus > 1 else None
    psi2 = form2.character if form2.character.modulus > 1 else None
    if psi1 is not None and psi1.field != field:
        psi1 = None
    if psi2 is not None and psi2.field != field:
        psi2 = None
    return ProblemStatement(
        f1=form1.series,
        f2=form2.series,
        field=field,
        p=args.p,
        place_index=place_index,
        m=args.m,
        forms_on_gamma0_p=args.gamma0_p,
        rho_f1_absolutely_irreducible=args.abs_irred,
        galois_closure_degree=args.galois_closure_degree,
        assumed_r=args.assume_r,
        psi1=psi1,
        psi2=psi2,
        index_kind=args.index,
    )


def _certificate_path(args, form1_path, form2_path):
    if getattr(args, "output", None):
        return args.output
    out_dir = getattr(args, "output_dir", None) or os.environ.get(
        OUTPUT_DIR_ENV, "."
    )
    stem1 = os.path.splitext(os.path.basename(form1_path))[0]
    stem2 = os.path.splitext(os.path.basename(form2_path))[0]
    name = f"{stem1}__{stem2}__p{args.p}_m{args.m}.cert.json"
    return os.path.join(out_dir, name)


def _emit_certificate(cert, args, form1, form2):
    inputs = {
        "form1": {"path": form1.path, "sha256": form1.digest},
        "form2": {"path": form2.path, "sha256": form2.digest},
    }
    problem_fields = {
        "p": args.p,
        "place_index": cert.quantities.get("place_index"),
        "m": args.m,
        "index_kind": args.index,
    }
    obj = certificate_to_obj(cert, inputs, problem_fields)
    path = _certificate_path(args, form1.path, form2.path)
    write_atomic(path, serialize_certificate(obj))
    return path


def _describe(verdict):
    return " ".join(f"{k}={v}" for k, v in sorted(verdict.__dict__.items()))


def _run_pair(args, route):
    form1 = load_form_file(args.form1)
    form2 = load_form_file(args.form2)
    problem = _build_problem(args, form1, form2)
    if route == "twist":
        cert = verify_by_twist(problem)
    elif route == "theorem2" or args.route == "theorem2":
        cert = decide_theorem2(problem)
    else:
        cert = decide(problem)
    cert.quantities["place_index"] = problem.place_index
    path = _emit_certificate(cert, args, form1, form2)
    print(f"verdict: {_describe(cert.verdict)}")
    print(f"certificate: {path}")
    return _verdict_exit_code(cert.verdict)


def cmd_check(args):
    return _run_pair(args, args.route)


def cmd_twist_verify(args):
    return _run_pair(args, "twist")


def cmd_bound(args):
    trivial = args.index != "gamma1"
    ld = bounds.level_data(args.N, args.p, args.index, trivial)
    print(f"N        = {ld.N}")
    print(f"p        = {ld.p}")
    print(f"N'       = {ld.N_prime}")
    print(f"mu1      = {ld.mu1}  [SL2(Z) : Gamma_1(N')]")
    print(f"mu0      = {ld.mu0}  [SL2(Z) : Gamma_0(N')]")
    print(f"index    = {ld.sturm_index_used}")
    for label, k in (("k1", args.k1), ("k2", args.k2)):
        if k is not None:
            b = bounds.sturm_prime_bound(k, ld.mu_used)
            print(f"sturm bound for {label}={k}: {b}")
    return 0


def cmd_factor_prime(args):
    field = load_field_file(args.field_file)
    places = factor_prime(field, args.p)
    print(f"{args.p} splits into {len(places)} place(s) in {field.name or 'K'}:")
    for i, pl in enumerate(places):
        gen = ", ".join(str(c) for c in pl.generator.coords)
        tau = ", ".join(str(c) for c in pl.tau.coords)
        print(f"[{i}] e={pl.e} f={pl.f}")
        print(f"    generator = ({gen})")
        print(f"    tau       = ({tau})")
    total = sum(pl.e * pl.f for pl in places)
    print(f"sum e*f = {total} = degree {field.degree}")
    return 0


def _batch_one(job):
    """Worker for one batch pair; loads files itself to stay picklable."""
    path1, path2, ns_dict = job
    args = argparse.Namespace(**ns_dict)
    try:
        form1 = load_form_file(path1)
        form2 = load_form_file(path2)
        field = _common_field(form1, form2)
        places = factor_prime(field, args.p)
        best = None
        best_cert = None
        for idx in range(len(places)):
            args.place = idx
            try:
                problem = _build_problem(
                    argparse.Namespace(**vars(args)), form1, form2
                )
            except (ValueError, FormatError) as exc:
                return (path1, path2, "error", str(exc), None)
            cert = decide(problem)
            cert.quantities["place_index"] = idx
            rank = _verdict_exit_code(cert.verdict)
            if best is None or rank < best:
                best = rank
                best_cert = cert
            if best == EXIT_FULL:
                break
        path = _emit_certificate(best_cert, args, form1, form2)
        return (path1, path2, best_cert.verdict.kind,
                _describe(best_cert.verdict), path)
    except (FormatError, InsufficientPrecisionError, IndexDivisibleError,
            PlaceConstructionError, FieldMismatchError, PrecisionError,
            ValueError) as exc:
        return (path1, path2, "error", str(exc), None)


def cmd_batch(args):
    files = sorted(
        os.path.join(args.directory, f)
        for f in os.listdir(args.directory)
        if f.endswith(".json")
    )
    candidates = []
    for f in files:
        try:
            form = load_form_file(f)
            candidates.append((f, form.series.level, form.series.weight))
        except FormatError:
            continue
    pairs = []
    for (fa, la, ka), (fb, lb, kb) in itertools.combinations(candidates, 2):
        if la != lb:
            continue
        lo, hi = (fa, fb) if ka <= kb else (fb, fa)
        pairs.append((lo, hi))
    if args.max_pairs is not None:
        pairs = pairs[: args.max_pairs]
    ns = {
        "p": args.p,
        "m": args.m,
        "place": None,
        "gamma0_p": args.gamma0_p,
        "abs_irred": args.abs_irred,
        "galois_closure_degree": args.galois_closure_degree,
        "assume_r": args.assume_r,
        "index": args.index,
        "route": "auto",
        "output": None,
        "output_dir": args.output_dir,
    }
    jobs = [(a, b, ns) for a, b in pairs]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_batch_one, jobs))
    else:
        results = [_batch_one(j) for j in jobs]
    certified = 0
    print(f"{'form 1':<34} {'form 2':<34} outcome")
    for path1, path2, kind, detail, cert_path in results:
        n1 = os.path.basename(path1)
        n2 = os.path.basename(path2)
        print(f"{n1:<34} {n2:<34} {kind}: {detail}")
        if kind in ("CertifiedFull", "CertifiedPartial"):
            certified += 1
    print(f"pairs: {len(results)}, certified: {certified}")
    return 0


def _add_pair_options(p):
    p.add_argument("form1")
    p.add_argument("form2")
    p.add_argument("--p", type=int, required=True, help="rational prime")
    p.add_argument("--place", type=int, default=None,
                   help="index into the sorted places over p")
    p.add_argument("--m", type=int, required=True, help="congruence exponent")
    p.add_argument("--gamma0-p", dest="gamma0_p", action="store_true",
                   help="assert the forms live on Gamma_1(N) n Gamma_0(p)")
    p.add_argument("--abs-irred", dest="abs_irred", action="store_true",
                   help="assert the residual representation of form1 is "
                   "absolutely irreducible")
    p.add_argument("--galois-closure-degree", type=int, default=None)
    p.add_argument("--assume-r", type=int, default=None)
    p.add_argument("--index", choices=["auto", "gamma0", "gamma1"],
                   default="auto")
    p.add_argument("--output", default=None, help="certificate file path")
    p.add_argument("--output-dir", default=None)


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="sturmcert",
        description="Decide and certify eigenvalue congruences between "
        "eigenform q-expansions modulo powers of a prime ideal.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="decide a congruence and emit a certificate")
    _add_pair_options(p_check)
    p_check.add_argument("--route", choices=["auto", "theorem2"], default="auto",
                         help="force the character route instead of the "
                         "weight-congruence route")

    p_twist = sub.add_parser("twist-verify",
                             help="independent confirmation via the "
                             "Eisenstein-unit twist")
    _add_pair_options(p_twist)

    p_bound = sub.add_parser("bound", help="print level and Sturm bound data")
    p_bound.add_argument("--N", type=int, required=True)
    p_bound.add_argument("--p", type=int, required=True)
    p_bound.add_argument("--k1", type=int, default=None)
    p_bound.add_argument("--k2", type=int, default=None)
    p_bound.add_argument("--index", choices=["auto", "gamma0", "gamma1"],
                         default="auto")

    p_fact = sub.add_parser("factor-prime", help="print the places over p")
    p_fact.add_argument("field_file")
    p_fact.add_argument("--p", type=int, required=True)

    p_batch = sub.add_parser("batch", help="scan a directory of form files "
                             "for congruent pairs")
    p_batch.add_argument("directory")
    p_batch.add_argument("--p", type=int, required=True)
    p_batch.add_argument("--m", type=int, required=True)
    p_batch.add_argument("--max-pairs", type=int, default=None)
    p_batch.add_argument("--jobs", type=int, default=1)
    p_batch.add_argument("--gamma0-p", dest="gamma0_p", action="store_true")
    p_batch.add_argument("--abs-irred", dest="abs_irred", action="store_true")
    p_batch.add_argument("--galois-closure-degree", type=int, default=None)
    p_batch.add_argument("--assume-r", type=int, default=None)
    p_batch.add_argument("--index", choices=["auto", "gamma0", "gamma1"],
                         default="auto")
    p_batch.add_argument("--output-dir", default=None)

    args = parser.parse_args(argv)
    handlers = {
        "check": cmd_check,
        "twist-verify": cmd_twist_verify,
        "bound": cmd_bound,
        "factor-prime": cmd_factor_prime,
        "batch": cmd_batch,
    }
    try:
        return handlers[args.command](args)
    except InsufficientPrecisionError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except (FormatError, IndexDivisibleError, PlaceConstructionError,
            FieldMismatchError, PrecisionError, FileNotFoundError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
