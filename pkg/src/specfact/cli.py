"""Command-line front end: factorize, check bounds, run the divergence family.

Exit codes form the machine-readable contract:

    0  every requested check passed
    1  a check ran to completion and failed
    2  input could not be parsed or the arguments are invalid
    3  domain error (nonpositive density, polynomial not nonnegative, ...)
    4  precision budget exceeded

Inputs are file paths ("-" for standard input) holding either a grid
function as JSON {"n": ..., "values": [...]}, a Fourier series as JSON
{"coeffs": {"k": [re, im], ...}}, or plain text with one sample per line.
Results are JSON on standard output; diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .bounds import (
    check_corollary_p,
    check_identity,
    check_lemma_l1,
    check_lemma_orl,
    check_theorem_2,
    check_theorem_main,
    constant_c_inf,
    constant_c_p,
    random_density,
    random_phase,
)
from .circle_fn import (
    FourierSeries,
    GridFunction,
    SpectralFactor,
    fourier_synthesize,
)
from .counterexample import family_row
from .errors import (
    DomainError,
    NumericalConditioningError,
    ParameterError,
    PrecisionBudgetError,
    SpecfactError,
)
from .factorization import (
    factorize_boundary,
    factorize_herglotz,
    fejer_riesz,
    outer_check,
)
from .orlicz import NFunction, davis_constant, k0_constant

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_BUDGET = 4

_PAIR_CHECKS = ("thm2", "cor-p", "main", "identity")
_PSI_CHECKS = ("lemma-orl", "lemma-l1")


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_any(path: str):
    """Parse a path into a GridFunction or FourierSeries."""
    text = _read_text(path)
    stripped = text.lstrip()
    if stripped.startswith("{"):
        obj = json.loads(text)
        if "coeffs" in obj:
            return FourierSeries.from_json_dict(obj)
        return GridFunction.from_json_dict(obj)
    vals = [float(tok) for tok in text.replace(",", " ").split()]
    if not vals:
        raise ParameterError(f"no samples found in {path!r}")
    return GridFunction.from_samples(vals)


def _as_grid(obj, n: int, label: str) -> GridFunction:
    if isinstance(obj, GridFunction):
        return obj
    if not obj.is_real_valued():
        raise ParameterError(
            f"{label}: series is not real-valued, cannot use as a density")
    return fourier_synthesize(obj, n)


def _parse_phi(text: str) -> NFunction:
    return NFunction.from_json_dict(json.loads(text))


def _emit(obj) -> None:
    print(json.dumps(obj))


def _herglotz_factor(f: GridFunction, floor: float | None,
                     degree: int) -> SpectralFactor:
    """Taylor coefficients of the Herglotz-route factor.

    Samples the factor on the circle |z| = 0.9 and divides the FFT
    coefficients by 0.9^k; the geometric decay of the sampling radius
    suppresses coefficients beyond `degree`.
    """
    r = 0.9
    m = 512
    while m < 4 * (degree + 1):
        m *= 2
    phi = 2.0 * np.pi * np.arange(m) / m
    vals = factorize_herglotz(f, r * np.exp(1j * phi), floor=floor)
    c = np.fft.fft(vals) / m
    a = c[: degree + 1] / r ** np.arange(degree + 1)
    a = a * np.exp(-1j * np.angle(a[0]))
    return SpectralFactor(a, floor_applied=floor)


def cmd_factorize(args) -> int:
    data = _load_any(args.input)
    if args.method == "fejer-riesz":
        if not isinstance(data, FourierSeries):
            raise ParameterError(
                "fejer-riesz input must be a Fourier series "
                "(JSON with a coeffs mapping)")
        coeffs = fejer_riesz(data)
        factor = SpectralFactor(coeffs)
        f = _as_grid(data, args.n, "input")
    else:
        f = _as_grid(data, args.n, "input")
        if args.method == "boundary":
            factor = factorize_boundary(f, floor=args.floor)
        else:
            factor = _herglotz_factor(f, args.floor, args.degree)
    if args.floor is not None:
        # the outer check must see the same density the factor came from
        f = GridFunction(f.n, np.maximum(f.values, args.floor))
    report = outer_check(factor, f)
    out = factor.to_json_dict()
    out["a"] = [[z.real, z.imag] for z in factor.coeffs]
    out["method"] = args.method
    out["outer"] = report.to_json_dict()
    _emit(out)
    return EXIT_PASS if report.passed else EXIT_FAIL


def _run_check(check: str, args, f: GridFunction | None,
               g: GridFunction | None, psi: GridFunction | None):
    if check == "thm2":
        return check_theorem_2(f, g)
    if check == "cor-p":
        return check_corollary_p(f, g, args.p)
    if check == "main":
        return check_theorem_main(f, g, _parse_phi(args.phi))
    if check == "identity":
        return check_identity(f, g)
    if check == "lemma-orl":
        return check_lemma_orl(psi, _parse_phi(args.phi))
    return check_lemma_l1(psi)


def _sweep_trial(check: str, args, index: int):
    rng = np.random.default_rng([args.seed, index])
    if check in _PSI_CHECKS:
        psi = random_phase(rng, n=args.n, degree=args.degree)
        return _run_check(check, args, None, None, psi)
    f = random_density(rng, n=args.n, degree=args.degree)
    g = random_density(rng, n=args.n, degree=args.degree)
    return _run_check(check, args, f, g, None)


def cmd_bounds(args) -> int:
    check = args.check
    if args.sweep is not None:
        if args.f is not None or args.g is not None:
            raise ParameterError("--sweep and explicit inputs are exclusive")
        if args.sweep < 1:
            raise ParameterError("--sweep needs a positive trial count")
        indices = range(args.sweep)
        if args.jobs > 1:
            with ThreadPoolExecutor(max_workers=args.jobs) as pool:
                reports = list(pool.map(
                    lambda i: _sweep_trial(check, args, i), indices))
        else:
            reports = [_sweep_trial(check, args, i) for i in indices]
        for i, rep in enumerate(reports):
            _emit({"trial": i, **rep.to_json_dict()})
        n_pass = sum(r.passed for r in reports)
        print(f"{n_pass}/{len(reports)} trials passed", file=sys.stderr)
        return EXIT_PASS if n_pass == len(reports) else EXIT_FAIL

    if check in _PSI_CHECKS:
        if args.f is None:
            raise ParameterError(f"--check {check} needs one input (psi)")
        psi = _as_grid(_load_any(args.f), args.n, "psi")
        rep = _run_check(check, args, None, None, psi)
    else:
        if args.f is None or args.g is None:
            raise ParameterError(f"--check {check} needs two inputs (f, g)")
        f = _as_grid(_load_any(args.f), args.n, "f")
        g = _as_grid(_load_any(args.g), args.n, "g")
        rep = _run_check(check, args, f, g, None)
    _emit(rep.to_json_dict())
    return EXIT_PASS if rep.passed else EXIT_FAIL


def cmd_counterexample(args) -> int:
    if (args.n is None) == (args.sweep is None):
        raise ParameterError("give exactly one of --n and --sweep")
    if args.n is not None:
        ns = [args.n]
    else:
        if args.sweep < 1:
            raise ParameterError("--sweep needs a positive maximum index")
        ns = list(range(1, args.sweep + 1))
    all_pass = True
    for n in ns:
        row = family_row(n, du=args.du, variant=args.variant)
        _emit(row)
        all_pass = all_pass and row["pass"]
    return EXIT_PASS if all_pass else EXIT_FAIL


def cmd_constants(_args) -> int:
    _emit({
        "K": davis_constant(),
        "K0": k0_constant(),
        "C2": constant_c_p(2.0),
        "C_inf": constant_c_inf(),
    })
    return EXIT_PASS


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specfact",
        description="Spectral factorization on the circle with machine-checked "
                    "continuity bounds.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_fac = sub.add_parser(
        "factorize", help="compute the outer spectral factor of a density")
    p_fac.add_argument("input", nargs="?", default="-",
                       help="density samples or series (path or '-')")
    p_fac.add_argument("--method", required=True,
                       choices=("boundary", "herglotz", "fejer-riesz"))
    p_fac.add_argument("--n", type=int, default=4096,
                       help="grid size when synthesizing series input")
    p_fac.add_argument("--floor", type=float, default=None,
                       help="clamp level for nonpositive samples")
    p_fac.add_argument("--degree", type=int, default=64,
                       help="Taylor truncation degree for the herglotz method")
    p_fac.set_defaults(func=cmd_factorize)

    p_bnd = sub.add_parser(
        "bounds", help="check one continuity bound on given or random inputs")
    p_bnd.add_argument("f", nargs="?", default=None,
                       help="density f (or psi for lemma checks)")
    p_bnd.add_argument("g", nargs="?", default=None,
                       help="density g (pair checks only)")
    p_bnd.add_argument("--check", required=True,
                       choices=_PAIR_CHECKS + _PSI_CHECKS)
    p_bnd.add_argument("--p", type=float, default=2.0,
                       help="exponent for --check cor-p")
    p_bnd.add_argument("--phi", default='{"kind": "power", "q": 2}',
                       help="N-function JSON for --check main / lemma-orl")
    p_bnd.add_argument("--sweep", type=int, default=None,
                       help="run N random trials instead of reading inputs")
    p_bnd.add_argument("--seed", type=int, default=0,
                       help="seed for --sweep trials")
    p_bnd.add_argument("--jobs", type=int, default=1,
                       help="parallel workers for --sweep")
    p_bnd.add_argument("--n", type=int, default=4096,
                       help="grid size for sweeps and series input")
    p_bnd.add_argument("--degree", type=int, default=16,
                       help="trig-polynomial degree cap for sweep draws")
    p_bnd.set_defaults(func=cmd_bounds)

    p_ctr = sub.add_parser(
        "counterexample",
        help="emit divergence-family rows (JSON lines, one per index)")
    p_ctr.add_argument("--n", type=int, default=None, help="single index")
    p_ctr.add_argument("--sweep", type=int, default=None,
                       help="all indices 1..MAX")
    p_ctr.add_argument("--du", type=float, default=0.1,
                       help="bump halfwidth in the transformed coordinate")
    p_ctr.add_argument("--variant", default="floored",
                       choices=("floored", "plus-one"))
    p_ctr.set_defaults(func=cmd_counterexample)

    p_cst = sub.add_parser(
        "constants", help="emit the pinned constants K, K0, C2, C_inf")
    p_cst.set_defaults(func=cmd_constants)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PrecisionBudgetError as exc:
        print(f"specfact: precision budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (DomainError, NumericalConditioningError) as exc:
        print(f"specfact: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ParameterError, json.JSONDecodeError, ValueError, OSError) as exc:
        print(f"specfact: cannot parse input: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SpecfactError as exc:
        print(f"specfact: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
