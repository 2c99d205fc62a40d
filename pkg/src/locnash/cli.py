"""Command-line front end.

Subcommands: eval, periods, classify, compare, verify-aat, check-identities.
Exit codes: 0 success / positive result; 1 negative result (not isomorphic,
no relation found, identity residual above threshold); 2 parse error;
3 numeric failure; 4 undetermined verdict.

Reports are deterministic for a fixed configuration and seed: every report
embeds the configuration block, floats print with 17 significant digits, and
nothing time- or path-dependent is emitted.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .classify import (
    NOT_ISOMORPHIC,
    UNDETERMINED,
    classify_1d,
    classify_2d,
    compare_2d,
    isomorphic_1d,
)
from .config import RunConfig, config_block, fmt, load_config
from .descriptors import load_descriptor, serialize_descriptor
from .errors import LocNashError, ParseError
from .lattices import DiscreteSubgroup, Lattice1, subgroup
from .relations import format_polynomial, verify_aat
from .scalars import parse_lattice_literal
from .structures import map_batch, period_group
from .weierstrass import (
    coset_sum_check,
    conjugate_lattice_check,
    get_context,
    sample_reduced,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_PARSE = 2
EXIT_NUMERIC = 3
EXIT_UNDETERMINED = 4


def _write(text: str, out_path: str | None) -> None:
    if out_path and out_path != "-":
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_lattice1(literal: str) -> Lattice1:
    from .errors import DegenerateGenerators

    dim, gens = parse_lattice_literal(literal)
    if dim != 1 or len(gens) != 2:
        raise ParseError("expected a full lattice of C: lattice(w1, w2)")
    try:
        return Lattice1(gens[0][0], gens[1][0])
    except DegenerateGenerators as exc:
        raise ParseError(f"literal does not define a lattice: {exc}") from exc


def _parse_grid(spec: str) -> np.ndarray:
    try:
        lo_s, hi_s, step_s = spec.split(":")
        lo, hi, step = float(lo_s), float(hi_s), float(step_s)
    except ValueError as exc:
        raise ParseError(f"bad grid spec {spec!r}, expected lo:hi:step") from exc
    if step <= 0 or hi < lo:
        raise ParseError(f"bad grid spec {spec!r}")
    count = int(round((hi - lo) / step)) + 1
    return lo + step * np.arange(count)


def _report_head(name: str, cfg: RunConfig) -> list[str]:
    return [f"locnash {name} report"] + config_block(cfg)


# -- eval ---------------------------------------------------------------------

_EVAL_FNS = ("wp", "wp-prime", "zeta", "sigma")


def _csv_rows(
    points: np.ndarray, values: np.ndarray, est: np.ndarray | None, poles: np.ndarray
) -> str:
    """est=None leaves the est_err field empty (map evaluations carry no estimate)."""
    lines = ["re_u,im_u,re_val,im_val,est_err,pole"]
    for i, (z, v, p) in enumerate(zip(points, values, poles)):
        if p:
            lines.append(f"{fmt(z.real)},{fmt(z.imag)},,,,1")
        else:
            e = "" if est is None else fmt(est[i])
            lines.append(
                f"{fmt(z.real)},{fmt(z.imag)},{fmt(v.real)},{fmt(v.imag)},{e},0"
            )
    return "\n".join(lines) + "\n"


def cmd_eval(args, cfg: RunConfig) -> int:
    xs = _parse_grid(args.grid)
    if args.lattice:
        lat = _parse_lattice1(args.lattice)
        ctx = get_context(lat, cfg.trunc_radius_factor, cfg.target_abs_err)
        pts = np.array([complex(x, y) for x in xs for y in xs])
        fn = {
            "wp": ctx.wp_many,
            "wp-prime": ctx.wp_prime_many,
            "zeta": ctx.zeta_many,
            "sigma": ctx.sigma_many,
        }[args.fn]
        values, est, poles = fn(pts)
        _write(_csv_rows(pts, values, est, poles), args.out or cfg.output_path)
        return EXIT_OK
    d = load_descriptor(args.descriptor)
    if d.dim == 1:
        pts = np.array([complex(x, y) for x in xs for y in xs])
        vals, poles = map_batch(
            d, pts, trunc_radius_factor=cfg.trunc_radius_factor,
            target_abs_err=cfg.target_abs_err,
        )
        _write(_csv_rows(pts, vals[0], None, poles[0]), args.out or cfg.output_path)
        return EXIT_OK
    # dim 2: the grid spans real coordinates (x, y); one CSV per map coordinate
    out = args.out or cfg.output_path
    if not out or out == "-":
        raise ParseError("dim-2 descriptors need --out (one CSV per coordinate)")
    U = np.array([complex(x, 0) for x in xs for _ in xs])
    V = np.array([complex(y, 0) for _ in xs for y in xs])
    vals, poles = map_batch(
        d, U, V, trunc_radius_factor=cfg.trunc_radius_factor,
        target_abs_err=cfg.target_abs_err,
    )
    stem = out[:-4] if out.endswith(".csv") else out
    pts = U + 1j * V.real
    for k in range(2):
        _write(_csv_rows(pts, vals[k], None, poles[k]), f"{stem}_c{k + 1}.csv")
    return EXIT_OK


# -- periods / classify / compare ----------------------------------------------

def _group_lines(G: DiscreteSubgroup) -> list[str]:
    lines = [f"rank = {G.rank}"]
    for i, g in enumerate(G.generators, start=1):
        comps = "; ".join(f"{fmt(c.real)} {fmt(c.imag)}" for c in g)
        lines.append(f"generator_{i} = {comps}")
    return lines


def cmd_periods(args, cfg: RunConfig) -> int:
    d = load_descriptor(args.descriptor)
    rep = period_group(d, cfg.tol, cfg.trunc_radius_factor, cfg.target_abs_err)
    lines = _report_head("periods", cfg)
    lines.append("[descriptor]")
    lines.extend(serialize_descriptor(d).rstrip().splitlines())
    lines.append("[result]")
    lines.extend(_group_lines(rep.group))
    for i, form in enumerate(rep.closed_form, start=1):
        lines.append(f"closed_form_{i} = {form}")
    _write("\n".join(lines) + "\n", args.out or cfg.output_path)
    return EXIT_OK


def cmd_classify(args, cfg: RunConfig) -> int:
    d = load_descriptor(args.descriptor)
    lines = _report_head("classify", cfg)
    lines.append("[descriptor]")
    lines.extend(serialize_descriptor(d).rstrip().splitlines())
    lines.append("[result]")
    if d.dim == 1:
        form = classify_1d(
            d, cfg.tol, trunc_radius_factor=cfg.trunc_radius_factor,
            target_abs_err=cfg.target_abs_err,
        )
        lines.append(f"canonical_form = {form.kind}")
        if form.a is not None:
            lines.append(f"a = {fmt(form.a)}")
        if form.a_exact is not None:
            lines.append(f"a_exact = {form.a_exact}")
        lines.append(f"rank = {form.rank}")
    else:
        fam = classify_2d(d, cfg.tol, cfg.trunc_radius_factor, cfg.target_abs_err)
        lines.append(f"family = {fam.index}")
        lines.append(f"rank = {fam.rank}")
    _write("\n".join(lines) + "\n", args.out or cfg.output_path)
    return EXIT_OK


def cmd_compare(args, cfg: RunConfig) -> int:
    d1 = load_descriptor(args.descriptor1)
    d2 = load_descriptor(args.descriptor2)
    if d1.dim != d2.dim:
        raise ParseError("descriptors have different dimensions")
    if d1.dim == 1:
        verdict = isomorphic_1d(
            d1, d2, cfg.max_denominator, cfg.tol, cfg.tol,
            trunc_radius_factor=cfg.trunc_radius_factor,
            target_abs_err=cfg.target_abs_err,
        )
    else:
        verdict = compare_2d(
            d1, d2, cfg.tol, cfg.trunc_radius_factor, cfg.target_abs_err
        )
    lines = _report_head("compare", cfg)
    for tag, d in (("descriptor_1", d1), ("descriptor_2", d2)):
        lines.append(f"[{tag}]")
        lines.extend(serialize_descriptor(d).rstrip().splitlines())
    lines.append("[result]")
    lines.append(f"verdict = {verdict.outcome}")
    for i, r in enumerate(verdict.reasons, start=1):
        lines.append(f"reason_{i} = {r}")
    _write("\n".join(lines) + "\n", args.out or cfg.output_path)
    if verdict.outcome == NOT_ISOMORPHIC:
        return EXIT_NEGATIVE
    if verdict.outcome == UNDETERMINED:
        return EXIT_UNDETERMINED
    return EXIT_OK


def cmd_verify_aat(args, cfg: RunConfig) -> int:
    d = load_descriptor(args.descriptor)
    report = verify_aat(
        d, cfg.max_degree, cfg.n_samples, cfg.seed,
        trunc_radius_factor=cfg.trunc_radius_factor,
        target_abs_err=cfg.target_abs_err,
    )
    lines = _report_head("verify-aat", cfg)
    lines.append("[descriptor]")
    lines.extend(serialize_descriptor(d).rstrip().splitlines())
    lines.append("[result]")
    lines.append(f"success = {int(report.success)}")
    names = (
        [f"f{j + 1}(u)" for j in range(d.dim)]
        + [f"f{j + 1}(v)" for j in range(d.dim)]
        + ["f(u+v)"]
    )
    for i, cert in enumerate(report.certificates, start=1):
        if cert is None:
            lines.append(f"coordinate_{i} = no relation found at degree {report.max_degree}")
            continue
        names[-1] = f"f{i}(u+v)"
        lines.append(f"coordinate_{i} = degree {cert.max_degree}, "
                     f"residual {fmt(cert.residual)}, gap {fmt(cert.singular_gap)}")
        lines.append(f"relation_{i} = {format_polynomial(cert, names)}")
        lines.append("[certificate]")
        lines.extend(cert.serialize().rstrip().splitlines())
    _write("\n".join(lines) + "\n", args.out or cfg.output_path)
    return EXIT_OK if report.success else EXIT_NEGATIVE


# -- check-identities -----------------------------------------------------------

def cmd_check_identities(args, cfg: RunConfig) -> int:
    lat = _parse_lattice1(args.lattice)
    ctx = get_context(lat, cfg.trunc_radius_factor, cfg.target_abs_err)
    rng = np.random.default_rng(cfg.seed)
    zs = sample_reduced(lat, 30, rng)
    checks: list[tuple[str, float, float]] = []

    eta = [2.0 * e for e in ctx.eta_half]
    for i, w in enumerate((lat.omega1, lat.omega2)):
        shifted, _, _ = ctx.zeta_many(zs + w)
        base, _, _ = ctx.zeta_many(zs)
        res = float(np.max(np.abs(shifted - base - eta[i])))
        checks.append((f"zeta_quasi_periodicity_omega{i + 1}", res, 1e-8))
        s_shift, _, _ = ctx.sigma_many(zs + w)
        s_base, _, _ = ctx.sigma_many(zs)
        rhs = -s_base * np.exp(eta[i] * (zs + w / 2.0))
        rel = float(np.max(np.abs(s_shift - rhs) / np.abs(s_shift)))
        checks.append((f"sigma_quasi_periodicity_omega{i + 1}", rel, 1e-7))

    checks.append(("conjugation", conjugate_lattice_check(ctx, zs), 1e-8))

    doubled = subgroup([2 * lat.omega1, 2 * lat.omega2], tol=cfg.tol)
    full = subgroup([lat.omega1, lat.omega2], tol=cfg.tol)
    checks.append(
        ("coset_sum_doubled_sublattice",
         coset_sum_check(doubled, full, zs, cfg.trunc_radius_factor), 1e-6)
    )

    base, _, _ = ctx.wp_many(zs)
    for label, c in (("2", 2.0 + 0j), ("1+i", 1.0 + 1j)):
        ctx_c = get_context(lat.scaled(c), cfg.trunc_radius_factor, cfg.target_abs_err)
        scaled, _, _ = ctx_c.wp_many(c * zs)
        res = float(np.max(np.abs(scaled - base / c**2)))
        checks.append((f"scaling_law_c_{label}", res, 1e-8))

    checks.append(("legendre_relation", ctx.legendre_defect, 10.0 * cfg.target_abs_err))

    lines = _report_head("check-identities", cfg)
    lines.append("[lattice]")
    lines.append(f"omega1 = {fmt(lat.omega1.real)} {fmt(lat.omega1.imag)}")
    lines.append(f"omega2 = {fmt(lat.omega2.real)} {fmt(lat.omega2.imag)}")
    lines.append("[result]")
    all_pass = True
    for name, res, thr in checks:
        ok = res < thr
        all_pass &= ok
        lines.append(f"{name} = {fmt(res)} (threshold {fmt(thr)}) {'PASS' if ok else 'FAIL'}")
    lines.append(f"all_pass = {int(all_pass)}")
    _write("\n".join(lines) + "\n", args.out or cfg.output_path)
    return EXIT_OK if all_pass else EXIT_NEGATIVE


# -- argument parsing ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="config file (or set LOCNASH_CONFIG)")
    common.add_argument("--tol", type=float)
    common.add_argument("--seed", type=int)
    common.add_argument("--max-degree", type=int, dest="max_degree")
    common.add_argument("--max-denominator", type=int, dest="max_denominator")
    common.add_argument("--n-samples", type=int, dest="n_samples")
    common.add_argument("--trunc-radius-factor", type=float, dest="trunc_radius_factor")
    common.add_argument("--target-abs-err", type=float, dest="target_abs_err")
    common.add_argument("--out", help="output path (default stdout)")

    p = argparse.ArgumentParser(prog="locnash", description=__doc__)
    p.add_argument("--version", action="version", version=f"locnash {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("eval", parents=[common], help="grid evaluation to CSV")
    src = pe.add_mutually_exclusive_group(required=True)
    src.add_argument("--lattice", help='lattice literal, e.g. "lattice(1, 1i)"')
    src.add_argument("--descriptor", help="descriptor file")
    pe.add_argument("--fn", choices=_EVAL_FNS, default="wp")
    pe.add_argument("--grid", required=True, help="lo:hi:step for both axes")
    pe.set_defaults(func=cmd_eval)

    pp = sub.add_parser("periods", parents=[common], help="period group of a descriptor")
    pp.add_argument("descriptor")
    pp.set_defaults(func=cmd_periods)

    pc = sub.add_parser("classify", parents=[common], help="canonical form / family")
    pc.add_argument("descriptor")
    pc.set_defaults(func=cmd_classify)

    pm = sub.add_parser("compare", parents=[common], help="isomorphism verdict")
    pm.add_argument("descriptor1")
    pm.add_argument("descriptor2")
    pm.set_defaults(func=cmd_compare)

    pv = sub.add_parser("verify-aat", parents=[common],
                        help="addition-theorem certificates")
    pv.add_argument("descriptor")
    pv.set_defaults(func=cmd_verify_aat)

    pi = sub.add_parser("check-identities", parents=[common],
                        help="quasi-periodicity, conjugation, coset and scaling checks")
    pi.add_argument("--lattice", required=True)
    pi.set_defaults(func=cmd_check_identities)
    return p


_CFG_KEYS = ("tol", "seed", "max_degree", "max_denominator", "n_samples",
             "trunc_radius_factor", "target_abs_err")


def _merge_dash_values(argv: list[str]) -> list[str]:
    """Join '--grid -0.9:0.9:0.1' into '--grid=-0.9:0.9:0.1' so argparse does
    not mistake the leading-dash value for an option."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok == "--grid" and i + 1 < len(argv):
            out.append(f"--grid={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_merge_dash_values(list(argv if argv is not None else sys.argv[1:])))
    try:
        overrides = {k: getattr(args, k, None) for k in _CFG_KEYS}
        if getattr(args, "out", None):
            overrides["output_path"] = args.out
        cfg = load_config(getattr(args, "config", None), overrides)
        return args.func(args, cfg)
    except ParseError as exc:
        print(f"locnash: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (OSError, FileNotFoundError) as exc:
        print(f"locnash: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except LocNashError as exc:
        print(f"locnash: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"locnash: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
