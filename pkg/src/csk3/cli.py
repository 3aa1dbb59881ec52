"""Command-line front end: twist-rank, spr, atlas, density, solubility,
root-number and descent subcommands with JSON/CSV reports and optional SVG
scatter output.

Exit codes: 0 on success, 2 when a search or verdict comes back
inconclusive, 1 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from pathlib import Path

from . import criteria, diagnostics, surface
from .cache import PointCache
from .elliptic import (
    DEFAULT_SEARCH_BOUND,
    MINUS,
    PLUS,
    RankPositivityCertificate,
    SearchFound,
    certify_positive_rank,
)
from .numtheory import squarefree_class

SCHEMA_VERSION = 1
CACHE_ENV_VAR = "CSK3_CACHE"

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCONCLUSIVE = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage problems must exit 1, not argparse's default 2
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    search_height_bound: int = DEFAULT_SEARCH_BOUND
    factorization_bound: int = 2 ** 63
    grid: tuple[int, int] = (10, 3)
    gap_precision: int = 30
    solubility_precision: int = 12
    allow_external_facts: bool = False
    output_format: str = "json"
    cache_path: str | None = None
    seed: int = 0

    def __post_init__(self):
        if self.search_height_bound < 1 or self.gap_precision < 1 \
                or self.solubility_precision < 1 or min(self.grid) < 1 \
                or self.factorization_bound < 2:
            raise UsageError("all bounds must be positive")


# ---------------------------------------------------------------------------
# serialization helpers


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, separators=(",", ": ")) + "\n"


def _frac_str(q) -> str:
    return str(Fraction(q))


def _point_json(P) -> dict | None:
    if P is None:
        return None
    return {"x": _frac_str(P.x), "y": _frac_str(P.y)}


def _provenance_json(prov) -> dict:
    if isinstance(prov, SearchFound):
        return {"kind": "search", "height_bound": prov.height_bound, "method": prov.method}
    return {"kind": "external", "claimed_rank": prov.claimed_rank,
            "citation": prov.citation, "flagged": True}


def _certificate_json(cert: RankPositivityCertificate | None) -> dict | None:
    if cert is None:
        return None
    return {
        "twist": cert.curve.D,
        "family": cert.curve.family,
        "model": f"y^2 = x^3 {'-' if cert.curve.family == MINUS else '+'} {cert.curve.D ** 2}x",
        "witness": _point_json(cert.witness),
        "provenance": _provenance_json(cert.provenance),
        "rank_lower_bound": cert.rank_lower_bound(),
    }


def rows_to_csv(rows: list[dict], columns: list[str]) -> str:
    out = [",".join(columns)]
    for row in rows:
        out.append(",".join(str(row.get(c, "")) for c in columns))
    return "\n".join(out) + "\n"


def write_svg_scatter(path: str, points: list[tuple[float, float]],
                      title: str, xlabel: str, ylabel: str) -> None:
    """Self-contained SVG 1.1 scatter plot, no external assets."""
    width, height, margin = 640, 480, 60
    xs = [p[0] for p in points] or [0.0]
    ys = [p[1] for p in points] or [0.0]
    xlo, xhi = min(xs), max(xs)
    ylo, yhi = min(ys), max(ys)
    if xhi == xlo:
        xlo, xhi = xlo - 1.0, xhi + 1.0
    if yhi == ylo:
        ylo, yhi = ylo - 1.0, yhi + 1.0

    def sx(x):
        return margin + (x - xlo) / (xhi - xlo) * (width - 2 * margin)

    def sy(y):
        return height - margin - (y - ylo) / (yhi - ylo) * (height - 2 * margin)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2}" y="24" text-anchor="middle" font-size="16">{title}</text>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" stroke="black"/>',
        f'<text x="{width / 2}" y="{height - 16}" text-anchor="middle" font-size="12">{xlabel}</text>',
        f'<text x="18" y="{height / 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 18 {height / 2})">{ylabel}</text>',
        f'<text x="{margin}" y="{height - margin + 16}" font-size="10">{xlo:.4g}</text>',
        f'<text x="{width - margin}" y="{height - margin + 16}" text-anchor="end" '
        f'font-size="10">{xhi:.4g}</text>',
        f'<text x="{margin - 4}" y="{height - margin}" text-anchor="end" font-size="10">{ylo:.4g}</text>',
        f'<text x="{margin - 4}" y="{margin + 4}" text-anchor="end" font-size="10">{yhi:.4g}</text>',
    ]
    for x, y in points:
        parts.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3" '
                     f'fill="steelblue" fill-opacity="0.7"/>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# cached certificate lookup


def _certify_with_cache(D: int, family: str, config: RunConfig,
                        cache: PointCache | None) -> RankPositivityCertificate | None:
    if cache is not None:
        hit = cache.get(family, D)
        if hit is not None:
            return hit
    cert = certify_positive_rank(
        D, family, search_budget=config.search_height_bound,
        allow_external_facts=config.allow_external_facts)
    if cert is not None and cache is not None:
        cache.put(cert)
    return cert


def _open_cache(config: RunConfig) -> PointCache | None:
    path = config.cache_path or os.environ.get(CACHE_ENV_VAR)
    return PointCache(path) if path else None


def _spr_with_cache(d: int, a: int, C: int, config: RunConfig,
                    cache: PointCache | None) -> surface.SprOutcome:
    from .quartic import QuarticTorsor, first_torsor_points

    if d == 0 or not is_squarefree(d):
        raise UsageError(f"d must be squarefree nonzero, got {d}")
    if C < 1 or not is_squarefree(C):
        raise UsageError(f"C must be squarefree positive, got {C}")
    torsor = QuarticTorsor.fermat(a, C)
    orbit = first_torsor_points(torsor, min(config.search_height_bound, 1000))
    torsor_witness = orbit[0] if orbit else None
    jac = _certify_with_cache(squarefree_class(2 * a * C).representative, MINUS, config, cache)
    cur = _certify_with_cache(squarefree_class(d * C).representative, MINUS, config, cache)
    return surface.SprOutcome(d, a, C, torsor_witness, jac, cur)


# ---------------------------------------------------------------------------
# subcommands


def _validated_twist(D: int, config: RunConfig) -> int:
    if D < 1 or squarefree_class(D, config.factorization_bound).representative != D:
        raise UsageError(f"D must be a positive squarefree integer, got {D}")
    return D


def cmd_twist_rank(args, config: RunConfig) -> int:
    D = _validated_twist(args.D, config)
    cache = _open_cache(config)
    cert = _certify_with_cache(D, args.family, config, cache)
    if cache is not None:
        cache.save()
    expected = criteria.expected_rank_family(D)
    omega = root_number_or_none(D, args.family)
    parity_note = None
    if cert is not None and cert.witness is not None and omega == 1:
        # conjectural commentary only, never asserted anywhere
        parity_note = "root number +1 with positive rank suggests even rank >= 2"
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "twist-rank",
        "D": D,
        "family": args.family,
        "verdict": "positive-rank" if cert is not None else "inconclusive",
        "certificate": _certificate_json(cert),
        "root_number": omega,
        "parity_note": parity_note,
        "expected_family": {"expected": expected.expected,
                            "family": expected.family,
                            "citation": expected.citation},
        "search_height_bound": config.search_height_bound,
    }
    _emit(canonical_json(report), args.output)
    return EXIT_OK if cert is not None else EXIT_INCONCLUSIVE


def root_number_or_none(D: int, family: str) -> int | None:
    if family != MINUS or D < 1:
        return None
    return criteria.root_number(D)


def cmd_spr(args, config: RunConfig) -> int:
    cache = _open_cache(config)
    outcome = _spr_with_cache(args.d, args.a, args.C, config, cache)
    if cache is not None:
        cache.save()
    cert = outcome.certificate
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "spr",
        "d": args.d,
        "a": args.a,
        "C": args.C,
        "verdict": "certified" if cert is not None else "inconclusive",
        "inconclusive_legs": outcome.inconclusive_legs,
        "torsor_witness": None if outcome.torsor_witness is None else
            {"t": _frac_str(outcome.torsor_witness.t), "s": _frac_str(outcome.torsor_witness.s)},
        "jacobian_leg": _certificate_json(outcome.jacobian_witness),
        "curve_leg": _certificate_json(outcome.curve_witness),
        "uses_external_facts": bool(cert is not None and cert.uses_external_facts()),
        "search_height_bound": config.search_height_bound,
    }
    _emit(canonical_json(report), args.output)
    return EXIT_OK if cert is not None else EXIT_INCONCLUSIVE


def _build_atlas(args, config: RunConfig):
    cache = _open_cache(config)
    outcome = _spr_with_cache(args.d, args.a, args.C, config, cache)
    if cache is not None:
        cache.save()
    cert = outcome.certificate
    if cert is None:
        return None, outcome
    if cert.curve_witness.witness is None:
        return None, outcome  # external rank fact carries no point to expand
    return surface.atlas_generate(args.d, args.a, args.C, cert, config.grid), outcome


def cmd_atlas(args, config: RunConfig) -> int:
    atlas, outcome = _build_atlas(args, config)
    if atlas is None:
        report = {
            "schema_version": SCHEMA_VERSION,
            "command": "atlas",
            "verdict": "inconclusive",
            "inconclusive_legs": outcome.inconclusive_legs or ["curve witness has no coordinates"],
        }
        _emit(canonical_json(report), args.output)
        return EXIT_INCONCLUSIVE
    points = [{"X": _frac_str(P.X), "Y": _frac_str(P.Y), "T": _frac_str(P.T)}
              for P in atlas.points]
    if args.format == "csv":
        _emit(rows_to_csv(points, ["T", "X", "Y"]), args.output)
    else:
        report = {
            "schema_version": SCHEMA_VERSION,
            "command": "atlas",
            "d": atlas.d, "a": atlas.a, "C": atlas.C,
            "grid": list(atlas.grid),
            "count": len(atlas.points),
            "skipped_exceptional": atlas.skipped_exceptional,
            "points": points,
            "verdict": "ok",
        }
        _emit(canonical_json(report), args.output)
    if args.svg:
        coords = [(float(P.T), float(P.X)) for P in atlas.points]
        write_svg_scatter(args.svg, coords,
                          f"atlas d={atlas.d} a={atlas.a} C={atlas.C}", "T", "X")
    return EXIT_OK


def cmd_density(args, config: RunConfig) -> int:
    atlas, outcome = _build_atlas(args, config)
    if atlas is None:
        _emit(canonical_json({"schema_version": SCHEMA_VERSION, "command": "density",
                              "verdict": "inconclusive",
                              "inconclusive_legs": outcome.inconclusive_legs}), args.output)
        return EXIT_INCONCLUSIVE
    lo, hi = (Fraction(v) for v in args.interval.split(":"))
    report = diagnostics.density_report(atlas, (lo, hi), config.gap_precision)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "density",
        "d": atlas.d, "a": atlas.a, "C": atlas.C,
        "grid": list(atlas.grid),
        "interval": [_frac_str(lo), _frac_str(hi)],
        "samples": report.samples,
        "max_gap": str(report.max_gap),
        "both_y_signs_present": report.both_y_signs_present,
        "sample_source": report.sample_source,
        "verdict": "ok",
    }
    _emit(canonical_json(payload), args.output)
    if args.svg:
        coords = [(float(P.T), float(P.Y)) for P in atlas.points
                  if lo <= P.T <= hi]
        write_svg_scatter(args.svg, coords,
                          f"density d={atlas.d} a={atlas.a} C={atlas.C}", "T", "Y")
    return EXIT_OK


def cmd_solubility(args, config: RunConfig) -> int:
    if args.a == 1:
        verdict = criteria.solubility_a1(args.C)
    elif args.a == 2:
        verdict = criteria.solubility_a2(args.C)
    else:
        raise UsageError("solubility criteria exist for a = 1 and a = 2 only")
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "solubility",
        "a": args.a,
        "C": args.C,
        "verdict": verdict.kind,
        "criterion": verdict.criterion_tag,
    }
    if args.check_places:
        from .quartic import QuarticTorsor
        torsor = QuarticTorsor.fermat(args.a, args.C)
        checks = {}
        for place in args.check_places.split(","):
            key = place.strip()
            spot = "real" if key == "real" else int(key)
            checks[key] = criteria.brute_local_solubility(
                torsor, spot, config.solubility_precision)
        report["brute_checks"] = checks
    _emit(canonical_json(report), args.output)
    return EXIT_OK if verdict.kind != "unknown" else EXIT_INCONCLUSIVE


def cmd_root_number(args, config: RunConfig) -> int:
    if args.D is not None:
        value = criteria.root_number(args.D)
        _emit(canonical_json({"schema_version": SCHEMA_VERSION, "command": "root-number",
                              "D": args.D, "root_number": value}), args.output)
        return EXIT_OK
    if args.d is None or args.a is None:
        raise UsageError("need either --D or both --d and --a")
    ts = []
    if args.T:
        ts = [Fraction(v) for v in args.T.split(",")]
    if args.sample:
        rng = random.Random(config.seed)
        bound = args.max_height
        while len(ts) < args.sample:
            l = rng.randint(-bound, bound)
            m = rng.randint(1, bound)
            if gcd(l, m) == 1:
                ts.append(Fraction(l, m))
    if not ts:
        raise UsageError("no fibers requested: pass --T or --sample")
    rows = diagnostics.root_number_survey(args.d, args.a, ts)
    table = [{"T": _frac_str(r.T), "fiber_class": r.fiber_class.representative,
              "root_number": r.omega if r.supported else "unsupported"}
             for r in rows]
    if args.format == "csv":
        _emit(rows_to_csv(table, ["T", "fiber_class", "root_number"]), args.output)
    else:
        _emit(canonical_json({"schema_version": SCHEMA_VERSION, "command": "root-number",
                              "d": args.d, "a": args.a, "rows": table}), args.output)
    return EXIT_OK


def cmd_descent(args, config: RunConfig) -> int:
    """Selmer-side bookkeeping for the pair (quartic over C, twist by 2C)."""
    C = args.C
    twist_2C = squarefree_class(2 * C).representative
    rank_info = None
    if config.allow_external_facts:
        from .facts import lookup_fact
        rank_info = lookup_fact(twist_2C, MINUS)
    if rank_info is None:
        cert = certify_positive_rank(twist_2C, search_budget=config.search_height_bound)
        rank_info = cert
    verdict = criteria.star_star_verdict(C, rank_info)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "descent",
        "C": C,
        "twist_2C": twist_2C,
        "solubility": criteria.solubility_a1(C).kind,
        "omega": verdict.omega,
        "selmer_upper_bound": criteria.selmer_upper_bound(twist_2C),
        "target_rank": verdict.target_rank,
        "rank_lower_bound": verdict.rank_lower_bound,
        "known_rank": verdict.known_rank,
        "used_external_facts": verdict.used_external,
        "rank_equality_verdict": verdict.kind,
        "conclusion": verdict.conclusion,
        "isogeny": {
            "source": f"y^2 = x^3 - {twist_2C ** 2}x",
            "image": f"y^2 = x^3 + {4 * twist_2C ** 2}x",
            "degree": 2,
        },
    }
    _emit(canonical_json(report), args.output)
    return EXIT_OK if verdict.kind != "inconclusive" else EXIT_INCONCLUSIVE


# ---------------------------------------------------------------------------
# argument wiring


def build_parser() -> _Parser:
    parser = _Parser(prog="csk3", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--height-bound", type=int, default=DEFAULT_SEARCH_BOUND,
                       help="naive search height budget (default %(default)s)")
        p.add_argument("--factor-bound", type=int, default=2 ** 63,
                       help="trial-division budget for input validation")
        p.add_argument("--allow-external-facts", action="store_true",
                       help="permit flagged rank facts from the curated table")
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--output", help="write the report here instead of stdout")
        p.add_argument("--cache", help=f"point cache path (or ${CACHE_ENV_VAR})")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--grid", default="10x3", help="atlas grid IxJ (default %(default)s)")
        p.add_argument("--precision", type=int, default=30,
                       help="significant digits for gap statistics")

    p = sub.add_parser("twist-rank", help="certify positive rank of a quadratic twist")
    p.add_argument("D", type=int)
    p.add_argument("--family", choices=[MINUS, PLUS], default=MINUS)
    common(p)
    p.set_defaults(handler=cmd_twist_rank)

    p = sub.add_parser("spr", help="simultaneous-positive-rank certificate")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-a", type=int, required=True)
    p.add_argument("-C", type=int, required=True)
    common(p)
    p.set_defaults(handler=cmd_spr)

    p = sub.add_parser("atlas", help="generate exact surface points from a certificate")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-a", type=int, required=True)
    p.add_argument("-C", type=int, required=True)
    p.add_argument("--svg", help="write a (T, X) scatter here")
    common(p)
    p.set_defaults(handler=cmd_atlas)

    p = sub.add_parser("density", help="gap statistics of atlas T-projections")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-a", type=int, required=True)
    p.add_argument("-C", type=int, required=True)
    p.add_argument("--interval", default="-2:2",
                   help="LO:HI, use --interval=-2:2 for negative bounds (default %(default)s)")
    p.add_argument("--svg", help="write a (T, Y) scatter here")
    common(p)
    p.set_defaults(handler=cmd_density)

    p = sub.add_parser("solubility", help="everywhere-local solubility criteria")
    p.add_argument("-a", type=int, required=True, choices=[1, 2])
    p.add_argument("-C", type=int, required=True)
    p.add_argument("--check-places", help="comma list of primes and/or 'real' to brute-check")
    common(p)
    p.set_defaults(handler=cmd_solubility)

    p = sub.add_parser("root-number", help="root numbers of twists or fiber surveys")
    p.add_argument("--D", type=int, help="single squarefree twist")
    p.add_argument("--d", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--T", help="comma list of fiber coordinates")
    p.add_argument("--sample", type=int, help="number of random fibers T = l/m")
    p.add_argument("--max-height", type=int, default=20)
    common(p)
    p.set_defaults(handler=cmd_root_number)

    p = sub.add_parser("descent", help="Selmer bookkeeping and the rank-equality verdict")
    p.add_argument("-C", type=int, required=True)
    common(p)
    p.set_defaults(handler=cmd_descent)

    return parser


def _config_from(args) -> RunConfig:
    grid = args.grid.lower().split("x")
    if len(grid) != 2:
        raise UsageError(f"bad grid {args.grid!r}, expected IxJ")
    return RunConfig(
        search_height_bound=args.height_bound,
        factorization_bound=args.factor_bound,
        grid=(int(grid[0]), int(grid[1])),
        gap_precision=args.precision,
        allow_external_facts=args.allow_external_facts,
        output_format=args.format,
        cache_path=args.cache,
        seed=args.seed,
    )


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = _config_from(args)
        return args.handler(args, config)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
