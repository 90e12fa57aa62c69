"""Command-line interface: parse a job, run the requested pipelines, and
serialize one report object as JSON or text.

Exit codes: 0 success, 2 parse error, 3 domain error, 4 internal consistency
error, 5 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field

from .cycfield import CycField, RealCycField
from .ffield import FqCtx, context
from .fqpoly import PolyFq, parse_poly
from .galois import GaloisGroup
from .geometry import (
    ConsistencyError,
    Geometry,
    idempotent_is_trivial,
    idempotents_mod,
    pic_ell_cardinality,
    regulator_chi_part,
    zeta_numerator,
)
from .stickelberger import FContext

COMMANDS = (
    "classnumber",
    "theta",
    "stickelberger-ideal",
    "structure",
    "regulator",
    "pic-ell",
    "zeta",
    "all",
)

CACHE_FORMAT_VERSION = 1

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_CONSISTENCY = 4
EXIT_RESOURCE = 5


class ResourceCapError(Exception):
    """A configured resource cap (genus, group order, precision) was exceeded."""


class SpecParseError(ValueError):
    """The job specification itself is malformed (bad q, modulus, subgroup...)."""


@dataclass
class JobSpec:
    """A fully parsed, canonicalized job: round-trips through `canonical()`."""

    q: int
    char_poly: tuple[int, ...] | None
    modulus: str
    subgroup: tuple[str, ...]
    command: str
    ell: int | None
    fmt: str
    cache_dir: str | None
    precision: int | None
    stats: bool
    max_genus: int
    max_group: int

    def canonical(self) -> dict:
        """The canonical dictionary printed in every report; hashing this
        (plus the cache format version) gives the cache key."""
        return {
            "q": self.q,
            "char_poly": list(self.char_poly) if self.char_poly else None,
            "modulus": self.modulus,
            "subgroup": list(self.subgroup),
            "command": self.command,
            "ell": self.ell,
            "precision": self.precision,
            "max_genus": self.max_genus,
            "max_group": self.max_group,
        }


def _split_prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise SpecParseError(f"q must be a prime power >= 2, got {q}")
    for p in range(2, q + 1):
        if q % p == 0:
            e = 0
            n = q
            while n % p == 0:
                n //= p
                e += 1
            if n != 1:
                raise SpecParseError(f"q = {q} is not a prime power")
            return p, e
    raise SpecParseError(f"q = {q} is not a prime power")


def _parse_char_poly(text: str, p: int, e: int) -> tuple[int, ...]:
    try:
        coeffs = tuple(int(x.strip()) % p for x in text.split(","))
    except ValueError as exc:
        raise SpecParseError(f"cannot parse --char-poly {text!r}: {exc}") from exc
    if len(coeffs) != e + 1 or coeffs[-1] != 1:
        raise SpecParseError(
            f"--char-poly needs e+1 = {e + 1} comma-separated coefficients "
            "(constant first, leading 1)"
        )
    return coeffs


def build_spec(args: argparse.Namespace) -> JobSpec:
    p, e = _split_prime_power(args.q)
    char_poly = _parse_char_poly(args.char_poly, p, e) if args.char_poly else None
    if args.char_poly and e == 1:
        raise SpecParseError("--char-poly only applies to non-prime q")
    command = args.command_flag or args.command
    if command is None:
        raise SpecParseError("no command given (positional or --command)")
    if args.command_flag and args.command and args.command_flag != args.command:
        raise SpecParseError("positional command and --command disagree")
    if command not in COMMANDS:
        raise SpecParseError(f"unknown command {command!r}")
    ctx = FqCtx(p, e, char_poly) if char_poly else context(p, e)
    try:
        m = parse_poly(ctx, args.modulus)
    except ValueError as exc:
        raise SpecParseError(f"cannot parse modulus {args.modulus!r}: {exc}") from exc
    if m.degree < 1:
        raise SpecParseError("modulus must be non-constant")
    if m.coeffs[-1] != 1:
        raise SpecParseError("modulus must be monic")
    subgroup: list[str] = []
    if args.subgroup:
        for part in args.subgroup.split(","):
            try:
                g = parse_poly(ctx, part.strip())
            except ValueError as exc:
                raise SpecParseError(f"cannot parse subgroup element {part!r}: {exc}") from exc
            subgroup.append(g.format())
    if args.ell is not None and args.ell < 2:
        raise SpecParseError("--ell must be a prime >= 2")
    if args.precision is not None and args.precision < 1:
        raise SpecParseError("--precision must be positive")
    return JobSpec(
        q=args.q,
        char_poly=char_poly,
        modulus=m.format(),
        subgroup=tuple(sorted(set(subgroup))),
        command=command,
        ell=args.ell,
        fmt=args.format,
        cache_dir=args.cache_dir,
        precision=args.precision,
        stats=args.stats,
        max_genus=args.max_genus,
        max_group=args.max_group,
    )


# -- computation -------------------------------------------------------------------


def _cyc_json(x) -> dict:
    """A cyclotomic number as JSON: root-of-unity order and exact coordinates."""
    return {
        "root_order": x.n,
        "coords": [str(c) if c.denominator != 1 else int(c) for c in x.coords],
    }


def _field_context(spec: JobSpec) -> FContext:
    p, e = _split_prime_power(spec.q)
    ctx = FqCtx(p, e, spec.char_poly) if spec.char_poly else context(p, e)
    m = parse_poly(ctx, spec.modulus)
    G = GaloisGroup(m)
    if G.order > spec.max_group:
        raise ResourceCapError(
            f"[H_m:k] = {G.order} exceeds --max-group {spec.max_group}"
        )
    F = RealCycField(CycField(m))
    gens = [F.G.class_of(parse_poly(ctx, s)) for s in spec.subgroup]
    return FContext(F, gens)


def _genus_of(fc: FContext) -> int:
    cond_sum = sum(th.conductor().degree for th in fc.field_characters())
    assert cond_sum % 2 == 0
    return 1 - fc.degree + cond_sum // 2


def _check_genus_cap(spec: JobSpec, fc: FContext) -> None:
    g = _genus_of(fc)
    if g > spec.max_genus:
        raise ResourceCapError(f"genus {g} exceeds --max-genus {spec.max_genus}")


def _require_full_field(spec: JobSpec, what: str) -> None:
    if spec.subgroup:
        raise ValueError(
            f"{what} is implemented for the full field H_m only; "
            "--subgroup is not supported here"
        )


def _geometry(spec: JobSpec, fc: FContext) -> Geometry:
    _check_genus_cap(spec, fc)
    geom = Geometry(fc.F)
    if spec.precision:
        geom._prec = max(geom._prec, spec.precision)
    return geom


def _result_classnumber(spec: JobSpec, fc: FContext) -> dict:
    h = fc.class_number()
    l_values = [
        {"character": i, "order": th.order(), "value": _cyc_json(fc.l_value_primitive(th))}
        for i, th in enumerate(fc.field_characters())
        if not th.is_trivial()
    ]
    return {"h": h, "l_values": l_values}


def _result_theta(spec: JobSpec, fc: FContext) -> dict:
    theta = fc.theta()
    group = fc.Q if spec.subgroup else fc.G
    coeffs = theta.int_coeffs()
    return {
        "group_order": group.order,
        "coefficients": [
            {"rep": group.rep(i).format(), "value": coeffs[i]}
            for i in range(group.order)
        ],
    }


def _result_ideal(spec: JobSpec, fc: FContext) -> dict:
    ideal = fc.stickelberger_generators()
    return {
        "num_generators": len(ideal.generators),
        "index": ideal.index(),
        "smith_diagonal": ideal.smith_diagonal(),
    }


def _result_structure(spec: JobSpec, fc: FContext) -> dict:
    h = fc.class_number()
    ideal = fc.stickelberger_generators()
    r, factors = ideal.r_part_structure(h)
    return {"h": h, "r": r, "invariant_factors": factors}


def _result_zeta(spec: JobSpec, fc: FContext) -> dict:
    _check_genus_cap(spec, fc)
    z = zeta_numerator(fc)
    return {"genus": z["genus"], "counts": z["counts"], "numerator": z["numerator"], "h": z["h"]}


def _require_ell(spec: JobSpec) -> int:
    if spec.ell is None:
        raise SpecParseError(f"command {spec.command!r} requires --ell")
    return spec.ell


def _result_regulator(spec: JobSpec, fc: FContext, ell: int) -> dict:
    _require_full_field(spec, "the regulator pipeline")
    geom = _geometry(spec, fc)
    h = fc.class_number()
    h_ell = 1
    hh = h
    while hh % ell == 0:
        hh //= ell
        h_ell *= ell
    K = 1
    while ell**K <= h_ell:
        K += 1
    parts = []
    total = 1
    for idem, dim in idempotents_mod(fc.G, ell, K):
        if idempotent_is_trivial(idem, fc.G, ell**K):
            continue
        b = regulator_chi_part(geom, ell, idem, h)
        parts.append({"dim": dim, "b": b})
        total *= ell ** (b * dim)
    return {"ell": ell, "h": h, "h_ell": h_ell, "parts": parts, "regulator_order": total}


def _result_pic_ell(spec: JobSpec, fc: FContext, ell: int) -> dict:
    _require_full_field(spec, "the Pic_ell pipeline")
    geom = _geometry(spec, fc)
    h = fc.class_number()
    return {"ell": ell, "h": h, "pic_ell": pic_ell_cardinality(geom, ell, h)}


def build_report(spec: JobSpec) -> dict:
    fc = _field_context(spec)
    results: dict = {"degree": fc.degree, "genus": _genus_of(fc)}
    commands = (
        ["classnumber", "theta", "stickelberger-ideal", "structure", "zeta"]
        if spec.command == "all"
        else [spec.command]
    )
    if spec.command == "all" and spec.ell is not None and not spec.subgroup:
        commands += ["regulator", "pic-ell"]
    for cmd in commands:
        if cmd == "classnumber":
            results["classnumber"] = _result_classnumber(spec, fc)
        elif cmd == "theta":
            results["theta"] = _result_theta(spec, fc)
        elif cmd == "stickelberger-ideal":
            results["stickelberger_ideal"] = _result_ideal(spec, fc)
        elif cmd == "structure":
            results["structure"] = _result_structure(spec, fc)
        elif cmd == "zeta":
            results["zeta"] = _result_zeta(spec, fc)
        elif cmd == "regulator":
            results["regulator"] = _result_regulator(spec, fc, _require_ell(spec))
        elif cmd == "pic-ell":
            results["pic_ell"] = _result_pic_ell(spec, fc, _require_ell(spec))
    return {"spec": spec.canonical(), "results": results}


# -- cache -------------------------------------------------------------------------


def _cache_key(spec: JobSpec) -> str:
    payload = json.dumps(
        {"version": CACHE_FORMAT_VERSION, "spec": spec.canonical()},
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(payload.encode()).hexdigest()


class Cache:
    """Versioned, checksummed report cache with advisory file locking.

    Corrupt or mismatched entries are treated as misses; an unusable
    directory downgrades to uncached computation with a warning.
    """

    def __init__(self, directory: str | None):
        self.directory = directory
        self.usable = False
        if directory is None:
            return
        import os

        try:
            os.makedirs(directory, exist_ok=True)
            probe = os.path.join(directory, ".probe")
            with open(probe, "w") as fh:
                fh.write("ok")
            os.remove(probe)
            self.usable = True
        except OSError as exc:
            print(f"warning: cache directory unusable ({exc}); running uncached", file=sys.stderr)

    def _path(self, key: str) -> str:
        import os

        return os.path.join(self.directory, f"{key}.json")

    def _locked(self, key: str, mode: str):
        import contextlib
        import fcntl
        import os

        @contextlib.contextmanager
        def guard():
            lock_path = os.path.join(self.directory, f"{key}.lock")
            with open(lock_path, "w") as lock:
                fcntl.flock(lock, fcntl.LOCK_EX)
                try:
                    yield
                finally:
                    fcntl.flock(lock, fcntl.LOCK_UN)

        return guard()

    def get(self, key: str) -> str | None:
        if not self.usable:
            return None
        import os

        path = self._path(key)
        if not os.path.exists(path):
            return None
        try:
            with self._locked(key, "r"), open(path) as fh:
                entry = json.load(fh)
        except (OSError, json.JSONDecodeError):
            return None
        if not isinstance(entry, dict) or entry.get("version") != CACHE_FORMAT_VERSION:
            return None
        report = entry.get("report")
        checksum = entry.get("sha256")
        if not isinstance(report, str) or not isinstance(checksum, str):
            return None
        if hashlib.sha256(report.encode()).hexdigest() != checksum:
            return None
        return report

    def put(self, key: str, report: str) -> None:
        if not self.usable:
            return
        import os

        entry = {
            "version": CACHE_FORMAT_VERSION,
            "sha256": hashlib.sha256(report.encode()).hexdigest(),
            "report": report,
        }
        try:
            with self._locked(key, "w"):
                tmp = self._path(key) + ".tmp"
                with open(tmp, "w") as fh:
                    json.dump(entry, fh)
                os.replace(tmp, self._path(key))
        except OSError as exc:
            print(f"warning: cache write failed ({exc})", file=sys.stderr)


# -- output ------------------------------------------------------------------------


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2)


def render_text(report: dict) -> str:
    spec = report["spec"]
    res = report["results"]
    lines = [
        f"field: q = {spec['q']}, m = {spec['modulus']}"
        + (f", subgroup = {spec['subgroup']}" if spec["subgroup"] else ""),
        f"degree [F:k] = {res['degree']}, genus = {res['genus']}",
    ]
    if "classnumber" in res:
        lines.append(f"class number h = {res['classnumber']['h']}")
    if "theta" in res:
        terms = [
            f"{c['value']}*[{c['rep']}]" for c in res["theta"]["coefficients"] if c["value"]
        ]
        lines.append("theta = " + (" + ".join(terms) if terms else "0"))
    if "stickelberger_ideal" in res:
        si = res["stickelberger_ideal"]
        lines.append(
            f"stickelberger ideal: {si['num_generators']} generators, "
            f"index = {si['index']}, smith diagonal = {si['smith_diagonal']}"
        )
    if "structure" in res:
        st = res["structure"]
        lines.append(
            f"class group structure: h = {st['h']}, r-part = {st['r']}, "
            f"invariant factors = {st['invariant_factors']}"
        )
    if "zeta" in res:
        z = res["zeta"]
        lines.append(
            f"zeta numerator: genus = {z['genus']}, counts = {z['counts']}, "
            f"P = {z['numerator']}, h = P(1) = {z['h']}"
        )
    if "regulator" in res:
        r = res["regulator"]
        parts = ", ".join(f"(dim {p['dim']}: b = {p['b']})" for p in r["parts"])
        lines.append(
            f"regulator at ell = {r['ell']}: h_ell = {r['h_ell']}, "
            f"parts [{parts}], order = {r['regulator_order']}"
        )
    if "pic_ell" in res:
        pe = res["pic_ell"]
        lines.append(f"|Pic_ell(O_F)| at ell = {pe['ell']}: {pe['pic_ell']}")
    return "\n".join(lines) + "\n"


# -- entry point -------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rayclass",
        description="Arithmetic of narrow ray class fields of F_q(t): class "
        "numbers, Stickelberger elements and ideals, zeta numerators, and "
        "ell-adic class group structure.",
    )
    parser.add_argument("command", nargs="?", choices=COMMANDS, help="what to compute")
    parser.add_argument("--command", dest="command_flag", choices=COMMANDS,
                        help="alternative to the positional command")
    parser.add_argument("--q", type=int, required=True, help="field size q = p^e")
    parser.add_argument("--char-poly", help="defining polynomial of F_q over F_p for "
                        "non-prime q, as comma-separated integer coefficients, constant "
                        "first, leading 1 (default: lexicographically least)")
    parser.add_argument("--modulus", required=True, help="monic modulus m in F_q[t], e.g. 't^2+1'")
    parser.add_argument("--subgroup", help="comma-separated polynomials generating a "
                        "Galois subgroup; the job runs on the fixed field")
    parser.add_argument("--ell", type=int, help="prime ell for regulator / pic-ell")
    parser.add_argument("--format", choices=("json", "text"), default="json")
    parser.add_argument("--cache-dir", help="directory for the report cache")
    parser.add_argument("--precision", type=int, help="initial Laurent series precision")
    parser.add_argument("--stats", action="store_true", help="print timing/cache stats to stderr")
    parser.add_argument("--max-genus", type=int, default=40,
                        help="refuse geometric computations above this genus")
    parser.add_argument("--max-group", type=int, default=2000,
                        help="refuse fields with [H_m:k] above this bound")
    return parser


def run(spec: JobSpec) -> str:
    """Compute (or fetch from cache) the serialized report for a job."""
    cache = Cache(spec.cache_dir)
    key = _cache_key(spec)
    t0 = time.monotonic()
    cached = cache.get(key)
    if cached is not None:
        if spec.stats:
            print(f"stats: cache hit ({time.monotonic() - t0:.3f}s)", file=sys.stderr)
        report = json.loads(cached)
    else:
        report = build_report(spec)
        cache.put(key, json.dumps(report, sort_keys=True, separators=(",", ":")))
        if spec.stats:
            print(f"stats: cache miss, computed in {time.monotonic() - t0:.3f}s", file=sys.stderr)
    return render_json(report) if spec.fmt == "json" else render_text(report)


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        spec = build_spec(args)
    except SpecParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        out = run(spec)
    except SpecParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ResourceCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ConsistencyError as exc:
        print(f"internal consistency error: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except (ValueError, ZeroDivisionError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    sys.stdout.write(out)
    if not out.endswith("\n"):
        sys.stdout.write("\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
