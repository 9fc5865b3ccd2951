"""Command-line surface: one verb per computation, JSON-first output.

Every successful invocation prints a result envelope

    {"schema": 1, "request": ..., "result": ..., "provenance": ..., "meta": ...}

whose schema/request/result/provenance portion is deterministic for a
given request and tool version; wall-clock data lives only under
"meta".  All integers inside result and provenance are serialized as
decimal strings, since group orders overflow 64-bit consumers already
at moderate parameters.  Exit codes: 0 success, 1 computation error
(machine-readable error object on stdout), 2 usage error.

An opt-in read-through cache (--cache-dir or the BPLINKS_CACHE_DIR
environment variable) stores payloads keyed by the canonical request
hash and tool version, with a content checksum so tampered or
truncated entries are silently recomputed.
"""

from __future__ import annotations

import argparse
import csv
import enum
import hashlib
import io
import json
import os
import sys
import tempfile
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .classify import (
    ClassificationRecord,
    bp_order,
    classification_record,
    table_emit,
)
from .errors import LinkInvariantError
from .link_model import (
    Family,
    FamilySpec,
    family_exponents,
    is_ricci_positive,
    make_link,
)
from .monodromy import MATRIX_BUDGET_DEFAULT, cover_homology, link_rank
from .signature import LATTICE_BUDGET_DEFAULT, compute_signature, tau
from .exact_arith import DEFAULT_PRECISION_BITS
from .verification import VerifyOptions, run_all

SCHEMA_VERSION = 1
CACHE_ENV = "BPLINKS_CACHE_DIR"

_FAMILY_CHOICES = tuple(f.value for f in Family)


# ----------------------------------------------------------------------
# Serialization helpers
# ----------------------------------------------------------------------

def _encode(value):
    """Recursively turn a result structure into JSON-safe data.

    Integers (but not booleans) become decimal strings; Fractions
    render as 'p/q' via str(); enums flatten to their value.
    """
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    if isinstance(value, dict):
        return {k: _encode(v) for k, v in value.items()}
    return value


def _canonical_bytes(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()


def _render_json(payload: dict, meta: dict) -> str:
    envelope = dict(payload)
    envelope["meta"] = meta
    return json.dumps(envelope, sort_keys=True, indent=2)


# ----------------------------------------------------------------------
# Cache
# ----------------------------------------------------------------------

def _cache_dir(args) -> Path | None:
    if getattr(args, "cache_dir", None):
        return Path(args.cache_dir)
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else None


def _cache_key(request: dict) -> str:
    seed = _canonical_bytes({"request": request, "version": __version__})
    return hashlib.sha256(seed).hexdigest()


def _cache_read(store: Path, key: str) -> dict | None:
    path = store / f"{key}.json"
    try:
        wrapper = json.loads(path.read_text())
        payload = wrapper["payload"]
        if wrapper["checksum"] == hashlib.sha256(_canonical_bytes(payload)).hexdigest():
            return payload
    except (OSError, ValueError, KeyError, TypeError):
        pass
    return None


def _cache_write(store: Path, key: str, payload: dict) -> None:
    store.mkdir(parents=True, exist_ok=True)
    wrapper = {
        "checksum": hashlib.sha256(_canonical_bytes(payload)).hexdigest(),
        "payload": payload,
    }
    handle = tempfile.NamedTemporaryFile(mode="w", dir=store, suffix=".tmp", delete=False)
    try:
        with handle:
            json.dump(wrapper, handle, sort_keys=True)
        os.replace(handle.name, store / f"{key}.json")
    except OSError:
        try:
            os.unlink(handle.name)
        except OSError:
            pass
        raise


# ----------------------------------------------------------------------
# Argument plumbing
# ----------------------------------------------------------------------

def _parse_int_list(text: str, flag: str, parser) -> tuple[int, ...]:
    try:
        values = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        parser.error(f"{flag} expects a comma-separated integer list, got {text!r}")
    if not values:
        parser.error(f"{flag} got an empty list")
    return values


def _add_link_source_args(sub) -> None:
    sub.add_argument("--exponents", help="comma-separated exponents, e.g. 6,3,2,2,2")
    sub.add_argument("--family", choices=_FAMILY_CHOICES, help="family shorthand")
    sub.add_argument("--n", type=int, help="family dimension parameter")
    sub.add_argument("--k", type=int, help="family member index")
    sub.add_argument("--i", type=int, default=1, help="cover-fold index (sphere-product only)")


def _add_common_args(sub) -> None:
    sub.add_argument(
        "--format",
        choices=("json", "csv", "markdown"),
        default="json",
        dest="fmt",
        help="output format (default json)",
    )
    sub.add_argument("--precision-bits", type=int, default=None, help="starting interval precision")
    sub.add_argument("--budget", type=int, default=None, help="lattice/matrix size budget")
    sub.add_argument("--cache-dir", default=None, help=f"cache directory (or ${CACHE_ENV})")


def _resolve_exponents(args, parser) -> tuple[tuple[int, ...], dict]:
    """Exponents plus the request fragment describing their origin."""
    if args.exponents and args.family:
        parser.error("--exponents and --family are mutually exclusive")
    if args.exponents:
        exps = _parse_int_list(args.exponents, "--exponents", parser)
        return exps, {"exponents": list(exps), "source": "ad-hoc"}
    if args.family:
        if args.n is None or args.k is None:
            parser.error("--family requires --n and --k")
        spec = FamilySpec(Family(args.family), n=args.n, k=args.k, i=args.i)
        exps = family_exponents(spec)
        return exps, {
            "family": args.family,
            "n": args.n,
            "k": args.k,
            "i": args.i,
            "source": "family",
        }
    parser.error("one of --exponents or --family is required")
    raise AssertionError("unreachable")


def _lattice_budget(args) -> int:
    return args.budget if args.budget is not None else LATTICE_BUDGET_DEFAULT


def _matrix_budget(args) -> int:
    return args.budget if args.budget is not None else MATRIX_BUDGET_DEFAULT


def _start_bits(args) -> int:
    return args.precision_bits if args.precision_bits is not None else DEFAULT_PRECISION_BITS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bplinks",
        description="Exact invariants of Brieskorn-Pham links.",
    )
    parser.add_argument("--version", action="version", version=f"bplinks {__version__}")
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p = subs.add_parser("invariants", help="numerical data of one link")
    _add_link_source_args(p)
    _add_common_args(p)
    p.add_argument("--method", choices=("lattice", "dp", "zagier", "auto"), default="auto")

    p = subs.add_parser("signature", help="Milnor fibre signature")
    _add_link_source_args(p)
    _add_common_args(p)
    p.add_argument("--method", choices=("lattice", "dp", "zagier", "auto"), default="auto")
    p.add_argument("--modulus", type=int, default=None, help="common multiple for the cotangent sum")

    p = subs.add_parser("tau", help="tau_k by the closed cotangent identity")
    p.add_argument("--k", required=True, help="comma-separated k list")
    _add_common_args(p)

    p = subs.add_parser("bp-order", help="order of bP_{4m}")
    p.add_argument("--m", type=int, required=True)
    _add_common_args(p)

    p = subs.add_parser("cover-homology", help="homology of a cyclic branched cover")
    p.add_argument("--exponents", required=True, help="branch exponents, e.g. 3,2,2,2")
    p.add_argument("--fold", type=int, required=True)
    _add_common_args(p)

    p = subs.add_parser("classify", help="classification record of a family member")
    p.add_argument("--family", choices=_FAMILY_CHOICES, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--i", type=int, default=1)
    _add_common_args(p)

    p = subs.add_parser("table", help="count table rows for dimension 7 or 11")
    p.add_argument("--dim", type=int, required=True, choices=(7, 11))
    p.add_argument("--k", required=True, help="comma-separated k list")
    _add_common_args(p)

    p = subs.add_parser("verify", help="run the shipped acceptance checks")
    p.add_argument("--criteria", default=None, help="comma-separated criterion ids (default all)")
    _add_common_args(p)

    return parser


# ----------------------------------------------------------------------
# Subcommand handlers: each returns (request, compute) where compute
# yields (result, provenance) only when the cache cannot answer.
# ----------------------------------------------------------------------

def _provenance(args, **extra) -> dict:
    base = {
        "tool": "bplinks",
        "version": __version__,
        "budgets": {"lattice": _lattice_budget(args), "matrix": _matrix_budget(args)},
        "precision_bits": _start_bits(args),
    }
    base.update(extra)
    return base


def _handle_invariants(args, parser):
    exps, fragment = _resolve_exponents(args, parser)
    request = {"subcommand": "invariants", "method": args.method, **fragment}

    def compute():
        link = make_link(exps)
        signature_value = None
        method_used = None
        if link.fibre_dimension % 2 == 0:
            report = compute_signature(
                exps,
                method=args.method,
                lattice_budget=_lattice_budget(args),
                start_bits=_start_bits(args),
            )
            signature_value = report.value
            method_used = report.method
        result = {
            "exponents": list(link.exponents),
            "variable_count": link.variable_count,
            "link_dimension": link.link_dimension,
            "milnor_number": link.milnor_number,
            "degree": link.degree,
            "weights": list(link.weights),
            "rank": link_rank(exps),
            "signature": signature_value,
            "ricci_positive": is_ricci_positive(link.weights, link.degree),
        }
        return result, _provenance(args, method=method_used)

    return request, compute


def _handle_signature(args, parser):
    exps, fragment = _resolve_exponents(args, parser)
    request = {
        "subcommand": "signature",
        "method": args.method,
        "modulus": args.modulus,
        **fragment,
    }

    def compute():
        report = compute_signature(
            exps,
            method=args.method,
            modulus=args.modulus,
            lattice_budget=_lattice_budget(args),
            start_bits=_start_bits(args),
        )
        result = {
            "exponents": list(report.exponents),
            "value": report.value,
            "method": report.method,
            "modulus": report.modulus,
            "precision_bits": report.precision_bits,
        }
        return result, _provenance(args, method=report.method)

    return request, compute


def _handle_tau(args, parser):
    ks = _parse_int_list(args.k, "--k", parser)
    request = {"subcommand": "tau", "k": list(ks)}

    def compute():
        values = [{"k": k, "tau": tau(k, start_bits=_start_bits(args))} for k in ks]
        return {"values": values}, _provenance(args)

    return request, compute


def _handle_bp_order(args, parser):
    request = {"subcommand": "bp-order", "m": args.m}

    def compute():
        info = bp_order(args.m)
        result = {
            "m": info.m,
            "order": info.order,
            "power_of_two": info.power_of_two,
            "mersenne_factor": info.mersenne_factor,
            "bernoulli_numerator": info.bernoulli_numerator,
        }
        return result, _provenance(args)

    return request, compute


def _handle_cover_homology(args, parser):
    branch = _parse_int_list(args.exponents, "--exponents", parser)
    if args.fold < 1:
        parser.error("--fold must be >= 1")
    request = {"subcommand": "cover-homology", "exponents": list(branch), "fold": args.fold}

    def compute():
        group = cover_homology(branch, args.fold, budget=_matrix_budget(args))
        result = {
            "branch": list(branch),
            "fold": args.fold,
            "rank": group.rank,
            "torsion_divisors": list(group.torsion_divisors),
            "group": str(group),
        }
        return result, _provenance(args)

    return request, compute


def _record_result(record: ClassificationRecord) -> dict:
    bp = record.bp_order
    return {
        "family": record.spec.family,
        "n": record.spec.n,
        "k": record.spec.k,
        "i": record.spec.i,
        "exponents": list(record.exponents),
        "dimension": record.dimension,
        "homology": {
            "rank": record.homology.rank,
            "torsion_divisors": list(record.homology.torsion_divisors),
            "group": str(record.homology),
        },
        "fibre_signature": record.fibre_signature,
        "bp_order": None
        if bp is None
        else {
            "m": bp.m,
            "order": bp.order,
            "power_of_two": bp.power_of_two,
            "mersenne_factor": bp.mersenne_factor,
            "bernoulli_numerator": bp.bernoulli_numerator,
        },
        "kervaire": record.kervaire,
        "offset": record.offset,
        "base_exponents": None if record.base_exponents is None else list(record.base_exponents),
        "label": record.label,
    }


def _handle_classify(args, parser):
    request = {
        "subcommand": "classify",
        "family": args.family,
        "n": args.n,
        "k": args.k,
        "i": args.i,
    }

    def compute():
        spec = FamilySpec(Family(args.family), n=args.n, k=args.k, i=args.i)
        record = classification_record(spec)
        return _record_result(record), _provenance(args)

    return request, compute


def _handle_table(args, parser):
    ks = _parse_int_list(args.k, "--k", parser)
    request = {"subcommand": "table", "dim": args.dim, "k": list(ks)}

    def compute():
        data = table_emit(args.dim, ks)
        result = {
            "dimension": data.dimension,
            "n": data.n,
            "bp_order": data.bp.order,
            "rows": [
                {"k": row.k, "tau": row.tau, "count": row.count, "ratio": row.ratio}
                for row in data.rows
            ],
        }
        return result, _provenance(args)

    return request, compute


def _handle_verify(args, parser):
    criteria = None
    if args.criteria:
        criteria = _parse_int_list(args.criteria, "--criteria", parser)
    request = {"subcommand": "verify", "criteria": list(criteria) if criteria else None}

    def compute():
        options = VerifyOptions(
            lattice_budget=args.budget,
            matrix_budget=args.budget,
            precision_bits=args.precision_bits,
        )
        results = run_all(options, criteria)
        result = {
            "results": [
                {"cid": r.cid, "title": r.title, "status": r.status, "detail": r.detail}
                for r in results
            ],
            "all_passed": all(r.status != "FAIL" for r in results),
        }
        return result, _provenance(args)

    return request, compute


_HANDLERS = {
    "invariants": _handle_invariants,
    "signature": _handle_signature,
    "tau": _handle_tau,
    "bp-order": _handle_bp_order,
    "cover-homology": _handle_cover_homology,
    "classify": _handle_classify,
    "table": _handle_table,
    "verify": _handle_verify,
}

# verify runs a suite with injectable state; caching it would hide that.
_UNCACHED = {"verify"}


# ----------------------------------------------------------------------
# Non-JSON rendering
# ----------------------------------------------------------------------

def _flatten_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, list):
        return " ".join(_flatten_cell(v) for v in value)
    if isinstance(value, dict):
        return " ".join(f"{k}={_flatten_cell(v)}" for k, v in value.items())
    return str(value)


def _tabular(subcommand: str, result: dict) -> tuple[list[str], list[list[str]]]:
    """(header, rows) underlying the csv and markdown renderings."""
    if subcommand == "table":
        header = ["k", "tau", "count", "ratio"]
        rows = [[row["k"], row["tau"], row["count"], row["ratio"]] for row in result["rows"]]
        return header, rows
    if subcommand == "tau":
        header = ["k", "tau"]
        rows = [[row["k"], row["tau"]] for row in result["values"]]
        return header, rows
    if subcommand == "verify":
        header = ["status", "cid", "title", "detail"]
        rows = [
            [row["status"], row["cid"], row["title"], row["detail"]]
            for row in result["results"]
        ]
        return header, rows
    header = ["field", "value"]
    rows = [[key, _flatten_cell(value)] for key, value in result.items()]
    return header, rows


def _render_csv(subcommand: str, result: dict) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    header, rows = _tabular(subcommand, result)
    writer.writerow(header)
    for row in rows:
        writer.writerow([_flatten_cell(cell) for cell in row])
    return buffer.getvalue().rstrip("\n")


def _render_markdown(subcommand: str, result: dict) -> str:
    header, rows = _tabular(subcommand, result)
    lines = [
        "| " + " | ".join(header) + " |",
        "|" + "|".join(" --- " for _ in header) + "|",
    ]
    for row in rows:
        lines.append("| " + " | ".join(_flatten_cell(cell) for cell in row) + " |")
    return "\n".join(lines)


# ----------------------------------------------------------------------
# Entry points
# ----------------------------------------------------------------------

def _dispatch(args, parser) -> tuple[int, str]:
    handler = _HANDLERS[args.subcommand]
    started = time.perf_counter()

    request, compute = handler(args, parser)
    store = _cache_dir(args)
    cacheable = store is not None and args.subcommand not in _UNCACHED

    payload = None
    cached = False
    if cacheable:
        key = _cache_key(request)
        payload = _cache_read(store, key)
        cached = payload is not None
    if payload is None:
        result, provenance = compute()
        payload = {
            "schema": SCHEMA_VERSION,
            "request": request,
            "result": _encode(result),
            "provenance": _encode(provenance),
        }
        if cacheable:
            _cache_write(store, key, payload)

    elapsed_ms = (time.perf_counter() - started) * 1000.0
    meta = {"elapsed_ms": round(elapsed_ms, 3), "cached": cached}

    if args.fmt == "json":
        text = _render_json(payload, meta)
    elif args.fmt == "csv":
        text = _render_csv(args.subcommand, payload["result"])
    else:
        text = _render_markdown(args.subcommand, payload["result"])

    code = 0
    if args.subcommand == "verify" and not payload["result"]["all_passed"]:
        code = 1
    return code, text


def run(argv=None) -> tuple[int, str]:
    """Parse argv, execute, and return (exit code, output text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), ""
    try:
        return _dispatch(args, parser)
    except SystemExit as exc:  # parser.error inside a handler
        return int(exc.code or 0), ""
    except LinkInvariantError as exc:
        error = {
            "schema": SCHEMA_VERSION,
            "error": {"name": type(exc).__name__, "message": str(exc)},
        }
        return 1, json.dumps(error, sort_keys=True)


def main(argv=None) -> int:
    code, text = run(argv)
    if text:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
