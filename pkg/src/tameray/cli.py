"""Command-line interface.

Exit codes: 0 computed (including "hypotheses not met"), 1 usage error,
2 data or fixture error, 3 internal assertion failure.
"""

import argparse
import json
import logging
import re
import sys

from .arith import is_prime
from .engine import (
    EngineError,
    MissingProfile,
    check_finiteness,
    check_thm_s1,
    check_thm_s2,
    search_pair_thm38,
    search_q_s1,
    verify_example,
)
from .lmfdbio import DataError, fetch_profile, profile_to_record, validate_profile
from .quadfield import class_group, make_field, split_prime
from .rayclass import OracleBoundError, oracle_ray_class, ray_class_structure

log = logging.getLogger("tameray")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


_SPEC = re.compile(r"^(\d+)(?:\.(\d+))?(?:\^(\d+))?$")


def parse_prime_spec(K, text, flag):
    """``ell[.index][^exp]`` -> (prime ideal, exponent); index is 1-based by b-coordinate."""
    m = _SPEC.match(text.strip())
    if not m:
        raise UsageError(f"{flag}: cannot parse {text!r} (expected ell[.index][^exp])")
    ell = int(m.group(1))
    if not is_prime(ell):
        raise UsageError(f"{flag}: {ell} is not prime")
    kind, ideals = split_prime(K, ell)
    if m.group(2) is None:
        if len(ideals) > 1:
            raise UsageError(f"{flag}: {ell} splits in {K}; choose {ell}.1 or {ell}.2")
        idx = 1
    else:
        idx = int(m.group(2))
    if not 1 <= idx <= len(ideals):
        raise UsageError(f"{flag}: index {idx} out of range for {ell} ({kind}, {len(ideals)} prime(s))")
    exp = int(m.group(3)) if m.group(3) else 1
    if exp < 1:
        raise UsageError(f"{flag}: exponent must be positive")
    return ideals[idx - 1], exp


def parse_modulus(K, text, flag="-m"):
    if text.strip() in ("", "1"):
        return []
    parts = [parse_prime_spec(K, t, flag) for t in text.split(",")]
    if len({P for P, _ in parts}) != len(parts):
        raise UsageError(f"{flag}: a prime ideal is listed twice")
    return parts


def _field(d):
    try:
        return make_field(d)
    except ValueError as exc:
        raise UsageError(f"-d: {exc}") from exc


def _emit(args, payload, text):
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=1))
    else:
        print(text)


def _group_text(invs):
    return " x ".join(f"Z/{d}" for d in invs) if invs else "1"


def cmd_classgroup(args):
    K = _field(args.d)
    cg = class_group(K)
    inv = list(cg.group.invariants)
    payload = {
        "field": K.d,
        "discriminant": K.disc,
        "class_number": cg.group.order,
        "invariants": inv,
        "basis_forms": [str(f) for f in cg.basis_forms],
    }
    text = _group_text(inv)
    if args.verbose:
        text += f"\nh = {cg.group.order}, disc = {K.disc}, basis forms {payload['basis_forms']}"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_rayclass(args):
    K = _field(args.d)
    mod = parse_modulus(K, args.m)
    if args.p is not None and any(P.norm % args.p == 0 for P, _ in mod):
        raise UsageError(f"-p: modulus is not coprime to {args.p}")
    G = ray_class_structure(K, mod, args.seed)
    payload = {
        "field": K.d,
        "modulus": [[str(P), e] for P, e in mod],
        "order": G.order,
        "invariants": list(G.invariants),
        "unit_index": G.unit_index,
    }
    lines = [f"Cl_K(m) = {_group_text(G.invariants)}", f"order {G.order}"]
    if args.p is not None:
        part = list(G.group.p_part(args.p))
        payload["p"] = args.p
        payload["p_part"] = part
        payload["ord_p"] = G.ord_p(args.p)
        payload["p_rank"] = G.p_rank(args.p)
        lines.append(f"{args.p}-part {_group_text(part)} (ord {G.ord_p(args.p)}, rank {G.p_rank(args.p)})")
    if args.oracle:
        O = oracle_ray_class(K, mod)
        payload["oracle_invariants"] = list(O.invariants)
        payload["oracle_agrees"] = O.invariants == G.invariants
        lines.append(f"oracle {_group_text(O.invariants)} ({'agrees' if O.invariants == G.invariants else 'DISAGREES'})")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_find_primes(args):
    K = _field(args.d)
    if args.theorem != "s1":
        raise UsageError("--theorem: only s1 searches are available")
    found = search_q_s1(K, args.p, args.max_norm, args.seed)
    rows = []
    for q, cert in found:
        rows.append({
            "ideal": str(q),
            "norm": q.norm,
            "order": cert.conclusion.get("order") if cert else None,
            "theorem": cert.theorem if cert else None,
        })
    text = "\n".join(
        f"{r['ideal']}  N = {r['norm']}  |G_S| = {r['order'] if r['order'] else '?'}" for r in rows
    ) or "none"
    _emit(args, {"field": K.d, "p": args.p, "max_norm": args.max_norm, "primes": rows}, text)
    return EXIT_OK


def cmd_present(args):
    K = _field(args.d)
    q, e = parse_prime_spec(K, args.q, "--q")
    if args.theorem == "s1":
        cert = check_thm_s1(K, args.p, q, seed=args.seed)
    else:
        if not args.q2:
            raise UsageError("--q2 is required for --theorem s2")
        q2, _ = parse_prime_spec(K, args.q2, "--q2")
        cert = check_thm_s2(K, args.p, q, q2, seed=args.seed)
    _emit(args, cert.to_json(), cert.text())
    return EXIT_OK


def cmd_finite(args):
    K = _field(args.d)
    if args.search:
        if args.theorem != "3.8":
            raise UsageError("--search is available for --theorem 3.8 only")
        res = search_pair_thm38(K, args.max_norm, args.seed)
        if res is None:
            _emit(args, {"field": K.d, "found": None}, "no pair found")
            return EXIT_OK
        cert = res[2]
    else:
        if not args.q:
            raise UsageError("--q is required")
        S = [parse_prime_spec(K, args.q, "--q")[0]]
        if args.q2:
            S.append(parse_prime_spec(K, args.q2, "--q2")[0])
        p = args.p if args.p is not None else (2 if args.theorem in ("3.8", "3.9") else None)
        if p is None:
            raise UsageError("-p is required")
        cert = check_finiteness(K, p, S, args.theorem, args.seed)
    _emit(args, cert.to_json(), cert.text())
    return EXIT_OK


def cmd_verify_example(args):
    rep = verify_example(args.example, args.seed)
    _emit(args, rep.to_json(), rep.text())
    return EXIT_OK


def cmd_fetch(args):
    F = fetch_profile(args.label)
    rec = profile_to_record(F)
    rec["label"] = F.label
    rec["provenance"] = F.provenance
    rec["violations"] = validate_profile(F)
    text = "\n".join([
        f"{F.label} {F.name}".rstrip(),
        f"polynomial {F.defining}",
        f"signature ({F.r1}, {F.r2}), unit rank {F.unit_rank}",
        f"class number {F.class_number}, class group {list(F.class_group)}",
        f"source {F.provenance}",
    ])
    _emit(args, rec, text)
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="JSON output")
    common.add_argument("--seed", type=int, default=0, help="seed for randomised internals")
    common.add_argument("--threads", type=int, default=1, help="concurrency hint")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = _Parser(prog="tameray", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("classgroup", parents=[common], help="class group of Q(sqrt(d))")
    p.add_argument("-d", type=int, required=True)
    p.set_defaults(func=cmd_classgroup)

    p = sub.add_parser("rayclass", parents=[common], help="ray class group for a modulus")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-m", required=True, help="modulus, e.g. 7,31 or 151.1^2")
    p.add_argument("-p", type=int)
    p.add_argument("--oracle", action="store_true", help="cross-check with the brute-force oracle")
    p.set_defaults(func=cmd_rayclass)

    p = sub.add_parser("find-primes", parents=[common], help="search primes meeting the one-prime criterion")
    p.add_argument("--theorem", choices=["s1"], default="s1")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-p", type=int, required=True)
    p.add_argument("--max-norm", type=int, required=True)
    p.set_defaults(func=cmd_find_primes)

    p = sub.add_parser("present", parents=[common], help="presentation of G_S(K, p)")
    p.add_argument("--theorem", choices=["s1", "s2"], required=True)
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-p", type=int, required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--q2")
    p.set_defaults(func=cmd_present)

    p = sub.add_parser("finite", parents=[common], help="finiteness criteria")
    p.add_argument("--theorem", choices=["3.7", "3.8", "3.9", "lemma3.5"], required=True)
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-p", type=int)
    p.add_argument("--q")
    p.add_argument("--q2")
    p.add_argument("--search", action="store_true", help="search a qualifying pair (3.8)")
    p.add_argument("--max-norm", type=int, default=500)
    p.set_defaults(func=cmd_finite)

    p = sub.add_parser("verify-example", parents=[common], help="rerun a worked example")
    p.add_argument("example", choices=["5.1", "5.2", "appendix"])
    p.set_defaults(func=cmd_verify_example)

    p = sub.add_parser("fetch", parents=[common], help="number-field profile by label")
    p.add_argument("--label", required=True)
    p.set_defaults(func=cmd_fetch)
    return ap


def run(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.threads < 1:
        print("usage error: --threads must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, MissingProfile, OracleBoundError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (EngineError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - the contract maps everything else to 3
        log.debug("internal failure", exc_info=True)
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
