"""``degseq`` command line: gen, moments, bounds, estimate, sample, oracle, verify, compare.

Every subcommand builds a JSON document with an embedded run manifest; the
human-readable output is rendered from that same document.
Exit codes: 0 ok, 1 verify failure, 2 hypothesis violation, 3 oracle guard, 4 invalid input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
from pathlib import Path

from . import __version__
from .core import read_sequence_file, write_sequence_file
from .errbounds import xi_bounds_suite
from .errors import DegseqError, HypothesisViolation
from .estimator import METHODS, log_g, log_phi, sum_log_factorials
from .moments import moments, u_functionals
from .oracle import MAX_M1, enumerate_pairings, parse_statistic
from .pairing_model import (
    default_threads, estimate_p_simple, sample_signature_census, sample_signature_omega_star,
)
from .seqgen import KINDS, FamilySpec, generate, validate_family

SCHEMA_VERSION = 1


def _digest(path: str | None) -> str | None:
    if not path:
        return None
    try:
        return hashlib.sha256(Path(path).read_bytes()).hexdigest()
    except OSError:
        return None


def _manifest(args: argparse.Namespace, t0: float) -> dict:
    params = {k: v for k, v in vars(args).items() if k not in ("func", "json")}
    return {
        "subcommand": args.command,
        "params": params,
        "version": __version__,
        "schema": SCHEMA_VERSION,
        "seed": getattr(args, "seed", None),
        "wall_time": time.perf_counter() - t0,
        "input_sha256": _digest(getattr(args, "seq", None)),
    }


def _num(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return x


def _load(args):
    return read_sequence_file(args.seq)


# --- subcommands -------------------------------------------------------------


def cmd_gen(args) -> dict:
    spec = FamilySpec(kind=args.kind, n=args.n, d=args.d, delta=args.delta, Delta=args.Delta,
                      ell=args.ell, gamma=args.gamma, c=args.c, alpha=args.alpha, beta=args.beta,
                      filler=args.filler, seed=args.seed, parity=args.parity)
    d = generate(spec)
    conf = validate_family(d, spec)
    if args.out:
        write_sequence_file(args.out, d, header=json.dumps(spec.to_json()))
    return {"spec": spec.to_json(), "n": d.n, "M1": d.m1, "Delta": d.max_degree,
            "conformance": conf.to_json(), "out": args.out}


def cmd_moments(args) -> dict:
    d = _load(args)
    mp = moments(d, args.kmax)
    U = u_functionals(d, strict=args.strict)
    out = mp.to_json()
    out["U"] = [float(x) for x in U]
    if d.n <= 10_000:
        out["U_exact"] = [str(x) for x in U]
    return out


def cmd_bounds(args) -> dict:
    d = _load(args)
    return xi_bounds_suite(d, h=args.h, slack=args.slack).to_json()


def cmd_estimate(args) -> dict:
    d = _load(args)
    est = log_g(d, args.method, force=args.force, xi_max=args.xi_max, slack=args.slack,
                gamma=args.gamma, alpha=args.alpha, beta=args.beta)
    return est.to_json()


def cmd_sample(args) -> dict:
    d = _load(args)
    if args.stat == "p-simple":
        r = estimate_p_simple(d, args.samples, seed=args.seed, threads=args.threads)
        return r.to_json()
    if args.stat == "signature-census":
        census = sample_signature_census(d, args.samples, seed=args.seed)
    else:
        import numpy as np

        rng = np.random.default_rng(args.seed)
        census = {}
        for _ in range(args.samples):
            s = sample_signature_omega_star(d, rng)
            census[s] = census.get(s, 0) + 1
    rows = sorted(census.items(), key=lambda kv: -kv[1])
    return {"samples": args.samples, "distinct": len(rows),
            "census": [{"signature": s.to_json(), "count": c} for s, c in rows[: args.top]]}


def cmd_oracle(args) -> dict:
    d = _load(args)
    stats = {}
    if args.expect:
        for tok in args.expect.split(","):
            stats[tok] = parse_statistic(tok.strip())
    rep = enumerate_pairings(d, statistics=stats)
    return rep.to_json(with_census=args.census)


def cmd_verify(args) -> dict:
    from .suites import SUITES

    fn = SUITES[args.suite]
    res = fn(max_m1=args.max_m1) if args.suite == "switching" else fn()
    return res.to_json()


def cmd_compare(args) -> dict:
    d = _load(args)
    lphi, _ = log_phi(d.m1) if d.even else (float("nan"), None)
    lfact = sum_log_factorials(d)
    rows = {}
    for method in args.methods.split(","):
        try:
            est = log_g(d, method, force=True, xi_max=args.xi_max, gamma=args.gamma,
                        alpha=args.alpha, beta=args.beta)
        except (HypothesisViolation, ValueError) as exc:
            rows[method] = {"error": str(exc)}
            continue
        rows[method] = {
            "log_g": est.log_value,
            "log_p_simple": est.log_value + lfact - lphi,
            "xi": est.xi,
            "sqrt_xi": est.sqrt_xi,
            "hypotheses": est.hypotheses,
            "degenerate": not est.hypotheses_ok,
        }
    out = {"n": d.n, "M1": d.m1, "methods": rows}
    if args.mc_samples:
        mc = estimate_p_simple(d, args.mc_samples, seed=args.seed, threads=args.threads)
        out["monte_carlo"] = mc.to_json()
    if d.even and d.m1 <= MAX_M1:
        rep = enumerate_pairings(d)
        out["oracle"] = {"g": rep.g, "p_simple": str(rep.p_simple),
                         "log_g": math.log(rep.g) if rep.g else None}
    flags = []
    if "oracle" in out and out["oracle"]["log_g"] is not None:
        for m, r in rows.items():
            if "log_g" in r and abs(r["log_g"] - out["oracle"]["log_g"]) > max(1.0, 3 * r["sqrt_xi"]):
                flags.append(f"{m}: far from oracle")
    if "monte_carlo" in out and out["monte_carlo"]["successes"]:
        lo, hi = out["monte_carlo"]["wilson95"]
        for m, r in rows.items():
            if "log_p_simple" in r and not r["degenerate"]:
                p = math.exp(r["log_p_simple"])
                half = (hi - lo) / 2
                if abs(p - out["monte_carlo"]["p_hat"]) > 3 * half + p * 3 * r["sqrt_xi"]:
                    flags.append(f"{m}: disagrees with Monte Carlo")
    out["flags"] = flags
    return out


# --- argument parsing ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="degseq", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"degseq {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seq=True):
        if seq:
            sp.add_argument("--seq", required=True, help="degree sequence file, one integer per line")
        sp.add_argument("--json", action="store_true", help="emit JSON")
        return sp

    g = common(sub.add_parser("gen", help="generate a degree sequence family"), seq=False)
    g.add_argument("--kind", choices=KINDS, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--d", type=int)
    g.add_argument("--delta", type=int)
    g.add_argument("--Delta", type=int)
    g.add_argument("--ell", type=int)
    g.add_argument("--gamma", type=float)
    g.add_argument("--c", type=float, default=1.0)
    g.add_argument("--alpha", type=float)
    g.add_argument("--beta", type=float)
    g.add_argument("--filler", type=int, default=3)
    g.add_argument("--parity", choices=("increment", "drop"), default="increment")
    g.add_argument("--seed", type=int)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    m = common(sub.add_parser("moments", help="M_k, tau and U_1..U_7"))
    m.add_argument("--kmax", type=int, default=6)
    m.add_argument("--strict", action="store_true", help="exclude w in {i,j} from U_3/U_5")
    m.set_defaults(func=cmd_moments)

    b = common(sub.add_parser("bounds", help="every xi error functional"))
    b.add_argument("--h", type=int)
    b.add_argument("--slack", type=float, default=1.0)
    b.set_defaults(func=cmd_bounds)

    def theorem_args(sp):
        sp.add_argument("--xi-max", type=float, default=0.25)
        sp.add_argument("--gamma", type=float)
        sp.add_argument("--alpha", type=float)
        sp.add_argument("--beta", type=float)

    e = common(sub.add_parser("estimate", help="log g(d) by one of the counting formulas"))
    e.add_argument("--method", choices=METHODS, default="general")
    e.add_argument("--force", action="store_true", help="report even if hypotheses fail")
    e.add_argument("--slack", type=float, default=1.0)
    theorem_args(e)
    e.set_defaults(func=cmd_estimate)

    s = common(sub.add_parser("sample", help="pairing-model simulation"))
    s.add_argument("--samples", type=int, default=10_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--threads", type=int, default=None)
    s.add_argument("--stat", choices=("p-simple", "signature-census", "omega-star"), default="p-simple")
    s.add_argument("--top", type=int, default=20)
    s.set_defaults(func=cmd_sample)

    o = common(sub.add_parser("oracle", help="exhaustive enumeration (M1 <= 16)"))
    o.add_argument("--census", action="store_true")
    o.add_argument("--expect", help="comma list of Z, Z2, Z0, Y:u:v, Y2:u:v")
    o.set_defaults(func=cmd_oracle)

    v = common(sub.add_parser("verify", help="run an invariant battery"), seq=False)
    v.add_argument("--suite", required=True,
                   choices=("moments", "switching", "s-formula", "omega-star", "oracle-identities", "inequalities"))
    v.add_argument("--max-m1", type=int, default=10)
    v.set_defaults(func=cmd_verify)

    c = common(sub.add_parser("compare", help="all estimators against Monte Carlo and the oracle"))
    c.add_argument("--methods", default="general,m2,powerlaw,bivalued")
    c.add_argument("--mc-samples", type=int, default=0)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--threads", type=int, default=None)
    theorem_args(c)
    c.set_defaults(func=cmd_compare)
    return p


def _render(doc: dict, indent: int = 0) -> str:
    lines = []
    pad = "  " * indent
    for k, v in doc.items():
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.append(_render(v, indent + 1))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{pad}{k}: [{len(v)} entries]")
        else:
            lines.append(f"{pad}{k}: {v}")
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", None) is None and hasattr(args, "threads"):
        args.threads = default_threads()
    t0 = time.perf_counter()
    try:
        body = args.func(args)
        code = 0
    except DegseqError as exc:
        body = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, HypothesisViolation):
            body["failed"] = list(exc.failed)
        code = exc.exit_code
    except (OSError, ValueError) as exc:
        body = {"error": type(exc).__name__, "message": str(exc)}
        code = 4
    if code == 0 and args.command == "verify" and not body.get("ok", True):
        code = 1
    doc = {"manifest": _manifest(args, t0), "result": body}
    if args.json:
        print(json.dumps(doc, indent=2, default=_num))
    else:
        print(_render(body))
    return code


if __name__ == "__main__":
    sys.exit(main())
