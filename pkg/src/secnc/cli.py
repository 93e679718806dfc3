"""Command-line front end.

Subcommands: ``region`` (rate-region tables and capacity verdicts), ``build``
(emit a scheme at a corner or at an explicit rate tuple), ``verify`` (secrecy
checks on a scheme file), ``lift`` (full separable-network pipeline).  Exit
codes: 0 success, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import itertools
import random
import sys
import time
from pathlib import Path

from .gf import default_modulus
from .jsonio import (
    NetworkSpec,
    SpecFormatError,
    canonical_dumps,
    load_scheme,
    load_spec,
    region_to_dict,
    scheme_to_dict,
    sha_digest,
    spec_to_dict,
    subset_key,
)
from .lifting import (
    LiftFailureError,
    lift_scheme,
    lifted_edge_model,
    random_code_success_bound,
    smallest_modulus_with_positive_bound,
    transmit,
    decode_destination,
)
from .network import SeparableNetwork, TwoLayerNetwork, build_child, component_count, min_cut_two_layer, two_layer_cut_profile, verify_separable
from .regions import (
    achievable_region,
    canonicalize,
    capacity_region_k1,
    capacity_region_m3,
    corner_point,
    cut_set_outer_bound,
    pairwise_overlap_sufficient,
    regions_equal,
)
from .scheme import SecureCommunicationImpossibleError, build_scheme, decode, encode
from .secrecy import EnumerationBudgetError, verify_scheme
from .subsets import format_subset, mask_of, nonempty_subsets

OK, VERIFICATION_FAILED, INPUT_ERROR = 0, 1, 2


class VerificationFailure(RuntimeError):
    pass


def _parse_int_list(text: str, name: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise SpecFormatError(f"--{name} expects comma-separated integers, got {text!r}") from exc


def _resolve(spec: NetworkSpec, args) -> tuple[int, int, int]:
    """Effective (k, q, seed): command-line flags override spec fields."""
    k = args.k if args.k is not None else (spec.k if spec.k is not None else 1)
    seed = args.seed if args.seed is not None else (spec.seed if spec.seed is not None else 0)
    q = args.q if args.q is not None else spec.q
    return k, q, seed


def _two_layer_view(spec: NetworkSpec):
    """The two-layer network a spec works on, building the child if needed."""
    if isinstance(spec.network, TwoLayerNetwork):
        return spec.network, None
    report = verify_separable(spec.network)
    if not report.ok:
        raise SpecFormatError(f"network is not separable: {report.failures[0]}")
    child = build_child(spec.network)
    return child.network, child


def _region_bundle(net: TwoLayerNetwork, k: int, q: int) -> dict:
    achievable = achievable_region(net, k, q)
    outer = cut_set_outer_bound(two_layer_cut_profile(net), k)
    canonical = canonicalize(outer)
    regions = {
        "achievable": region_to_dict(achievable),
        "outer": region_to_dict(outer),
        "outer_canonical": region_to_dict(canonical),
    }
    equalities = {"achievable_vs_canonical_outer": regions_equal(achievable, canonical)[0]}
    if k == 1:
        cap = capacity_region_k1(net)
        regions["capacity_k1"] = region_to_dict(cap)
        equalities["achievable_vs_capacity_k1"] = regions_equal(achievable, cap)[0]
    if net.m == 3:
        cap3 = capacity_region_m3(net, k)
        regions["capacity_m3"] = region_to_dict(cap3)
        equalities["achievable_vs_capacity_m3"] = regions_equal(achievable, cap3)[0]
    overlap_ok = pairwise_overlap_sufficient(net, k)
    corners = {}
    for perm in itertools.permutations(range(1, net.m + 1)):
        corners[",".join(map(str, perm))] = list(corner_point(achievable, perm))
    return {
        "regions": regions,
        "equalities": equalities,
        "pairwise_overlap_sufficient": overlap_ok,
        "optimality": "guaranteed" if (k <= 1 or net.m == 3 or overlap_ok) else "not guaranteed",
        "corner_points": corners,
    }


def _print_region_table(net: TwoLayerNetwork, k: int, bundle: dict) -> None:
    regions = bundle["regions"]
    names = [name for name in ("achievable", "outer", "outer_canonical", "capacity_k1", "capacity_m3") if name in regions]
    header = f"{'subset':<12}{'M_A':>5}{'C_A':>5}" + "".join(f"{n:>18}" for n in names)
    print(header)
    for a in nonempty_subsets(net.m):
        mask = str(mask_of(a))
        row = f"{format_subset(a):<12}{min_cut_two_layer(net, a):>5}{component_count(net, a):>5}"
        row += "".join(f"{regions[n]['bounds'][mask]:>18}" for n in names)
        print(row)
    for name, value in bundle["equalities"].items():
        print(f"{name}: {'yes' if value else 'NO'}")
    print(f"pairwise overlap >= k for all pairs: {'yes' if bundle['pairwise_overlap_sufficient'] else 'no'}")
    print(f"optimality: {bundle['optimality']}")


def cmd_region(args) -> tuple[int, dict]:
    spec = load_spec(args.spec)
    net, child = _two_layer_view(spec)
    k, q, seed = _resolve(spec, args)
    if q is None:
        q = default_modulus(net.t, k)
    try:
        bundle = _region_bundle(net, k, q)
    except SecureCommunicationImpossibleError as exc:
        raise SpecFormatError(f"refused: {exc}") from exc
    report = {
        "command": "region",
        "input_digest": sha_digest(canonical_dumps(spec_to_dict(spec))),
        "q": q,
        "k": k,
        "seed": seed,
        "network": spec_to_dict(spec),
        **bundle,
    }
    if child is not None:
        report["child"] = {
            "t": child.network.t,
            "connections": [sorted(c) for c in child.network.connections],
            "relay_labels": [sorted(l) for l in child.relay_labels],
        }
    print(f"region report  q={q} k={k} seed={seed}")
    if child is not None:
        print(f"separable parent collapsed to child two-layer network with t={child.network.t}")
    _print_region_table(net, k, bundle)
    return OK, report


def cmd_build(args) -> tuple[int, dict]:
    spec = load_spec(args.spec)
    net, child = _two_layer_view(spec)
    k, q, seed = _resolve(spec, args)
    if q is None:
        q = default_modulus(net.t, k)
    if args.perm is not None and args.rates is not None:
        raise SpecFormatError("give --perm or --rates, not both")
    rates = _parse_int_list(args.rates, "rates") if args.rates is not None else None
    perm = _parse_int_list(args.perm, "perm") if args.perm is not None else None
    try:
        if rates is not None:
            region = achievable_region(net, k, q)
            ok, witness = region.contains(rates)
            if not ok:
                allowed = region.bound(witness)
                requested = sum(rates[i - 1] for i in witness)
                raise SpecFormatError(
                    f"rate tuple {tuple(rates)} is infeasible: subset {format_subset(witness)} "
                    f"allows at most {allowed}, requested {requested}"
                )
            scheme = build_scheme(net, k=k, q=q, rates=rates)
        else:
            scheme = build_scheme(net, k=k, q=q, permutation=perm)
    except SecureCommunicationImpossibleError as exc:
        raise SpecFormatError(f"refused: {exc}") from exc
    rng = random.Random(f"{seed}|round-trip")
    samples = 20
    ok = True
    for _ in range(samples):
        messages = [[rng.randrange(q) for _ in range(r)] for r in scheme.rates]
        key = [rng.randrange(q) for _ in range(k)]
        if decode(scheme, encode(scheme, messages, key)) != tuple(tuple(m) for m in messages):
            ok = False
            break
    scheme_dict = scheme_to_dict(scheme)
    report = {
        "command": "build",
        "input_digest": sha_digest(canonical_dumps(spec_to_dict(spec))),
        "q": q,
        "k": k,
        "seed": seed,
        "network": spec_to_dict(spec),
        "scheme": scheme_dict,
        "round_trip": {"samples": samples, "ok": ok},
    }
    if child is not None:
        report["child"] = {"t": child.network.t, "connections": [sorted(c) for c in child.network.connections]}
    print(f"build report  q={q} k={k} seed={seed}")
    print(f"rates: {tuple(scheme.rates)}"
          + (f"  (permutation {scheme.permutation})" if scheme.permutation else ""))
    print(f"key matrix ({net.t}x{k}): {scheme.key_matrix.to_lists()}")
    print(f"decoding matrix ({scheme.total_rate}x{net.t}): {scheme.decoding_matrix.to_lists()}")
    print(f"message matrix ({net.t}x{scheme.total_rate}): {scheme.message_matrix.to_lists()}")
    print(f"round trip over {samples} random draws: {'exact' if ok else 'FAILED'}")
    if not ok:
        return VERIFICATION_FAILED, report
    return OK, report


def cmd_verify(args) -> tuple[int, dict]:
    scheme = load_scheme(args.scheme)
    k = args.k if args.k is not None else scheme.k
    scheme_id = sha_digest(canonical_dumps(scheme_to_dict(scheme)))
    try:
        reports = verify_scheme(scheme, mode=args.mode, k=k, budget=args.budget, scheme_id=scheme_id)
    except EnumerationBudgetError as exc:
        raise SpecFormatError(f"refused: {exc}") from exc
    passed = all(r.passed for r in reports)
    report = {
        "command": "verify",
        "input_digest": scheme_id,
        "q": scheme.q,
        "k": k,
        "seed": 0,
        "mode": args.mode,
        "security": [r.to_dict() for r in reports],
        "passed": passed,
    }
    print(f"verify report  q={scheme.q} k={k} mode={args.mode}")
    for r in reports:
        verdict = "pass" if r.passed else f"FAIL at {r.counterexample}"
        print(f"{r.condition}: {verdict} ({r.subsets_checked} wiretap sets checked)")
    return (OK if passed else VERIFICATION_FAILED), report


def cmd_lift(args) -> tuple[int, dict]:
    spec = load_spec(args.spec)
    if not isinstance(spec.network, SeparableNetwork):
        raise SpecFormatError("lift needs a separable network spec")
    parent = spec.network
    sep_report = verify_separable(parent)
    if not sep_report.ok:
        raise SpecFormatError(f"network is not separable: {sep_report.failures[0]}")
    child = build_child(parent)
    k, q, seed = _resolve(spec, args)
    if q is None:
        q = default_modulus(child.network.t, k)
    perm = _parse_int_list(args.perm, "perm") if args.perm is not None else None
    try:
        scheme = build_scheme(child.network, k=k, q=q, permutation=perm)
    except SecureCommunicationImpossibleError as exc:
        raise SpecFormatError(f"refused: {exc}") from exc
    try:
        lifted = lift_scheme(parent, scheme, seed=seed)
    except LiftFailureError as exc:
        report = {
            "command": "lift",
            "input_digest": sha_digest(canonical_dumps(spec_to_dict(spec))),
            "q": q, "k": k, "seed": seed,
            "lift": {"ok": False, "condition": exc.condition, "attempts": exc.attempts},
        }
        print(f"lift FAILED after {exc.attempts} attempts: {exc.condition}")
        return VERIFICATION_FAILED, report
    rng = random.Random(f"{seed}|lift-round-trip")
    samples = 10
    decoded_ok = True
    for _ in range(samples):
        messages = [[rng.randrange(q) for _ in range(r)] for r in lifted.scheme.rates]
        key = [rng.randrange(q) for _ in range(k)]
        symbols = transmit(lifted, messages, key)
        for i in range(1, parent.m + 1):
            if decode_destination(lifted, i, symbols) != tuple(messages[i - 1]):
                decoded_ok = False
    model = lifted_edge_model(lifted)
    bound = random_code_success_bound(parent.edge_count, k, child.network.t, q) if k >= 1 else None
    report = {
        "command": "lift",
        "input_digest": sha_digest(canonical_dumps(spec_to_dict(spec))),
        "q": q,
        "k": k,
        "seed": seed,
        "network": spec_to_dict(spec),
        "child": {
            "t": child.network.t,
            "connections": [sorted(c) for c in child.network.connections],
            "relay_labels": [sorted(l) for l in child.relay_labels],
        },
        "scheme": scheme_to_dict(lifted.scheme),
        "lift": {
            "ok": True,
            "attempts": lifted.attempts,
            "seed": seed,
            "rates": list(lifted.scheme.rates),
            "edge_coefficients": lifted.relay_coefficients.to_lists(),
            "edge_rows": lifted.edge_rows.to_lists(),
            "edge_labels": list(model.labels),
            "round_trip": {"samples": samples, "ok": decoded_ok},
            "success_bound": {
                "fraction": f"{bound.numerator}/{bound.denominator}" if bound is not None else None,
                "approx": float(bound) if bound is not None else None,
                "positive": (bound > 0) if bound is not None else None,
                "smallest_positive_q": smallest_modulus_with_positive_bound(parent.edge_count, k, child.network.t)
                if k >= 1
                else None,
            },
        },
    }
    print(f"lift report  q={q} k={k} seed={seed}")
    print(f"child two-layer network: t={child.network.t}, rates {tuple(lifted.scheme.rates)}")
    print(f"lift accepted on attempt {lifted.attempts}; decode round trip: {'exact' if decoded_ok else 'FAILED'}")
    if bound is not None:
        print(f"one-draw success bound at q={q}: {float(bound):.6f} ({'positive' if bound > 0 else 'no guarantee; retries rely on empirical success'})")
    return (OK if decoded_ok else VERIFICATION_FAILED), report


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--q", type=int, default=None, help="field size (prime); default: smallest prime above t+k")
    sub.add_argument("--k", type=int, default=None, help="wiretap budget; default from spec file, else 1")
    sub.add_argument("--seed", type=int, default=None, help="seed for randomized steps; default from spec file, else 0")
    sub.add_argument("--budget", type=int, default=10**7, help="enumeration budget for the entropy oracle")
    sub.add_argument("--json", type=str, default=None, metavar="OUT", help="write the machine-readable report here")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="secnc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("region", help="compute achievable region, outer bounds and capacity verdicts")
    p.add_argument("spec", help="network spec JSON file")
    _add_common(p)
    p.set_defaults(handler=cmd_region)

    p = sub.add_parser("build", help="emit a scheme at a corner or at explicit rates")
    p.add_argument("spec", help="network spec JSON file")
    p.add_argument("--perm", type=str, default=None, help="corner permutation, e.g. 3,1,2")
    p.add_argument("--rates", type=str, default=None, help="explicit rate tuple, e.g. 2,2,1")
    _add_common(p)
    p.set_defaults(handler=cmd_build)

    p = sub.add_parser("verify", help="run secrecy checks against a scheme file")
    p.add_argument("scheme", help="scheme JSON file (output of build --json)")
    p.add_argument("--mode", choices=("rank", "entropy", "both"), default="both")
    _add_common(p)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("lift", help="lift a child scheme onto a separable network")
    p.add_argument("spec", help="separable network spec JSON file")
    p.add_argument("--perm", type=str, default=None, help="corner permutation for the child scheme")
    _add_common(p)
    p.set_defaults(handler=cmd_lift)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    started = time.perf_counter()
    try:
        code, report = args.handler(args)
    except SpecFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    report["wall_time_s"] = round(time.perf_counter() - started, 6)
    if args.json:
        Path(args.json).write_text(canonical_dumps(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
