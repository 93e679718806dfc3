"""JSON schemas for network specs, scheme files and run reports.

All serialisation goes through ``canonical_dumps`` (sorted keys, two-space
indent, trailing newline) so that serialise -> parse -> serialise is
byte-identical and reports diff cleanly.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from .gf import FieldMatrix
from .network import SeparableNetwork, TwoLayerNetwork
from .regions import RateRegion
from .scheme import WiretapScheme
from .subsets import mask_of, set_of


class SpecFormatError(ValueError):
    """Malformed input file; message names the offending field."""


def canonical_dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def sha_digest(text: str) -> str:
    return "sha256:" + hashlib.sha256(text.encode()).hexdigest()[:16]


def subset_key(a) -> str:
    return ",".join(str(i) for i in sorted(a))


def parse_subset_key(key: str) -> frozenset[int]:
    try:
        return frozenset(int(part) for part in key.split(","))
    except ValueError as exc:
        raise SpecFormatError(f"bad subset key {key!r}") from exc


@dataclass(frozen=True)
class NetworkSpec:
    """Parsed input file: a network plus optional run parameters."""

    kind: str  # "two_layer" | "separable"
    network: TwoLayerNetwork | SeparableNetwork
    q: int | None = None
    k: int | None = None
    seed: int | None = None


def _field(d: dict, name: str, kind):
    if name not in d:
        raise SpecFormatError(f"missing field {name!r}")
    value = d[name]
    if not isinstance(value, kind):
        raise SpecFormatError(f"field {name!r} has the wrong type")
    return value


def _optional_int(d: dict, name: str) -> int | None:
    if name not in d or d[name] is None:
        return None
    if not isinstance(d[name], int):
        raise SpecFormatError(f"field {name!r} must be an integer")
    return d[name]


def parse_spec_dict(d: dict) -> NetworkSpec:
    if not isinstance(d, dict):
        raise SpecFormatError("spec must be a JSON object")
    kind = _field(d, "kind", str)
    try:
        if kind == "two_layer":
            t = _field(d, "t", int)
            conns = _field(d, "connections", list)
            network: TwoLayerNetwork | SeparableNetwork = TwoLayerNetwork(
                t=t, connections=tuple(frozenset(c) for c in conns)
            )
        elif kind == "separable":
            m = _field(d, "m", int)
            nodes = tuple(_field(d, "nodes", list))
            edges = tuple((e[0], e[1]) for e in _field(d, "edges", list))
            labels = tuple(frozenset(l) for l in _field(d, "labels", list))
            declared = {
                parse_subset_key(key): value
                for key, value in _field(d, "declared_mincuts", dict).items()
            }
            network = SeparableNetwork(m=m, nodes=nodes, edges=edges, labels=labels, declared=declared)
        else:
            raise SpecFormatError(f"unknown network kind {kind!r}")
    except SpecFormatError:
        raise
    except (ValueError, TypeError, IndexError) as exc:
        raise SpecFormatError(f"invalid {kind} spec: {exc}") from exc
    return NetworkSpec(
        kind=kind,
        network=network,
        q=_optional_int(d, "q"),
        k=_optional_int(d, "k"),
        seed=_optional_int(d, "seed"),
    )


def spec_to_dict(spec: NetworkSpec) -> dict:
    if isinstance(spec.network, TwoLayerNetwork):
        body = {
            "kind": "two_layer",
            "t": spec.network.t,
            "connections": [sorted(c) for c in spec.network.connections],
        }
    else:
        net = spec.network
        body = {
            "kind": "separable",
            "m": net.m,
            "nodes": list(net.nodes),
            "edges": [[tail, head] for tail, head in net.edges],
            "labels": [sorted(l) for l in net.labels],
            "declared_mincuts": {subset_key(j): v for j, v in sorted(net.declared.items(), key=lambda kv: subset_key(kv[0]))},
        }
    for name, value in (("q", spec.q), ("k", spec.k), ("seed", spec.seed)):
        if value is not None:
            body[name] = value
    return body


def load_spec(path: str | Path) -> NetworkSpec:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SpecFormatError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFormatError(f"{path} is not valid JSON: {exc}") from exc
    return parse_spec_dict(data)


def region_to_dict(region: RateRegion) -> dict:
    """Bitmask-keyed bound map, covering every nonempty destination subset."""
    return {
        "m": region.m,
        "bounds": {str(mask_of(a)): v for a, v in sorted(region.bounds.items(), key=lambda kv: mask_of(kv[0]))},
    }


def region_from_dict(d: dict) -> RateRegion:
    return RateRegion(d["m"], {set_of(int(mask)): v for mask, v in d["bounds"].items()})


def scheme_to_dict(scheme: WiretapScheme) -> dict:
    return {
        "kind": "wiretap_scheme",
        "q": scheme.q,
        "k": scheme.k,
        "network": {
            "kind": "two_layer",
            "t": scheme.net.t,
            "connections": [sorted(c) for c in scheme.net.connections],
        },
        "rates": list(scheme.rates),
        "permutation": list(scheme.permutation) if scheme.permutation is not None else None,
        "key_matrix": scheme.key_matrix.to_lists(),
        "message_matrix": scheme.message_matrix.to_lists(),
        "decoding_matrix": scheme.decoding_matrix.to_lists(),
    }


def scheme_from_dict(d: dict) -> WiretapScheme:
    if not isinstance(d, dict) or d.get("kind") != "wiretap_scheme":
        raise SpecFormatError("not a wiretap_scheme file")
    try:
        netd = _field(d, "network", dict)
        net = TwoLayerNetwork(
            t=_field(netd, "t", int),
            connections=tuple(frozenset(c) for c in _field(netd, "connections", list)),
        )
        q = _field(d, "q", int)
        k = _field(d, "k", int)
        rates = tuple(_field(d, "rates", list))
        perm = d.get("permutation")
        total = sum(rates)
        return WiretapScheme(
            net=net,
            q=q,
            k=k,
            key_matrix=FieldMatrix.from_rows(_field(d, "key_matrix", list), q, cols=k),
            message_matrix=FieldMatrix.from_rows(_field(d, "message_matrix", list), q, cols=total),
            decoding_matrix=FieldMatrix.from_rows(_field(d, "decoding_matrix", list), q, cols=net.t),
            rates=rates,
            permutation=tuple(perm) if perm is not None else None,
        )
    except SpecFormatError:
        raise
    except (ValueError, TypeError) as exc:
        raise SpecFormatError(f"invalid scheme file: {exc}") from exc


def load_scheme(path: str | Path) -> WiretapScheme:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise SpecFormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecFormatError(f"{path} is not valid JSON: {exc}") from exc
    return scheme_from_dict(data)
