"""Wireline network instances: graph, messages, keys, randomness, demands.

A network is a directed capacitated graph whose nodes hold messages,
share keys in subsets, and own private randomness.  Sinks demand message
subsets and named eavesdropper sets pick out the edge subsets an
adversary can observe.  Parsing validates every structural invariant up
front; a parsed instance is treated as immutable.

Cyclic graphs are accepted by the model.  Code compilation requires an
acyclic evaluation schedule, so ``is_acyclic`` exposes that gate
explicitly instead of hiding it in the parser.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field

from .galois import Field

__all__ = [
    "NetworkError",
    "Edge",
    "Message",
    "SharedKey",
    "Randomness",
    "Demand",
    "NetworkSpec",
    "RateVector",
    "parse_network",
    "serialize_network",
    "is_acyclic",
    "rate_vector",
]


class NetworkError(ValueError):
    """Raised on the first violated network invariant."""


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str
    capacity: int


@dataclass(frozen=True)
class Message:
    id: str
    length: int
    holders: tuple[str, ...]


@dataclass(frozen=True)
class SharedKey:
    id: str
    length: int
    holders: tuple[str, ...]


@dataclass(frozen=True)
class Randomness:
    id: str
    length: int
    owner: str


@dataclass(frozen=True)
class Demand:
    sink: str
    wants: tuple[str, ...]


@dataclass
class NetworkSpec:
    field: Field
    nodes: list[str]
    edges: list[Edge]
    messages: list[Message]
    keys: list[SharedKey]
    randomness: list[Randomness]
    demands: list[Demand]
    eavesdropper_sets: dict[str, list[str]] = dc_field(default_factory=dict)

    # -- convenience lookups -------------------------------------------

    def edge(self, edge_id: str) -> Edge:
        for e in self.edges:
            if e.id == edge_id:
                return e
        raise KeyError(edge_id)

    def message(self, msg_id: str) -> Message:
        for m in self.messages:
            if m.id == msg_id:
                return m
        raise KeyError(msg_id)

    def in_edges(self, node: str) -> list[Edge]:
        return [e for e in self.edges if e.head == node]

    def out_edges(self, node: str) -> list[Edge]:
        return [e for e in self.edges if e.tail == node]


@dataclass(frozen=True)
class RateVector:
    """Bits per network use for each message and key."""

    message_rates: dict[str, float]
    key_rates: dict[str, float]


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise NetworkError(msg)


def _unique_ids(items, what: str) -> None:
    seen = set()
    for x in items:
        _require(x not in seen, f"duplicate id '{x}' among {what}")
        seen.add(x)


def parse_network(text) -> NetworkSpec:
    """Parse and validate a network document (JSON text or dict).

    Raises :class:`NetworkError` naming the first violated invariant
    (unknown node, negative capacity, dangling id, ...).
    """
    if isinstance(text, (str, bytes)):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise NetworkError(f"invalid network: malformed JSON ({e})") from e
    else:
        doc = text
    _require(isinstance(doc, dict), "invalid network: top level must be an object")

    try:
        fld = Field(int(doc["field"]["p"]))
    except NetworkError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise NetworkError(f"invalid network: bad field section ({e})") from e

    nodes = [str(n) for n in doc.get("nodes", [])]
    _require(len(nodes) > 0, "invalid network: at least one node required")
    _unique_ids(nodes, "nodes")
    node_set = set(nodes)

    edges = []
    for e in doc.get("edges", []):
        eid, tail, head = str(e["id"]), str(e["from"]), str(e["to"])
        cap = int(e["capacity"])
        _require(tail in node_set, f"unknown node '{tail}' as tail of edge '{eid}'")
        _require(head in node_set, f"unknown node '{head}' as head of edge '{eid}'")
        _require(cap >= 0, f"negative capacity on edge '{eid}'")
        edges.append(Edge(eid, tail, head, cap))
    _unique_ids([e.id for e in edges], "edges")
    edge_set = {e.id for e in edges}

    messages = []
    for m in doc.get("messages", []):
        mid, length = str(m["id"]), int(m["length"])
        holders = tuple(str(h) for h in m.get("holders", []))
        _require(length >= 1, f"message '{mid}' must have length >= 1")
        _require(len(holders) >= 1, f"message '{mid}' has no holder")
        for h in holders:
            _require(h in node_set, f"unknown node '{h}' holding message '{mid}'")
        messages.append(Message(mid, length, holders))
    _unique_ids([m.id for m in messages], "messages")
    msg_set = {m.id for m in messages}

    keys = []
    for k in doc.get("keys", []):
        kid, length = str(k["id"]), int(k["length"])
        holders = tuple(str(h) for h in k.get("holders", []))
        _require(length >= 0, f"key '{kid}' must have length >= 0")
        _require(len(holders) >= 1, f"key '{kid}' has no holder")
        for h in holders:
            _require(h in node_set, f"unknown node '{h}' holding key '{kid}'")
        keys.append(SharedKey(kid, length, holders))
    _unique_ids([k.id for k in keys], "keys")

    randomness = []
    for w in doc.get("randomness", []):
        wid, length = str(w["id"]), int(w["length"])
        owner = str(w["owner"])
        _require(length >= 0, f"randomness '{wid}' must have length >= 0")
        _require(owner in node_set, f"unknown node '{owner}' owning randomness '{wid}'")
        randomness.append(Randomness(wid, length, owner))
    _unique_ids([w.id for w in randomness], "randomness")

    demands = []
    holder_of = {m.id: set(m.holders) for m in messages}
    for d in doc.get("demands", []):
        sink = str(d["sink"])
        wants = tuple(str(x) for x in d.get("wants", []))
        _require(sink in node_set, f"unknown node '{sink}' as sink")
        _require(len(wants) >= 1, f"sink '{sink}' demands nothing")
        for mid in wants:
            _require(mid in msg_set, f"dangling id '{mid}' demanded by sink '{sink}'")
            _require(sink not in holder_of[mid],
                     f"sink '{sink}' demands message '{mid}' it already holds")
        demands.append(Demand(sink, wants))
    _unique_ids([d.sink for d in demands], "demand sinks")

    eavesdroppers: dict[str, list[str]] = {}
    for name, ids in doc.get("eavesdroppers", {}).items():
        eids = [str(x) for x in ids]
        for eid in eids:
            _require(eid in edge_set, f"dangling id '{eid}' in eavesdropper set '{name}'")
        eavesdroppers[str(name)] = eids

    return NetworkSpec(fld, nodes, edges, messages, keys, randomness, demands, eavesdroppers)


def serialize_network(spec: NetworkSpec) -> dict:
    """Inverse of :func:`parse_network`; round-trips losslessly."""
    return {
        "field": {"p": spec.field.p},
        "nodes": list(spec.nodes),
        "edges": [
            {"id": e.id, "from": e.tail, "to": e.head, "capacity": e.capacity}
            for e in spec.edges
        ],
        "messages": [
            {"id": m.id, "length": m.length, "holders": list(m.holders)}
            for m in spec.messages
        ],
        "keys": [
            {"id": k.id, "length": k.length, "holders": list(k.holders)}
            for k in spec.keys
        ],
        "randomness": [
            {"id": w.id, "length": w.length, "owner": w.owner}
            for w in spec.randomness
        ],
        "demands": [{"sink": d.sink, "wants": list(d.wants)} for d in spec.demands],
        "eavesdroppers": {name: list(ids) for name, ids in spec.eavesdropper_sets.items()},
    }


def is_acyclic(spec: NetworkSpec):
    """Kahn topological sort.  Returns (True, order) or (False, None)."""
    indeg = {n: 0 for n in spec.nodes}
    for e in spec.edges:
        indeg[e.head] += 1
    queue = [n for n in spec.nodes if indeg[n] == 0]
    order = []
    while queue:
        n = queue.pop(0)
        order.append(n)
        for e in spec.out_edges(n):
            indeg[e.head] -= 1
            if indeg[e.head] == 0:
                queue.append(e.head)
    if len(order) != len(spec.nodes):
        return False, None
    return True, order


def rate_vector(spec: NetworkSpec, uses_per_block: int = 1) -> RateVector:
    """Rates in bits per network use: symbol length times log2(p) / uses."""
    if uses_per_block < 1:
        raise NetworkError("uses_per_block must be >= 1")
    bits = spec.field.log2_size
    return RateVector(
        message_rates={m.id: m.length * bits / uses_per_block for m in spec.messages},
        key_rates={k.id: k.length * bits / uses_per_block for k in spec.keys},
    )
