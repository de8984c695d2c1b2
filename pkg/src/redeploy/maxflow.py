"""Integer maximum flow on FlowNetworks.

A deliberately plain Edmonds-Karp implementation: shortest augmenting paths
found by BFS over adjacency lists kept in canonical construction order, so
identical inputs always produce identical flows.  Lower bounds are handled
with the usual feasible-circulation transformation (super source and sink
absorbing the bound imbalances plus a return arc), after which augmentation
continues from the real source.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .errors import UnknownIdError
from .network import Flow, FlowNetwork

_SINK = "@snk"
_SUPER_SOURCE = "@feas-src"
_SUPER_SINK = "@feas-snk"


class _Residual:
    """Paired-edge residual graph; edge i and i^1 are mutual reverses."""

    def __init__(self, n: int):
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add_edge(self, u: int, v: int, capacity: int) -> int:
        index = len(self.to)
        self.to.extend((v, u))
        self.cap.extend((capacity, 0))
        self.adj[u].append(index)
        self.adj[v].append(index + 1)
        return index

    def max_flow(self, source: int, sink: int) -> int:
        total = 0
        n = len(self.adj)
        while True:
            parent_edge = [-1] * n
            parent_edge[source] = -2
            queue = [source]
            for u in queue:
                if u == sink:
                    break
                for i in self.adj[u]:
                    v = self.to[i]
                    if parent_edge[v] == -1 and self.cap[i] > 0:
                        parent_edge[v] = i
                        queue.append(v)
            if parent_edge[sink] == -1:
                return total
            bottleneck = None
            v = sink
            while v != source:
                i = parent_edge[v]
                if bottleneck is None or self.cap[i] < bottleneck:
                    bottleneck = self.cap[i]
                v = self.to[i ^ 1]
            v = sink
            while v != source:
                i = parent_edge[v]
                self.cap[i] -= bottleneck
                self.cap[i ^ 1] += bottleneck
                v = self.to[i ^ 1]
            total += bottleneck

    def flow_on(self, index: int) -> int:
        return self.cap[index ^ 1]

    def disable(self, index: int):
        self.cap[index] = 0
        self.cap[index ^ 1] = 0


def infinite_capacity(network: FlowNetwork) -> int:
    """A safe stand-in for an unbounded arc: more than anything can carry."""
    return (sum(s.capacity for s in network.sinks)
            + sum(e.upper for e in network.edges if e.tail == network.source)
            + 1)


def _effective_sinks(network, override):
    if override is None:
        return [(s.node, s.lower, s.capacity) for s in network.sinks]
    out = []
    for s in network.sinks:
        cap = override.get(s.node, s.capacity)
        out.append((s.node, min(s.lower, cap), cap))
    return out


def max_flow(network: FlowNetwork, *,
             sink_capacity_override: Mapping[str, int] | None = None
             ) -> tuple[int, Flow]:
    """Maximum integral flow into the sinks; requires zero lower bounds."""
    if network.has_lower_bounds():
        raise ValueError("network has lower bounds; use "
                         "max_flow_with_lower_bounds")
    index = dict(network.node_index)
    sink = len(index)
    graph = _Residual(sink + 1)
    edge_ids = [graph.add_edge(index[e.tail], index[e.head], e.upper)
                for e in network.edges]
    sink_ids = []
    for node, _, cap in _effective_sinks(network, sink_capacity_override):
        sink_ids.append(graph.add_edge(index[node], sink, cap))

    value = graph.max_flow(index[network.source], sink)
    values = {(e.tail, e.head): graph.flow_on(i)
              for e, i in zip(network.edges, edge_ids)}
    inflows = {s.node: graph.flow_on(i)
               for s, i in zip(network.sinks, sink_ids)}
    return value, Flow(values, inflows, value)


def max_flow_with_lower_bounds(
        network: FlowNetwork, *,
        sink_capacity_override: Mapping[str, int] | None = None
        ) -> tuple[int, Flow] | None:
    """Maximum integral flow respecting per-edge lower bounds.

    Returns None when no flow satisfies all the bounds; that is an expected
    outcome for callers, not an error.
    """
    if not network.has_lower_bounds() and sink_capacity_override is None:
        return max_flow(network)

    sinks = _effective_sinks(network, sink_capacity_override)
    index = dict(network.node_index)
    sink = len(index)
    super_source = sink + 1
    super_sink = sink + 2
    graph = _Residual(sink + 3)
    excess = [0] * (sink + 1)

    edge_ids = []
    for e in network.edges:
        edge_ids.append(graph.add_edge(index[e.tail], index[e.head],
                                       e.upper - e.lower))
        excess[index[e.head]] += e.lower
        excess[index[e.tail]] -= e.lower
    sink_ids = []
    for node, low, cap in sinks:
        if low > cap:
            return None
        sink_ids.append(graph.add_edge(index[node], sink, cap - low))
        excess[sink] += low
        excess[index[node]] -= low

    return_arc = graph.add_edge(sink, index[network.source],
                                infinite_capacity(network))
    helper_arcs = [return_arc]
    required = 0
    for v, amount in enumerate(excess):
        if amount > 0:
            helper_arcs.append(graph.add_edge(super_source, v, amount))
            required += amount
        elif amount < 0:
            helper_arcs.append(graph.add_edge(v, super_sink, -amount))

    if graph.max_flow(super_source, super_sink) < required:
        return None

    base = graph.flow_on(return_arc)
    for arc in helper_arcs:
        graph.disable(arc)
    value = base + graph.max_flow(index[network.source], sink)

    values = {(e.tail, e.head): e.lower + graph.flow_on(i)
              for e, i in zip(network.edges, edge_ids)}
    inflows = {node: low + graph.flow_on(i)
               for (node, low, _), i in zip(sinks, sink_ids)}
    return value, Flow(values, inflows, value)


def b_max_flow(network: FlowNetwork, subset: Iterable[str]) -> int:
    """Maximum total inflow into the given sinks, all others shut off."""
    chosen = set(subset)
    known = set(network.sink_nodes)
    unknown = chosen - known
    if unknown:
        raise UnknownIdError(f"not sink nodes: {sorted(unknown)}")
    override = {node: 0 for node in known - chosen}
    if not override:
        value, _ = max_flow(network)
        return value
    value, _ = max_flow(network, sink_capacity_override=override)
    return value


class BMaxFlowCache:
    """Memoized subset inflow values v(B), keyed by bitmask of B.

    The memo dict is only ever inserted into, so concurrent readers are safe
    under the interpreter lock.
    """

    def __init__(self, network: FlowNetwork):
        self.network = network
        self.universe = network.sink_nodes
        self._bit = {node: 1 << k for k, node in enumerate(self.universe)}
        self._memo: dict[int, int] = {0: 0}

    def mask_of(self, subset: Iterable[str]) -> int:
        mask = 0
        for node in subset:
            try:
                mask |= self._bit[node]
            except KeyError:
                raise UnknownIdError(f"not a sink node: {node!r}")
        return mask

    def value_for_mask(self, mask: int) -> int:
        cached = self._memo.get(mask)
        if cached is None:
            subset = [node for node in self.universe
                      if mask & self._bit[node]]
            cached = b_max_flow(self.network, subset)
            self._memo[mask] = cached
        return cached

    def value(self, subset: Iterable[str]) -> int:
        return self.value_for_mask(self.mask_of(subset))
