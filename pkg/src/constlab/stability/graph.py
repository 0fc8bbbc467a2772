"""Replacement dynamics: the graph of motions that pass."""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from constlab import backend
from constlab.beliefs import Belief, IIDParameter, format_rational, iid
from constlab.errors import CapacityError, ParameterError
from constlab.scf import SCF, NamedSCF, materialize
from constlab.stability.anonymous import MAX_ANONYMOUS_N, threshold_edges, threshold_utilities
from constlab.stability.core import TieBreak, Universe, all_universe, explicit_universe


@dataclass
class TransitionGraph:
    """Nodes are rules; an edge f -> g means a motion from f to g can pass.

    ``labels`` name the nodes; ``utilities`` holds per-voter utilities for each
    node (for threshold graphs under i.i.d. beliefs, one shared value).
    """

    n: int
    labels: list[str]
    edges: list[list[int]]
    utilities: list[list[Fraction]]
    config: dict = field(default_factory=dict)
    scfs: list[SCF] | None = None

    def __len__(self) -> int:
        return len(self.labels)

    def out_degree(self, i: int) -> int:
        return len(self.edges[i])

    def sinks(self) -> list[int]:
        return [i for i, out in enumerate(self.edges) if not out]

    def welfare(self, i: int) -> Fraction:
        us = self.utilities[i]
        return sum(us, Fraction(0)) if len(us) == self.n else us[0] * self.n

    def reachable(self, start: int) -> set[int]:
        seen = {start}
        todo = deque([start])
        while todo:
            u = todo.popleft()
            for w in self.edges[u]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return seen

    def reachable_sinks(self, start: int) -> set[int]:
        return {i for i in self.reachable(start) if not self.edges[i]}

    def can_reach(self, targets) -> set[int]:
        """Nodes with a directed path (possibly empty) into ``targets``."""
        rev = [[] for _ in self.edges]
        for u, out in enumerate(self.edges):
            for w in out:
                rev[w].append(u)
        seen = set(targets)
        todo = deque(seen)
        while todo:
            u = todo.popleft()
            for w in rev[u]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return seen

    def shortest_path(self, start: int, targets) -> list[int] | None:
        targets = set(targets)
        prev = {start: None}
        todo = deque([start])
        while todo:
            u = todo.popleft()
            if u in targets:
                path = []
                while u is not None:
                    path.append(u)
                    u = prev[u]
                return path[::-1]
            for w in self.edges[u]:
                if w not in prev:
                    prev[w] = u
                    todo.append(w)
        return None

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def to_json(self) -> dict:
        return {
            "config": self.config,
            "nodes": [
                {
                    "id": label,
                    "stable": not out,
                    "utilities": [format_rational(u) for u in us],
                    "welfare": format_rational(self.welfare(i)),
                }
                for i, (label, out, us) in enumerate(zip(self.labels, self.edges, self.utilities))
            ],
            "adjacency": {self.labels[i]: [self.labels[j] for j in out] for i, out in enumerate(self.edges)},
        }

    def dumps_json(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    def to_dot(self) -> str:
        lines = ["digraph transitions {", "  rankdir=LR;"]
        for i, label in enumerate(self.labels):
            shape = "doublecircle" if not self.edges[i] else "circle"
            lines.append(f'  "{label}" [shape={shape}];')
        for i, out in enumerate(self.edges):
            for j in out:
                lines.append(f'  "{self.labels[i]}" -> "{self.labels[j]}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _belief(n: int, belief) -> Belief:
    if isinstance(belief, Belief):
        if belief.n != n:
            raise ParameterError("belief and n disagree")
        return belief
    return iid(belief, n)


def transition_graph(n: int, belief, tb, universe: Universe | str | list | None = None) -> TransitionGraph:
    """Build the replacement graph.

    ``belief`` is a :class:`Belief` or an i.i.d. parameter.  The full universe
    is limited to n <= 3; thresholds work up to n = 25 for i.i.d. beliefs and
    up to n = 12 otherwise.
    """
    tb = TieBreak.parse(tb)
    if universe is None or universe == "all":
        universe = all_universe(n)
    elif universe == "thresholds":
        universe = Universe("thresholds", n)
    elif isinstance(universe, list):
        universe = explicit_universe(universe)
    config = {"n": n, "tie_break": tb.value, "universe": universe.label()}

    if universe.kind == "thresholds" and not isinstance(belief, Belief):
        if n > MAX_ANONYMOUS_N:
            raise CapacityError(f"threshold graphs support n <= {MAX_ANONYMOUS_N}")
        p = belief if isinstance(belief, IIDParameter) else IIDParameter(belief)
        config["belief"] = f"iid:{p}"
        us = threshold_utilities(n, p)
        out = threshold_edges(n, p, tb)
        ks = sorted(us)
        labels = [str(NamedSCF.threshold(k)) for k in ks]
        edges = [[ks.index(k2) for k2 in out[k]] for k in ks]
        return TransitionGraph(n, labels, edges, [[us[k]] for k in ks], config)

    if universe.kind == "all" and n > 3:
        raise CapacityError("the full transition graph is limited to n <= 3")
    F = _belief(n, belief)
    config["belief"] = F.label if F.label != "explicit" else F.to_json()
    scfs = universe.scfs()
    tables = [g.table for g in scfs]
    weights, den = F.integer_weights()
    k = backend.kernels(n, [weights])
    edges = k.edge_lists(tables, tables, weights, n, tb.arbitrary, threads=backend.threads())
    util_rows = k.utility_matrix(tables, weights, n)
    utilities = [[Fraction(x, den) for x in row] for row in util_rows]
    if universe.kind == "thresholds":
        labels = [str(NamedSCF.threshold(i)) for i in range(1, n + 1)]
    else:
        labels = [g.canonical() for g in scfs]
    return TransitionGraph(n, labels, edges, utilities, config, scfs)


def dictatorship_nodes(graph: TransitionGraph) -> list[int]:
    if graph.scfs is None:
        return []
    dict_tables = {materialize(NamedSCF.dictatorship(i), graph.n).table for i in range(graph.n)}
    return [i for i, g in enumerate(graph.scfs) if g.table in dict_tables]


def nash_welfare_of(graph: TransitionGraph, i: int) -> Fraction:
    us = graph.utilities[i]
    if len(us) == graph.n:
        return math.prod(us, start=Fraction(1))
    return us[0] ** graph.n
