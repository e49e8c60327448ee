"""Coset graphs of kernels of maps onto finite matrix groups, and their Schreier generators."""

from __future__ import annotations

import gzip
from array import array
from dataclasses import dataclass, field as dc_field
from typing import Callable, Hashable, Iterable, Sequence

from .exactfield import FieldElem, PrimeIdeal, element_in_ideal
from .fingroup import CapExceeded, PSL2
from .quatorder import SplitData, TriangleOrder, split_order_mod
from .words import Word

LABELS = ("x", "X", "y", "Y")  # X, Y are the inverses
_LETTER = {"x": ("x", 1), "X": ("x", -1), "y": ("y", 1), "Y": ("y", -1)}


class ProductGroup:
    """Direct product of PSL2 factors; elements are tuples of canonical matrices."""

    def __init__(self, factors: Sequence[PSL2]):
        self.factors = list(factors)
        self.identity = tuple(G.identity for G in self.factors)

    def mul(self, m, n):
        return tuple(G.mul(a, b) for G, a, b in zip(self.factors, m, n))

    def inv(self, m):
        return tuple(G.inv(a) for G, a in zip(self.factors, m))

    @property
    def size(self) -> int:
        out = 1
        for G in self.factors:
            out *= G.size
        return out


@dataclass
class CosetGraph:
    nodes: list
    index: dict
    succ_x: array
    succ_y: array
    parent: array
    parent_label: bytes
    depth: array
    root: int = 0
    orders: tuple[int, int] | None = None

    def __len__(self) -> int:
        return len(self.nodes)

    def transversal(self, u: int) -> Word:
        toks = []
        while u != self.root:
            toks.append(_LETTER[chr(self.parent_label[u])])
            u = self.parent[u]
        return Word.from_tokens(reversed(toks), self.orders)

    def path_labels(self, u: int) -> list[str]:
        out = []
        while u != self.root:
            out.append(chr(self.parent_label[u]))
            u = self.parent[u]
        out.reverse()
        return out


def build_coset_graph(group, psi_x, psi_y, cap: int = 2_000_000,
                      orders: tuple[int, int] | None = None) -> CosetGraph:
    """Closure of the identity under right multiplication by psi(x)^{+-1}, psi(y)^{+-1}.

    Nodes are discovered in BFS order with labels tried as x, x^-1, y, y^-1.
    """
    mul = group.mul
    moves = [psi_x, group.inv(psi_x), psi_y, group.inv(psi_y)]
    ident = group.identity
    nodes = [ident]
    index = {ident: 0}
    parent = array("l", [0])
    plabel = bytearray(b"-")
    depth = array("l", [0])
    succ = [array("l"), array("l"), array("l"), array("l")]
    head = 0
    while head < len(nodes):
        u = nodes[head]
        du = depth[head] + 1
        for k in range(4):
            v = mul(u, moves[k])
            j = index.get(v)
            if j is None:
                j = len(nodes)
                if j >= cap:
                    raise CapExceeded(f"coset graph exceeds cap {cap}")
                index[v] = j
                nodes.append(v)
                parent.append(head)
                plabel.append(ord(LABELS[k]))
                depth.append(du)
            succ[k].append(j)
        head += 1
    return CosetGraph(nodes, index, succ[0], succ[2], parent, bytes(plabel), depth, 0, orders)


@dataclass
class SchreierGen:
    node: int
    label: str  # "x" or "y"
    target: int


@dataclass
class SchreierSet:
    graph: CosetGraph
    generators: list[SchreierGen]
    traces: dict[int, FieldElem] = dc_field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.generators)

    def word(self, k: int) -> Word:
        g = self.generators[k]
        G = self.graph
        return G.transversal(g.node) * Word.from_tokens([(g.label, 1)], G.orders) * G.transversal(g.target).inverse()

    def words(self) -> Iterable[Word]:
        for k in range(len(self.generators)):
            yield self.word(k)

    def attach_trace(self, k: int, O: TriangleOrder) -> FieldElem:
        if k not in self.traces:
            self.traces[k] = O.word_eval(self.word(k)).trd()
        return self.traces[k]


def schreier_generators(graph: CosetGraph) -> SchreierSet:
    """The n + 1 non-tree edges (u, g) with g in {x, y}; t_u g t_{ug}^{-1} generate the kernel."""
    gens = []
    parent, plabel = graph.parent, graph.parent_label
    for u in range(len(graph)):
        for lab, succ, inv_lab in (("x", graph.succ_x, ord("X")), ("y", graph.succ_y, ord("Y"))):
            v = succ[u]
            # tree edge u -g-> v, or v -g^-1-> u
            if v != graph.root and parent[v] == u and plabel[v] == ord(lab):
                continue
            if u != graph.root and parent[u] == v and plabel[u] == inv_lab:
                continue
            gens.append(SchreierGen(u, lab, v))
    return SchreierSet(graph, gens)


# ---------------------------------------------------------------- membership

def membership_test(w: Word, O: TriangleOrder, P: PrimeIdeal) -> bool:
    """v0 = +-1 and v1, v2, v3 = 0 modulo P, for the order coordinates of the word image."""
    v = O.coords(O.word_eval(w))
    if not all(element_in_ideal(x, P) for x in v[1:]):
        return False
    return element_in_ideal(v[0] - 1, P) or element_in_ideal(v[0] + 1, P)


class ReducedOrder:
    """O/PO through reduced structure constants; coordinates are F_q vectors."""

    def __init__(self, O: TriangleOrder, P: PrimeIdeal, seed: int = 0):
        self.sd: SplitData = split_order_mod(O, P, seed)
        self.F = self.sd.gfq
        self.C = self.sd.structure
        self.alpha = self.sd.reduce_coords(O.coords(O.alpha))
        self.beta = self.sd.reduce_coords(O.coords(O.beta))
        self.alpha_inv = self.sd.reduce_coords(O.coords(O.alpha.conj()))
        self.beta_inv = self.sd.reduce_coords(O.coords(O.beta.conj()))

    def mul(self, a: Sequence[int], b: Sequence[int]) -> list[int]:
        F, C = self.F, self.C
        out = [0, 0, 0, 0]
        for i in range(4):
            if a[i]:
                for j in range(4):
                    if b[j]:
                        s = F.mul(a[i], b[j])
                        cij = C[i][j]
                        for k in range(4):
                            if cij[k]:
                                out[k] = F.add(out[k], F.mul(s, cij[k]))
        return out

    def word(self, w: Word) -> list[int]:
        v = [1, 0, 0, 0]
        for base, e in w.tokens:
            g = (self.alpha if e > 0 else self.alpha_inv) if base == "x" else (self.beta if e > 0 else self.beta_inv)
            for _ in range(abs(e)):
                v = self.mul(v, g)
        return v

    def is_pm_one(self, v: Sequence[int]) -> bool:
        return not any(v[1:]) and v[0] in (1, self.F.neg(1))


def membership_test_mod(w: Word, R: ReducedOrder) -> bool:
    return R.is_pm_one(R.word(w))


def identify_ideal(gens: SchreierSet, O: TriangleOrder, candidates: Sequence[PrimeIdeal],
                   seed: int = 0) -> PrimeIdeal | None:
    """The unique candidate prime for which every Schreier generator passes the membership test."""
    alive = []
    for P in candidates:
        try:
            alive.append((P, ReducedOrder(O, P, seed)))
        except Exception:
            continue
    for w in gens.words():
        alive = [(P, R) for P, R in alive if membership_test_mod(w, R)]
        if not alive:
            return None
    if len(alive) == 1:
        return alive[0][0]
    return None


# ---------------------------------------------------------------- dump

def dump_generators(path: str, gens: SchreierSet, traces: dict[int, FieldElem] | None = None) -> int:
    """gzip text, one generator per line: word, then the trace JSON when known."""
    import json
    traces = traces if traces is not None else gens.traces
    n = 0
    with gzip.open(path, "wt", encoding="utf-8") as fh:
        for k in range(len(gens)):
            line = str(gens.word(k))
            if k in traces:
                line += "\t" + json.dumps(traces[k].to_json())
            fh.write(line + "\n")
            n += 1
    return n
