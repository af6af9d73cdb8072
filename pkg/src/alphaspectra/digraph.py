"""Simple digraphs, the named families, and exhaustive enumeration.

A :class:`Digraph` is an immutable boolean adjacency matrix without loops.
Vertices are 0-based everywhere, including the edge-list text format::

    # optional comment lines
    3 3
    0 1
    1 2
    2 0
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

MAX_ENUM_ORDER = 5
MAX_TREE_ORDER = 7


class DigraphError(ValueError):
    """Raised for malformed digraph input or invalid family parameters."""


class Digraph:
    """Loopless digraph on vertices ``0..n-1``.

    The adjacency array is read-only; all operations return new digraphs.
    """

    __slots__ = ("_adj", "_key")

    def __init__(self, adjacency: np.ndarray | Sequence[Sequence[int]]):
        adj = np.array(adjacency, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1] or adj.shape[0] < 1:
            raise DigraphError(f"adjacency must be a nonempty square matrix, got shape {adj.shape}")
        if adj.diagonal().any():
            raise DigraphError("loops are not allowed")
        adj.setflags(write=False)
        self._adj = adj
        self._key = (adj.shape[0], np.packbits(adj).tobytes())

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> "Digraph":
        if n < 1:
            raise DigraphError(f"vertex count must be >= 1, got {n}")
        adj = np.zeros((n, n), dtype=bool)
        for u, v in arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise DigraphError(f"arc ({u}, {v}) out of range for n = {n}")
            if u == v:
                raise DigraphError(f"loop at vertex {u}")
            adj[u, v] = True
        return cls(adj)

    @classmethod
    def from_code(cls, code: str) -> "Digraph":
        """Inverse of :attr:`code`, e.g. ``"3:100100"``."""
        try:
            n_text, bits = code.split(":")
            n = int(n_text)
        except ValueError:
            raise DigraphError(f"malformed digraph code {code!r}") from None
        if n < 1 or len(bits) != n * (n - 1) or set(bits) - {"0", "1"}:
            raise DigraphError(f"malformed digraph code {code!r}")
        adj = np.zeros((n, n), dtype=bool)
        rows, cols = _offdiag_positions(n)
        adj[rows, cols] = np.frombuffer(bits.encode(), dtype=np.uint8) == ord("1")
        return cls(adj)

    @property
    def n(self) -> int:
        return self._adj.shape[0]

    @property
    def adjacency(self) -> np.ndarray:
        return self._adj

    @property
    def arc_count(self) -> int:
        return int(self._adj.sum())

    @property
    def out_degrees(self) -> np.ndarray:
        return self._adj.sum(axis=1)

    @property
    def in_degrees(self) -> np.ndarray:
        return self._adj.sum(axis=0)

    def arcs(self) -> list[tuple[int, int]]:
        rows, cols = np.nonzero(self._adj)
        return list(zip(rows.tolist(), cols.tolist()))

    @property
    def code(self) -> str:
        """Off-diagonal bits in row-major order, prefixed by the order.

        Bit ``k`` of the enumeration index in :func:`all_digraphs` is character
        ``k`` of this string.
        """
        rows, cols = _offdiag_positions(self.n)
        bits = "".join("1" if b else "0" for b in self._adj[rows, cols])
        return f"{self.n}:{bits}"

    @property
    def index(self) -> int:
        """Position of this digraph in :func:`all_digraphs` order."""
        rows, cols = _offdiag_positions(self.n)
        bits = self._adj[rows, cols]
        return int(sum(1 << k for k, b in enumerate(bits) if b))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"Digraph({self.code!r})"


def _offdiag_positions(n: int) -> tuple[np.ndarray, np.ndarray]:
    rows, cols = np.nonzero(~np.eye(n, dtype=bool))
    return rows, cols


# --------------------------------------------------------------------------
# edge-list text format


def parse_digraph(text: str) -> Digraph:
    """Parse the edge-list format; errors carry 1-based line numbers."""
    header = None
    n = expected = 0
    seen: set[tuple[int, int]] = set()
    arcs: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 2:
            raise DigraphError(f"line {lineno}: expected two integers, got {line!r}")
        try:
            x, y = int(fields[0]), int(fields[1])
        except ValueError:
            raise DigraphError(f"line {lineno}: expected two integers, got {line!r}") from None
        if header is None:
            n, expected = x, y
            if n < 1:
                raise DigraphError(f"line {lineno}: vertex count must be >= 1")
            if not 0 <= expected <= n * (n - 1):
                raise DigraphError(f"line {lineno}: arc count {expected} impossible for n = {n}")
            header = lineno
            continue
        if not (0 <= x < n and 0 <= y < n):
            raise DigraphError(f"line {lineno}: vertex index out of range in arc {x} {y}")
        if x == y:
            raise DigraphError(f"line {lineno}: loop arc {x} {y}")
        if (x, y) in seen:
            raise DigraphError(f"line {lineno}: duplicate arc {x} {y}")
        if len(arcs) == expected:
            raise DigraphError(f"line {lineno}: more arcs than the declared {expected}")
        seen.add((x, y))
        arcs.append((x, y))
    if header is None:
        raise DigraphError("line 1: missing 'n a' header")
    if len(arcs) != expected:
        raise DigraphError(f"header declares {expected} arcs but {len(arcs)} were listed")
    return Digraph.from_arcs(n, arcs)


def format_digraph(D: Digraph) -> str:
    arcs = D.arcs()
    lines = [f"{D.n} {len(arcs)}"] + [f"{u} {v}" for u, v in arcs]
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# families

FAMILY_KINDS = ("path", "cycle", "kbip", "symk", "symgraph", "shrikhande", "discrete")


@dataclass(frozen=True)
class Family:
    """A named family member, written as a spec string such as ``kbip:2,3``.

    ``kind`` is one of :data:`FAMILY_KINDS`. ``params`` holds the integer
    parameters; ``edges`` is only used by ``symgraph``.
    """

    kind: str
    params: tuple[int, ...] = ()
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        k, p = self.kind, self.params
        arity = {"path": 1, "cycle": 1, "kbip": 2, "symk": 1, "symgraph": 1,
                 "shrikhande": 0, "discrete": 1}
        if k not in arity:
            raise DigraphError(f"unknown family {k!r}")
        if len(p) != arity[k]:
            raise DigraphError(f"family {k!r} takes {arity[k]} parameter(s), got {len(p)}")
        if any(x < 1 for x in p):
            raise DigraphError(f"family {k!r} parameters must be >= 1, got {p}")
        if k == "cycle" and p[0] < 2:
            raise DigraphError("directed cycle needs n >= 2")
        if k == "symgraph":
            for u, v in self.edges:
                if not (0 <= u < p[0] and 0 <= v < p[0]) or u == v:
                    raise DigraphError(f"bad edge {u}-{v} for n = {p[0]}")
        elif self.edges:
            raise DigraphError(f"family {k!r} takes no edge list")

    @property
    def order(self) -> int:
        if self.kind == "shrikhande":
            return 16
        if self.kind == "kbip":
            return self.params[0] + self.params[1]
        return self.params[0]

    def __str__(self) -> str:
        if self.kind == "shrikhande":
            return "shrikhande"
        text = f"{self.kind}:{','.join(map(str, self.params))}"
        if self.kind == "symgraph":
            text += ":" + ",".join(f"{u}-{v}" for u, v in self.edges)
        return text


def parse_family(text: str) -> Family:
    """Parse ``path:n``, ``cycle:n``, ``kbip:r,s``, ``symk:n``, ``shrikhande``,
    ``discrete:n`` or ``symgraph:n:u-v,u-v,...``."""
    kind, _, rest = text.strip().partition(":")
    try:
        if kind == "shrikhande":
            if rest:
                raise ValueError
            return Family("shrikhande")
        if kind == "symgraph":
            n_text, _, edge_text = rest.partition(":")
            edges = tuple(
                tuple(int(x) for x in e.split("-")) for e in edge_text.split(",") if e
            )
            if any(len(e) != 2 for e in edges):
                raise ValueError
            return Family("symgraph", (int(n_text),), edges)  # type: ignore[arg-type]
        params = tuple(int(x) for x in rest.split(",")) if rest else ()
    except ValueError:
        raise DigraphError(f"malformed family spec {text!r}") from None
    return Family(kind, params)


def directed_path(n: int) -> Digraph:
    return make_family(Family("path", (n,)))


def directed_cycle(n: int) -> Digraph:
    return make_family(Family("cycle", (n,)))


def oriented_complete_bipartite(r: int, s: int) -> Digraph:
    return make_family(Family("kbip", (r, s)))


def symmetric_complete(n: int) -> Digraph:
    return make_family(Family("symk", (n,)))


def discrete(n: int) -> Digraph:
    return make_family(Family("discrete", (n,)))


def shrikhande() -> Digraph:
    return make_family(Family("shrikhande"))


def make_family(spec: Family) -> Digraph:
    kind, p = spec.kind, spec.params
    n = spec.order
    adj = np.zeros((n, n), dtype=bool)
    if kind in ("path", "cycle"):
        idx = np.arange(n - 1)
        adj[idx, idx + 1] = True
        if kind == "cycle":
            adj[n - 1, 0] = True
    elif kind == "kbip":
        r = p[0]
        adj[:r, r:] = True
    elif kind == "symk":
        adj[:] = True
        np.fill_diagonal(adj, False)
    elif kind == "symgraph":
        for u, v in spec.edges:
            adj[u, v] = adj[v, u] = True
    elif kind == "shrikhande":
        # Cayley graph on Z4 x Z4; vertex (i, j) -> 4i + j
        steps = [(1, 0), (3, 0), (0, 1), (0, 3), (1, 1), (3, 3)]
        for i, j in itertools.product(range(4), repeat=2):
            for di, dj in steps:
                adj[4 * i + j, 4 * ((i + di) % 4) + (j + dj) % 4] = True
    return Digraph(adj)


# --------------------------------------------------------------------------
# structure


@dataclass(frozen=True)
class StructureFlags:
    is_discrete: bool
    regular_degree: int | None
    is_symmetric: bool
    is_permutation_digraph: bool
    ocb_plus_isolated: tuple[int, int] | None
    isolated: int
    is_oriented_tree: bool


def classify_structure(D: Digraph) -> StructureFlags:
    adj = D.adjacency
    dout, din = D.out_degrees, D.in_degrees
    regular = None
    if (dout == dout[0]).all() and (din == dout[0]).all():
        regular = int(dout[0])
    isolated_mask = (dout == 0) & (din == 0)

    ocb = None
    sources = (dout > 0) & (din == 0)
    sinks = (dout == 0) & (din > 0)
    if sources.any() and (sources | sinks | isolated_mask).all():
        expected = np.outer(sources, sinks)
        if (adj == expected).all():
            ocb = (int(sources.sum()), int(sinks.sum()))

    return StructureFlags(
        is_discrete=not adj.any(),
        regular_degree=regular,
        is_symmetric=bool((adj == adj.T).all()),
        is_permutation_digraph=regular == 1,
        ocb_plus_isolated=ocb,
        isolated=int(isolated_mask.sum()),
        is_oriented_tree=_is_oriented_tree(D),
    )


def _is_oriented_tree(D: Digraph) -> bool:
    adj = D.adjacency
    if (adj & adj.T).any() or D.arc_count != D.n - 1:
        return False
    und = adj | adj.T
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v in np.nonzero(und[u])[0].tolist():
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == D.n


def transpose(D: Digraph) -> Digraph:
    return Digraph(D.adjacency.T)


def direct_sum(parts: Sequence[Digraph]) -> Digraph:
    if not parts:
        raise DigraphError("direct sum of an empty list")
    n = sum(p.n for p in parts)
    adj = np.zeros((n, n), dtype=bool)
    offset = 0
    for p in parts:
        adj[offset:offset + p.n, offset:offset + p.n] = p.adjacency
        offset += p.n
    return Digraph(adj)


def relabel(D: Digraph, order: Sequence[int]) -> Digraph:
    """Digraph whose vertex ``i`` is vertex ``order[i]`` of ``D``."""
    idx = np.asarray(order)
    if sorted(idx.tolist()) != list(range(D.n)):
        raise DigraphError("relabeling must be a permutation")
    return Digraph(D.adjacency[np.ix_(idx, idx)])


# --------------------------------------------------------------------------
# enumeration


def adjacency_block(n: int, start: int, stop: int) -> np.ndarray:
    """Adjacency matrices of digraphs ``start..stop-1`` in enumeration order,
    as a ``(stop - start, n, n)`` boolean array."""
    rows, cols = _offdiag_positions(n)
    codes = np.arange(start, stop, dtype=np.int64)
    bits = (codes[:, None] >> np.arange(n * (n - 1), dtype=np.int64)) & 1
    adj = np.zeros((len(codes), n, n), dtype=bool)
    adj[:, rows, cols] = bits.astype(bool)
    return adj


def digraph_count(n: int) -> int:
    return 1 << (n * (n - 1))


def all_digraphs(n: int) -> Iterator[Digraph]:
    """Every labeled digraph on ``n`` vertices, ordered by off-diagonal bit code.

    Bit ``k`` corresponds to the ``k``-th off-diagonal entry in row-major order,
    so ``n = 2`` yields: discrete, ``0->1``, ``1->0``, both arcs.
    """
    if not 1 <= n <= MAX_ENUM_ORDER:
        raise DigraphError(f"all_digraphs supports 1 <= n <= {MAX_ENUM_ORDER}, got {n}")
    total = digraph_count(n)
    chunk = 4096
    for start in range(0, total, chunk):
        for adj in adjacency_block(n, start, min(total, start + chunk)):
            yield Digraph(adj)


def prufer_to_edges(seq: Sequence[int], n: int) -> list[tuple[int, int]]:
    """Edges of the labeled tree with the given Prüfer sequence (length n - 2)."""
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = min(i for i in range(n) if degree[i] == 1)
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, v = (i for i in range(n) if degree[i] == 1)
    edges.append((u, v))
    return edges


def labeled_trees(n: int) -> Iterator[list[tuple[int, int]]]:
    if n == 1:
        yield []
        return
    for seq in itertools.product(range(n), repeat=n - 2):
        yield prufer_to_edges(seq, n)


def all_oriented_trees(n: int) -> Iterator[Digraph]:
    """Every labeled tree (Prüfer order) under every orientation mask.

    Bit ``k`` of the mask reverses edge ``k`` of the tree. Distinct labeled
    trees never produce the same digraph, so nothing is yielded twice; the
    stream is not reduced up to isomorphism.
    """
    if not 2 <= n <= MAX_TREE_ORDER:
        raise DigraphError(f"all_oriented_trees supports 2 <= n <= {MAX_TREE_ORDER}, got {n}")
    for edges in labeled_trees(n):
        for mask in range(1 << (n - 1)):
            arcs = [(v, u) if mask >> k & 1 else (u, v) for k, (u, v) in enumerate(edges)]
            yield Digraph.from_arcs(n, arcs)
