"""Compact labelled graphs on up to 16 vertices.

A graph is stored as a tuple of adjacency bitmask rows.  Edges of K_n are
indexed colexicographically: the pair (u, v) with u < v gets index
C(v,2) + u, so extending the host by one vertex appends indices, and the
edge-bit order coincides with the bit order of the graph6 format.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, isqrt

import numpy as np

from . import _kernels

NMAX = 16

GRAPH6_HEADER = ">>graph6<<"


def tri(i: int) -> int:
    """C(i, 2)."""
    return i * (i - 1) // 2


def edge_index(u: int, v: int, n: int) -> int:
    """Colexicographic index of the pair {u, v} among the edges of K_n."""
    if not (0 <= u < v < n):
        raise ValueError(f"need 0 <= u < v < n, got u={u}, v={v}, n={n}")
    return tri(v) + u


def edge_endpoints(idx: int, n: int) -> tuple[int, int]:
    """Inverse of edge_index."""
    if not (0 <= idx < tri(n)):
        raise ValueError(f"edge index {idx} out of range for n={n}")
    v = (1 + isqrt(1 + 8 * idx)) // 2
    if tri(v) > idx:
        v -= 1
    return idx - tri(v), v


def full_edge_mask(n: int) -> int:
    return (1 << tri(n)) - 1


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph; immutable, hashable, safe to share."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if not (1 <= self.n <= NMAX):
            raise ValueError(f"vertex count {self.n} out of range 1..{NMAX}")
        if len(self.rows) != self.n:
            raise ValueError("rows length must equal n")
        for i, r in enumerate(self.rows):
            if r >> self.n:
                raise ValueError(f"row {i} has bits beyond vertex {self.n - 1}")
            if (r >> i) & 1:
                raise ValueError(f"self-loop at vertex {i}")
            for j in range(i):
                if ((r >> j) & 1) != ((self.rows[j] >> i) & 1):
                    raise ValueError(f"adjacency not symmetric at ({j},{i})")

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if u == v or not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"bad edge ({u},{v}) for n={n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "Graph":
        if mask >> tri(n):
            raise ValueError(f"edge mask has bits beyond C({n},2)")
        rows = [0] * n
        e = 0
        for v in range(1, n):
            for u in range(v):
                if (mask >> e) & 1:
                    rows[u] |= 1 << v
                    rows[v] |= 1 << u
                e += 1
        return cls(n, tuple(rows))

    @property
    def edge_mask(self) -> int:
        m = 0
        for v in range(1, self.n):
            m |= (self.rows[v] & ((1 << v) - 1)) << tri(v)
        return m

    @property
    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for v in range(self.n) for u in range(v)
                if (self.rows[v] >> u) & 1]

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.rows[u] >> v) & 1)

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def degrees(self) -> tuple[int, ...]:
        return tuple(r.bit_count() for r in self.rows)

    @property
    def max_degree(self) -> int:
        return max(self.degrees())

    @property
    def min_degree(self) -> int:
        return min(self.degrees())

    def complement(self) -> "Graph":
        full = (1 << self.n) - 1
        return Graph(self.n, tuple((full & ~r & ~(1 << i))
                                   for i, r in enumerate(self.rows)))

    def relabel(self, perm) -> "Graph":
        """Image under the permutation perm (perm[i] = new label of i)."""
        rows = [0] * self.n
        for u, v in self.edges():
            a, b = perm[u], perm[v]
            rows[a] |= 1 << b
            rows[b] |= 1 << a
        return Graph(self.n, tuple(rows))

    def is_bipartite(self) -> bool:
        colour = [-1] * self.n
        for s in range(self.n):
            if colour[s] >= 0:
                continue
            colour[s] = 0
            stack = [s]
            while stack:
                x = stack.pop()
                r = self.rows[x]
                while r:
                    y = (r & -r).bit_length() - 1
                    r &= r - 1
                    if colour[y] < 0:
                        colour[y] = colour[x] ^ 1
                        stack.append(y)
                    elif colour[y] == colour[x]:
                        return False
        return True

    def contains_subgraph_mask(self, mask: int) -> bool:
        return self.edge_mask & mask == mask


def _canon_arrays(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    rows = np.zeros(NMAX, np.int64)
    for i, r in enumerate(g.rows):
        rows[i] = r
    blocks = np.zeros(NMAX, np.int64)
    lab = np.zeros(NMAX, np.int64)
    _kernels.canon_blocks(g.n, rows, blocks, lab)
    return blocks, lab


def canonical_form(g: Graph) -> bytes:
    """Total byte key; equal keys iff the graphs are isomorphic."""
    blocks, _ = _canon_arrays(g)
    out = bytearray([g.n])
    for i in range(1, g.n):
        out += int(blocks[i]).to_bytes(2, "little")
    return bytes(out)


def canonical_graph(g: Graph) -> Graph:
    """The canonically relabelled representative of g's isomorphism class."""
    blocks, _ = _canon_arrays(g)
    mask = 0
    for i in range(1, g.n):
        mask |= int(blocks[i]) << tri(i)
    return Graph.from_mask(g.n, mask)


def canonical_labelling(g: Graph) -> tuple[int, ...]:
    """Map position -> original vertex achieving the canonical form."""
    _, lab = _canon_arrays(g)
    return tuple(int(lab[i]) for i in range(g.n))


def canonical_key64(g: Graph) -> int:
    """Canonical colex edge mask as a plain int (requires n <= 11)."""
    if g.n > 11:
        raise ValueError("canonical_key64 requires n <= 11")
    return canonical_graph(g).edge_mask


class Graph6Error(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


def emit_graph6(g: Graph) -> str:
    """graph6 encoding (no header); bit-exact per the published format."""
    mask = g.edge_mask
    nbits = tri(g.n)
    out = [chr(63 + g.n)]
    for start in range(0, nbits, 6):
        group = 0
        for k in range(6):
            if start + k < nbits and (mask >> (start + k)) & 1:
                group |= 32 >> k
        out.append(chr(63 + group))
    return "".join(out)


def parse_graph6(text: str) -> Graph:
    """Parse a graph6 string (optional >>graph6<< header) into a Graph."""
    base = 0
    if text.startswith(GRAPH6_HEADER):
        text = text[len(GRAPH6_HEADER):]
        base = len(GRAPH6_HEADER)
    if not text:
        raise Graph6Error("empty graph6 string", base)
    n = ord(text[0]) - 63
    if n == 63:  # 0x7e marks a multi-byte size field
        raise Graph6Error("vertex counts above 62 are not supported", base)
    if not (1 <= n <= NMAX):
        raise Graph6Error(f"vertex count {n} out of supported range 1..{NMAX}",
                          base)
    nbits = tri(n)
    ndata = (nbits + 5) // 6
    if len(text) - 1 != ndata:
        raise Graph6Error(
            f"expected {ndata} data characters for n={n}, got {len(text) - 1}",
            base + 1 + min(ndata, len(text) - 1))
    mask = 0
    for ci in range(ndata):
        ch = ord(text[1 + ci])
        if not (63 <= ch <= 126):
            raise Graph6Error(f"invalid graph6 character {text[1 + ci]!r}",
                              base + 1 + ci)
        group = ch - 63
        for k in range(6):
            bit = (group >> (5 - k)) & 1
            pos = 6 * ci + k
            if pos < nbits:
                mask |= bit << pos
            elif bit:
                raise Graph6Error("nonzero padding bits", base + 1 + ci)
    return Graph.from_mask(n, mask)
