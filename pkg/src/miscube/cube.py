"""The Hamming cube Q_n with word-parallel vertex sets.

A vertex is an integer in ``[0, N)``; bit ``j`` holds coordinate ``j + 1``.
A vertex set is a plain Python ``int`` used as a length-``N`` bit-vector, so
union, intersection and difference are ``|``, ``&`` and ``& ~``.  Directions
are 1-based throughout, matching the usual ``x^i`` notation.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Iterator, NamedTuple

GRAPH_CAP = 24
ENUM_CAP = 6

EVEN = 0
ODD = 1


class CubeError(ValueError):
    pass


class Edge(NamedTuple):
    """Edge ``lo -- lo^dir`` with coordinate ``dir`` of ``lo`` equal to 0."""

    lo: int
    dir: int

    @property
    def hi(self) -> int:
        return self.lo | (1 << (self.dir - 1))

    def ends(self) -> tuple[int, int]:
        return self.lo, self.hi

    def __str__(self) -> str:
        return f"{self.dir}:{self.lo}"

    @classmethod
    def parse(cls, text: str) -> "Edge":
        d, lo = text.split(":")
        return cls(int(lo), int(d))


def popcount(x: int) -> int:
    return x.bit_count()


def bits(x: int) -> Iterator[int]:
    """Indices of set bits of ``x`` in ascending order."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def vertex_parity(v: int) -> int:
    return v.bit_count() & 1


def hamming(u: int, v: int) -> int:
    return (u ^ v).bit_count()


class Cube:
    """Q_n.  Immutable; safe to share between workers."""

    def __init__(self, n: int, cap: int = GRAPH_CAP):
        if not isinstance(n, int) or n < 1:
            raise CubeError(f"dimension must be a positive integer, got {n!r}")
        if n > cap:
            raise CubeError(f"dimension {n} exceeds cap {cap}")
        self.n = n
        self.N = 1 << n
        self.full = (1 << self.N) - 1

    def __repr__(self) -> str:
        return f"Cube({self.n})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Cube) and other.n == self.n

    def __hash__(self) -> int:
        return hash(("Cube", self.n))

    def __reduce__(self):
        return (Cube, (self.n, max(self.n, GRAPH_CAP)))

    # -- validation ---------------------------------------------------------

    def check_vertex(self, v: int) -> int:
        if not 0 <= v < self.N:
            raise CubeError(f"vertex {v} out of range for Q_{self.n}")
        return v

    def check_dir(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise CubeError(f"direction {i} out of range [1, {self.n}]")
        return i

    def check_set(self, A: int) -> int:
        if A < 0 or A >> self.N:
            raise CubeError(f"vertex set has bits outside Q_{self.n}")
        return A

    # -- vertices and edges -------------------------------------------------

    def flip(self, v: int, i: int) -> int:
        self.check_vertex(v)
        self.check_dir(i)
        return v ^ (1 << (i - 1))

    def edge(self, u: int, v: int) -> Edge:
        self.check_vertex(u)
        self.check_vertex(v)
        x = u ^ v
        if x.bit_count() != 1:
            raise CubeError(f"{u} and {v} are not adjacent")
        return Edge(min(u, v), x.bit_length())

    def check_edge(self, e: Edge) -> Edge:
        self.check_vertex(e.lo)
        self.check_dir(e.dir)
        if e.lo >> (e.dir - 1) & 1:
            raise CubeError(f"edge {e} is not normalized")
        return e

    def edge_parity(self, e: Edge) -> int:
        self.check_edge(e)
        return (e.lo & ~(1 << (e.dir - 1))).bit_count() & 1

    def edge_id(self, e: Edge) -> int:
        """Canonical id ``(dir-1)*N/2 + rank(lo)`` among vertices low in ``dir``."""
        self.check_edge(e)
        b = e.dir - 1
        low = e.lo & ((1 << b) - 1)
        rank = ((e.lo >> (b + 1)) << b) | low
        return b * (self.N >> 1) + rank

    def edge_from_id(self, eid: int) -> Edge:
        half = self.N >> 1
        if not 0 <= eid < self.n * half:
            raise CubeError(f"edge id {eid} out of range")
        b, rank = divmod(eid, half)
        low = rank & ((1 << b) - 1)
        lo = ((rank >> b) << (b + 1)) | low
        return Edge(lo, b + 1)

    def edges(self) -> list[Edge]:
        """All edges in edge-id order."""
        return [self.edge_from_id(k) for k in range(self.n * (self.N >> 1))]

    def neighbors(self, v: int) -> list[int]:
        self.check_vertex(v)
        return [v ^ (1 << j) for j in range(self.n)]

    @cached_property
    def nbr_masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << (v ^ (1 << j)) for j in range(self.n)) for v in range(self.N))

    # -- vertex sets --------------------------------------------------------

    @cached_property
    def low_masks(self) -> tuple[int, ...]:
        """``low_masks[j]``: vertices whose bit ``j`` is 0."""
        out = []
        for j in range(self.n):
            out.append(sum(1 << v for v in range(self.N) if not v >> j & 1))
        return tuple(out)

    @cached_property
    def even(self) -> int:
        return sum(1 << v for v in range(self.N) if not vertex_parity(v))

    @cached_property
    def odd(self) -> int:
        return self.full ^ self.even

    def parity_class(self, eps: int) -> int:
        return self.odd if eps else self.even

    def shift(self, A: int, i: int) -> int:
        """Image of ``A`` under ``x -> x^i``."""
        j = i - 1
        s = 1 << j
        low = self.low_masks[j]
        return ((A & low) << s) | ((A >> s) & low)

    def neighborhood(self, A: int) -> int:
        out = 0
        for i in range(1, self.n + 1):
            out |= self.shift(A, i)
        return out

    def complement(self, A: int) -> int:
        return self.full & ~A

    def from_vertices(self, vs: Iterable[int]) -> int:
        out = 0
        for v in vs:
            out |= 1 << self.check_vertex(v)
        return out

    def vertices(self, A: int) -> list[int]:
        return list(bits(A))

    def subcube(self, i: int, eps: int) -> int:
        """``{x : x_i = eps}``."""
        low = self.low_masks[self.check_dir(i) - 1]
        return self.full ^ low if eps else low

    def degree_in(self, v: int, S: int) -> int:
        return (self.nbr_masks[v] & S).bit_count()

    def internal_edges(self, A: int) -> int:
        total = 0
        for i in range(1, self.n + 1):
            total += (A & self.low_masks[i - 1] & self.shift(A, i)).bit_count()
        return total

    # -- edge boundaries ----------------------------------------------------

    def boundary_i(self, A: int, i: int) -> list[Edge]:
        self.check_dir(i)
        return self._between_i(A, self.complement(A), i)

    def boundary(self, A: int) -> list[Edge]:
        out = []
        for i in range(1, self.n + 1):
            out.extend(self.boundary_i(A, i))
        return out

    def boundary_size(self, A: int) -> int:
        rest = self.complement(A)
        return sum((A & self.shift(rest, i)).bit_count() for i in range(1, self.n + 1))

    def boundary_between(self, A: int, B: int) -> list[Edge]:
        if A & B:
            raise CubeError("boundary_between needs disjoint sets")
        out = []
        for i in range(1, self.n + 1):
            out.extend(self._between_i(A, B, i))
        return out

    def _between_i(self, A: int, B: int, i: int) -> list[Edge]:
        ends = A & self.shift(B, i)
        mask = 1 << (i - 1)
        return sorted((Edge(x & ~mask, i) for x in bits(ends)), key=self.edge_id)

    # -- projections --------------------------------------------------------

    def project(self, v: int, k: int) -> int:
        """Drop the last ``k`` coordinates."""
        self.check_vertex(v)
        self._check_k(k)
        return v & ((1 << (self.n - k)) - 1)

    def fiber(self, w: int, k: int) -> int:
        """The ``2^k`` preimages of ``w`` (a vertex of Q_{n-k})."""
        self._check_k(k)
        m = self.n - k
        if not 0 <= w < 1 << m:
            raise CubeError(f"vertex {w} out of range for Q_{m}")
        return sum(1 << (w | (t << m)) for t in range(1 << k))

    def _check_k(self, k: int) -> None:
        if not 1 <= k < self.n:
            raise CubeError(f"projection depth {k} out of range [1, {self.n - 1}]")

    # -- serialization ------------------------------------------------------

    def to_hex(self, A: int) -> str:
        """Lowercase hex, least-significant 64-bit word first, ``ceil(N/4)`` digits.

        Each word is written most-significant digit first, so for ``n <= 6``
        this is plain zero-padded hex of the bit-vector.
        """
        self.check_set(A)
        out = []
        left = self.N
        while left > 0:
            w = min(64, left)
            out.append(format(A & ((1 << w) - 1), f"0{-(-w // 4)}x"))
            A >>= 64
            left -= 64
        return "".join(out)

    def from_hex(self, text: str) -> int:
        width = -(-self.N // 4)
        if len(text) != width:
            raise CubeError(f"expected {width} hex digits, got {len(text)}")
        A = 0
        shift = 0
        while text:
            A |= int(text[:16], 16) << shift
            text = text[16:]
            shift += 64
        return self.check_set(A)
