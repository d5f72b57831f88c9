"""Space-filling-curve orderings of the n x n square lattice.

Two curves are supported: the fractal Hilbert curve (n must be a power of
two) and the boustrophedon snake curve (any n).  Both visit every lattice
site exactly once and move by a single unit step between consecutive chain
positions.  Coordinates are (x, y) with x the column, y the row, and (0, 0)
the bottom-left corner.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SiteMapping",
    "build_hilbert",
    "build_snake",
    "chain_distance",
    "tree_distance",
]

# Level-1 Hilbert cell, chain position -> (x, y): BL, TL, TR, BR.
_CELL = ((0, 0), (0, 1), (1, 1), (1, 0))


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class SiteMapping:
    """Bijection between 2D lattice coordinates and 1D chain indices.

    Attributes:
        n: linear lattice size.
        kind: "hilbert" or "snake".
        forward: (n, n) int array; forward[x, y] is the chain index of (x, y).
        inverse: (n*n, 2) int array; inverse[mu] is the coordinate (x, y).
    """

    n: int
    kind: str
    forward: np.ndarray = field(repr=False)
    inverse: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.forward.setflags(write=False)
        self.inverse.setflags(write=False)

    @property
    def num_sites(self) -> int:
        return self.n * self.n

    def index(self, x: int, y: int) -> int:
        """Chain index of lattice site (x, y)."""
        return int(self.forward[x, y])

    def coord(self, mu: int) -> tuple[int, int]:
        """Lattice coordinate (x, y) of chain position mu."""
        x, y = self.inverse[mu]
        return int(x), int(y)

    def order(self) -> list[tuple[int, int]]:
        """All coordinates in chain order."""
        return [self.coord(mu) for mu in range(self.num_sites)]

    def to_text(self) -> str:
        """One "mu x y" record per line, in chain order."""
        lines = [f"{mu} {x} {y}" for mu, (x, y) in enumerate(self.order())]
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        payload = {
            "n": self.n,
            "kind": self.kind,
            "sites": [[mu, x, y] for mu, (x, y) in enumerate(self.order())],
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "SiteMapping":
        payload = json.loads(text)
        n = payload["n"]
        inverse = np.zeros((n * n, 2), dtype=np.int64)
        forward = np.zeros((n, n), dtype=np.int64)
        for mu, x, y in payload["sites"]:
            inverse[mu] = (x, y)
            forward[x, y] = mu
        return cls(n=n, kind=payload["kind"], forward=forward, inverse=inverse)


def _hilbert_coord(n: int, d: int) -> tuple[int, int]:
    """Coordinate of chain position d on the level-log2(n) Hilbert curve.

    Iterative quadrant walk over the base-4 digits of d, least significant
    first.  Quadrant digits are ordered BL, TL, TR, BR; the sub-curve is
    reflected across the main diagonal in BL and across the anti-diagonal
    in BR, which keeps consecutive quadrant endpoints adjacent.
    """
    x, y = _CELL[d & 3]
    d >>= 2
    s = 2
    while s < n:
        q = d & 3
        if q == 0:  # bottom-left
            x, y = y, x
        elif q == 1:  # top-left
            y += s
        elif q == 2:  # top-right
            x += s
            y += s
        else:  # bottom-right
            x, y = 2 * s - 1 - y, s - 1 - x
        d >>= 2
        s <<= 1
    return x, y


def _hilbert_index(n: int, x: int, y: int) -> int:
    """Chain position of (x, y); inverse of _hilbert_coord, O(log n)."""
    d = 0
    s = n >> 1
    while s > 1:
        qx = x >= s
        qy = y >= s
        if not qx and not qy:
            q = 0
            x, y = y, x
        elif not qx:
            q = 1
            y -= s
        elif qy:
            q = 2
            x -= s
            y -= s
        else:
            q = 3
            x, y = s - 1 - y, 2 * s - 1 - x
        d = (d << 2) | q
        s >>= 1
    return (d << 2) | _CELL.index((x, y))


def build_hilbert(n: int) -> SiteMapping:
    """Hilbert-curve mapping of the n x n lattice, n = 2^k with k >= 1.

    The chain starts at (0, 0) and ends at (n-1, 0); consecutive chain
    positions are always 2D nearest neighbors.
    """
    if n < 2 or not _is_power_of_two(n):
        raise ValueError(f"Hilbert curve needs n a power of two >= 2, got {n}")
    inverse = np.empty((n * n, 2), dtype=np.int64)
    forward = np.empty((n, n), dtype=np.int64)
    for d in range(n * n):
        x, y = _hilbert_coord(n, d)
        inverse[d] = (x, y)
        forward[x, y] = d
    return SiteMapping(n=n, kind="hilbert", forward=forward, inverse=inverse)


def build_snake(n: int) -> SiteMapping:
    """Snake (boustrophedon) mapping: rows bottom-to-top, alternating direction.

    Even rows run left-to-right, odd rows right-to-left, so the turn at each
    row end is a unit step.
    """
    if n < 1:
        raise ValueError(f"snake curve needs n >= 1, got {n}")
    inverse = np.empty((n * n, 2), dtype=np.int64)
    forward = np.empty((n, n), dtype=np.int64)
    for y in range(n):
        for x in range(n):
            mu = y * n + (x if y % 2 == 0 else n - 1 - x)
            forward[x, y] = mu
            inverse[mu] = (x, y)
    return SiteMapping(n=n, kind="snake", forward=forward, inverse=inverse)


def build_mapping(kind: str, n: int) -> SiteMapping:
    """Dispatch on curve name ("hilbert" or "snake")."""
    if kind == "hilbert":
        return build_hilbert(n)
    if kind == "snake":
        return build_snake(n)
    raise ValueError(f"unknown mapping kind {kind!r}")


def chain_distance(a: int, b: int) -> int:
    """Number of chain links between sites a and b in the MPS geometry."""
    return abs(a - b)


def tree_distance(a: int, b: int, num_leaves: int) -> int:
    """Number of links between leaves a and b of the binary tree geometry.

    The tree is a perfect binary tree over num_leaves = 2^L chain sites whose
    two top tensors are joined by a single link.  Leaves under a common
    subtree of 2^t sites are 2t links apart; leaves in opposite halves are
    2(L-1) + 1 links apart, crossing the top link.
    """
    if not _is_power_of_two(num_leaves) or num_leaves < 2:
        raise ValueError(f"num_leaves must be a power of two >= 2, got {num_leaves}")
    if not (0 <= a < num_leaves and 0 <= b < num_leaves):
        raise ValueError(f"leaf indices {a}, {b} out of range for {num_leaves} leaves")
    if a == b:
        return 0
    levels = num_leaves.bit_length() - 1
    split = (a ^ b).bit_length()
    if split == levels:  # opposite halves: path crosses the top link
        return 2 * (levels - 1) + 1
    return 2 * split
