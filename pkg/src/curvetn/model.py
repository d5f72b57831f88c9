"""2D transverse-field Ising model and its mapped 1D long-range term list.

The Hamiltonian on the n x n lattice is

    H = J sum_<ij> sx_i sx_j + lambda sum_i sz_i

with J > 0 the antiferromagnetic coupling and <ij> running over nearest
neighbors (plus wraparound pairs under periodic boundaries).  A SiteMapping
relabels the sites onto a chain, turning each 2D edge into a long-range pair
term; the spectrum is untouched because the relabeling is a permutation.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field

import numpy as np

from .spacefill import SiteMapping, chain_distance, tree_distance

__all__ = [
    "IsingModel2D",
    "TermList1D",
    "DistanceHistogram",
    "edges_2d",
    "map_to_chain",
    "distance_histogram",
    "open_terms_per_cut",
]

BOUNDARIES = ("open", "periodic")


@dataclass(frozen=True)
class IsingModel2D:
    """Transverse-field Ising model on the n x n square lattice."""

    n: int
    field_lambda: float
    coupling_j: float = 1.0
    boundary: str = "open"

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"lattice size must be >= 2, got {self.n}")
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"boundary must be one of {BOUNDARIES}, got {self.boundary!r}")

    @property
    def num_sites(self) -> int:
        return self.n * self.n


@dataclass(frozen=True)
class TermList1D:
    """Mapped 1D Hamiltonian: sx-sx pair terms plus a uniform sz field.

    pair_terms holds (mu, nu, weight) with mu < nu, sorted by (mu, nu); the
    field term carries field_lambda on every chain site.
    """

    num_sites: int
    field_lambda: float
    pair_terms: tuple[tuple[int, int, float], ...] = field(repr=False)

    def __post_init__(self):
        seen = set()
        for mu, nu, _ in self.pair_terms:
            if not (0 <= mu < nu < self.num_sites):
                raise ValueError(f"pair ({mu}, {nu}) out of order or range")
            if (mu, nu) in seen:
                raise ValueError(f"duplicate pair term ({mu}, {nu})")
            seen.add((mu, nu))

    def to_json(self) -> str:
        payload = {
            "num_sites": self.num_sites,
            "lambda": self.field_lambda,
            "pairs": [[mu, nu, w] for mu, nu, w in self.pair_terms],
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "TermList1D":
        payload = json.loads(text)
        pairs = tuple((int(mu), int(nu), float(w)) for mu, nu, w in payload["pairs"])
        return cls(
            num_sites=int(payload["num_sites"]),
            field_lambda=float(payload["lambda"]),
            pair_terms=pairs,
        )


def edges_2d(model: IsingModel2D) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """All nearest-neighbor edges of the lattice, wraparound pairs included
    under periodic boundaries.  2n(n-1) edges for open, 2n^2 for periodic."""
    n = model.n
    edges = []
    for y in range(n):
        for x in range(n):
            if x + 1 < n:
                edges.append(((x, y), (x + 1, y)))
            if y + 1 < n:
                edges.append(((x, y), (x, y + 1)))
    if model.boundary == "periodic":
        for y in range(n):
            edges.append(((n - 1, y), (0, y)))
        for x in range(n):
            edges.append(((x, n - 1), (x, 0)))
    return edges


def map_to_chain(model: IsingModel2D, mapping: SiteMapping) -> TermList1D:
    """Relabel every 2D edge through the mapping into a chain pair term."""
    if mapping.n != model.n:
        raise ValueError(f"mapping is for n={mapping.n}, model has n={model.n}")
    pairs = []
    for a, b in edges_2d(model):
        mu = mapping.index(*a)
        nu = mapping.index(*b)
        if mu > nu:
            mu, nu = nu, mu
        pairs.append((mu, nu, model.coupling_j))
    pairs.sort(key=lambda t: (t[0], t[1]))
    return TermList1D(
        num_sites=model.num_sites,
        field_lambda=model.field_lambda,
        pair_terms=tuple(pairs),
    )


@dataclass(frozen=True)
class DistanceHistogram:
    """Distribution of pair-term distances in a given network geometry."""

    geometry: str
    counts: dict[int, int]
    normalized: dict[int, float]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def mean(self) -> float:
        return sum(d * c for d, c in self.counts.items()) / self.total

    def max_distance(self) -> int:
        return max(self.counts)

    def tail_fraction(self, top: float = 0.1) -> float:
        """Probability mass at distances within the top `top` of the range."""
        threshold = (1.0 - top) * self.max_distance()
        return sum(p for d, p in self.normalized.items() if d >= threshold)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("distance,count,probability\n")
        for d in sorted(self.counts):
            buf.write(f"{d},{self.counts[d]},{self.normalized[d]:.17g}\n")
        return buf.getvalue()


def distance_histogram(terms: TermList1D, geometry: str) -> DistanceHistogram:
    """Histogram of chain or tree distances over all pair terms."""
    if geometry == "chain":
        dist = lambda mu, nu: chain_distance(mu, nu)
    elif geometry == "tree":
        n_sites = terms.num_sites
        if n_sites & (n_sites - 1) != 0:
            raise ValueError("tree geometry needs a power-of-two site count")
        dist = lambda mu, nu: tree_distance(mu, nu, n_sites)
    else:
        raise ValueError(f"geometry must be 'chain' or 'tree', got {geometry!r}")
    counts: dict[int, int] = {}
    for mu, nu, _ in terms.pair_terms:
        d = dist(mu, nu)
        counts[d] = counts.get(d, 0) + 1
    total = sum(counts.values())
    normalized = {d: c / total for d, c in counts.items()}
    return DistanceHistogram(geometry=geometry, counts=counts, normalized=normalized)


def open_terms_per_cut(terms: TermList1D) -> np.ndarray:
    """Number of pair terms open across each chain cut.

    Entry b counts pairs (mu, nu) with mu <= b < nu; this sizes the MPO
    automaton bond b and is the locality proxy compared between curves.
    """
    open_counts = np.zeros(terms.num_sites - 1, dtype=np.int64)
    for mu, nu, _ in terms.pair_terms:
        open_counts[mu:nu] += 1
    return open_counts
