"""Exact ground states of small term lists by matrix-free Lanczos.

The Hamiltonian acts on the full 2^N space without ever being stored: a
pair term w * sx_mu sx_nu permutes basis states by flipping two bits, and
the field term is diagonal in the z basis.  Bit mu of a basis index is the
spin at chain site mu (bit 0 means sz = +1).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import TermList1D
from .tensor_core import lanczos_smallest

__all__ = ["EdGroundState", "ed_ground_state", "ed_expectation", "dense_hamiltonian"]

MAX_ED_SITES = 20
_DENSE_LIMIT = 14


class TermOperator:
    """Matrix-free application of a TermList1D Hamiltonian."""

    def __init__(self, terms: TermList1D):
        self.num_sites = terms.num_sites
        self.dim = 1 << terms.num_sites
        self._idx = np.arange(self.dim, dtype=np.uint64)
        popcount = np.bitwise_count(self._idx).astype(np.float64)
        # sum_mu sz_mu is N - 2 * popcount on each basis state
        self.diagonal = terms.field_lambda * (terms.num_sites - 2.0 * popcount)
        self.flips = [
            (np.uint64((1 << mu) | (1 << nu)), w) for mu, nu, w in terms.pair_terms
        ]

    def apply(self, vec: np.ndarray) -> np.ndarray:
        out = self.diagonal * vec
        for mask, w in self.flips:
            out += w * vec[self._idx ^ mask]
        return out


@dataclass(frozen=True)
class EdGroundState:
    """Normalized exact ground state with its energy."""

    num_sites: int
    energy: float
    residual: float
    amplitudes: np.ndarray = field(repr=False)

    @property
    def energy_density(self) -> float:
        return self.energy / self.num_sites

    def local_expectation(self, site: int, axis: str) -> float:
        return ed_expectation(self, site, axis)

    def xx_correlation_matrix(self) -> np.ndarray:
        """All <sx_i sx_j> pair correlators (diagonal is 1)."""
        n = self.num_sites
        idx = np.arange(1 << n, dtype=np.uint64)
        corr = np.eye(n)
        for i in range(n):
            for j in range(i + 1, n):
                mask = np.uint64((1 << i) | (1 << j))
                val = float(np.dot(self.amplitudes, self.amplitudes[idx ^ mask]))
                corr[i, j] = corr[j, i] = val
        return corr


def ed_ground_state(
    terms: TermList1D,
    tol: float = 1e-10,
    seed: int = 0,
    max_iter: int = 2000,
) -> EdGroundState:
    """Ground state of the term list, exact up to the Lanczos residual.

    Deterministic for a fixed seed (the seed only sets the start vector).
    Limited to MAX_ED_SITES spins.
    """
    if terms.num_sites > MAX_ED_SITES:
        raise ValueError(
            f"{terms.num_sites} sites exceeds the {MAX_ED_SITES}-spin exact limit"
        )
    op = TermOperator(terms)
    rng = np.random.default_rng(seed)
    start = rng.standard_normal(op.dim)
    result = lanczos_smallest(
        op.apply, start, max_iter=max_iter, tol=tol, max_basis=120, rng=rng
    )
    if not result.converged:
        raise RuntimeError(
            f"Lanczos did not converge in {max_iter} iterations "
            f"(best residual {result.residual:.3e})"
        )
    return EdGroundState(
        num_sites=terms.num_sites,
        energy=result.value,
        residual=result.residual,
        amplitudes=result.vector,
    )


def ed_expectation(state: EdGroundState, site: int, axis: str) -> float:
    """<sigma^axis_site> on the exact state, axis "x" or "z"."""
    if not 0 <= site < state.num_sites:
        raise ValueError(f"site {site} out of range")
    psi = state.amplitudes
    idx = np.arange(psi.size, dtype=np.uint64)
    if axis == "z":
        signs = 1.0 - 2.0 * ((idx >> np.uint64(site)) & np.uint64(1)).astype(np.float64)
        return float(np.dot(psi * psi, signs))
    if axis == "x":
        return float(np.dot(psi, psi[idx ^ np.uint64(1 << site)]))
    raise ValueError(f"axis must be 'x' or 'z', got {axis!r}")


def dense_hamiltonian(terms: TermList1D) -> np.ndarray:
    """Materialize the matrix-free Hamiltonian as a dense array (small N)."""
    if terms.num_sites > _DENSE_LIMIT:
        raise ValueError(f"refusing to densify beyond {_DENSE_LIMIT} sites")
    op = TermOperator(terms)
    mat = np.diag(op.diagonal).astype(np.float64)
    idx = np.arange(op.dim)
    for mask, w in op.flips:
        mat[idx ^ int(mask), idx] += w
    return mat
