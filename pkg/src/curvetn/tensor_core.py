"""Dense real tensor kernel: contraction, truncated SVD, QR, Lanczos.

Everything works on plain float64 numpy arrays.  The Hamiltonians handled
here are real symmetric in the computational basis, so there is no complex
support.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

__all__ = [
    "contract",
    "SvdResult",
    "truncated_svd",
    "qr_split",
    "LanczosResult",
    "lanczos_smallest",
]

DEFAULT_SVD_CUTOFF = 1e-12


def contract(a: np.ndarray, b: np.ndarray, axis_pairs: Sequence[tuple[int, int]]) -> np.ndarray:
    """Contract paired axes of a and b; free axes keep order (a's, then b's)."""
    axes_a = [p[0] for p in axis_pairs]
    axes_b = [p[1] for p in axis_pairs]
    for ax_a, ax_b in axis_pairs:
        if a.shape[ax_a] != b.shape[ax_b]:
            raise ValueError(
                f"axis {ax_a} of shape {a.shape} does not match axis {ax_b} of shape {b.shape}"
            )
    return np.tensordot(a, b, axes=(axes_a, axes_b))


def _split_axes(t: np.ndarray, left_axes) -> tuple[list[int], list[int]]:
    if isinstance(left_axes, (int, np.integer)):
        left = list(range(int(left_axes)))
    else:
        left = [int(ax) for ax in left_axes]
    right = [ax for ax in range(t.ndim) if ax not in left]
    if not left or not right:
        raise ValueError("axis partition must leave axes on both sides")
    return left, right


@dataclass(frozen=True)
class SvdResult:
    """Truncated SVD of a tensor split into a (left, right) axis bipartition.

    left_isometry carries the left axes plus a new bond axis; right_isometry
    the bond axis plus the right axes.  truncated_weight is the sum of the
    squared discarded singular values.
    """

    left_isometry: np.ndarray
    singular_values: np.ndarray
    right_isometry: np.ndarray
    truncated_weight: float

    @property
    def rank(self) -> int:
        return len(self.singular_values)


def truncated_svd(
    t: np.ndarray,
    left_axes,
    max_rank: int,
    cutoff: float = DEFAULT_SVD_CUTOFF,
) -> SvdResult:
    """SVD across the given axis partition, truncated to at most max_rank.

    The rank is first capped at max_rank, then trailing singular values whose
    relative squared weight falls below `cutoff` are dropped as well.  At
    least one singular value is always kept.
    """
    if max_rank < 1:
        raise ValueError(f"max_rank must be >= 1, got {max_rank}")
    left, right = _split_axes(t, left_axes)
    left_shape = [t.shape[ax] for ax in left]
    right_shape = [t.shape[ax] for ax in right]
    mat = t.transpose(left + right).reshape(int(np.prod(left_shape)), int(np.prod(right_shape)))
    try:
        u, s, vh = np.linalg.svd(mat, full_matrices=False)
    except np.linalg.LinAlgError as exc:  # gesdd can fail on pathological input
        raise RuntimeError(f"SVD failed on shape {mat.shape}: {exc}") from exc
    if not np.all(np.isfinite(s)):
        raise RuntimeError("SVD produced non-finite singular values")

    total_sq = float(np.dot(s, s))
    rank = min(max_rank, len(s))
    if total_sq > 0.0:
        above = np.nonzero(s * s > cutoff * total_sq)[0]
        rank_above_cutoff = int(above[-1]) + 1 if len(above) else 1
        rank = min(rank, rank_above_cutoff)
    rank = max(rank, 1)

    discarded = s[rank:]
    weight = float(np.dot(discarded, discarded))
    u = u[:, :rank].reshape(left_shape + [rank])
    vh = vh[:rank].reshape([rank] + right_shape)
    return SvdResult(
        left_isometry=u,
        singular_values=s[:rank].copy(),
        right_isometry=vh,
        truncated_weight=weight,
    )


def qr_split(t: np.ndarray, left_axes) -> tuple[np.ndarray, np.ndarray]:
    """QR across an axis partition: left isometry Q plus remainder R.

    Q carries the left axes and a new bond; R is (bond, right axes).
    Contracting Q and R over the bond restores the input tensor.
    """
    left, right = _split_axes(t, left_axes)
    left_shape = [t.shape[ax] for ax in left]
    right_shape = [t.shape[ax] for ax in right]
    mat = t.transpose(left + right).reshape(int(np.prod(left_shape)), int(np.prod(right_shape)))
    q, r = np.linalg.qr(mat, mode="reduced")
    rank = q.shape[1]
    return q.reshape(left_shape + [rank]), r.reshape([rank] + right_shape)


class LanczosResult(NamedTuple):
    value: float
    vector: np.ndarray
    residual: float
    iterations: int
    converged: bool


def _tridiag_smallest(alpha: list[float], beta: list[float]) -> tuple[float, np.ndarray]:
    k = len(alpha)
    tri = np.diag(alpha)
    if k > 1:
        off = np.array(beta[: k - 1])
        tri += np.diag(off, 1) + np.diag(off, -1)
    vals, vecs = np.linalg.eigh(tri)
    return float(vals[0]), vecs[:, 0]


def lanczos_smallest(
    apply: Callable[[np.ndarray], np.ndarray],
    start: np.ndarray,
    max_iter: int = 200,
    tol: float = 1e-10,
    max_basis: int = 100,
    max_restarts: int = 3,
    rng: np.random.Generator | None = None,
    validate_symmetry: bool = False,
) -> LanczosResult:
    """Smallest eigenpair of a symmetric linear map by restarted Lanczos.

    Full reorthogonalization keeps the Krylov basis numerically orthogonal;
    once the basis reaches max_basis the iteration restarts from the current
    Ritz vector.  Breakdown (a zero Krylov vector before convergence)
    restarts from a fresh random vector, at most max_restarts times.
    Convergence means ||A v - theta v|| <= tol * max(1, |theta|).

    Args:
        apply: the linear map; must be symmetric.
        start: start vector (any nonzero vector of the right dimension).
        max_iter: total matvec budget across restarts.
        tol: relative residual tolerance.
        max_basis: Krylov basis size between thick restarts.
        max_restarts: random restarts allowed on breakdown.
        rng: source for random restart vectors (fresh default_rng otherwise).
        validate_symmetry: probe <x, A y> == <A x, y> on one random pair.
    """
    dim = start.size
    if rng is None:
        rng = np.random.default_rng()
    if validate_symmetry:
        x = rng.standard_normal(dim)
        y = rng.standard_normal(dim)
        lhs = float(np.dot(x, apply(y)))
        rhs = float(np.dot(apply(x), y))
        scale = max(1.0, abs(lhs), abs(rhs))
        if abs(lhs - rhs) > 1e-8 * scale:
            raise ValueError(f"map is not symmetric: <x,Ay>={lhs!r}, <Ax,y>={rhs!r}")

    v = np.asarray(start, dtype=np.float64).ravel().copy()
    norm = np.linalg.norm(v)
    if norm == 0.0:
        v = rng.standard_normal(dim)
        norm = np.linalg.norm(v)
    v /= norm

    best = LanczosResult(np.inf, v, np.inf, 0, False)
    iters_done = 0
    restarts = 0

    def ritz_vector(coeff, basis):
        out = np.zeros(dim)
        for c, u in zip(coeff, basis):
            out += c * u
        nrm = np.linalg.norm(out)
        return out / nrm if nrm > 0 else basis[0]

    while iters_done < max_iter:
        basis = [v]
        alpha: list[float] = []
        beta: list[float] = []
        theta, coeff = np.inf, np.ones(1)
        breakdown = False

        while iters_done < max_iter and len(basis) <= max_basis:
            w = apply(basis[-1])
            if not np.all(np.isfinite(w)):
                raise RuntimeError("linear map produced non-finite values")
            iters_done += 1
            a = float(np.dot(basis[-1], w))
            alpha.append(a)
            w -= a * basis[-1]
            if len(basis) > 1:
                w -= beta[-1] * basis[-2]
            for u in basis:  # full reorthogonalization
                w -= np.dot(u, w) * u

            theta, coeff = _tridiag_smallest(alpha, beta)
            b = float(np.linalg.norm(w))
            # in exact arithmetic |b * coeff[-1]| is the Ritz residual norm
            if abs(b * coeff[-1]) <= tol * max(1.0, abs(theta)) or b < 1e-14:
                ritz = ritz_vector(coeff, basis)
                resid = float(np.linalg.norm(apply(ritz) - theta * ritz))
                iters_done += 1
                if resid < best.residual:
                    best = LanczosResult(theta, ritz, resid, iters_done, False)
                if resid <= tol * max(1.0, abs(theta)):
                    return LanczosResult(theta, ritz, resid, iters_done, True)
                if b < 1e-14:
                    breakdown = True
                    break
            beta.append(b)
            basis.append(w / b)

        if breakdown:
            if restarts >= max_restarts:
                break
            restarts += 1
            v = rng.standard_normal(dim)
            v /= np.linalg.norm(v)
            continue

        # basis or iteration budget exhausted: restart from the Ritz vector
        ritz = ritz_vector(coeff, basis)
        resid = float(np.linalg.norm(apply(ritz) - theta * ritz))
        iters_done += 1
        if resid < best.residual:
            best = LanczosResult(theta, ritz, resid, iters_done, False)
        if resid <= tol * max(1.0, abs(theta)):
            return LanczosResult(theta, ritz, resid, iters_done, True)
        v = ritz

    return best
