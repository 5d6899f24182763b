"""Idempotent matrices: validation, canonical block form, kernel projections,
and seeded random generators for test inputs.

An n x n idempotent P (``P @ P == P``) is carried to the 2x2 form

    [[I, C],
     [0, 0]]

over the orthogonal splitting range(P) + range(P)-perp, where ``C`` is the
corner block.  ``C == 0`` exactly when P is an orthogonal projection, and
everything this package builds for P is parameterized by ``C``.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .errors import BadRank, InternalMismatch, NotIdempotent, NotOrthonormal
from .linalg import (
    DEFAULT_TOL,
    Tolerances,
    as_matrix,
    frobenius,
    kernel_projection,
    scale_of,
    spectral_parts,
)

__all__ = [
    "BlockForm",
    "validate_idempotent",
    "block_form",
    "kernel_projections",
    "haar_unitary",
    "random_idempotent",
    "random_symmetry_on",
    "as_rng",
]


def as_rng(seed) -> np.random.Generator:
    """Accept an int, SeedSequence or Generator and return a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclasses.dataclass(frozen=True)
class BlockForm:
    """Adapted orthonormal bases of range(P) and its orthocomplement, plus
    the corner block of the idempotent in those coordinates.

    ``basis_range`` is n x r, ``basis_perp`` is n x (n-r), and stacking them
    gives a unitary.  ``corner`` is the r x (n-r) block coupling the two
    subspaces; all other blocks of P in this basis are I and 0.
    """

    basis_range: np.ndarray
    basis_perp: np.ndarray
    corner: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis_range.shape[0]

    @property
    def rank(self) -> int:
        return self.basis_range.shape[1]

    @property
    def unitary(self) -> np.ndarray:
        """The ambient unitary [basis_range | basis_perp]."""
        return np.hstack([self.basis_range, self.basis_perp])

    def assemble(self, b11, b12, b21, b22) -> np.ndarray:
        """Map a 2x2 block matrix in these coordinates back to the ambient basis."""
        n, r = self.dim, self.rank
        out = np.zeros((n, n), dtype=np.complex128)
        out[:r, :r] = b11
        out[:r, r:] = b12
        out[r:, :r] = b21
        out[r:, r:] = b22
        w = self.unitary
        return w @ out @ w.conj().T

    def blocks_of(self, m) -> tuple:
        """The four blocks of an ambient matrix in these coordinates."""
        r = self.rank
        w = self.unitary
        b = w.conj().T @ as_matrix(m) @ w
        return b[:r, :r], b[:r, r:], b[r:, :r], b[r:, r:]

    def embed_range(self, m) -> np.ndarray:
        """Lift an r x r matrix on range(P) to the ambient space (zero elsewhere)."""
        return self.basis_range @ as_matrix(m) @ self.basis_range.conj().T

    def embed_perp(self, m) -> np.ndarray:
        """Lift an (n-r) x (n-r) matrix on range(P)-perp to the ambient space."""
        return self.basis_perp @ as_matrix(m) @ self.basis_perp.conj().T

    def reassemble(self) -> np.ndarray:
        """Reconstruct the idempotent this form was derived from."""
        r, c = self.rank, self.dim - self.rank
        return self.assemble(
            np.eye(r), self.corner, np.zeros((c, r)), np.zeros((c, c))
        )


def validate_idempotent(p, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True when ``p @ p == p`` within ``residual_tol * scale``."""
    p = as_matrix(p)
    if p.shape[0] != p.shape[1]:
        from .errors import DimensionMismatch

        raise DimensionMismatch(f"idempotent must be square, got {p.shape}")
    return frobenius(p @ p - p) <= tol.residual_tol * scale_of(p)


def _canonical_phases(u: np.ndarray) -> np.ndarray:
    # Fix each column's free phase: largest-magnitude entry made real positive.
    if u.size == 0:
        return u
    idx = np.argmax(np.abs(u), axis=0)
    lead = u[idx, np.arange(u.shape[1])]
    mags = np.abs(lead)
    phase = np.where(mags > 0, lead / np.where(mags > 0, mags, 1.0), 1.0)
    return u / phase[None, :]


def block_form(p, tol: Tolerances = DEFAULT_TOL) -> BlockForm:
    """Canonical block form of an idempotent over range(P) + range(P)-perp.

    The bases come from a rank-revealing SVD of P with column phases
    canonicalized, so the form is deterministic in the input.  Raises
    ``NotIdempotent`` when the input fails :func:`validate_idempotent`.
    """
    p = as_matrix(p)
    if not validate_idempotent(p, tol):
        raise NotIdempotent(
            f"||P^2 - P|| = {frobenius(p @ p - p):.3e} exceeds tolerance"
        )
    n = p.shape[0]
    if n == 0:
        z = np.zeros((0, 0), dtype=np.complex128)
        return BlockForm(z, z, z)
    u, s, _ = np.linalg.svd(p)
    r = int(np.sum(s > tol.rank_tol * max(1.0, s[0])))
    basis_range = _canonical_phases(u[:, :r])
    basis_perp = _canonical_phases(u[:, r:])
    corner = basis_range.conj().T @ p @ basis_perp
    return BlockForm(basis_range=basis_range, basis_perp=basis_perp, corner=corner)


def _kernel_projection_routes(p, bf: BlockForm, tol: Tolerances):
    """Both computations of the projections onto N(P+P*) and N(P-P*).

    Returns ``(direct_sum, block_sum, direct_diff, block_diff)`` where the
    direct pair comes from spectral decompositions in the ambient basis and
    the block pair from the corner's null spaces lifted through the basis.
    """
    p = as_matrix(p)
    adj = p.conj().T
    direct_sum = spectral_parts(p + adj, tol).proj_kernel
    # i(P - P*) is Hermitian with the same null space as P - P*.
    direct_diff = spectral_parts(1j * (p - adj), tol).proj_kernel

    null_corner = kernel_projection(bf.corner, tol)
    null_corner_adj = kernel_projection(bf.corner.conj().T, tol)
    block_sum = bf.embed_perp(null_corner)
    block_diff = bf.embed_range(null_corner_adj) + block_sum
    return direct_sum, block_sum, direct_diff, block_diff


def kernel_projections(p, tol: Tolerances = DEFAULT_TOL):
    """Orthogonal projections onto N(P+P*) and N(P-P*) for an idempotent P.

    Each projection is computed two ways, spectrally in the ambient basis
    and from the corner block's null spaces; disagreement beyond tolerance
    raises ``InternalMismatch`` (a rank misclassification), otherwise the
    spectral pair is returned.
    """
    p = as_matrix(p)
    bf = block_form(p, tol)
    direct_sum, block_sum, direct_diff, block_diff = _kernel_projection_routes(
        p, bf, tol
    )
    s = scale_of(p)
    if frobenius(direct_sum - block_sum) > tol.residual_tol * s:
        raise InternalMismatch(
            "N(P+P*) projections disagree between spectral and block routes"
        )
    if frobenius(direct_diff - block_diff) > tol.residual_tol * s:
        raise InternalMismatch(
            "N(P-P*) projections disagree between spectral and block routes"
        )
    return direct_sum, direct_diff


def haar_unitary(n: int, seed=0) -> np.ndarray:
    """Haar-distributed n x n unitary, deterministic in the seed."""
    rng = as_rng(seed)
    if n == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    phase = np.where(np.abs(d) > 0, d / np.where(np.abs(d) > 0, np.abs(d), 1.0), 1.0)
    return q * phase


# Spectral norm cap on the corner block keeps ||P|| <= ~10 so that scaled
# tolerances stay meaningful for generated test inputs.
_CORNER_NORM_CAP = 9.0


def random_idempotent(n: int, r: int, corner_scale: float = 2.0, seed=0) -> np.ndarray:
    """Random n x n idempotent of rank r, deterministic in the seed.

    Conjugates ``[[I, B], [0, 0]]`` by a Haar-random unitary, where B has
    independent complex entries of magnitude at most ``corner_scale``.
    ``corner_scale = 0`` yields an orthogonal projection.
    """
    if not 0 <= r <= n:
        raise BadRank(f"rank {r} not in [0, {n}]")
    if corner_scale < 0:
        raise BadRank(f"corner_scale must be nonnegative, got {corner_scale}")
    rng = as_rng(seed)
    if r == n:
        return np.eye(n, dtype=np.complex128)
    w = haar_unitary(n, rng)
    b = (
        corner_scale
        * (rng.uniform(-1, 1, (r, n - r)) + 1j * rng.uniform(-1, 1, (r, n - r)))
        / np.sqrt(2)
    )
    nb = np.linalg.norm(b, 2) if b.size else 0.0
    if nb > _CORNER_NORM_CAP:
        b *= _CORNER_NORM_CAP / nb
    core = np.zeros((n, n), dtype=np.complex128)
    core[:r, :r] = np.eye(r)
    core[:r, r:] = b
    return w @ core @ w.conj().T


def random_symmetry_on(basis, seed=0) -> np.ndarray:
    """Random symmetry on the span of the given orthonormal columns.

    The result is k x k in the coordinates of the k columns: conjugate a
    random plus/minus-1 diagonal by a Haar unitary.  Raises
    ``NotOrthonormal`` when the columns are not orthonormal.
    """
    basis = as_matrix(basis)
    k = basis.shape[1]
    gram = basis.conj().T @ basis
    if frobenius(gram - np.eye(k)) > DEFAULT_TOL.residual_tol * max(1.0, k):
        raise NotOrthonormal("basis columns are not orthonormal")
    rng = as_rng(seed)
    q = haar_unitary(k, rng)
    signs = rng.integers(0, 2, k) * 2 - 1
    return (q * signs) @ q.conj().T
