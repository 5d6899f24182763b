"""Symmetries J adapted to an idempotent P.

Three parameterized families are supported, each determined by symmetries
on range(P) and/or its orthocomplement subject to a commutation constraint
with the corner block C:

* intertwining family:  J P J = P*          (params J1, J2 with J1 C + C J2 = 0)
* positive family:      J P  >= 0           (param  J2 with C + C J2 = 0)
* contractive family:   P* J P <= J         (param  J1 with J1 C + C = 0)

With Tinv = (I + C C*)^(-1/2) and Sinv = (I + C* C)^(-1/2), every member is

    J = [[J1 Tinv,     J1 Tinv C ],
         [C* Tinv J1,  J2 Sinv   ]]

in block-form coordinates.  The positive and contractive families have
closed-form least and greatest elements in the Loewner order, built here
from spectral projections of P + P*; the intertwining family has neither
unless P is an orthogonal projection, which the witness pair exhibits.
"""

from __future__ import annotations

import dataclasses
import enum
from typing import NamedTuple

import numpy as np

from .errors import (
    ConstraintViolated,
    InternalMismatch,
    NotIdempotent,
    NotSymmetryParam,
    SingularShift,
)
from .idempotents import BlockForm, block_form, kernel_projections, random_symmetry_on, validate_idempotent
from .linalg import (
    DEFAULT_TOL,
    Tolerances,
    as_matrix,
    frobenius,
    hermitian_sign,
    inv_sqrt_geq_identity,
    is_symmetry,
    kernel_projection,
    scale_of,
    spectral_norm,
    spectral_parts,
)

__all__ = [
    "SymmetryFamily",
    "ExtremalKind",
    "SymmetryParams",
    "DominanceVerdict",
    "assemble_symmetry",
    "sample_params",
    "extremal_symmetry",
    "extremal_symmetry_via_blocks",
    "sign_formula_symmetry",
    "nonexistence_witnesses",
]


class SymmetryFamily(enum.Enum):
    """Which defining relation ties J to the idempotent."""

    J_PROJECTION = "projection"
    J_POSITIVE = "positive"
    J_CONTRACTIVE = "contractive"


class ExtremalKind(enum.Enum):
    """The four closed-form Loewner extremes."""

    POS_MIN = "pos-min"
    POS_MAX = "pos-max"
    CONTR_MIN = "contr-min"
    CONTR_MAX = "contr-max"


class SymmetryParams(NamedTuple):
    """Family parameters in block-form coordinates.

    ``on_range`` acts on range(P) (r x r), ``on_perp`` on its
    orthocomplement ((n-r) x (n-r)).  Families that fix one side carry the
    identity there.
    """

    on_range: np.ndarray
    on_perp: np.ndarray


def _symmetric_psd_margin(m) -> float:
    # lambda_min of the Hermitian part; +inf for empty input.
    m = 0.5 * (m + m.conj().T)
    if m.shape[0] == 0:
        return float("inf")
    return float(np.linalg.eigvalsh(m)[0])


def _check_family_property(p, j, family, tol):
    """Raise InternalMismatch when an assembled J misses its defining relation."""
    p = as_matrix(p)
    sp = scale_of(p)
    if family is SymmetryFamily.J_PROJECTION:
        res = frobenius(j @ p @ j - p.conj().T)
        if res > tol.residual_tol * sp:
            raise InternalMismatch(f"assembled J fails J P J = P*: {res:.3e}")
    elif family is SymmetryFamily.J_POSITIVE:
        jp = j @ p
        if frobenius(jp - jp.conj().T) > tol.residual_tol * sp:
            raise InternalMismatch("assembled J gives a non-Hermitian J P")
        if _symmetric_psd_margin(jp) < -tol.psd_tol * sp:
            raise InternalMismatch("assembled J gives an indefinite J P")
    else:
        d = j - p.conj().T @ j @ p
        margin = _symmetric_psd_margin(d)
        if margin < -tol.psd_tol * scale_of(d):
            raise InternalMismatch(f"assembled J fails P* J P <= J: {margin:.3e}")


def assemble_symmetry(
    bf: BlockForm, family: SymmetryFamily, params, tol: Tolerances = DEFAULT_TOL
) -> np.ndarray:
    """Build the family member determined by the given block parameters.

    ``params`` is a ``SymmetryParams`` pair (or any 2-tuple).  Parameters
    must be symmetries on the right subspaces and satisfy the family
    constraint, else ``NotSymmetryParam`` / ``ConstraintViolated``.  The
    result is returned in the ambient basis and verified to be a symmetry
    with the family's defining property.
    """
    j1, j2 = (as_matrix(x) for x in params)
    r = bf.rank
    c = bf.dim - bf.rank
    if j1.shape != (r, r) or j2.shape != (c, c):
        raise NotSymmetryParam(
            f"expected parameter shapes {(r, r)} and {(c, c)}, "
            f"got {j1.shape} and {j2.shape}"
        )
    if not is_symmetry(j1, tol) or not is_symmetry(j2, tol):
        raise NotSymmetryParam("family parameters must be symmetries")

    corner = bf.corner
    cs = max(1.0, spectral_norm(corner))
    if family is SymmetryFamily.J_POSITIVE:
        if frobenius(j1 - np.eye(r)) > tol.residual_tol * max(1.0, r):
            raise ConstraintViolated("positive family fixes the range-side parameter to I")
        constraint = corner + corner @ j2
    elif family is SymmetryFamily.J_CONTRACTIVE:
        if frobenius(j2 - np.eye(c)) > tol.residual_tol * max(1.0, c):
            raise ConstraintViolated("contractive family fixes the perp-side parameter to I")
        constraint = j1 @ corner + corner
    else:
        constraint = j1 @ corner + corner @ j2
    if frobenius(constraint) > tol.residual_tol * cs:
        raise ConstraintViolated(
            f"parameters violate the corner constraint: {frobenius(constraint):.3e}"
        )

    tinv = inv_sqrt_geq_identity(np.eye(r) + corner @ corner.conj().T, tol)
    sinv = inv_sqrt_geq_identity(np.eye(c) + corner.conj().T @ corner, tol)
    j = bf.assemble(
        j1 @ tinv,
        j1 @ tinv @ corner,
        corner.conj().T @ tinv @ j1,
        j2 @ sinv,
    )
    if not is_symmetry(j, tol):
        raise InternalMismatch("assembled matrix is not a symmetry")
    _check_family_property(bf.reassemble(), j, family, tol)
    return j


def _null_range_split(m):
    """Orthonormal bases (null, range) for the codomain splitting of ``m``.

    Returns ``(u_null, u_range)``: columns of ``u_range`` span range(m),
    columns of ``u_null`` span its orthocomplement N(m*).
    """
    m = as_matrix(m)
    rows = m.shape[0]
    if min(m.shape) == 0:
        return np.eye(rows, dtype=np.complex128), np.zeros((rows, 0), np.complex128)
    u, s, _ = np.linalg.svd(m, full_matrices=True)
    k = int(np.sum(s > DEFAULT_TOL.rank_tol * max(1.0, s[0])))
    return u[:, k:], u[:, :k]


def sample_params(
    bf: BlockForm, family: SymmetryFamily, count: int, seed=0
) -> list:
    """Draw admissible family parameters, deterministic in the seed.

    The admissible sets are block diagonal with respect to the corner's
    null-space splittings: the free part is a random symmetry on the null
    space, the forced part is a sign times the identity on its complement.
    For the intertwining family the shared sign is drawn uniformly.  Draws
    are independent (seeded per index), so ordering does not matter.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    corner = bf.corner
    u_null, u_range = _null_range_split(corner)              # split of range(P)
    v_null, v_range = _null_range_split(corner.conj().T)     # split of range(P)-perp
    r = bf.rank
    c = bf.dim - r
    children = np.random.SeedSequence(seed).spawn(count)
    out = []
    for child in children:
        rng = np.random.default_rng(child)
        if family is SymmetryFamily.J_CONTRACTIVE:
            s1 = random_symmetry_on(u_null, rng)
            j1 = u_null @ s1 @ u_null.conj().T - u_range @ u_range.conj().T
            j2 = np.eye(c, dtype=np.complex128)
        elif family is SymmetryFamily.J_POSITIVE:
            s2 = random_symmetry_on(v_null, rng)
            j1 = np.eye(r, dtype=np.complex128)
            j2 = v_null @ s2 @ v_null.conj().T - v_range @ v_range.conj().T
        else:
            eps = 1.0 if rng.integers(0, 2) else -1.0
            s1 = random_symmetry_on(u_null, rng)
            s2 = random_symmetry_on(v_null, rng)
            j1 = u_null @ s1 @ u_null.conj().T + eps * u_range @ u_range.conj().T
            j2 = v_null @ s2 @ v_null.conj().T - eps * v_range @ v_range.conj().T
        out.append(SymmetryParams(on_range=j1, on_perp=j2))
    return out


def extremal_symmetry(p, kind: ExtremalKind, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Closed-form Loewner extreme of the positive or contractive family.

    With A = P + P* the four extremes are

        pos-min   = 2 proj(A+) - I
        pos-max   = 2 proj(A+) - I + 2 proj(N(A))
        contr-min = 2 proj(A-) - I + 2 proj(N(A))
        contr-max = 2 proj(A-) - I + 2 proj(N(P - P*))

    computed in the ambient basis from spectral projections.  The result is
    verified to be a symmetry satisfying its family's defining property.
    """
    p = as_matrix(p)
    if not validate_idempotent(p, tol):
        raise NotIdempotent("extremal_symmetry requires an idempotent input")
    n = p.shape[0]
    eye = np.eye(n, dtype=np.complex128)
    parts = spectral_parts(p + p.conj().T, tol)
    if kind is ExtremalKind.POS_MIN:
        j = 2 * parts.proj_positive - eye
    elif kind is ExtremalKind.POS_MAX:
        j = 2 * parts.proj_positive - eye + 2 * parts.proj_kernel
    elif kind is ExtremalKind.CONTR_MIN:
        j = 2 * parts.proj_negative - eye + 2 * parts.proj_kernel
    else:
        _, ker_diff = kernel_projections(p, tol)
        j = 2 * parts.proj_negative - eye + 2 * ker_diff
    if not is_symmetry(j, tol):
        raise InternalMismatch(f"extremal {kind.value} is not a symmetry")
    family = (
        SymmetryFamily.J_POSITIVE
        if kind in (ExtremalKind.POS_MIN, ExtremalKind.POS_MAX)
        else SymmetryFamily.J_CONTRACTIVE
    )
    _check_family_property(p, j, family, tol)
    return j


def extremal_symmetry_via_blocks(
    p, kind: ExtremalKind, tol: Tolerances = DEFAULT_TOL
) -> np.ndarray:
    """Same extremes assembled through the block-form parameterization.

    Independent code path used as a cross-check oracle against
    :func:`extremal_symmetry`: the extreme parameters are signs of the
    corner's null-space projections.
    """
    bf = block_form(p, tol)
    r = bf.rank
    c = bf.dim - r
    i_r = np.eye(r, dtype=np.complex128)
    i_c = np.eye(c, dtype=np.complex128)
    null_corner = kernel_projection(bf.corner, tol)            # on range(P)-perp
    null_corner_adj = kernel_projection(bf.corner.conj().T, tol)  # on range(P)
    if kind is ExtremalKind.POS_MIN:
        family, params = SymmetryFamily.J_POSITIVE, (i_r, -i_c)
    elif kind is ExtremalKind.POS_MAX:
        family, params = SymmetryFamily.J_POSITIVE, (i_r, 2 * null_corner - i_c)
    elif kind is ExtremalKind.CONTR_MIN:
        family, params = SymmetryFamily.J_CONTRACTIVE, (-i_r, i_c)
    else:
        family, params = SymmetryFamily.J_CONTRACTIVE, (2 * null_corner_adj - i_r, i_c)
    return assemble_symmetry(bf, family, params, tol)


def _sign_formula_pieces(p, tol: Tolerances):
    """(sign of P+P*-I, projection onto N(P+P*), min |eig| of the shift, its scale)."""
    p = as_matrix(p)
    shift = p + p.conj().T - np.eye(p.shape[0])
    sgn, min_abs = hermitian_sign(shift, tol)
    ker = spectral_parts(p + p.conj().T, tol).proj_kernel
    return sgn, ker, min_abs, scale_of(shift)


def sign_formula_symmetry(p, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """The positive family's greatest element via the matrix sign function:

        (P + P* - I) |P + P* - I|^(-1) + 2 proj(N(P + P*))

    Requires the shift P + P* - I to be numerically invertible, else
    ``SingularShift`` (for exactly idempotent P the shift always dominates
    the identity in modulus, so this only triggers on loose rank cutoffs or
    corrupted inputs).  The result is verified against the spectral route
    and the kernel identity sign(shift) @ proj(N) = -proj(N).
    """
    p = as_matrix(p)
    if not validate_idempotent(p, tol):
        raise NotIdempotent("sign_formula_symmetry requires an idempotent input")
    sgn, ker, min_abs, shift_scale = _sign_formula_pieces(p, tol)
    if min_abs <= tol.rank_tol * shift_scale:
        raise SingularShift(
            f"P + P* - I is numerically singular: min |eig| = {min_abs:.3e}"
        )
    j = sgn + 2 * ker
    sp = scale_of(p)
    jmax = extremal_symmetry(p, ExtremalKind.POS_MAX, tol)
    if frobenius(j - jmax) > tol.residual_tol * sp:
        raise InternalMismatch("sign-function route disagrees with the spectral route")
    if frobenius(sgn @ ker + ker) > tol.residual_tol * sp:
        raise InternalMismatch("sign(P+P*-I) does not act as -I on N(P+P*)")
    return j


@dataclasses.dataclass(frozen=True)
class DominanceVerdict:
    """Loewner comparison of the two witness symmetries.

    ``classification`` is one of ``"psd"``, ``"nsd"``, ``"indefinite"``
    for the difference ``first - second``; the extreme eigenvalues are the
    margins behind the verdict.
    """

    classification: str
    min_eig: float
    max_eig: float


def nonexistence_witnesses(p, tol: Tolerances = DEFAULT_TOL):
    """The sign-pattern witness pair of the intertwining family.

    Returns ``(j_a, j_b, verdict)`` where the witnesses are the family
    members with parameters (-I, +I) and (+I, -I).  Whenever the corner
    block is nonzero their difference is indefinite, which rules out a
    greatest (or least) element of the family; for orthogonal projections
    the family is bounded by I and -I instead.
    """
    p = as_matrix(p)
    bf = block_form(p, tol)
    r = bf.rank
    c = bf.dim - r
    i_r = np.eye(r, dtype=np.complex128)
    i_c = np.eye(c, dtype=np.complex128)
    j_a = assemble_symmetry(bf, SymmetryFamily.J_PROJECTION, (-i_r, i_c), tol)
    j_b = assemble_symmetry(bf, SymmetryFamily.J_PROJECTION, (i_r, -i_c), tol)
    d = j_a - j_b
    d = 0.5 * (d + d.conj().T)
    if d.shape[0] == 0:
        return j_a, j_b, DominanceVerdict("psd", 0.0, 0.0)
    eigs = np.linalg.eigvalsh(d)
    lo, hi = float(eigs[0]), float(eigs[-1])
    band = tol.psd_tol * scale_of(d)
    if lo >= -band:
        kind = "psd"
    elif hi <= band:
        kind = "nsd"
    else:
        kind = "indefinite"
    return j_a, j_b, DominanceVerdict(kind, lo, hi)
