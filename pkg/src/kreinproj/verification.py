"""Classification predicates and certificate reports.

``classify`` decides which of the five relations tie a symmetry J to an
idempotent P.  ``extremality_probe`` samples admissible family members and
measures their Loewner margins against the closed-form extremes.
``full_report`` runs every check this package knows about over one input
pair and returns a report whose failures are check results, never
exceptions.
"""

from __future__ import annotations

from typing import NamedTuple, Optional

import numpy as np

from . import decompositions as dec
from .errors import KreinProjError, NotIdempotent, NotSymmetry, SingularShift
from .idempotents import (
    _kernel_projection_routes,
    block_form,
    validate_idempotent,
)
from .linalg import (
    DEFAULT_TOL,
    Tolerances,
    as_matrix,
    frobenius,
    is_symmetry,
    loewner_geq,
    scale_of,
    spectral_norm,
    spectral_parts,
)
from .reporting import (
    CheckResult,
    Report,
    margin_check,
    matrix_digest,
    residual_check,
    skipped_check,
)
from .symmetries import (
    ExtremalKind,
    SymmetryFamily,
    _sign_formula_pieces,
    assemble_symmetry,
    extremal_symmetry,
    extremal_symmetry_via_blocks,
    nonexistence_witnesses,
    sample_params,
    sign_formula_symmetry,
)

__all__ = [
    "ProjectionFlags",
    "classify",
    "contractive_positive_equivalence",
    "extremality_probe",
    "full_report",
]

# Residual recorded when a check could not be computed at all.
_ERROR_RESIDUAL = 1e300

# Witness-gap eigenvalues must reach this magnitude on both signs before the
# pair counts as exhibiting indefiniteness.
INDEFINITE_MARGIN = 1e-6


class ProjectionFlags(NamedTuple):
    """Which of the five defining relations hold for the pair (P, J)."""

    j_projection: bool
    j_positive: bool
    j_negative: bool
    j_contractive: bool
    j_expansive: bool


def _min_eig_sym(m) -> float:
    m = 0.5 * (m + m.conj().T)
    if m.shape[0] == 0:
        return float("inf")
    return float(np.linalg.eigvalsh(m)[0])


def classify(p, j, tol: Tolerances = DEFAULT_TOL) -> ProjectionFlags:
    """Test all five relations between an idempotent and a symmetry.

    Positivity and negativity require J P to be Hermitian within tolerance;
    the PSD test alone is not enough.
    """
    p = as_matrix(p)
    j = as_matrix(j)
    if not validate_idempotent(p, tol):
        raise NotIdempotent("classify requires an idempotent P")
    if not is_symmetry(j, tol):
        raise NotSymmetry("classify requires a symmetry J")
    sp = scale_of(p)
    jp = j @ p
    hermitian = frobenius(jp - jp.conj().T) <= tol.residual_tol * sp
    lo = _min_eig_sym(jp)
    hi = -_min_eig_sym(-jp)
    pjp = p.conj().T @ j @ p
    return ProjectionFlags(
        j_projection=frobenius(j @ p @ j - p.conj().T) <= tol.residual_tol * sp,
        j_positive=hermitian and lo >= -tol.psd_tol * sp,
        j_negative=hermitian and hi <= tol.psd_tol * sp,
        j_contractive=loewner_geq(j, pjp, tol)[0],
        j_expansive=loewner_geq(pjp, j, tol)[0],
    )


def contractive_positive_equivalence(p, j, tol: Tolerances = DEFAULT_TOL) -> CheckResult:
    """Check the biconditional: P* J P <= J holds iff J (I - P) >= 0.

    The two sides are evaluated independently; the check passes when their
    verdicts agree (including the case where both fail).  On disagreement
    the residual records the larger violation.
    """
    p = as_matrix(p)
    j = as_matrix(j)
    if not validate_idempotent(p, tol):
        raise NotIdempotent("biconditional check requires an idempotent P")
    if not is_symmetry(j, tol):
        raise NotSymmetry("biconditional check requires a symmetry J")
    sp = scale_of(p)
    contractive, c_margin = loewner_geq(j, p.conj().T @ j @ p, tol)

    comp = j @ (np.eye(p.shape[0]) - p)
    herm_res = frobenius(comp - comp.conj().T)
    p_margin = _min_eig_sym(comp)
    positive = herm_res <= tol.residual_tol * sp and p_margin >= -tol.psd_tol * scale_of(comp)

    if contractive == positive:
        residual = 0.0
        note = "both hold" if contractive else "both fail"
    else:
        violations = []
        if not contractive:
            violations.append(max(0.0, -c_margin))
        if not positive:
            violations.append(max(herm_res, max(0.0, -p_margin)))
        residual = max(violations)
        note = "verdicts disagree"
    return residual_check(
        "contractive-iff-complement-positive", "Lemma 11", residual, 0.0, note=note
    )


_FAMILY_REFS = {
    SymmetryFamily.J_POSITIVE: "Lemma 4 / Theorem 8(i)",
    SymmetryFamily.J_CONTRACTIVE: "Theorem 7(i)(ii)",
}

_KIND_REFS = {
    ExtremalKind.POS_MIN: "Lemma 4",
    ExtremalKind.POS_MAX: "Theorem 8(i)",
    ExtremalKind.CONTR_MIN: "Theorem 7(i)",
    ExtremalKind.CONTR_MAX: "Theorem 7(ii)",
}


def _admissibility_checks(prefix, ref, p, j, family, tol) -> list:
    """Checks that a candidate symmetry satisfies its family's relation."""
    sp = scale_of(p)
    out = []
    if family is SymmetryFamily.J_POSITIVE:
        jp = j @ p
        out.append(
            residual_check(
                f"{prefix}-hermitian", ref, frobenius(jp - jp.conj().T),
                tol.residual_tol * sp,
            )
        )
        out.append(margin_check(f"{prefix}-psd", ref, _min_eig_sym(jp), tol.psd_tol * sp))
    else:
        out.append(
            margin_check(
                f"{prefix}-dominates", ref,
                _min_eig_sym(j - p.conj().T @ j @ p), tol.psd_tol * sp,
            )
        )
    return out


def extremality_probe(
    p,
    family: SymmetryFamily,
    samples: int,
    seed=0,
    tol: Tolerances = DEFAULT_TOL,
) -> Report:
    """Sample admissible symmetries and measure their margins against the
    family's closed-form least and greatest elements.

    Each sampled J contributes two margin checks, lambda_min(J - J_min) and
    lambda_min(J_max - J), judged against psd_tol as an absolute bound.
    The extremes themselves are checked for admissibility.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    if family is SymmetryFamily.J_PROJECTION:
        raise ValueError("the intertwining family has no extreme elements to probe")
    p = as_matrix(p)
    bf = block_form(p, tol)
    if family is SymmetryFamily.J_POSITIVE:
        kinds = (ExtremalKind.POS_MIN, ExtremalKind.POS_MAX)
    else:
        kinds = (ExtremalKind.CONTR_MIN, ExtremalKind.CONTR_MAX)
    ref = _FAMILY_REFS[family]
    j_min = extremal_symmetry(p, kinds[0], tol)
    j_max = extremal_symmetry(p, kinds[1], tol)

    checks = []
    checks += _admissibility_checks("extreme-min", _KIND_REFS[kinds[0]], p, j_min, family, tol)
    checks += _admissibility_checks("extreme-max", _KIND_REFS[kinds[1]], p, j_max, family, tol)
    for i, params in enumerate(sample_params(bf, family, samples, seed)):
        j = assemble_symmetry(bf, family, params, tol)
        checks.append(
            margin_check(f"sample-{i:03d}-above-min", ref, _min_eig_sym(j - j_min), tol.psd_tol)
        )
        checks.append(
            margin_check(f"sample-{i:03d}-below-max", ref, _min_eig_sym(j_max - j), tol.psd_tol)
        )
    subject = {
        "dim": p.shape[0],
        "rank": bf.rank,
        "family": family.value,
        "samples": samples,
        "matrix_sha256": matrix_digest(p),
    }
    return Report(subject=subject, checks=checks, config=tol, seed=seed)


_GROUPS = [
    ("block-form", "Eq. (1.1)"),
    ("kernel-routes", "Lemma 6"),
    ("negative-part-formula", "Lemma 1"),
    ("extremal-constructions", "Lemma 4 / Theorems 7, 8(i)"),
    ("sign-formula", "Remark"),
    ("probe-positive", "Lemma 4 / Theorem 8(i)"),
    ("probe-contractive", "Theorem 7(i)(ii)"),
    ("projection-identities", "Theorem 12"),
    ("intertwining", "Proposition 9"),
    ("adjoint-similarity", "Corollary 10(i)"),
    ("complement-sum", "Corollary 10(iii)"),
]

_J_GROUPS = [
    ("j-checks", "§1"),
    ("biconditional", "Lemma 11"),
    ("contractive-expansive-split", "Corollary 14"),
    ("positive-negative-split", "Lemma 13"),
    ("witness-pair", "Theorem 8(ii)"),
]


def _failed(name, ref, exc) -> CheckResult:
    return residual_check(
        name, ref, _ERROR_RESIDUAL, 0.0, note=f"{type(exc).__name__}: {exc}"
    )


def full_report(
    p,
    j=None,
    tol: Tolerances = DEFAULT_TOL,
    samples: int = 25,
    seed: Optional[int] = 0,
) -> Report:
    """Run every check over one idempotent and (optionally) one symmetry.

    Failures become failing check results rather than exceptions.  Checks
    that do not apply are recorded as skipped with a reason: everything
    after a failed idempotency gate, and the J-dependent group when J is
    missing, is not a symmetry, or does not satisfy J P J = P*.
    """
    p = as_matrix(p)
    n = p.shape[0]
    sp = scale_of(p)
    res_budget = tol.residual_tol * sp
    psd_budget = tol.psd_tol * sp
    checks = []
    subject = {"dim": n, "matrix_sha256": matrix_digest(p)}
    report = Report(subject=subject, checks=checks, config=tol, seed=seed)

    idem_res = frobenius(p @ p - p)
    checks.append(residual_check("idempotent", "§1", idem_res, res_budget))
    if idem_res > res_budget:
        for name, ref in _GROUPS + _J_GROUPS:
            checks.append(skipped_check(name, ref, "input is not idempotent"))
        return report

    bf = block_form(p, tol)
    eye = np.eye(n, dtype=np.complex128)
    bf_comp = block_form(eye - p, tol)
    subject["rank"] = bf.rank
    parts = spectral_parts(p + p.conj().T, tol)

    # block form
    w = bf.unitary
    checks.append(
        residual_check(
            "block-basis-unitary", "Eq. (1.1)",
            frobenius(w.conj().T @ w - eye), res_budget,
        )
    )
    checks.append(
        residual_check(
            "block-form-round-trip", "Eq. (1.1)",
            frobenius(bf.reassemble() - p), res_budget,
        )
    )

    # kernel projections, both routes
    try:
        ds, bs, dd, bd = _kernel_projection_routes(p, bf, tol)
        checks.append(
            residual_check("kernel-sum-route-agreement", "Lemma 6(i)", frobenius(ds - bs), res_budget)
        )
        checks.append(
            residual_check("kernel-diff-route-agreement", "Lemma 6(ii)", frobenius(dd - bd), res_budget)
        )
    except KreinProjError as e:
        checks.append(_failed("kernel-routes", "Lemma 6", e))

    # closed-form negative projection against its spectral oracle
    try:
        corner = bf.corner
        s_mat = dec.anchored_block(corner)
        formula = dec._negative_part_formula(corner, tol)
        oracle = spectral_parts(s_mat, tol).proj_negative
        checks.append(
            residual_check(
                "negative-part-closed-form", "Lemma 1",
                frobenius(formula - oracle), tol.residual_tol * scale_of(s_mat),
            )
        )
        halved = dec._negative_part_formula(corner / 2, tol)
        sum_neg_blocks = w.conj().T @ parts.proj_negative @ w
        checks.append(
            residual_check(
                "negative-part-halved-corner", "Lemma 1",
                frobenius(halved - sum_neg_blocks),
                tol.residual_tol * scale_of(p + p.conj().T),
            )
        )
    except KreinProjError as e:
        checks.append(_failed("negative-part-formula", "Lemma 1", e))

    # extremal constructions, both code paths, plus the identity web
    extremes = {}
    for kind in ExtremalKind:
        ref = _KIND_REFS[kind]
        try:
            jk = extremal_symmetry(p, kind, tol)
            extremes[kind] = jk
            sym_res = max(frobenius(jk - jk.conj().T), frobenius(jk @ jk - eye))
            checks.append(
                residual_check(f"extremal-{kind.value}-symmetry", ref, sym_res, res_budget)
            )
            family = (
                SymmetryFamily.J_POSITIVE
                if kind in (ExtremalKind.POS_MIN, ExtremalKind.POS_MAX)
                else SymmetryFamily.J_CONTRACTIVE
            )
            checks += _admissibility_checks(f"extremal-{kind.value}", ref, p, jk, family, tol)
            via_blocks = extremal_symmetry_via_blocks(p, kind, tol)
            checks.append(
                residual_check(
                    f"extremal-{kind.value}-block-route", ref,
                    frobenius(via_blocks - jk), res_budget,
                )
            )
        except KreinProjError as e:
            checks.append(_failed(f"extremal-{kind.value}", ref, e))
    if len(extremes) == len(list(ExtremalKind)):
        web = [
            ("identity-web-pos-min", "Lemma 4", extremes[ExtremalKind.POS_MIN],
             parts.proj_positive - parts.proj_negative - parts.proj_kernel),
            ("identity-web-pos-max", "Theorem 8(i)", extremes[ExtremalKind.POS_MAX],
             parts.proj_positive - parts.proj_negative + parts.proj_kernel),
            ("identity-web-contr-min", "Theorem 7(i)", extremes[ExtremalKind.CONTR_MIN],
             parts.proj_negative - parts.proj_positive + parts.proj_kernel),
        ]
        for name, ref, lhs, rhs in web:
            checks.append(residual_check(name, ref, frobenius(lhs - rhs), res_budget))

    # sign-function route to the positive family's greatest element
    try:
        jsf = sign_formula_symmetry(p, tol)
        sgn, ker, _, _ = _sign_formula_pieces(p, tol)
        if ExtremalKind.POS_MAX in extremes:
            checks.append(
                residual_check(
                    "sign-formula-matches-pos-max", "Remark",
                    frobenius(jsf - extremes[ExtremalKind.POS_MAX]), res_budget,
                )
            )
        checks.append(
            residual_check(
                "sign-formula-kernel-action", "Remark",
                frobenius(sgn @ ker + ker), res_budget,
            )
        )
    except SingularShift as e:
        checks.append(skipped_check("sign-formula", "Remark", str(e)))
    except KreinProjError as e:
        checks.append(_failed("sign-formula", "Remark", e))

    # sampled extremality probes for both bounded families
    for family, prefix in (
        (SymmetryFamily.J_POSITIVE, "probe-positive/"),
        (SymmetryFamily.J_CONTRACTIVE, "probe-contractive/"),
    ):
        try:
            probe = extremality_probe(p, family, samples, seed, tol)
            report.extend_prefixed(prefix, probe)
        except KreinProjError as e:
            checks.append(_failed(prefix.rstrip("/"), _FAMILY_REFS[family], e))

    # spectral projection identities for the complement
    try:
        report.extend_prefixed("", dec.spectral_projection_identities(p, tol))
    except KreinProjError as e:
        checks.append(_failed("projection-identities", "Theorem 12", e))

    # intertwining unitaries and the unitary equivalences they produce
    try:
        _, _, intertwine_res = dec.intertwining_unitaries(p, tol)
        checks.append(
            residual_check("intertwining-residual", "Proposition 9", intertwine_res, res_budget)
        )
        sv_p = np.linalg.svd(bf.corner, compute_uv=False)
        sv_q = np.linalg.svd(bf_comp.corner, compute_uv=False)
        sv_gap = float(np.max(np.abs(sv_p - sv_q))) if sv_p.size else 0.0
        checks.append(
            residual_check("corner-singular-values", "Proposition 9", sv_gap, res_budget)
        )
    except KreinProjError as e:
        checks.append(_failed("intertwining", "Proposition 9", e))
    try:
        _, adj_res = dec.adjoint_similarity(p, tol)
        checks.append(
            residual_check("adjoint-similarity-residual", "Corollary 10(i)", adj_res, res_budget)
        )
    except KreinProjError as e:
        checks.append(_failed("adjoint-similarity", "Corollary 10(i)", e))
    try:
        _, sum_res = dec.complement_sum_equivalence(p, tol)
        checks.append(
            residual_check("complement-sum-residual", "Corollary 10(iii)", sum_res, res_budget)
        )
        lhs = p + p.conj().T + 2 * (eye - bf.basis_range @ bf.basis_range.conj().T)
        rhs = 2 * eye - p - p.conj().T + 2 * (eye - bf_comp.basis_range @ bf_comp.basis_range.conj().T)
        spec_gap = (
            float(np.max(np.abs(np.linalg.eigvalsh(0.5 * (lhs + lhs.conj().T))
                                - np.linalg.eigvalsh(0.5 * (rhs + rhs.conj().T)))))
            if n
            else 0.0
        )
        checks.append(
            residual_check("complement-sum-spectra", "Corollary 10(iii)", spec_gap, res_budget)
        )
    except KreinProjError as e:
        checks.append(_failed("complement-sum", "Corollary 10(iii)", e))

    # J-dependent group
    skip_reason = None
    if j is None:
        skip_reason = "no symmetry supplied"
    else:
        j = as_matrix(j)
        subject["symmetry_sha256"] = matrix_digest(j)
        if j.shape != p.shape:
            skip_reason = "symmetry dimension does not match"
        elif not is_symmetry(j, tol):
            skip_reason = "J is not a symmetry"
        elif frobenius(j @ p @ j - p.conj().T) > res_budget:
            skip_reason = "JPJ != P*"
    if skip_reason is not None:
        for name, ref in _J_GROUPS:
            checks.append(skipped_check(name, ref, skip_reason))
        return report

    checks.append(
        residual_check(
            "j-intertwines-adjoint", "§1",
            frobenius(j @ p @ j - p.conj().T), res_budget,
        )
    )
    flags = classify(p, j, tol)
    subject["classification"] = dict(flags._asdict())
    checks.append(contractive_positive_equivalence(p, j, tol))

    try:
        ce = dec.contractive_expansive_split(p, j, tol)
        for key, val in dec.split_identity_residuals(ce, p).items():
            checks.append(residual_check(f"split-ce-{key}", "Corollary 14", val, res_budget))
        for key, val in dec.split_classification_margins(ce, j).items():
            checks.append(margin_check(f"split-ce-{key}", "Corollary 14", val, psd_budget))
    except KreinProjError as e:
        checks.append(_failed("contractive-expansive-split", "Corollary 14", e))
    try:
        pn = dec.positive_negative_split(p, j, tol)
        for key, val in dec.split_identity_residuals(pn, p).items():
            checks.append(residual_check(f"split-pn-{key}", "Lemma 13", val, res_budget))
        margins = dec.split_classification_margins(pn, j)
        for key, val in margins.items():
            if key.endswith("residual"):
                checks.append(residual_check(f"split-pn-{key}", "Lemma 13", val, res_budget))
            else:
                checks.append(margin_check(f"split-pn-{key}", "Lemma 13", val, psd_budget))
    except KreinProjError as e:
        checks.append(_failed("positive-negative-split", "Lemma 13", e))

    try:
        j_a, j_b, verdict = nonexistence_witnesses(p, tol)
        for name, wit in (("witness-a-intertwines", j_a), ("witness-b-intertwines", j_b)):
            checks.append(
                residual_check(
                    name, "Theorem 8(ii)",
                    frobenius(wit @ p @ wit - p.conj().T), res_budget,
                )
            )
        if spectral_norm(bf.corner) > tol.rank_tol * sp:
            # nonzero corner: no greatest element, witnessed by a gap with
            # eigenvalues of both signs
            gap = min(verdict.max_eig, -verdict.min_eig) - INDEFINITE_MARGIN
            checks.append(
                margin_check(
                    "witness-gap-indefinite", "Theorem 8(ii)", gap, 0.0,
                    note="difference must carry eigenvalues of both signs",
                )
            )
        else:
            # orthogonal projection: the greatest element exists and is the
            # identity, which must be admissible and dominate both witnesses
            checks.append(
                residual_check(
                    "witness-bound-identity-admissible", "Theorem 8(ii)",
                    frobenius(p - p.conj().T), res_budget,
                )
            )
            dominance = min(_min_eig_sym(eye - j_a), _min_eig_sym(eye - j_b))
            checks.append(
                margin_check(
                    "witness-bound-identity-dominates", "Theorem 8(ii)",
                    dominance, psd_budget,
                )
            )
    except KreinProjError as e:
        checks.append(_failed("witness-pair", "Theorem 8(ii)", e))

    return report
