"""Decision procedures: 1-D canonical forms and isomorphism verdicts, 2-D
family identification and rank-based separation.

Verdicts are three-valued.  Floating point can certify a rational parameter
ratio (continued-fraction gate) but never irrationality, and dimension 2 has
no within-family criterion, so the honest outcome in those cases is
"undetermined" with an explanatory trace.  Fixtures carrying exact parameter
tags are decided symbolically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InternalInconsistency, NotRealStructure, RankOutOfRange
from .lattices import DEFAULT_COEFF_BOX, DEFAULT_TOL, real_rank1_form
from .scalars import ExactReal, ratio_rationality
from .structures import (
    FAMILY_RANK,
    StructureDescriptor,
    is_real_structure,
    period_group,
    z_rank,
)
from .weierstrass import DEFAULT_TARGET_ABS_ERR, DEFAULT_TRUNC_FACTOR

ISOMORPHIC = "isomorphic"
NOT_ISOMORPHIC = "not_isomorphic"
UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class Verdict:
    outcome: str
    reasons: tuple[str, ...]

    def __post_init__(self):
        if self.outcome not in (ISOMORPHIC, NOT_ISOMORPHIC, UNDETERMINED):
            raise ValueError(f"bad outcome {self.outcome!r}")
        if self.outcome == UNDETERMINED and not self.reasons:
            raise ValueError("undetermined verdicts must carry a reason")


@dataclass(frozen=True)
class CanonicalForm1D:
    kind: str  # "id" | "exp" | "sin" | "wp"
    a: float | None = None
    a_exact: ExactReal | None = None

    @property
    def rank(self) -> int:
        return {"id": 0, "exp": 1, "sin": 1, "wp": 2}[self.kind]


def rational_detect(
    x: float, max_denominator: int = 10**6, tol: float = 1e-9
) -> Fraction | None:
    """First continued-fraction convergent p/q of x with |x - p/q| < tol/q^2.

    Exact arithmetic on the binary value of x; None when no convergent with
    denominator <= max_denominator passes the gate.
    """
    if max_denominator < 1:
        raise ValueError("max_denominator must be >= 1")
    if not math.isfinite(x):
        raise ValueError("x must be finite")
    fr = Fraction(x)
    gate = Fraction(tol)
    h_prev2, k_prev2 = 0, 1
    h_prev, k_prev = 1, 0
    rem = fr
    while True:
        a = math.floor(rem)
        h = a * h_prev + h_prev2
        k = a * k_prev + k_prev2
        if k > max_denominator:
            return None
        if k > 0 and abs(fr - Fraction(h, k)) < gate / (k * k):
            return Fraction(h, k)
        frac_part = rem - a
        if frac_part == 0:
            return None
        h_prev2, k_prev2, h_prev, k_prev = h_prev, k_prev, h, k
        rem = 1 / frac_part


def _canonical_wp_parameter(
    group, tol: float, coeff_box: int
) -> float:
    """Normalize a real rank-2 lattice of C to <1, ia>: returns a > 0.

    Searches the coefficient box for the smallest positive real and smallest
    positive purely-imaginary lattice elements; passing to that rectangular
    finite-index sublattice changes the parameter by a rational factor only,
    which the rational-ratio criterion absorbs.
    """
    g1 = group.generators[0][0]
    g2 = group.generators[1][0]
    scale = max(abs(g1), abs(g2))
    thr = tol * scale * (2 * coeff_box)
    m = np.arange(-coeff_box, coeff_box + 1)
    M, N = np.meshgrid(m, m, indexing="ij")
    vals = M * g1 + N * g2
    re, im = vals.real, vals.imag
    real_mask = (np.abs(im) <= thr) & (re > thr)
    imag_mask = (np.abs(re) <= thr) & (im > thr)
    if not real_mask.any() or not imag_mask.any():
        raise InternalInconsistency(
            "no axis-aligned sublattice found; period group is not real"
        )
    r0 = float(re[real_mask].min())
    s0 = float(im[imag_mask].min())
    return s0 / r0


def classify_1d(
    d: StructureDescriptor,
    tol: float = DEFAULT_TOL,
    coeff_box: int = DEFAULT_COEFF_BOX,
    trunc_radius_factor: float = DEFAULT_TRUNC_FACTOR,
    target_abs_err: float = DEFAULT_TARGET_ABS_ERR,
) -> CanonicalForm1D:
    """Canonical form of a real dim-1 structure: id, exp, sin or wp(<1, ia>).

    Branches on the rank of the period group; rank 1 splits on the period
    axis (imaginary -> exp, real -> sin); rank 2 rescales the lattice by its
    smallest positive real element to the normal form <1, ia>, a > 0.
    """
    if d.dim != 1:
        raise ValueError("classify_1d requires a dim-1 descriptor")
    if not is_real_structure(d, tol):
        raise NotRealStructure(f"{d.family} structure with non-real data")
    report = period_group(d, tol, trunc_radius_factor, target_abs_err)
    r = report.rank
    if r == 0:
        return CanonicalForm1D("id")
    if r == 1:
        axis = real_rank1_form(report.group)
        if axis.kind == "imag":
            return CanonicalForm1D("exp")
        if axis.kind == "real":
            return CanonicalForm1D("sin")
        raise InternalInconsistency(
            "rank-1 period group of a real structure must lie on an axis"
        )
    if r == 2:
        a = _canonical_wp_parameter(report.group, tol, coeff_box)
        a_exact = None
        if (
            d.family == "wp_real"
            and d.a_exact is not None
            and abs(a - complex(d.a).real) <= 1e-9 * (1.0 + a)
        ):
            a_exact = d.a_exact
        return CanonicalForm1D("wp", a=a, a_exact=a_exact)
    raise RankOutOfRange(f"period rank {r} impossible in dimension 1")


def _wp_ratio_verdict(
    c1: CanonicalForm1D,
    c2: CanonicalForm1D,
    max_denominator: int,
    ratio_tol: float,
) -> Verdict:
    reasons = [
        "period rank: 2 vs 2",
        f"normalized lattices <1, ia> with a = {c1.a:.12g} vs {c2.a:.12g}",
    ]
    if c1.a_exact is not None and c2.a_exact is not None:
        sym = ratio_rationality(c1.a_exact, c2.a_exact)
        if isinstance(sym, Fraction):
            reasons.append(f"parameter ratio exactly {sym} (exact tags)")
            return Verdict(ISOMORPHIC, tuple(reasons))
        if sym == "irrational":
            reasons.append(
                f"parameter ratio {c1.a_exact}/{c2.a_exact} is provably irrational (exact tags)"
            )
            return Verdict(NOT_ISOMORPHIC, tuple(reasons))
        reasons.append(
            f"rationality of {c1.a_exact}/{c2.a_exact} is not decidable from the tags"
        )
    ratio = c1.a / c2.a
    found = rational_detect(ratio, max_denominator, ratio_tol)
    if found is not None:
        reasons.append(
            f"ratio a/b = {found} detected rational (continued-fraction gate tol/q^2)"
        )
        return Verdict(ISOMORPHIC, tuple(reasons))
    reasons.append(
        f"no convergent with denominator <= {max_denominator} passed the "
        f"{ratio_tol:g}/q^2 gate; floating point cannot certify irrationality"
    )
    return Verdict(UNDETERMINED, tuple(reasons))


def isomorphic_1d(
    d1: StructureDescriptor,
    d2: StructureDescriptor,
    max_denominator: int = 10**6,
    ratio_tol: float = 1e-9,
    tol: float = DEFAULT_TOL,
    trunc_radius_factor: float = DEFAULT_TRUNC_FACTOR,
    target_abs_err: float = DEFAULT_TARGET_ABS_ERR,
) -> Verdict:
    """Isomorphism verdict for two real dim-1 structures."""
    c1 = classify_1d(d1, tol, trunc_radius_factor=trunc_radius_factor, target_abs_err=target_abs_err)
    c2 = classify_1d(d2, tol, trunc_radius_factor=trunc_radius_factor, target_abs_err=target_abs_err)
    if c1.rank != c2.rank:
        return Verdict(
            NOT_ISOMORPHIC,
            (
                f"period rank: {c1.rank} vs {c2.rank}",
                "period-group rank is an isomorphism invariant",
            ),
        )
    if c1.kind != c2.kind:
        # equal rank 1, exp vs sin
        return Verdict(
            NOT_ISOMORPHIC,
            (
                f"period rank: {c1.rank} vs {c2.rank}",
                "period axis: imaginary (exponential type) vs real (sine type); "
                "a real linear map cannot exchange the axes",
            ),
        )
    if c1.kind != "wp":
        return Verdict(
            ISOMORPHIC, (f"identical canonical form: {c1.kind}",)
        )
    return _wp_ratio_verdict(c1, c2, max_denominator, ratio_tol)


@dataclass(frozen=True)
class Family2D:
    index: int  # 1..6
    rank: int


_FAMILY_INDEX = {"p1": 1, "p2": 2, "p3": 3, "p4": 4, "p5": 5, "p6_product": 6}


def classify_2d(
    d: StructureDescriptor,
    tol: float = DEFAULT_TOL,
    trunc_radius_factor: float = DEFAULT_TRUNC_FACTOR,
    target_abs_err: float = DEFAULT_TARGET_ABS_ERR,
) -> Family2D:
    """Family index with its rank witness, cross-validated against the table."""
    if d.dim != 2:
        raise ValueError("classify_2d requires a dim-2 descriptor")
    r = z_rank(d, tol, trunc_radius_factor, target_abs_err)
    if r != FAMILY_RANK[d.family]:  # z_rank already enforces this
        raise InternalInconsistency("rank witness disagrees with the family table")
    return Family2D(_FAMILY_INDEX[d.family], r)


def compare_2d(
    d1: StructureDescriptor,
    d2: StructureDescriptor,
    tol: float = DEFAULT_TOL,
    trunc_radius_factor: float = DEFAULT_TRUNC_FACTOR,
    target_abs_err: float = DEFAULT_TARGET_ABS_ERR,
) -> Verdict:
    """Family-separation verdict for two real dim-2 structures.

    Different families are never isomorphic (rank invariant, plus a
    transcendence obstruction for the two rank-2 families); within one
    family no criterion is available, so the verdict is undetermined.
    """
    for d in (d1, d2):
        if d.dim != 2:
            raise ValueError("compare_2d requires dim-2 descriptors")
        if not is_real_structure(d, tol):
            raise NotRealStructure(f"{d.family} structure with non-real data")
    f1 = classify_2d(d1, tol, trunc_radius_factor, target_abs_err)
    f2 = classify_2d(d2, tol, trunc_radius_factor, target_abs_err)
    lo, hi = sorted((f1, f2), key=lambda f: f.index)
    if f1.index == f2.index:
        return Verdict(
            UNDETERMINED,
            (
                f"both structures lie in family {f1.index} (rank {f1.rank})",
                "no within-family isomorphism criterion is available in dimension 2",
            ),
        )
    if f1.rank != f2.rank:
        return Verdict(
            NOT_ISOMORPHIC,
            (
                f"period rank: {lo.rank} (family {lo.index}) vs {hi.rank} (family {hi.index})",
                "period-group rank is an isomorphism invariant",
            ),
        )
    return Verdict(
        NOT_ISOMORPHIC,
        (
            f"equal period rank {f1.rank}, families {lo.index} vs {hi.index}",
            "family separation: the exponential-pair and elliptic rank-2 families "
            "are never isomorphic (transcendence obstruction)",
        ),
    )
