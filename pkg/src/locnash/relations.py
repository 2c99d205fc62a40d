"""Numerical discovery of algebraic relations among sampled functions.

A relation is a polynomial P with P(f_1(w), ..., f_k(w)) = 0 on a sampling
domain.  Detection builds the monomial evaluation matrix at random points,
column-normalizes it, and splits the singular spectrum at its largest
consecutive ratio; an accepted certificate must clear both the spectral-gap
threshold and a validation residual on a disjoint sample set.

Degrees are bounded PER VARIABLE: the basis at degree d is
{X^e : max_i e_i <= d}, ordered graded-lexicographically.  Certificates are
unit-norm coefficient vectors with the phase of the largest coefficient
normalized to be real positive.  When the nullspace at the found degree has
dimension > 1 (monomial multiples of the minimal relation fit the same
degree box), the certificate is the element with the graded-lex minimal
leading monomial, i.e. the minimal relation itself.

A sampler is a vectorized callable mapping coordinate arrays to a complex
array; NaN entries mark rejected points (poles, capped magnitudes).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import InsufficientSamples
from .structures import StructureDescriptor, map_batch
from .weierstrass import DEFAULT_TARGET_ABS_ERR, DEFAULT_TRUNC_FACTOR, get_context

DEFAULT_GAP_THRESHOLD = 1e6
DEFAULT_RES_TOL = 1e-6
DEFAULT_BOX = 1.5
# Magnitude cap realizing the "exclude pole neighborhoods" sampling policy:
# |wp| <= 30 keeps samples ~0.2 away from poles.  A loose cap lets single
# near-pole rows dominate high-degree monomial columns, which both erodes the
# singular gap and amplifies evaluation error in the validation residual by
# |value|^(degree-1); 30 passes a 30-seed robustness scan on every fixture.
DEFAULT_VALUE_CAP = 30.0
_MAX_MONOMIALS = 20_000

Sampler = Callable[..., np.ndarray]


def monomial_exponents(arity: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent tuples with every entry <= degree, in graded-lex order."""
    exps = itertools.product(range(degree + 1), repeat=arity)
    return sorted(exps, key=lambda e: (sum(e), tuple(-x for x in e)))


@dataclass(frozen=True)
class RelationCertificate:
    """Unit-norm polynomial certificate with validation evidence."""

    variable_arity: int
    max_degree: int
    exponents: tuple[tuple[int, ...], ...]
    coefficients: tuple[complex, ...]
    residual: float
    singular_gap: float

    def coefficient_of(self, expo: Sequence[int]) -> complex:
        key = tuple(expo)
        for e, c in zip(self.exponents, self.coefficients):
            if e == key:
                return c
        return 0j

    def support(self, rel_tol: float = 1e-8) -> list[tuple[tuple[int, ...], complex]]:
        """Terms with |coeff| above rel_tol * max|coeff|."""
        top = max(abs(c) for c in self.coefficients)
        return [
            (e, c)
            for e, c in zip(self.exponents, self.coefficients)
            if abs(c) > rel_tol * top
        ]

    def serialize(self) -> str:
        lines = [
            "relation_certificate",
            f"arity = {self.variable_arity}",
            f"degree = {self.max_degree}",
            f"residual = {self.residual:.17g}",
            f"singular_gap = {self.singular_gap:.17g}",
        ]
        for e, c in zip(self.exponents, self.coefficients):
            key = ",".join(str(k) for k in e)
            lines.append(f"term ({key}) = {c.real:.17g} {c.imag:.17g}")
        return "\n".join(lines) + "\n"


def format_polynomial(cert: RelationCertificate, names: Sequence[str] | None = None) -> str:
    """Short human-readable form showing only the supported terms."""
    names = names or [f"X{i + 1}" for i in range(cert.variable_arity)]
    parts = []
    for e, c in cert.support():
        mono = "*".join(
            (f"{names[i]}" if k == 1 else f"{names[i]}^{k}")
            for i, k in enumerate(e)
            if k > 0
        )
        coeff = f"{c.real:+.6g}" if abs(c.imag) < 1e-9 * abs(c) or c.imag == 0 else f"+({c.real:.6g}{c.imag:+.6g}i)"
        parts.append(f"{coeff}{'*' + mono if mono else ''}")
    return " ".join(parts)


def _monomial_matrix(values: np.ndarray, exponents: list[tuple[int, ...]]) -> np.ndarray:
    n, arity = values.shape
    dmax = max((max(e) for e in exponents), default=0)
    powers = [
        np.vander(values[:, k], dmax + 1, increasing=True) for k in range(arity)
    ]
    M = np.empty((n, len(exponents)), dtype=complex)
    for j, e in enumerate(exponents):
        col = np.ones(n, dtype=complex)
        for k, p in enumerate(e):
            if p:
                col = col * powers[k][:, p]
        M[:, j] = col
    return M


def _minimal_leading(null_basis: np.ndarray, noise_tol: float = 1e-7) -> np.ndarray:
    """Nullspace element with the graded-lex minimal leading monomial.

    Eliminates from the highest monomial row downward, retiring one basis
    column per essentially-nonzero row.
    """
    B = null_basis.copy()
    active = list(range(B.shape[1]))
    for row in range(B.shape[0] - 1, -1, -1):
        if len(active) == 1:
            break
        vals = np.abs(B[row, active])
        if vals.max() < noise_tol:
            continue
        pivot = active[int(np.argmax(vals))]
        pval = B[row, pivot]
        for col in [c for c in active if c != pivot]:
            B[:, col] -= (B[row, col] / pval) * B[:, pivot]
        active.remove(pivot)
    v = B[:, active[0]]
    return v / np.linalg.norm(v)


def _normalize_phase(c: np.ndarray) -> np.ndarray:
    idx = int(np.argmax(np.abs(c)))
    phase = c[idx] / abs(c[idx])
    out = c / phase
    out[idx] = abs(c[idx])  # exact real positive pivot
    return out


class _SamplePool:
    """Incrementally grown pool of sample rows accepted by every sampler.

    Rows where any sampler returns a non-finite value are dropped.  Growth is
    deterministic for a fixed generator state and request sequence.
    """

    def __init__(self, samplers, domain_dim, rng, box):
        self.samplers = list(samplers)
        self.domain_dim = domain_dim
        self.rng = rng
        self.box = box
        self.rows = np.empty((0, len(self.samplers)), dtype=complex)
        self.attempts = 0

    def ensure(self, size: int) -> np.ndarray:
        while len(self.rows) < size:
            if self.attempts > 60 * size + 1024:
                raise InsufficientSamples(
                    f"collected {len(self.rows)}/{size} samples "
                    f"after {self.attempts} draws"
                )
            batch = max(256, size - len(self.rows))
            coords = [
                self.rng.uniform(-self.box, self.box, batch)
                + 1j * self.rng.uniform(-self.box, self.box, batch)
                for _ in range(self.domain_dim)
            ]
            self.attempts += batch
            vals = np.stack(
                [np.asarray(s(*coords), dtype=complex) for s in self.samplers],
                axis=1,
            )
            good = np.all(np.isfinite(vals.real) & np.isfinite(vals.imag), axis=1)
            self.rows = np.concatenate([self.rows, vals[good]], axis=0)
        return self.rows


def find_relation(
    samplers: Sequence[Sampler],
    max_degree: int,
    n_samples: int = 64,
    seed: int = 0,
    *,
    domain_dim: int = 1,
    box: float = DEFAULT_BOX,
    gap_threshold: float = DEFAULT_GAP_THRESHOLD,
    res_tol: float = DEFAULT_RES_TOL,
    rng: np.random.Generator | None = None,
) -> RelationCertificate | None:
    """Lowest-degree polynomial relation among the samplers, or None.

    Tries per-variable degrees 1..max_degree in order and returns the first
    certificate clearing both the singular-gap threshold and the validation
    residual on a disjoint sample set.  None means "no relation found at
    this degree bound", never a proof of independence.

    n_samples is a floor: every degree trains (and separately validates) on
    at least twice its monomial count.
    """
    if max_degree < 1:
        raise ValueError("max_degree must be >= 1")
    arity = len(samplers)
    if arity < 1:
        raise ValueError("need at least one sampler")
    if (max_degree + 1) ** arity > _MAX_MONOMIALS:
        raise ValueError(
            f"{(max_degree + 1) ** arity} monomials at degree {max_degree} "
            f"exceed the desk-scale limit {_MAX_MONOMIALS}"
        )
    rng = rng if rng is not None else np.random.default_rng(seed)
    pool_src = _SamplePool(samplers, domain_dim, rng, box)

    for degree in range(1, max_degree + 1):
        monos = monomial_exponents(arity, degree)
        m = len(monos)
        n_train = max(n_samples, 2 * m)
        pool = pool_src.ensure(2 * n_train)
        A = _monomial_matrix(pool[:n_train], monos)
        norms = np.linalg.norm(A, axis=0)
        norms[norms == 0.0] = 1.0
        s, vh = np.linalg.svd(A / norms, full_matrices=False)[1:]
        with np.errstate(divide="ignore"):
            ratios = np.where(s[1:] > 0.0, s[:-1] / s[1:], np.inf)
        split = int(np.argmax(ratios))
        gap = float(ratios[split])
        if not gap >= gap_threshold:
            continue
        null_basis = vh[split + 1 :, :].conj().T  # m x r
        c_scaled = _minimal_leading(null_basis)
        V = _monomial_matrix(pool[n_train : 2 * n_train], monos) / norms
        residual = float(np.max(np.abs(V @ c_scaled)))
        if residual >= res_tol:
            continue
        c_orig = c_scaled / norms
        c_orig = c_orig / np.linalg.norm(c_orig)
        c_orig = _normalize_phase(c_orig)
        return RelationCertificate(
            variable_arity=arity,
            max_degree=degree,
            exponents=tuple(monos),
            coefficients=tuple(complex(x) for x in c_orig),
            residual=residual,
            singular_gap=gap,
        )
    return None


# -- samplers built from descriptors ------------------------------------------

def _coordinate_sampler(
    d: StructureDescriptor,
    coord: int,
    part: str,
    value_cap: float | None,
    trunc_radius_factor: float,
    target_abs_err: float,
) -> Sampler:
    n = d.dim

    def sampler(*coords):
        if part == "u":
            args = coords[:n]
        elif part == "v":
            args = coords[n:]
        else:
            args = tuple(coords[j] + coords[n + j] for j in range(n))
        vals, poles = map_batch(
            d, *args,
            trunc_radius_factor=trunc_radius_factor,
            target_abs_err=target_abs_err,
        )
        v = np.array(vals[coord], dtype=complex)
        bad = poles[coord] | ~(np.isfinite(v.real) & np.isfinite(v.imag))
        if value_cap is not None:
            bad |= np.abs(v) > value_cap
        v[bad] = complex("nan")
        return v

    return sampler


def map_sampler(
    d: StructureDescriptor,
    coord: int = 0,
    shift: complex = 0j,
    value_cap: float | None = DEFAULT_VALUE_CAP,
    trunc_radius_factor: float = DEFAULT_TRUNC_FACTOR,
    target_abs_err: float = DEFAULT_TARGET_ABS_ERR,
) -> Sampler:
    """One coordinate of a dim-1 descriptor's map as a sampler, u -> f(u + shift)."""
    if d.dim != 1:
        raise ValueError("map_sampler handles dim-1 descriptors")
    base = _coordinate_sampler(d, coord, "u", value_cap, trunc_radius_factor, target_abs_err)
    if shift == 0:
        return base
    return lambda u: base(np.asarray(u, dtype=complex) + shift)


def wp_sampler(
    lattice,
    value_cap: float | None = DEFAULT_VALUE_CAP,
    trunc_radius_factor: float = DEFAULT_TRUNC_FACTOR,
    target_abs_err: float = DEFAULT_TARGET_ABS_ERR,
) -> Sampler:
    """wp over the given lattice as a sampler with pole / magnitude rejection."""
    ctx = get_context(lattice, trunc_radius_factor, target_abs_err)

    def sampler(u):
        v, _, poles = ctx.wp_many(np.asarray(u, dtype=complex))
        v = np.array(v, dtype=complex)
        bad = poles
        if value_cap is not None:
            bad = bad | (np.abs(v) > value_cap)
        v[bad] = complex("nan")
        return v

    return sampler


# -- higher-level checks -------------------------------------------------------

@dataclass(frozen=True)
class AATReport:
    """Per-coordinate addition-theorem certificates for one descriptor."""

    success: bool
    certificates: tuple[RelationCertificate | None, ...]
    max_degree: int

    @property
    def found_degrees(self) -> tuple[int | None, ...]:
        return tuple(c.max_degree if c else None for c in self.certificates)


def verify_aat(
    d: StructureDescriptor,
    max_degree: int,
    n_samples: int = 64,
    seed: int = 0,
    *,
    box: float = DEFAULT_BOX,
    gap_threshold: float = DEFAULT_GAP_THRESHOLD,
    res_tol: float = DEFAULT_RES_TOL,
    value_cap: float | None = DEFAULT_VALUE_CAP,
    trunc_radius_factor: float = DEFAULT_TRUNC_FACTOR,
    target_abs_err: float = DEFAULT_TARGET_ABS_ERR,
) -> AATReport:
    """Numerical algebraic-addition-theorem certificate for the descriptor.

    For each map coordinate i, searches for a relation among
    f_1(u)...f_n(u), f_1(v)...f_n(v), f_i(u+v).  Success on every
    coordinate constitutes the certificate.
    """
    n = d.dim
    certs: list[RelationCertificate | None] = []
    for coord in range(n):
        samplers = (
            [_coordinate_sampler(d, j, "u", value_cap, trunc_radius_factor, target_abs_err) for j in range(n)]
            + [_coordinate_sampler(d, j, "v", value_cap, trunc_radius_factor, target_abs_err) for j in range(n)]
            + [_coordinate_sampler(d, coord, "uv", value_cap, trunc_radius_factor, target_abs_err)]
        )
        certs.append(
            find_relation(
                samplers,
                max_degree,
                n_samples,
                seed + coord,
                domain_dim=2 * n,
                box=box,
                gap_threshold=gap_threshold,
                res_tol=res_tol,
            )
        )
    return AATReport(all(c is not None for c in certs), tuple(certs), max_degree)


def dependent(
    sampler1: Sampler,
    sampler2: Sampler,
    max_degree: int,
    n_samples: int = 64,
    seed: int = 0,
    **kwargs,
) -> tuple[bool, RelationCertificate | None]:
    """Two-variable algebraic-dependence test.

    False means "no relation found at this degree bound"; it is not a proof
    of independence.
    """
    cert = find_relation(
        [sampler1, sampler2], max_degree, n_samples, seed, domain_dim=1, **kwargs
    )
    return cert is not None, cert


def translate_algebraicity_check(
    d: StructureDescriptor,
    shift: complex,
    max_degree: int,
    n_samples: int = 64,
    seed: int = 0,
    *,
    value_cap: float | None = DEFAULT_VALUE_CAP,
    trunc_radius_factor: float = DEFAULT_TRUNC_FACTOR,
    target_abs_err: float = DEFAULT_TARGET_ABS_ERR,
    **kwargs,
) -> RelationCertificate | None:
    """Certificate that u -> f(u + shift) is algebraic over the unshifted map."""
    if d.dim != 1:
        raise ValueError("translate check handles dim-1 descriptors")
    s0 = map_sampler(d, 0, 0j, value_cap, trunc_radius_factor, target_abs_err)
    s1 = map_sampler(d, 0, shift, value_cap, trunc_radius_factor, target_abs_err)
    return find_relation([s0, s1], max_degree, n_samples, seed, domain_dim=1, **kwargs)
