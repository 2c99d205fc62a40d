"""Numerical evaluation of the Weierstrass sigma, zeta, wp, wp' functions.

Strategy: Gauss-reduce the basis, reduce the argument into the centered
fundamental cell, then evaluate truncated lattice sums over +-omega pairs
combined algebraically (no cancellation between large terms).  The sharp
disk cutoff is smoothed with a cos^2 weight on [R/2, R]; the smoothing keeps
the sum symmetric in omega -> -omega and under any lattice symmetry, and
empirically improves the truncation error by several orders of magnitude
over a hard cutoff at the same radius.

``est_error`` fields are a-posteriori estimates: twice the difference
against a shorter-range (0.7 R) truncation of the same sum, plus a rounding
floor.  They track the observed error well but are estimates, not proven
bounds.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .errors import NotASublattice
from .lattices import (
    DiscreteSubgroup,
    Lattice1,
    coset_representatives,
    gauss_reduced_basis,
    is_sublattice,
    lattice1_from_subgroup,
)

DEFAULT_TRUNC_FACTOR = 120.0
DEFAULT_TARGET_ABS_ERR = 1e-9

_CHUNK_ELEMS = 3_000_000


@dataclass(frozen=True)
class EvalResult:
    """A single function value with an error estimate and a pole flag.

    When pole_flag is set the value and estimate are NaN.
    """

    value: complex
    est_error: float
    pole_flag: bool


def _half_lattice(r1: complex, r2: complex, radius: float) -> np.ndarray:
    """One representative of each +-omega pair with 0 < |omega| <= radius."""
    area = abs((r1.conjugate() * r2).imag)
    m_max = int(np.ceil(radius * abs(r2) / area)) + 2
    n_max = int(np.ceil(radius * abs(r1) / area)) + 2
    m = np.arange(-m_max, m_max + 1)
    n = np.arange(-n_max, n_max + 1)
    M, N = np.meshgrid(m, n, indexing="ij")
    pts = M * r1 + N * r2
    half = (N > 0) | ((N == 0) & (M > 0))
    keep = half & (np.abs(pts) <= radius)
    return pts[keep]


def _cos2_taper(r: np.ndarray, inner: float, outer: float) -> np.ndarray:
    w = np.ones_like(r)
    band = r > inner
    t = np.clip((r[band] - inner) / (outer - inner), 0.0, 1.0)
    w[band] = np.cos(0.5 * np.pi * t) ** 2
    return w


class WeierstrassContext:
    """Evaluation context for one lattice: cached points, weights, eta constants.

    Immutable after construction; contexts may be shared freely across
    threads and evaluation batches partitioned between workers.
    """

    def __init__(
        self,
        lattice: Lattice1,
        trunc_radius_factor: float = DEFAULT_TRUNC_FACTOR,
        target_abs_err: float = DEFAULT_TARGET_ABS_ERR,
    ):
        if trunc_radius_factor < 10.0:
            raise ValueError("truncation radius must be at least 10 * max|omega_i|")
        if target_abs_err <= 0:
            raise ValueError("target_abs_err must be positive")
        self.lattice = lattice
        self.target_abs_err = float(target_abs_err)
        self.trunc_radius = float(trunc_radius_factor) * lattice.scale
        self.pole_tol = 1e-8 * lattice.scale

        r1, r2, U = gauss_reduced_basis(lattice.omega1, lattice.omega2)
        self._r1, self._r2, self._U = r1, r2, U
        det = r1.real * r2.imag - r2.real * r1.imag
        self._binv = np.array(
            [[r2.imag, -r2.real], [-r1.imag, r1.real]]
        ) / det

        pts = _half_lattice(r1, r2, self.trunc_radius)
        absr = np.abs(pts)
        order = np.argsort(absr, kind="stable")
        pts = pts[order]
        absr = absr[order]
        self._w2 = pts * pts
        self._winv2 = 1.0 / self._w2
        R = self.trunc_radius
        self._wt = _cos2_taper(absr, 0.5 * R, R)
        self._wt_est = _cos2_taper(absr, 0.35 * R, 0.7 * R)

        # eta constants for the reduced generators, solved back to the
        # lattice's own generators through the unimodular change of basis
        z = np.array([r1 / 2.0, r2 / 2.0])
        vals, est = self._zeta_core(z)
        eta_red = 2.0 * vals  # 2*zeta(r_i/2)
        self._eta_est = float(np.max(est)) * 2.0
        Uinv = np.round(np.linalg.inv(U)).astype(np.int64)
        eta_orig = Uinv @ eta_red  # since eta_red = U @ eta_orig
        self._eta_red = eta_red
        self.eta_half = (eta_orig[0] / 2.0, eta_orig[1] / 2.0)

        legendre = (
            eta_orig[0] * lattice.omega2 - eta_orig[1] * lattice.omega1
        )
        self.legendre_defect = float(
            min(abs(legendre - 2j * np.pi), abs(legendre + 2j * np.pi))
        )
        if self.legendre_defect > 10.0 * self.target_abs_err:
            raise ValueError(
                f"Legendre defect {self.legendre_defect:.3e} exceeds "
                f"10 * target_abs_err; increase the truncation radius"
            )

    # -- argument reduction ------------------------------------------------

    def reduce_point(self, u: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Reduce into the centered cell of the reduced basis: u = u_red + m r1 + n r2."""
        u = np.asarray(u, dtype=complex)
        c1 = self._binv[0, 0] * u.real + self._binv[0, 1] * u.imag
        c2 = self._binv[1, 0] * u.real + self._binv[1, 1] * u.imag
        m = np.round(c1)
        n = np.round(c2)
        u_red = u - m * self._r1 - n * self._r2
        return u_red, m.astype(np.int64), n.astype(np.int64)

    # -- core sums on reduced arguments -------------------------------------

    def _pair_sums(self, u: np.ndarray, kind: str) -> tuple[np.ndarray, np.ndarray]:
        """Weighted pair sums and their short-range variant for est_error."""
        out = np.empty(u.shape, dtype=complex)
        out_est = np.empty(u.shape, dtype=complex)
        K = len(self._w2)
        chunk = max(1, _CHUNK_ELEMS // max(K, 1))
        for i in range(0, u.size, chunk):
            ui = u.reshape(-1)[i : i + chunk, None]
            u2 = ui * ui
            w2 = self._w2[None, :]
            s = u2 - w2
            if kind == "wp":
                term = (2.0 * u2 * (3.0 * w2 - u2)) / (w2 * s * s)
            elif kind == "zeta":
                term = (2.0 * u2 * ui) * (self._winv2[None, :] / s)
            elif kind == "wp_prime":
                term = (u2 + 3.0 * w2) / (s * s * s)
            elif kind == "logsigma":
                x = u2 * self._winv2[None, :]
                ax = np.abs(x)
                small = ax < 1e-2
                term = np.empty_like(x)
                xs = x[small]
                term[small] = -xs * xs * (
                    0.5 + xs * (1.0 / 3.0 + xs * (0.25 + xs * (0.2 + xs / 6.0)))
                )
                xl = x[~small]
                term[~small] = np.log(1.0 - xl) + xl
            else:  # pragma: no cover
                raise ValueError(kind)
            out.reshape(-1)[i : i + chunk] = term @ self._wt
            out_est.reshape(-1)[i : i + chunk] = term @ self._wt_est
        return out, out_est

    def _zeta_core(self, u_red: np.ndarray):
        s, s_est = self._pair_sums(u_red, "zeta")
        vals = 1.0 / u_red + s
        est = 2.0 * np.abs(s - s_est) + 1e-14 * (1.0 + np.abs(vals))
        return vals, est

    # -- public batch evaluators --------------------------------------------

    def _eval_batch(self, u, kind: str):
        u = np.asarray(u, dtype=complex)
        scalar_in = u.ndim == 0
        u = np.atleast_1d(u)
        u_red, m, n = self.reduce_point(u)
        poles = np.abs(u_red) < self.pole_tol
        values = np.full(u.shape, np.nan, dtype=complex)
        est = np.full(u.shape, np.nan)
        ok = ~poles if kind != "sigma" else np.ones(u.shape, bool)
        if np.any(ok):
            ur = u_red[ok]
            if kind == "wp":
                s, s2 = self._pair_sums(ur, "wp")
                v = 1.0 / (ur * ur) + s
                e = 2.0 * np.abs(s - s2) + 1e-14 * (1.0 + np.abs(v))
            elif kind == "wp_prime":
                s, s2 = self._pair_sums(ur, "wp_prime")
                v = -2.0 / ur**3 - 4.0 * ur * s
                e = 8.0 * np.abs(ur) * np.abs(s - s2) + 1e-14 * (1.0 + np.abs(v))
            elif kind == "zeta":
                v, e = self._zeta_core(ur)
                shift = m[ok] * self._eta_red[0] + n[ok] * self._eta_red[1]
                v = v + shift
                e = e + (np.abs(m[ok]) + np.abs(n[ok])) * self._eta_est
            elif kind == "sigma":
                s, s2 = self._pair_sums(ur, "logsigma")
                mk, nk = m[ok], n[ok]
                eta_shift = mk * self._eta_red[0] + nk * self._eta_red[1]
                omega = mk * self._r1 + nk * self._r2
                expo = s + eta_shift * (ur + 0.5 * omega)
                sign = 1.0 - 2.0 * ((mk + nk + mk * nk) % 2)
                v = sign * ur * np.exp(expo)
                log_err = (
                    2.0 * np.abs(s - s2)
                    + (np.abs(mk) + np.abs(nk))
                    * self._eta_est
                    * np.abs(ur + 0.5 * omega)
                )
                e = np.abs(v) * log_err + 1e-14 * (1.0 + np.abs(v))
            else:  # pragma: no cover
                raise ValueError(kind)
            values[ok] = v
            est[ok] = e
        if kind == "sigma":
            poles = np.zeros(u.shape, bool)
        if scalar_in:
            return values[0], float(est[0]), bool(poles[0])
        return values, est, poles

    def wp_many(self, u):
        return self._eval_batch(u, "wp")

    def wp_prime_many(self, u):
        return self._eval_batch(u, "wp_prime")

    def zeta_many(self, u):
        return self._eval_batch(u, "zeta")

    def sigma_many(self, u):
        return self._eval_batch(u, "sigma")

    def wp(self, u: complex) -> EvalResult:
        return EvalResult(*self._eval_batch(complex(u), "wp"))

    def wp_prime(self, u: complex) -> EvalResult:
        return EvalResult(*self._eval_batch(complex(u), "wp_prime"))

    def zeta(self, u: complex) -> EvalResult:
        return EvalResult(*self._eval_batch(complex(u), "zeta"))

    def sigma(self, u: complex) -> EvalResult:
        """sigma is entire; the pole flag is always False."""
        return EvalResult(*self._eval_batch(complex(u), "sigma"))


@functools.lru_cache(maxsize=64)
def get_context(
    lattice: Lattice1,
    trunc_radius_factor: float = DEFAULT_TRUNC_FACTOR,
    target_abs_err: float = DEFAULT_TARGET_ABS_ERR,
) -> WeierstrassContext:
    """Shared, cached context per (lattice, truncation, target)."""
    return WeierstrassContext(lattice, trunc_radius_factor, target_abs_err)


def sample_reduced(
    lattice: Lattice1,
    count: int,
    rng: np.random.Generator,
    margin: float = 0.45,
    min_dist: float = 0.05,
) -> np.ndarray:
    """Random points in the centered fundamental cell, away from the origin pole."""
    r1, r2, _ = gauss_reduced_basis(lattice.omega1, lattice.omega2)
    floor = min_dist * min(abs(r1), abs(r2))
    out = []
    while len(out) < count:
        c = rng.uniform(-margin, margin, size=(2,))
        z = c[0] * r1 + c[1] * r2
        if abs(z) >= floor:
            out.append(z)
    return np.array(out)


def conjugate_lattice_check(
    ctx: WeierstrassContext, samples
) -> float:
    """Max residual of wp over the conjugate lattice vs the conjugated values."""
    samples = np.asarray(samples, dtype=complex)
    ctx_conj = get_context(
        ctx.lattice.conjugate(),
        ctx.trunc_radius / ctx.lattice.scale,
        ctx.target_abs_err,
    )
    lhs, _, poles_l = ctx_conj.wp_many(samples)
    rhs, _, poles_r = ctx.wp_many(np.conj(samples))
    keep = ~(poles_l | poles_r)
    if not np.any(keep):
        raise ValueError("all samples hit poles")
    return float(np.max(np.abs(lhs[keep] - np.conj(rhs[keep]))))


def coset_sum_check(
    G1: DiscreteSubgroup,
    G2: DiscreteSubgroup,
    samples,
    trunc_radius_factor: float = DEFAULT_TRUNC_FACTOR,
) -> float:
    """Max of |wp_{G2}(u) - sum_i wp_{G1}(u + a_i)| over the samples.

    The difference is the constant -sum_{a_i not in G1} wp_{G1}(a_i).  It
    vanishes for homothetic pairs (G1 = a*G2, where the nonzero
    representatives are the half-periods and the half-period values sum to
    zero), so only there does the returned value measure numerical error.
    """
    if not is_sublattice(G1, G2):
        raise NotASublattice("coset sum requires G1 <= G2")
    samples = np.asarray(samples, dtype=complex)
    reps = coset_representatives(G1, G2)
    ctx1 = get_context(lattice1_from_subgroup(G1), trunc_radius_factor)
    ctx2 = get_context(lattice1_from_subgroup(G2), trunc_radius_factor)
    total = np.zeros(samples.shape, dtype=complex)
    bad = np.zeros(samples.shape, dtype=bool)
    for (a,) in reps:
        vals, _, poles = ctx1.wp_many(samples + a)
        total += np.where(poles, 0.0, vals)
        bad |= poles
    target, _, poles2 = ctx2.wp_many(samples)
    keep = ~(bad | poles2)
    if not np.any(keep):
        raise ValueError("all samples hit poles")
    return float(np.max(np.abs(target[keep] - total[keep])))
