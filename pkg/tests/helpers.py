"""Independent oracles for the test suite.

Nothing here shares code paths with the package: the q-series reference
evaluates zeta/wp through Jacobi-style expansions, membership is decided by
brute-force enumeration, and the Eisenstein invariants come from plain
hard-cutoff lattice sums.
"""

from __future__ import annotations

import numpy as np

from locnash.lattices import Lattice1


def qseries_reference(lat: Lattice1, nterms: int = 200):
    """(zeta_ref, wp_ref) callables plus (g2, g3, eta1) for the lattice.

    eta1 is 2*zeta(omega1/2).  Valid for arguments with |Im(z/omega1)|
    well inside Im(tau); fine for points of the fundamental cell.
    """
    w1, w2 = lat.omega1, lat.omega2
    tau = w2 / w1
    qb = np.exp(2j * np.pi * tau)
    n = np.arange(1, nterms + 1)
    qn = qb**n
    E2 = 1 - 24 * np.sum(n * qn / (1 - qn))
    E4 = 1 + 240 * np.sum(n**3 * qn / (1 - qn))
    E6 = 1 - 504 * np.sum(n**5 * qn / (1 - qn))
    g2 = (4 * np.pi**4 / 3) * E4 / w1**4
    g3 = (8 * np.pi**6 / 27) * E6 / w1**6
    eta1_tau = (np.pi**2 / 3) * E2

    # q^n sin/cos(2 pi n x) computed as exp(2 pi i n (tau +- x)) so both
    # factors decay together; valid for |Im x| < Im tau (the fundamental cell)
    def _epm(x):
        ep = np.exp(2j * np.pi * n * (tau + x))
        em = np.exp(2j * np.pi * n * (tau - x))
        return ep, em

    def zeta_ref(z: complex) -> complex:
        x = z / w1
        ep, em = _epm(x)
        s = np.sum((ep - em) / (2j * (1 - qn)))
        return (eta1_tau * x + np.pi / np.tan(np.pi * x) + 4 * np.pi * s) / w1

    def wp_ref(z: complex) -> complex:
        x = z / w1
        ep, em = _epm(x)
        s = np.sum(n * (ep + em) / (2 * (1 - qn)))
        return (-eta1_tau + np.pi**2 / np.sin(np.pi * x) ** 2 - 8 * np.pi**2 * s) / w1**2

    return zeta_ref, wp_ref, g2, g3, eta1_tau / w1


def eisenstein_oracle(lat: Lattice1, factor: float = 400.0):
    """g2 = 60 sum 1/w^4 and g3 = 140 sum 1/w^6 by plain truncated sums."""
    R = factor * lat.scale
    w1, w2 = lat.omega1, lat.omega2
    area = lat.covolume
    m_max = int(np.ceil(R * abs(w2) / area)) + 2
    n_max = int(np.ceil(R * abs(w1) / area)) + 2
    M, N = np.meshgrid(
        np.arange(-m_max, m_max + 1), np.arange(-n_max, n_max + 1), indexing="ij"
    )
    pts = M * w1 + N * w2
    keep = ((M != 0) | (N != 0)) & (np.abs(pts) <= R)
    w = pts[keep]
    return 60.0 * np.sum(w**-4.0), 140.0 * np.sum(w**-6.0)


def brute_contains(G, x, box: int = 50, tol: float = 1e-9) -> bool:
    """Membership by enumerating integer combinations with |m_i| <= box."""
    gens = G.generators
    vec = np.asarray(x if not np.isscalar(x) else [x], dtype=complex)
    if not gens:
        return bool(np.linalg.norm(vec) <= tol)
    scale = 1.0 + float(np.linalg.norm(vec))
    grids = np.meshgrid(*[np.arange(-box, box + 1)] * len(gens), indexing="ij")
    total = np.zeros(grids[0].shape + vec.shape, dtype=complex)
    for g_coeff, gen in zip(grids, gens):
        total += g_coeff[..., None] * np.asarray(gen, dtype=complex)
    dist = np.abs(total - vec).sum(axis=-1)
    return bool(dist.min() <= tol * scale)


def random_real_invertible(rng: np.random.Generator, n: int) -> np.ndarray:
    while True:
        A = rng.uniform(-2.0, 2.0, (n, n))
        if abs(np.linalg.det(A)) > 0.2:
            return A.astype(complex)


def central_diff(f, z: complex, h: float = 1e-5) -> complex:
    return (f(z + h) - f(z - h)) / (2 * h)
