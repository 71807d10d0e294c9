"""Pure-NumPy compute kernels.

This is the fallback backend; `gaugelab.kernels._core` provides the same four
entry points compiled via Cython.  All functions take the lookup-table bundle
built by `gaugelab.lattice.kernel_tables`:

    (ip, im, pi, pj, pidx, psign, fa, fb, fc, fv)

with ip/im the periodic +1/-1 neighbor site indices per direction, pi/pj the
ordered direction pairs i < j of the field-strength storage, pidx/psign the
pair index and antisymmetry sign lookups, and fa/fb/fc/fv the sparse
structure-constant entries.

Array arguments are (n_sites, n_dirs, n_colors) float64, C-contiguous.
Results are deterministic and bit-identical to the compiled backend: both
evaluate the same expressions entry by entry in the same order, so every
rounding step matches.
"""

import math

import numpy as np


def field_strength(A, g, tables):
    """F[s, p, a] = D_i A_j^a - D_j A_i^a - g [A_i, A_j]^a for pairs p=(i, j)."""
    ip, im, pi, pj, pidx, psign, fa, fb, fc, fv = tables
    n_sites, _, ng = A.shape
    n_pairs = pi.shape[0]
    F = np.zeros((n_sites, n_pairs, ng))
    for p in range(n_pairs):
        i, j = pi[p], pj[p]
        F[:, p, :] = 0.5 * (A[ip[:, i], j, :] - A[im[:, i], j, :]) - 0.5 * (
            A[ip[:, j], i, :] - A[im[:, j], i, :]
        )
        if g != 0.0:
            for t in range(fa.shape[0]):
                F[:, p, fc[t]] -= g * fv[t] * A[:, i, fa[t]] * A[:, j, fb[t]]
    return F


def eom_rhs(A, g, tables):
    """Time derivative of E: sum_j [D_j F_ji^a - g [A_j, F_ji]^a]."""
    ip, im, pi, pj, pidx, psign, fa, fb, fc, fv = tables
    F = field_strength(A, g, tables)
    nd = A.shape[1]
    out = np.zeros_like(A)
    for i in range(nd):
        for j in range(nd):
            if i == j:
                continue
            p = pidx[j, i]
            sg = psign[j, i]
            coef = sg * 0.5
            out[:, i, :] += coef * (F[ip[:, j], p, :] - F[im[:, j], p, :])
            if g != 0.0:
                for t in range(fa.shape[0]):
                    out[:, i, fc[t]] -= (
                        g * fv[t] * A[:, j, fa[t]] * (sg * F[:, p, fb[t]])
                    )
    return out


def gauss(A, E, g, tables):
    """Gauss-constraint density G[s, a] = sum_i [D_i E_i^a - g [A_i, E_i]^a]."""
    ip, im, pi, pj, pidx, psign, fa, fb, fc, fv = tables
    nd = A.shape[1]
    G = np.zeros((A.shape[0], A.shape[2]))
    for i in range(nd):
        G += 0.5 * (E[ip[:, i], i, :] - E[im[:, i], i, :])
        if g != 0.0:
            for t in range(fa.shape[0]):
                G[:, fc[t]] -= g * fv[t] * A[:, i, fa[t]] * E[:, i, fb[t]]
    return G


def _finite(A, E):
    total = float(A.sum()) + float(E.sum())
    return math.isfinite(total)


def leapfrog_steps(A, E, n, dt, g, tables):
    """Advance (A, E) in place by n kick-drift-kick steps of size dt.

    Returns -1 on success, else the 0-based index of the first step that
    produced a non-finite entry.  The force from the closing half-kick is
    reused as the opening force of the next step, so chunked calls compose
    bit-identically with a single long call.
    """
    if n <= 0:
        return -1
    half = 0.5 * dt
    rhs = eom_rhs(A, g, tables)
    for s in range(n):
        E += half * rhs
        A += dt * E
        rhs = eom_rhs(A, g, tables)
        E += half * rhs
        if not _finite(A, E):
            return s
    return -1
