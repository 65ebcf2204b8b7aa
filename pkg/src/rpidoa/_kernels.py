"""Hot numeric kernels, compiled with numba when available.

Each kernel is written in the numba-compilable subset of numpy; the
pure-numpy fallback (``RPIDOA_NO_NUMBA=1``) runs the identical source
uncompiled, except for the Aberth root finder which also has a
vectorized numpy twin selected automatically on the fallback path.
"""

from __future__ import annotations

import numpy as np

from ._backend import HAS_NUMBA, compile_kernel


# ---------------------------------------------------------------------------
# power iteration


def _power_iteration_body(matrix, v0, eps, max_iters):
    """Repeated matvec with max-entry normalization.

    Each iterate is scaled by its largest-modulus entry; that scaling
    factor is the running dominant-eigenvalue estimate (the component
    ratio of successive iterates at the pivot index).  The loop stops
    when the relative change of the normalized iterate drops below
    ``eps``.  Successive iterates are phase-aligned before differencing:
    for unit-modulus eigenvectors (every array manifold) the pivot index
    jitters among numerically tied entries, which would otherwise inject
    arbitrary global-phase jumps into the residual.

    Returns ``(v, factor, iterations, residuals, converged, degenerate)``
    where ``degenerate`` flags a zero iterate (v0 in the null space).
    """
    v = v0.copy()
    pivot = np.argmax(np.abs(v))
    scale = v[pivot]
    if scale.real == 0.0 and scale.imag == 0.0:
        return v, 0.0 + 0.0j, 0, np.zeros(0, np.float64), False, True
    v = v / scale
    residuals = np.empty(max_iters, np.float64)
    factor = 0.0 + 0.0j
    converged = False
    count = 0
    for n in range(max_iters):
        w = matrix @ v
        pivot = np.argmax(np.abs(w))
        factor = w[pivot]
        if factor.real == 0.0 and factor.imag == 0.0:
            return v, factor, count, residuals[:count], False, True
        w = w / factor
        inner = 0.0 + 0.0j
        for k in range(w.shape[0]):
            inner += v[k].conjugate() * w[k]
        mag = abs(inner)
        align = inner / mag if mag > 0.0 else 1.0 + 0.0j
        num = 0.0
        den = 0.0
        for k in range(w.shape[0]):
            dk = w[k] - align * v[k]
            num += dk.real * dk.real + dk.imag * dk.imag
            den += w[k].real * w[k].real + w[k].imag * w[k].imag
        resid = np.sqrt(num / den)
        residuals[n] = resid
        v = w
        count = n + 1
        if resid <= eps:
            converged = True
            break
    return v, factor, count, residuals[:count], converged, False


power_iteration_kernel = compile_kernel(_power_iteration_body)


# ---------------------------------------------------------------------------
# Aberth-Ehrlich polynomial rooting


def _aberth_body(coeffs, z, tol, max_iters):
    """Simultaneous Aberth sweeps; ``coeffs`` ascending, ``z`` updated in place.

    All corrections of a sweep are computed from the previous root set
    (the same trajectory as the vectorized numpy twin).  Roots whose
    last step fell below the tolerance are frozen; the sweep terminates
    when none remain active, or on stagnation (steps pinned at the
    rounding floor of ill-conditioned inputs - root quality is judged by
    the caller's residual contract, not here).
    """
    deg = z.shape[0]
    nc = coeffs.shape[0]
    w = np.zeros(deg, np.complex128)
    active = np.ones(deg, np.bool_)
    converged = False
    iters = 0
    best_step = 1e300
    stalled = 0
    for it in range(max_iters):
        max_step = 0.0
        for i in range(deg):
            if not active[i]:
                w[i] = 0.0 + 0.0j
                continue
            zi = z[i]
            p = coeffs[nc - 1]
            dp = 0.0 + 0.0j
            for k in range(nc - 2, -1, -1):
                dp = dp * zi + p
                p = p * zi + coeffs[k]
            if p.real == 0.0 and p.imag == 0.0:
                w[i] = 0.0 + 0.0j
                active[i] = False
                continue
            if dp.real == 0.0 and dp.imag == 0.0:
                w[i] = -(zi * 1e-8 + 1e-8)
                if 1.0 > max_step:
                    max_step = 1.0
                continue
            newton = p / dp
            ssum = 0.0 + 0.0j
            for j in range(deg):
                if j != i:
                    dz = zi - z[j]
                    if dz.real != 0.0 or dz.imag != 0.0:
                        ssum += 1.0 / dz
            denom = 1.0 - newton * ssum
            if denom.real == 0.0 and denom.imag == 0.0:
                wi = newton
            else:
                wi = newton / denom
            cap = 0.5 * (1.0 + abs(zi))
            mag = abs(wi)
            if mag > cap:
                wi = wi * (cap / mag)
            w[i] = wi
            step = abs(wi) / (1.0 + abs(zi))
            if step <= tol:
                active[i] = False
            elif step > max_step:
                max_step = step
        for i in range(deg):
            z[i] = z[i] - w[i]
        iters = it + 1
        if max_step <= tol:
            converged = True
            break
        if max_step <= 0.5 * best_step:
            stalled = 0
        else:
            stalled += 1
            if stalled >= 8 and max_step <= 1e-6:
                converged = True
                break
        if max_step < best_step:
            best_step = max_step
    return z, iters, converged


_aberth_compiled = compile_kernel(_aberth_body)


def _aberth_vectorized(coeffs, z, tol, max_iters):
    """Simultaneous (Jacobi-style) Aberth sweeps, vectorized over roots."""
    converged = False
    iters = 0
    deg = z.shape[0]
    best_step = np.inf
    stalled = 0
    for it in range(max_iters):
        p = np.full(deg, coeffs[-1], dtype=np.complex128)
        dp = np.zeros(deg, dtype=np.complex128)
        for k in range(len(coeffs) - 2, -1, -1):
            dp = dp * z + p
            p = p * z + coeffs[k]
        safe_dp = np.where(dp == 0, 1.0, dp)
        newton = np.where(dp == 0, 0.0, p / safe_dp)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        diff[diff == 0] = np.inf
        ssum = (1.0 / diff).sum(axis=1)
        denom = 1.0 - newton * ssum
        safe_denom = np.where(denom == 0, 1.0, denom)
        w = np.where(denom == 0, newton, newton / safe_denom)
        cap = 0.5 * (1.0 + np.abs(z))
        mag = np.abs(w)
        w = np.where(mag > cap, w * (cap / np.where(mag > 0, mag, 1.0)), w)
        z = z - w
        iters = it + 1
        max_step = float((np.abs(w) / (1.0 + np.abs(z))).max())
        if max_step <= tol:
            converged = True
            break
        if max_step <= 0.5 * best_step:
            stalled = 0
        else:
            stalled += 1
            if stalled >= 8 and max_step <= 1e-6:
                converged = True
                break
        best_step = min(best_step, max_step)
    return z, iters, converged


def aberth_kernel(coeffs, z, tol, max_iters):
    if HAS_NUMBA:
        return _aberth_compiled(coeffs, z, tol, max_iters)
    return _aberth_vectorized(coeffs, z, tol, max_iters)


def aberth_initial_guesses(coeffs: np.ndarray) -> np.ndarray:
    """Starting points winding around the geometric-mean root radius.

    Golden-angle spacing plus staggered radii avoid the regular-polygon
    configurations that sit near a fixed point of the Aberth update for
    self-inversive polynomials (all MUSIC polynomials are of that kind).
    """
    deg = len(coeffs) - 1
    lead = abs(coeffs[-1])
    tail = abs(coeffs[0])
    if tail == 0.0 or lead == 0.0:
        radius = 1.0
    else:
        radius = (tail / lead) ** (1.0 / deg)
    k = np.arange(deg)
    angles = 2.399963229728653 * k + 0.376
    radii = radius * np.array([0.82, 1.04, 0.93, 1.24, 1.0, 0.88, 1.13])[k % 7]
    return radii * np.exp(1j * angles)


# ---------------------------------------------------------------------------
# cyclic Jacobi eigendecomposition for complex Hermitian matrices


def _jacobi_body(matrix, tol, max_sweeps):
    """Cyclic-by-row Jacobi rotations; returns (eigenvalues, vectors, sweeps)."""
    a = matrix.copy()
    n = a.shape[0]
    vecs = np.eye(n, dtype=np.complex128)
    fro = 0.0
    for i in range(n):
        for j in range(n):
            fro += a[i, j].real * a[i, j].real + a[i, j].imag * a[i, j].imag
    fro = np.sqrt(fro)
    eigvals = np.empty(n, np.float64)
    if fro == 0.0:
        for i in range(n):
            eigvals[i] = 0.0
        return eigvals, vecs, 0
    sweeps = 0
    for _sweep in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += a[p, q].real * a[p, q].real + a[p, q].imag * a[p, q].imag
        if np.sqrt(2.0 * off) <= tol * fro:
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-18 * fro:
                    continue
                phase = apq / mag
                pc = phase.conjugate()
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                if tau == 0.0:
                    t = 1.0
                elif tau > 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                for r in range(n):
                    if r != p and r != q:
                        arp = a[r, p]
                        arq = a[r, q]
                        a[r, p] = c * arp - s * pc * arq
                        a[r, q] = s * phase * arp + c * arq
                        a[p, r] = a[r, p].conjugate()
                        a[q, r] = a[r, q].conjugate()
                a[p, p] = complex(app - t * mag, 0.0)
                a[q, q] = complex(aqq + t * mag, 0.0)
                a[p, q] = 0.0 + 0.0j
                a[q, p] = 0.0 + 0.0j
                for r in range(n):
                    vrp = vecs[r, p]
                    vrq = vecs[r, q]
                    vecs[r, p] = c * vrp - s * pc * vrq
                    vecs[r, q] = s * phase * vrp + c * vrq
    for i in range(n):
        eigvals[i] = a[i, i].real
    return eigvals, vecs, sweeps


jacobi_kernel = compile_kernel(_jacobi_body)
