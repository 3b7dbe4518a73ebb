"""Compiled Dormand-Prince 5(4) stepping for Hermitian density matrices.

The right-hand side is evaluated as ``-i(M - M^+) + sum_j X_j rho X_j^+`` with
``M = H_eff rho``; ``H_eff`` and the (rate-scaled) jump operators are CSR.
"""

import numpy as np
import scipy.sparse as sp
from numba import njit

# IEEE special values must survive: the error norm is checked with isfinite
_FAST = {"nsz", "arcp", "contract", "reassoc"}

# status codes returned by advance()
HIT = 0
UNDERFLOW = 1
TRACE_DRIFT = 2
MAX_STEPS = 3

A = np.zeros((7, 7))
A[1, 0] = 1 / 5
A[2, :2] = [3 / 40, 9 / 40]
A[3, :3] = [44 / 45, -56 / 15, 32 / 9]
A[4, :4] = [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]
A[5, :5] = [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]
A[6, :6] = [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]
B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
E = B5 - B4


class Operators:
    """CSR arrays of ``H_eff`` and ``sqrt(rate) * X_j`` packed for the kernels."""

    def __init__(self, hamiltonian, jumps):
        heff = np.array(hamiltonian, dtype=complex)
        scaled = []
        for rate, x in jumps:
            heff = heff - 0.5j * rate * (x.conj().T @ x)
            scaled.append(np.sqrt(rate) * x)
        h = sp.csr_matrix(heff)
        self.h = (h.data.astype(complex), h.indices.astype(np.int64), h.indptr.astype(np.int64))
        d = heff.shape[0]
        ptr = np.zeros((max(len(scaled), 1), d + 1), dtype=np.int64)
        data, ind = [], []
        offset = 0
        for q, x in enumerate(scaled):
            c = sp.csr_matrix(x)
            data.append(c.data.astype(complex))
            ind.append(c.indices.astype(np.int64))
            ptr[q] = c.indptr + offset
            offset += c.nnz
        self.n_jumps = len(scaled)
        self.jdata = np.concatenate(data) if data else np.zeros(0, dtype=complex)
        self.jind = np.concatenate(ind) if ind else np.zeros(0, dtype=np.int64)
        self.jptr = ptr
        self.dim = d

    def args(self):
        return self.h + (self.jdata, self.jind, self.jptr, self.n_jumps)


@njit(cache=True, fastmath=_FAST)
def _csr_rows(data, ind, ptr, b, out):
    """out = A @ b for CSR ``A`` and dense ``b`` (row-wise, contiguous)."""
    d = b.shape[1]
    for i in range(ptr.shape[0] - 1):
        row = out[i]
        for j in range(d):
            row[j] = 0.0
        for p in range(ptr[i], ptr[i + 1]):
            a = data[p]
            src = b[ind[p]]
            for j in range(d):
                row[j] += a * src[j]


@njit(cache=True, fastmath=_FAST)
def rhs_into(hd, hi, hp, jd, ji, jp, nj, r, out, work, work2):
    d = r.shape[0]
    _csr_rows(hd, hi, hp, r, work)
    for i in range(d):
        for j in range(d):
            out[i, j] = -1j * (work[i, j] - np.conj(work[j, i]))
    for q in range(nj):
        # X r X^+ = (X (X r)^+)^+
        _csr_rows(jd, ji, jp[q], r, work)
        for i in range(d):
            for j in range(d):
                work2[i, j] = np.conj(work[j, i])
        _csr_rows(jd, ji, jp[q], work2, work)
        for i in range(d):
            for j in range(d):
                out[i, j] += np.conj(work[j, i])


@njit(cache=True, fastmath=_FAST)
def advance(t, target, h, y, f0, k, work, work2, ynew, rtol, atol, max_steps,
            hd, hi, hp, jd, ji, jp, nj, A, E, trace_tol):
    """Step from ``t`` to exactly ``target``; ``y`` and ``f0`` are updated in place.

    Returns ``(status, t, h, n_steps, n_rejected, herm_err, trace_err)`` where the
    errors refer to the last accepted step before correction.
    """
    d = y.shape[0]
    cs = np.empty(7)
    n_steps = 0
    n_rej = 0
    herm_err = 0.0
    trace_err = 0.0
    while True:
        min_step = 1e-14 * max(1.0, abs(t))
        step = h
        hit = False
        if t + step >= target - min_step:
            step = target - t
            hit = True
        if step < min_step:
            return UNDERFLOW, t, h, n_steps, n_rej, herm_err, trace_err
        kf = k.reshape(7, d * d)
        yf = y.reshape(d * d)
        yn = ynew.reshape(d * d)
        kf[0, :] = f0.reshape(d * d)
        for s in range(1, 7):
            # one fused pass per stage keeps the stage vectors streaming once
            for q in range(s):
                cs[q] = step * A[s, q]
            for i in range(d * d):
                acc = yf[i]
                for q in range(s):
                    acc += cs[q] * kf[q, i]
                yn[i] = acc
            rhs_into(hd, hi, hp, jd, ji, jp, nj, ynew, k[s], work, work2)
        # ynew holds the 5th-order solution (FSAL stage argument)
        for q in range(7):
            cs[q] = step * E[q]
        err2 = 0.0
        for i in range(d * d):
            e = cs[0] * kf[0, i]
            for q in range(2, 7):
                e += cs[q] * kf[q, i]
            a2 = yf[i].real * yf[i].real + yf[i].imag * yf[i].imag
            b2 = yn[i].real * yn[i].real + yn[i].imag * yn[i].imag
            sc = atol + rtol * np.sqrt(max(a2, b2))
            err2 += (e.real * e.real + e.imag * e.imag) / (sc * sc)
        err = np.sqrt(err2 / (d * d))
        n_steps += 1
        if n_steps > max_steps:
            return MAX_STEPS, t, h, n_steps, n_rej, herm_err, trace_err
        if not np.isfinite(err):
            h = 0.1 * step
            n_rej += 1
            continue
        if err > 1.0:
            h = step * max(0.2, 0.9 * err ** (-0.2))
            n_rej += 1
            continue
        # accepted: re-Hermitize, check and renormalise the trace
        herm2 = 0.0
        tr = 0.0j
        for i in range(d):
            tr += ynew[i, i]
            for j in range(i, d):
                dr = ynew[i, j].real - ynew[j, i].real
                di = ynew[i, j].imag + ynew[j, i].imag
                herm2 = max(herm2, dr * dr + di * di)
        herm_err = np.sqrt(herm2)
        trace_err = abs(tr - 1.0)
        if trace_err >= trace_tol:
            return TRACE_DRIFT, t + step, h, n_steps, n_rej, herm_err, trace_err
        trr = 0.0
        for i in range(d):
            trr += ynew[i, i].real
        inv = 1.0 / trr
        for i in range(d):
            for j in range(d):
                y[i, j] = 0.5 * inv * (ynew[i, j] + np.conj(ynew[j, i]))
                f0[i, j] = inv * k[6, i, j]
        if err == 0.0:
            factor = 5.0
        else:
            factor = min(5.0, max(0.2, 0.9 * err ** (-0.2)))
        h_next = step * factor
        if hit:
            if step < h:
                h = max(h, h_next)
            else:
                h = h_next
            return HIT, target, h, n_steps, n_rej, herm_err, trace_err
        t = t + step
        h = h_next
