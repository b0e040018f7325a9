# cython: language_level=3
"""Compiled adaptive-window kernel.

Hot loop of the oriented-window filtering pass.  The pure-Python twin
``_kernels_py`` mirrors the loop structure and floating-point operation
order of this file exactly; keep the two in sync (the build compiles this
file with -ffp-contract=off so both backends stay bit-identical).
"""

import numpy as np

cimport openmp
from cython.parallel cimport prange
from libc.math cimport INFINITY, atan, atan2, cos, exp, fabs, floor, sin

cdef double _DEN_FLOOR = 1e-6
cdef double _TAU_TOL = 0.01
cdef int _MAX_ITERS = 10


cdef inline double _safe_den(double d) noexcept nogil:
    if fabs(d) >= _DEN_FLOOR:
        return d
    return _DEN_FLOOR if d >= 0.0 else -_DEN_FLOOR


cdef inline void _fit_odd_dims(double tau, int r, int cap, int* pw, int* ph) noexcept nogil:
    cdef double w0 = tau * r
    cdef double h0
    cdef double target = <double>(r * r)
    cdef double bound = 2.0 * r
    cdef int best_feas = 2
    cdef double best_dw = 0.0
    cdef double best_dh = 0.0
    cdef int best_w = 0
    cdef int best_h = 0
    cdef int w, h, feas
    cdef double err, dw, dh
    if w0 > 0.0:
        h0 = (r * r) / w0
    else:
        h0 = <double>cap
    w = 1
    while w <= cap:
        h = 2 * (<int>floor((target / w) * 0.5)) + 1
        if h < 1:
            h = 1
        elif h > cap:
            h = cap
        err = fabs(<double>(w * h) - target)
        feas = 0 if err <= bound else 1
        dw = fabs(w - w0)
        dh = fabs(h - h0)
        if best_w == 0 or feas < best_feas or (
            feas == best_feas and (dw < best_dw or (dw == best_dw and dh < best_dh))
        ):
            best_feas = feas
            best_dw = dw
            best_dh = dh
            best_w = w
            best_h = h
        w += 2
    pw[0] = best_w
    ph[0] = best_h


cdef void _process_row(
    int i, int h, int w,
    double[:, ::1] x, double[:, ::1] gx, double[:, ::1] gy, double[:, ::1] gp,
    int r, int cap, bint use_median, bint collect,
    double[:, ::1] out,
    unsigned char[:, ::1] d_elig, int[:, ::1] d_len, int[:, ::1] d_wid,
    int[:, ::1] d_it, double[:, ::1] d_tau, double[:, ::1] d_theta,
    double[:, ::1] d_smin, double[:, ::1] d_smax,
    double[:, ::1] scratch, int tid,
) noexcept nogil:
    cdef int j, it, iters, length, width, mb, nb, m, n, ii, jj, k, mid, a, b
    cdef double gxx, gyy, tau, theta, tau_new, st, ct, half_l, half_w
    cdef double sx, sy, ax, ay, u, v, acc, wsum, val, wu, wv, wgt
    cdef double smin, smax, result, key
    cdef bint done

    for j in range(w):
        if not (gp[i, j] > 0.0 and gx[i, j] != 0.0):
            continue
        gxx = gx[i, j]
        gyy = gy[i, j]
        tau = fabs((gxx + 1.0) / _safe_den(gyy + 1.0))
        theta = atan(gyy / gxx)
        _fit_odd_dims(tau, r, cap, &length, &width)

        iters = 0
        for it in range(1, _MAX_ITERS + 1):
            iters = it
            st = sin(theta)
            ct = cos(theta)
            half_l = 0.5 * length
            half_w = 0.5 * width
            mb = <int>floor(half_l * fabs(st) + half_w * fabs(ct))
            nb = <int>floor(half_l * fabs(ct) + half_w * fabs(st))
            sx = 0.0
            sy = 0.0
            ax = 0.0
            ay = 0.0
            for n in range(-nb, nb + 1):
                ii = i + n
                if ii < 0:
                    ii = 0
                elif ii >= h:
                    ii = h - 1
                for m in range(-mb, mb + 1):
                    u = -m * st + n * ct
                    v = m * ct + n * st
                    if fabs(u) <= half_l and fabs(v) <= half_w:
                        jj = j + m
                        if jj < 0:
                            jj = 0
                        elif jj >= w:
                            jj = w - 1
                        sx += gx[ii, jj]
                        sy += gy[ii, jj]
                        ax += fabs(gx[ii, jj])
                        ay += fabs(gy[ii, jj])
            tau_new = fabs((sx + 1.0) / _safe_den(sy + 1.0))
            _fit_odd_dims(tau_new, r, cap, &length, &width)
            theta = atan2(ay, ax)
            done = fabs(tau_new - tau) < _TAU_TOL
            tau = tau_new
            if done:
                break

        st = sin(theta)
        ct = cos(theta)
        half_l = 0.5 * length
        half_w = 0.5 * width
        mb = <int>floor(half_l * fabs(st) + half_w * fabs(ct))
        nb = <int>floor(half_l * fabs(ct) + half_w * fabs(st))
        smin = INFINITY
        smax = -INFINITY
        if use_median:
            k = 0
            for n in range(-nb, nb + 1):
                ii = i + n
                if ii < 0:
                    ii = 0
                elif ii >= h:
                    ii = h - 1
                for m in range(-mb, mb + 1):
                    u = -m * st + n * ct
                    v = m * ct + n * st
                    if fabs(u) <= half_l and fabs(v) <= half_w:
                        jj = j + m
                        if jj < 0:
                            jj = 0
                        elif jj >= w:
                            jj = w - 1
                        scratch[tid, k] = x[ii, jj]
                        k += 1
            # insertion sort ascending
            for a in range(1, k):
                key = scratch[tid, a]
                b = a - 1
                while b >= 0 and scratch[tid, b] > key:
                    scratch[tid, b + 1] = scratch[tid, b]
                    b -= 1
                scratch[tid, b + 1] = key
            mid = k // 2
            if k % 2 == 1:
                result = scratch[tid, mid]
            else:
                result = (scratch[tid, mid - 1] + scratch[tid, mid]) * 0.5
            smin = scratch[tid, 0]
            smax = scratch[tid, k - 1]
        else:
            acc = 0.0
            wsum = 0.0
            for n in range(-nb, nb + 1):
                ii = i + n
                if ii < 0:
                    ii = 0
                elif ii >= h:
                    ii = h - 1
                for m in range(-mb, mb + 1):
                    u = -m * st + n * ct
                    v = m * ct + n * st
                    if fabs(u) <= half_l and fabs(v) <= half_w:
                        jj = j + m
                        if jj < 0:
                            jj = 0
                        elif jj >= w:
                            jj = w - 1
                        val = x[ii, jj]
                        wu = u / half_l
                        wv = v / half_w
                        wgt = exp(-0.5 * (wu * wu + wv * wv))
                        acc += wgt * val
                        wsum += wgt
                        if val < smin:
                            smin = val
                        if val > smax:
                            smax = val
            result = acc / wsum
        out[i, j] = result

        if collect:
            d_elig[i, j] = 1
            d_len[i, j] = length
            d_wid[i, j] = width
            d_it[i, j] = iters
            d_tau[i, j] = tau
            d_theta[i, j] = theta
            d_smin[i, j] = smin
            d_smax[i, j] = smax


def oriented_filter_pass(x, gx, gy, gprime, int r, use_median=False, collect=False, threads=None):
    cdef double[:, ::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef double[:, ::1] gxv = np.ascontiguousarray(gx, dtype=np.float64)
    cdef double[:, ::1] gyv = np.ascontiguousarray(gy, dtype=np.float64)
    cdef double[:, ::1] gpv = np.ascontiguousarray(gprime, dtype=np.float64)
    cdef int h = xv.shape[0]
    cdef int w = xv.shape[1]
    cdef int cap = 5 * r if (5 * r) % 2 == 1 else 5 * r - 1
    cdef bint med = bool(use_median)
    cdef bint col = bool(collect)

    cdef int nt = 0
    if threads is not None:
        nt = int(threads)
    if nt <= 0:
        nt = openmp.omp_get_max_threads()

    out_arr = np.array(x, dtype=np.float64, copy=True, order="C")
    cdef double[:, ::1] out = out_arr

    if col:
        diag_shape = (h, w)
    else:
        diag_shape = (1, 1)
    e_arr = np.zeros(diag_shape, dtype=np.uint8)
    l_arr = np.zeros(diag_shape, dtype=np.int32)
    w_arr = np.zeros(diag_shape, dtype=np.int32)
    i_arr = np.zeros(diag_shape, dtype=np.int32)
    t_arr = np.zeros(diag_shape, dtype=np.float64)
    th_arr = np.zeros(diag_shape, dtype=np.float64)
    mn_arr = np.zeros(diag_shape, dtype=np.float64)
    mx_arr = np.zeros(diag_shape, dtype=np.float64)
    cdef unsigned char[:, ::1] d_elig = e_arr
    cdef int[:, ::1] d_len = l_arr
    cdef int[:, ::1] d_wid = w_arr
    cdef int[:, ::1] d_it = i_arr
    cdef double[:, ::1] d_tau = t_arr
    cdef double[:, ::1] d_theta = th_arr
    cdef double[:, ::1] d_smin = mn_arr
    cdef double[:, ::1] d_smax = mx_arr

    # per-thread scratch for the median path; bounding boxes never exceed
    # (2*cap + 1)^2 cells
    scratch_arr = np.zeros((nt, (2 * cap + 1) ** 2), dtype=np.float64)
    cdef double[:, ::1] scratch = scratch_arr

    cdef int i
    with nogil:
        for i in prange(h, num_threads=nt, schedule="static"):
            _process_row(
                i, h, w, xv, gxv, gyv, gpv, r, cap, med, col, out,
                d_elig, d_len, d_wid, d_it, d_tau, d_theta, d_smin, d_smax,
                scratch, openmp.omp_get_thread_num(),
            )

    if not col:
        return out_arr, None
    diag = {
        "eligible": e_arr.astype(bool),
        "length": l_arr,
        "width": w_arr,
        "iterations": i_arr,
        "tau": t_arr,
        "theta": th_arr,
        "support_min": mn_arr,
        "support_max": mx_arr,
    }
    return out_arr, diag
