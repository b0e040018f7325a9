"""Pure-Python twin of the compiled adaptive-window kernel.

Selected automatically when the Cython extension is unavailable (or when
LUMEN_FORGE_BACKEND=python).  The loop structure and the order of every
floating-point operation mirror ``_kernels.pyx`` exactly, so both backends
produce bit-identical planes; this one is simply slow on large images.
"""

from __future__ import annotations

import math

import numpy as np

_DEN_FLOOR = 1e-6
_TAU_TOL = 0.01
_MAX_ITERS = 10


def _safe_den(d):
    if abs(d) >= _DEN_FLOOR:
        return d
    return _DEN_FLOOR if d >= 0.0 else -_DEN_FLOOR


def _fit_odd_dims(tau, r, cap):
    w0 = tau * r
    h0 = (r * r) / w0 if w0 > 0.0 else float(cap)
    target = float(r * r)
    bound = 2.0 * r
    best_feas = 2
    best_dw = best_dh = 0.0
    best_w = best_h = 0
    for w in range(1, cap + 1, 2):
        h = 2 * int(math.floor((target / w) * 0.5)) + 1
        if h < 1:
            h = 1
        elif h > cap:
            h = cap
        err = abs(w * h - target)
        feas = 0 if err <= bound else 1
        dw = abs(w - w0)
        dh = abs(h - h0)
        if (
            best_w == 0
            or feas < best_feas
            or (feas == best_feas and (dw < best_dw or (dw == best_dw and dh < best_dh)))
        ):
            best_feas, best_dw, best_dh = feas, dw, dh
            best_w, best_h = w, h
    return best_w, best_h


def oriented_filter_pass(x, gx, gy, gprime, r, use_median=False, collect=False, threads=None):
    h, w = x.shape
    cap = 5 * r if (5 * r) % 2 == 1 else 5 * r - 1
    xs = x.tolist()
    gxs = gx.tolist()
    gys = gy.tolist()
    gps = gprime.tolist()
    out = [row[:] for row in xs]

    if collect:
        d_elig = np.zeros((h, w), dtype=np.uint8)
        d_len = np.zeros((h, w), dtype=np.int32)
        d_wid = np.zeros((h, w), dtype=np.int32)
        d_it = np.zeros((h, w), dtype=np.int32)
        d_tau = np.zeros((h, w), dtype=np.float64)
        d_theta = np.zeros((h, w), dtype=np.float64)
        d_smin = np.zeros((h, w), dtype=np.float64)
        d_smax = np.zeros((h, w), dtype=np.float64)

    for i in range(h):
        for j in range(w):
            if not (gps[i][j] > 0.0 and gxs[i][j] != 0.0):
                continue
            gxx = gxs[i][j]
            gyy = gys[i][j]
            tau = abs((gxx + 1.0) / _safe_den(gyy + 1.0))
            theta = math.atan(gyy / gxx)
            length, width = _fit_odd_dims(tau, r, cap)

            iters = 0
            for it in range(1, _MAX_ITERS + 1):
                iters = it
                st = math.sin(theta)
                ct = math.cos(theta)
                half_l = 0.5 * length
                half_w = 0.5 * width
                mb = int(math.floor(half_l * abs(st) + half_w * abs(ct)))
                nb = int(math.floor(half_l * abs(ct) + half_w * abs(st)))
                sx = sy = ax = ay = 0.0
                for n in range(-nb, nb + 1):
                    ii = i + n
                    if ii < 0:
                        ii = 0
                    elif ii >= h:
                        ii = h - 1
                    for m in range(-mb, mb + 1):
                        u = -m * st + n * ct
                        v = m * ct + n * st
                        if abs(u) <= half_l and abs(v) <= half_w:
                            jj = j + m
                            if jj < 0:
                                jj = 0
                            elif jj >= w:
                                jj = w - 1
                            sx += gxs[ii][jj]
                            sy += gys[ii][jj]
                            ax += abs(gxs[ii][jj])
                            ay += abs(gys[ii][jj])
                tau_new = abs((sx + 1.0) / _safe_den(sy + 1.0))
                length, width = _fit_odd_dims(tau_new, r, cap)
                theta = math.atan2(ay, ax)
                done = abs(tau_new - tau) < _TAU_TOL
                tau = tau_new
                if done:
                    break

            st = math.sin(theta)
            ct = math.cos(theta)
            half_l = 0.5 * length
            half_w = 0.5 * width
            mb = int(math.floor(half_l * abs(st) + half_w * abs(ct)))
            nb = int(math.floor(half_l * abs(ct) + half_w * abs(st)))
            smin = math.inf
            smax = -math.inf
            if use_median:
                vals = []
                for n in range(-nb, nb + 1):
                    ii = i + n
                    if ii < 0:
                        ii = 0
                    elif ii >= h:
                        ii = h - 1
                    for m in range(-mb, mb + 1):
                        u = -m * st + n * ct
                        v = m * ct + n * st
                        if abs(u) <= half_l and abs(v) <= half_w:
                            jj = j + m
                            if jj < 0:
                                jj = 0
                            elif jj >= w:
                                jj = w - 1
                            vals.append(xs[ii][jj])
                vals.sort()
                k = len(vals)
                mid = k // 2
                result = vals[mid] if k % 2 == 1 else (vals[mid - 1] + vals[mid]) * 0.5
                smin, smax = vals[0], vals[k - 1]
            else:
                acc = wsum = 0.0
                for n in range(-nb, nb + 1):
                    ii = i + n
                    if ii < 0:
                        ii = 0
                    elif ii >= h:
                        ii = h - 1
                    for m in range(-mb, mb + 1):
                        u = -m * st + n * ct
                        v = m * ct + n * st
                        if abs(u) <= half_l and abs(v) <= half_w:
                            jj = j + m
                            if jj < 0:
                                jj = 0
                            elif jj >= w:
                                jj = w - 1
                            val = xs[ii][jj]
                            wu = u / half_l
                            wv = v / half_w
                            wgt = math.exp(-0.5 * (wu * wu + wv * wv))
                            acc += wgt * val
                            wsum += wgt
                            if val < smin:
                                smin = val
                            if val > smax:
                                smax = val
                result = acc / wsum
            out[i][j] = result

            if collect:
                d_elig[i, j] = 1
                d_len[i, j] = length
                d_wid[i, j] = width
                d_it[i, j] = iters
                d_tau[i, j] = tau
                d_theta[i, j] = theta
                d_smin[i, j] = smin
                d_smax[i, j] = smax

    out_arr = np.asarray(out, dtype=np.float64)
    if not collect:
        return out_arr, None
    diag = {
        "eligible": d_elig.astype(bool),
        "length": d_len,
        "width": d_wid,
        "iterations": d_it,
        "tau": d_tau,
        "theta": d_theta,
        "support_min": d_smin,
        "support_max": d_smax,
    }
    return out_arr, diag
