"""Pure-Python bulk classification kernels (fallback engine).

Same interface as the compiled module ``_kernels_cy``; every per-point
routine delegates to ``_scalar``, so the two engines are bit-identical by
construction.  Orders of magnitude slower -- selected only when the
compiled extension is unavailable or explicitly forced.
"""

from __future__ import annotations

from . import _scalar


def _unpack(coeffs):
    return (complex(coeffs[0], coeffs[1]), complex(coeffs[2], coeffs[3]),
            complex(coeffs[4], coeffs[5]), complex(coeffs[6], coeffs[7]))


def classify_corr_block(re_cols, im_rows, r0, r1, c0, c1, pre, invol,
                        x0, r2_slack, max_iter, codes, steps):
    use_pre = len(pre) == 8
    pc = _unpack(pre) if use_pre else None
    jc = _unpack(invol)
    for j in range(r0, r1):
        im = im_rows[j]
        for i in range(c0, c1):
            z = complex(re_cols[i], im)
            if use_pre:
                z = _scalar.moebius_apply(pc, z, True)
            codes[j, i], steps[j, i] = _scalar.classify_point(jc, x0, r2_slack, z, max_iter)


def classify_corr_points(zre, zim, invol, x0, r2_slack, max_iter, codes, steps):
    jc = _unpack(invol)
    for i in range(len(zre)):
        codes[i], steps[i] = _scalar.classify_point(
            jc, x0, r2_slack, complex(zre[i], zim[i]), max_iter)


def classify_mset_block(re_cols, im_rows, r0, r1, c0, c1, max_iter, codes, steps):
    for j in range(r0, r1):
        im = im_rows[j]
        for i in range(c0, c1):
            a = complex(re_cols[i], im)
            setup = _scalar.mset_setup(a)
            if setup is None:
                codes[j, i] = _scalar.MASKED
                steps[j, i] = 0
                continue
            x0, r2s, z0 = setup
            jc = _scalar.j_coefficients(a)
            codes[j, i], steps[j, i] = _scalar.classify_point(jc, x0, r2s, z0, max_iter)


def classify_per11_block(re_cols, im_rows, r0, r1, c0, c1, a_re, a_im,
                         max_iter, radius_sq, codes, steps):
    A = complex(a_re, a_im)
    for j in range(r0, r1):
        im = im_rows[j]
        for i in range(c0, c1):
            codes[j, i], steps[j, i] = _scalar.classify_per11_point(
                A, complex(re_cols[i], im), max_iter, radius_sq)
