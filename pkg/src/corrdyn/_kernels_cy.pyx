# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled bulk classification kernels.

Mirrors ``_scalar`` operation for operation.  Complex arithmetic is NOT
done with C99 complex: multiplication, Smith division and the square root
are ports of CPython's own algorithms (``_Py_c_prod``, ``_Py_c_quot``,
``c_sqrt`` -- the latter calls the same libm ``hypot`` CPython uses), and
the extension is compiled with -ffp-contract=off, so classifications are
bit-identical to the pure-Python engine.  Keep every expression in the
same form and order as ``_scalar``.
"""

from libc.math cimport fabs, sqrt, hypot, copysign, ldexp, INFINITY as C_INF
from libc.float cimport DBL_MIN

cdef double INF_LIMIT = 1e150
cdef double SLACK_FACTOR = 1.0 - 1e-12   # matches _scalar.DJ_BOUNDARY_SLACK

cdef signed char CODE_BOUNDED = 0
cdef signed char CODE_ESCAPED = 1
cdef signed char CODE_MASKED = 2


cdef struct Cplx:
    double re
    double im


cdef struct SP:              # sphere point: finite value or infinity mark
    double re
    double im
    bint inf


cdef inline Cplx cmul(Cplx a, Cplx b) noexcept nogil:
    cdef Cplx r
    r.re = a.re * b.re - a.im * b.im
    r.im = a.re * b.im + a.im * b.re
    return r


cdef inline Cplx cscalef(double f, Cplx z) noexcept nogil:
    # float * complex in CPython is a full product with (f, 0.0)
    cdef Cplx r
    r.re = f * z.re - 0.0 * z.im
    r.im = f * z.im + 0.0 * z.re
    return r


cdef inline Cplx cquot(Cplx a, Cplx b) noexcept nogil:
    # CPython _Py_c_quot (Smith's algorithm); caller guarantees b != 0
    cdef Cplx r
    cdef double ratio, denom
    cdef double abs_breal = fabs(b.re)
    cdef double abs_bimag = fabs(b.im)
    if abs_breal >= abs_bimag:
        ratio = b.im / b.re
        denom = b.re + b.im * ratio
        r.re = (a.re + a.im * ratio) / denom
        r.im = (a.im - a.re * ratio) / denom
    else:
        ratio = b.re / b.im
        denom = b.re * ratio + b.im
        r.re = (a.re * ratio + a.im) / denom
        r.im = (a.im * ratio - a.re) / denom
    return r


cdef inline Cplx csqrt_(Cplx z) noexcept nogil:
    # CPython c_sqrt for finite inputs (cmathmodule.c)
    cdef Cplx r
    cdef double s, d, ax, ay
    if z.re == 0.0 and z.im == 0.0:
        r.re = 0.0
        r.im = z.im
        return r
    ax = fabs(z.re)
    ay = fabs(z.im)
    if ax < DBL_MIN and ay < DBL_MIN and (ax > 0.0 or ay > 0.0):
        ax = ldexp(ax, 53)
        s = ldexp(sqrt(ax + hypot(ax, ldexp(ay, 53))), -27)
    else:
        ax = ax / 8.0
        s = 2.0 * sqrt(ax + hypot(ax, ay / 8.0))
    d = ay / (2.0 * s)
    if z.re >= 0.0:
        r.re = s
        r.im = copysign(d, z.im)
    else:
        r.re = d
        r.im = copysign(s, z.im)
    return r


cdef struct Moebius:
    Cplx p
    Cplx q
    Cplx r
    Cplx s


cdef inline Moebius unpack_moebius(double[::1] c) noexcept nogil:
    cdef Moebius m
    m.p.re = c[0]; m.p.im = c[1]
    m.q.re = c[2]; m.q.im = c[3]
    m.r.re = c[4]; m.r.im = c[5]
    m.s.re = c[6]; m.s.im = c[7]
    return m


cdef inline SP moebius_apply(Moebius m, SP z) noexcept nogil:
    # promoting variant: components beyond INF_LIMIT collapse to infinity
    cdef SP out
    cdef Cplx den, num, w, t
    if z.inf:
        if m.r.re == 0.0 and m.r.im == 0.0:
            out.inf = True
            out.re = 0.0
            out.im = 0.0
            return out
        w = cquot(m.p, m.r)
    else:
        t.re = z.re
        t.im = z.im
        den = cmul(m.r, t)
        den.re = den.re + m.s.re
        den.im = den.im + m.s.im
        if den.re == 0.0 and den.im == 0.0:
            out.inf = True
            out.re = 0.0
            out.im = 0.0
            return out
        num = cmul(m.p, t)
        num.re = num.re + m.q.re
        num.im = num.im + m.q.im
        w = cquot(num, den)
    if fabs(w.re) > INF_LIMIT or fabs(w.im) > INF_LIMIT:
        out.inf = True
        out.re = 0.0
        out.im = 0.0
        return out
    out.inf = False
    out.re = w.re
    out.im = w.im
    return out


cdef inline void cov_pair(Cplx z, Cplx* w1, Cplx* w2) noexcept nogil:
    # rad = 12.0 - 3.0*z*z ; s = sqrt(rad) ; w = 0.5*(-z +- s)
    cdef Cplx t1, t2, rad, s, u
    t1 = cscalef(3.0, z)
    t2 = cmul(t1, z)
    rad.re = 12.0 - t2.re
    rad.im = 0.0 - t2.im
    s = csqrt_(rad)
    u.re = -z.re + s.re
    u.im = -z.im + s.im
    w1[0] = cscalef(0.5, u)
    u.re = -z.re - s.re
    u.im = -z.im - s.im
    w2[0] = cscalef(0.5, u)


cdef inline double dj_depth(double x0, SP c) noexcept nogil:
    cdef double dx
    if c.inf:
        return C_INF
    dx = c.re - x0
    return dx * dx + c.im * c.im


cdef inline void step_candidates(Moebius jc, SP z, SP* c1, SP* c2) noexcept nogil:
    cdef Cplx w1, w2, t
    if z.inf:
        c1[0] = moebius_apply(jc, z)
        c2[0] = c1[0]
        return
    t.re = z.re
    t.im = z.im
    cov_pair(t, &w1, &w2)
    c1[0].inf = False; c1[0].re = w1.re; c1[0].im = w1.im
    c1[0] = moebius_apply(jc, c1[0])
    c2[0].inf = False; c2[0].re = w2.re; c2[0].im = w2.im
    c2[0] = moebius_apply(jc, c2[0])


cdef inline int classify_corr_point(Moebius jc, double x0, double r2s,
                                    SP z, int max_iter, int* step_out) noexcept nogil:
    cdef SP c1, c2
    cdef double d1, d2
    cdef int k
    if dj_depth(x0, z) < r2s:
        step_out[0] = 0
        return CODE_ESCAPED
    for k in range(1, max_iter + 1):
        step_candidates(jc, z, &c1, &c2)
        d1 = dj_depth(x0, c1)
        d2 = dj_depth(x0, c2)
        if d1 >= r2s and d2 >= r2s:
            z = c1 if d1 >= d2 else c2
        elif d1 >= r2s:
            z = c1
        elif d2 >= r2s:
            z = c2
        else:
            step_out[0] = k
            return CODE_ESCAPED
    step_out[0] = max_iter
    return CODE_BOUNDED


def classify_corr_block(double[::1] re_cols, double[::1] im_rows,
                        Py_ssize_t r0, Py_ssize_t r1, Py_ssize_t c0, Py_ssize_t c1,
                        double[::1] pre, double[::1] invol,
                        double x0, double r2_slack, int max_iter,
                        signed char[:, ::1] codes, int[:, ::1] steps):
    """Classify a pixel tile of the correspondence plane in place."""
    cdef Moebius jc = unpack_moebius(invol)
    cdef bint use_pre = pre.shape[0] == 8
    cdef Moebius pm
    cdef Py_ssize_t i, j
    cdef SP z
    cdef int step
    if use_pre:
        pm = unpack_moebius(pre)
    with nogil:
        for j in range(r0, r1):
            for i in range(c0, c1):
                z.inf = False
                z.re = re_cols[i]
                z.im = im_rows[j]
                if use_pre:
                    z = moebius_apply(pm, z)
                codes[j, i] = classify_corr_point(jc, x0, r2_slack, z, max_iter, &step)
                steps[j, i] = step


def classify_corr_points(double[::1] zre, double[::1] zim, double[::1] invol,
                         double x0, double r2_slack, int max_iter,
                         signed char[::1] codes, int[::1] steps):
    """Classify a flat list of finite points."""
    cdef Moebius jc = unpack_moebius(invol)
    cdef Py_ssize_t i, n = zre.shape[0]
    cdef SP z
    cdef int step
    with nogil:
        for i in range(n):
            z.inf = False
            z.re = zre[i]
            z.im = zim[i]
            codes[i] = classify_corr_point(jc, x0, r2_slack, z, max_iter, &step)
            steps[i] = step


cdef inline Moebius j_coeffs(Cplx a) noexcept nogil:
    # mirrors _scalar.j_coefficients
    cdef Moebius m
    cdef Cplx t
    m.p.re = a.re + 1.0
    m.p.im = a.im + 0.0
    t = cscalef(2.0, a)
    m.q.re = -t.re
    m.q.im = -t.im
    m.r.re = 2.0
    m.r.im = 0.0
    m.s.re = -m.p.re
    m.s.im = -m.p.im
    return m


def classify_mset_block(double[::1] re_cols, double[::1] im_rows,
                        Py_ssize_t r0, Py_ssize_t r1, Py_ssize_t c0, Py_ssize_t c1,
                        int max_iter,
                        signed char[:, ::1] codes, int[:, ::1] steps):
    """Classify a tile of the parameter plane (free critical orbit)."""
    cdef Py_ssize_t i, j
    cdef Cplx a, den, z0c, two
    cdef SP z0
    cdef Moebius jc
    cdef double dre, x0, r, r2s
    cdef int step
    two.re = 2.0
    two.im = 0.0
    with nogil:
        for j in range(r0, r1):
            for i in range(c0, c1):
                a.re = re_cols[i]
                a.im = im_rows[j]
                dre = a.re - 4.0
                if dre * dre + a.im * a.im > 9.0 or (a.re == 1.0 and a.im == 0.0):
                    codes[j, i] = CODE_MASKED
                    steps[j, i] = 0
                    continue
                x0 = (a.re * a.re + a.im * a.im - 1.0) / (2.0 * (a.re - 1.0))
                r = fabs(x0 - 1.0)
                r2s = r * r * SLACK_FACTOR
                den.re = 3.0 - a.re
                den.im = 0.0 - a.im
                if den.re == 0.0 and den.im == 0.0:
                    z0.inf = True
                    z0.re = 0.0
                    z0.im = 0.0
                else:
                    z0c = cquot(two, den)
                    if fabs(z0c.re) > INF_LIMIT or fabs(z0c.im) > INF_LIMIT:
                        z0.inf = True
                        z0.re = 0.0
                        z0.im = 0.0
                    else:
                        z0.inf = False
                        z0.re = z0c.re
                        z0.im = z0c.im
                jc = j_coeffs(a)
                codes[j, i] = classify_corr_point(jc, x0, r2s, z0, max_iter, &step)
                steps[j, i] = step


cdef inline int classify_per11_point(Cplx A, SP z0, int max_iter,
                                     double radius_sq, int* step_out) noexcept nogil:
    cdef Cplx z, t, w, one
    cdef double prev, m
    cdef int streak = 0
    cdef int k
    one.re = 1.0
    one.im = 0.0
    if z0.inf:
        step_out[0] = 0
        return CODE_ESCAPED
    z.re = z0.re
    z.im = z0.im
    prev = z0.re * z0.re + z0.im * z0.im
    for k in range(1, max_iter + 1):
        if z.re == 0.0 and z.im == 0.0:
            step_out[0] = k
            return CODE_ESCAPED
        t = cquot(one, z)          # 1.0/z
        w.re = z.re + t.re         # z + 1/z
        w.im = z.im + t.im
        w.re = w.re + A.re         # ... + A
        w.im = w.im + A.im
        if fabs(w.re) > INF_LIMIT or fabs(w.im) > INF_LIMIT:
            step_out[0] = k
            return CODE_ESCAPED
        z = w
        m = z.re * z.re + z.im * z.im
        if m > radius_sq and m > prev:
            streak += 1
        else:
            streak = 0
        prev = m
        if streak >= 3:
            step_out[0] = k
            return CODE_ESCAPED
    step_out[0] = max_iter
    return CODE_BOUNDED


def classify_per11_block(double[::1] re_cols, double[::1] im_rows,
                         Py_ssize_t r0, Py_ssize_t r1, Py_ssize_t c0, Py_ssize_t c1,
                         double a_re, double a_im, int max_iter, double radius_sq,
                         signed char[:, ::1] codes, int[:, ::1] steps):
    """Classify a tile of a parabolic quadratic Julia plane."""
    cdef Py_ssize_t i, j
    cdef Cplx A
    cdef SP z0
    cdef int step
    A.re = a_re
    A.im = a_im
    with nogil:
        for j in range(r0, r1):
            for i in range(c0, c1):
                z0.inf = False
                z0.re = re_cols[i]
                z0.im = im_rows[j]
                codes[j, i] = classify_per11_point(A, z0, max_iter, radius_sq, &step)
                steps[j, i] = step


# --- primitive exports for the parity test-suite ---------------------------

def _mul(double are, double aim, double bre, double bim):
    cdef Cplx a, b, r
    a.re, a.im, b.re, b.im = are, aim, bre, bim
    r = cmul(a, b)
    return (r.re, r.im)


def _quot(double are, double aim, double bre, double bim):
    cdef Cplx a, b, r
    a.re, a.im, b.re, b.im = are, aim, bre, bim
    r = cquot(a, b)
    return (r.re, r.im)


def _sqrt(double re, double im):
    cdef Cplx z, r
    z.re, z.im = re, im
    r = csqrt_(z)
    return (r.re, r.im)


def _scale(double f, double re, double im):
    cdef Cplx z, r
    z.re, z.im = re, im
    r = cscalef(f, z)
    return (r.re, r.im)
