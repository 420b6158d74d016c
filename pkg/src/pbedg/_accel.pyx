# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot loops in :mod:`pbedg._accel_py`."""


def agg_rhs(const double[:, :, :, ::1] birth, const double[:, :, :, ::1] death,
            const Py_ssize_t[::1] band, const Py_ssize_t[::1] p,
            const Py_ssize_t[::1] q, const double[:, ::1] c, double[:, ::1] out):
    cdef Py_ssize_t nt = birth.shape[0], nb = birth.shape[1]
    cdef Py_ssize_t t, j, m, l, pt, qt, bt
    cdef double sb, sd, cm, inner_b, inner_d
    for t in range(nt):
        pt = p[t]
        qt = q[t]
        bt = band[t]
        for j in range(nb):
            sb = 0.0
            sd = 0.0
            for m in range(nb):
                inner_b = 0.0
                inner_d = 0.0
                for l in range(nb):
                    inner_b += birth[t, j, m, l] * c[qt, l]
                    inner_d += death[t, j, m, l] * c[qt, l]
                cm = c[pt, m]
                sb += inner_b * cm
                sd += inner_d * cm
            out[bt, j] += sb
            out[pt, j] -= sd


def break_rhs(const double[:, :, ::1] bbirth, const double[:, ::1] bdeath,
              const double[:, ::1] weight, const Py_ssize_t[::1] p,
              const Py_ssize_t[::1] q, const double[:, ::1] c, double[:, ::1] out):
    cdef Py_ssize_t ne = bbirth.shape[0], nb = bbirth.shape[1]
    cdef Py_ssize_t e, j, m, pe, qe
    cdef double s, d
    for e in range(ne):
        pe = p[e]
        qe = q[e]
        d = 0.0
        for m in range(nb):
            d += bdeath[e, m] * c[qe, m]
        for j in range(nb):
            s = 0.0
            for m in range(nb):
                s += bbirth[e, j, m] * c[qe, m]
            out[pe, j] += s
            out[qe, j] -= d * weight[qe, j]


def dpbe_rhs(const double[:, ::1] beta, const double[::1] n, double[::1] out):
    cdef Py_ssize_t K = n.shape[0]
    cdef Py_ssize_t i, j
    cdef double gain, loss
    for i in range(K):
        gain = 0.0
        for j in range(i):
            gain += beta[j, i - 1 - j] * n[j] * n[i - 1 - j]
        loss = 0.0
        for j in range(K - i - 1):
            loss += beta[i, j] * n[j]
        out[i] = 0.5 * gain - n[i] * loss
