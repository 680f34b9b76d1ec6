# cython: boundscheck=False, wraparound=False, cdivision=True
# Compiled kernel backend; mirrors socialprobe.kernels.pure.

from libc.math cimport exp, tanh, sqrt, pow, INFINITY

import numpy as np
cimport numpy as cnp

cnp.import_array()

name = "native"


cdef inline double _sig(double x) noexcept nogil:
    cdef double e
    if x >= 0.0:
        return 1.0 / (1.0 + exp(-x))
    e = exp(x)
    return e / (1.0 + e)


def ew_sigmoid(double[::1] x):
    out = np.empty(x.shape[0])
    cdef double[::1] o = out
    cdef Py_ssize_t k
    for k in range(x.shape[0]):
        o[k] = _sig(x[k])
    return out


def ew_sigmoid_grad(double[::1] y, double[::1] gy):
    out = np.empty(y.shape[0])
    cdef double[::1] o = out
    cdef Py_ssize_t k
    for k in range(y.shape[0]):
        o[k] = gy[k] * y[k] * (1.0 - y[k])
    return out


def ew_tanh(double[::1] x):
    out = np.empty(x.shape[0])
    cdef double[::1] o = out
    cdef Py_ssize_t k
    for k in range(x.shape[0]):
        o[k] = tanh(x[k])
    return out


def ew_tanh_grad(double[::1] y, double[::1] gy):
    out = np.empty(y.shape[0])
    cdef double[::1] o = out
    cdef Py_ssize_t k
    for k in range(y.shape[0]):
        o[k] = gy[k] * (1.0 - y[k] * y[k])
    return out


def ew_relu(double[::1] x):
    out = np.empty(x.shape[0])
    cdef double[::1] o = out
    cdef Py_ssize_t k
    for k in range(x.shape[0]):
        o[k] = x[k] if x[k] > 0.0 else 0.0
    return out


def ew_relu_grad(double[::1] y, double[::1] gy):
    out = np.empty(y.shape[0])
    cdef double[::1] o = out
    cdef Py_ssize_t k
    for k in range(y.shape[0]):
        o[k] = gy[k] if y[k] > 0.0 else 0.0
    return out


def ew_leaky_relu(double[::1] x, double slope):
    out = np.empty(x.shape[0])
    cdef double[::1] o = out
    cdef Py_ssize_t k
    for k in range(x.shape[0]):
        o[k] = x[k] if x[k] >= 0.0 else slope * x[k]
    return out


def ew_leaky_relu_grad(double[::1] y, double[::1] gy, double slope):
    out = np.empty(y.shape[0])
    cdef double[::1] o = out
    cdef Py_ssize_t k
    for k in range(y.shape[0]):
        o[k] = gy[k] if y[k] >= 0.0 else slope * gy[k]
    return out


def lstm_cell(double[:, ::1] pre, double[:, ::1] c_prev):
    cdef Py_ssize_t rows = pre.shape[0]
    cdef Py_ssize_t hs = c_prev.shape[1]
    h_arr = np.empty((rows, hs))
    c_arr = np.empty((rows, hs))
    gates_arr = np.empty((rows, 4 * hs))
    cdef double[:, ::1] h = h_arr
    cdef double[:, ::1] c = c_arr
    cdef double[:, ::1] gates = gates_arr
    cdef Py_ssize_t r, j
    cdef double i_, f_, g_, o_, cv
    with nogil:
        for r in range(rows):
            for j in range(hs):
                i_ = _sig(pre[r, j])
                f_ = _sig(pre[r, hs + j])
                g_ = tanh(pre[r, 2 * hs + j])
                o_ = _sig(pre[r, 3 * hs + j])
                cv = f_ * c_prev[r, j] + i_ * g_
                gates[r, j] = i_
                gates[r, hs + j] = f_
                gates[r, 2 * hs + j] = g_
                gates[r, 3 * hs + j] = o_
                c[r, j] = cv
                h[r, j] = o_ * tanh(cv)
    return h_arr, c_arr, gates_arr


def lstm_cell_grad(double[:, ::1] gh, gc, double[:, ::1] gates,
                   double[:, ::1] c_prev, double[:, ::1] c):
    cdef Py_ssize_t rows = gh.shape[0]
    cdef Py_ssize_t hs = c_prev.shape[1]
    gpre_arr = np.empty((rows, 4 * hs))
    gcp_arr = np.empty((rows, hs))
    cdef double[:, ::1] gpre = gpre_arr
    cdef double[:, ::1] gcp = gcp_arr
    cdef double[:, ::1] gcv
    cdef bint has_gc = gc is not None
    if has_gc:
        gcv = gc
    cdef Py_ssize_t r, j
    cdef double i_, f_, g_, o_, tc, gct
    with nogil:
        for r in range(rows):
            for j in range(hs):
                i_ = gates[r, j]
                f_ = gates[r, hs + j]
                g_ = gates[r, 2 * hs + j]
                o_ = gates[r, 3 * hs + j]
                tc = tanh(c[r, j])
                gct = gh[r, j] * o_ * (1.0 - tc * tc)
                if has_gc:
                    gct += gcv[r, j]
                gpre[r, j] = gct * g_ * i_ * (1.0 - i_)
                gpre[r, hs + j] = gct * c_prev[r, j] * f_ * (1.0 - f_)
                gpre[r, 2 * hs + j] = gct * i_ * (1.0 - g_ * g_)
                gpre[r, 3 * hs + j] = gh[r, j] * tc * o_ * (1.0 - o_)
                gcp[r, j] = gct * f_
    return gpre_arr, gcp_arr


def softmax(double[:, ::1] scores):
    cdef Py_ssize_t rows = scores.shape[0]
    cdef Py_ssize_t n = scores.shape[1]
    out = np.empty((rows, n))
    cdef double[:, ::1] w = out
    cdef Py_ssize_t r, j
    cdef double m, s
    with nogil:
        for r in range(rows):
            m = -INFINITY
            for j in range(n):
                if scores[r, j] > m:
                    m = scores[r, j]
            s = 0.0
            for j in range(n):
                w[r, j] = exp(scores[r, j] - m)
                s += w[r, j]
            for j in range(n):
                w[r, j] /= s
    return out


def masked_softmax(double[:, ::1] scores, cnp.uint8_t[:, ::1] mask):
    cdef Py_ssize_t rows = scores.shape[0]
    cdef Py_ssize_t n = scores.shape[1]
    out = np.zeros((rows, n))
    cdef double[:, ::1] w = out
    cdef Py_ssize_t r, j
    cdef double m, s
    cdef bint any_valid
    with nogil:
        for r in range(rows):
            any_valid = False
            m = -INFINITY
            for j in range(n):
                if mask[r, j] and scores[r, j] > m:
                    m = scores[r, j]
                    any_valid = True
            if not any_valid:
                continue
            s = 0.0
            for j in range(n):
                if mask[r, j]:
                    w[r, j] = exp(scores[r, j] - m)
                    s += w[r, j]
            for j in range(n):
                if mask[r, j]:
                    w[r, j] /= s
    return out


def softmax_grad(double[:, ::1] w, double[:, ::1] gw):
    cdef Py_ssize_t rows = w.shape[0]
    cdef Py_ssize_t n = w.shape[1]
    out = np.empty((rows, n))
    cdef double[:, ::1] gs = out
    cdef Py_ssize_t r, j
    cdef double dot
    with nogil:
        for r in range(rows):
            dot = 0.0
            for j in range(n):
                dot += w[r, j] * gw[r, j]
            for j in range(n):
                gs[r, j] = w[r, j] * (gw[r, j] - dot)
    return out


def adam_step(double[::1] p, double[::1] g, double[::1] m, double[::1] v,
              long t, double lr, double beta1, double beta2, double eps):
    cdef double bc1 = 1.0 - pow(beta1, <double> t)
    cdef double bc2 = 1.0 - pow(beta2, <double> t)
    cdef Py_ssize_t k
    cdef double mhat, vhat
    with nogil:
        for k in range(p.shape[0]):
            m[k] = beta1 * m[k] + (1.0 - beta1) * g[k]
            v[k] = beta2 * v[k] + (1.0 - beta2) * g[k] * g[k]
            mhat = m[k] / bc1
            vhat = v[k] / bc2
            p[k] -= lr * mhat / (sqrt(vhat) + eps)
