# cython: boundscheck=False, wraparound=False, initializedcheck=False
# cython: cdivision=True
"""Compiled fixed-point kernel for the SINR-floor power iteration."""


cdef int _fp(const double[:, ::1] g_off, const double[::1] n,
             const double[::1] gamma, double rho, double cap,
             double tol, int max_iter,
             double[::1] q, double[::1] q_next) noexcept nogil:
    cdef Py_ssize_t K = n.shape[0]
    cdef Py_ssize_t k, j
    cdef int it
    cdef double acc, d, diff
    for k in range(K):
        q[k] = 0.0
    for it in range(max_iter):
        diff = 0.0
        for k in range(K):
            acc = 0.0
            for j in range(K):
                acc += g_off[k, j] * q[j]
            q_next[k] = (gamma[k] / rho) * (rho * acc + n[k])
            if q_next[k] > cap:
                return -1
            d = q_next[k] - q[k]
            if d < 0.0:
                d = -d
            if d > diff:
                diff = d
        for k in range(K):
            q[k] = q_next[k]
        if diff < tol:
            return it + 1
    return -2


def fp_min_power(const double[:, ::1] g_off, const double[::1] n,
                 const double[::1] gamma, double rho, double cap,
                 double tol, int max_iter,
                 double[::1] q, double[::1] q_next):
    """Iterate q <- (gamma/rho) * (rho * g_off @ q + n) from zero.

    g_off must have a zero diagonal. Returns the iteration count on
    convergence, -1 once any component exceeds cap (infeasible floors),
    -2 when the iteration budget runs out. On success q holds the
    componentwise-minimal allocation meeting the floors.
    """
    cdef int status
    with nogil:
        status = _fp(g_off, n, gamma, rho, cap, tol, max_iter, q, q_next)
    return status
