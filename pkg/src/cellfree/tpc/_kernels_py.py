"""Pure-Python twin of the compiled fixed-point kernel.

Same contract as the compiled version so the two are interchangeable:
returns the iteration count on convergence, -1 once any component
exceeds cap, -2 when the budget runs out.
"""

import numpy as np


def fp_min_power(g_off, n, gamma, rho, cap, tol, max_iter, q, q_next):
    q[:] = 0.0
    coef = gamma / rho
    for it in range(max_iter):
        np.matmul(g_off, q, out=q_next)
        q_next *= rho
        q_next += n
        q_next *= coef
        if np.any(q_next > cap):
            return -1
        diff = float(np.max(np.abs(q_next - q)))
        q[:] = q_next
        if diff < tol:
            return it + 1
    return -2
