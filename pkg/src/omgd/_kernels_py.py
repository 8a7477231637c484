"""Pure-Python (numpy) implementations of the hot kernels.

Twin of the compiled module ``omgd._kernels``; ``omgd._backend`` picks one
of the two at import time. Signatures and semantics must stay in lockstep
with the ``.pyx`` file.

Shared encoding:

* feasible sets: ``kind`` 0 = ball (``a0`` center, ``scal`` radius),
  1 = box (``a0`` lower, ``a1`` upper), 2 = probability simplex;
* losses enter in affine-gradient form ``grad f(x) = h * x + g``, which
  covers every supported family (linear, isotropic and diagonal quadratic).
"""

import numpy as np

BALL, BOX, SIMPLEX = 0, 1, 2


def project_ball(x, center, radius):
    """Euclidean projection onto the ball ``{y : |y - center| <= radius}``."""
    x = np.asarray(x, dtype=np.float64)
    diff = x - center
    dist = np.sqrt(float(diff @ diff))
    if dist <= radius:
        return x.copy()
    return center + diff * (radius / dist)


def project_box(x, lower, upper):
    """Coordinatewise clamp onto ``[lower, upper]``."""
    return np.clip(np.asarray(x, dtype=np.float64), lower, upper)


def project_simplex(x):
    """Projection onto the probability simplex by sort and threshold.

    Sorts descending, finds the largest k with ``u_k - (css_k - 1)/k > 0``
    and clips ``x - theta`` at zero, ``theta = (css_k - 1)/k``.
    """
    x = np.asarray(x, dtype=np.float64)
    u = np.sort(x)[::-1]
    css = np.cumsum(u) - 1.0
    ks = np.arange(1, x.size + 1, dtype=np.float64)
    hits = np.nonzero(u - css / ks > 0.0)[0]
    rho = hits[-1]
    theta = css[rho] / (rho + 1.0)
    return np.maximum(x - theta, 0.0)


def _project(z, kind, a0, a1, scal):
    if kind == BALL:
        return project_ball(z, a0, scal)
    if kind == BOX:
        return project_box(z, a0, a1)
    return project_simplex(z)


def inner_loop(x, eta, n_steps, h, g, kind, a0, a1, scal):
    """``n_steps`` projected-gradient steps on one fixed loss.

    Returns the final iterate; the input is never modified.
    """
    z = np.array(x, dtype=np.float64, copy=True)
    for _ in range(n_steps):
        z = _project(z - eta * (h * z + g), kind, a0, a1, scal)
    return z


def inner_loop_to_tol(x, eta, h, g, kind, a0, a1, scal, tol, max_steps):
    """Projected-gradient steps until the iterate moves less than ``tol``.

    Returns ``(iterate, steps_taken)``; raises if ``max_steps`` is exhausted.
    """
    z = np.array(x, dtype=np.float64, copy=True)
    for it in range(1, max_steps + 1):
        z_new = _project(z - eta * (h * z + g), kind, a0, a1, scal)
        move = z_new - z
        z = z_new
        if np.sqrt(float(move @ move)) < tol:
            return z, it
    raise RuntimeError(
        f"projected gradient did not settle within {max_steps} steps"
    )
