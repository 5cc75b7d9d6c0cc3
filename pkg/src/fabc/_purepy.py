"""Pure NumPy/SciPy numeric kernels.

This is the fallback lane used when the compiled extension (fabc._core)
is unavailable. Both lanes expose the same small surface:

    j0, k1, xk1, product_cdf, solve_xk1

All functions accept and return 1-D float64 arrays; argument validation
lives in the public modules, not here.
"""

import numpy as np
from scipy import special as _sp

name = "python"

# x*K1(x) underflows to 0 past ~746; the cutoff below follows the library
# policy: K1 -> 0 for x > 700, K1 -> +inf once 1/x is not representable.
_K1_ZERO_CUTOFF = 700.0
_K1_INF_CUTOFF = 1e-305

_TWO_GAMMA = 2.0 * 0.5772156649015329


def j0(x):
    return _sp.j0(np.abs(x))


def k1(x):
    """K1 on x > 0 with saturation to +inf / 0 outside the working range."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    tiny = x < _K1_INF_CUTOFF
    big = x > _K1_ZERO_CUTOFF
    mid = ~(tiny | big)
    out[tiny] = np.inf
    out[big] = 0.0
    xm = x[mid]
    out[mid] = _sp.k1e(xm) * np.exp(-xm)
    return out


def _k0(x):
    return _sp.k0e(x) * np.exp(-np.minimum(x, _K1_ZERO_CUTOFF))


def xk1(x):
    """x*K1(x) computed stably; decreases from 1 at 0+ to 0 at infinity."""
    x = np.asarray(x, dtype=np.float64)
    out = np.ones_like(x)
    m = x > 1e-290
    xm = np.minimum(x[m], _K1_ZERO_CUTOFF + 46.0)
    out[m] = xm * _sp.k1e(xm) * np.exp(-xm)
    return out


def product_cdf(r):
    """CDF of the product of two independent unit-mean exponential gains."""
    r = np.asarray(r, dtype=np.float64)
    return 1.0 - xk1(2.0 * np.sqrt(r))


def solve_xk1(v, tol):
    """Solve x*K1(x) = v for each v in (0, 1).

    `tol` is a scalar or per-element absolute tolerance on the residual.
    Safeguarded Newton (derivative d/dx x*K1(x) = -x*K0(x)) with a
    bisection bracket; terminates when the residual meets `tol` or the
    bracket collapses to rounding width.
    """
    v = np.atleast_1d(np.asarray(v, dtype=np.float64))
    tol = np.broadcast_to(np.asarray(tol, dtype=np.float64), v.shape)

    x = np.empty_like(v)
    # initial guesses: small-argument series inversion on the CDF side for
    # v near 1, asymptotic decay inversion for the tail
    near1 = v > 0.6
    u = 1.0 - v[near1]
    r0 = np.full(u.shape, 1e-4)
    usafe = np.maximum(u, 1e-300)
    for _ in range(5):
        r0 = usafe / np.maximum(1.0 - _TWO_GAMMA - np.log(r0), 1e-2)
    x[near1] = 2.0 * np.sqrt(r0)
    vt = np.maximum(v[~near1], 1e-300)
    xt = np.maximum(-np.log(vt), 0.5)
    for _ in range(4):
        xt = np.maximum(np.log(np.sqrt(np.pi * xt / 2.0) / vt), 1e-2)
    x[~near1] = xt

    lo = np.zeros_like(v)
    hi = np.full_like(v, np.inf)
    # freeze each element as soon as it converges so its trajectory does
    # not depend on slower companions (keeps vector and scalar calls
    # bit-identical)
    done = np.zeros(v.shape, dtype=bool)
    for _ in range(80):
        w = xk1(x)
        resid = w - v
        done |= np.abs(resid) <= tol
        if np.all(done):
            break
        # x*K1(x) decreases: positive residual means x is too small
        lo = np.where(done | (resid <= 0.0), lo, x)
        hi = np.where(done | (resid >= 0.0), hi, x)
        dw = -x * _k0(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            xn = x - resid / dw
        bad = ~np.isfinite(xn) | (xn <= lo) | (xn >= hi)
        mid = np.where(np.isfinite(hi), 0.5 * (lo + hi), 2.0 * np.maximum(lo, 1.0))
        xn = np.where(bad, mid, xn)
        done |= np.isfinite(hi) & (
            (hi - lo) <= 4.0 * np.finfo(float).eps * np.maximum(hi, 1.0)
        )
        x = np.where(done, x, xn)
    return x
