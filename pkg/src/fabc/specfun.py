"""High-accuracy scalar special functions used throughout the library.

The two Bessel kernels (J0 of the first kind, modified K1 of the second
kind) are delegated to the selected numeric backend (GSL when compiled,
SciPy/Cephes otherwise); this module owns the domain policy and the
accuracy contract, which the test suite enforces against independent
power-series / quadrature oracles.
"""

from dataclasses import dataclass

import numpy as np

from . import _backend

__all__ = [
    "AccuracyBudget",
    "DEFAULT_BUDGET",
    "EULER_MASCHERONI",
    "bessel_j0",
    "bessel_k1",
    "k1_small_arg",
    "euler_mascheroni",
]

#: Euler-Mascheroni constant to full double precision.
EULER_MASCHERONI = 0.5772156649015329


@dataclass(frozen=True)
class AccuracyBudget:
    """Accuracy contract for the special-function layer.

    `rel_tol` bounds the relative error away from zeros of the function;
    `abs_tol` bounds the absolute error near zeros (where a relative bound
    is meaningless).
    """

    rel_tol: float = 1e-12
    abs_tol: float = 1e-14

    def __post_init__(self):
        if not (self.rel_tol > 0.0 and self.abs_tol > 0.0):
            raise ValueError("AccuracyBudget tolerances must be positive")

    def within(self, value, reference) -> bool:
        """True when |value - reference| meets the budget."""
        value = np.asarray(value, dtype=np.float64)
        reference = np.asarray(reference, dtype=np.float64)
        err = np.abs(value - reference)
        bound = np.maximum(self.rel_tol * np.abs(reference), self.abs_tol)
        return bool(np.all(err <= bound))


DEFAULT_BUDGET = AccuracyBudget()


def _dispatch(kernel_name, x, validate):
    """Run a 1-D backend kernel over scalar or array input."""
    arr = np.asarray(x, dtype=np.float64)
    validate(arr)
    flat = np.atleast_1d(arr).ravel()
    out = getattr(_backend.active(), kernel_name)(flat)
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


def bessel_j0(x):
    """Bessel function of the first kind, order zero.

    Even in its argument (evaluated on |x|); accurate to the default
    budget over |x| <= 200. Accepts scalars or arrays.
    """

    def check(arr):
        if not np.all(np.isfinite(arr)):
            raise ValueError("bessel_j0 requires finite input")

    return _dispatch("j0", x, check)


def bessel_k1(x):
    """Modified Bessel function of the second kind, order one, for x > 0.

    Saturates to +inf once 1/x is no longer representable and to 0 for
    x > 700; callers compose x*K1(x), which stays inside (0, 1).
    """

    def check(arr):
        if not np.all(np.isfinite(arr)):
            raise ValueError("bessel_k1 requires finite input")
        if np.any(arr <= 0.0):
            raise ValueError("bessel_k1 requires x > 0 (K1 diverges at 0+)")

    return _dispatch("k1", x, check)


def k1_small_arg(r):
    """Three-term small-argument approximation of K1.

    Returns 1/r + (r/4)(2*gamma - 1) + (r/2)*log(r/2), valid for
    0 < r < 1, where gamma is the Euler-Mascheroni constant. Relative
    error against bessel_k1 decays like r^2 as r -> 0.
    """
    arr = np.asarray(r, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError("k1_small_arg requires finite input")
    if np.any(arr <= 0.0):
        raise ValueError("k1_small_arg requires r > 0")
    out = (
        1.0 / arr
        + (arr / 4.0) * (2.0 * EULER_MASCHERONI - 1.0)
        + (arr / 2.0) * np.log(arr / 2.0)
    )
    if arr.ndim == 0:
        return float(out)
    return out


def euler_mascheroni() -> float:
    """The Euler-Mascheroni constant."""
    return EULER_MASCHERONI
