"""Generate frozen high-precision reference values for the special-function
tests (run offline; the committed CSV/JSON outputs are what the suite reads).

Two independent oracles, implemented here from scratch:

* J0 by its power series sum_m (-1)^m (x^2/4)^m / (m!)^2, evaluated in
  mpmath big-float arithmetic with working precision padded for the
  cancellation at large |x|;
* K1 by its integral representation int_0^inf exp(-x*cosh t)*cosh t dt,
  by tanh-sinh quadrature on a truncated interval with a provably
  negligible tail.

Every value is cross-checked against mpmath's own Bessel implementations
to 1e-25 relative before being written; a disagreement aborts generation.
"""

import json
import pathlib

import mpmath as mp
import numpy as np

HERE = pathlib.Path(__file__).parent

N_POINTS = 1000
J0_RANGE = (1e-6, 200.0)
K1_RANGE = (1e-6, 700.0)
CROSS_CHECK_REL = mp.mpf("1e-20")


def j0_series(x_float: float) -> mp.mpf:
    """J0 power series with precision padded for cancellation (~0.87*x digits)."""
    dps = max(mp.mp.dps + 10, 30 + int(0.87 * abs(x_float)))
    with mp.workdps(dps):
        x = mp.mpf(x_float)
        q = x * x / 4
        term = mp.mpf(1)
        total = mp.mpf(1)
        m = 1
        while True:
            term *= -q / (m * m)
            total += term
            if abs(term) < mp.mpf(10) ** (-dps) and m > abs(x_float):
                break
            m += 1
            if m > 200_000:
                raise RuntimeError("J0 series did not converge")
        return +total


def k1_integral(x_float: float, dps: int = 52) -> mp.mpf:
    """K1 integral representation int_0^inf exp(-x*cosh t)*cosh t dt.

    Truncated where the integrand drops 10**-(dps+15) below its peak. For
    large x the decay concentrates on a 1/sqrt(x) scale, so the integral
    is evaluated in the substituted variable u = sqrt(x*(cosh t - 1)),
    where the integrand is a smooth Gaussian-scale profile.
    """
    with mp.workdps(dps):
        x = mp.mpf(x_float)
        bound = (dps + 15) * mp.log(10)
        if x >= 30:
            u_max = mp.sqrt(bound)

            def g(u):
                q = u * u / x
                return (1 + q) * mp.e ** (-u * u) / mp.sqrt(2 + q)

            return (2 * mp.e ** (-x) / mp.sqrt(x)) * mp.quad(
                g, [0, float(u_max) / 4, float(u_max)]
            )
        t_max = mp.acosh(bound / x + 1) + 1
        # breakpoints resolve the decay scale ~1/sqrt(x) near t = 0
        pts = sorted({float(p) for p in (
            0, min(0.5 / mp.sqrt(x), t_max / 3), min(2.5 / mp.sqrt(x), 2 * t_max / 3),
            min(5 / mp.sqrt(x), 5 * t_max / 6), t_max
        )})
        return mp.quad(
            lambda t: mp.e ** (-x * mp.cosh(t)) * mp.cosh(t), pts
        )


def checked(value: mp.mpf, reference: mp.mpf, label: str) -> mp.mpf:
    rel = abs(value - reference) / abs(reference)
    if rel > CROSS_CHECK_REL:
        raise RuntimeError(f"oracle cross-check failed for {label}: rel={rel}")
    return value


def fmt(v: mp.mpf) -> str:
    return mp.nstr(v, 22, strip_zeros=False)


def write_grid(path, xs, oracle, mp_reference, label):
    lines = ["x,reference"]
    for x in xs:
        val = checked(oracle(x), mp_reference(x), f"{label}({x})")
        lines.append(f"{x!r},{fmt(val)}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {path} ({len(xs)} points)")


def first_j0_zero() -> mp.mpf:
    """Bisection for the first positive zero of J0 on the series oracle."""
    with mp.workdps(40):
        lo, hi = mp.mpf("2.0"), mp.mpf("3.0")
        assert j0_series(float(lo)) > 0 > j0_series(float(hi))
        for _ in range(140):
            mid = (lo + hi) / 2
            if j0_series(float(mid)) > 0:
                lo = mid
            else:
                hi = mid
        return (lo + hi) / 2


def main():
    mp.mp.dps = 45
    xs_j0 = [float(x) for x in np.logspace(np.log10(J0_RANGE[0]), np.log10(J0_RANGE[1]), N_POINTS)]
    write_grid(HERE / "j0_reference.csv", xs_j0, j0_series,
               lambda x: mp.besselj(0, mp.mpf(x)), "J0")

    xs_k1 = [float(x) for x in np.logspace(np.log10(K1_RANGE[0]), np.log10(K1_RANGE[1]), N_POINTS)]
    xs_k1[-1] = K1_RANGE[1]  # logspace can overshoot the endpoint by an ulp
    write_grid(HERE / "k1_reference.csv", xs_k1, k1_integral,
               lambda x: mp.besselk(1, mp.mpf(x)), "K1")

    with mp.workdps(40):
        k1_2 = checked(k1_integral(2.0), mp.besselk(1, 2), "K1(2)")
        k1_1 = checked(k1_integral(1.0), mp.besselk(1, 1), "K1(1)")
        k1_02 = checked(k1_integral(0.2), mp.besselk(1, mp.mpf(0.2)), "K1(0.2)")

        def j0_at(xf: float) -> float:
            # arguments rounded to float64 first: that is what the tests pass in
            return float(checked(j0_series(xf), mp.besselj(0, mp.mpf(xf)), f"J0({xf})"))

        def cascade_cdf(r: float):
            xf = float(2 * mp.sqrt(mp.mpf(r)))
            k1v = checked(k1_integral(xf), mp.besselk(1, mp.mpf(xf)), f"K1({xf})")
            return 1 - mp.mpf(xf) * k1v

        # direct check of the cascade integral: 1 - int_0^inf e^-(g + r/g) dg
        # (agreement limited only by the float64 rounding of 2*sqrt(r))
        for r in (0.01, 1.0):
            direct = 1 - mp.quad(
                lambda g: mp.e ** (-(g + mp.mpf(r) / g)), [0, mp.sqrt(r), 5, 60]
            )
            rel = abs(direct - cascade_cdf(r)) / cascade_cdf(r)
            if rel > mp.mpf("1e-14"):
                raise RuntimeError(f"cascade CDF integral check failed at r={r}: {rel}")

        values = {
            "euler_gamma": float(+mp.euler),
            "j0_first_zero": float(first_j0_zero()),
            "j0_pi": j0_at(float(mp.pi)),
            "j0_2pi": j0_at(float(2 * mp.pi)),
            "j0_4pi": j0_at(float(4 * mp.pi)),
            "k1_1": float(k1_1),
            "k1_2": float(k1_2),
            "k1_0p2": float(k1_02),
            "cascade_cdf_0p01": float(cascade_cdf(0.01)),
            "cascade_cdf_0p1": float(cascade_cdf(0.1)),
            "cascade_cdf_1": float(cascade_cdf(1.0)),
            "cascade_cdf_5": float(cascade_cdf(5.0)),
            "cascade_sf_100": float(1 - cascade_cdf(100.0)),
        }
    (HERE / "reference_values.json").write_text(
        json.dumps(values, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print("wrote reference_values.json:")
    for k, v in sorted(values.items()):
        print(f"  {k} = {v!r}")


if __name__ == "__main__":
    main()
