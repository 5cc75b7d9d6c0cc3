"""Parity between the compiled (GSL/Cython) and pure NumPy/SciPy kernel
lanes, and per-lane accuracy against the frozen oracles."""

import numpy as np
import pytest

import fabc
from fabc import _backend
from fabc.specfun import DEFAULT_BUDGET

pytestmark = pytest.mark.skipif(
    "compiled" not in _backend.available(),
    reason="compiled backend not built",
)


@pytest.fixture(params=_backend.available())
def lane(request):
    with _backend.use(request.param):
        yield request.param


class TestPerLaneAccuracy:
    def test_j0_budget(self, lane, j0_grid):
        xs, refs = j0_grid
        assert DEFAULT_BUDGET.within(fabc.bessel_j0(xs), refs)

    def test_k1_budget(self, lane, k1_grid):
        xs, refs = k1_grid
        assert DEFAULT_BUDGET.within(fabc.bessel_k1(xs), refs)

    def test_quantile_roundtrip(self, lane):
        rng = np.random.default_rng(6)
        u = rng.uniform(0.0, 1.0, 20_000)
        r = fabc.product_channel_quantile(u, tol=1e-12)
        assert np.max(np.abs(fabc.product_channel_cdf(r) - u)) <= 1e-12


class TestCrossLaneParity:
    def _both(self, fn):
        with _backend.use("python"):
            a = fn()
        with _backend.use("compiled"):
            b = fn()
        return a, b

    def test_bessel_parity(self):
        x = np.concatenate([
            np.logspace(-8, np.log10(200.0), 4000),
            np.linspace(0.1, 200.0, 4000),
        ])
        a, b = self._both(lambda: fabc.bessel_j0(x))
        np.testing.assert_allclose(a, b, rtol=5e-14, atol=5e-15)
        xk = np.logspace(-8, np.log10(690.0), 8000)
        a, b = self._both(lambda: fabc.bessel_k1(xk))
        np.testing.assert_allclose(a, b, rtol=5e-14, atol=0.0)

    def test_cdf_parity(self):
        r = np.logspace(-10, 2.5, 5000)
        a, b = self._both(lambda: fabc.product_channel_cdf(r))
        np.testing.assert_allclose(a, b, rtol=0.0, atol=5e-14)

    def test_quantile_parity_in_cdf_space(self):
        rng = np.random.default_rng(8)
        u = rng.uniform(0.0, 0.999999, 5000)
        ra, rb = self._both(lambda: fabc.product_channel_quantile(u, tol=1e-13))
        fa = fabc.product_channel_cdf(ra)
        fb = fabc.product_channel_cdf(rb)
        assert np.max(np.abs(fa - u)) <= 1e-12
        assert np.max(np.abs(fb - u)) <= 1e-12

    def test_estimates_agree(self):
        cfg = fabc.SystemConfig()
        def run():
            return fabc.estimate_outage(cfg, n=50_000, seed=19).estimate
        a, b = self._both(run)
        # same uniforms, quantile maps differing by <1e-8: at most a
        # sample or two can flip across the threshold
        assert abs(a - b) <= 2.0 / 50_000

    def test_metric_closed_forms_agree(self):
        cfg = fabc.SystemConfig(num_ports=6, fa_size=2.0, avg_snr_db=25.0)
        a, b = self._both(lambda: fabc.outage_probability(cfg).value)
        assert a == pytest.approx(b, rel=1e-12)
