import pytest
from pydantic import ValidationError

from l3_anomaly_platform.core.models.evaluation_models import ConfusionCounts, LatencyStats


class TestConfusionCounts:

    def test_totals(self):
        counts = ConfusionCounts(tp=2, fp=1, tn=6, fn=1, unclassified=3, failed=1)
        assert counts.classified == 10
        assert counts.total == 14

    def test_rejects_negative(self):
        with pytest.raises(ValidationError):
            ConfusionCounts(tp=-1)


class TestLatencyStats:

    def test_ordering_enforced(self):
        with pytest.raises(ValidationError):
            LatencyStats(mean=1, median=5, p90=4, p95=6, p99=7, max=8, min=1, frac_under_bound=1.0)

    def test_fraction_bounds(self):
        with pytest.raises(ValidationError):
            LatencyStats(mean=1, median=1, p90=1, p95=1, p99=1, max=1, min=1, frac_under_bound=1.5)
