import numpy as np
import pytest
from pydantic import ValidationError

from src.model.types import Clustering, DtbmParams
from src.model.validator import ParameterSpace, validate


@pytest.fixture
def orthogonal_params() -> DtbmParams:
    z = Clustering.symmetric(np.repeat([0, 1], 4), 2, 3)
    core = np.zeros((2, 2, 2))
    core[0, 0, 0] = core[1, 1, 1] = 1.0
    return DtbmParams(z=z, core=core, theta=(np.ones(8),) * 3)


def test_valid_params_pass_every_check(orthogonal_params):
    report = validate(orthogonal_params)
    assert report.passed
    assert set(report.checks) == {
        "positive_degrees",
        "degree_normalization",
        "cluster_sizes",
        "core_row_norms",
        "degree_balance",
        "angle_gap",
    }


def test_parallel_core_rows_fail_the_gap_check(orthogonal_params):
    core = np.ones((2, 2, 2))
    core[1] *= 2.0
    params = DtbmParams(z=orthogonal_params.z, core=core, theta=orthogonal_params.theta)
    report = validate(params)
    assert not report.checks["angle_gap"]
    assert "angle_gap" in report.messages


def test_unnormalized_degrees_fail(orthogonal_params):
    theta = np.ones(8)
    theta[:4] *= 1.1
    params = DtbmParams(z=orthogonal_params.z, core=orthogonal_params.core, theta=(theta,) * 3)
    report = validate(params)
    assert not report.checks["degree_normalization"]
    assert report.checks["positive_degrees"]


def test_mixed_sign_degrees_fail(mixed_sign_params):
    assert not validate(mixed_sign_params).checks["positive_degrees"]


def test_unbalanced_sizes_fail():
    z = Clustering.symmetric(np.array([0] * 9 + [1]), 2, 2)
    params = DtbmParams(z=z, core=np.eye(2), theta=(np.ones(10),) * 2)
    report = validate(params, ParameterSpace(c1=0.3, c2=1.5))
    assert not report.checks["cluster_sizes"]


def test_validation_does_not_mutate(orthogonal_params):
    before = orthogonal_params.core.copy()
    validate(orthogonal_params)
    assert np.array_equal(before, orthogonal_params.core)


def test_parameter_space_rejects_inverted_bounds():
    with pytest.raises(ValidationError):
        ParameterSpace(c3=5.0, c4=1.0)
    with pytest.raises(ValidationError):
        ParameterSpace(c1=-1.0)
