import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from tik.field import FieldSpec

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


FIELDS = [FieldSpec.Fp(2), FieldSpec.Fp(3), FieldSpec.Fp(7), FieldSpec.Q(), FieldSpec.R(), FieldSpec.C()]


@pytest.fixture(params=FIELDS, ids=str)
def field(request):
    return request.param
