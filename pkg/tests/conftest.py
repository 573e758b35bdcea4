import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "cubik", deadline=None, derandomize=True, max_examples=100,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.register_profile("thorough", parent=settings.get_profile("cubik"), max_examples=1000, derandomize=False)
settings.load_profile(os.environ.get("CUBIK_HYPOTHESIS", "cubik"))
