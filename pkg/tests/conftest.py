import pytest
from hypothesis import HealthCheck, settings

from dkm import coc_theory, stt_theory

# Property suites run at least 500 cases each; derandomized so that a red
# run can be replayed exactly.
settings.register_profile(
    "dkm", max_examples=500, deadline=None, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("dkm")


@pytest.fixture(scope="session")
def stt():
    return stt_theory()


@pytest.fixture(scope="session")
def coc():
    return coc_theory()


@pytest.fixture(scope="session", params=["stt", "coc"])
def theory(request):
    return request.param, (stt_theory() if request.param == "stt" else coc_theory())


def pytest_terminal_summary(terminalreporter):
    import test_acceptance
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[n])
