import numpy as np
import pytest

from geikit.dataset import SynthWalkerSpec, generate_walker


def pytest_terminal_summary(terminalreporter):
    lines = []
    for status in ("passed", "failed"):
        for rep in terminalreporter.getreports(status):
            for key, value in getattr(rep, "user_properties", ()):
                if key == "acceptance":
                    lines.append(value)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def small_spec():
    return SynthWalkerSpec(
        stride_period=12, torso_width=10, leg_length=30, arm_swing_amplitude=4,
        frame_count=48, canvas=(64, 44), seed=1,
    )


@pytest.fixture(scope="session")
def small_walker(small_spec):
    return generate_walker(small_spec, subject_id="w1")
