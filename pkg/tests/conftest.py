import numpy as np
import pytest

from dscfnet.model import ModelConfig, begin_layer, init_state


def random_state(D=5, N=6, dims=(2,), layer=None, seed=0, mixed=True, **cfg):
    """A state at ``layer`` with random S and E (mixed sign when ``mixed``)."""
    rng = np.random.default_rng(seed + 1000)
    config = ModelConfig(layer_dims=dims, seed=seed, **cfg)
    X = rng.random((D, N)) * 3.0
    state = init_state(X, config)
    for _ in range((layer or len(dims)) - 1):
        begin_layer(state, config)
    if mixed:
        state.S = rng.normal(size=(N, N))
        state.E = 0.5 * rng.normal(size=(D, N))
        state.dw = 0.5 + rng.random(N)
    return state, config


@pytest.fixture
def small_state():
    return random_state()


ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number:2d}. {title}: {detail}")
