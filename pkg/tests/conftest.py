import numpy as np
import pytest

from fermidce import (
    ModelConfig,
    build_fock_operators,
    build_quadratic_form,
    diagonalize,
    evolve,
    pairing_matrix,
)

LN2 = float(np.log(2.0))


@pytest.fixture(scope="session")
def pipeline():
    """Memoized (config, transform, pairing state) for a drive triple."""
    cache = {}

    def factory(speed_ratio, delta_l, cutoff, theta0=0.0):
        key = (speed_ratio, delta_l, cutoff, theta0)
        if key not in cache:
            cfg = ModelConfig(speed_ratio=speed_ratio, delta_l=delta_l,
                              cutoff=cutoff, theta0=theta0)
            t = evolve(diagonalize(build_quadratic_form(cfg)), delta_l)
            cache[key] = (cfg, t, pairing_matrix(t, cfg))
        return cache[key]

    return factory


@pytest.fixture(scope="session")
def fock_ops():
    """Memoized Fock oracle operators keyed by (speed_ratio, cutoff)."""
    cache = {}

    def factory(speed_ratio, cutoff, delta_l_sign=1.0):
        key = (speed_ratio, cutoff, delta_l_sign)
        if key not in cache:
            cfg = ModelConfig(speed_ratio=speed_ratio, delta_l=delta_l_sign * LN2,
                              cutoff=cutoff)
            cache[key] = build_fock_operators(cfg)
        return cache[key]

    return factory
