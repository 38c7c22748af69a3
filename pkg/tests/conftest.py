import numpy as np
import pytest

from chandeg.channel import Channel, KrausSet


def random_state(rng, d):
    """Random full-rank density matrix (normalized Gram matrix)."""
    X = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    G = X @ X.conj().T
    return G / np.trace(G)


def random_channel(rng, d_in, d_out, d_env):
    """Random channel from a Haar-distributed Stinespring isometry."""
    if d_out * d_env < d_in:
        raise ValueError("need d_out * d_env >= d_in for an isometry")
    G = rng.normal(size=(d_out * d_env, d_in)) + 1j * rng.normal(size=(d_out * d_env, d_in))
    Q, R = np.linalg.qr(G)
    # fix the gauge so Q is Haar distributed
    Q = Q * (np.diag(R) / np.abs(np.diag(R)))
    blocks = Q.reshape(d_env, d_out, d_in)
    return Channel(KrausSet(d_in, d_out, tuple(blocks[e] for e in range(d_env))))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
