import numpy as np
import pytest

from pwframes import (
    HalfPlaneBox,
    Interval,
    build_fourier_model,
    build_frame,
    build_helgason_model,
    build_lattice,
    make_functional_family,
)


@pytest.fixture(scope="session")
def line_model():
    return build_fourier_model(1.0, 16)


@pytest.fixture(scope="session")
def hyp_model():
    return build_helgason_model(4.0, 4, 2)


@pytest.fixture(scope="session")
def line_lattice():
    return build_lattice(Interval(-4.0, 4.0), 0.4, seed=0)


@pytest.fixture(scope="session")
def hyp_lattice():
    return build_lattice(HalfPlaneBox(-4.0, 4.0, 0.25, 4.0), 0.5, seed=0)


@pytest.fixture(scope="session")
def line_frame(line_model, line_lattice):
    return build_frame(make_functional_family(line_lattice), line_model)


@pytest.fixture(scope="session")
def hyp_frame(hyp_model, hyp_lattice):
    return build_frame(make_functional_family(hyp_lattice), hyp_model)


def gram_eigenvalues(frame):
    """Oracle: full eigendecomposition of the frame operator in orthonormal coordinates."""
    s = np.sqrt(frame.model.weights)
    R = frame.coefficients
    G = s[:, None] * (R.T @ np.conj(R)) * s[None, :]
    return np.linalg.eigvalsh(G)
