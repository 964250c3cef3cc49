import numpy as np
import pytest

from patchrad.geometry import build_linear_array_mesh, compute_tangent_frames
from patchrad.greens import Wavenumber
from patchrad.harness import DEFAULT_WAVELENGTH
from patchrad.oracle import dipole_array, synth_embedded_current_matrix

LAM = DEFAULT_WAVELENGTH


@pytest.fixture(scope="session")
def wavenumber():
    return Wavenumber.from_wavelength(LAM)


@pytest.fixture(scope="session")
def small_mesh():
    """Two half-wave elements at lambda/2 spacing, 6 patches each."""
    return build_linear_array_mesh(2, LAM / 2, LAM / 2, 6, LAM)


@pytest.fixture(scope="session")
def small_system(small_mesh):
    """(mesh, elements, matrix, frames) for the small array."""
    elements = dipole_array(small_mesh)
    matrix = synth_embedded_current_matrix(small_mesh, elements)
    frames = compute_tangent_frames(small_mesh, matrix.m)
    return small_mesh, elements, matrix, frames
