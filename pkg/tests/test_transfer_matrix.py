"""Tests for the transfer-matrix resonance oracle."""

import logging
import math

import numpy as np
import pytest
from scipy import optimize

from weyl_lab import (
    DomainError,
    Potential1D,
    transfer_matrix_bound_states,
    transfer_matrix_resonances,
)
from weyl_lab.models import PotentialKind, double_gaussian_barrier, double_square_barrier
from weyl_lab.transfer_matrix import outgoing_mismatch, winding_number

logger = logging.getLogger(__name__)


def test_winding_number_counts_zeros():
    """Test the argument principle on a polynomial with known roots."""

    def poly(z):
        z = np.asarray(z)
        return (z - (1.0 - 0.5j)) * (z - (2.0 - 0.5j))

    assert winding_number(poly, (0.5, 1.5, -1.0, 0.0)) == 1
    assert winding_number(poly, (0.5, 2.5, -1.0, 0.0)) == 2
    assert winding_number(poly, (3.0, 4.0, -1.0, 0.0)) == 0


def test_square_well_bound_state():
    """Test the single even bound state of a unit square well."""
    well = Potential1D(kind=PotentialKind.PIECEWISE_CONSTANT, intervals=((-0.5, 0.5, -1.0),))

    states = transfer_matrix_bound_states(well, hbar=1.0)

    # q tan(q/2) = sqrt(2 - q^2), E = q^2/2 - 1
    q = optimize.brentq(
        lambda q: q * math.tan(q / 2) - math.sqrt(max(0.0, 2 - q * q)),
        1e-6,
        math.sqrt(2) * (1 - 1e-12),
        xtol=1e-15,
    )
    assert len(states) == 1
    assert states[0] == pytest.approx(q * q / 2 - 1, abs=1e-10)


def test_no_bound_states_above_zero():
    """Test that nonnegative barriers have no bound states."""
    assert transfer_matrix_bound_states(double_square_barrier(), hbar=0.05) == []


def test_square_barrier_resonance():
    """Test the lowest resonance of a square double barrier."""
    potential = double_square_barrier(height=1.0, width=0.3, inner_edge=0.5)

    (res,) = transfer_matrix_resonances(potential, 0.05, (0.005, 0.02, -1e-3, 1e-4))

    assert res.re == pytest.approx(0.0108, rel=2e-2)
    assert -1e-3 < res.im < 0.0
    assert res.method == "oracle"
    assert res.lifetime == pytest.approx(0.05 / (2 * abs(res.im)))
    f = outgoing_mismatch(potential, 0.05)
    assert abs(complex(f(np.asarray(res.z)))) < 1e-6


def test_lifetime_grows_with_barrier_width():
    """Test that wider barriers trap longer."""
    lifetimes = []
    for width in (0.1, 0.2, 0.3):
        potential = double_square_barrier(height=0.3, width=width, inner_edge=0.5)
        (res,) = transfer_matrix_resonances(potential, 0.05, (0.005, 0.02, -2e-3, 1e-4))
        lifetimes.append(res.lifetime)

    assert lifetimes[0] < lifetimes[1] < lifetimes[2]


def test_oracle_input_checks():
    """Test rejection of analytic potentials and invalid boxes."""
    square = double_square_barrier()

    with pytest.raises(DomainError):
        transfer_matrix_resonances(double_gaussian_barrier(), 0.05, (0.005, 0.02, -1e-3, 1e-4))
    with pytest.raises(DomainError):
        transfer_matrix_resonances(square, 0.05, (0.0, 0.02, -1e-3, 1e-4))
    with pytest.raises(DomainError):
        transfer_matrix_resonances(square, 0.05, (0.005, 0.02, 1e-4, 1e-3))
    with pytest.raises(DomainError):
        transfer_matrix_resonances(square, -0.05, (0.005, 0.02, -1e-3, 1e-4))
