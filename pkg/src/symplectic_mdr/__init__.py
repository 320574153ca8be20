"""Exact symplectic star products, open-string background maps and quartic MDR phenomenology."""

from .background import (
    BackgroundFields,
    FluxData,
    Realization,
    extract_mdr,
    immirzi_from_flux,
    realization_dispersion,
    seiberg_witten_map,
)
from .enclosure import Interval
from .phenomenology import Dispersion, DomainError, ObservationChannel, invert_bound, time_of_flight_delay
from .series import Polynomial, TruncatedSeries
from .spectral import a4_from_symbol, scale_matching
from .star import DarbouxChart, StarProduct, star
from .symplectic import SymplecticData, ell_star_squared, validate

__version__ = "0.1.0"
