"""Search bounds shared by the Darboux search and the order cascade."""

from __future__ import annotations

from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class SearchBounds:
    """Limits of every bounded search.

    ``num_deg``          total degree of unknown numerators
    ``n_range``          |n| for the exponent of the order-1 witness
    ``max_denom_power``  total power of a candidate denominator
    ``darboux_deg``      degree of searched Darboux polynomials
    ``cofactor_height``  height of rational guesses for free cofactor coefficients
    ``exponent_bound``   |n_i| in integer relations among cofactors
    """

    num_deg: int = 8
    n_range: int = 4
    max_denom_power: int = 4
    darboux_deg: int = 4
    cofactor_height: int = 4
    exponent_bound: int = 6

    def __post_init__(self):
        for k, v in asdict(self).items():
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"bound {k} must be a positive integer, got {v!r}")

    def as_dict(self) -> dict[str, int]:
        return asdict(self)
