"""
Polynomials over Z_p and Lagrange interpolation, in the clear and in the exponent.
"""

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

from .errors import InvalidArgumentError
from .pairing_group import GElem, Scalar


@dataclass(frozen=True)
class Polynomial:
    """q(x) = coeffs[0] + coeffs[1] x + ... ; coeffs[0] is the constant term."""
    coeffs: Tuple[Scalar, ...]

    def __post_init__(self):
        if len(self.coeffs) < 1:
            raise InvalidArgumentError("A polynomial needs at least one coefficient")
        p = self.coeffs[0].p
        if any(c.p != p for c in self.coeffs):
            raise InvalidArgumentError("Polynomial coefficients come from different fields")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def eval(self, x) -> Scalar:
        acc = self.coeffs[-1] * 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def sample_polynomial(rng, degree: int, constant_term: Scalar) -> Polynomial:
    """Random polynomial of the given degree with q(0) = constant_term.

    Non-constant coefficients are uniform over Z_p, zero included.
    """
    if degree < 0:
        raise InvalidArgumentError(f"Polynomial degree must be non-negative, got {degree}")
    p = constant_term.p
    coeffs = [constant_term] + [Scalar(rng.randrange(p), p) for _ in range(degree)]
    return Polynomial(tuple(coeffs))


def _check_points(S: Sequence[Scalar]):
    if len(S) < 1:
        raise InvalidArgumentError("Interpolation set must not be empty")
    if len(set(S)) != len(S):
        raise InvalidArgumentError("Interpolation points must be distinct")
    if any(j.is_zero() for j in S):
        raise InvalidArgumentError("Interpolation points must be nonzero")


def lagrange_coeff(i: Scalar, S: Iterable[Scalar], x) -> Scalar:
    """Delta_{i,S}(x) = prod_{j in S, j != i} (x - j) / (i - j) mod p."""
    S = list(S)
    _check_points(S)
    if i not in S:
        raise InvalidArgumentError(f"Point {i.value} is not in the interpolation set")
    result = i * 0 + 1
    for j in S:
        if j != i:
            result = result * (x - j) / (i - j)
    return result


def interpolate_scalar_at(shares: Sequence[Tuple[Scalar, Scalar]], x) -> Scalar:
    """Evaluate at x the unique polynomial of degree < len(shares) through the shares."""
    points = [point for point, _ in shares]
    _check_points(points)
    total = shares[0][1] * 0
    for point, value in shares:
        total = total + lagrange_coeff(point, points, x) * value
    return total


def interpolate_at_zero_in_exponent(shares: Sequence[Tuple[Scalar, GElem]]) -> GElem:
    """prod value_i ^ Delta_{point_i, S}(0); recovers g^q(0) from shares g^q(point_i)."""
    points: List[Scalar] = [point for point, _ in shares]
    _check_points(points)
    result = None
    for point, value in shares:
        term = value ** lagrange_coeff(point, points, 0)
        result = term if result is None else result * term
    return result
