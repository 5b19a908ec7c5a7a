"""
Symmetric bilinear pairing abstraction and the algebra built on it.
"""

from .errors import (BioIBEError, CryptographicRefusal, InsufficientOverlapError, InsufficientSharesError,
                     InvalidArgumentError, InvalidConfigError, QueryRejectedError, RecordFormatError)
from .pairing_group import G, GT, GElem, GroupElement, GtElem, PairingGroup, Scalar
from .polynomial import (Polynomial, interpolate_at_zero_in_exponent, interpolate_scalar_at, lagrange_coeff,
                         sample_polynomial)
from .registry import DEFAULT_GROUP, get_group, group_from_descriptor, load_groups
from .transparent_group import TransparentGroup

__all__ = [
    'BioIBEError', 'CryptographicRefusal', 'InsufficientOverlapError', 'InsufficientSharesError',
    'InvalidArgumentError', 'InvalidConfigError', 'QueryRejectedError', 'RecordFormatError',
    'G', 'GT', 'GElem', 'GroupElement', 'GtElem', 'PairingGroup', 'Scalar',
    'Polynomial', 'interpolate_at_zero_in_exponent', 'interpolate_scalar_at', 'lagrange_coeff',
    'sample_polynomial', 'DEFAULT_GROUP', 'get_group', 'group_from_descriptor', 'load_groups',
    'TransparentGroup',
]
