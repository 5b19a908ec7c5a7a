"""
FuzzyExtractor class: code-offset secure sketch over a repetition code plus
SHA-256, mapping noisy biometric templates to a stable identity.
"""

import hashlib
import logging
import struct
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

from pairing import InvalidArgumentError, InvalidConfigError, RecordFormatError, Scalar

DEFAULT_TEMPLATE_BITS = 256
IDENTITY_BYTES = 32
SKETCH_VERSION = 1

_TEMPLATE_TAG = b"bio-ibe/template/v1"
_IDENTITY_TAG = b"bio-ibe/identity/v1"
_SKETCH_HEADER = struct.Struct(">BHHH")


@dataclass(frozen=True)
class BiometricTemplate:
    """k-bit template; bit i is (bits >> i) & 1."""
    bits: int
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise InvalidArgumentError(f"Template length must be positive, got {self.k}")
        if not 0 <= self.bits < (1 << self.k):
            raise InvalidArgumentError(f"Template does not fit in {self.k} bits")

    def flip(self, *positions: int) -> "BiometricTemplate":
        bits = self.bits
        for i in positions:
            if not 0 <= i < self.k:
                raise InvalidArgumentError(f"Bit position {i} outside template of {self.k} bits")
            bits ^= 1 << i
        return BiometricTemplate(bits, self.k)

    def complement(self) -> "BiometricTemplate":
        return BiometricTemplate(self.bits ^ ((1 << self.k) - 1), self.k)


@dataclass(frozen=True)
class Identity:
    id_bytes: bytes

    def __post_init__(self):
        if len(self.id_bytes) != IDENTITY_BYTES:
            raise InvalidArgumentError(f"Identity must be {IDENTITY_BYTES} bytes, got {len(self.id_bytes)}")

    def hex(self) -> str:
        return self.id_bytes.hex()


@dataclass(frozen=True)
class SketchPar:
    """Public helper string: offset between the template and a codeword."""
    offset: int
    k: int
    t: int
    block_width: int

    def __post_init__(self):
        if self.t < 0 or self.t >= self.k:
            raise InvalidArgumentError(f"Correction radius t={self.t} must satisfy 0 <= t < k={self.k}")
        if self.block_width != 2 * self.t + 1 or self.block_width > self.k:
            raise InvalidArgumentError(f"Block width {self.block_width} does not match t={self.t} and k={self.k}")
        if not 0 <= self.offset < (1 << self.k):
            raise InvalidArgumentError(f"Offset does not fit in {self.k} bits")

    def to_bytes(self) -> bytes:
        body = self.offset.to_bytes((self.k + 7) // 8, "big")
        return _SKETCH_HEADER.pack(SKETCH_VERSION, self.k, self.t, self.block_width) + body

    @classmethod
    def from_bytes(cls, data: bytes) -> "SketchPar":
        if len(data) < _SKETCH_HEADER.size:
            raise RecordFormatError("Sketch blob is truncated")
        version, k, t, block_width = _SKETCH_HEADER.unpack_from(data)
        if version != SKETCH_VERSION:
            raise RecordFormatError(f"Unsupported sketch version {version}")
        body = data[_SKETCH_HEADER.size:]
        if len(body) != (k + 7) // 8:
            raise RecordFormatError(f"Sketch offset has {len(body)} bytes, expected {(k + 7) // 8}")
        try:
            return cls(int.from_bytes(body, "big"), k, t, block_width)
        except InvalidArgumentError as e:
            raise RecordFormatError(f"Invalid sketch: {e.detail}")


def hamming_distance(a: BiometricTemplate, b: BiometricTemplate) -> int:
    if a.k != b.k:
        raise InvalidArgumentError(f"Template lengths differ ({a.k} vs {b.k})")
    return (a.bits ^ b.bits).bit_count()


def _attribute_bytes(mu: Scalar) -> bytes:
    return mu.value.to_bytes((mu.p.bit_length() + 7) // 8, "big")


class FuzzyExtractor:
    def __init__(self, template_bits: int = DEFAULT_TEMPLATE_BITS, correction_radius: int = 0,
                 attribute_count: Optional[int] = None):
        """Initialize the FuzzyExtractor

        Templates are split into blocks of width 2t+1; bits after the last
        full block are not covered by the code and never reach the identity.
        """
        if correction_radius < 0:
            raise InvalidConfigError(f"Correction radius must be non-negative, got {correction_radius}")
        if 2 * correction_radius + 1 > template_bits:
            raise InvalidConfigError(f"Block width {2 * correction_radius + 1} exceeds template length "
                                     f"{template_bits}")
        self.k = template_bits
        self.t = correction_radius
        self.block_width = 2 * correction_radius + 1
        self.blocks = template_bits // self.block_width
        self.attribute_count = attribute_count
        self.logger = logging.getLogger("fuzzy.extractor")

    def check_overlap_tolerance(self, n: int, d: int):
        """Sets sharing d of n attributes differ in at most 2(n-d) bits per block."""
        if self.t < 2 * (n - d):
            raise InvalidConfigError(f"Correction radius t={self.t} cannot absorb {n - d} differing attributes "
                                     f"(need t >= {2 * (n - d)})")

    def attrs_to_template(self, w: Iterable[Scalar]) -> BiometricTemplate:
        attrs = sorted(w)
        if self.attribute_count is not None and len(attrs) != self.attribute_count:
            raise InvalidArgumentError(f"Expected {self.attribute_count} attributes, got {len(attrs)}")
        if len(set(attrs)) != len(attrs) or any(mu.is_zero() for mu in attrs):
            raise InvalidArgumentError("Attributes must be distinct and nonzero")
        bits = 0
        for mu in attrs:
            encoded = _attribute_bytes(mu)
            for j in range(self.blocks):
                digest = hashlib.sha256(_TEMPLATE_TAG + encoded + j.to_bytes(4, "big")).digest()
                position = int.from_bytes(digest[:8], "big") % self.block_width
                bits |= 1 << (j * self.block_width + position)
        return BiometricTemplate(bits, self.k)

    def gen(self, b: BiometricTemplate, rng) -> Tuple[Identity, SketchPar]:
        if b.k != self.k:
            raise InvalidArgumentError(f"Template has {b.k} bits, extractor expects {self.k}")
        codeword = 0
        for j in range(self.blocks):
            if rng.getrandbits(1):
                codeword |= self._block_mask(j)
        par = SketchPar(b.bits ^ codeword, self.k, self.t, self.block_width)
        return self._identity(codeword, par), par

    def rep(self, b_prime: BiometricTemplate, par: SketchPar) -> Identity:
        if b_prime.k != par.k:
            raise InvalidArgumentError(f"Template has {b_prime.k} bits, sketch expects {par.k}")
        noisy = b_prime.bits ^ par.offset
        codeword = 0
        block_mask = (1 << par.block_width) - 1
        for j in range(par.k // par.block_width):
            shift = j * par.block_width
            if ((noisy >> shift) & block_mask).bit_count() > par.t:
                codeword |= block_mask << shift
        return self._identity(codeword, par)

    def _block_mask(self, j: int) -> int:
        return ((1 << self.block_width) - 1) << (j * self.block_width)

    @staticmethod
    def _identity(codeword: int, par: SketchPar) -> Identity:
        h = hashlib.sha256(_IDENTITY_TAG)
        h.update(struct.pack(">HH", par.k, par.t))
        h.update(codeword.to_bytes((par.k + 7) // 8, "big"))
        return Identity(h.digest())
