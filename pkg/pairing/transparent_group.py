"""
Discrete-log-transparent symmetric pairing.

An element of G is stored as its exponent d (meaning g^d) and an element of
G_T as its exponent in e(g, g). The group law is addition of exponents mod p
and e(g^a, g^b) = e(g, g)^(ab). Every algebraic identity of the scheme can be
asserted directly on exponents; it offers no security whatsoever.
"""

from dataclasses import dataclass, field
from typing import Any, Dict

from Crypto.Util import number

from .errors import InvalidArgumentError, InvalidConfigError
from .pairing_group import G, GT, GElem, GroupElement, GtElem, PairingGroup

BACKEND = "transparent"
BACKEND_TAG = 0x01

# isPrime error bound for registry primes
PRIMALITY_FALSE_POSITIVE = 1e-30


@dataclass(frozen=True)
class TransparentGroup(PairingGroup):
    p: int
    name: str = field(default="transparent", compare=False)

    def __post_init__(self):
        if not number.isPrime(self.p, false_positive_prob=PRIMALITY_FALSE_POSITIVE):
            raise InvalidConfigError(f"Group order {self.p} is not prime")

    @property
    def is_transparent(self) -> bool:
        return True

    def op(self, kind: str, a: int, b: int) -> int:
        return (a + b) % self.p

    def inv(self, kind: str, a: int) -> int:
        return (-a) % self.p

    def exp(self, kind: str, a: int, k: int) -> int:
        return (a * k) % self.p

    def generator(self) -> GElem:
        return GElem(self, 1)

    def gt_generator(self) -> GtElem:
        return GtElem(self, 1)

    def identity_g(self) -> GElem:
        return GElem(self, 0)

    def identity_gt(self) -> GtElem:
        return GtElem(self, 0)

    def pair(self, u: GElem, v: GElem) -> GtElem:
        for x in (u, v):
            if not isinstance(x, GElem):
                raise InvalidArgumentError(f"pair() expects elements of G, got {type(x).__name__}")
            if x.group != self:
                raise InvalidArgumentError(f"Element from group {x.group.name} paired in group {self.name}")
        return GtElem(self, (u.rep * v.rep) % self.p)

    def dlog(self, x: GroupElement) -> int:
        """Exponent of x with respect to g (or e(g, g)). Test-mode only."""
        if x.group != self:
            raise InvalidArgumentError(f"Element from group {x.group.name} is not in {self.name}")
        return x.rep

    def encode_element(self, x: GroupElement) -> bytes:
        if x.group != self:
            raise InvalidArgumentError(f"Element from group {x.group.name} is not in {self.name}")
        return bytes([BACKEND_TAG]) + x.rep.to_bytes(self.scalar_width, "big")

    def decode_element(self, kind: str, data: bytes) -> GroupElement:
        if len(data) != 1 + self.scalar_width or data[0] != BACKEND_TAG:
            raise InvalidArgumentError(f"Not a {BACKEND} {kind} element encoding for p of "
                                       f"{self.p.bit_length()} bits")
        value = int.from_bytes(data[1:], "big")
        if value >= self.p:
            raise InvalidArgumentError("Element encoding is not reduced mod p")
        if kind not in (G, GT):
            raise InvalidArgumentError(f"Unknown element kind {kind}")
        cls = GElem if kind == G else GtElem
        return cls(self, value)

    def descriptor(self) -> Dict[str, Any]:
        return {"backend": BACKEND, "name": self.name, "prime": self.p}
