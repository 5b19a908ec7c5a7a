"""
PairingGroup interface for symmetric bilinear pairings e: G x G -> G_T of prime order p.

Scheme code only talks to this interface, so a backend built on a real
pairing-friendly curve can replace the transparent backend without touching it.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, ClassVar, Dict, Union

from .errors import InvalidArgumentError

G = "G"
GT = "GT"


@dataclass(frozen=True, order=True)
class Scalar:
    """Element of Z_p. Arithmetic is always reduced mod p."""
    value: int
    p: int

    def __post_init__(self):
        if not 0 <= self.value < self.p:
            raise InvalidArgumentError(f"Scalar {self.value} is outside [0, {self.p})")

    def _coerce(self, other) -> int:
        if isinstance(other, Scalar):
            if other.p != self.p:
                raise InvalidArgumentError(f"Scalars from different fields (p={self.p}, p={other.p})")
            return other.value
        if isinstance(other, int):
            return other % self.p
        return NotImplemented

    def _new(self, value: int) -> "Scalar":
        return Scalar(value % self.p, self.p)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(o - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value * o)

    __rmul__ = __mul__

    def __neg__(self):
        return self._new(-self.value)

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return self._new(pow(self.value, exponent, self.p))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * self._new(o).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(o) * self.inverse()

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def is_zero(self) -> bool:
        return self.value == 0

    def inverse(self) -> "Scalar":
        if self.value == 0:
            raise InvalidArgumentError("Zero has no inverse in Z_p")
        return self._new(pow(self.value, -1, self.p))

    def __repr__(self):
        return f"Scalar({self.value})"


@dataclass(frozen=True)
class GroupElement:
    group: "PairingGroup"
    rep: Any
    kind: ClassVar[str] = ""

    def _check(self, other: "GroupElement"):
        if not isinstance(other, type(self)):
            raise InvalidArgumentError(f"Cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.group != self.group:
            raise InvalidArgumentError(f"Elements belong to different groups "
                                       f"({self.group.name} vs {other.group.name})")

    def __mul__(self, other: "GroupElement"):
        self._check(other)
        return type(self)(self.group, self.group.op(self.kind, self.rep, other.rep))

    def __truediv__(self, other: "GroupElement"):
        self._check(other)
        return self * other.inverse()

    def __pow__(self, exponent: Union[int, Scalar]):
        if isinstance(exponent, Scalar):
            if exponent.p != self.group.p:
                raise InvalidArgumentError("Exponent is not a scalar of this group")
            exponent = exponent.value
        return type(self)(self.group, self.group.exp(self.kind, self.rep, exponent % self.group.p))

    def inverse(self):
        return type(self)(self.group, self.group.inv(self.kind, self.rep))

    def is_identity(self) -> bool:
        identity = self.group.identity_g() if self.kind == G else self.group.identity_gt()
        return self == identity

    def to_bytes(self) -> bytes:
        return self.group.encode_element(self)


class GElem(GroupElement):
    kind = G

    def __repr__(self):
        return f"GElem({self.group.name}, {self.rep!r})"


class GtElem(GroupElement):
    kind = GT

    def __repr__(self):
        return f"GtElem({self.group.name}, {self.rep!r})"


class PairingGroup(ABC):
    """Symmetric bilinear group (G, G_T, e, g) of prime order p."""

    name: str
    p: int

    # Group law on backend representations, for kind in {G, GT}.
    @abstractmethod
    def op(self, kind: str, a: Any, b: Any) -> Any: ...

    @abstractmethod
    def inv(self, kind: str, a: Any) -> Any: ...

    @abstractmethod
    def exp(self, kind: str, a: Any, k: int) -> Any: ...

    @abstractmethod
    def generator(self) -> GElem: ...

    @abstractmethod
    def gt_generator(self) -> GtElem:
        """e(g, g)"""

    @abstractmethod
    def identity_g(self) -> GElem: ...

    @abstractmethod
    def identity_gt(self) -> GtElem: ...

    @abstractmethod
    def pair(self, u: GElem, v: GElem) -> GtElem: ...

    @abstractmethod
    def encode_element(self, x: GroupElement) -> bytes: ...

    @abstractmethod
    def decode_element(self, kind: str, data: bytes) -> GroupElement: ...

    @abstractmethod
    def descriptor(self) -> Dict[str, Any]:
        """Enough to rebuild this group with group_from_descriptor()."""

    @property
    def is_transparent(self) -> bool:
        return False

    def scalar(self, value: int) -> Scalar:
        return Scalar(value % self.p, self.p)

    def random_scalar(self, rng, nonzero: bool = False) -> Scalar:
        return Scalar(rng.randrange(1 if nonzero else 0, self.p), self.p)

    def random_g(self, rng) -> GElem:
        return self.generator() ** self.random_scalar(rng)

    def random_gt(self, rng) -> GtElem:
        return self.gt_generator() ** self.random_scalar(rng)

    @property
    def scalar_width(self) -> int:
        return (self.p.bit_length() + 7) // 8

    def encode_scalar(self, x: Scalar) -> bytes:
        if x.p != self.p:
            raise InvalidArgumentError("Scalar is not in this group's field")
        return x.value.to_bytes(self.scalar_width, "big")

    def decode_scalar(self, data: bytes) -> Scalar:
        if len(data) != self.scalar_width:
            raise InvalidArgumentError(f"Scalar encoding must be {self.scalar_width} bytes, got {len(data)}")
        value = int.from_bytes(data, "big")
        if value >= self.p:
            raise InvalidArgumentError("Scalar encoding is not reduced mod p")
        return Scalar(value, self.p)

    def scalar_to_hex(self, x: Scalar) -> str:
        return self.encode_scalar(x).hex()

    def scalar_from_hex(self, text: str) -> Scalar:
        try:
            return self.decode_scalar(bytes.fromhex(text))
        except ValueError as e:
            raise InvalidArgumentError(f"Invalid scalar hex: {e}")

    def decode_g(self, data: bytes) -> GElem:
        return self.decode_element(G, data)

    def decode_gt(self, data: bytes) -> GtElem:
        return self.decode_element(GT, data)
