"""
Biometric identity-based encryption: Setup, Extract, Encrypt and Decrypt.

Two bindings of the identity into the key are supported. The default binds
H1(ID); the original binding H1(w || ID) is kept to show that honest
decryption fails under it whenever w != w'.
"""

import hashlib
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple

from fuzzy import DEFAULT_TEMPLATE_BITS, FuzzyExtractor, Identity, SketchPar
from pairing import (GElem, GtElem, InsufficientOverlapError, InvalidArgumentError, InvalidConfigError,
                     PairingGroup, Scalar, interpolate_at_zero_in_exponent, sample_polynomial)

HASH_SUITE = "sha256"

_H1_TAG = b"bio-ibe/H1/v1"

logger = logging.getLogger("bioibe.scheme")


class Binding(str, Enum):
    IDENTITY = "identity"
    ATTRIBUTES_AND_IDENTITY = "attributes-and-identity"


@dataclass(frozen=True)
class AttributeSet:
    """Distinct nonzero attributes of one field, kept in ascending order."""
    attrs: Tuple[Scalar, ...]

    def __post_init__(self):
        attrs = tuple(sorted(self.attrs))
        if not attrs:
            raise InvalidArgumentError("Attribute set must not be empty")
        if len({mu.p for mu in attrs}) != 1:
            raise InvalidArgumentError("Attributes come from different fields")
        if any(mu.is_zero() for mu in attrs):
            raise InvalidArgumentError("Attribute 0 is reserved for the master secret")
        if len(set(attrs)) != len(attrs):
            raise InvalidArgumentError("Attribute set contains duplicates")
        object.__setattr__(self, "attrs", attrs)

    @classmethod
    def of(cls, group: PairingGroup, values: Iterable[int]) -> "AttributeSet":
        values = list(values)
        for v in values:
            if not 0 < v < group.p:
                raise InvalidArgumentError(f"Attribute {v} is outside [1, {group.p})")
        return cls(tuple(group.scalar(v) for v in values))

    @classmethod
    def random(cls, group: PairingGroup, n: int, rng, exclude: Iterable[Scalar] = ()) -> "AttributeSet":
        taken = set(exclude)
        if n > group.p - 1 - len(taken):
            raise InvalidArgumentError(f"Cannot draw {n} fresh attributes from Z_{group.p}*")
        picked = []
        while len(picked) < n:
            mu = group.random_scalar(rng, nonzero=True)
            if mu not in taken:
                taken.add(mu)
                picked.append(mu)
        return cls(tuple(picked))

    def __iter__(self):
        return iter(self.attrs)

    def __len__(self):
        return len(self.attrs)

    def __contains__(self, mu) -> bool:
        return mu in self.attrs

    def intersection(self, other: "AttributeSet") -> List[Scalar]:
        theirs = set(other.attrs)
        return [mu for mu in self.attrs if mu in theirs]

    def to_bytes(self) -> bytes:
        width = (self.attrs[0].p.bit_length() + 7) // 8
        return len(self.attrs).to_bytes(2, "big") + b"".join(mu.value.to_bytes(width, "big") for mu in self.attrs)

    def values(self) -> List[int]:
        return [mu.value for mu in self.attrs]


@dataclass(frozen=True)
class SchemeConfig:
    group: PairingGroup
    n: int = 8
    d: int = 4
    template_bits: int = DEFAULT_TEMPLATE_BITS
    correction_radius: Optional[int] = None
    binding: Binding = Binding.IDENTITY

    @property
    def radius(self) -> int:
        if self.correction_radius is None:
            return 2 * (self.n - self.d)
        return self.correction_radius

    def validate(self):
        if self.n < 1:
            raise InvalidConfigError(f"Attribute count n must be positive, got {self.n}")
        if not 1 <= self.d <= self.n:
            raise InvalidConfigError(f"Threshold d={self.d} must satisfy 1 <= d <= n={self.n}")
        if self.n >= self.group.p:
            raise InvalidConfigError(f"n={self.n} distinct nonzero attributes do not fit in Z_{self.group.p}")
        self.extractor().check_overlap_tolerance(self.n, self.d)

    def extractor(self) -> FuzzyExtractor:
        return FuzzyExtractor(self.template_bits, self.radius, self.n)


@dataclass(frozen=True)
class PublicParams:
    group: PairingGroup
    g: GElem
    g1: GElem
    g2: GElem
    d: int
    n: int
    template_bits: int
    correction_radius: int
    binding: Binding = Binding.IDENTITY
    hash_suite: str = HASH_SUITE

    def __post_init__(self):
        if not 1 <= self.d <= self.n:
            raise InvalidConfigError(f"Threshold d={self.d} must satisfy 1 <= d <= n={self.n}")
        if self.hash_suite != HASH_SUITE:
            raise InvalidConfigError(f"Unsupported hash suite {self.hash_suite}")

    @property
    def extractor(self) -> FuzzyExtractor:
        return FuzzyExtractor(self.template_bits, self.correction_radius, self.n)


@dataclass(frozen=True)
class MasterKey:
    s: Scalar

    def __post_init__(self):
        if self.s.is_zero():
            raise InvalidArgumentError("Master key must be nonzero")


@dataclass(frozen=True)
class KeyShare:
    d1: GElem
    d2: GElem


@dataclass(frozen=True)
class SecretKey:
    attributes: AttributeSet
    entries: Tuple[Tuple[Scalar, KeyShare], ...]
    identity: Identity
    binding: Binding = Binding.IDENTITY

    def __post_init__(self):
        if [mu for mu, _ in self.entries] != list(self.attributes):
            raise InvalidArgumentError("Key entries must cover the attribute set in ascending order")

    def share(self, mu: Scalar) -> KeyShare:
        for point, share in self.entries:
            if point == mu:
                return share
        raise InvalidArgumentError(f"Attribute {mu.value} is not part of this key")


@dataclass(frozen=True)
class Ciphertext:
    w_prime: AttributeSet
    c1: GElem
    c2: GElem
    c3: GtElem


def hash_to_scalar_h1(group: PairingGroup, identity: Identity, w: Optional[AttributeSet] = None) -> Scalar:
    """H1 onto Z_p*: SHA-256 in counter mode, widened by 128 bits, resampled on zero."""
    message = _H1_TAG
    message += b"\x00" if w is None else b"\x01" + w.to_bytes()
    message += identity.id_bytes
    width = group.scalar_width + 16
    counter = 0
    while True:
        stream = b"".join(hashlib.sha256(message + counter.to_bytes(4, "big") + block.to_bytes(4, "big")).digest()
                          for block in range((width + 31) // 32))
        value = int.from_bytes(stream[:width], "big") % group.p
        if value:
            return Scalar(value, group.p)
        counter += 1


def binding_hash(pp: PublicParams, identity: Identity, w: AttributeSet, binding: Optional[Binding] = None) -> Scalar:
    binding = binding or pp.binding
    if binding == Binding.IDENTITY:
        return hash_to_scalar_h1(pp.group, identity)
    return hash_to_scalar_h1(pp.group, identity, w)


def _check_attribute_set(pp: PublicParams, w: AttributeSet):
    if len(w) != pp.n:
        raise InvalidArgumentError(f"Attribute set has {len(w)} attributes, the system uses n={pp.n}")
    if w.attrs[0].p != pp.group.p:
        raise InvalidArgumentError("Attribute set is not over this group's field")


def setup(rng, config: SchemeConfig) -> Tuple[PublicParams, MasterKey]:
    config.validate()
    group = config.group
    g = group.generator()
    s = group.random_scalar(rng, nonzero=True)
    g1 = g ** group.random_scalar(rng, nonzero=True)
    pp = PublicParams(group=group, g=g, g1=g1, g2=g ** s, d=config.d, n=config.n,
                      template_bits=config.template_bits, correction_radius=config.radius,
                      binding=config.binding)
    logger.info(f"Setup - group: {group.name} n: {config.n} d: {config.d} t: {config.radius} "
                f"binding: {config.binding.value}")
    return pp, MasterKey(s)


def recover_identity(pp: PublicParams, w: AttributeSet, par: SketchPar) -> Identity:
    """ID' = Rep(b', PAR) for the template b' of w."""
    _check_attribute_set(pp, w)
    extractor = pp.extractor
    return extractor.rep(extractor.attrs_to_template(w), par)


def extract(pp: PublicParams, msk: MasterKey, w: AttributeSet, rng) -> Tuple[SecretKey, SketchPar]:
    _check_attribute_set(pp, w)
    extractor = pp.extractor
    identity, par = extractor.gen(extractor.attrs_to_template(w), rng)
    q = sample_polynomial(rng, pp.d - 1, msk.s)
    base = pp.g1 * pp.g ** binding_hash(pp, identity, w)
    entries = []
    for mu in w:
        q_mu = q.eval(mu)
        entries.append((mu, KeyShare(d1=base ** q_mu, d2=pp.g ** q_mu)))
    logger.debug(f"Extract - issued key with {len(entries)} shares for identity {identity.hex()[:16]}")
    return SecretKey(w, tuple(entries), identity, pp.binding), par


def encrypt(pp: PublicParams, m: GtElem, w_prime: AttributeSet, par: SketchPar, rng) -> Ciphertext:
    _check_attribute_set(pp, w_prime)
    if m.group != pp.group:
        raise InvalidArgumentError("Message is not an element of this G_T")
    identity = recover_identity(pp, w_prime, par)
    r = pp.group.random_scalar(rng, nonzero=True)
    h = binding_hash(pp, identity, w_prime)
    return Ciphertext(w_prime=w_prime,
                      c1=pp.g ** r,
                      c2=(pp.g ** h) ** r,
                      c3=m * pp.group.pair(pp.g1, pp.g2) ** r)


def select_subset(candidates: Sequence[Scalar], d: int) -> List[Scalar]:
    """The d smallest candidates."""
    return sorted(candidates)[:d]


def decrypt(pp: PublicParams, sk: SecretKey, ct: Ciphertext, subset: Optional[Sequence[Scalar]] = None) -> GtElem:
    overlap = sk.attributes.intersection(ct.w_prime)
    if len(overlap) < pp.d:
        raise InsufficientOverlapError(len(overlap), pp.d)
    if subset is None:
        S = select_subset(overlap, pp.d)
    else:
        S = sorted(subset)
        if len(set(S)) != pp.d or not set(S) <= set(overlap):
            raise InvalidArgumentError(f"Decryption set must be {pp.d} distinct attributes of w' and w")
    logger.debug(f"Decrypt - S = {[mu.value for mu in S]}")
    D2 = interpolate_at_zero_in_exponent([(mu, sk.share(mu).d2) for mu in S])
    D1 = interpolate_at_zero_in_exponent([(mu, sk.share(mu).d1) for mu in S])
    return ct.c3 * pp.group.pair(ct.c2, D2) / pp.group.pair(ct.c1, D1)


def check_public_params(pp: PublicParams) -> List[str]:
    problems = []
    if pp.g.is_identity():
        problems.append("g is the identity")
    if pp.group.pair(pp.g, pp.g).is_identity():
        problems.append("pairing is degenerate: e(g, g) = 1")
    if pp.g2.is_identity():
        problems.append("g2 is the identity")
    return problems


def check_secret_key(pp: PublicParams, sk: SecretKey) -> List[str]:
    """Key consistency e(d2, g1 g^h) = e(d1, g) per share, and share consistency at 0."""
    problems = []
    if len(sk.entries) != pp.n:
        problems.append(f"key has {len(sk.entries)} shares, expected n={pp.n}")
    h = binding_hash(pp, sk.identity, sk.attributes, sk.binding)
    base = pp.g1 * pp.g ** h
    for mu, share in sk.entries:
        if pp.group.pair(share.d2, base) != pp.group.pair(share.d1, pp.g):
            problems.append(f"share for attribute {mu.value} fails e(d2, g1*g^h) = e(d1, g)")
    if len(sk.entries) >= pp.d:
        head = sk.entries[:pp.d]
        if interpolate_at_zero_in_exponent([(mu, share.d2) for mu, share in head]) != pp.g2:
            problems.append("d2 shares do not interpolate to g2 at 0")
    return problems


def check_ciphertext(pp: PublicParams, ct: Ciphertext, par: SketchPar) -> List[str]:
    """Public DH-tuple relation e(c1, g^H1(ID')) = e(c2, g)."""
    identity = recover_identity(pp, ct.w_prime, par)
    h = binding_hash(pp, identity, ct.w_prime)
    if pp.group.pair(ct.c1, pp.g ** h) != pp.group.pair(ct.c2, pp.g):
        return ["ciphertext fails e(c1, g^h) = e(c2, g)"]
    return []
