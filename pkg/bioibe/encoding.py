"""
Canonical binary encodings of the scheme objects.

Every payload starts with a format version byte and a kind byte; variable
length fields are prefixed with a 32-bit big-endian length.
"""

import struct
from functools import wraps
from typing import Callable, List

from fuzzy import Identity
from pairing import G, GT, InvalidArgumentError, InvalidConfigError, PairingGroup, RecordFormatError
from pairing import group_from_descriptor

from .scheme import AttributeSet, Binding, Ciphertext, KeyShare, MasterKey, PublicParams, SecretKey

FORMAT_VERSION = 1

KIND_PUBLIC_PARAMS = 0x01
KIND_MASTER_KEY = 0x02
KIND_SECRET_KEY = 0x03
KIND_CIPHERTEXT = 0x04
KIND_ATTRIBUTE_SET = 0x05

_BINDINGS = {Binding.IDENTITY: 0, Binding.ATTRIBUTES_AND_IDENTITY: 1}


class _Writer:
    def __init__(self, kind: int):
        self.parts: List[bytes] = [bytes([FORMAT_VERSION, kind])]

    def u8(self, value: int):
        self.parts.append(struct.pack(">B", value))

    def u32(self, value: int):
        self.parts.append(struct.pack(">I", value))

    def blob(self, data: bytes):
        self.u32(len(data))
        self.parts.append(data)

    def text(self, value: str):
        self.blob(value.encode("utf-8"))

    def getvalue(self) -> bytes:
        return b"".join(self.parts)


class _Reader:
    def __init__(self, data: bytes, kind: int):
        self.data = data
        self.pos = 0
        version, found = self._take(2)
        if version != FORMAT_VERSION:
            raise RecordFormatError(f"Unsupported payload version {version}")
        if found != kind:
            raise RecordFormatError(f"Payload kind {found:#04x} where {kind:#04x} was expected")

    def _take(self, size: int) -> bytes:
        if self.pos + size > len(self.data):
            raise RecordFormatError("Payload is truncated")
        chunk = self.data[self.pos:self.pos + size]
        self.pos += size
        return chunk

    def u8(self) -> int:
        return self._take(1)[0]

    def u32(self) -> int:
        return struct.unpack(">I", self._take(4))[0]

    def blob(self) -> bytes:
        return self._take(self.u32())

    def text(self) -> str:
        try:
            return self.blob().decode("utf-8")
        except UnicodeDecodeError:
            raise RecordFormatError("Payload text field is not UTF-8")

    def done(self):
        if self.pos != len(self.data):
            raise RecordFormatError(f"{len(self.data) - self.pos} trailing bytes in payload")


def _decoding(fn: Callable):
    """Report element and value errors from a decoder as format errors."""
    @wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except RecordFormatError:
            raise
        except (InvalidArgumentError, InvalidConfigError) as e:
            raise RecordFormatError(f"Invalid payload: {e.detail}")
        except (KeyError, ValueError) as e:
            raise RecordFormatError(f"Invalid payload: {e}")
    return wrapper


def _read_attributes(group: PairingGroup, data: bytes) -> AttributeSet:
    if len(data) < 2:
        raise RecordFormatError("Attribute set is truncated")
    count = int.from_bytes(data[:2], "big")
    width = group.scalar_width
    if len(data) != 2 + count * width:
        raise RecordFormatError(f"Attribute set of {count} entries has the wrong length")
    return AttributeSet(tuple(group.decode_scalar(data[2 + i * width:2 + (i + 1) * width]) for i in range(count)))


def _binding_from_code(code: int) -> Binding:
    for binding, value in _BINDINGS.items():
        if value == code:
            return binding
    raise RecordFormatError(f"Unknown binding code {code}")


def encode_attribute_set(w: AttributeSet) -> bytes:
    writer = _Writer(KIND_ATTRIBUTE_SET)
    writer.blob(w.to_bytes())
    return writer.getvalue()


@_decoding
def decode_attribute_set(group: PairingGroup, data: bytes) -> AttributeSet:
    reader = _Reader(data, KIND_ATTRIBUTE_SET)
    w = _read_attributes(group, reader.blob())
    reader.done()
    return w


def encode_public_params(pp: PublicParams) -> bytes:
    descriptor = pp.group.descriptor()
    writer = _Writer(KIND_PUBLIC_PARAMS)
    writer.text(descriptor["backend"])
    writer.text(descriptor["name"])
    writer.blob(descriptor["prime"].to_bytes((descriptor["prime"].bit_length() + 7) // 8, "big"))
    for element in (pp.g, pp.g1, pp.g2):
        writer.blob(element.to_bytes())
    writer.u32(pp.d)
    writer.u32(pp.n)
    writer.u32(pp.template_bits)
    writer.u32(pp.correction_radius)
    writer.u8(_BINDINGS[pp.binding])
    writer.text(pp.hash_suite)
    return writer.getvalue()


@_decoding
def decode_public_params(data: bytes) -> PublicParams:
    reader = _Reader(data, KIND_PUBLIC_PARAMS)
    backend = reader.text()
    name = reader.text()
    group = group_from_descriptor(backend, int.from_bytes(reader.blob(), "big"), name)
    g, g1, g2 = (group.decode_element(G, reader.blob()) for _ in range(3))
    pp = PublicParams(group=group, g=g, g1=g1, g2=g2, d=reader.u32(), n=reader.u32(),
                      template_bits=reader.u32(), correction_radius=reader.u32(),
                      binding=_binding_from_code(reader.u8()), hash_suite=reader.text())
    reader.done()
    return pp


def encode_master_key(group: PairingGroup, msk: MasterKey) -> bytes:
    writer = _Writer(KIND_MASTER_KEY)
    writer.blob(group.encode_scalar(msk.s))
    return writer.getvalue()


@_decoding
def decode_master_key(group: PairingGroup, data: bytes) -> MasterKey:
    reader = _Reader(data, KIND_MASTER_KEY)
    msk = MasterKey(group.decode_scalar(reader.blob()))
    reader.done()
    return msk


def encode_secret_key(group: PairingGroup, sk: SecretKey) -> bytes:
    writer = _Writer(KIND_SECRET_KEY)
    writer.blob(sk.attributes.to_bytes())
    writer.blob(sk.identity.id_bytes)
    writer.u8(_BINDINGS[sk.binding])
    for _, share in sk.entries:
        writer.blob(share.d1.to_bytes())
        writer.blob(share.d2.to_bytes())
    return writer.getvalue()


@_decoding
def decode_secret_key(group: PairingGroup, data: bytes) -> SecretKey:
    reader = _Reader(data, KIND_SECRET_KEY)
    attributes = _read_attributes(group, reader.blob())
    identity = Identity(reader.blob())
    binding = _binding_from_code(reader.u8())
    entries = []
    for mu in attributes:
        d1 = group.decode_element(G, reader.blob())
        d2 = group.decode_element(G, reader.blob())
        entries.append((mu, KeyShare(d1, d2)))
    reader.done()
    return SecretKey(attributes, tuple(entries), identity, binding)


def encode_ciphertext(group: PairingGroup, ct: Ciphertext) -> bytes:
    writer = _Writer(KIND_CIPHERTEXT)
    writer.blob(ct.w_prime.to_bytes())
    writer.blob(ct.c1.to_bytes())
    writer.blob(ct.c2.to_bytes())
    writer.blob(ct.c3.to_bytes())
    return writer.getvalue()


@_decoding
def decode_ciphertext(group: PairingGroup, data: bytes) -> Ciphertext:
    reader = _Reader(data, KIND_CIPHERTEXT)
    w_prime = _read_attributes(group, reader.blob())
    c1 = group.decode_element(G, reader.blob())
    c2 = group.decode_element(G, reader.blob())
    c3 = group.decode_element(GT, reader.blob())
    reader.done()
    return Ciphertext(w_prime, c1, c2, c3)
