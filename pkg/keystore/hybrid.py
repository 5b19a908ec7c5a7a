"""
Hybrid wrapper for byte payloads.

A random element K of G_T is encrypted with the scheme; HKDF-SHA256 over the
encoding of K yields an AES-256-GCM key for the payload, and the scheme
ciphertext is bound in as associated data. Raw mode carries only the scheme
ciphertext of a G_T message.
"""

import struct
from dataclasses import dataclass

from cryptography.hazmat.primitives import hashes
from cryptography.hazmat.primitives.ciphers.aead import AESGCM
from cryptography.hazmat.primitives.kdf.hkdf import HKDF

from bioibe import AttributeSet, Ciphertext, PublicParams, decode_ciphertext, encode_ciphertext, encrypt
from fuzzy import SketchPar
from pairing import GtElem, PairingGroup, RecordFormatError

MODE_RAW = 0
MODE_HYBRID = 1

NONCE_BYTES = 12
_KDF_INFO = b"bio-ibe-hybrid-aes256gcm-v1"


@dataclass(frozen=True)
class SealedMessage:
    mode: int
    ciphertext: Ciphertext
    nonce: bytes = b""
    body: bytes = b""


def derive_key(shared: GtElem) -> bytes:
    hkdf = HKDF(algorithm=hashes.SHA256(), length=32, salt=None, info=_KDF_INFO)
    return hkdf.derive(shared.to_bytes())


def derive_nonce(salt: bytes, payload: bytes) -> bytes:
    """SHA-256(salt || payload) truncated to the GCM nonce size."""
    digest = hashes.Hash(hashes.SHA256())
    digest.update(salt)
    digest.update(payload)
    return digest.finalize()[:NONCE_BYTES]


def seal_raw(pp: PublicParams, m: GtElem, w_prime: AttributeSet, par: SketchPar, rng) -> SealedMessage:
    return SealedMessage(MODE_RAW, encrypt(pp, m, w_prime, par, rng))


def seal(pp: PublicParams, payload: bytes, w_prime: AttributeSet, par: SketchPar, rng) -> SealedMessage:
    shared = pp.group.random_gt(rng)
    ct = encrypt(pp, shared, w_prime, par, rng)
    # distinct per payload even when a seeded rng repeats the key
    nonce = derive_nonce(rng.randbytes(32), payload)
    body = AESGCM(derive_key(shared)).encrypt(nonce, payload, encode_ciphertext(pp.group, ct))
    return SealedMessage(MODE_HYBRID, ct, nonce, body)


def open_sealed(pp: PublicParams, sealed: SealedMessage, shared: GtElem) -> bytes:
    """Payload under the recovered G_T element; raises cryptography's InvalidTag on a wrong key."""
    if sealed.mode != MODE_HYBRID:
        raise RecordFormatError("Raw ciphertexts carry no byte payload")
    aad = encode_ciphertext(pp.group, sealed.ciphertext)
    return AESGCM(derive_key(shared)).decrypt(sealed.nonce, sealed.body, aad)


def encode_sealed(group: PairingGroup, sealed: SealedMessage) -> bytes:
    ct = encode_ciphertext(group, sealed.ciphertext)
    data = bytes([sealed.mode]) + struct.pack(">I", len(ct)) + ct
    if sealed.mode == MODE_HYBRID:
        data += sealed.nonce + sealed.body
    return data


def decode_sealed(group: PairingGroup, data: bytes) -> SealedMessage:
    if len(data) < 5:
        raise RecordFormatError("Sealed message is truncated")
    mode = data[0]
    (length,) = struct.unpack(">I", data[1:5])
    if len(data) < 5 + length:
        raise RecordFormatError("Sealed message ciphertext is truncated")
    ct = decode_ciphertext(group, data[5:5 + length])
    rest = data[5 + length:]
    if mode == MODE_RAW:
        if rest:
            raise RecordFormatError("Raw ciphertext record has trailing bytes")
        return SealedMessage(MODE_RAW, ct)
    if mode == MODE_HYBRID:
        if len(rest) < NONCE_BYTES + 16:
            raise RecordFormatError("Hybrid body is shorter than nonce and tag")
        return SealedMessage(MODE_HYBRID, ct, rest[:NONCE_BYTES], rest[NONCE_BYTES:])
    raise RecordFormatError(f"Unknown ciphertext mode {mode}")
