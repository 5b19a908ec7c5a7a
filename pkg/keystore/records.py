"""
On-disk record envelope: a JSON object with the role, a format version, the
canonical payload as hex, and optional metadata.
"""

import json
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Union

from bioibe import (MasterKey, PublicParams, SecretKey, decode_master_key, decode_public_params, decode_secret_key,
                    encode_master_key, encode_public_params, encode_secret_key)
from fuzzy import SketchPar
from pairing import PairingGroup, RecordFormatError

from .hybrid import MODE_HYBRID, SealedMessage, decode_sealed, encode_sealed

RECORD_VERSION = 1

ROLE_PUBLIC_PARAMS = "public-params"
ROLE_MASTER_KEY = "master-key"
ROLE_SECRET_KEY = "secret-key"
ROLE_SKETCH_PAR = "sketch-par"
ROLE_CIPHERTEXT = "ciphertext"
ROLES = (ROLE_PUBLIC_PARAMS, ROLE_MASTER_KEY, ROLE_SECRET_KEY, ROLE_SKETCH_PAR, ROLE_CIPHERTEXT)

logger = logging.getLogger("keystore.records")


@dataclass(frozen=True)
class KeyStoreRecord:
    role: str
    payload: bytes
    version: int = RECORD_VERSION
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.role not in ROLES:
            raise RecordFormatError(f"Unknown record role {self.role}")
        if self.version != RECORD_VERSION:
            raise RecordFormatError(f"Unsupported record version {self.version}")

    def to_json(self) -> str:
        return json.dumps({
            "role": self.role,
            "version": self.version,
            "payload": self.payload.hex(),
            "metadata": self.metadata,
        }, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: Union[str, bytes]) -> "KeyStoreRecord":
        try:
            if isinstance(text, bytes):
                text = text.decode("utf-8")
            data = json.loads(text)
            return cls(role=data["role"], payload=bytes.fromhex(data["payload"]),
                       version=data["version"], metadata=data.get("metadata") or {})
        except RecordFormatError:
            raise
        except (json.JSONDecodeError, UnicodeDecodeError, KeyError, TypeError, ValueError) as e:
            raise RecordFormatError(f"Malformed record: {e}")


def write_record(path: str, record: KeyStoreRecord, force: bool = False, private: bool = False):
    """Write a record; private records are created with mode 0600."""
    if os.path.exists(path) and not force:
        raise FileExistsError(f"{path} already exists (use --force to overwrite)")
    fd = os.open(path, os.O_WRONLY | os.O_CREAT | os.O_TRUNC, 0o600 if private else 0o644)
    with os.fdopen(fd, "w", encoding="utf-8") as f:
        f.write(record.to_json())
    if private:
        os.chmod(path, 0o600)
    logger.debug(f"Wrote {record.role} record to {path}")


def read_record(path: str, role: str) -> KeyStoreRecord:
    with open(path, "rb") as f:
        record = KeyStoreRecord.from_json(f.read())
    if record.role != role:
        raise RecordFormatError(f"{path} holds a {record.role} record, expected {role}")
    return record


def _metadata(seed: Optional[int]) -> Dict[str, Any]:
    return {} if seed is None else {"seed": seed}


def save_public_params(path: str, pp: PublicParams, seed: Optional[int] = None, force: bool = False):
    write_record(path, KeyStoreRecord(ROLE_PUBLIC_PARAMS, encode_public_params(pp), metadata=_metadata(seed)),
                 force=force)


def load_public_params(path: str) -> PublicParams:
    return decode_public_params(read_record(path, ROLE_PUBLIC_PARAMS).payload)


def save_master_key(path: str, pp: PublicParams, msk: MasterKey, seed: Optional[int] = None, force: bool = False):
    write_record(path, KeyStoreRecord(ROLE_MASTER_KEY, encode_master_key(pp.group, msk), metadata=_metadata(seed)),
                 force=force, private=True)


def load_master_key(path: str, group: PairingGroup) -> MasterKey:
    return decode_master_key(group, read_record(path, ROLE_MASTER_KEY).payload)


def save_secret_key(path: str, pp: PublicParams, sk: SecretKey, seed: Optional[int] = None, force: bool = False):
    write_record(path, KeyStoreRecord(ROLE_SECRET_KEY, encode_secret_key(pp.group, sk), metadata=_metadata(seed)),
                 force=force, private=True)


def load_secret_key(path: str, group: PairingGroup) -> SecretKey:
    return decode_secret_key(group, read_record(path, ROLE_SECRET_KEY).payload)


def save_sketch(path: str, par: SketchPar, seed: Optional[int] = None, force: bool = False):
    write_record(path, KeyStoreRecord(ROLE_SKETCH_PAR, par.to_bytes(), metadata=_metadata(seed)), force=force)


def load_sketch(path: str) -> SketchPar:
    return SketchPar.from_bytes(read_record(path, ROLE_SKETCH_PAR).payload)


def save_ciphertext(path: str, pp: PublicParams, sealed: SealedMessage, seed: Optional[int] = None,
                    force: bool = False):
    metadata = _metadata(seed)
    metadata["mode"] = "hybrid" if sealed.mode == MODE_HYBRID else "raw"
    write_record(path, KeyStoreRecord(ROLE_CIPHERTEXT, encode_sealed(pp.group, sealed), metadata=metadata),
                 force=force)


def load_ciphertext(path: str, group: PairingGroup) -> SealedMessage:
    return decode_sealed(group, read_record(path, ROLE_CIPHERTEXT).payload)
