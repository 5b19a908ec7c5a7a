"""
On-disk records for the command-line tool, and the hybrid payload wrapper.
"""

from .hybrid import (MODE_HYBRID, MODE_RAW, SealedMessage, decode_sealed, derive_key, encode_sealed, open_sealed, seal,
                     seal_raw)
from .records import (RECORD_VERSION, ROLES, KeyStoreRecord, load_ciphertext, load_master_key, load_public_params,
                      load_secret_key, load_sketch, read_record, save_ciphertext, save_master_key,
                      save_public_params, save_secret_key, save_sketch, write_record)

__all__ = ['MODE_HYBRID', 'MODE_RAW', 'SealedMessage', 'decode_sealed', 'derive_key', 'encode_sealed', 'open_sealed',
           'seal', 'seal_raw', 'RECORD_VERSION', 'ROLES', 'KeyStoreRecord', 'load_ciphertext', 'load_master_key',
           'load_public_params', 'load_secret_key', 'load_sketch', 'read_record', 'save_ciphertext',
           'save_master_key', 'save_public_params', 'save_secret_key', 'save_sketch', 'write_record']
