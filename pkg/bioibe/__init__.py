"""
Biometric identity-based encryption scheme and its canonical encodings.
"""

from .encoding import (decode_attribute_set, decode_ciphertext, decode_master_key, decode_public_params,
                       decode_secret_key, encode_attribute_set, encode_ciphertext, encode_master_key,
                       encode_public_params, encode_secret_key)
from .scheme import (AttributeSet, Binding, Ciphertext, KeyShare, MasterKey, PublicParams, SchemeConfig, SecretKey,
                     binding_hash, check_ciphertext, check_public_params, check_secret_key, decrypt, encrypt,
                     extract, hash_to_scalar_h1, recover_identity, select_subset, setup)

__all__ = [
    'decode_attribute_set', 'decode_ciphertext', 'decode_master_key', 'decode_public_params', 'decode_secret_key',
    'encode_attribute_set', 'encode_ciphertext', 'encode_master_key', 'encode_public_params', 'encode_secret_key',
    'AttributeSet', 'Binding', 'Ciphertext', 'KeyShare', 'MasterKey', 'PublicParams', 'SchemeConfig', 'SecretKey',
    'binding_hash', 'check_ciphertext', 'check_public_params', 'check_secret_key', 'decrypt', 'encrypt', 'extract',
    'hash_to_scalar_h1', 'recover_identity', 'select_subset', 'setup',
]
