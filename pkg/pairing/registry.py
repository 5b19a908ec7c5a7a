"""
Registry of named pairing groups loaded from config.json.
"""

import json
import logging
import os
from pathlib import Path
from typing import Dict, Optional

from .errors import InvalidConfigError
from .pairing_group import PairingGroup
from .transparent_group import BACKEND as TRANSPARENT, TransparentGroup

DEFAULT_CONFIG_FILE = Path(__file__).resolve().parent.parent / "config.json"
DEFAULT_GROUP = "secp256r1-order"

# Global dictionary of groups
groups: Dict[str, PairingGroup] = dict()

logger = logging.getLogger("pairing.registry")


def _parse_prime(value) -> int:
    if isinstance(value, int):
        return value
    text = str(value).strip().lower()
    try:
        return int(text, 16) if text.startswith("0x") else int(text)
    except ValueError:
        raise InvalidConfigError(f"Invalid prime {value!r} in group config")


def group_from_descriptor(backend: str, prime: int, name: Optional[str] = None) -> PairingGroup:
    """Build a group from its backend name and order."""
    backend = (backend or TRANSPARENT).lower()
    if backend == TRANSPARENT:
        return TransparentGroup(p=prime, name=name or f"{TRANSPARENT}-{prime.bit_length()}")
    raise InvalidConfigError(f"Pairing backend {backend} is not available")


def load_groups(config_file: Optional[str] = None) -> Dict[str, PairingGroup]:
    global groups
    config_file = config_file or os.getenv("BIOIBE_GROUPS_FILE") or DEFAULT_CONFIG_FILE
    try:
        with open(config_file, 'rb') as f:
            data = json.loads(f.read().decode("utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as e:
        raise InvalidConfigError(f"Could not read group config {config_file}: {e}")
    if not isinstance(data, dict) or not all(isinstance(v, dict) for v in data.values()):
        raise InvalidConfigError(f"Group config {config_file} must map group names to objects")

    for group_name, config_data in data.items():
        groups[group_name] = group_from_descriptor(
            backend=config_data.get("backend", TRANSPARENT),
            prime=_parse_prime(config_data.get("prime")),
            name=group_name,
        )
        logger.debug(f"Loaded group {group_name} ({config_data.get('name', group_name)})")
    return groups


def get_group(name: str = DEFAULT_GROUP) -> PairingGroup:
    """Returns the group registered under name, loading the default config on first use."""
    if not groups:
        load_groups()
    if name in groups:
        return groups[name]
    raise InvalidConfigError(f"Group {name} not configured; known groups: {', '.join(sorted(groups))}")
