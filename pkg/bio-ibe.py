#!/usr/bin/env python3
"""
Entry script for the biometric IBE toolkit.

    python bio-ibe.py setup --n 8 --d 4 --seed 42
    python bio-ibe.py extract --pp pp.json --msk msk.json --attrs 1,2,3,4,5,6,7,8
    python bio-ibe.py game --adversary paper --trials 100
"""

import sys

from bioibe.cli import main

if __name__ == "__main__":
    sys.exit(main())
