"""
Fuzzy extractor (Gen/Rep) over Hamming-metric biometric templates.
"""

from .fuzzy_extractor import (DEFAULT_TEMPLATE_BITS, IDENTITY_BYTES, BiometricTemplate, FuzzyExtractor, Identity,
                              SketchPar, hamming_distance)

__all__ = ['DEFAULT_TEMPLATE_BITS', 'IDENTITY_BYTES', 'BiometricTemplate', 'FuzzyExtractor', 'Identity',
           'SketchPar', 'hamming_distance']
