"""
Universal decryption: any honestly extracted key opens ciphertexts for any
attribute set, whatever its overlap with the key's attributes.

For every share the key holder strips the identity component,
u_i = d_{i,1} / d_{i,2}^h = g1^q(mu_i), and then
c3 / prod e(c1, u_i)^Delta_{mu_i,S}(0) = m.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from bioibe import AttributeSet, Ciphertext, PublicParams, SecretKey, binding_hash, recover_identity, select_subset
from fuzzy import SketchPar
from pairing import GElem, GtElem, InsufficientSharesError, Scalar, lagrange_coeff

logger = logging.getLogger("cryptanalysis.attack")


@dataclass(frozen=True)
class AttackTranscript:
    target_w_prime: AttributeSet
    queried_w: AttributeSet
    recovered: GtElem
    chosen_S: Tuple[Scalar, ...]
    intermediate: Tuple[Tuple[Scalar, GElem], ...]
    threshold: int

    @property
    def overlap(self) -> int:
        return len(self.queried_w.intersection(self.target_w_prime))

    @property
    def below_threshold(self) -> bool:
        """True when an honest decryptor would have refused this ciphertext."""
        return self.overlap < self.threshold

    def to_report(self) -> Dict[str, Any]:
        return {
            "target_w_prime": self.target_w_prime.values(),
            "queried_w": self.queried_w.values(),
            "overlap": self.overlap,
            "threshold": self.threshold,
            "below_threshold": self.below_threshold,
            "chosen_S": [mu.value for mu in self.chosen_S],
            "intermediate": {str(mu.value): u.to_bytes().hex() for mu, u in self.intermediate},
            "recovered": self.recovered.to_bytes().hex(),
        }


def strip_identity_component(pp: PublicParams, sk: SecretKey,
                             par: Optional[SketchPar] = None) -> List[Tuple[Scalar, GElem]]:
    """u_i = d_{i,1} / d_{i,2}^h for every share of the key.

    With par, the key holder re-derives its own ID from its attributes
    instead of trusting the identity stored with the key.
    """
    identity = sk.identity
    if par is not None:
        identity = recover_identity(pp, sk.attributes, par)
        if identity != sk.identity:
            logger.warning("Identity re-derived from the sketch differs from the one stored with the key")
    h = binding_hash(pp, identity, sk.attributes, sk.binding)
    return [(mu, share.d1 / share.d2 ** h) for mu, share in sk.entries]


def universal_decrypt(pp: PublicParams, sk: SecretKey, ct: Ciphertext,
                      par: Optional[SketchPar] = None) -> Tuple[GtElem, AttackTranscript]:
    if len(sk.entries) < pp.d:
        raise InsufficientSharesError(len(sk.entries), pp.d)
    stripped = strip_identity_component(pp, sk, par)
    S = select_subset([mu for mu, _ in stripped], pp.d)
    u = dict(stripped)
    denominator = pp.group.identity_gt()
    for mu in S:
        denominator = denominator * pp.group.pair(ct.c1, u[mu]) ** lagrange_coeff(mu, S, 0)
    recovered = ct.c3 / denominator
    transcript = AttackTranscript(target_w_prime=ct.w_prime, queried_w=sk.attributes, recovered=recovered,
                                  chosen_S=tuple(S), intermediate=tuple(stripped), threshold=pp.d)
    logger.debug(f"Universal decrypt - overlap {transcript.overlap} of threshold {pp.d}, "
                 f"S = {[mu.value for mu in S]}")
    return recovered, transcript
