"""
IND-sID-CPA game between a challenger and an adversary.

Init (adversary commits to w'), Setup, Phase 1 key queries restricted to
|w' n w_i| < d, Challenge on two messages, Phase 2 queries, Guess.
"""

import logging
import random
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, Optional, Tuple

from bioibe import AttributeSet, Ciphertext, PublicParams, SchemeConfig, SecretKey, encrypt, extract, setup
from fuzzy import SketchPar
from pairing import GtElem, InvalidArgumentError, PairingGroup, QueryRejectedError

from .attack import AttackTranscript, universal_decrypt

ExtractOracle = Callable[[AttributeSet], Tuple[SecretKey, SketchPar]]


class Adversary(ABC):
    """Five-phase adversary. Subclasses set self.recovered if they recover the plaintext."""

    def __init__(self, rng):
        self.rng = rng
        self.pp: Optional[PublicParams] = None
        self.target_par: Optional[SketchPar] = None
        self.recovered: Optional[GtElem] = None
        self.logger = logging.getLogger(f"cryptanalysis.{type(self).__name__}")

    @abstractmethod
    def init(self, group: PairingGroup, n: int) -> AttributeSet:
        """Commit to the target attribute set w'."""

    def setup(self, pp: PublicParams, target_par: SketchPar):
        self.pp = pp
        self.target_par = target_par

    def phase1(self, extract_oracle: ExtractOracle):
        pass

    @abstractmethod
    def challenge(self) -> Tuple[GtElem, GtElem]: ...

    def phase2(self, extract_oracle: ExtractOracle):
        pass

    @abstractmethod
    def guess(self, ct: Ciphertext) -> int: ...

    def _distinct_messages(self) -> Tuple[GtElem, GtElem]:
        m0 = self.pp.group.random_gt(self.rng)
        m1 = self.pp.group.random_gt(self.rng)
        while m1 == m0:
            m1 = self.pp.group.random_gt(self.rng)
        return m0, m1


class RandomAdversary(Adversary):
    """Baseline: no queries, uniform guess."""

    def init(self, group: PairingGroup, n: int) -> AttributeSet:
        return AttributeSet.random(group, n, self.rng)

    def challenge(self) -> Tuple[GtElem, GtElem]:
        return self._distinct_messages()

    def guess(self, ct: Ciphertext) -> int:
        return self.rng.randrange(2)


class PaperAdversary(Adversary):
    """One key query below the threshold, then universal decryption of the challenge."""

    def __init__(self, rng, overlap: int = 0):
        super().__init__(rng)
        self.overlap = overlap
        self.target: Optional[AttributeSet] = None
        self.key: Optional[SecretKey] = None
        self.key_par: Optional[SketchPar] = None
        self.messages: Optional[Tuple[GtElem, GtElem]] = None
        self.transcript: Optional[AttackTranscript] = None

    def init(self, group: PairingGroup, n: int) -> AttributeSet:
        if not 0 <= self.overlap < n:
            raise InvalidArgumentError(f"Overlap {self.overlap} must lie in [0, {n})")
        self.target = AttributeSet.random(group, n, self.rng)
        return self.target

    def setup(self, pp: PublicParams, target_par: SketchPar):
        if self.overlap >= pp.d:
            raise InvalidArgumentError(f"Overlap {self.overlap} would make the key query inadmissible (d={pp.d})")
        super().setup(pp, target_par)

    def query_set(self) -> AttributeSet:
        shared = self.rng.sample(list(self.target), self.overlap)
        fresh = AttributeSet.random(self.pp.group, len(self.target) - self.overlap, self.rng,
                                    exclude=self.target.attrs)
        return AttributeSet(tuple(shared) + fresh.attrs)

    def phase1(self, extract_oracle: ExtractOracle):
        self.key, self.key_par = extract_oracle(self.query_set())

    def challenge(self) -> Tuple[GtElem, GtElem]:
        self.messages = self._distinct_messages()
        return self.messages

    def guess(self, ct: Ciphertext) -> int:
        if self.key is None:
            self.logger.warning("No key was issued; guessing at random")
            return self.rng.randrange(2)
        self.recovered, self.transcript = universal_decrypt(self.pp, self.key, ct, self.key_par)
        if self.recovered not in self.messages:
            self.logger.warning("Recovered plaintext matches neither challenge message")
        return 0 if self.recovered == self.messages[0] else 1


def paper_adversary(rng=None, overlap: int = 0) -> PaperAdversary:
    return PaperAdversary(rng or random.SystemRandom(), overlap=overlap)


class Challenger:
    def __init__(self, config: SchemeConfig, rng):
        self.config = config
        self.rng = rng
        self.pp: Optional[PublicParams] = None
        self.target: Optional[AttributeSet] = None
        self.target_par: Optional[SketchPar] = None
        self.b: Optional[int] = None
        self.message: Optional[GtElem] = None
        self.issued = 0
        self.rejected = 0
        self._msk = None
        self.logger = logging.getLogger("cryptanalysis.challenger")

    def commit(self, w_prime: AttributeSet):
        if len(w_prime) != self.config.n:
            raise InvalidArgumentError(f"Target has {len(w_prime)} attributes, the system uses n={self.config.n}")
        self.target = w_prime

    def run_setup(self) -> Tuple[PublicParams, SketchPar]:
        """Setup, then register the target identity so its PAR is published."""
        self.pp, self._msk = setup(self.rng, self.config)
        _, self.target_par = extract(self.pp, self._msk, self.target, self.rng)
        return self.pp, self.target_par

    def extract_query(self, w: AttributeSet) -> Tuple[SecretKey, SketchPar]:
        overlap = len(w.intersection(self.target))
        if overlap >= self.pp.d:
            self.rejected += 1
            self.logger.warning(f"Rejected key query with overlap {overlap} >= d={self.pp.d}")
            raise QueryRejectedError(f"Key query overlaps the target in {overlap} attributes (d={self.pp.d})")
        self.issued += 1
        return extract(self.pp, self._msk, w, self.rng)

    def challenge(self, m0: GtElem, m1: GtElem) -> Ciphertext:
        for m in (m0, m1):
            if not isinstance(m, GtElem) or m.group != self.pp.group:
                raise InvalidArgumentError("Challenge messages must be elements of G_T")
        self.b = self.rng.randrange(2)
        self.message = (m0, m1)[self.b]
        return encrypt(self.pp, self.message, self.target, self.target_par, self.rng)


@dataclass(frozen=True)
class TrialRecord:
    b: int
    guess: int
    recovered_matches: Optional[bool]
    rejected_queries: int = 0

    @property
    def won(self) -> bool:
        return self.b == self.guess


@dataclass(frozen=True)
class GameResult:
    trials: int
    wins: int
    records: Tuple[TrialRecord, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if not 0 <= self.wins <= self.trials:
            raise InvalidArgumentError(f"wins={self.wins} must lie in [0, trials={self.trials}]")

    @property
    def advantage(self) -> Fraction:
        if self.trials == 0:
            return Fraction(0)
        return abs(Fraction(self.wins, self.trials) - Fraction(1, 2))

    def to_report(self) -> Dict[str, Any]:
        return {
            "trials": self.trials,
            "wins": self.wins,
            "advantage": float(self.advantage),
            "advantage_exact": str(self.advantage),
            "rejected_queries": sum(r.rejected_queries for r in self.records),
            "per_trial": [{"b": r.b, "b_prime": r.guess, "recovered_equals_m_b": r.recovered_matches}
                          for r in self.records],
        }


def _run_phase(challenger: Challenger, phase: Callable[[ExtractOracle], None]):
    try:
        phase(challenger.extract_query)
    except QueryRejectedError as e:
        challenger.logger.info(f"Adversary phase ended on a rejected query: {e.detail}")


def play_trial(adversary_factory: Callable[[Any], Adversary], config: SchemeConfig,
               challenger_seed: int, adversary_seed: int) -> TrialRecord:
    challenger = Challenger(config, random.Random(challenger_seed))
    adversary = adversary_factory(random.Random(adversary_seed))

    challenger.commit(adversary.init(config.group, config.n))
    adversary.setup(*challenger.run_setup())
    _run_phase(challenger, adversary.phase1)
    m0, m1 = adversary.challenge()
    ct = challenger.challenge(m0, m1)
    _run_phase(challenger, adversary.phase2)
    guess = adversary.guess(ct)
    if guess not in (0, 1):
        raise InvalidArgumentError(f"Adversary guessed {guess!r}, expected 0 or 1")

    recovered_matches = None if adversary.recovered is None else adversary.recovered == challenger.message
    return TrialRecord(b=challenger.b, guess=guess, recovered_matches=recovered_matches,
                       rejected_queries=challenger.rejected)


def run_ind_sid_cpa_game(adversary_factory: Callable[[Any], Adversary], trials: int, rng,
                         config: SchemeConfig, workers: int = 1) -> GameResult:
    """Play `trials` independent games.

    Per-trial seeds are drawn from rng before any trial runs, so the result
    does not depend on the number of workers.
    """
    if trials < 0:
        raise InvalidArgumentError(f"trials must be non-negative, got {trials}")
    config.validate()
    seeds = [(rng.getrandbits(64), rng.getrandbits(64)) for _ in range(trials)]

    def play(seed_pair):
        return play_trial(adversary_factory, config, *seed_pair)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = tuple(pool.map(play, seeds))
    else:
        records = tuple(play(s) for s in seeds)

    wins = sum(1 for r in records if r.won)
    logging.getLogger("cryptanalysis.game").info(f"Game - trials: {trials} wins: {wins}")
    return GameResult(trials=trials, wins=wins, records=records)


def sweep_overlaps(config: SchemeConfig, trials: int, rng, workers: int = 1) -> Dict[int, GameResult]:
    """Attacking adversary at every admissible overlap 0..d-1."""
    results = {}
    for overlap in range(config.d):
        results[overlap] = run_ind_sid_cpa_game(lambda r, o=overlap: PaperAdversary(r, overlap=o),
                                                trials, rng, config, workers)
    return results
