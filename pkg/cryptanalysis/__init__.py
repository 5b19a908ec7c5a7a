"""
Chosen-plaintext break of the scheme and the IND-sID-CPA game that demonstrates it.
"""

from .attack import AttackTranscript, strip_identity_component, universal_decrypt
from .game import (Adversary, Challenger, GameResult, PaperAdversary, RandomAdversary, TrialRecord, paper_adversary,
                   play_trial, run_ind_sid_cpa_game, sweep_overlaps)

__all__ = ['AttackTranscript', 'strip_identity_component', 'universal_decrypt', 'Adversary', 'Challenger',
           'GameResult', 'PaperAdversary', 'RandomAdversary', 'TrialRecord', 'paper_adversary', 'play_trial',
           'run_ind_sid_cpa_game', 'sweep_overlaps']
