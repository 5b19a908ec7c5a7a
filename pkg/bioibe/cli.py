"""
Command-line surface: setup, extract, encrypt, decrypt, attack, game, verify.

Records are JSON envelopes (see keystore.records). Exit codes: 0 success,
2 argument or config error, 3 cryptographic refusal, 4 I/O error.
"""

import argparse
import json
import logging
import os
import random
import sys
from contextlib import contextmanager, suppress
from functools import partial
from typing import Dict, List, Optional

from cryptography.exceptions import InvalidTag
from dotenv import dotenv_values, load_dotenv

from cryptanalysis import PaperAdversary, RandomAdversary, run_ind_sid_cpa_game, universal_decrypt
from keystore import (MODE_HYBRID, load_ciphertext, load_master_key, load_public_params, load_secret_key,
                      load_sketch, open_sealed, save_ciphertext, save_master_key, save_public_params,
                      save_secret_key, save_sketch, seal, seal_raw)
from pairing import (DEFAULT_GROUP, BioIBEError, GtElem, InvalidArgumentError, InvalidConfigError, get_group,
                     load_groups)

from .scheme import (AttributeSet, Binding, PublicParams, SchemeConfig, check_ciphertext, check_public_params,
                     check_secret_key, decrypt, extract, setup)

load_dotenv()

CONFIG_KEYS = ("n", "d", "group", "template_bits", "correction_radius", "binding")
_INT_KEYS = ("n", "d", "template_bits", "correction_radius")

DEFAULTS = {"n": 8, "d": 4, "group": DEFAULT_GROUP, "template_bits": 256, "correction_radius": None,
            "binding": Binding.IDENTITY.value}

EXIT_OK = 0
EXIT_REFUSED = 3
EXIT_IO = 4

logger = logging.getLogger("bioibe.cli")


# ========== Audit Logger ==========
class AuditLogger:
    def __init__(self):
        self.logger = logging.getLogger("audit")

    def log_command(self, command: str, pp: Optional[PublicParams] = None, outputs: Optional[List[str]] = None):
        params = f" Group: {pp.group.name} n: {pp.n} d: {pp.d}" if pp is not None else ""
        written = f" Wrote: {', '.join(outputs)}" if outputs else ""
        self.logger.info(f"Command - {command}{params}{written}")


audit_logger = AuditLogger()


def configure_logging():
    level = os.getenv("BIOIBE_LOG_LEVEL", "WARNING").upper()
    logging.basicConfig(
        filename=os.getenv("BIOIBE_LOG_FILE") or None,
        level=getattr(logging, level, logging.WARNING),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    )


def make_rng(seed: Optional[int]):
    return random.Random(seed) if seed is not None else random.SystemRandom()


def parse_attributes(text: str) -> List[int]:
    """'3,17,42' -> [3, 17, 42]"""
    try:
        values = [int(part.strip(), 10) for part in text.split(",") if part.strip()]
    except ValueError:
        raise InvalidArgumentError(f"Attribute list {text!r} must be comma-separated decimal integers")
    if len(set(values)) != len(values):
        raise InvalidArgumentError(f"Attribute list {text!r} contains duplicates")
    return values


def read_config_file(path: Optional[str]) -> Dict[str, str]:
    if path is None:
        return {}
    if not os.path.isfile(path):
        raise InvalidConfigError(f"Config file {path} not found")
    try:
        parsed = dotenv_values(path, encoding="utf-8")
    except UnicodeDecodeError as e:
        raise InvalidConfigError(f"Config file {path} is not UTF-8 text: {e}")
    values = {key.lower(): value for key, value in parsed.items() if value is not None}
    unknown = sorted(set(values) - set(CONFIG_KEYS))
    if unknown:
        raise InvalidConfigError(f"Unknown config keys: {', '.join(unknown)}")
    return values


def resolve_config(args: argparse.Namespace) -> SchemeConfig:
    """Flags win over the config file, which wins over defaults."""
    file_values = read_config_file(getattr(args, "config", None))
    merged = {}
    for key in CONFIG_KEYS:
        flag = getattr(args, key, None)
        merged[key] = flag if flag is not None else file_values.get(key, DEFAULTS[key])
    for key in _INT_KEYS:
        if merged[key] is not None:
            try:
                merged[key] = int(merged[key])
            except (TypeError, ValueError):
                raise InvalidConfigError(f"{key} must be an integer, got {merged[key]!r}")
    try:
        binding = Binding(merged["binding"])
    except ValueError:
        raise InvalidConfigError(f"Unknown binding {merged['binding']!r}")
    config = SchemeConfig(group=get_group(merged["group"]), n=merged["n"], d=merged["d"],
                          template_bits=merged["template_bits"], correction_radius=merged["correction_radius"],
                          binding=binding)
    config.validate()
    return config


def write_output(path: str, data: bytes, force: bool):
    if os.path.exists(path) and not force:
        raise FileExistsError(f"{path} already exists (use --force to overwrite)")
    with open(path, "wb") as f:
        f.write(data)


def emit_payload(args: argparse.Namespace, data: bytes):
    if args.out:
        write_output(args.out, data, args.force)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def parse_gt(pp: PublicParams, text: str) -> GtElem:
    try:
        return pp.group.decode_gt(bytes.fromhex(text.strip()))
    except ValueError as e:
        if isinstance(e, BioIBEError):
            raise
        raise InvalidArgumentError(f"Invalid G_T element hex: {e}")


@contextmanager
def _removed_on_error(path: str):
    """Delete path if the block raises."""
    try:
        yield
    except Exception:
        with suppress(OSError):
            os.remove(path)
        logger.warning(f"Removed {path} after a failed write")
        raise


def cmd_setup(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    pp, msk = setup(make_rng(args.seed), config)
    for path in (args.pp, args.msk):
        if os.path.exists(path) and not args.force:
            raise FileExistsError(f"{path} already exists (use --force to overwrite)")
    save_public_params(args.pp, pp, seed=args.seed, force=args.force)
    with _removed_on_error(args.pp):
        save_master_key(args.msk, pp, msk, seed=args.seed, force=args.force)
    audit_logger.log_command("setup", pp, [args.pp, args.msk])
    return EXIT_OK


def cmd_extract(args: argparse.Namespace) -> int:
    pp = load_public_params(args.pp)
    msk = load_master_key(args.msk, pp.group)
    w = AttributeSet.of(pp.group, parse_attributes(args.attrs))
    sk, par = extract(pp, msk, w, make_rng(args.seed))
    for path in (args.sk, args.par):
        if os.path.exists(path) and not args.force:
            raise FileExistsError(f"{path} already exists (use --force to overwrite)")
    save_secret_key(args.sk, pp, sk, seed=args.seed, force=args.force)
    with _removed_on_error(args.sk):
        save_sketch(args.par, par, seed=args.seed, force=args.force)
    audit_logger.log_command("extract", pp, [args.sk, args.par])
    return EXIT_OK


def cmd_encrypt(args: argparse.Namespace) -> int:
    pp = load_public_params(args.pp)
    par = load_sketch(args.par)
    w_prime = AttributeSet.of(pp.group, parse_attributes(args.attrs))
    rng = make_rng(args.seed)
    if args.raw:
        if args.message is None:
            raise InvalidArgumentError("--raw needs --message with a G_T element in hex")
        sealed = seal_raw(pp, parse_gt(pp, args.message), w_prime, par, rng)
    else:
        if args.message is not None:
            payload = args.message.encode("utf-8")
        elif args.input:
            with open(args.input, "rb") as f:
                payload = f.read()
        else:
            payload = sys.stdin.buffer.read()
        sealed = seal(pp, payload, w_prime, par, rng)
    save_ciphertext(args.ct, pp, sealed, seed=args.seed, force=args.force)
    audit_logger.log_command("encrypt", pp, [args.ct])
    return EXIT_OK


def _release(args: argparse.Namespace, pp: PublicParams, sealed, recovered: GtElem):
    if sealed.mode == MODE_HYBRID:
        emit_payload(args, open_sealed(pp, sealed, recovered))
    else:
        emit_payload(args, (recovered.to_bytes().hex() + "\n").encode("ascii"))


def cmd_decrypt(args: argparse.Namespace) -> int:
    pp = load_public_params(args.pp)
    sk = load_secret_key(args.sk, pp.group)
    sealed = load_ciphertext(args.ct, pp.group)
    _release(args, pp, sealed, decrypt(pp, sk, sealed.ciphertext))
    audit_logger.log_command("decrypt", pp, [args.out] if args.out else None)
    return EXIT_OK


def cmd_attack(args: argparse.Namespace) -> int:
    pp = load_public_params(args.pp)
    sk = load_secret_key(args.sk, pp.group)
    sealed = load_ciphertext(args.ct, pp.group)
    par = load_sketch(args.sketch) if args.sketch else None
    recovered, transcript = universal_decrypt(pp, sk, sealed.ciphertext, par)
    report = json.dumps(transcript.to_report(), indent=2, sort_keys=True) + "\n"
    if args.transcript:
        write_output(args.transcript, report.encode("utf-8"), args.force)
    else:
        sys.stderr.write(report)
    _release(args, pp, sealed, recovered)
    audit_logger.log_command("attack", pp, [p for p in (args.out, args.transcript) if p])
    return EXIT_OK


def cmd_game(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    if args.trials < 0:
        raise InvalidArgumentError(f"--trials must be non-negative, got {args.trials}")
    if args.workers < 1:
        raise InvalidArgumentError(f"--workers must be positive, got {args.workers}")
    if args.adversary == "paper":
        if not 0 <= args.overlap < config.d:
            raise InvalidArgumentError(f"--overlap must lie in [0, d={config.d})")
        factory = partial(PaperAdversary, overlap=args.overlap)
    else:
        factory = RandomAdversary
    result = run_ind_sid_cpa_game(factory, args.trials, make_rng(args.seed), config, workers=args.workers)
    report = result.to_report()
    report.update({"adversary": args.adversary, "n": config.n, "d": config.d, "group": config.group.name})
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.report:
        write_output(args.report, text.encode("utf-8"), args.force)
    else:
        sys.stdout.write(text)
    logging.getLogger("audit").info(f"Command - game Adversary: {args.adversary} Trials: {args.trials} "
                                    f"Wins: {result.wins}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    pp = load_public_params(args.pp)
    problems = check_public_params(pp)
    checked = ["public parameters"]
    if args.sk:
        problems += check_secret_key(pp, load_secret_key(args.sk, pp.group))
        checked.append("secret key")
    if args.ct:
        if not args.par:
            raise InvalidArgumentError("--ct needs the receiver's --par to recompute the identity")
        problems += check_ciphertext(pp, load_ciphertext(args.ct, pp.group).ciphertext, load_sketch(args.par))
        checked.append("ciphertext")
    for problem in problems:
        print(f"FAIL: {problem}")
    if not problems:
        print(f"OK: {', '.join(checked)}")
    audit_logger.log_command("verify", pp)
    return EXIT_REFUSED if problems else EXIT_OK


def _add_scheme_options(p: argparse.ArgumentParser):
    p.add_argument('--config', default=None, help='key=value file with n, d, group, template_bits, '
                                                 'correction_radius, binding')
    p.add_argument('--n', type=int, default=None, help='Attributes per identity (default 8)')
    p.add_argument('--d', type=int, default=None, help='Overlap threshold (default 4)')
    p.add_argument('--group', default=None, help=f'Named group from config.json (default {DEFAULT_GROUP})')
    p.add_argument('--template_bits', type=int, default=None, help='Template length k (default 256)')
    p.add_argument('--correction_radius', type=int, default=None,
                   help='Per-block correction radius t (default 2(n-d))')
    p.add_argument('--binding', default=None, choices=[b.value for b in Binding],
                   help='How the identity enters the key (default identity)')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bio-ibe", description="Biometric identity-based encryption toolkit.")
    parser.add_argument('--groups_file', default=None, help='Alternative group registry (default config.json)')
    subparsers = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=None,
                        help='Deterministic randomness; test mode only, every key and ciphertext becomes predictable')
    common.add_argument('--force', action='store_true', help='Overwrite existing output files')

    setup_parser = subparsers.add_parser('setup', parents=[common], help='Generate public parameters and master key')
    _add_scheme_options(setup_parser)
    setup_parser.add_argument('--pp', default='pp.json', help='Public parameters output')
    setup_parser.add_argument('--msk', default='msk.json', help='Master key output (mode 0600)')

    extract_parser = subparsers.add_parser('extract', parents=[common], help='Issue a key for an attribute set')
    extract_parser.add_argument('--pp', required=True, help='Public parameters')
    extract_parser.add_argument('--msk', required=True, help='Master key')
    extract_parser.add_argument('--attrs', required=True, help='Comma-separated decimal attributes')
    extract_parser.add_argument('--sk', default='sk.json', help='Secret key output (mode 0600)')
    extract_parser.add_argument('--par', default='par.json', help='Public sketch output')

    encrypt_parser = subparsers.add_parser('encrypt', parents=[common], help='Encrypt to an attribute set')
    encrypt_parser.add_argument('--pp', required=True, help='Public parameters')
    encrypt_parser.add_argument('--par', required=True, help="Receiver's public sketch")
    encrypt_parser.add_argument('--attrs', required=True, help="Receiver's attributes w'")
    encrypt_parser.add_argument('--message', default=None, help='Payload text, or G_T element hex with --raw')
    encrypt_parser.add_argument('--input', default=None, help='Payload file (default stdin)')
    encrypt_parser.add_argument('--raw', action='store_true', help='Encrypt a G_T element directly')
    encrypt_parser.add_argument('--ct', default='ct.json', help='Ciphertext output')

    decrypt_parser = subparsers.add_parser('decrypt', parents=[common], help='Honest threshold decryption')
    decrypt_parser.add_argument('--pp', required=True, help='Public parameters')
    decrypt_parser.add_argument('--sk', required=True, help='Secret key')
    decrypt_parser.add_argument('--ct', required=True, help='Ciphertext')
    decrypt_parser.add_argument('--out', default=None, help='Plaintext output (default stdout)')

    attack_parser = subparsers.add_parser('attack', parents=[common], help='Decrypt with any key, ignoring overlap')
    attack_parser.add_argument('--pp', required=True, help='Public parameters')
    attack_parser.add_argument('--sk', required=True, help="Attacker's secret key")
    attack_parser.add_argument('--ct', required=True, help='Ciphertext')
    attack_parser.add_argument('--sketch', default=None, help="Attacker's own sketch to re-derive its identity")
    attack_parser.add_argument('--out', default=None, help='Recovered plaintext output (default stdout)')
    attack_parser.add_argument('--transcript', default=None, help='Transcript JSON output (default stderr)')

    game_parser = subparsers.add_parser('game', parents=[common], help='Play IND-sID-CPA games')
    _add_scheme_options(game_parser)
    game_parser.add_argument('--trials', type=int, default=100, help='Number of games (default 100)')
    game_parser.add_argument('--adversary', default='paper', choices=['paper', 'random'], help='Adversary')
    game_parser.add_argument('--overlap', type=int, default=0, help="Queried key's overlap with w' (default 0)")
    game_parser.add_argument('--workers', type=int, default=1, help='Parallel trials (default 1)')
    game_parser.add_argument('--report', default=None, help='JSON report output (default stdout)')

    verify_parser = subparsers.add_parser('verify', parents=[common], help='Run consistency checks')
    verify_parser.add_argument('--pp', required=True, help='Public parameters')
    verify_parser.add_argument('--sk', default=None, help='Secret key to check')
    verify_parser.add_argument('--ct', default=None, help='Ciphertext to check')
    verify_parser.add_argument('--par', default=None, help="Receiver's sketch for the ciphertext check")
    return parser


COMMANDS = {
    'setup': cmd_setup,
    'extract': cmd_extract,
    'encrypt': cmd_encrypt,
    'decrypt': cmd_decrypt,
    'attack': cmd_attack,
    'game': cmd_game,
    'verify': cmd_verify,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging()
    try:
        if args.groups_file:
            load_groups(args.groups_file)
        return COMMANDS[args.command](args)
    except BioIBEError as e:
        print(f"error: {e.detail}", file=sys.stderr)
        return e.exit_code
    except InvalidTag:
        print("error: payload authentication failed; the key does not open this ciphertext", file=sys.stderr)
        return EXIT_REFUSED
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
