import contextlib
import io
import json
import math
import os
import tempfile
import unittest

from bioibe import AttributeSet
from bioibe.cli import main, parse_attributes
from keystore import load_public_params, load_secret_key, save_secret_key
from pairing import InvalidArgumentError

TARGET = "11,22,33,44,55,66,77,88"
NOISY_READING = "11,22,33,44,101,102,103,104"   # shares d = 4 attributes
BELOW_THRESHOLD = "11,22,33,201,202,203,204,205"  # shares 3
STRANGER = "301,302,303,304,305,306,307,308"


class TestCommandLine(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def path(self, name: str) -> str:
        return os.path.join(self.tmp.name, name)

    def run_cli(self, *argv) -> int:
        self.stdout, self.stderr = io.StringIO(), io.StringIO()
        with contextlib.redirect_stdout(self.stdout), contextlib.redirect_stderr(self.stderr):
            return main([str(a) for a in argv])

    def read(self, name: str) -> bytes:
        with open(self.path(name), "rb") as f:
            return f.read()

    def setup_system(self, *extra) -> int:
        return self.run_cli("setup", "--pp", self.path("pp.json"), "--msk", self.path("msk.json"),
                            "--seed", 42, *extra)

    def extract_key(self, attrs: str, name: str, seed: int = 1) -> int:
        return self.run_cli("extract", "--pp", self.path("pp.json"), "--msk", self.path("msk.json"),
                            "--attrs", attrs, "--sk", self.path(f"{name}.sk.json"),
                            "--par", self.path(f"{name}.par.json"), "--seed", seed)

    def encrypt_to(self, name: str, reading: str, message: str = "hello", *extra) -> int:
        return self.run_cli("encrypt", "--pp", self.path("pp.json"), "--par", self.path(f"{name}.par.json"),
                            "--attrs", reading, "--message", message, "--ct", self.path("ct.json"), *extra)

    def test_seeded_setup_is_byte_identical(self):
        self.assertEqual(self.setup_system(), 0)
        first = (self.read("pp.json"), self.read("msk.json"))
        self.assertEqual(self.setup_system("--force"), 0)
        self.assertEqual((self.read("pp.json"), self.read("msk.json")), first)
        pp = load_public_params(self.path("pp.json"))
        self.assertEqual((pp.n, pp.d, pp.correction_radius), (8, 4, 8))

    def test_setup_rejects_bad_threshold(self):
        self.assertEqual(self.setup_system("--n", 8, "--d", 9), 2)
        self.assertIn("error:", self.stderr.getvalue())
        self.assertFalse(os.path.exists(self.path("pp.json")))

    def test_setup_refuses_to_overwrite(self):
        self.assertEqual(self.setup_system(), 0)
        self.assertEqual(self.setup_system(), 4)
        self.assertIn("--force", self.stderr.getvalue())

    def test_setup_reads_config_file(self):
        with open(self.path("scheme.env"), "w") as f:
            f.write("n=6\nd=3\ngroup=toy1009\n")
        self.assertEqual(self.setup_system("--config", self.path("scheme.env"), "--d", 2), 0)
        pp = load_public_params(self.path("pp.json"))
        self.assertEqual((pp.n, pp.d, pp.group.p), (6, 2, 1009))

    def test_setup_rejects_unknown_config_key(self):
        with open(self.path("scheme.env"), "w") as f:
            f.write("threshold=3\n")
        self.assertEqual(self.setup_system("--config", self.path("scheme.env")), 2)

    def test_setup_removes_public_params_when_master_key_write_fails(self):
        code = self.run_cli("setup", "--pp", self.path("pp.json"), "--msk", self.path("missing/msk.json"))
        self.assertEqual(code, 4)
        self.assertFalse(os.path.exists(self.path("pp.json")))

    def test_extract_removes_key_when_sketch_write_fails(self):
        self.setup_system()
        code = self.run_cli("extract", "--pp", self.path("pp.json"), "--msk", self.path("msk.json"),
                            "--attrs", TARGET, "--sk", self.path("alice.sk.json"),
                            "--par", self.path("missing/alice.par.json"))
        self.assertEqual(code, 4)
        self.assertFalse(os.path.exists(self.path("alice.sk.json")))

    def test_non_utf8_record_is_a_format_error(self):
        with open(self.path("pp.json"), "wb") as f:
            f.write(b"\xff\xfe\x00garbage")
        self.assertEqual(self.run_cli("verify", "--pp", self.path("pp.json")), 2)
        self.assertIn("Malformed record", self.stderr.getvalue())

    def test_non_utf8_config_file_is_a_config_error(self):
        with open(self.path("scheme.env"), "wb") as f:
            f.write(b"n=\xff\xfe\n")
        self.assertEqual(self.setup_system("--config", self.path("scheme.env")), 2)

    def test_extract_then_verify(self):
        self.setup_system()
        self.assertEqual(self.extract_key(TARGET, "alice"), 0)
        self.assertEqual(self.encrypt_to("alice", NOISY_READING), 0)
        self.assertEqual(self.run_cli("verify", "--pp", self.path("pp.json"), "--sk", self.path("alice.sk.json"),
                                      "--ct", self.path("ct.json"), "--par", self.path("alice.par.json")), 0)
        self.assertIn("OK", self.stdout.getvalue())

    def test_verify_fails_on_foreign_key(self):
        self.setup_system()
        self.extract_key(TARGET, "alice")
        self.run_cli("setup", "--pp", self.path("other.json"), "--msk", self.path("other-msk.json"), "--seed", 7)
        self.assertEqual(self.run_cli("verify", "--pp", self.path("other.json"),
                                      "--sk", self.path("alice.sk.json")), 3)
        self.assertIn("FAIL", self.stdout.getvalue())

    def test_extract_rejects_bad_attribute_lists(self):
        self.setup_system()
        self.assertEqual(self.extract_key("1,2,3,4,5,6,7,7", "dup"), 2)
        self.assertEqual(self.extract_key("1,2,3", "short"), 2)
        self.assertEqual(self.extract_key("1,2,x", "junk"), 2)
        self.assertEqual(self.extract_key("0,1,2,3,4,5,6,7", "zero"), 2)

    def test_encrypt_decrypt_round_trip(self):
        self.setup_system()
        self.extract_key(TARGET, "alice")
        self.assertEqual(self.encrypt_to("alice", TARGET, "meet at noon"), 0)
        self.assertEqual(self.run_cli("decrypt", "--pp", self.path("pp.json"), "--sk", self.path("alice.sk.json"),
                                      "--ct", self.path("ct.json"), "--out", self.path("plain.txt")), 0)
        self.assertEqual(self.read("plain.txt"), b"meet at noon")

    def test_decrypt_at_exact_threshold(self):
        self.setup_system()
        self.extract_key(TARGET, "alice")
        self.encrypt_to("alice", NOISY_READING, "threshold")
        self.assertEqual(self.run_cli("decrypt", "--pp", self.path("pp.json"), "--sk", self.path("alice.sk.json"),
                                      "--ct", self.path("ct.json"), "--out", self.path("plain.txt")), 0)
        self.assertEqual(self.read("plain.txt"), b"threshold")

    def test_decrypt_below_threshold_is_refused(self):
        self.setup_system()
        self.extract_key(TARGET, "alice")
        self.extract_key(BELOW_THRESHOLD, "bob", seed=2)
        self.encrypt_to("bob", BELOW_THRESHOLD)
        self.assertEqual(self.run_cli("decrypt", "--pp", self.path("pp.json"), "--sk", self.path("alice.sk.json"),
                                      "--ct", self.path("ct.json"), "--out", self.path("plain.txt")), 3)
        self.assertIn("overlap 3", self.stderr.getvalue())
        self.assertFalse(os.path.exists(self.path("plain.txt")))

    def test_raw_mode(self):
        self.setup_system()
        self.extract_key(TARGET, "alice")
        message = load_public_params(self.path("pp.json")).group.gt_generator() ** 1234
        self.assertEqual(self.encrypt_to("alice", TARGET, message.to_bytes().hex(), "--raw"), 0)
        self.run_cli("decrypt", "--pp", self.path("pp.json"), "--sk", self.path("alice.sk.json"),
                     "--ct", self.path("ct.json"), "--out", self.path("plain.txt"))
        self.assertEqual(self.read("plain.txt").decode().strip(), message.to_bytes().hex())
        self.assertEqual(self.encrypt_to("alice", TARGET, "not-hex", "--raw", "--force"), 2)

    def test_attack_with_disjoint_key(self):
        self.setup_system()
        self.extract_key(TARGET, "alice")
        self.extract_key(STRANGER, "mallory", seed=3)
        self.encrypt_to("alice", TARGET, "for alice only")
        self.assertEqual(self.run_cli("attack", "--pp", self.path("pp.json"), "--sk", self.path("mallory.sk.json"),
                                      "--ct", self.path("ct.json"), "--sketch", self.path("mallory.par.json"),
                                      "--out", self.path("stolen.txt"),
                                      "--transcript", self.path("transcript.json")), 0)
        self.assertEqual(self.read("stolen.txt"), b"for alice only")
        transcript = json.loads(self.read("transcript.json"))
        self.assertEqual(transcript["overlap"], 0)
        self.assertEqual(transcript["chosen_S"], [301, 302, 303, 304])
        self.assertEqual(len(transcript["intermediate"]), 8)

    def test_attack_needs_enough_shares(self):
        self.setup_system()
        self.extract_key(STRANGER, "mallory", seed=3)
        self.extract_key(TARGET, "alice")
        self.encrypt_to("alice", TARGET)
        pp = load_public_params(self.path("pp.json"))
        sk = load_secret_key(self.path("mallory.sk.json"), pp.group)
        short = type(sk)(AttributeSet(sk.attributes.attrs[:3]), sk.entries[:3], sk.identity, sk.binding)
        save_secret_key(self.path("short.sk.json"), pp, short)
        self.assertEqual(self.run_cli("attack", "--pp", self.path("pp.json"), "--sk", self.path("short.sk.json"),
                                      "--ct", self.path("ct.json"), "--out", self.path("stolen.txt")), 3)

    def test_original_binding_fails_authentication(self):
        self.setup_system("--binding", "attributes-and-identity")
        self.extract_key(TARGET, "alice")
        self.encrypt_to("alice", NOISY_READING)
        self.assertEqual(self.run_cli("decrypt", "--pp", self.path("pp.json"), "--sk", self.path("alice.sk.json"),
                                      "--ct", self.path("ct.json"), "--out", self.path("plain.txt")), 3)

    def test_missing_input_file(self):
        self.assertEqual(self.run_cli("decrypt", "--pp", self.path("nope.json"), "--sk", self.path("sk.json"),
                                      "--ct", self.path("ct.json")), 4)

    def game(self, *extra) -> dict:
        code = self.run_cli("game", "--seed", 5, "--report", self.path("report.json"), "--force", *extra)
        self.assertEqual(code, 0)
        return json.loads(self.read("report.json"))

    def test_game_paper_adversary(self):
        report = self.game("--adversary", "paper", "--trials", 100)
        self.assertEqual(report["wins"], 100)
        self.assertEqual(report["advantage"], 0.5)

    def test_game_random_adversary(self):
        report = self.game("--adversary", "random", "--trials", 1000, "--n", 4, "--d", 2)
        self.assertLessEqual(report["advantage"], 3 * math.sqrt(0.25 / 1000))

    def test_game_zero_trials(self):
        report = self.game("--trials", 0)
        self.assertEqual((report["wins"], report["advantage"]), (0, 0.0))

    def test_game_rejects_inadmissible_overlap(self):
        self.assertEqual(self.run_cli("game", "--overlap", 4, "--trials", 1), 2)


class TestParseAttributes(unittest.TestCase):

    def test_decimal_list(self):
        self.assertEqual(parse_attributes(" 3, 17,42 "), [3, 17, 42])

    def test_rejects_duplicates(self):
        with self.assertRaises(InvalidArgumentError):
            parse_attributes("3,3")


if __name__ == "__main__":
    unittest.main()
