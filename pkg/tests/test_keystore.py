import os
import random
import stat
import tempfile
import unittest

from cryptography.exceptions import InvalidTag

from bioibe import (AttributeSet, decode_attribute_set, decode_ciphertext, decode_master_key, decode_public_params,
                    decode_secret_key, decrypt, encode_attribute_set, encode_ciphertext, encode_master_key,
                    encode_public_params, encode_secret_key, encrypt, extract)
from cryptanalysis import universal_decrypt
from fuzzy import SketchPar
from keystore import (MODE_HYBRID, MODE_RAW, KeyStoreRecord, SealedMessage, decode_sealed, encode_sealed,
                      load_ciphertext, load_master_key, load_public_params, load_secret_key, load_sketch,
                      open_sealed, read_record, save_ciphertext, save_master_key, save_public_params,
                      save_secret_key, save_sketch, seal, seal_raw)
from pairing import RecordFormatError, TransparentGroup, get_group
from tests.fixtures import make_system, overlapping_set

TOY = TransparentGroup(p=101, name="toy101")
BIG = get_group("secp256r1-order")


def through_envelope(role: str, payload: bytes) -> bytes:
    return KeyStoreRecord.from_json(KeyStoreRecord(role, payload, metadata={"seed": 1}).to_json()).payload


class TestRoundTrips(unittest.TestCase):
    TRIALS = 1000

    def setUp(self):
        self.rng = random.Random(51)
        _, self.pp, self.msk = make_system(BIG, self.rng)

    def test_public_params(self):
        for i in range(self.TRIALS):
            group = TOY if i % 2 else BIG
            _, pp, _ = make_system(group, self.rng, n=4, d=self.rng.randrange(1, 5))
            data = encode_public_params(pp)
            decoded = decode_public_params(through_envelope("public-params", data))
            self.assertEqual(decoded, pp)
            self.assertEqual(encode_public_params(decoded), data)

    def test_master_key(self):
        for _ in range(self.TRIALS):
            _, _, msk = make_system(BIG, self.rng)
            data = encode_master_key(BIG, msk)
            self.assertEqual(decode_master_key(BIG, through_envelope("master-key", data)), msk)

    def test_secret_key(self):
        for _ in range(self.TRIALS):
            sk, _ = extract(self.pp, self.msk, AttributeSet.random(BIG, 8, self.rng), self.rng)
            data = encode_secret_key(BIG, sk)
            decoded = decode_secret_key(BIG, through_envelope("secret-key", data))
            self.assertEqual(decoded, sk)
            self.assertEqual(encode_secret_key(BIG, decoded), data)

    def test_sketch(self):
        for _ in range(self.TRIALS):
            _, par = extract(self.pp, self.msk, AttributeSet.random(BIG, 8, self.rng), self.rng)
            self.assertEqual(SketchPar.from_bytes(through_envelope("sketch-par", par.to_bytes())), par)

    def test_ciphertext(self):
        w = AttributeSet.random(BIG, 8, self.rng)
        _, par = extract(self.pp, self.msk, w, self.rng)
        for i in range(self.TRIALS):
            if i % 2:
                sealed = seal(self.pp, self.rng.randbytes(i % 64), w, par, self.rng)
            else:
                sealed = seal_raw(self.pp, BIG.random_gt(self.rng), w, par, self.rng)
            data = encode_sealed(BIG, sealed)
            decoded = decode_sealed(BIG, through_envelope("ciphertext", data))
            self.assertEqual(decoded, sealed)
            self.assertEqual(encode_sealed(BIG, decoded), data)

    def test_attribute_set(self):
        for _ in range(self.TRIALS):
            w = AttributeSet.random(TOY, self.rng.randrange(1, 20), self.rng)
            self.assertEqual(decode_attribute_set(TOY, encode_attribute_set(w)), w)


class TestMalformedPayloads(unittest.TestCase):

    def setUp(self):
        rng = random.Random(52)
        _, self.pp, self.msk = make_system(BIG, rng)
        self.sk, self.par = extract(self.pp, self.msk, AttributeSet.random(BIG, 8, rng), rng)
        self.ct = encrypt(self.pp, BIG.random_gt(rng), self.sk.attributes, self.par, rng)

    def test_truncated(self):
        for data, decode in ((encode_secret_key(BIG, self.sk), lambda b: decode_secret_key(BIG, b)),
                             (encode_ciphertext(BIG, self.ct), lambda b: decode_ciphertext(BIG, b)),
                             (encode_public_params(self.pp), decode_public_params)):
            with self.assertRaises(RecordFormatError):
                decode(data[:-1])
            with self.assertRaises(RecordFormatError):
                decode(data + b"\x00")

    def test_wrong_kind(self):
        with self.assertRaises(RecordFormatError):
            decode_secret_key(BIG, encode_ciphertext(BIG, self.ct))

    def test_wrong_group(self):
        with self.assertRaises(RecordFormatError):
            decode_master_key(TOY, encode_master_key(BIG, self.msk))

    def test_envelope(self):
        with self.assertRaises(RecordFormatError):
            KeyStoreRecord.from_json("{not json")
        with self.assertRaises(RecordFormatError):
            KeyStoreRecord.from_json('{"role": "public-params", "version": 2, "payload": ""}')
        with self.assertRaises(RecordFormatError):
            KeyStoreRecord.from_json('{"role": "diary", "version": 1, "payload": ""}')
        with self.assertRaises(RecordFormatError):
            KeyStoreRecord.from_json('{"role": "sketch-par", "version": 1, "payload": "zz"}')
        with self.assertRaises(RecordFormatError):
            KeyStoreRecord.from_json(b"\xff\xfe\x00garbage")


class TestRecordFiles(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.rng = random.Random(53)
        _, self.pp, self.msk = make_system(BIG, self.rng)

    def path(self, name: str) -> str:
        return os.path.join(self.tmp.name, name)

    def test_save_and_load(self):
        w = AttributeSet.random(BIG, 8, self.rng)
        sk, par = extract(self.pp, self.msk, w, self.rng)
        sealed = seal(self.pp, b"attack at dawn", w, par, self.rng)
        save_public_params(self.path("pp.json"), self.pp, seed=7)
        save_master_key(self.path("msk.json"), self.pp, self.msk)
        save_secret_key(self.path("sk.json"), self.pp, sk)
        save_sketch(self.path("par.json"), par)
        save_ciphertext(self.path("ct.json"), self.pp, sealed)

        pp = load_public_params(self.path("pp.json"))
        self.assertEqual(pp, self.pp)
        self.assertEqual(load_master_key(self.path("msk.json"), pp.group), self.msk)
        self.assertEqual(load_secret_key(self.path("sk.json"), pp.group), sk)
        self.assertEqual(load_sketch(self.path("par.json")), par)
        self.assertEqual(load_ciphertext(self.path("ct.json"), pp.group), sealed)
        self.assertEqual(read_record(self.path("pp.json"), "public-params").metadata, {"seed": 7})
        self.assertEqual(read_record(self.path("ct.json"), "ciphertext").metadata, {"mode": "hybrid"})

    def test_private_records_are_owner_only(self):
        save_master_key(self.path("msk.json"), self.pp, self.msk)
        self.assertEqual(stat.S_IMODE(os.stat(self.path("msk.json")).st_mode), 0o600)

    def test_refuses_to_overwrite(self):
        save_public_params(self.path("pp.json"), self.pp)
        with self.assertRaises(FileExistsError):
            save_public_params(self.path("pp.json"), self.pp)
        save_public_params(self.path("pp.json"), self.pp, force=True)

    def test_non_utf8_file(self):
        with open(self.path("pp.json"), "wb") as f:
            f.write(b"\xff\xfe\x00garbage")
        with self.assertRaises(RecordFormatError):
            load_public_params(self.path("pp.json"))

    def test_role_mismatch(self):
        save_public_params(self.path("pp.json"), self.pp)
        with self.assertRaises(RecordFormatError):
            load_sketch(self.path("pp.json"))


class TestHybrid(unittest.TestCase):

    def setUp(self):
        self.rng = random.Random(54)
        _, self.pp, self.msk = make_system(BIG, self.rng)
        self.w = AttributeSet.random(BIG, 8, self.rng)
        self.sk, self.par = extract(self.pp, self.msk, self.w, self.rng)

    def test_round_trip(self):
        for size in (0, 1, 31, 1000):
            payload = self.rng.randbytes(size)
            sealed = seal(self.pp, payload, overlapping_set(BIG, self.w, 5, self.rng), self.par, self.rng)
            self.assertEqual(sealed.mode, MODE_HYBRID)
            self.assertEqual(open_sealed(self.pp, sealed, decrypt(self.pp, self.sk, sealed.ciphertext)), payload)

    def test_attacker_opens_payload(self):
        attacker, _ = extract(self.pp, self.msk, AttributeSet.random(BIG, 8, self.rng), self.rng)
        sealed = seal(self.pp, b"for the key holder only", self.w, self.par, self.rng)
        recovered, _ = universal_decrypt(self.pp, attacker, sealed.ciphertext)
        self.assertEqual(open_sealed(self.pp, sealed, recovered), b"for the key holder only")

    def test_tampering_detected(self):
        sealed = seal(self.pp, b"payload", self.w, self.par, self.rng)
        shared = decrypt(self.pp, self.sk, sealed.ciphertext)
        flipped = bytes([sealed.body[0] ^ 1]) + sealed.body[1:]
        with self.assertRaises(InvalidTag):
            open_sealed(self.pp, SealedMessage(MODE_HYBRID, sealed.ciphertext, sealed.nonce, flipped), shared)
        with self.assertRaises(InvalidTag):
            open_sealed(self.pp, sealed, shared * BIG.gt_generator())
        other = encrypt(self.pp, BIG.random_gt(self.rng), self.w, self.par, self.rng)
        with self.assertRaises(InvalidTag):
            open_sealed(self.pp, SealedMessage(MODE_HYBRID, other, sealed.nonce, sealed.body), shared)

    def test_seeded_seal_binds_the_nonce_to_the_payload(self):
        first = seal(self.pp, b"first payload", self.w, self.par, random.Random(7))
        second = seal(self.pp, b"second payload", self.w, self.par, random.Random(7))
        self.assertEqual(first.ciphertext, second.ciphertext)
        self.assertNotEqual(first.nonce, second.nonce)
        self.assertEqual(seal(self.pp, b"first payload", self.w, self.par, random.Random(7)), first)

    def test_raw_has_no_payload(self):
        sealed = seal_raw(self.pp, BIG.random_gt(self.rng), self.w, self.par, self.rng)
        self.assertEqual(sealed.mode, MODE_RAW)
        with self.assertRaises(RecordFormatError):
            open_sealed(self.pp, sealed, BIG.gt_generator())

    def test_truncated_hybrid_body(self):
        data = encode_sealed(BIG, seal(self.pp, b"", self.w, self.par, self.rng))
        with self.assertRaises(RecordFormatError):
            decode_sealed(BIG, data[:-1])
        with self.assertRaises(RecordFormatError):
            decode_sealed(BIG, b"\x07" + data[1:])


if __name__ == "__main__":
    unittest.main()
