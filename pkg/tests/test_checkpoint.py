import hashlib
import json

import pytest

from foxprim.checkpoint import MAGIC, Checkpoint, CheckpointError, CheckpointWriter
from foxprim.primitivity import blocking_search, default_candidates

PARAMS = {"max_len": 8, "cand_len": 3}


def _forge(records_body: bytes, header: dict) -> bytes:
    return MAGIC + json.dumps(header, sort_keys=True).encode() + b"\n" + records_body


def test_roundtrip(tmp_path):
    ck = Checkpoint(3, PARAMS, [{"candidate": "a", "verdict": "Extendable", "bound": 8}])
    p = tmp_path / "c.ckpt"
    ck.save(p)
    back = Checkpoint.load(p, rank=3, params=PARAMS)
    assert back == ck
    assert back.to_bytes() == ck.to_bytes()
    assert not (tmp_path / "c.ckpt.tmp").exists()


def test_mismatched_rank_and_params(tmp_path):
    p = tmp_path / "c.ckpt"
    Checkpoint(3, PARAMS).save(p)
    with pytest.raises(CheckpointError, match="rank"):
        Checkpoint.load(p, rank=4)
    with pytest.raises(CheckpointError, match="parameters"):
        Checkpoint.load(p, rank=3, params={"max_len": 9, "cand_len": 3})


def test_hash_mismatch_rejected():
    data = Checkpoint(3, PARAMS, [{"candidate": "a", "verdict": "Extendable"}]).to_bytes()
    with pytest.raises(CheckpointError, match="hash"):
        Checkpoint.from_bytes(data[:-3])
    with pytest.raises(CheckpointError, match="hash"):
        Checkpoint.from_bytes(data.replace(b"Extendable", b"BlockedUpTo"))


def test_truncated_body_with_consistent_hash_rejected():
    full = Checkpoint(3, PARAMS, [{"candidate": "a"}, {"candidate": "aa"}]).to_bytes()
    body = full.split(b"\n", 2)[2]
    cut = body[:-2]
    header = {"rank": 3, "params": PARAMS, "count": 2, "sha256": hashlib.sha256(cut).hexdigest()}
    with pytest.raises(CheckpointError, match="truncated"):
        Checkpoint.from_bytes(_forge(cut, header))
    # a whole record dropped: framing is fine but the count is not
    one = body[: 4 + int.from_bytes(body[:4], "big")]
    header = {"rank": 3, "params": PARAMS, "count": 2, "sha256": hashlib.sha256(one).hexdigest()}
    with pytest.raises(CheckpointError, match="count"):
        Checkpoint.from_bytes(_forge(one, header))


def test_bad_magic_and_header():
    with pytest.raises(CheckpointError):
        Checkpoint.from_bytes(b"hello")
    with pytest.raises(CheckpointError):
        Checkpoint.from_bytes(MAGIC + b"{not json\n")
    with pytest.raises(CheckpointError):
        Checkpoint.from_bytes(MAGIC + b"{}")


def test_resume_mid_search_gives_identical_result(tmp_path):
    full = blocking_search(3, 8, cand_len=3)
    cands = default_candidates(3, 3)
    p = tmp_path / "s.ckpt"
    w = CheckpointWriter(p, Checkpoint(3, PARAMS), every=2)
    # interrupted after part of the candidates
    blocking_search(3, 8, candidates=cands[:4], sink=w)
    w.flush()
    ck = Checkpoint.load(p, rank=3, params=PARAMS)
    assert len(ck.records) == 4
    calls = []
    resumed = blocking_search(3, 8, cand_len=3, done=ck.done(), sink=calls.append)
    assert resumed == full
    assert len(calls) == len(cands) - 4
    assert {r["candidate"] for r in calls}.isdisjoint(ck.done())
