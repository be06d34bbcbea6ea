import json
import math

import pytest

import ppcard


def test_flip_probability():
    assert ppcard.flip_probability(1.0) == pytest.approx(0.268941, abs=1e-6)
    with pytest.raises(ValueError):
        ppcard.flip_probability(0.0)


def test_bloom_filter_hex():
    bf = ppcard.BloomFilter.from_positions(12, [0, 7, 8, 11])
    assert bf.to_hex() == "8190"
    assert ppcard.BloomFilter.from_hex("8190", 12) == bf
    assert bf.popcount() == 4
    assert bf[7] and not bf[1]
    with pytest.raises(ValueError):
        ppcard.BloomFilter.from_hex("zz", 8)


def test_qgrams_and_encoding():
    assert ppcard.qgrams("peter", 2) == {"pe", "et", "te", "er"}
    a = ppcard.encode_record(["peter", "smith", "carlton", "3053", "m"])
    b = ppcard.encode_record(["pete", "smith", "carlton", "3053", "m"])
    c = ppcard.encode_record(["alice", "wong", "fitzroy", "3065", "f"])
    assert len(a) == 200
    assert ppcard.dice(a, b) > ppcard.dice(a, c)
    custom = ppcard.encode_record(["ann"], schema=[("name", "string")], ell=64)
    assert len(custom) == 64


def test_perturb_is_deterministic():
    bf = ppcard.BloomFilter(200)
    x = ppcard.perturb(bf, 1.0, seed=3, record_index=5)
    assert x == ppcard.perturb(bf, 1.0, seed=3, record_index=5)
    assert 20 < x.popcount() < 90


def test_theory_functions():
    assert ppcard.expected_fpr(200, 20, 10) == pytest.approx((1 - math.exp(-1)) ** 20)
    closed = ppcard.same_cluster_probability(200, 1.0, math.sqrt(53.79))
    assert closed == pytest.approx(0.5, abs=1e-3)
    exact = ppcard.exact_same_cluster_probability(200, 1.0, 7.0)
    mc = ppcard.monte_carlo_same_cluster(200, 1.0, 7.0, trials=4000, seed=2)
    assert abs(exact - mc) < 0.05


def test_purity():
    per_ref, total = ppcard.purity(
        ["reference", "dummy", "dummy", "input"], [0, 0, 0, -1], [0, 0, 0, 1], 2
    )
    assert per_ref == [1.0]
    assert total == 1.0


def test_estimate_cardinality_on_planted_data():
    providers = [[], []]
    for e in range(8):
        bf = ppcard.BloomFilter.from_positions(200, range(e * 20, e * 20 + 20))
        for c in range(3):
            providers[(e * 3 + c) % 2].append(bf)
    report = ppcard.estimate_cardinality(
        providers, method="B", p_flip=0.02, k_min=2, k_max=20, k_true=8,
        pick_ratio=1.0, dummy_ratio=1.0,
    )
    assert report["k_star"] == 8
    assert report["error"] == 0
    assert [row["k"] for row in report["sweep"]] == list(range(2, 21))


def test_generate_and_pipeline(tmp_path):
    data = ppcard.generate_providers(entities=20, providers=2, seed=4)
    assert sorted(data) == ["provider-1", "provider-2"]
    ids = {eid for rows in data.values() for _, eid in rows}
    assert len(ids) == 20
    config = {
        "dataset": {"entities": 20},
        "k_range": {"first": 10, "last": 30, "stride": 1},
        "out_dir": str(tmp_path),
    }
    report = ppcard.run_pipeline(json.dumps(config))
    assert report["k_true"] == 20
    assert len(report["linkage_inputs"]) == 2
    on_disk = json.loads(open(report["report_file"]).read())
    assert on_disk["k_star"] == report["k_star"]
    with pytest.raises(ValueError):
        ppcard.run_pipeline('{"epsilno": 1}')
