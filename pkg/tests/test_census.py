import pytest

import oracles
from closedwords.avoidance import BudgetExceededError, mu_exact
from closedwords.census import (
    CensusCache,
    CensusFileError,
    CensusTable,
    ShardSpec,
    census_range,
    load_census,
    make_shards,
    run_census,
    save_census,
    shard_prefix_length,
)


def test_small_examples():
    t2 = run_census(2, 2)
    assert (t2.closed_total, t2.privileged_total) == (2, 2)
    t3 = run_census(2, 3)
    assert (t3.closed_total, t3.privileged_total) == (4, 4)
    assert t3.closed_by_border == {1: 2, 2: 2}


@pytest.mark.parametrize("q, n_max", [(2, 12), (3, 7), (4, 5)])
def test_scan_matches_definitions(q, n_max):
    for n in range(n_max + 1):
        t = run_census(q, n)
        c, b, by_border = oracles.census(q, n)
        assert (t.closed_total, t.privileged_total, t.closed_by_border) == (c, b, by_border)


def test_known_binary_sequences():
    closed = [run_census(2, n).closed_total for n in range(1, 13)]
    privileged = [run_census(2, n).privileged_total for n in range(1, 13)]
    assert closed == [2, 2, 4, 6, 12, 20, 36, 62, 116, 204, 364, 664]
    assert privileged == [2, 2, 4, 4, 8, 8, 16, 20, 40, 60, 108, 176]


def test_partition_and_subset():
    for q, n_max in [(2, 14), (3, 9)]:
        for n in range(2, n_max + 1):
            t = run_census(q, n)
            assert t.partition_holds()
            assert t.privileged_total <= t.closed_total <= q**n
            assert set(t.closed_by_border) <= set(range(1, n))


def test_shards_partition_words():
    for q, n, workers in [(2, 10, 1), (3, 4, 8), (2, 3, 4)]:
        shards = make_shards(q, n, workers)
        prefixes = [s.prefix(q) for s in shards]
        p = shard_prefix_length(q, n, workers)
        assert len(set(prefixes)) == q**p == len(shards)
        assert all(len(pr) == p <= n for pr in prefixes)


def test_shard_prefix_digits():
    assert ShardSpec(3, 5).prefix(2) == (1, 0, 1)
    assert ShardSpec(0, 0).prefix(3) == ()


def test_worker_count_does_not_matter():
    base = run_census(2, 13, workers=1)
    for k in (2, 3):
        assert run_census(2, 13, workers=k) == base
    assert run_census(3, 8, workers=2) == run_census(3, 8)


def test_lemma3_second_branch_against_mu():
    for q, n_max in [(2, 14), (3, 10)]:
        for n in range(2, n_max + 1):
            t = run_census(q, n)
            for m in range(1, n // 2 + 1):
                assert t.closed_by_border.get(m, 0) <= q**m * mu_exact(q, n - 2 * m, m)


def test_budget_and_domain():
    with pytest.raises(BudgetExceededError):
        run_census(2, 60)
    with pytest.raises(ValueError):
        run_census(2, -1)
    with pytest.raises(ValueError):
        run_census(2, 3, workers=0)


def test_roundtrip(tmp_path):
    t = run_census(2, 3)
    path = save_census(tmp_path / "t.txt", t)
    assert load_census(path) == t
    assert load_census(path, q=2, n=3) == t


def test_file_format(tmp_path):
    path = save_census(tmp_path / "t.txt", run_census(2, 3))
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("q=2 n=3 checksum=")
    assert lines[1:] == ["closed_total=4", "privileged_total=4",
                         "m=1 count=2", "m=2 count=2"]


def test_corrupted_checksum(tmp_path):
    path = save_census(tmp_path / "t.txt", run_census(2, 5))
    text = path.read_text(encoding="utf-8").replace("closed_total=12", "closed_total=13")
    path.write_text(text, encoding="utf-8")
    with pytest.raises(CensusFileError, match="checksum"):
        load_census(path)


def test_header_mismatch(tmp_path):
    path = save_census(tmp_path / "t.txt", run_census(2, 4))
    with pytest.raises(CensusFileError):
        load_census(path, q=3)
    with pytest.raises(CensusFileError):
        load_census(path, n=5)


def test_malformed_file(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("q=2 n=3\nclosed_total=4\nprivileged_total=4\n", encoding="utf-8")
    with pytest.raises(CensusFileError):
        load_census(path)
    path.write_text("garbage\n", encoding="utf-8")
    with pytest.raises(CensusFileError):
        load_census(path)


def test_census_range_and_cache(tmp_path):
    cache = CensusCache(tmp_path)
    first = census_range(2, 2, 3, cache=cache)
    assert [(t.n, t.closed_total) for t in first] == [(2, 2), (3, 4)]
    assert (cache.hits, cache.misses) == (0, 2)
    again = census_range(2, 2, 3, cache=cache)
    assert again == first
    assert (cache.hits, cache.misses) == (2, 2)
    assert census_range(2, 5, 4) == []


def test_merge_rejects_mismatch():
    with pytest.raises(ValueError):
        CensusTable(2, 3).merge(CensusTable(2, 4))
