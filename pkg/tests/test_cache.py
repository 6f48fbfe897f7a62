import json

from click.testing import CliRunner

from planarloops.cache import CACHE_ENV, InvariantCache, open_cache
from planarloops.cli import main
from planarloops.exactlin import ZZ, SparseMatrix, prime_field
from planarloops.loops import loops_homology
from planarloops.model import model_homology


def test_round_trip(tmp_path):
    cache = InvariantCache(tmp_path)
    m = SparseMatrix.from_dense([[2, 0], [0, 3]])
    assert cache.get_invariants(m, ZZ) is None
    cache.put_invariants(m, ZZ, (2, [1, 6]))
    assert cache.get_invariants(m, ZZ) == (2, [1, 6])
    assert (cache.hits, cache.misses) == (1, 1)
    assert cache.index()[0]["rank"] == 2


def test_key_depends_on_ring_and_content(tmp_path):
    cache = InvariantCache(tmp_path)
    m = SparseMatrix.from_dense([[1, 1]])
    assert cache.key(m, ZZ) != cache.key(m.change_ring(prime_field(2)), prime_field(2))
    assert cache.key(m, ZZ) != cache.key(SparseMatrix.from_dense([[1, 2]]), ZZ)
    assert cache.key(m, ZZ) != cache.key(m, ZZ.with_parameter(1))


def test_stale_tag_is_a_miss(tmp_path):
    cache = InvariantCache(tmp_path)
    m = SparseMatrix.from_dense([[5]])
    cache.put_invariants(m, ZZ, (1, [5]))
    path = next(tmp_path.glob("inv/*/*.json"))
    record = json.loads(path.read_text())
    record["tag"] = "old"
    path.write_text(json.dumps(record))
    assert cache.get_invariants(m, ZZ) is None


def test_corrupt_file_is_a_miss(tmp_path):
    cache = InvariantCache(tmp_path)
    m = SparseMatrix.from_dense([[5]])
    cache.put_invariants(m, ZZ, (1, [5]))
    next(tmp_path.glob("inv/*/*.json")).write_text("{not json")
    assert cache.get_invariants(m, ZZ) is None


def test_no_temporary_files_left(tmp_path):
    cache = InvariantCache(tmp_path)
    cache.put_invariants(SparseMatrix.from_dense([[3]]), ZZ, (1, [3]))
    assert not list(tmp_path.rglob(".tmp-*"))


def test_open_cache_from_environment(tmp_path, monkeypatch):
    monkeypatch.delenv(CACHE_ENV, raising=False)
    assert open_cache() is None
    monkeypatch.setenv(CACHE_ENV, str(tmp_path))
    assert open_cache().root == tmp_path


def test_warm_cache_gives_identical_tables(tmp_path):
    cache = InvariantCache(tmp_path)
    cold = loops_homology(2, ZZ, 3, cache=cache).to_csv()
    assert cache.misses and not cache.hits
    warm_cache = InvariantCache(tmp_path)
    warm = loops_homology(2, ZZ, 3, cache=warm_cache).to_csv()
    assert warm == cold == loops_homology(2, ZZ, 3).to_csv()
    assert warm_cache.hits and not warm_cache.misses


def test_cli_output_byte_identical_cold_and_warm(tmp_path):
    runner = CliRunner()
    args = ["--cache-dir", str(tmp_path), "homology", "--complex", "model", "--n", "4", "--format", "csv"]
    plain = runner.invoke(main, args[2:])
    cold = runner.invoke(main, args)
    warm = runner.invoke(main, args)
    assert cold.exit_code == warm.exit_code == plain.exit_code == 0
    assert cold.stdout_bytes == warm.stdout_bytes == plain.stdout_bytes
    assert (tmp_path / "index.jsonl").exists()


def test_clear(tmp_path):
    cache = InvariantCache(tmp_path / "c")
    model_homology(2, ZZ, 4, cache=cache)
    assert cache.index()
    cache.clear()
    assert cache.index() == []
