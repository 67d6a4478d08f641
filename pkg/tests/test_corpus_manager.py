import json

import pytest

from corpus_manager import CorpusManager, default_fixtures, get_corpus_manager
from errors import SpaceFileError
from finite_core import new_space
from initialize_corpus import main as initialize_corpus
from space_io import dumps, load_arrows, read_json
from symbolic import prime_gap_union


def test_shipped_fixtures_match_the_defaults(corpus_dir):
    corpus = CorpusManager(corpus_dir)
    assert corpus.list_fixtures() == sorted(default_fixtures())
    for name, obj in default_fixtures().items():
        assert read_json(corpus.fixture_path(name)) == json.loads(dumps(obj)), name


def test_shipped_corpus_is_healthy(corpus_dir):
    health = CorpusManager(corpus_dir).check_corpus_health()
    assert health["status"] == "healthy"
    assert health["warnings"] == []


def test_write_default_fixtures(tmp_path):
    corpus = CorpusManager(str(tmp_path))
    results = corpus.write_default_fixtures()
    assert results["written"] == len(default_fixtures())
    assert results["failed"] == 0
    again = corpus.write_default_fixtures()
    assert again["written"] == 0 and again["skipped"] == len(default_fixtures())
    assert corpus.write_default_fixtures(force=True)["written"] == len(default_fixtures())


def test_load_fixture(tmp_path):
    corpus = CorpusManager(str(tmp_path))
    corpus.write_default_fixtures()
    assert corpus.load_fixture("witness_space") == new_space(3, [[0, 1], [1, 2]])
    assert corpus.load_fixture("prime_gap_nest") == prime_gap_union()
    universe_size, arrows = corpus.load_fixture("initial_sinks", loader=load_arrows)
    assert universe_size == 3 and len(arrows) == 1
    with pytest.raises(SpaceFileError):
        corpus.load_fixture("absent")


def test_corpus_stats(tmp_path):
    corpus = CorpusManager(str(tmp_path))
    corpus.write_default_fixtures()
    stats = corpus.get_corpus_stats()
    assert stats["fixture_count"] == len(default_fixtures())
    assert stats["kinds"] == {
        "ArrowList": 2,
        "FiniteBallSpace": 3,
        "NestDescriptor": 4,
        "QuotientInput": 1,
        "SpaceList": 2,
    }


def test_health_of_empty_and_broken_corpora(tmp_path):
    missing = CorpusManager(str(tmp_path / "absent"))
    assert missing.check_corpus_health()["status"] == "empty"
    empty = CorpusManager(str(tmp_path))
    assert empty.check_corpus_health()["status"] == "empty"
    (tmp_path / "broken.json").write_text("{")
    health = empty.check_corpus_health()
    assert health["status"] == "error"
    assert any("Missing default fixtures" in warning for warning in health["warnings"])


def test_initialize_corpus_script(tmp_path, capsys):
    assert initialize_corpus(["--corpus-dir", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "Fixture Corpus Initialization" in out
    assert "SUCCESS: Corpus initialization complete!" in out
    assert initialize_corpus(["--corpus-dir", str(tmp_path)]) == 0
    assert "Nothing to write" in capsys.readouterr().out


def test_global_instance():
    assert get_corpus_manager() is get_corpus_manager()
