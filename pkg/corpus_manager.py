"""
Fixture corpus management.
Handles writing, listing, loading and health checks of the JSON fixtures in the corpus directory.
"""
import os
from typing import Any, Callable, Dict, List, Optional

from category import augment
from config import get_corpus_dir
from errors import BallSpaceError, SpaceFileError
from finite_core import new_space
from space_io import (
    arrows_to_json,
    is_supported_file_type,
    load_object,
    object_from_json,
    read_json,
    spaces_to_json,
    write_json,
)
from symbolic import final_segments, lex_ultra_nest, prime_gap_union


def default_fixtures() -> Dict[str, Any]:
    """
    The worked examples shipped with the workbench, keyed by fixture name.

    Returns:
        Mapping of name to an object with to_json or a plain JSON payload
    """
    point = new_space(1, [[0]])
    return {
        "witness_space": new_space(3, [[0, 1], [1, 2]]),
        "one_point": point,
        "union_pair": spaces_to_json([new_space(3, [[0, 1]]), new_space(3, [[1, 2]])]),
        "product_pair": spaces_to_json([new_space(2, [[0]]), new_space(2, [[1]])]),
        "quotient_input": {
            "space": new_space(4, [[0, 1], [2, 3], [0, 1, 2, 3]]).to_json(),
            "table": [0, 0, 1, 1],
            "target_size": 2,
        },
        "fun_pair": new_space(2, [[0], [1]]),
        "final_sources": arrows_to_json(2, [((0,), augment(point)), ((1,), augment(point))]),
        "initial_sinks": arrows_to_json(3, [((0, 0, 1), augment(new_space(2, [[0]])))]),
        "prime_gap_nest": prime_gap_union(),
        "final_segments_nest": final_segments(),
        "lex_all_ones_nest": lex_ultra_nest([], [1]),
        "lex_eventually_zero_nest": lex_ultra_nest([1, 1], [0]),
    }


def _fixture_kind(payload: Any) -> str:
    try:
        return type(object_from_json(payload)).__name__
    except (BallSpaceError, KeyError, TypeError, ValueError, AttributeError):
        pass
    if isinstance(payload, dict):
        if "spaces" in payload:
            return "SpaceList"
        if "arrows" in payload:
            return "ArrowList"
        if "table" in payload and "space" in payload:
            return "QuotientInput"
    return "Unknown"


class CorpusManager:
    """
    Manages the fixture corpus: writing, listing, loading, health.
    """

    def __init__(self, corpus_dir: Optional[str] = None):
        """
        Initialize corpus manager.

        Args:
            corpus_dir: Directory holding the JSON fixtures (defaults to BALLSPACE_CORPUS_DIR)
        """
        self.corpus_dir = corpus_dir or get_corpus_dir()

    def fixture_path(self, name: str) -> str:
        return os.path.join(self.corpus_dir, f"{name}.json")

    def list_fixtures(self) -> List[str]:
        """
        Names of all JSON fixtures in the corpus directory.

        Returns:
            Sorted fixture names without extension
        """
        if not os.path.isdir(self.corpus_dir):
            return []
        names = []
        for entry in os.listdir(self.corpus_dir):
            full_path = os.path.join(self.corpus_dir, entry)
            if os.path.isfile(full_path):
                is_valid, _ = is_supported_file_type(full_path)
                if is_valid:
                    names.append(os.path.splitext(entry)[0])
        return sorted(names)

    def load_fixture(self, name: str, loader: Callable[[str], Any] = load_object) -> Any:
        """
        Load a fixture with the given file loader.

        Raises:
            SpaceFileError: If the fixture is missing or invalid
        """
        path = self.fixture_path(name)
        if not os.path.isfile(path):
            raise SpaceFileError(path, f"no fixture named {name!r} in {self.corpus_dir}")
        return loader(path)

    def write_fixture(self, name: str, obj: Any) -> str:
        return write_json(self.fixture_path(name), obj)

    def write_default_fixtures(self, force: bool = False) -> Dict[str, Any]:
        """
        Write every default fixture.

        Args:
            force: If True, overwrite fixtures that already exist

        Returns:
            Dictionary with write results
        """
        results = {
            "written": 0,
            "skipped": 0,
            "failed": 0,
            "errors": []
        }
        for name, obj in default_fixtures().items():
            if not force and os.path.isfile(self.fixture_path(name)):
                results["skipped"] += 1
                continue
            try:
                self.write_fixture(name, obj)
                results["written"] += 1
                print(f"  OK: Wrote: {name}.json")
            except OSError as e:
                results["failed"] += 1
                results["errors"].append(f"Error writing {name}: {e}")
                print(f"  FAILED: {name}.json - {e}")
        return results

    def get_corpus_stats(self) -> Dict[str, Any]:
        """
        Get statistics about the corpus.

        Returns:
            Dictionary with the directory, fixture count and counts per object kind
        """
        kinds: Dict[str, int] = {}
        for name in self.list_fixtures():
            try:
                kind = _fixture_kind(read_json(self.fixture_path(name)))
            except SpaceFileError:
                kind = "Invalid"
            kinds[kind] = kinds.get(kind, 0) + 1
        return {
            "corpus_directory": self.corpus_dir,
            "fixture_count": sum(kinds.values()),
            "kinds": dict(sorted(kinds.items())),
        }

    def check_corpus_health(self) -> Dict[str, Any]:
        """
        Check that the corpus exists, parses and holds every default fixture.

        Returns:
            Dictionary with health status
        """
        health = {
            "status": "healthy",
            "corpus_exists": os.path.isdir(self.corpus_dir),
            "fixture_count": 0,
            "warnings": []
        }
        if not health["corpus_exists"]:
            health["status"] = "empty"
            health["warnings"].append(f"Corpus directory {self.corpus_dir} not found. Run initialize_corpus.py first.")
            return health

        names = self.list_fixtures()
        health["fixture_count"] = len(names)
        if not names:
            health["status"] = "empty"
            health["warnings"].append("Corpus is empty. Run initialize_corpus.py first.")
            return health

        for name in names:
            try:
                if _fixture_kind(read_json(self.fixture_path(name))) == "Unknown":
                    health["warnings"].append(f"{name}.json is not a recognized fixture")
            except SpaceFileError as e:
                health["status"] = "error"
                health["warnings"].append(str(e))
        missing = sorted(set(default_fixtures()) - set(names))
        if missing:
            health["warnings"].append(f"Missing default fixtures: {', '.join(missing)}")
        return health


# Global instance
_corpus_manager: Optional[CorpusManager] = None


def get_corpus_manager() -> CorpusManager:
    """Get or create global corpus manager instance."""
    global _corpus_manager
    if _corpus_manager is None:
        _corpus_manager = CorpusManager()
    return _corpus_manager
