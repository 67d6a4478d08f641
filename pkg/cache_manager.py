"""
Cache management for repeated classifications.
Handles caching of hierarchy reports and finite-union closures, keyed by the canonical JSON of a space
and the enumeration bounds in force.
"""
from dataclasses import asdict
from typing import Dict, Any, Optional
import hashlib
import json

from config import Bounds, get_bounds
from finite_core import FiniteBallSpace, HierarchyReport, classify, f_un_closure


class CacheManager:
    """
    Manages caching for the randomized verifiers and searches.
    """

    def __init__(self, max_size: int = 1000):
        """
        Initialize cache manager.

        Args:
            max_size: Maximum number of cached items per cache
        """
        self.max_size = max_size
        self._report_cache: Dict[str, HierarchyReport] = {}
        self._closure_cache: Dict[str, FiniteBallSpace] = {}
        self._hits = 0
        self._misses = 0

    def _generate_key(self, space: FiniteBallSpace, bounds: Optional[Bounds] = None) -> str:
        """Generate cache key from the canonical JSON of a space and the bounds."""
        payload = {"space": space.to_json(), "bounds": asdict(bounds or get_bounds())}
        text = json.dumps(payload, sort_keys=True)
        return hashlib.md5(text.encode()).hexdigest()

    def _store(self, cache: Dict[str, Any], key: str, value: Any):
        if len(cache) >= self.max_size:
            # Remove oldest entry (simple FIFO)
            first_key = next(iter(cache))
            del cache[first_key]
        cache[key] = value

    def _lookup(self, cache: Dict[str, Any], key: str) -> Optional[Any]:
        value = cache.get(key)
        if value is None:
            self._misses += 1
        else:
            self._hits += 1
        return value

    def get_report(self, space: FiniteBallSpace, bounds: Optional[Bounds] = None) -> Optional[HierarchyReport]:
        """
        Get cached hierarchy report.

        Args:
            space: Space to look up
            bounds: Bounds the report was computed under (defaults to the configured ones)

        Returns:
            Cached report or None
        """
        return self._lookup(self._report_cache, self._generate_key(space, bounds))

    def set_report(self, space: FiniteBallSpace, report: HierarchyReport, bounds: Optional[Bounds] = None):
        self._store(self._report_cache, self._generate_key(space, bounds), report)

    def get_closure(self, space: FiniteBallSpace, bounds: Optional[Bounds] = None) -> Optional[FiniteBallSpace]:
        """
        Get cached finite-union closure.

        Args:
            space: Space to look up
            bounds: Bounds the closure was computed under

        Returns:
            Cached closure or None
        """
        return self._lookup(self._closure_cache, self._generate_key(space, bounds))

    def set_closure(self, space: FiniteBallSpace, closure: FiniteBallSpace, bounds: Optional[Bounds] = None):
        self._store(self._closure_cache, self._generate_key(space, bounds), closure)

    def classify(self, space: FiniteBallSpace, bounds: Optional[Bounds] = None) -> HierarchyReport:
        """classify with the report cache in front."""
        report = self.get_report(space, bounds)
        if report is None:
            report = classify(space, bounds)
            self.set_report(space, report, bounds)
        return report

    def f_un_closure(self, space: FiniteBallSpace, bounds: Optional[Bounds] = None) -> FiniteBallSpace:
        """f_un_closure with the closure cache in front."""
        closure = self.get_closure(space, bounds)
        if closure is None:
            closure = f_un_closure(space, bounds)
            self.set_closure(space, closure, bounds)
        return closure

    def clear_cache(self, cache_type: Optional[str] = None):
        """
        Clear cache.

        Args:
            cache_type: Type of cache to clear ('report', 'closure', or None for all)
        """
        if cache_type == "report":
            self._report_cache.clear()
        elif cache_type == "closure":
            self._closure_cache.clear()
        else:
            self._report_cache.clear()
            self._closure_cache.clear()
            self._hits = 0
            self._misses = 0

    def get_cache_stats(self) -> Dict[str, Any]:
        """
        Get cache statistics.

        Returns:
            Dictionary with cache stats
        """
        return {
            "report_cache_size": len(self._report_cache),
            "closure_cache_size": len(self._closure_cache),
            "hits": self._hits,
            "misses": self._misses,
            "max_size": self.max_size
        }


# Global instance
_cache_manager: Optional[CacheManager] = None


def get_cache_manager() -> CacheManager:
    """Get or create global cache manager instance."""
    global _cache_manager
    if _cache_manager is None:
        _cache_manager = CacheManager()
    return _cache_manager
