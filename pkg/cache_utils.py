"""
In-memory caches for expensive, deterministic computations.

Universal Witt polynomials and q-basis tables of generator powers are built once
per key and shared between threads.
"""
import logging
from collections import OrderedDict
from threading import Lock
from typing import Any, Callable, Dict, Hashable, Optional

logger = logging.getLogger(__name__)

_MISSING = object()


class LRUCache:
    """
    Thread-safe LRU cache with single-initialization semantics.

    Features:
    - LRU eviction when full
    - Thread-safe operations
    - get_or_create: racing callers all receive the one stored value
    """

    def __init__(self, max_size: int = 256, name: str = "cache"):
        """
        Initialize LRU cache.

        Args:
            max_size: Maximum number of entries
            name: Label used in log messages and stats
        """
        self.max_size = max_size
        self.name = name
        self.cache: OrderedDict = OrderedDict()
        self.lock = Lock()
        self.hits = 0
        self.misses = 0

    def get(self, key: Hashable) -> Optional[Any]:
        """Get value from cache, or None."""
        with self.lock:
            if key not in self.cache:
                return None
            self.cache.move_to_end(key)
            return self.cache[key]

    def set(self, key: Hashable, value: Any) -> Any:
        """
        Store value unless the key is already present.

        Returns:
            The value now stored under key (the earlier one if present)
        """
        with self.lock:
            if key in self.cache:
                self.cache.move_to_end(key)
                return self.cache[key]
            if len(self.cache) >= self.max_size:
                self._evict_oldest()
            self.cache[key] = value
            return value

    def get_or_create(self, key: Hashable, factory: Callable[[], Any]) -> Any:
        """
        Return the cached value for key, building it with factory on a miss.

        The factory runs outside the lock; if two threads race, the first stored
        value wins and both callers receive it.

        Args:
            key: Cache key
            factory: Zero-argument builder

        Returns:
            The single stored value
        """
        with self.lock:
            value = self.cache.get(key, _MISSING)
            if value is not _MISSING:
                self.hits += 1
                self.cache.move_to_end(key)
                return value
            self.misses += 1

        logger.debug(f"{self.name}: building entry for {key!r}")
        return self.set(key, factory())

    def clear(self):
        """Clear all cache entries."""
        with self.lock:
            self.cache.clear()
            self.hits = 0
            self.misses = 0

    def get_stats(self) -> Dict[str, Any]:
        """Get cache statistics."""
        with self.lock:
            return {
                "name": self.name,
                "size": len(self.cache),
                "max_size": self.max_size,
                "hits": self.hits,
                "misses": self.misses,
            }

    def __contains__(self, key: Hashable) -> bool:
        with self.lock:
            return key in self.cache

    def __len__(self) -> int:
        with self.lock:
            return len(self.cache)

    def _evict_oldest(self):
        if self.cache:
            oldest_key = next(iter(self.cache))
            del self.cache[oldest_key]
            logger.debug(f"{self.name}: evicted {oldest_key!r}")
