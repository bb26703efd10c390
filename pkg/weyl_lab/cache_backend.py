"""Cache backend interface and implementations for computed spectra."""

import logging
from abc import ABC, abstractmethod
from pathlib import Path

from .exceptions import ConfigError
from .models import SpectrumRecord
from .parsers.spectra import parse_spectrum_json, spectrum_to_json
from .utils import atomic_write_text

logger = logging.getLogger(__name__)


class SpectrumCache(ABC):
    """Abstract base class for spectrum caches keyed by a parameter hash.

    Implement this interface to create custom backends (e.g. a shared store).
    """

    @abstractmethod
    def get(self, key: str) -> SpectrumRecord | None:
        """Get a cached record by key.

        Args:
            key: Hash of the builder metadata and eigenvalue back-end

        Returns:
            Cached record if found, None otherwise
        """
        pass

    @abstractmethod
    def set(self, key: str, record: SpectrumRecord) -> None:
        """Store a record.

        Args:
            key: Hash of the builder metadata and eigenvalue back-end
            record: Spectrum to cache
        """
        pass

    @abstractmethod
    def delete(self, key: str) -> None:
        """Delete a cached record by key."""
        pass

    @abstractmethod
    def clear(self) -> None:
        """Clear all cached records."""
        pass


class NullCache(SpectrumCache):
    """No-op cache backend that never caches anything."""

    def get(self, key: str) -> SpectrumRecord | None:
        return None

    def set(self, key: str, record: SpectrumRecord) -> None:
        pass

    def delete(self, key: str) -> None:
        pass

    def clear(self) -> None:
        pass


class MemoryCache(SpectrumCache):
    """In-memory cache (no persistence).

    Records are lost when the process exits.
    """

    def __init__(self):
        self._cache: dict[str, SpectrumRecord] = {}

    def get(self, key: str) -> SpectrumRecord | None:
        record = self._cache.get(key)
        if record is not None:
            logger.debug(f"Cache hit for key: {key}")
        return record

    def set(self, key: str, record: SpectrumRecord) -> None:
        self._cache[key] = record
        logger.debug(f"Cached spectrum for key: {key} (n={record.n})")

    def delete(self, key: str) -> None:
        if key in self._cache:
            del self._cache[key]
            logger.debug(f"Deleted cache for key: {key}")

    def clear(self) -> None:
        self._cache.clear()
        logger.debug("Cleared all cached spectra")


class FileCache(SpectrumCache):
    """File-based cache.

    Stores one canonical JSON record per key in a directory. Spectra are
    deterministic functions of their builder metadata, so entries never expire.
    """

    def __init__(self, cache_dir: str | Path = ".cache/weyl-lab"):
        """Initialize file cache.

        Args:
            cache_dir: Directory to store cache files (relative or absolute)
        """
        self.cache_dir = Path(cache_dir).expanduser().resolve()
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        logger.debug(f"File cache initialized at: {self.cache_dir}")

    def _get_cache_path(self, key: str) -> Path:
        """Get cache file path for a key."""
        safe_key = key.replace("/", "_").replace("\\", "_")
        return self.cache_dir / f"{safe_key}.json"

    def get(self, key: str) -> SpectrumRecord | None:
        cache_path = self._get_cache_path(key)

        if not cache_path.exists():
            return None

        try:
            record = parse_spectrum_json(cache_path.read_text(encoding="utf-8"))
            logger.debug(f"Cache hit for key: {key}")
            return record

        except (OSError, ConfigError, ValueError) as e:
            logger.warning(f"Failed to load cache for key {key}: {e}")
            cache_path.unlink(missing_ok=True)
            return None

    def set(self, key: str, record: SpectrumRecord) -> None:
        cache_path = self._get_cache_path(key)
        atomic_write_text(cache_path, spectrum_to_json(record))
        logger.debug(f"Cached spectrum for key: {key} at {cache_path}")

    def delete(self, key: str) -> None:
        cache_path = self._get_cache_path(key)
        cache_path.unlink(missing_ok=True)
        logger.debug(f"Deleted cache for key: {key}")

    def clear(self) -> None:
        for cache_file in self.cache_dir.glob("*.json"):
            cache_file.unlink()
        logger.debug(f"Cleared all cached spectra from {self.cache_dir}")
