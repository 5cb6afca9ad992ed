"""
Automorphism Cache
==================
Thread-safe store of Aut(G) enumerations keyed by the Cayley table hash,
kept in memory and mirrored to JSON files under the cache directory.
"""

import json
import logging
import threading
from datetime import datetime, timedelta
from pathlib import Path
from typing import Dict, List, Optional

from algebra.groups import FiniteGroup

logger = logging.getLogger(__name__)

CACHE_VERSION = 1


class AutCache:
    """Aut enumerations shared by every command of one invocation"""

    def __init__(self, cache_dir: Optional[Path] = None, max_age_days: int = 20):
        """
        Initialize the cache.

        Args:
            cache_dir: Directory for JSON files, or None for memory only
            max_age_days: Files older than this are ignored and removed
        """
        self.cache_dir = Path(cache_dir).expanduser() if cache_dir is not None else None
        self.max_age = timedelta(days=max_age_days)
        self.entries: Dict[str, List[List[int]]] = {}
        self.lock = threading.Lock()
        self.hits = 0
        self.misses = 0
        if self.cache_dir is not None:
            self.cache_dir.mkdir(parents=True, exist_ok=True)
            self._cleanup_old_entries()

    def _path(self, fingerprint: str) -> Optional[Path]:
        if self.cache_dir is None:
            return None
        return self.cache_dir / f"aut-{fingerprint}.json"

    def get(self, group: FiniteGroup) -> Optional[List[List[int]]]:
        """
        Look up the automorphisms of a group.

        Args:
            group: Group whose table hash is the key

        Returns:
            Forward arrays in stored order, or None on a miss
        """
        with self.lock:
            key = group.fingerprint
            if key in self.entries:
                self.hits += 1
                return self.entries[key]
            stored = self._read(key, group.order)
            if stored is None:
                self.misses += 1
                return None
            self.entries[key] = stored
            self.hits += 1
            logger.debug("aut cache hit on disk for order %d", group.order)
            return stored

    def put(self, group: FiniteGroup, forwards: List[List[int]]) -> None:
        with self.lock:
            key = group.fingerprint
            self.entries[key] = [list(map(int, f)) for f in forwards]
            path = self._path(key)
            if path is None:
                return
            document = {
                'version': CACHE_VERSION,
                'order': group.order,
                'fingerprint': key,
                'created_at': datetime.now().isoformat(),
                'automorphisms': self.entries[key],
            }
            path.write_text(json.dumps(document))

    def _read(self, key: str, order: int) -> Optional[List[List[int]]]:
        path = self._path(key)
        if path is None or not path.exists():
            return None
        try:
            document = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            logger.warning("ignoring unreadable cache file %s: %s", path, exc)
            return None
        if document.get('version') != CACHE_VERSION or document.get('fingerprint') != key \
                or document.get('order') != order:
            logger.warning("ignoring stale cache file %s", path)
            return None
        if datetime.fromisoformat(document['created_at']) < datetime.now() - self.max_age:
            return None
        return document['automorphisms']

    def clear(self) -> None:
        with self.lock:
            self.entries.clear()

    def _cleanup_old_entries(self):
        """Remove cache files older than max_age"""
        cutoff = datetime.now() - self.max_age
        for path in self.cache_dir.glob("aut-*.json"):
            try:
                created = datetime.fromisoformat(json.loads(path.read_text())['created_at'])
            except (OSError, ValueError, KeyError) as exc:
                logger.warning("removing unreadable cache file %s: %s", path, exc)
                path.unlink(missing_ok=True)
                continue
            if created < cutoff:
                logger.warning("removing expired cache file %s", path)
                path.unlink(missing_ok=True)
