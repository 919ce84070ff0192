"""Content-addressed on-disk cache for braid matrices, Gram families and KL data."""

import hashlib
import json
import logging
import os
import pickle
import tempfile
from typing import Any, Callable, Optional

import config as constants

logger = logging.getLogger(__name__)


class DiskCache:
    """Pickle store keyed by a hash of (realization, engine version, kind, payload).

    Values are pure functions of their key, so a hit never changes a result.
    Writes go to a temporary file that is renamed into place.
    """

    def __init__(self, directory: str, realization_key: str):
        self.directory = directory
        self.realization_key = realization_key
        self.hits = 0
        self.misses = 0
        os.makedirs(directory, exist_ok=True)

    def key(self, kind: str, payload: Any) -> str:
        blob = json.dumps(
            [self.realization_key, constants.ENGINE_VERSION, kind, payload],
            sort_keys=True, separators=(",", ":"), default=str,
        )
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()

    def _path(self, digest: str) -> str:
        return os.path.join(self.directory, digest[:2], digest + ".pkl")

    def get(self, kind: str, payload: Any) -> Optional[Any]:
        path = self._path(self.key(kind, payload))
        if not os.path.exists(path):
            self.misses += 1
            return None
        try:
            with open(path, "rb") as fh:
                value = pickle.load(fh)
        except (OSError, pickle.UnpicklingError, EOFError) as exc:
            logger.warning("Discarding unreadable cache entry %s: %s", path, exc)
            self.misses += 1
            return None
        self.hits += 1
        return value

    def put(self, kind: str, payload: Any, value: Any) -> None:
        path = self._path(self.key(kind, payload))
        os.makedirs(os.path.dirname(path), exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as fh:
                pickle.dump(value, fh, protocol=pickle.HIGHEST_PROTOCOL)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.remove(tmp)
            raise

    def get_or_compute(self, kind: str, payload: Any, compute: Callable[[], Any]) -> Any:
        value = self.get(kind, payload)
        if value is None:
            value = compute()
            self.put(kind, payload, value)
        return value

    def summary(self) -> str:
        return f"cache {self.directory}: {self.hits} hits, {self.misses} misses"


class NullCache:
    """Same interface as DiskCache; stores nothing."""

    hits = 0
    misses = 0

    def get(self, kind: str, payload: Any) -> None:
        return None

    def put(self, kind: str, payload: Any, value: Any) -> None:
        pass

    def get_or_compute(self, kind: str, payload: Any, compute: Callable[[], Any]) -> Any:
        return compute()

    def summary(self) -> str:
        return "cache disabled"


def open_cache(directory: Optional[str], realization_key: str, enabled: bool = True):
    if not enabled or not directory:
        return NullCache()
    return DiskCache(directory, realization_key)
