"""JSON-lines cache of point counts keyed by (polynomial hash, p, k)."""

from __future__ import annotations

import fcntl
import hashlib
import json
import logging
import os
import threading
from pathlib import Path

log = logging.getLogger(__name__)

CACHE_ENV = "HYPERCM_CACHE"
DEFAULT_PATH = Path.home() / ".cache" / "hypercm" / "counts.jsonl"


def poly_hash(coeffs, p: int) -> str:
    """Hash of the coefficient list reduced mod p (ascending order)."""
    red = [int(c) % p for c in coeffs]
    while red and red[-1] == 0:
        red.pop()
    return hashlib.sha256(json.dumps([p, red]).encode()).hexdigest()[:32]


def default_cache_path() -> Path:
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else DEFAULT_PATH


class CountCache:
    """Append-only store; writes are serialized by a thread lock and an
    advisory file lock, and malformed lines are skipped with their numbers kept
    in ``rejected``."""

    def __init__(self, path: str | os.PathLike | None = None):
        self.path = Path(path) if path else default_cache_path()
        self._lock = threading.Lock()
        self._data: dict[tuple, int] = {}
        self.rejected: list[int] = []
        self._load()

    def _load(self) -> None:
        if not self.path.exists():
            return
        with open(self.path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                    key = (str(rec["poly_hash"]), int(rec["p"]), int(rec["k"]))
                    n = rec["N"]
                    if not isinstance(n, int) or isinstance(n, bool):
                        raise ValueError("N is not an integer")
                except (ValueError, KeyError, TypeError):
                    self.rejected.append(lineno)
                    continue
                self._data[key] = n
        if self.rejected:
            log.warning("cache %s: rejected malformed lines %s", self.path, self.rejected)

    def get(self, h: str, p: int, k: int) -> int | None:
        return self._data.get((h, p, k))

    def put(self, h: str, p: int, k: int, n: int) -> None:
        with self._lock:
            if self._data.get((h, p, k)) == n:
                return
            self._data[(h, p, k)] = n
            self.path.parent.mkdir(parents=True, exist_ok=True)
            line = json.dumps({"poly_hash": h, "p": p, "k": k, "N": int(n)})
            with open(self.path, "a", encoding="utf-8") as fh:
                fcntl.flock(fh, fcntl.LOCK_EX)
                try:
                    fh.write(line + "\n")
                finally:
                    fcntl.flock(fh, fcntl.LOCK_UN)

    def __len__(self) -> int:
        return len(self._data)
