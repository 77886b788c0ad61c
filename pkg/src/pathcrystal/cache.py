"""Content-addressed on-disk store for computed crystals and reports.

Entries live at ``<root>/<key[:2]>/<key>.json`` and wrap their payload with
a SHA-256 digest; a mismatch or unreadable file counts as a miss, logs a
warning and removes the entry.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from pathlib import Path as FsPath
from typing import Any

log = logging.getLogger(__name__)

ENV_VAR = "PATHCRYSTAL_CACHE"
# bump when the meaning of cached payloads changes
FORMAT_VERSION = 1


def default_root() -> FsPath:
    env = os.environ.get(ENV_VAR)
    if env:
        return FsPath(env)
    return FsPath.home() / ".cache" / "pathcrystal"


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest(obj: Any) -> str:
    data = obj if isinstance(obj, str) else canonical_json(obj)
    return hashlib.sha256(data.encode()).hexdigest()


def make_key(kind: str, type_label: str, rank: int, seed: Any, word: Any, extra: Any = None) -> str:
    """Key from ``(type, rank, seed hash, word hash)`` plus a payload kind."""
    return digest(
        {
            "v": FORMAT_VERSION,
            "kind": kind,
            "type": type_label,
            "rank": rank,
            "seed": digest(seed),
            "word": digest(word),
            "extra": extra,
        }
    )


class Cache:
    def __init__(self, root: FsPath | str | None = None, enabled: bool = True):
        self.root = FsPath(root) if root is not None else default_root()
        self.enabled = enabled
        self.hits = 0
        self.misses = 0

    def _file(self, key: str) -> FsPath:
        return self.root / key[:2] / f"{key}.json"

    def get(self, key: str) -> Any | None:
        if not self.enabled:
            return None
        path = self._file(key)
        if not path.exists():
            self.misses += 1
            return None
        try:
            entry = json.loads(path.read_text())
            payload = entry["payload"]
            if digest(payload) != entry["digest"]:
                raise ValueError("digest mismatch")
            value = json.loads(payload)
        except (ValueError, KeyError, TypeError) as exc:
            log.warning("corrupt cache entry %s (%s); recomputing", path, exc)
            path.unlink(missing_ok=True)
            self.misses += 1
            return None
        self.hits += 1
        return value

    def put(self, key: str, value: Any) -> None:
        if not self.enabled:
            return
        payload = canonical_json(value)
        path = self._file(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(canonical_json({"digest": digest(payload), "payload": payload}))
        tmp.replace(path)

    def entries(self) -> list[FsPath]:
        if not self.root.exists():
            return []
        return sorted(self.root.glob("*/*.json"))

    def status(self) -> dict:
        files = self.entries()
        return {
            "root": str(self.root),
            "entries": len(files),
            "bytes": sum(f.stat().st_size for f in files),
        }

    def clear(self) -> int:
        files = self.entries()
        for f in files:
            f.unlink()
        return len(files)
