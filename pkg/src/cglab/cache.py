"""JSON serialization of growth tables and an on-disk series cache."""
from __future__ import annotations

import hashlib
import json
import os
import re
import tempfile
from pathlib import Path

from .errors import CacheCorrupt
from .growth import ENGINE_VERSION, GrowthTable

SCHEMA = 1
CACHE_ENV = "CGLAB_CACHE"


def table_payload(t: GrowthTable) -> dict:
    return {
        "schema": SCHEMA,
        "group": t.group,
        "kind": t.kind,
        "mode": t.mode,
        "engine": t.engine,
        "coeffs": [str(c) for c in t.coeffs],
    }


def table_to_json(t: GrowthTable) -> str:
    return json.dumps(table_payload(t), sort_keys=True)


def table_from_dict(d: dict) -> GrowthTable:
    if d.get("schema") != SCHEMA:
        raise ValueError(f"unsupported table schema {d.get('schema')!r}")
    return GrowthTable(d["group"], d["kind"], d["mode"],
                       tuple(int(c) for c in d["coeffs"]), d["engine"])


def table_from_json(text: str) -> GrowthTable:
    return table_from_dict(json.loads(text))


def table_to_csv(t: GrowthTable) -> str:
    return "\n".join(f"{n},{c}" for n, c in enumerate(t.coeffs))


def _checksum(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


class SeriesCache:
    """One JSON file per (group, kind, mode) under ``root``.

    Entries record the engine, ``n_max`` and :data:`ENGINE_VERSION`; a
    lookup hits only when all of them match.  Writes are atomic.
    """

    def __init__(self, root):
        self.root = Path(root)

    @classmethod
    def from_env(cls, flag: str | None = None) -> "SeriesCache | None":
        root = flag or os.environ.get(CACHE_ENV)
        return cls(root) if root else None

    def path(self, group: str, kind: str, mode: str) -> Path:
        stem = re.sub(r"[^A-Za-z0-9]+", "_", group).strip("_")
        return self.root / f"{stem}__{kind}__{mode}.json"

    def put(self, t: GrowthTable) -> Path:
        payload = table_payload(t)
        payload["engine_version"] = ENGINE_VERSION
        payload["n_max"] = t.n_max
        doc = dict(payload, checksum=_checksum(payload))
        path = self.path(t.group, t.kind, t.mode)
        self.root.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(json.dumps(doc, sort_keys=True))
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return path

    def read(self, path: Path) -> tuple:
        """``(table, n_max, engine_version)`` from one cache file; verifies the checksum."""
        try:
            doc = json.loads(path.read_text())
            stored = doc.pop("checksum")
        except (OSError, ValueError, KeyError, AttributeError) as exc:
            raise CacheCorrupt(f"unreadable cache file {path}: {exc}") from exc
        if _checksum(doc) != stored:
            raise CacheCorrupt(f"checksum mismatch in cache file {path}")
        return table_from_dict(doc), doc["n_max"], doc["engine_version"]

    def get(self, group: str, kind: str, mode: str, engine: str, n_max: int):
        path = self.path(group, kind, mode)
        if not path.exists():
            return None
        table, cached_n, version = self.read(path)
        if version != ENGINE_VERSION or table.engine != engine or cached_n != n_max:
            return None
        return table
