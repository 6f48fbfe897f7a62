"""On-disk cache of differential invariants (rank and Smith form).

Entries are keyed by a hash of the matrix content, the coefficient ring and
a code-version tag, so a cached value can only be reused for an identical
matrix.  Files are written to a temporary name and renamed into place.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path
import tempfile

from .exactlin import CoeffRing, SparseMatrix

CACHE_ENV = "PLANARLOOPS_CACHE_DIR"
FORMAT_VERSION = "1"


def _code_tag() -> str:
    from . import __version__

    return f"{__version__}/{FORMAT_VERSION}"


def default_cache_dir() -> Path | None:
    value = os.environ.get(CACHE_ENV)
    return Path(value) if value else None


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class InvariantCache:
    """Directory-backed store: ``<root>/inv/<ab>/<hash>.json`` plus ``index.jsonl``."""

    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)
        self.tag = _code_tag()
        self.hits = 0
        self.misses = 0

    def key(self, d: SparseMatrix, ring: CoeffRing) -> str:
        h = hashlib.sha256(f"{self.tag}|{ring.label}|{ring.a}|".encode())
        h.update(d.content_hash().encode())
        return h.hexdigest()

    def _path(self, key: str) -> Path:
        return self.root / "inv" / key[:2] / f"{key}.json"

    def get_invariants(self, d: SparseMatrix, ring: CoeffRing):
        path = self._path(self.key(d, ring))
        try:
            record = json.loads(path.read_text())
        except (FileNotFoundError, json.JSONDecodeError):
            self.misses += 1
            return None
        if record.get("tag") != self.tag:
            self.misses += 1
            return None
        self.hits += 1
        return record["rank"], record["factors"]

    def put_invariants(self, d: SparseMatrix, ring: CoeffRing, value) -> None:
        rank, factors = value
        key = self.key(d, ring)
        record = {"tag": self.tag, "rank": int(rank), "factors": [int(x) for x in factors],
                  "shape": list(d.shape), "ring": ring.label, "a": str(ring.a)}
        _atomic_write(self._path(key), json.dumps(record))
        line = json.dumps({"key": key, "shape": list(d.shape), "ring": ring.label, "rank": int(rank)})
        self.root.mkdir(parents=True, exist_ok=True)
        # single short appends are atomic on POSIX, so concurrent writers do not interleave
        with open(self.root / "index.jsonl", "a") as fh:
            fh.write(line + "\n")

    def index(self) -> list[dict]:
        path = self.root / "index.jsonl"
        if not path.exists():
            return []
        return [json.loads(line) for line in path.read_text().splitlines() if line.strip()]

    def clear(self) -> None:
        import shutil

        if self.root.exists():
            shutil.rmtree(self.root)


def open_cache(path: str | os.PathLike | None = None) -> InvariantCache | None:
    """The cache at ``path``, or at $PLANARLOOPS_CACHE_DIR, or None."""
    root = Path(path) if path else default_cache_dir()
    return InvariantCache(root) if root else None
