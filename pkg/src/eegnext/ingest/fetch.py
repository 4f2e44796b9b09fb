"""Digest-verified file retrieval with a local cache."""

from __future__ import annotations

import hashlib
import os
import urllib.error
import urllib.request
from pathlib import Path

from ..errors import DigestMismatch, NetworkError

_CHUNK = 1 << 16


def sha256_of(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        while True:
            chunk = fh.read(_CHUNK)
            if not chunk:
                break
            digest.update(chunk)
    return digest.hexdigest()


def fetch_file(url: str, expected_sha256: str, dest: str | Path) -> Path:
    """Download url to dest unless a digest-matching copy is already there.

    A corrupt download is deleted before DigestMismatch is raised.
    """
    dest = Path(dest)
    expected = expected_sha256.lower()
    if dest.exists() and sha256_of(dest) == expected:
        return dest

    dest.parent.mkdir(parents=True, exist_ok=True)
    tmp = dest.with_name(dest.name + ".part")
    digest = hashlib.sha256()
    try:
        with urllib.request.urlopen(url) as response, open(tmp, "wb") as out:
            while True:
                chunk = response.read(_CHUNK)
                if not chunk:
                    break
                digest.update(chunk)
                out.write(chunk)
    except (urllib.error.URLError, OSError) as exc:
        if tmp.exists():
            tmp.unlink()
        raise NetworkError(f"failed to fetch {url}: {exc}") from exc

    if digest.hexdigest() != expected:
        actual = digest.hexdigest()
        tmp.unlink()
        raise DigestMismatch(
            f"{url}: sha256 {actual} does not match expected {expected}"
        )
    os.replace(tmp, dest)
    return dest
