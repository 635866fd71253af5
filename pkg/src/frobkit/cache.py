"""Persistent Groebner-basis cache: content-addressed files on disk.

Keys hash the ring, rank and generators; entries are JSON files written via
a temp-file-then-rename so concurrent writers are safe.  Loaded entries are
re-validated as reduced Groebner bases and recomputed when corrupt, never
trusted.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile

from . import groebner
from .ring import Poly

ENV_VAR = "FROBKIT_CACHE_DIR"


class BasisStore:
    """File-backed store pluggable into the Groebner layer."""

    def __init__(self, directory):
        self.directory = directory
        os.makedirs(directory, exist_ok=True)

    def _path(self, key):
        digest = hashlib.sha256(repr(key).encode()).hexdigest()
        return os.path.join(self.directory, digest + ".json")

    def load(self, key, ring, rank):
        path = self._path(key)
        try:
            with open(path, "r", encoding="utf-8") as fh:
                payload = json.load(fh)
            basis = [_dict_from_payload(vec, ring) for vec in payload["basis"]]
        except (OSError, ValueError, KeyError, TypeError):
            return None
        vecs = [groebner._dict_to_vec(d, ring, rank) for d in basis]
        if not groebner.is_reduced_groebner(vecs, ring, rank):
            try:
                os.remove(path)
            except OSError:
                pass
            return None
        return basis

    def store(self, key, basis_dicts, ring, rank):
        payload = {"basis": [_dict_to_payload(d) for d in basis_dicts]}
        path = self._path(key)
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(payload, fh, sort_keys=True)
            os.replace(tmp, path)
        except OSError:
            try:
                os.remove(tmp)
            except OSError:
                pass


def _dict_to_payload(d):
    return [[pos, list(m), c] for (pos, m), c in sorted(d.items())]


def _dict_from_payload(items, ring):
    out = {}
    for pos, m, c in items:
        out[(int(pos), tuple(int(e) for e in m))] = int(c) % ring.p
    return out


def attach_store(directory=None):
    """Attach a persistent store; directory defaults to the env variable."""
    if directory is None:
        directory = os.environ.get(ENV_VAR)
    if not directory:
        return None
    store = BasisStore(directory)
    groebner.set_store(store)
    return store


def detach_store():
    groebner.set_store(None)
