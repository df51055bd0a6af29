"""Optional on-disk memo store, enabled by the EOPS_CACHE_DIR environment
variable.  Files hold length-prefixed binary records: u32 key length, key
bytes, u32 value length, value bytes (JSON payloads).  Records are appended;
duplicate keys resolve to the last one written.
"""

from __future__ import annotations

import json
import os
import struct


class RecordStore:
    def __init__(self, kind: str):
        self.kind = kind
        self.path = None
        self.data = {}
        root = os.environ.get("EOPS_CACHE_DIR")
        if root:
            os.makedirs(root, exist_ok=True)
            self.path = os.path.join(root, f"{kind}.bin")
            self._load()

    def _load(self):
        if not self.path or not os.path.exists(self.path):
            return
        try:
            with open(self.path, "rb") as fh:
                blob = fh.read()
            pos = 0
            while pos + 8 <= len(blob):
                (klen,) = struct.unpack_from("<I", blob, pos)
                pos += 4
                key = blob[pos:pos + klen]
                pos += klen
                (vlen,) = struct.unpack_from("<I", blob, pos)
                pos += 4
                val = blob[pos:pos + vlen]
                pos += vlen
                self.data[key.decode()] = json.loads(val.decode())
        except (OSError, ValueError, struct.error):
            self.data = {}

    def get(self, key: str):
        return self.data.get(key)

    def put(self, key: str, value):
        self.data[key] = value
        if not self.path:
            return
        kb, vb = key.encode(), json.dumps(value).encode()
        with open(self.path, "ab") as fh:
            fh.write(struct.pack("<I", len(kb)) + kb)
            fh.write(struct.pack("<I", len(vb)) + vb)


_stores = {}


def store(kind: str) -> RecordStore:
    if kind not in _stores:
        _stores[kind] = RecordStore(kind)
    return _stores[kind]
