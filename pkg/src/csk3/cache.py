"""On-disk cache of rank witnesses keyed by (family, twist class).

Every entry is re-verified exactly on load; anything corrupt or stale is
dropped with a warning rather than trusted.  Writes go through an atomic
replace so a crash cannot leave a torn file.
"""

from __future__ import annotations

import json
import os
import tempfile
import warnings
from fractions import Fraction
from pathlib import Path

from .elliptic import (
    ExternalFact,
    Point,
    RankPositivityCertificate,
    SearchFound,
    TwistedCurve,
)

SCHEMA_VERSION = 1


def _encode_provenance(prov) -> dict:
    if isinstance(prov, SearchFound):
        return {"kind": "search", "height_bound": prov.height_bound, "method": prov.method}
    return {"kind": "external", "claimed_rank": prov.claimed_rank, "citation": prov.citation}


def _decode_provenance(data: dict):
    if data["kind"] == "search":
        return SearchFound(int(data["height_bound"]), str(data["method"]))
    if data["kind"] == "external":
        return ExternalFact(int(data["claimed_rank"]), str(data["citation"]))
    raise ValueError(f"unknown provenance kind {data['kind']!r}")


def encode_certificate(cert: RankPositivityCertificate) -> dict:
    entry = {"provenance": _encode_provenance(cert.provenance)}
    if cert.witness is not None:
        entry["witness"] = {"x": str(cert.witness.x), "y": str(cert.witness.y)}
    return entry


def decode_certificate(family: str, D: int, entry: dict) -> RankPositivityCertificate:
    witness = None
    if "witness" in entry:
        witness = Point(Fraction(entry["witness"]["x"]), Fraction(entry["witness"]["y"]))
    return RankPositivityCertificate(
        TwistedCurve(D, family), witness, _decode_provenance(entry["provenance"]))


class PointCache:
    """Mapping (family, D) -> RankPositivityCertificate, persisted as JSON."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._entries: dict[tuple[str, int], RankPositivityCertificate] = {}
        if self.path.exists():
            self._load()

    def _load(self) -> None:
        try:
            raw = json.loads(self.path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            warnings.warn(f"ignoring unreadable cache {self.path}: {exc}")
            return
        if raw.get("schema_version") != SCHEMA_VERSION:
            warnings.warn(f"ignoring cache {self.path} with schema {raw.get('schema_version')}")
            return
        for key, entry in raw.get("entries", {}).items():
            try:
                family, D = key.rsplit(":", 1)
                cert = decode_certificate(family, int(D), entry)
            except (ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
                warnings.warn(f"dropping corrupt cache entry {key!r}: {exc}")
                continue
            if not cert.verify():
                warnings.warn(f"dropping cache entry {key!r}: failed exact re-verification")
                continue
            self._entries[(family, int(D))] = cert

    def get(self, family: str, D: int) -> RankPositivityCertificate | None:
        return self._entries.get((family, D))

    def put(self, cert: RankPositivityCertificate) -> None:
        self._entries[(cert.curve.family, cert.curve.D)] = cert

    def save(self) -> None:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "entries": {
                f"{family}:{D}": encode_certificate(cert)
                for (family, D), cert in sorted(self._entries.items())
            },
        }
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
        self.path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.path.parent, prefix=self.path.name, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as handle:
                handle.write(text)
            os.replace(tmp, self.path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
