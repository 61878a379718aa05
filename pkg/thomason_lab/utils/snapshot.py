"""Checked-in snapshot of the wiring search result."""

import hashlib
import json
from pathlib import Path
from typing import Union

from loguru import logger
from pydantic import ValidationError

from ..core.errors import SnapshotError
from ..core.family import GadgetWiring, WiringSearchResult


def candidates_checksum(candidates: list[GadgetWiring]) -> str:
    """sha256 of the compact, key-sorted JSON encoding of the candidate list."""
    payload = json.dumps(
        [c.model_dump(mode="json") for c in candidates],
        sort_keys=True,
        separators=(",", ":"),
        ensure_ascii=False,
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def save_snapshot(result: WiringSearchResult, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    document = {
        "candidates": [c.model_dump(mode="json") for c in result.candidates],
        "canonical": result.canonical,
        "checksum": candidates_checksum(result.candidates),
    }
    path.write_text(json.dumps(document, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.info(f"Wiring snapshot written to {path}")
    return path


def load_snapshot(path: Union[str, Path]) -> WiringSearchResult:
    path = Path(path)
    if not path.exists():
        raise SnapshotError(f"wiring snapshot {path} is missing; run the search command first")
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
        result = WiringSearchResult(candidates=document["candidates"], canonical=document["canonical"])
        checksum = document["checksum"]
    except (OSError, ValueError, KeyError, TypeError, ValidationError) as e:
        raise SnapshotError(f"wiring snapshot {path} is unreadable: {e}") from e
    if checksum != candidates_checksum(result.candidates):
        raise SnapshotError(f"wiring snapshot {path} fails its checksum")
    if not 0 <= result.canonical < len(result.candidates):
        raise SnapshotError(f"wiring snapshot {path} marks candidate {result.canonical} canonical")
    return result


def load_canonical_wiring(path: Union[str, Path]) -> GadgetWiring:
    return load_snapshot(path).canonical_wiring
