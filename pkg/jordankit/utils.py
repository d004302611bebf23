"""
Utility helpers for the jordankit package.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from pathlib import Path
from typing import Any, Iterable

from .errors import FileError, SchemaError


LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"
logging.basicConfig(level=os.getenv("JORDANKIT_LOG_LEVEL", "WARNING").upper(), format=LOG_FORMAT)
logger = logging.getLogger("jordankit.utils")


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(f"jordankit.{name}")


def set_log_level(level: int | str) -> None:
    """
    Adjust the level of every jordankit logger at once.
    """
    logging.getLogger("jordankit").setLevel(level)


def load_json(path: Path) -> Any:
    """
    Load JSON data from disk, turning I/O and decoding failures into FileError.
    """
    logger.debug("Loading JSON file: %s", path)
    try:
        with Path(path).open("r", encoding="utf-8") as handle:
            return json.load(handle)
    except FileNotFoundError as exc:
        raise FileError(f"file not found: {path}") from exc
    except OSError as exc:
        raise FileError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON (line {exc.lineno}, column {exc.colno})") from exc


def file_digest(paths: Iterable[Path]) -> str:
    """
    sha256 over the bytes of every input file, in the order given.
    """
    digest = hashlib.sha256()
    for path in paths:
        try:
            digest.update(Path(path).read_bytes())
        except OSError as exc:
            raise FileError(f"cannot read {path}: {exc}") from exc
    return digest.hexdigest()


def env_flag(name: str, default: bool = False) -> bool:
    """
    Read a boolean flag from the environment.
    """
    value = os.getenv(name)
    if value is None:
        return default
    return value.strip().lower() in {"1", "true", "yes", "on"}


def require_keys(payload: dict, keys: Iterable[str], where: str) -> None:
    if not isinstance(payload, dict):
        raise SchemaError(f"{where}: expected an object, got {type(payload).__name__}")
    missing = [key for key in keys if key not in payload]
    if missing:
        raise SchemaError(f"{where}: missing field(s) {', '.join(missing)}")
