import os
import re
import logging
from dataclasses import dataclass
from pathlib import Path
from ..metrics.Footprint import model_memory_bytes
from .Writer import Writer
from .Reader import Reader

logger = logging.getLogger(__name__)

SUFFIX = ".cpsn"
_UNSAFE = re.compile(r"[^A-Za-z0-9._-]+")


@dataclass
class SnapshotConfig:
    dir: str = "./snapshots"


default_config = SnapshotConfig()


class SnapshotStore:
    def __init__(self, config: SnapshotConfig = default_config):
        self._config = config
        path = Path(config.dir)
        if path.exists() and not path.is_dir():
            raise TypeError("The snapshot dir config needs to be a directory")
        path.mkdir(parents=True, exist_ok=True)
        self._path = path

    def save(self, name: str, snapshot: dict) -> Path:
        """Write atomically: temp file, fsync, rename."""
        target = self._path / (_UNSAFE.sub("_", name) + SUFFIX)
        temp = target.with_name(target.name + ".tmp")
        with open(temp, "wb") as f:
            Writer(snapshot, f).save()
            f.flush()
            os.fsync(f.fileno())
        os.replace(temp, target)
        logger.debug(f"Saved snapshot {target}")
        return target


def load_snapshot(path) -> dict:
    with open(path, "rb") as f:
        return Reader(f).load()


def _count_kinds(node, counts: dict) -> None:
    if isinstance(node, dict):
        kind = node.get("kind")
        if kind in ("leaf", "split", "node"):
            counts["nodes"] += 1
        elif kind == "member":
            counts["members"] += 1
        for value in node.values():
            _count_kinds(value, counts)
    elif isinstance(node, list):
        for value in node:
            _count_kinds(value, counts)


def describe_snapshot(snapshot: dict) -> dict:
    """model kind, node and member counts (alternates and background trees included) and logical bytes"""
    counts = {"nodes": 0, "members": 0}
    _count_kinds(snapshot, counts)
    return {
        "model": snapshot.get("kind"),
        "nodes": counts["nodes"],
        "members": counts["members"],
        "logical_bytes": model_memory_bytes(snapshot),
    }
