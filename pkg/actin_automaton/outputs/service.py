import json
import logging
import os
import sys
import tempfile
from contextlib import contextmanager
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
import pandas as pd

from actin_automaton import __version__
from actin_automaton.automaton import EXCITED, Configuration
from actin_automaton.errors import InputError, UsageError
from actin_automaton.models import RunManifest
from actin_automaton.utils.seeds import sha256_file

logger = logging.getLogger(__name__)

# ======================================================
# GLOBAL OUTPUT RULES (SINGLE SOURCE OF TRUTH)
# ======================================================

ALLOWED_FORMATS = {
    ".csv": "csv",
    ".ndjson": "ndjson",
    ".jsonl": "ndjson",
    ".txt": "txt",
    ".json": "json",
}

MANIFEST_SUFFIX = ".manifest.json"


# ======================================================
# DESTINATION CHECKS
# ======================================================

def check_destination(path: str | Path, allowed: set[str] | None = None) -> Path:
    """Validate an output path before any work is done."""
    path = Path(path)
    fmt = ALLOWED_FORMATS.get(path.suffix.lower())
    if fmt is None or (allowed is not None and fmt not in allowed):
        permitted = sorted(allowed or set(ALLOWED_FORMATS.values()))
        raise UsageError(
            f"Unsupported output format: '{path.suffix or path.name}'. Allowed: {', '.join(permitted)}"
        )
    parent = path.parent if str(path.parent) else Path(".")
    if not parent.is_dir():
        raise InputError(f"Output directory does not exist: '{parent}'")
    return path


def manifest_path(data_path: str | Path) -> Path:
    data_path = Path(data_path)
    return data_path.with_name(data_path.name + MANIFEST_SUFFIX)


# ======================================================
# CENTRAL WRITE HANDLER
# ======================================================

@contextmanager
def atomic_writer(path: str | Path, binary: bool = False):
    """
    Write to a temporary file next to ``path`` and rename it into place
    only when the block finishes without an exception.
    """
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "wb" if binary else "w", **({} if binary else {"encoding": "utf-8", "newline": ""})) as f:
            yield f
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise
    logger.debug("Output written | path=%s", path)


def write_text(path: str | Path, text: str) -> Path:
    with atomic_writer(path) as f:
        f.write(text)
    return Path(path)


def write_frame(path: str | Path, df: pd.DataFrame) -> Path:
    with atomic_writer(path) as f:
        df.to_csv(f, index=False, lineterminator="\n")
    return Path(path)


def write_json(path: str | Path, payload) -> Path:
    return write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def emit(text: str, path: str | Path | None = None) -> None:
    """Data goes to ``path`` when given, else to stdout."""
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        write_text(path, text)


def emit_frame(df: pd.DataFrame, path: str | Path | None = None) -> None:
    """A table as CSV, to ``path`` when given, else to stdout."""
    if path is None:
        df.to_csv(sys.stdout, index=False, lineterminator="\n")
        sys.stdout.flush()
    else:
        write_frame(path, df)


# ======================================================
# SNAPSHOT STREAM (NDJSON)
# ======================================================

class SnapshotWriter:
    """
    NDJSON sink for per-step states. Usable as the ``on_step`` callback of
    the trajectory runners; the file appears only when the run succeeds.
    Without a path the records stream to stdout.
    """

    def __init__(self, path: str | Path | None = None):
        self.path = None if path is None else Path(path)
        self._ctx = None
        self._f = None
        self.count = 0

    def __enter__(self) -> "SnapshotWriter":
        if self.path is None:
            self._f = sys.stdout
            return self
        self._ctx = atomic_writer(self.path)
        self._f = self._ctx.__enter__()
        return self

    def __exit__(self, exc_type, exc, tb):
        if self._ctx is None:
            self._f.flush()
            return False
        return self._ctx.__exit__(exc_type, exc, tb)

    def __call__(self, step: int, states: np.ndarray, note: str | None = None) -> None:
        record = {
            "step": int(step),
            "excited": int(np.count_nonzero(states == EXCITED)),
            "states": Configuration(states).to_string(),
        }
        if note:
            record["note"] = note
        self._f.write(json.dumps(record) + "\n")
        self.count += 1


# ======================================================
# MANIFESTS
# ======================================================

def write_manifest(
    data_path: str | Path,
    command: str,
    argv: list[str],
    parameters: dict,
    graph_path: str | Path | None = None,
    extra_outputs: list[str | Path] = (),
) -> Path:
    outputs = {}
    for p in [data_path, *extra_outputs]:
        outputs[str(p)] = sha256_file(p)

    manifest = RunManifest(
        tool_version=__version__,
        command=command,
        argv=list(argv),
        cwd=os.getcwd(),
        graph_checksum=sha256_file(graph_path) if graph_path else None,
        parameters=parameters,
        timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        outputs=outputs,
    )
    target = manifest_path(data_path)
    write_text(target, manifest.model_dump_json(indent=2) + "\n")
    logger.info("Manifest written | path=%s outputs=%s", target, len(outputs))
    return target


def read_manifest(path: str | Path) -> RunManifest:
    try:
        return RunManifest.model_validate_json(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise InputError(f"Cannot read manifest '{path}': {e}") from e
    except ValueError as e:
        raise InputError(f"Malformed manifest '{path}': {e}") from e
