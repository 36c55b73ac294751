import logging
import os
from pathlib import Path

from actin_automaton.config import Settings
from actin_automaton.errors import InputError
from actin_automaton.outputs.service import read_manifest
from actin_automaton.utils.seeds import sha256_file

logger = logging.getLogger(__name__)

HELP = """\
Re-run the command recorded in a manifest and check that every output
file it lists comes out with the recorded SHA-256.
"""


def register(subparsers) -> None:
    p = subparsers.add_parser("replay", help="re-run a manifest and verify its outputs", description=HELP)
    p.add_argument("manifest", help="<output>.manifest.json")
    p.set_defaults(handler=handle)


def handle(args, settings: Settings) -> int:
    from actin_automaton.main import run

    manifest_file = Path(args.manifest).resolve()
    manifest = read_manifest(manifest_file)
    if manifest.command == "replay":
        raise InputError("Manifest records a replay; nothing to re-run")

    workdir = manifest.cwd or str(manifest_file.parent)
    previous = os.getcwd()
    os.chdir(workdir)
    try:
        code = run(manifest.argv)
    finally:
        os.chdir(previous)
    if code != 0:
        raise InputError(f"Replayed command exited with {code}")

    mismatched = []
    for name, expected in manifest.outputs.items():
        target = Path(workdir) / name
        if not target.is_file() or sha256_file(target) != expected:
            mismatched.append(name)
    if mismatched:
        raise InputError(f"Replay produced different outputs: {', '.join(mismatched)}")

    logger.info("Replay verified | manifest=%s outputs=%s", manifest_file, len(manifest.outputs))
    print(f"verified {len(manifest.outputs)} output(s)")
    return 0
