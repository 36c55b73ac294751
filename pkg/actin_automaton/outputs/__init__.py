from actin_automaton.outputs.service import (
    SnapshotWriter,
    atomic_writer,
    check_destination,
    emit,
    emit_frame,
    manifest_path,
    read_manifest,
    write_frame,
    write_json,
    write_manifest,
    write_text,
)
