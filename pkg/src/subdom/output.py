"""Deterministic CSV/JSON table writers for the CLI."""

from __future__ import annotations

import csv
import json


def _plain(value):
    if isinstance(value, (bool,)):
        return int(value)
    if hasattr(value, "item"):  # numpy scalar
        value = value.item()
    return value


def config_comment(config: dict) -> str:
    parts = [f"{key}={config[key]}" for key in sorted(config)]
    return "# config: " + " ".join(parts)


def write_csv(path: str, columns: list, rows: list, config: dict) -> int:
    """Write a table with a leading config comment and a header row.

    Values pass through str() of their plain Python types, so output bytes
    are stable across runs and worker counts.
    """
    with open(path, "w", newline="") as handle:
        handle.write(config_comment(config) + "\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_plain(v) for v in row])
    return len(rows)


def write_json(path: str, columns: list, rows: list, config: dict,
               extra: dict | None = None) -> int:
    payload = {
        "config": {k: _plain(v) for k, v in config.items()},
        "columns": list(columns),
        "rows": [[_plain(v) for v in row] for row in rows],
    }
    if extra:
        payload.update(extra)
    with open(path, "w", newline="") as handle:
        json.dump(payload, handle, sort_keys=True, indent=2)
        handle.write("\n")
    return len(rows)
