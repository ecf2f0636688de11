"""
Artifact writers.

Every file written here carries the hash of the resolved config and the master seed:
CSV files in a leading `#` comment line, JSON files as top-level fields next to the
full resolved config, so that a run can be repeated from any one of its outputs.
"""

import csv
import hashlib
import json
import logging
import os
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

_log = logging.getLogger(__name__)


def canonical_json(config: Mapping[str, Any]) -> str:
    return json.dumps(config, sort_keys=True, separators=(",", ":"), default=_to_plain)


def config_hash(config: Mapping[str, Any]) -> str:
    return hashlib.sha256(canonical_json(config).encode("utf-8")).hexdigest()[:16]


def _to_plain(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    raise TypeError("not JSON serializable: %r" % type(value))


@dataclass
class ArtifactWriter:
    out_dir: str
    config: Mapping[str, Any]
    seed: int

    def __post_init__(self) -> None:
        os.makedirs(self.out_dir, exist_ok=True)
        self.hash = config_hash(self.config)

    def path(self, name: str) -> str:
        return os.path.join(self.out_dir, name)

    def write_json(self, name: str, payload: Mapping[str, Any]) -> str:
        record = {"config_hash": self.hash, "seed": self.seed}
        record.update(payload)
        record["config"] = self.config
        p = self.path(name)
        with open(p, "w") as f:
            json.dump(record, f, indent=2, sort_keys=True, default=_to_plain)
            f.write("\n")
        _log.info("wrote %s", p)
        return p

    def write_csv(self, name: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
        p = self.path(name)
        with open(p, "w", newline="") as f:
            f.write("# config_hash=%s seed=%d\n" % (self.hash, self.seed))
            w = csv.writer(f)
            w.writerow(header)
            for row in rows:
                w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
        _log.info("wrote %s", p)
        return p
