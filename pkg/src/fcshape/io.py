"""Run artifacts and benchmark result tables."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

ARTIFACT_FORMAT = "fcshape-run/1"
CSV_HEADER = (
    "dataset",
    "algorithm",
    "run",
    "seed",
    "ri",
    "ari",
    "nmi",
    "vi",
    "iterations",
    "cpu_seconds",
)


class SchemaError(ValueError):
    pass


@dataclass
class RunArtifact:
    """Serializable outcome of one clustering run. Labels are 1-based."""

    labels: list
    centroids: list
    objective_trace: list
    config: dict
    memberships: list | None = None
    algorithm: str = ""
    dataset: str = ""
    iterations: int = 0

    @classmethod
    def from_result(cls, result, dataset_name=""):
        return cls(
            labels=[int(v) + 1 for v in result.labels],
            centroids=np.asarray(result.centroids, dtype=float).tolist(),
            objective_trace=[float(v) for v in result.objective_trace],
            config=dict(result.config),
            memberships=None
            if result.memberships is None
            else np.asarray(result.memberships, dtype=float).tolist(),
            algorithm=result.algorithm,
            dataset=dataset_name,
            iterations=int(result.iterations),
        )

    def to_json(self) -> str:
        # json writes floats with repr, which round-trips exactly
        doc = {
            "format": ARTIFACT_FORMAT,
            "algorithm": self.algorithm,
            "dataset": self.dataset,
            "config": self.config,
            "iterations": self.iterations,
            "labels": self.labels,
            "objective_trace": self.objective_trace,
            "centroids": self.centroids,
            "memberships": self.memberships,
        }
        return json.dumps(doc, indent=1, sort_keys=False) + "\n"

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_json())

    @classmethod
    def from_json(cls, text):
        doc = json.loads(text)
        if doc.get("format") != ARTIFACT_FORMAT:
            raise SchemaError(f"not a run artifact (format={doc.get('format')!r})")
        return cls(
            labels=doc["labels"],
            centroids=doc["centroids"],
            objective_trace=doc["objective_trace"],
            config=doc["config"],
            memberships=doc.get("memberships"),
            algorithm=doc.get("algorithm", ""),
            dataset=doc.get("dataset", ""),
            iterations=doc.get("iterations", len(doc["objective_trace"])),
        )

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_json(fh.read())


def format_record(rec) -> list:
    return [
        rec["dataset"],
        rec["algorithm"],
        str(rec["run"]),
        str(rec["seed"]),
        repr(float(rec["ri"])),
        repr(float(rec["ari"])),
        repr(float(rec["nmi"])),
        repr(float(rec["vi"])),
        str(rec["iterations"]),
        f"{rec['cpu_seconds']:.2f}",
    ]


def write_records(fh, records):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for rec in records:
        w.writerow(format_record(rec))


def read_records(path):
    """Read a benchmark CSV, checking that its header matches this schema."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty results file") from None
        if tuple(header) != CSV_HEADER:
            raise SchemaError(f"{path}: unexpected header {','.join(header)}")
        out = []
        for row in reader:
            if not row:
                continue
            rec = dict(zip(CSV_HEADER, row))
            for key in ("run", "seed", "iterations"):
                rec[key] = int(rec[key])
            for key in ("ri", "ari", "nmi", "vi", "cpu_seconds"):
                rec[key] = float(rec[key])
            out.append(rec)
    return out


def per_dataset_means(records, metric):
    """``{algorithm: {dataset: mean metric over runs}}``."""
    acc = {}
    for rec in records:
        acc.setdefault(rec["algorithm"], {}).setdefault(rec["dataset"], []).append(rec[metric])
    return {a: {d: float(np.mean(v)) for d, v in by_d.items()} for a, by_d in acc.items()}
