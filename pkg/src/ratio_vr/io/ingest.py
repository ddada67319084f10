"""Streaming ingestion and validation of unit-level experiment files.

Rows are read in bounded batches.  A malformed or invalid row is rejected
with its line number and the run continues; if the rejected share exceeds
the threshold (1 % by default) the whole file fails with
:class:`IngestError`.
"""

from __future__ import annotations

import csv
import json
import logging
import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterator, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ratio_vr._versioning import check_schema_version
from ratio_vr.io.schemas import BASE_COLUMNS, UnitRecord, csv_header
from ratio_vr.io.table import UnitTable
from ratio_vr.ratio.schemas import RatioMetricSpec
from ratio_vr.simulation.schemas import SuiteManifest

logger = logging.getLogger(__name__)

FileFormat = Literal["csv", "jsonl"]

DEFAULT_REJECT_THRESHOLD = 0.01
DEFAULT_BATCH_SIZE = 10_000
# Individual rejections kept in the report; the counts cover all of them.
_MAX_LISTED_REJECTIONS = 100
# Bytes that are not valid UTF-8 decode to lone surrogates under "surrogateescape".
_UNDECODABLE = re.compile("[\udc80-\udcff]")
_INVALID_UTF8 = "malformed row: invalid UTF-8"


class IngestError(ValueError):
    """The file cannot be used: bad header, or too many rejected rows."""


class RowRejection(BaseModel):
    model_config = ConfigDict(frozen=True)

    line: int
    reason: str


class IngestReport(BaseModel):
    """Per-file validation summary."""

    model_config = ConfigDict(frozen=True)

    path: str
    rows_read: int = Field(ge=0)
    rows_rejected: int = Field(ge=0)
    reasons: dict[str, int] = Field(default_factory=dict)
    rejections: list[RowRejection] = Field(default_factory=list)

    @property
    def reject_fraction(self) -> float:
        return self.rows_rejected / self.rows_read if self.rows_read else 0.0


class _RejectLog:
    def __init__(self) -> None:
        self.rows_read = 0
        self.rejections: list[RowRejection] = []
        self.reasons: Counter[str] = Counter()

    def reject(self, line: int, reason: str) -> None:
        self.reasons[reason.split(":", 1)[0]] += 1
        if len(self.rejections) < _MAX_LISTED_REJECTIONS:
            self.rejections.append(RowRejection(line=line, reason=reason))
        logger.debug("line %d rejected: %s", line, reason)

    def report(self, path: Path) -> IngestReport:
        return IngestReport(
            path=str(path),
            rows_read=self.rows_read,
            rows_rejected=sum(self.reasons.values()),
            reasons=dict(sorted(self.reasons.items())),
            rejections=self.rejections,
        )


@dataclass(frozen=True)
class IngestResult:
    records: list[UnitRecord]
    report: IngestReport


@dataclass(frozen=True)
class LoadedExperiment:
    """An experiment read from disk, with its ground-truth effect if known."""

    experiment_id: str
    units: UnitTable
    effect: float | None
    report: IngestReport


def detect_format(path: str | Path) -> FileFormat:
    suffix = Path(path).suffix.lower()
    if suffix == ".csv":
        return "csv"
    if suffix in (".jsonl", ".ndjson"):
        return "jsonl"
    raise ValueError(f"cannot infer file format from {str(path)!r}; use .csv or .jsonl")


def _validation_reason(exc: ValidationError) -> str:
    err = exc.errors()[0]
    where = ".".join(str(p) for p in err.get("loc", ())) or "record"
    return f"invalid field: {where}: {err.get('msg', 'invalid')}"


def _to_record(
    data: dict[str, Any],
    line: int,
    spec: RatioMetricSpec | None,
    log: _RejectLog,
) -> UnitRecord | None:
    try:
        record = UnitRecord.model_validate(data)
    except ValidationError as exc:
        log.reject(line, _validation_reason(exc))
        return None
    if spec is not None and spec.bounded:
        violation = record.bound_violation()
        if violation:
            log.reject(line, violation)
            return None
    return record


def _csv_rows(handle: Any, log: _RejectLog) -> Iterator[tuple[int, dict[str, Any] | None]]:
    reader = csv.reader(handle)
    header = next(reader, None)
    if header is None:
        raise IngestError("empty file: missing CSV header")
    n_features = len(header) - len(BASE_COLUMNS)
    if n_features < 0 or header != csv_header(n_features):
        raise IngestError(
            f"CSV header mismatch: expected {','.join(csv_header(max(n_features, 0)))}, "
            f"got {','.join(header)}"
        )
    for row in reader:
        line = reader.line_num
        if not row:
            continue
        log.rows_read += 1
        if any(_UNDECODABLE.search(value) for value in row):
            log.reject(line, _INVALID_UTF8)
            yield line, None
            continue
        if len(row) != len(header):
            log.reject(line, f"malformed row: expected {len(header)} fields, got {len(row)}")
            yield line, None
            continue
        values = dict(zip(header, row))
        data: dict[str, Any] = {k: (values[k] or None) for k in BASE_COLUMNS}
        data["features"] = [values[c] for c in header[len(BASE_COLUMNS):]]
        yield line, data


def _jsonl_rows(handle: Any, log: _RejectLog) -> Iterator[tuple[int, dict[str, Any] | None]]:
    for line, text in enumerate(handle, start=1):
        if not text.strip():
            continue
        log.rows_read += 1
        if _UNDECODABLE.search(text):
            log.reject(line, _INVALID_UTF8)
            yield line, None
            continue
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            log.reject(line, f"malformed row: {exc.msg}")
            yield line, None
            continue
        if not isinstance(obj, dict):
            log.reject(line, "malformed row: expected a JSON object")
            yield line, None
            continue
        feature_keys = sorted(
            (k for k in obj if k[:1] == "f" and k[1:].isdigit()), key=lambda k: int(k[1:])
        )
        if feature_keys and "features" not in obj:
            obj["features"] = [obj.pop(k) for k in feature_keys]
        yield line, obj


def iter_record_batches(
    path: str | Path,
    file_format: FileFormat | None = None,
    spec: RatioMetricSpec | None = None,
    batch_size: int = DEFAULT_BATCH_SIZE,
    log: _RejectLog | None = None,
) -> Iterator[list[UnitRecord]]:
    """Yield validated records in batches of at most *batch_size*."""
    fmt = file_format or detect_format(path)
    log = log if log is not None else _RejectLog()
    newline = "" if fmt == "csv" else None
    with open(path, newline=newline, encoding="utf-8", errors="surrogateescape") as handle:
        rows = _csv_rows(handle, log) if fmt == "csv" else _jsonl_rows(handle, log)
        batch: list[UnitRecord] = []
        for line, data in rows:
            if data is None:
                continue
            record = _to_record(data, line, spec, log)
            if record is not None:
                batch.append(record)
            if len(batch) >= batch_size:
                yield batch
                batch = []
        if batch:
            yield batch


def ingest(
    path: str | Path,
    file_format: FileFormat | None = None,
    spec: RatioMetricSpec | None = None,
    reject_threshold: float = DEFAULT_REJECT_THRESHOLD,
    batch_size: int = DEFAULT_BATCH_SIZE,
) -> IngestResult:
    """Read and validate every record of *path*.

    Args:
        path: A ``.csv`` or ``.jsonl`` unit file.
        file_format: Overrides the suffix-based format detection.
        spec: When given and ``spec.bounded``, rows with numerator >
            denominator are rejected.
        reject_threshold: Maximum tolerated share of rejected rows.

    Raises:
        IngestError: Bad CSV header, or rejected share above the threshold.
        OSError: The file cannot be opened.
    """
    log = _RejectLog()
    records: list[UnitRecord] = []
    for batch in iter_record_batches(path, file_format, spec, batch_size, log):
        records.extend(batch)
    report = log.report(Path(path))
    if report.rows_read and report.reject_fraction > reject_threshold:
        raise IngestError(
            f"{path}: rejected {report.rows_rejected} of {report.rows_read} rows "
            f"({100 * report.reject_fraction:.2f} % > {100 * reject_threshold:.2f} %); "
            f"reasons: {report.reasons}"
        )
    if report.rows_rejected:
        logger.warning(
            "%s: rejected %d of %d rows: %s", path, report.rows_rejected, report.rows_read, report.reasons
        )
    return IngestResult(records=records, report=report)


def load_table(
    path: str | Path,
    file_format: FileFormat | None = None,
    spec: RatioMetricSpec | None = None,
    reject_threshold: float = DEFAULT_REJECT_THRESHOLD,
) -> tuple[UnitTable, IngestReport]:
    result = ingest(path, file_format, spec, reject_threshold)
    return UnitTable.from_records(result.records), result.report


def read_manifest(directory: str | Path) -> SuiteManifest:
    manifest = SuiteManifest.model_validate_json(Path(directory, "suite.json").read_text(encoding="utf-8"))
    check_schema_version(manifest.schema_version)
    return manifest


def read_suite(
    directory: str | Path,
    spec: RatioMetricSpec | None = None,
    reject_threshold: float = DEFAULT_REJECT_THRESHOLD,
) -> list[LoadedExperiment]:
    """Load every experiment listed in ``<directory>/suite.json``."""
    manifest = read_manifest(directory)
    suite = []
    for entry in manifest.experiments:
        units, report = load_table(Path(directory, entry.file), manifest.file_format, spec, reject_threshold)
        suite.append(
            LoadedExperiment(experiment_id=entry.experiment_id, units=units, effect=entry.effect, report=report)
        )
    return suite
