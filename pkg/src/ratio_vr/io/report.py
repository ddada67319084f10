"""Writers for unit files, suites, JSON reports and detail CSVs."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from ratio_vr._versioning import SCHEMA_VERSION, check_schema_version
from ratio_vr.evaluation.metrics import variance_reduction_pct
from ratio_vr.evaluation.schemas import EvaluationReport
from ratio_vr.io.ingest import IngestReport
from ratio_vr.io.schemas import csv_header
from ratio_vr.io.table import UnitTable
from ratio_vr.reduction.schemas import VRTestOutcome
from ratio_vr.simulation.schemas import (
    EffectDistribution,
    ManifestEntry,
    SimConfig,
    SimulatedExperiment,
    SuiteManifest,
)
from ratio_vr.stats.schemas import TestResult


def units_frame(table: UnitTable) -> pd.DataFrame:
    """The table in CSV column order (missing pre-period values as NaN)."""
    columns = csv_header(table.n_features)
    data = {
        "unit_id": table.unit_ids,
        "variant": table.variants,
        "numerator": table.numerator,
        "denominator": table.denominator,
        "pre_numerator": table.pre_numerator,
        "pre_denominator": table.pre_denominator,
    }
    for i, name in enumerate(columns[len(data):]):
        data[name] = table.features[:, i]
    return pd.DataFrame(data, columns=columns)


def write_units(table: UnitTable, path: str | Path, file_format: str = "csv") -> Path:
    """Write *table* as CSV (exact header) or JSONL (one record per line)."""
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    if file_format == "csv":
        units_frame(table).to_csv(out, index=False, na_rep="", lineterminator="\n")
    elif file_format == "jsonl":
        with out.open("w", encoding="utf-8", newline="\n") as handle:
            for record in table.to_records():
                handle.write(record.model_dump_json() + "\n")
    else:
        raise ValueError(f"unknown file format {file_format!r}; use 'csv' or 'jsonl'")
    return out


def write_suite(
    suite: Sequence[SimulatedExperiment],
    directory: str | Path,
    template: SimConfig,
    effects: EffectDistribution,
    seed: int,
    file_format: str = "csv",
) -> SuiteManifest:
    """One unit file per experiment plus ``suite.json``."""
    root = Path(directory)
    root.mkdir(parents=True, exist_ok=True)
    entries = []
    for experiment in suite:
        name = f"{experiment.experiment_id}.{file_format}"
        write_units(experiment.units, root / name, file_format)
        entries.append(
            ManifestEntry(
                experiment_id=experiment.experiment_id,
                file=name,
                effect=experiment.effect,
                seed=experiment.seed,
                n_units=len(experiment.units),
                clamped=experiment.clamped,
            )
        )
    manifest = SuiteManifest(
        template=template,
        effects=effects,
        seed=seed,
        file_format=file_format,  # type: ignore[arg-type]
        experiments=entries,
    )
    write_json(manifest, root / "suite.json")
    return manifest


def write_json(model: BaseModel, path: str | Path) -> Path:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(model.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return out


def read_report(path: str | Path) -> EvaluationReport:
    report = EvaluationReport.model_validate_json(Path(path).read_text(encoding="utf-8"))
    check_schema_version(report.schema_version)
    return report


def details_frame(report: EvaluationReport) -> pd.DataFrame:
    """Plot-ready per-experiment rows for every method."""
    rows = [
        {"method": method.method_label, **detail.model_dump()}
        for method in report.methods
        for detail in method.details
    ]
    return pd.DataFrame(rows)


def write_details_csv(report: EvaluationReport, path: str | Path) -> Path:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    details_frame(report).to_csv(out, index=False, lineterminator="\n")
    return out


class AnalysisReport(BaseModel):
    """Output of ``analyze``: raw and variance-reduced tests side by side."""

    model_config = ConfigDict(frozen=True)

    schema_version: str = SCHEMA_VERSION
    metric: str
    method: str
    control_variant: str
    treatment_variant: str
    alpha: float
    c: float
    raw: TestResult
    reduced: TestResult
    significant_raw: bool
    significant_reduced: bool
    variance_reduction_pct: float
    ingest: list[IngestReport] = Field(default_factory=list)


def analysis_report(
    outcome: VRTestOutcome,
    method: str,
    alpha: float,
    ingest_reports: Sequence[IngestReport] = (),
) -> AnalysisReport:
    return AnalysisReport(
        metric=outcome.metric,
        method=method,
        control_variant=outcome.control_variant,
        treatment_variant=outcome.treatment_variant,
        alpha=alpha,
        c=outcome.c,
        raw=outcome.raw,
        reduced=outcome.reduced,
        significant_raw=outcome.raw.p_value < alpha,
        significant_reduced=outcome.reduced.p_value < alpha,
        variance_reduction_pct=variance_reduction_pct(
            outcome.pooled_variance_raw, outcome.pooled_variance_reduced
        ),
        ingest=list(ingest_reports),
    )
