"""Unit records, analysis config and the column table used by the analysis.

File readers and writers live in :mod:`ratio_vr.io.ingest` and
:mod:`ratio_vr.io.report`.
"""

from ratio_vr.io.schemas import UnitRecord, csv_header
from ratio_vr.io.table import UnitTable

__all__ = [
    "UnitRecord",
    "UnitTable",
    "csv_header",
]
