"""
CSV emission for sweep tables.

Files are UTF-8 with LF line endings. Leading `# key=value` lines carry the
run metadata; numbers are written with 12 significant digits so identical
sweeps produce identical bytes.
"""

import logging
import math
from pathlib import Path
from typing import Dict, List, Sequence, Tuple, Union

import pandas as pd

from src import __version__
from src.generation.rng import GENERATOR_NAME
from src.models.data_models import BoundLedger, CellStats, SweepSpec
from src.models.errors import ReportIoError
from src.pipelines.sweep_pipeline import table_to_frame

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.12g"


def sweep_metadata(spec: SweepSpec) -> List[Tuple[str, str]]:
    """Metadata lines describing how a table was produced."""
    lines = [
        ("tool", "bpdd"),
        ("version", __version__),
        ("preset", spec.figure_preset or "custom"),
        ("seed", str(spec.base_seed)),
        ("generator", GENERATOR_NAME),
        ("trials", str(spec.trials)),
        ("noise_mode", spec.noise_mode.value),
        ("nested_p", str(spec.nested_p).lower()),
        ("estimators", ",".join(spec.estimators)),
        ("bounds", ",".join(spec.bounds)),
    ]
    lines += [("note", note) for note in spec.notes]
    return lines


def emit_csv(
    table: Union[Sequence[CellStats], pd.DataFrame],
    path: Union[str, Path],
    metadata: Sequence[Tuple[str, str]] = (),
) -> Path:
    """
    Write a sweep table.

    Args:
        table: CellStats rows or a frame from table_to_frame
        path: Destination file
        metadata: (key, value) pairs written as leading comment lines

    Returns:
        The written path

    Raises:
        ReportIoError: empty table or unwritable destination
    """
    if isinstance(table, pd.DataFrame):
        frame = table
    elif table:
        frame = table_to_frame(table)
    else:
        frame = pd.DataFrame()
    if frame.empty:
        raise ReportIoError("Refusing to write an empty table")

    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, "w", encoding="utf-8", newline="") as handle:
            for key, value in metadata:
                handle.write(f"# {key}={value}\n")
            frame.to_csv(
                handle, index=False, float_format=FLOAT_FORMAT, na_rep="nan", lineterminator="\n"
            )
    except OSError as exc:
        raise ReportIoError(f"Cannot write {target}: {exc}") from exc
    logger.info(f"Wrote {len(frame)} rows to {target}")
    return target


def read_results(path: Union[str, Path]) -> Tuple[Dict[str, str], pd.DataFrame]:
    """Read a CSV written by emit_csv back into (metadata, frame)."""
    source = Path(path)
    metadata: Dict[str, str] = {}
    try:
        with open(source, encoding="utf-8") as handle:
            for line in handle:
                if not line.startswith("#"):
                    break
                key, _, value = line[1:].strip().partition("=")
                # Repeated keys (notes) are joined.
                metadata[key] = f"{metadata[key]}; {value}" if key in metadata else value
        frame = pd.read_csv(source, comment="#")
    except (OSError, pd.errors.ParserError) as exc:
        raise ReportIoError(f"Cannot read {source}: {exc}") from exc
    return metadata, frame


def ledger_frame(ledger: BoundLedger) -> pd.DataFrame:
    """One row per ledger entry, with the exact value of its target alongside."""
    return pd.DataFrame.from_records(
        [
            {
                "bound": bound_id,
                "value": entry.value,
                "exact": ledger.exact.get(entry.target.value, math.nan),
                "kind": entry.kind.value,
                "target": entry.target.value,
                "source": entry.source.value,
                "regime_ok": entry.regime_ok,
                "evaluable": entry.evaluable,
                "violated": ledger.violated(bound_id),
                "reason": entry.reason,
            }
            for bound_id, entry in ledger.entries.items()
        ]
    )
