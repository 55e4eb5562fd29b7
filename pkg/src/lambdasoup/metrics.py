"""Motif counting and time-series serialization.

A motif is a labeled thing to count in the soup: a specific normal form
(matched up to alpha-equivalence, which the flat encoding makes a plain
bytes comparison) or a family of amplifier specs. Counting reads the
soup's incremental per-species indexes, so a measurement costs O(motifs)
regardless of population size.

Time series go to CSV with the header `collision,<label1>,...,soup_size`,
one row per measurement, UTF-8 with LF endings, and round-trip exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence, Union

from .amplifier import AmplifierSpec
from .kernel import is_normal
from .soup import Soup
from .terms import LambdaExpr, encode

__all__ = [
    "MoleculeMotif",
    "AmplifierMotif",
    "Motif",
    "MotifSet",
    "molecule_motif",
    "amplifier_motif",
    "PopulationRecord",
    "count_motif",
    "make_observer",
    "threshold_fraction",
    "time_averaged_population",
    "write_records_csv",
    "read_records_csv",
]


@dataclass(frozen=True, slots=True)
class MoleculeMotif:
    """Count molecules alpha-equivalent to one reference normal form."""

    label: str
    code: bytes


@dataclass(frozen=True, slots=True)
class AmplifierMotif:
    """Count amplifier elements whose spec is in the family."""

    label: str
    specs: tuple[AmplifierSpec, ...]


Motif = Union[MoleculeMotif, AmplifierMotif]


def _check_label(label: str) -> str:
    if not label or "," in label or "\n" in label or "\r" in label:
        raise ValueError(f"label {label!r} will not survive the CSV header")
    return label


def molecule_motif(label: str, reference: LambdaExpr) -> MoleculeMotif:
    code, names = encode(reference)
    if names:
        raise ValueError("motif references must be closed")
    if not is_normal(code):
        raise ValueError("motif references must be in normal form")
    return MoleculeMotif(_check_label(label), code)


def amplifier_motif(label: str, specs: Iterable[AmplifierSpec]) -> AmplifierMotif:
    seq = tuple(specs)
    if not seq:
        raise ValueError("amplifier motif with no specs")
    return AmplifierMotif(_check_label(label), seq)


@dataclass(frozen=True, slots=True)
class MotifSet:
    """The labeled references one observer tracks; labels are unique."""

    motifs: tuple[Motif, ...]

    def __post_init__(self):
        labels = [m.label for m in self.motifs]
        if len(set(labels)) != len(labels):
            raise ValueError("motif labels must be unique")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(m.label for m in self.motifs)


@dataclass(frozen=True, slots=True)
class PopulationRecord:
    """One measurement: per-label counts at a collision index."""

    collision_index: int
    counts: dict[str, int]
    soup_size: int


def count_motif(soup: Soup, reference) -> int:
    """Occurrences in the soup of an expression (up to alpha-equivalence),
    an amplifier spec, or a whole family of specs."""
    if isinstance(reference, MoleculeMotif):
        return soup.molecule_counts.get(reference.code, 0)
    if isinstance(reference, AmplifierMotif):
        return sum(soup.amplifier_counts.get(s, 0) for s in reference.specs)
    if isinstance(reference, AmplifierSpec):
        return soup.amplifier_counts.get(reference, 0)
    if isinstance(reference, (list, tuple)):
        return sum(soup.amplifier_counts.get(s, 0) for s in reference)
    return soup.molecule_count(reference)


def make_observer(motifs: MotifSet) -> Callable[[Soup], PopulationRecord]:
    """An observer for Soup.run that snapshots the motif counts."""

    def observe(soup: Soup) -> PopulationRecord:
        molecule_counts = soup.molecule_counts
        amplifier_counts = soup.amplifier_counts
        counts: dict[str, int] = {}
        for motif in motifs.motifs:
            if type(motif) is MoleculeMotif:
                counts[motif.label] = molecule_counts.get(motif.code, 0)
            else:
                counts[motif.label] = sum(
                    amplifier_counts.get(s, 0) for s in motif.specs
                )
        return PopulationRecord(soup.collisions, counts, soup.size)

    return observe


def _require_records(records: Sequence[PopulationRecord]) -> None:
    if not records:
        raise ValueError("no records to analyze")


def threshold_fraction(
    records: Sequence[PopulationRecord],
    label: str,
    threshold: float,
    final_only: bool = True,
) -> bool:
    """Did the labeled motif reach the threshold fraction?

    Checks the final record by default; with final_only false, any
    record counts (peak detection).
    """
    _require_records(records)
    if not 0.0 <= threshold <= 1.0:
        raise ValueError("threshold is a fraction")
    if final_only:
        final = records[-1]
        return final.counts[label] / final.soup_size >= threshold
    return any(r.counts[label] / r.soup_size >= threshold for r in records)

def time_averaged_population(records: Sequence[PopulationRecord], label: str) -> float:
    """Mean fraction of the soup occupied by the motif across records."""
    _require_records(records)
    return sum(r.counts[label] / r.soup_size for r in records) / len(records)


def write_records_csv(path, records: Sequence[PopulationRecord]) -> None:
    """One row per record under `collision,<labels...>,soup_size`."""
    _require_records(records)
    labels = list(records[0].counts)
    lines = ["collision," + ",".join(labels) + ",soup_size"]
    for record in records:
        if list(record.counts) != labels:
            raise ValueError("records disagree on labels")
        row = [str(record.collision_index)]
        row.extend(str(record.counts[label]) for label in labels)
        row.append(str(record.soup_size))
        lines.append(",".join(row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def read_records_csv(path) -> list[PopulationRecord]:
    """Inverse of write_records_csv."""
    text = Path(path).read_text(encoding="utf-8")
    lines = [line for line in text.split("\n") if line]
    header = lines[0].split(",")
    if header[0] != "collision" or header[-1] != "soup_size":
        raise ValueError(f"unrecognized header {lines[0]!r}")
    labels = header[1:-1]
    records = []
    for line in lines[1:]:
        cells = line.split(",")
        if len(cells) != len(header):
            raise ValueError(f"row width {len(cells)} != header width {len(header)}")
        counts = {label: int(cell) for label, cell in zip(labels, cells[1:-1])}
        records.append(PopulationRecord(int(cells[0]), counts, int(cells[-1])))
    return records
