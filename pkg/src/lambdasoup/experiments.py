"""Experiment presets and replicate orchestration.

An experiment is a list of cells, each describing one soup composition,
run for a number of independent replicates.  Replicates write one CSV
time series each; the experiment writes a manifest (seeds, config hash,
software version, per-replicate status) and a summary file whose
statistics are recomputed from the CSVs on disk, so the two can never
disagree.

Configs serialize to canonical JSON; the sha256 of that serialization is
recorded in the manifest as tamper evidence.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from numpy.random import SeedSequence

from .amplifier import AmplifierSpec, add_two_family, addition_family, successor_family
from .metrics import (
    MotifSet,
    amplifier_motif,
    make_observer,
    molecule_motif,
    read_records_csv,
    threshold_fraction,
    time_averaged_population,
    write_records_csv,
)
from .parser import parse
from .reduce import DEFAULT_LIMITS, ReductionLimits
from .soup import (
    Amplifiers,
    Molecules,
    RandomExprParams,
    RandomMolecules,
    Schedules,
    init_soup,
)
from .stdlib import combinator
from . import __version__

PRESET_NAMES = ("heatmap", "successor", "add2", "addition", "sensitivity")

_FAMILIES = {
    "successor": successor_family,
    "add2": add_two_family,
    "addition": addition_family,
}


@dataclass(frozen=True)
class FamilyConfig:
    """An amplifier family: target name, test constants, factor."""

    target: str
    values: tuple
    factor: int = 100

    def build(self) -> tuple[AmplifierSpec, ...]:
        if self.target not in _FAMILIES:
            raise ValueError(f"unknown amplifier family {self.target!r}")
        values = [tuple(v) if isinstance(v, (list, tuple)) else v for v in self.values]
        return _FAMILIES[self.target](values, factor=self.factor)

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "values": [list(v) if isinstance(v, tuple) else v for v in self.values],
            "factor": self.factor,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FamilyConfig":
        values = tuple(tuple(v) if isinstance(v, list) else v for v in d["values"])
        return cls(target=d["target"], values=values, factor=d["factor"])


@dataclass(frozen=True)
class PopulationItem:
    """One population component: a named/parsed molecule, random filler,
    or an amplifier family, sized by count or fraction."""

    kind: str  # "combinator" | "expr" | "random" | "amplifiers"
    name: str = ""
    text: str = ""
    family: FamilyConfig | None = None
    random_params: RandomExprParams | None = None
    count: int | None = None
    fraction: float | None = None

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.kind == "combinator":
            d["name"] = self.name
        elif self.kind == "expr":
            d["text"] = self.text
        elif self.kind == "random":
            p = self.random_params or RandomExprParams()
            d["params"] = {
                "min_size": p.min_size,
                "max_size": p.max_size,
                "abstraction_prob": p.abstraction_prob,
                "max_attempts": p.max_attempts,
            }
        elif self.kind == "amplifiers":
            d["family"] = self.family.to_dict() if self.family else None
        else:
            raise ValueError(f"unknown population kind {self.kind!r}")
        if self.count is not None:
            d["count"] = self.count
        if self.fraction is not None:
            d["fraction"] = self.fraction
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "PopulationItem":
        kind = d["kind"]
        kwargs: dict = {
            "kind": kind,
            "count": d.get("count"),
            "fraction": d.get("fraction"),
        }
        if kind == "combinator":
            kwargs["name"] = d["name"]
        elif kind == "expr":
            kwargs["text"] = d["text"]
        elif kind == "random":
            p = d.get("params") or {}
            kwargs["random_params"] = RandomExprParams(**p)
        elif kind == "amplifiers":
            kwargs["family"] = FamilyConfig.from_dict(d["family"])
        else:
            raise ValueError(f"unknown population kind {kind!r}")
        return cls(**kwargs)

    def build(self):
        sizing = {"count": self.count, "fraction": self.fraction}
        if self.kind == "combinator":
            return Molecules(combinator(self.name), **sizing)
        if self.kind == "expr":
            return Molecules(parse(self.text, require_closed=True), **sizing)
        if self.kind == "random":
            params = self.random_params or RandomExprParams()
            return RandomMolecules(params=params, **sizing)
        if self.kind == "amplifiers":
            return Amplifiers(self.family.build(), **sizing)
        raise ValueError(f"unknown population kind {self.kind!r}")


@dataclass(frozen=True)
class MotifConfig:
    """A tracked motif: either a named molecule or an amplifier family."""

    label: str
    combinator_name: str = ""
    family: FamilyConfig | None = None

    def to_dict(self) -> dict:
        d: dict = {"label": self.label}
        if self.combinator_name:
            d["combinator"] = self.combinator_name
        if self.family is not None:
            d["family"] = self.family.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "MotifConfig":
        return cls(
            label=d["label"],
            combinator_name=d.get("combinator", ""),
            family=FamilyConfig.from_dict(d["family"]) if "family" in d else None,
        )

    def build(self, families: dict[str, tuple[AmplifierSpec, ...]]):
        if bool(self.combinator_name) == (self.family is not None):
            raise ValueError(f"motif {self.label!r} needs exactly one of combinator/family")
        if self.combinator_name:
            return molecule_motif(self.label, combinator(self.combinator_name))
        # Reuse the cell's own spec instances so amplifier counting keys match.
        key = _family_key(self.family)
        specs = families.get(key) or self.family.build()
        return amplifier_motif(self.label, specs)


def _family_key(fam: FamilyConfig) -> str:
    return json.dumps(fam.to_dict(), sort_keys=True)


@dataclass(frozen=True)
class CellConfig:
    """One soup composition within an experiment grid."""

    cell_id: str
    population: tuple[PopulationItem, ...]
    motifs: tuple[MotifConfig, ...]
    coords: dict = field(default_factory=dict)  # e.g. {"target_fraction": ..., "test_fraction": ...}

    def to_dict(self) -> dict:
        return {
            "cell_id": self.cell_id,
            "population": [p.to_dict() for p in self.population],
            "motifs": [m.to_dict() for m in self.motifs],
            "coords": dict(self.coords),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CellConfig":
        return cls(
            cell_id=d["cell_id"],
            population=tuple(PopulationItem.from_dict(p) for p in d["population"]),
            motifs=tuple(MotifConfig.from_dict(m) for m in d["motifs"]),
            coords=dict(d.get("coords", {})),
        )


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of an experiment; hashes canonically."""

    preset: str
    soup_size: int
    total_collisions: int
    replicates: int
    master_seed: int
    cells: tuple[CellConfig, ...]
    measure_every: int = 1000
    perturb_every: int = 100_000
    max_steps: int = DEFAULT_LIMITS.max_steps
    max_vertices: int = DEFAULT_LIMITS.max_vertices
    summary_kind: str = "threshold"  # "threshold" | "peak_threshold" | "time_average"
    threshold: float = 0.20
    summary_label: str = ""  # motif the summary statistic applies to; "" = first motif
    rng_algorithm: str = "pcg64"

    def __post_init__(self):
        for name in ("soup_size", "total_collisions", "replicates", "master_seed"):
            if getattr(self, name) < 0 or (name != "master_seed" and getattr(self, name) == 0):
                raise ValueError(f"{name} must be positive")
        if self.summary_kind not in ("threshold", "peak_threshold", "time_average"):
            raise ValueError(f"unknown summary kind {self.summary_kind!r}")
        if not self.cells:
            raise ValueError("experiment needs at least one cell")

    def to_dict(self) -> dict:
        return {
            "preset": self.preset,
            "soup_size": self.soup_size,
            "total_collisions": self.total_collisions,
            "replicates": self.replicates,
            "master_seed": self.master_seed,
            "cells": [c.to_dict() for c in self.cells],
            "measure_every": self.measure_every,
            "perturb_every": self.perturb_every,
            "max_steps": self.max_steps,
            "max_vertices": self.max_vertices,
            "summary_kind": self.summary_kind,
            "threshold": self.threshold,
            "summary_label": self.summary_label,
            "rng_algorithm": self.rng_algorithm,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        d["cells"] = tuple(CellConfig.from_dict(c) for c in d["cells"])
        return cls(**d)

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()


def config_from_json(text: str) -> ExperimentConfig:
    return ExperimentConfig.from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# Presets


def _ski(fraction: float) -> list[PopulationItem]:
    each = fraction / 3
    return [PopulationItem(kind="combinator", name=n, fraction=each) for n in ("S", "K", "I")]


def _skip(fraction: float) -> list[PopulationItem]:
    each = fraction / 4
    return [PopulationItem(kind="combinator", name=n, fraction=each) for n in ("S", "K", "I", "P")]


_SUCC_FAMILY = FamilyConfig(target="successor", values=tuple(range(21)), factor=100)
_ADD2_FAMILY = FamilyConfig(target="add2", values=tuple(range(21)), factor=100)
_ADD_FAMILY = FamilyConfig(
    target="addition",
    values=tuple((n, m) for n in range(21) for m in range(21)),
    factor=100,
)


def heatmap_cell(target_fraction: float, test_fraction: float, cell_id: str = "") -> CellConfig:
    """One heatmap pixel: scc + successor tests over an S/K/I background."""
    if not 0 <= target_fraction < 1 or not 0 <= test_fraction < 1:
        raise ValueError("fractions must lie in [0, 1)")
    rest = 1.0 - target_fraction - test_fraction
    if rest < 0:
        raise ValueError("target and test fractions exceed the population")
    population = [PopulationItem(kind="combinator", name="SCC", fraction=target_fraction)]
    if test_fraction > 0:
        population.append(
            PopulationItem(kind="amplifiers", family=_SUCC_FAMILY, fraction=test_fraction)
        )
    population.extend(_ski(rest))
    motifs = [MotifConfig(label="scc", combinator_name="SCC")]
    if test_fraction > 0:
        motifs.append(MotifConfig(label="tests", family=_SUCC_FAMILY))
    return CellConfig(
        cell_id=cell_id or f"scc{target_fraction:.6f}-tests{test_fraction:.6f}",
        population=tuple(population),
        motifs=tuple(motifs),
        coords={"target_fraction": target_fraction, "test_fraction": test_fraction},
    )


def _heatmap_config() -> ExperimentConfig:
    # y: 16 log-spaced initial scc fractions, 0.002% .. 10%;
    # x: 16 linear test fractions, 0 .. 30% (first column = no-amplifier control).
    lo, hi = math.log10(2e-5), math.log10(0.10)
    ys = [10 ** (lo + (hi - lo) * i / 15) for i in range(16)]
    xs = [0.30 * i / 15 for i in range(16)]
    cells = tuple(
        heatmap_cell(y, x, cell_id=f"y{iy:02d}x{ix:02d}")
        for iy, y in enumerate(ys)
        for ix, x in enumerate(xs)
    )
    return ExperimentConfig(
        preset="heatmap",
        soup_size=5000,
        total_collisions=1_000_000,
        replicates=100,
        master_seed=0,
        cells=cells,
        summary_kind="threshold",
        threshold=0.20,
        summary_label="scc",
    )


def _successor_config() -> ExperimentConfig:
    cell = CellConfig(
        cell_id="successor",
        population=tuple(
            _ski(5000 / 6000)
            + [PopulationItem(kind="amplifiers", family=_SUCC_FAMILY, fraction=1000 / 6000)]
        ),
        motifs=(
            MotifConfig(label="scc", combinator_name="SCC"),
            MotifConfig(label="tests", family=_SUCC_FAMILY),
        ),
    )
    return ExperimentConfig(
        preset="successor",
        soup_size=6000,
        total_collisions=1_000_000,
        replicates=16,
        master_seed=0,
        cells=(cell,),
        summary_kind="peak_threshold",
        threshold=0.10,
        summary_label="scc",
    )


def _add2_config() -> ExperimentConfig:
    cell = CellConfig(
        cell_id="add2",
        population=tuple(
            [PopulationItem(kind="amplifiers", family=_ADD2_FAMILY, fraction=0.15)]
            + _ski(0.85)
        ),
        motifs=(
            MotifConfig(label="add2", combinator_name="ADD2"),
            MotifConfig(label="tests", family=_ADD2_FAMILY),
        ),
    )
    return ExperimentConfig(
        preset="add2",
        soup_size=5000,
        total_collisions=1_000_000,
        replicates=1000,
        master_seed=0,
        cells=(cell,),
        summary_kind="peak_threshold",
        threshold=0.10,
        summary_label="add2",
    )


def _addition_config() -> ExperimentConfig:
    cell = CellConfig(
        cell_id="addition",
        population=tuple(
            [
                PopulationItem(kind="amplifiers", family=_ADD_FAMILY, fraction=0.075),
                PopulationItem(kind="amplifiers", family=_SUCC_FAMILY, fraction=0.075),
            ]
            + _skip(0.85)
        ),
        motifs=(
            MotifConfig(label="add", combinator_name="ADD"),
            MotifConfig(label="scc", combinator_name="SCC"),
            MotifConfig(label="add_tests", family=_ADD_FAMILY),
            MotifConfig(label="scc_tests", family=_SUCC_FAMILY),
        ),
    )
    return ExperimentConfig(
        preset="addition",
        soup_size=5000,
        total_collisions=1_000_000,
        replicates=1000,
        master_seed=0,
        cells=(cell,),
        summary_kind="peak_threshold",
        threshold=0.10,
        summary_label="add",
    )


def _sensitivity_config() -> ExperimentConfig:
    def seed_items(name: str, fraction: float) -> list[PopulationItem]:
        if name == "random":
            return [PopulationItem(kind="random", random_params=RandomExprParams(),
                                   fraction=fraction)]
        return _ski(fraction) if name == "SKI" else _skip(fraction)

    amp_sets = {
        "none": [],
        "scc": [_SUCC_FAMILY],
        "add": [_ADD_FAMILY],
        "both": [_SUCC_FAMILY, _ADD_FAMILY],
    }
    cells = []
    for seed_name in ("random", "SKI", "SKIP"):
        for amp_name, fams in amp_sets.items():
            amp_items = [
                PopulationItem(kind="amplifiers", family=f, fraction=0.15 / len(fams))
                for f in fams
            ]
            population = seed_items(seed_name, 1.0 - 0.15 * bool(fams)) + amp_items
            motifs = [
                MotifConfig(label="scc", combinator_name="SCC"),
                MotifConfig(label="add", combinator_name="ADD"),
            ]
            cells.append(
                CellConfig(
                    cell_id=f"{seed_name}-{amp_name}",
                    population=tuple(population),
                    motifs=tuple(motifs),
                    coords={"seeds": seed_name, "amplifiers": amp_name},
                )
            )
    return ExperimentConfig(
        preset="sensitivity",
        soup_size=5000,
        total_collisions=100_000,
        replicates=1000,
        master_seed=0,
        cells=tuple(cells),
        summary_kind="time_average",
        summary_label="",
    )


_PRESETS = {
    "heatmap": _heatmap_config,
    "successor": _successor_config,
    "add2": _add2_config,
    "addition": _addition_config,
    "sensitivity": _sensitivity_config,
}


def preset(name: str, scale: float = 1.0) -> ExperimentConfig:
    """Return a named experiment config; `scale` multiplies soup size,
    collision count, and replicate count for desk-scale runs."""
    if name not in _PRESETS:
        raise ValueError(f"unknown preset {name!r}; choose from {', '.join(PRESET_NAMES)}")
    if scale <= 0:
        raise ValueError("scale must be positive")
    config = _PRESETS[name]()
    if scale == 1.0:
        return config
    return replace(
        config,
        soup_size=max(2, round(config.soup_size * scale)),
        total_collisions=max(1, round(config.total_collisions * scale)),
        replicates=max(1, round(config.replicates * scale)),
    )


# ---------------------------------------------------------------------------
# Execution


def replicate_seed(master_seed: int, cell_index: int, replicate_index: int) -> SeedSequence:
    """Deterministic per-replicate seed, independent across the grid."""
    return SeedSequence(master_seed, spawn_key=(cell_index, replicate_index))


def run_replicate(config: ExperimentConfig, cell_index: int, replicate_index: int):
    """Run one soup and return its PopulationRecord list."""
    cell = config.cells[cell_index]
    families: dict[str, tuple[AmplifierSpec, ...]] = {}
    population = []
    for item in cell.population:
        entry = item.build()
        if isinstance(entry, Amplifiers):
            families[_family_key(item.family)] = entry.specs
        population.append(entry)
    motifs = MotifSet(tuple(m.build(families) for m in cell.motifs))
    limits = ReductionLimits(max_steps=config.max_steps, max_vertices=config.max_vertices)
    soup = init_soup(
        population,
        config.soup_size,
        seed=replicate_seed(config.master_seed, cell_index, replicate_index),
        limits=limits,
    )
    schedules = Schedules(
        measure_every=config.measure_every, perturb_every=config.perturb_every
    )
    return soup.run(config.total_collisions, schedules, make_observer(motifs))


def _replicate_job(args):
    config_dict, cell_index, replicate_index = args
    config = ExperimentConfig.from_dict(config_dict)
    records = run_replicate(config, cell_index, replicate_index)
    return cell_index, replicate_index, records


def _csv_path(out_dir: str, cell_id: str, replicate_index: int) -> str:
    return os.path.join(out_dir, "cells", cell_id, f"rep{replicate_index:04d}.csv")


def _summarize_cell(config: ExperimentConfig, out_dir: str, cell: CellConfig,
                    statuses: dict[int, str]) -> dict:
    """Recompute the cell summary from the CSVs actually on disk."""
    label = config.summary_label or cell.motifs[0].label
    ok = [i for i in range(config.replicates) if statuses.get(i) == "ok"]
    entry: dict = {
        "cell_id": cell.cell_id,
        "coords": dict(cell.coords),
        "replicates_ok": len(ok),
        "replicates_failed": config.replicates - len(ok),
    }
    series = []
    for i in ok:
        records = read_records_csv(_csv_path(out_dir, cell.cell_id, i))
        series.append(records)
    if config.summary_kind == "time_average":
        labels = [m.label for m in cell.motifs]
        entry["time_averages"] = {
            lab: (sum(time_averaged_population(r, lab) for r in series) / len(series)
                  if series else None)
            for lab in labels
        }
    else:
        final_only = config.summary_kind == "threshold"
        hits = 0
        for records in series:
            if threshold_fraction(records, label, config.threshold, final_only=final_only):
                hits += 1
        entry["label"] = label
        entry["threshold"] = config.threshold
        entry["over_threshold"] = hits
        entry["over_threshold_rate"] = hits / len(series) if series else None
    return entry


def run_experiment(config: ExperimentConfig, out_dir: str, workers: int | None = None) -> dict:
    """Execute all replicates, write CSVs + manifest + summary, return the summary dict.

    A replicate that raises is recorded as failed in the manifest and the
    experiment continues.  Results are independent of the worker count.
    """
    if workers is None:
        workers = os.cpu_count() or 1
    if workers < 1:
        raise ValueError("workers must be >= 1")
    os.makedirs(out_dir, exist_ok=True)

    jobs = [
        (config.to_dict(), ci, ri)
        for ci in range(len(config.cells))
        for ri in range(config.replicates)
    ]
    statuses: dict[tuple[int, int], str] = {}

    def handle(ci: int, ri: int, records, error: str | None):
        cell = config.cells[ci]
        if error is not None:
            statuses[(ci, ri)] = f"failed: {error}"
            return
        path = _csv_path(out_dir, cell.cell_id, ri)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        write_records_csv(path, records)
        statuses[(ci, ri)] = "ok"

    if workers == 1:
        for job in jobs:
            try:
                ci, ri, records = _replicate_job(job)
                handle(ci, ri, records, None)
            except Exception as exc:  # noqa: BLE001 - partial-failure policy
                handle(job[1], job[2], None, repr(exc))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(_replicate_job, job): job for job in jobs}
            for future, job in futures.items():
                try:
                    ci, ri, records = future.result()
                    handle(ci, ri, records, None)
                except Exception as exc:  # noqa: BLE001
                    handle(job[1], job[2], None, repr(exc))

    manifest = {
        "preset": config.preset,
        "config": config.to_dict(),
        "config_hash": config.config_hash(),
        "software_version": __version__,
        "rng_algorithm": config.rng_algorithm,
        "generated_at": time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime()),
        "replicates": [
            {
                "cell_id": config.cells[ci].cell_id,
                "replicate": ri,
                "seed": {"master": config.master_seed, "spawn_key": [ci, ri]},
                "status": statuses[(ci, ri)],
                "csv": os.path.relpath(_csv_path(out_dir, config.cells[ci].cell_id, ri), out_dir)
                if statuses[(ci, ri)] == "ok"
                else None,
            }
            for ci in range(len(config.cells))
            for ri in range(config.replicates)
        ],
    }
    with open(os.path.join(out_dir, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")

    failed = sum(1 for s in statuses.values() if s != "ok")
    if failed:
        warnings.warn(f"{failed} replicate(s) failed; see manifest.json", stacklevel=2)

    summary = {
        "preset": config.preset,
        "config_hash": config.config_hash(),
        "summary_kind": config.summary_kind,
        "cells": [
            _summarize_cell(
                config,
                out_dir,
                cell,
                {ri: statuses[(ci, ri)] for ri in range(config.replicates)},
            )
            for ci, cell in enumerate(config.cells)
        ],
    }
    with open(os.path.join(out_dir, "summary.json"), "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    return summary
