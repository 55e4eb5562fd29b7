"""Motif counting, analysis helpers, and CSV round-trips."""

import pytest

from lambdasoup.amplifier import successor_family
from lambdasoup.metrics import (
    MotifSet,
    PopulationRecord,
    amplifier_motif,
    count_motif,
    make_observer,
    molecule_motif,
    read_records_csv,
    threshold_fraction,
    time_averaged_population,
    write_records_csv,
)
from lambdasoup.parser import parse
from lambdasoup.soup import Amplifiers, Molecules, init_soup
from lambdasoup.stdlib import combinator

S = combinator("S")
K = combinator("K")
I = combinator("I")
SUCC = combinator("SCC")


def rec(i, counts, size=100):
    return PopulationRecord(i, counts, size)


class TestMotifs:
    def test_molecule_motif_validates_reference(self):
        with pytest.raises(ValueError, match="closed"):
            molecule_motif("x", parse("x"))
        with pytest.raises(ValueError, match="normal"):
            molecule_motif("rx", parse(r"(\x.x) (\y.y)"))

    def test_labels_must_survive_the_header(self):
        for bad in ["", "a,b", "a\nb"]:
            with pytest.raises(ValueError, match="label"):
                molecule_motif(bad, K)

    def test_amplifier_motif_needs_specs(self):
        with pytest.raises(ValueError):
            amplifier_motif("amps", [])

    def test_motif_set_rejects_duplicate_labels(self):
        with pytest.raises(ValueError, match="unique"):
            MotifSet((molecule_motif("a", K), molecule_motif("a", I)))

    def test_motif_set_labels_in_order(self):
        ms = MotifSet((molecule_motif("k", K), molecule_motif("i", I)))
        assert ms.labels == ("k", "i")


class TestCountMotif:
    def build(self):
        family = tuple(successor_family(range(4), factor=4))
        return init_soup(
            [Molecules(K, count=7), Molecules(I, count=5),
             Amplifiers(family, count=6)],
            size=18, seed=0), family

    def test_counts_molecules_up_to_alpha(self):
        soup, _ = self.build()
        assert count_motif(soup, K) == 7
        assert count_motif(soup, parse(r"\a.\b.a")) == 7  # alpha-variant of K
        assert count_motif(soup, molecule_motif("k", K)) == 7
        assert count_motif(soup, S) == 0

    def test_counts_amplifiers_by_spec_and_family(self):
        soup, family = self.build()
        # 6 instances round-robin over 4 specs: two specs get doubles
        assert count_motif(soup, family[0]) == 2
        assert count_motif(soup, family[3]) == 1
        assert count_motif(soup, list(family)) == 6
        assert count_motif(soup, amplifier_motif("succ", family)) == 6

    def test_observer_snapshots_are_independent(self):
        soup, family = self.build()
        observer = make_observer(MotifSet((
            molecule_motif("k", K),
            amplifier_motif("succ", family),
        )))
        record = observer(soup)
        assert record.collision_index == 0
        assert record.counts == {"k": 7, "succ": 6}
        assert record.soup_size == 18
        record.counts["k"] = -1
        assert observer(soup).counts["k"] == 7


class TestAnalysis:
    SERIES = [
        rec(1000, {"scc": 5}),
        rec(2000, {"scc": 30}),
        rec(3000, {"scc": 12}),
    ]

    def test_threshold_checks_final_record(self):
        assert not threshold_fraction(self.SERIES, "scc", 0.20)
        assert threshold_fraction(self.SERIES, "scc", 0.10)

    def test_threshold_peak_mode(self):
        assert threshold_fraction(self.SERIES, "scc", 0.20, final_only=False)
        assert not threshold_fraction(self.SERIES, "scc", 0.31, final_only=False)

    def test_threshold_validates_inputs(self):
        with pytest.raises(ValueError):
            threshold_fraction([], "scc", 0.2)
        with pytest.raises(ValueError):
            threshold_fraction(self.SERIES, "scc", 1.5)

    def test_time_average(self):
        assert time_averaged_population(self.SERIES, "scc") == pytest.approx(
            (0.05 + 0.30 + 0.12) / 3)
        with pytest.raises(ValueError):
            time_averaged_population([], "scc")


class TestCsv:
    RECORDS = [
        PopulationRecord(1000, {"scc": 5, "succ amps": 10}, 5000),
        PopulationRecord(2000, {"scc": 7, "succ amps": 9}, 5000),
    ]

    def test_layout(self, tmp_path):
        path = tmp_path / "series.csv"
        write_records_csv(path, self.RECORDS)
        text = path.read_text(encoding="utf-8")
        assert text == (
            "collision,scc,succ amps,soup_size\n"
            "1000,5,10,5000\n"
            "2000,7,9,5000\n"
        )

    def test_round_trip_is_exact(self, tmp_path):
        path = tmp_path / "series.csv"
        write_records_csv(path, self.RECORDS)
        assert read_records_csv(path) == self.RECORDS

    def test_empty_series_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            write_records_csv(tmp_path / "x.csv", [])

    def test_label_mismatch_rejected(self, tmp_path):
        bad = [rec(1, {"a": 1}), rec(2, {"b": 2})]
        with pytest.raises(ValueError, match="labels"):
            write_records_csv(tmp_path / "x.csv", bad)

    def test_reader_validates_header_and_width(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("time,scc\n1,2\n", encoding="utf-8")
        with pytest.raises(ValueError, match="header"):
            read_records_csv(path)
        path.write_text("collision,scc,soup_size\n1,2\n", encoding="utf-8")
        with pytest.raises(ValueError, match="width"):
            read_records_csv(path)

    def test_observed_run_round_trips(self, tmp_path):
        soup = init_soup([Molecules(S, fraction=0.4), Molecules(K, fraction=0.3),
                          Molecules(I, fraction=0.3)], size=60, seed=2)
        observer = make_observer(MotifSet((
            molecule_motif("s", S), molecule_motif("k", K), molecule_motif("i", I))))
        from lambdasoup.soup import Schedules

        records = soup.run(1500, Schedules(measure_every=300), observer)
        assert [r.collision_index for r in records] == [300, 600, 900, 1200, 1500]
        path = tmp_path / "run.csv"
        write_records_csv(path, records)
        assert read_records_csv(path) == records
