import json
import subprocess
import sys

import pytest

from geodesica.errors import BadCensus, NotARepresentation
from geodesica.pipeline import (
    get_knot,
    load_census,
    pretzel_chain_clines,
    run,
    strip_74_clines,
    summarize,
)


TWO_BRIDGE_TABLE_ROWS = [
    "7_3", "7_5", "8_4", "8_6", "8_14", "9_3", "9_4", "9_6", "9_7", "9_8",
    "9_9", "9_10", "9_12", "9_13", "9_15", "9_18", "9_21", "9_23",
]


class TestLoad:
    def test_bundled_census_loads(self, census_records):
        names = [r.name for r in census_records]
        for expected in TWO_BRIDGE_TABLE_ROWS + ["7_4", "P(3,3,3)", "P(5,5,5)", "P(7,7,7)"]:
            assert expected in names

    def test_representations_verified_eagerly(self, census_records):
        for r in census_records:
            if not r.awaiting_data:
                assert r.rep is not None
                assert r.irreducibility in ("irreducible", "certified", "assumed")

    def test_stubs_marked(self, census_records):
        stubs = [r.name for r in census_records if r.awaiting_data]
        assert set(stubs) == {"8_15", "9_16", "9_25", "9_38", "9_39", "9_49"}

    def test_corrupted_minpoly_rejected(self, tmp_path):
        bad = {
            "schema": 1,
            "knots": [
                {
                    "name": "7_3_broken",
                    "kind": "two_bridge",
                    "p": 13,
                    "q": 9,
                    "genus": 2,
                    "fibered": False,
                    # wrong cubic: does not divide the Riley polynomial
                    "minpoly": ["-1", "0", "0", "1"],
                }
            ],
        }
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(bad))
        with pytest.raises(NotARepresentation):
            load_census(path)

    def test_schema_violation(self, tmp_path):
        path = tmp_path / "nokinds.json"
        path.write_text(json.dumps({"knots": [{"name": "x", "kind": "nope"}]}))
        with pytest.raises(BadCensus):
            load_census(path)


class TestRun:
    def test_empty_checks(self, census_records):
        report = run(census_records, checks=())
        assert report.exit_status == 0
        assert report.payload["checks"] == []

    def test_unknown_check_rejected(self, census_records):
        with pytest.raises(ValueError):
            run(census_records, checks=("flurble",))

    def test_slopes_subset(self, census_records):
        report = run(
            census_records, checks=("slopes",), names=["7_4", "P(3,3,3)"]
        )
        assert report.exit_status == 0
        by_name = {k["name"]: k for k in report.payload["knots"]}
        assert by_name["7_4"]["slopes"]["slopes"] == ["-2", "2"]
        assert by_name["P(3,3,3)"]["slopes"]["slopes"] == ["0"]

    def test_uniqueness_subset(self, census_records):
        report = run(
            census_records, checks=("uniqueness",), names=["7_4", "P(3,3,3)"]
        )
        assert report.exit_status == 0
        for entry in report.payload["knots"]:
            if "uniqueness" in entry:
                assert entry["uniqueness"]["all_excluded"]

    def test_byte_identical_reports(self):
        # fresh loads both times: determinism must not depend on cache state
        r1 = run(load_census(), checks=("slopes", "uniqueness"), names=["7_4", "P(3,3,3)"])
        r2 = run(load_census(), checks=("slopes", "uniqueness"), names=["7_4", "P(3,3,3)"])
        assert r1.to_json_bytes() == r2.to_json_bytes()

    def test_worker_pool_matches_serial(self, census_records):
        names = ["7_4", "P(3,3,3)", "P(5,5,5)"]
        serial = run(census_records, checks=("slopes", "uniqueness"), names=names)
        pooled = run(
            census_records, checks=("slopes", "uniqueness"), names=names, workers=2
        )
        assert serial.to_json_bytes() == pooled.to_json_bytes()

    def test_uniqueness_theorem_assembled(self, census_records):
        from geodesica.pipeline import uniqueness_theorem_check

        for name in ("7_4", "P(3,3,3)"):
            record = get_knot(census_records, name)
            rec = uniqueness_theorem_check(record)
            assert rec["unique_surface_confirmed"]
            assert rec["coverage"]["ok"]

    def test_summarize_runs(self, census_records):
        report = run(census_records, checks=("slopes",), names=["7_4"])
        text = summarize(report)
        assert "7_4" in text

    def test_every_verdict_cites_its_rule(self, census_records):
        report = run(census_records, checks=("euler",), names=["7_3", "7_4", "P(5,5,5)"])
        for entry in report.payload["knots"]:
            e = entry["euler"]
            assert e["verdict"]
            assert len(e["justification"]) > 10

    def test_anchor_mismatch_flips_exit_status(self, tmp_path):
        row = {
            "name": "7_4",
            "kind": "two_bridge",
            "p": 15,
            "q": 11,
            "genus": 1,
            "fibered": False,
            "known_unique": True,
            "minpoly": ["1", "4", "-4", "1"],
            "expected": {"euler": [5]},  # deliberately wrong anchor
        }
        path = tmp_path / "wrong.json"
        path.write_text(json.dumps({"schema": 1, "knots": [row]}))
        report = run(load_census(path), checks=("euler",))
        assert report.anchor_mismatches == 1
        assert report.exit_status == 1


class TestExplicitRepresentations:
    def test_conjugated_explicit_rep_round_trips(self, rep_73, tmp_path):
        # feed a deliberately conjugated copy of the 13/9 representation
        # through the explicit-knot interface: the loader must re-normalize
        # the peripheral elements and reproduce the same Euler data
        from geodesica.knotgroup import Mat2, _two_bridge_w

        K = rep_73.field
        z = K.gen()
        g = Mat2(K.one() + 2 * z, z, K.rational(2), K.one())
        assert g.det() == K.one()
        ginv = g.inverse()
        conj = [g * img * ginv for img in rep_73.images]
        pres = rep_73.presentation
        names = pres.generator_names
        row = {
            "name": "7_3_explicit",
            "kind": "explicit",
            "genus": 2,
            "fibered": False,
            "minpoly": K.minpoly.to_json(),
            "generators": list(names),
            "relators": [r.to_string(names) for r in pres.relators],
            "meridian": pres.meridian.to_string(names),
            "longitude": pres.longitude.to_string(names),
            "images": [
                [e.to_json() for e in m.entries()] for m in conj
            ],
            "manual_field_flags": {"no_real_subfield": True,
                                   "no_quadratic_subfield": True},
            "expected": {"euler": [3, 1], "verdict": "NoTGS_euler_bound"},
        }
        path = tmp_path / "explicit.json"
        path.write_text(json.dumps({"schema": 1, "knots": [row]}))
        records = load_census(path)
        report = run(records, checks=("euler",))
        assert report.exit_status == 0
        entry = report.payload["knots"][0]
        assert entry["euler"]["euler"] == [3, 1]
        assert entry["euler"]["verdict"] == "NoTGS_euler_bound"

    def test_normalize_peripheral_restores_triangular_form(self, rep_73):
        from geodesica.knotgroup import Mat2, evaluate_word, normalize_peripheral
        from geodesica.knotgroup import MatrixRep

        K = rep_73.field
        z = K.gen()
        g = Mat2(K.one(), K.zero(), z, K.one())
        ginv = g.inverse()
        twisted = MatrixRep(
            presentation=rep_73.presentation,
            field=K,
            images=tuple(g * img * ginv for img in rep_73.images),
        )
        mer = evaluate_word(twisted, twisted.presentation.meridian)
        assert not mer.c.is_zero()
        fixed = normalize_peripheral(twisted)
        mer2 = evaluate_word(fixed, fixed.presentation.meridian)
        assert mer2.c.is_zero()
        assert fixed.longitude_matrix().c.is_zero()


class TestRenderConfigs:
    def test_pretzel_chain_counts(self):
        clines = pretzel_chain_clines(1, 128)
        # H_tau, s1(H_tau), C_1, C_2, D_1, D_2
        assert len(clines) == 6

    def test_strip_74(self, census_records):
        record = get_knot(census_records, "7_4")
        clines = strip_74_clines(record, 128)
        assert len(clines) == 4


class TestCLI:
    def _run(self, *args):
        return subprocess.run(
            [sys.executable, "-m", "geodesica.cli", *args],
            capture_output=True, text=True, timeout=600,
        )

    def test_pretzel_command(self):
        res = self._run("pretzel", "--k", "1", "--check", "recursion")
        assert res.returncode == 0
        payload = json.loads(res.stdout)
        assert payload["lambda"] == ["-1", "3", "-1", "1"]
        assert payload["matches_closed_form"]

    def test_euler_command(self):
        res = self._run("euler", "--knot", "7_4", "--json")
        assert res.returncode == 0
        assert json.loads(res.stdout)["euler"] == [1]

    def test_slopes_command(self):
        res = self._run("slopes", "--knot", "7_4", "--json")
        assert res.returncode == 0
        assert json.loads(res.stdout)["slopes"] == ["-2", "2"]

    def test_render_command(self, tmp_path):
        out = tmp_path / "chain.svg"
        res = self._run(
            "render", "--knot", "P(3,3,3)", "--config", "pretzel-chain",
            "--out", str(out),
        )
        assert res.returncode == 0
        text = out.read_text()
        assert text.startswith('<?xml version="1.0" encoding="UTF-8"?>')
        assert text.count("<circle") == 4
        assert text.count("<line") == 2

    def test_report_command(self, tmp_path):
        out = tmp_path / "report.json"
        res = self._run(
            "report", "--checks", "slopes", "--knot", "7_4",
            "--json", str(out),
        )
        assert res.returncode == 0
        payload = json.loads(out.read_text())
        assert payload["schema"] == 1
