import json

import numpy as np
import pytest

from blochkit.cli import EXIT_CONFIG, EXIT_OK, EXIT_SELF_MAP, main
from blochkit.errors import ConfigError, InvalidSelfMap
from blochkit.norms import monomial_bloch_norm_exact
from blochkit.reporting import Report, RunConfig, csv_text, emit, loads_config, run

SMALL = """
n_max = {n_max}
seed = 3
[[combination]]
lambda = 1
symbol = "{phi}"
{extra}
[grid]
radial = 16
angular = 256
[paths]
n_points = 4
n_steps = 32
random_points = 2
[testfns]
n_trunc = 512
max_frames = 2
"""


def small(phi="z", n_max=32, extra=""):
    return loads_config(SMALL.format(phi=phi, n_max=n_max, extra=extra))


@pytest.fixture(scope="module")
def identity_report():
    return run(small("z", n_max=64))


class TestConfig:
    def test_defaults(self):
        cfg = loads_config('[[combination]]\nlambda = 1\nsymbol = "z"\n')
        assert cfg.norm == "bloch" and cfg.params.n_max == 256 and cfg.seed == 0
        assert cfg.formats == ("json",) and cfg.testfns.n_trunc == 4096

    def test_complex_lambda(self):
        cfg = loads_config('[[combination]]\nlambda = [0, 2]\nsymbol = "z"\n')
        assert cfg.combination[0][0] == 2j

    def test_zero_lambda(self):
        with pytest.raises(ConfigError) as e:
            loads_config('[[combination]]\nlambda = [0, 0]\nsymbol = "z"\n')
        assert "combination[0].lambda" in str(e.value)

    def test_invalid_symbol_keeps_cause(self):
        with pytest.raises(ConfigError) as e:
            loads_config('[[combination]]\nlambda = 1\nsymbol = "poly([0, 2])"\n')
        assert isinstance(e.value.__cause__, InvalidSelfMap)

    @pytest.mark.parametrize("extra", ['norm = "h2"', "n_max = 3", "seed = -1", "[tolerances]\nzero = 0",
                                       '[output]\nformats = ["xml"]', '[paths]\nkinds = [["spiral", 0]]'])
    def test_bad_values(self, extra):
        doc = '[[combination]]\nlambda = 1\nsymbol = "z"\n'
        if not extra.startswith("["):
            doc = extra + "\n" + doc
        else:
            doc += extra + "\n"
        with pytest.raises(ConfigError):
            loads_config(doc)

    def test_malformed_toml(self):
        with pytest.raises(ConfigError):
            loads_config("combination = [")


class TestRun:
    def test_identity_sequence_matches_closed_form(self, identity_report):
        rows = [line.split(",") for line in csv_text(identity_report).splitlines()[1:]]
        assert len(rows) == 64
        for n, v in rows:
            want = monomial_bloch_norm_exact(int(n))
            assert abs(float(v) - want) <= 1e-4 * want
        assert identity_report.verdicts["power_sequence"]["verdict"] == "NonCompactEvidence"

    def test_thresholds_on_every_verdict(self, identity_report):
        v = identity_report.verdicts
        assert "thresholds" in v["power_sequence"] and "thresholds" in v["structural"]
        assert all("thresholds" in x for x in v["path_conditions"].values())
        assert all("thresholds" in x for x in v["single"].values())

    def test_sections_present(self, identity_report):
        r = identity_report
        assert r.validation[0]["accepted"] and r.index_sets and r.coefficient_bounds
        assert r.structural["hypothesis"] is True and r.errors == []

    def test_json_round_trip(self, identity_report):
        text = identity_report.to_json()
        back = Report.from_json(text)
        assert back == identity_report and back.to_json() == text

    def test_half_z_compact(self):
        r = run(small("scale(0.5, z)"))
        assert r.verdicts["power_sequence"]["verdict"] == "CompactEvidence"
        assert r.sequence["fit"]["ratio"] == pytest.approx(0.5, abs=1e-3)

    def test_failed_validation(self):
        r = run(RunConfig(((1.0, "z"), (1.0, "poly([0, 2])"))))
        assert r.verdicts is None and r.sequence is None
        assert [v["accepted"] for v in r.validation] == [True, False]

    def test_subset_hypothesis_recorded(self):
        extra = '[[combination]]\nlambda = -1\nsymbol = "z"\n[[combination]]\nlambda = 5\nsymbol = "z"'
        r = run(small("z", extra=extra))
        assert r.structural["hypothesis"] is False and r.structural["witness"] == [1, 2]

    def test_emit(self, identity_report, tmp_path):
        paths = emit(identity_report, tmp_path / "out" / "run", ("json", "csv", "plot"))
        names = sorted(p.name for p in paths)
        assert names == ["run.csv", "run.json", "run.residuals.dat", "run.sn.dat", "run.timing.json"]
        assert "timing" not in json.loads((tmp_path / "out" / "run.json").read_text())


class TestCli:
    def test_validate_codes(self, capsys):
        assert main(["validate", "sigma(0.5)"]) == EXIT_OK
        assert main(["validate", "poly([0, 2])"]) == EXIT_SELF_MAP
        assert main(["validate", "sigma(0.5"]) == EXIT_CONFIG

    def test_norm(self, capsys):
        assert main(["norm", "z", "--n", "200", "--grid", "24,256"]) == EXIT_OK
        out = json.loads(capsys.readouterr().out)
        assert out["value"] == pytest.approx(monomial_bloch_norm_exact(200), rel=1e-4)

    def test_zero_lambda_term(self, capsys):
        assert main(["norm", "--term", "0", "z"]) == EXIT_CONFIG

    def test_power_seq_csv(self, tmp_path):
        out = tmp_path / "s.csv"
        assert main(["power-seq", "scale(0.5, z)", "--nmax", "16", "--grid", "16,256", "--format", "csv",
                     "--out", str(out)]) == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0] == "n,s_n" and len(lines) == 17
        assert float(lines[1].split(",")[1]) == pytest.approx(0.5, rel=1e-9)

    def test_full_report_config(self, tmp_path):
        cfg = tmp_path / "c.toml"
        cfg.write_text(SMALL.format(phi="scale(0.5, z)", n_max=16, extra=""))
        assert main(["full-report", "--config", str(cfg), "--out", str(tmp_path / "r"), "--format", "json,csv"]) == 0
        data = json.loads((tmp_path / "r.json").read_text())
        assert data["schema"] == "bloch-kit/1" and data["seed"] == 3
        assert np.isclose(data["sequence"]["values"][0], 0.5)

    def test_full_report_invalid_symbol_in_config(self, tmp_path):
        cfg = tmp_path / "c.toml"
        cfg.write_text('[[combination]]\nlambda = 1\nsymbol = "poly([0, 2])"\n')
        assert main(["full-report", "--config", str(cfg)]) == EXIT_SELF_MAP

    def test_bad_format(self):
        assert main(["full-report", "--term", "1", "z", "--format", "xml"]) == EXIT_CONFIG
