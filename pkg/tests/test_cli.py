import math

import pytest

from dirform.cli import main
from dirform.config import build_scenario, dumps_config, parse_config
from dirform.errors import ConfigError

BROWNIAN_CFG = """\
version = 1

[interval]
a = -inf
b = inf
e = 0.0

[speed]
kind = "lebesgue"

[set]
kind = "full"

[limit]
set = "full"
boundary = "absorbing"
"""

SMALL_RUN_CFG = """\
version = 1

[speed]
kind = "cauchy"

[set]
kind = "fat_cantor"
base = 0.99
ratio = 0.4
plateau = 4

[sequence]
kind = "comb"
indices = [1, 2, 4]

[limit]
set = "base"
boundary = "full"

[solver]
n_nodes = 300
radius = 5.0

[run]
alphas = [1.0]
test_functions = ["gauss"]
tolerance = 0.05
"""


class TestConfig:
    def test_roundtrip_identity(self):
        cfg = parse_config(SMALL_RUN_CFG)
        text = dumps_config(cfg)
        assert parse_config(text) == cfg
        assert parse_config(dumps_config(parse_config(text))) == cfg

    def test_roundtrip_with_infinities_and_atoms(self):
        text = BROWNIAN_CFG + "\n[solver]\nn_nodes = 100\n"
        cfg = parse_config(text)
        assert cfg.interval.a == -math.inf
        assert parse_config(dumps_config(cfg)) == cfg

    def test_unknown_key_named(self):
        with pytest.raises(ConfigError, match="solver.n_cells"):
            parse_config("version = 1\n[solver]\nn_cells = 4\n")

    def test_missing_version(self):
        with pytest.raises(ConfigError, match="version"):
            parse_config("[interval]\na = 0.0\n" )

    def test_bad_value_range(self):
        with pytest.raises(ConfigError, match="set.base"):
            parse_config('version = 1\n[set]\nkind = "fat_cantor"\nbase = 1.5\n')

    def test_defaults_build(self):
        scn = build_scenario(parse_config(SMALL_RUN_CFG))
        assert scn.indices == (1, 2, 4)
        assert scn.tolerance == 0.05


class TestCommands:
    def test_classify_brownian(self, tmp_path, capsys):
        p = tmp_path / "b.toml"
        p.write_text(BROWNIAN_CFG)
        assert main(["classify", "--config", str(p)]) == 0
        out = capsys.readouterr().out
        assert "recurrent, conservative" in out

    def test_classify_transient(self, tmp_path, capsys):
        p = tmp_path / "t.toml"
        p.write_text(SMALL_RUN_CFG.replace('boundary = "full"', 'boundary = "absorbing"'))
        assert main(["classify", "--config", str(p)]) == 0
        out = capsys.readouterr().out
        assert "transient" in out

    def test_malformed_config_exit_2(self, tmp_path, capsys):
        p = tmp_path / "bad.toml"
        p.write_text("version = 1\n[solver]\nwhat = 1\n")
        assert main(["classify", "--config", str(p)]) == 2
        assert "solver.what" in capsys.readouterr().err

    def test_unwritable_out_exit_4(self, tmp_path, capsys):
        cfgp = tmp_path / "c.toml"
        cfgp.write_text(SMALL_RUN_CFG)
        blocker = tmp_path / "blocker"
        blocker.write_text("file, not a directory")
        out = blocker / "sub"
        assert main(["mosco", "--config", str(cfgp), "--out", str(out)]) == 4

    def test_mosco_outputs_and_determinism(self, tmp_path, capsys):
        cfgp = tmp_path / "c.toml"
        cfgp.write_text(SMALL_RUN_CFG)
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        assert main(["mosco", "--config", str(cfgp), "--out", str(out1)]) == 0
        assert main(["mosco", "--config", str(cfgp), "--out", str(out2)]) == 0
        csv1 = (out1 / "errors.csv").read_bytes()
        csv2 = (out2 / "errors.csv").read_bytes()
        assert csv1 == csv2
        assert csv1.decode().splitlines()[0] == \
            "n,alpha,test_fn,error_to_limit_F0,error_to_limit_F,N,R"
        assert (out1 / "report.md").exists()

    def test_grid_function_csv(self, tmp_path):
        from dirform.cli import write_grid_function

        p = tmp_path / "fn.csv"
        write_grid_function(p, [0.0, 0.5, 1.0], [1.0, 0.25, 0.0])
        lines = p.read_text().splitlines()
        assert lines[0] == "x,value"
        assert lines[1] == "0.0,1.0"
        assert len(lines) == 4

    def test_mosco_threads_deterministic(self, tmp_path):
        cfgp = tmp_path / "c.toml"
        cfgp.write_text(SMALL_RUN_CFG)
        out1, out2 = tmp_path / "s1", tmp_path / "s2"
        assert main(["mosco", "--config", str(cfgp), "--out", str(out1)]) == 0
        assert main(["mosco", "--config", str(cfgp), "--out", str(out2),
                     "--threads", "4"]) == 0
        assert (out1 / "errors.csv").read_bytes() == (out2 / "errors.csv").read_bytes()

    def test_paper_examples_all_match(self, tmp_path, capsys):
        out = tmp_path / "px"
        assert main(["paper-examples", "--out", str(out)]) == 0
        summary = (out / "summary.md").read_text()
        assert summary.count("| yes |") >= 5
        for sub in out.iterdir():
            if sub.is_dir():
                assert (sub / "errors.csv").exists()
                assert (sub / "report.md").exists()
