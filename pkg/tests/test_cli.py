import math

import pytest

from hybridwigner.cli import (
    ConfigError,
    NumericError,
    ResultTable,
    emit_csv,
    main,
    parse_config,
    render_csv,
    run_scenario,
)
from hybridwigner.hybrid_model import DeltaAmplitude

MINIMAL = """
[scenario]
name = moments
chi = 1.0
times = 0.5, 1.0, 2.0

[atom]
kind = phase

[field]
kind = delta
r0 = 1.0
"""


class TestParsing:
    def test_minimal_config(self):
        config = parse_config(MINIMAL)
        assert config.scenario == "moments"
        assert config.atom_kind == "phase"
        assert isinstance(config.field, DeltaAmplitude)
        assert config.times == (0.5, 1.0, 2.0)
        assert config.quadrature.relative_tolerance == 1e-10

    def test_range_times(self):
        config = parse_config(MINIMAL.replace("times = 0.5, 1.0, 2.0", "times = range(0, 4, 401)"))
        assert len(config.times) == 401
        assert config.times[0] == 0.0
        assert config.times[-1] == pytest.approx(4.0)
        assert config.times[1] == pytest.approx(0.01)

    def test_negative_sigma_reports_line(self):
        text = MINIMAL.replace("kind = delta\nr0 = 1.0", "kind = gaussian\nr0 = 1.0\nsigma = -1")
        with pytest.raises(ConfigError) as exc_info:
            parse_config(text)
        joined = "\n".join(exc_info.value.errors)
        assert "sigma" in joined
        assert "line" in joined

    def test_all_errors_reported_at_once(self):
        text = """
[scenario]
name = nonsense
times = 2.0, 1.0

[field]
kind = gaussian
r0 = 1.0
sigma = -1
bogus = 3
"""
        with pytest.raises(ConfigError) as exc_info:
            parse_config(text)
        joined = "\n".join(exc_info.value.errors)
        assert "unknown scenario" in joined
        assert "strictly increasing" in joined
        assert "sigma" in joined
        assert "bogus" in joined

    def test_unknown_key_and_section(self):
        with pytest.raises(ConfigError) as exc_info:
            parse_config(MINIMAL + "\n[plotting]\ncolor = red\n")
        assert any("unknown section" in e for e in exc_info.value.errors)

    def test_bloch_atom(self):
        text = MINIMAL.replace("kind = phase", "kind = bloch\ns = 0.3, 0.0, -0.4")
        config = parse_config(text)
        assert config.atom.s == pytest.approx((0.3, 0.0, -0.4))

    def test_compare_requires_unit_width_gaussian(self):
        text = MINIMAL.replace("name = moments", "name = compare")
        with pytest.raises(ConfigError):
            parse_config(text)

    def test_quadrature_overrides(self):
        text = MINIMAL + "\n[quadrature]\nrelative_tolerance = 1e-8\nmax_subdivisions = 1024\n"
        config = parse_config(text)
        assert config.quadrature.relative_tolerance == 1e-8
        assert config.quadrature.max_subdivisions == 1024


class TestScenarios:
    def test_moments_columns_and_rows(self):
        table = run_scenario(parse_config(MINIMAL))
        assert table.columns[0] == "t"
        assert "sigma_minus_adag_abs" in table.columns
        assert len(table.rows) == 3
        assert [row[0] for row in table.rows] == [0.5, 1.0, 2.0]

    def test_phase_dist_delta_grid(self):
        text = MINIMAL.replace("name = moments", "name = phase-dist").replace(
            "kind = phase", "kind = ground"
        )
        table = run_scenario(parse_config(text))
        assert table.columns == ("t", "phi", "density")
        assert len(table.rows) == 3 * 101
        first_t = [r for r in table.rows if r[0] == 0.5]
        kappa = math.sqrt(3.0) * 0.5
        assert first_t[0][1] == pytest.approx(-kappa)
        assert first_t[-1][1] == pytest.approx(kappa)
        assert first_t[-1][2] < 0.0

    def test_compare_columns_superset_of_moments(self):
        base = """
[scenario]
name = compare
chi = 1.0
times = 0.0, 0.5

[atom]
kind = phase

[field]
kind = gaussian
r0 = 1.0
sigma = 1.0
"""
        table = run_scenario(parse_config(base))
        moments = run_scenario(parse_config(MINIMAL))
        corr_text = MINIMAL.replace("name = moments", "name = correlations")
        corrs = run_scenario(parse_config(corr_text))
        for col in moments.columns:
            assert col in table.columns
        for col in corrs.columns:
            assert col in table.columns
        assert any(c.startswith("q_") for c in table.columns)
        assert any(c.startswith("sc_") for c in table.columns)
        assert any(c.startswith("mf_") for c in table.columns)

    def test_oscillator_scenario_energy_column(self):
        text = """
[scenario]
name = oscillators
chi = 1.0
times = range(0, 3, 31)
beta0_re = 0.5
beta0_im = -0.5

[field]
kind = delta
r0 = 1.0
"""
        table = run_scenario(parse_config(text))
        energies = [row[5] for row in table.rows]
        assert max(abs(e - energies[0]) for e in energies) < 1e-12

    def test_threads_do_not_change_rows(self):
        config = parse_config(MINIMAL)
        assert run_scenario(config, threads=1).rows == run_scenario(config, threads=4).rows


class TestEmission:
    def test_byte_identical_reruns(self, tmp_path):
        config = parse_config(MINIMAL)
        p1 = tmp_path / "a.csv"
        p2 = tmp_path / "b.csv"
        emit_csv(run_scenario(config), str(p1))
        emit_csv(run_scenario(config), str(p2))
        assert p1.read_bytes() == p2.read_bytes()

    def test_metadata_before_header(self, tmp_path):
        path = tmp_path / "out.csv"
        emit_csv(run_scenario(parse_config(MINIMAL)), str(path))
        lines = path.read_text().splitlines()
        meta = [l for l in lines if l.startswith("# ")]
        assert meta and lines[len(meta)].startswith("t,")
        assert len(lines) == len(meta) + 1 + 3

    def test_empty_rows_header_only(self):
        table = ResultTable(("a", "b"), (), ("note",))
        text = render_csv(table)
        assert text == "# note\na,b\n"

    def test_nan_rejected(self):
        table = ResultTable(("x",), ((float("nan"),),), ())
        with pytest.raises(NumericError):
            render_csv(table)

    def test_seventeen_digit_floats(self):
        table = ResultTable(("x",), ((1.0 / 3.0,),), ())
        assert "0.33333333333333331" in render_csv(table)


class TestMain:
    def test_run_writes_csv(self, tmp_path, capsys):
        cfg = tmp_path / "scenario.cfg"
        cfg.write_text(MINIMAL)
        out = tmp_path / "out.csv"
        code = main(["run", str(cfg), "--output", str(out)])
        assert code == 0
        assert out.exists()

    def test_config_error_exit_code(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text(MINIMAL.replace("kind = delta\nr0 = 1.0", "kind = gaussian\nr0 = 1.0\nsigma = -1"))
        assert main(["run", str(cfg)]) == 1
        assert "sigma" in capsys.readouterr().err

    def test_missing_config_exit_code(self, tmp_path):
        assert main(["run", str(tmp_path / "nope.cfg")]) == 2

    def test_unwritable_output_exit_code(self, tmp_path):
        cfg = tmp_path / "scenario.cfg"
        cfg.write_text(MINIMAL)
        assert main(["run", str(cfg), "--output", str(tmp_path / "no/dir/out.csv")]) == 2

    def test_stdout_when_no_output(self, tmp_path, capsys):
        cfg = tmp_path / "scenario.cfg"
        cfg.write_text(MINIMAL)
        assert main(["run", str(cfg)]) == 0
        out = capsys.readouterr().out
        assert out.startswith("# hybridwigner")

    def test_nan_aborts_with_exit_code_3(self, tmp_path, monkeypatch, capsys):
        import hybridwigner.cli as cli_module

        monkeypatch.setattr(
            cli_module, "hybrid_expectation", lambda *a, **k: complex(float("nan"), 0.0)
        )
        cfg = tmp_path / "scenario.cfg"
        cfg.write_text(MINIMAL)
        out = tmp_path / "out.csv"
        assert main(["run", str(cfg), "--output", str(out)]) == 3
        assert not out.exists()
        assert "numeric" in capsys.readouterr().err


def test_bundled_figure_configs_parse():
    from importlib import resources

    for name in ("fig1", "fig2", "fig3", "fig4", "fig5"):
        text = (resources.files("hybridwigner") / "configs" / f"{name}.cfg").read_text()
        config = parse_config(text)
        assert config.times
