import os

import pytest

from provision_point.config import SEED_ENV, RunConfig, default_seed, load_config
from provision_point.errors import ConfigError
from provision_point.mechanisms.model import PPRG, PPS

CONFIG_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "configs")


def write(tmp_path, text):
    path = tmp_path / "run.yaml"
    path.write_text(text, encoding="utf-8")
    return str(path)


class TestLoadConfig:

    def test_none_gives_defaults(self):
        config = load_config(None)
        assert config.project.provision_point == 100.0
        assert config.sample.num_points == 1000
        assert config.simulation.mechanisms == ["pprg", "ppre", "pprp", "pps"]

    def test_empty_file_gives_defaults(self, tmp_path):
        assert load_config(write(tmp_path, "")) == RunConfig()

    @pytest.mark.parametrize("name", sorted(os.listdir(CONFIG_DIR)))
    def test_shipped_configs_load(self, name):
        load_config(os.path.join(CONFIG_DIR, name))

    def test_unknown_key_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(write(tmp_path, "project:\n  provision_pont: 100\n"))

    def test_out_of_range_value_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(write(tmp_path, "project:\n  deadline: 0\n"))

    def test_both_budget_sources_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(write(tmp_path, "equilibrium:\n  budget: 10\n  budget_fraction: 0.5\n"))

    def test_non_mapping_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(write(tmp_path, "- 1\n- 2\n"))

    def test_bad_yaml_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(write(tmp_path, "project: [unclosed\n"))

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_config(str(tmp_path / "absent.yaml"))


class TestSeeds:

    def test_env_seed_fills_unset_seeds(self, monkeypatch):
        monkeypatch.setenv(SEED_ENV, "42")
        config = load_config(None)
        assert config.sample.seed == 42
        assert config.simulation.seed == 42

    def test_explicit_seed_wins(self, monkeypatch, tmp_path):
        monkeypatch.setenv(SEED_ENV, "42")
        assert load_config(write(tmp_path, "sample:\n  seed: 9\n")).sample.seed == 9

    def test_bad_env_seed(self, monkeypatch):
        monkeypatch.setenv(SEED_ENV, "abc")
        with pytest.raises(ConfigError):
            default_seed()

    def test_blank_env_seed_is_zero(self, monkeypatch):
        monkeypatch.setenv(SEED_ENV, " ")
        assert default_seed() == 0


class TestConversions:

    def test_to_scheme(self, tmp_path):
        config = load_config(write(tmp_path, "schemes:\n  pprg: {a: 3, gamma: 4}\n  pps: {liquidity: 2}\n"))
        assert config.to_scheme("PPRG") == PPRG(a=3.0, gamma=4.0)
        assert config.to_scheme("pps") == PPS(liquidity=2.0)
        with pytest.raises(ConfigError):
            config.to_scheme("ppx")

    def test_to_project_spec(self):
        spec = RunConfig().to_project_spec("pprp")
        assert (spec.provision_point, spec.deadline, spec.budget) == (100.0, 10.0, 20.0)
        assert spec.scheme.name == "pprp"

    def test_to_sim_config(self, tmp_path):
        config = load_config(write(tmp_path, (
            "project: {provision_point: 50, deadline: 5}\n"
            "schemes:\n  pprp: {k3: 3}\n"
            "simulation:\n  mechanisms: [pprp]\n  budget_fractions: [0.5]\n  arrival_window: [0.4, 1.0]\n"
        )))
        sim = config.to_sim_config()
        assert sim.provision_point == 50.0 and sim.deadline == 5.0
        assert sim.mechanisms == ("pprp",)
        assert sim.budget_fractions == (0.5,)
        assert sim.arrival_window == (0.4, 1.0)
        assert sim.scheme("pprp").k == pytest.approx(3.0)

    def test_to_sample_spec(self):
        sample = RunConfig().to_sample_spec()
        assert sample.num_points == 1000
        assert sample.x_range == (1.0, 20.0)

    def test_refund_profile(self):
        config = load_config(os.path.join(CONFIG_DIR, "refund.yaml"))
        profile = config.to_refund_profile()
        assert profile.total == pytest.approx(50.0)
        assert profile.contribution_of(2).at == 2.0

    def test_refund_profile_needs_players(self):
        with pytest.raises(ConfigError):
            RunConfig().to_refund_profile()
