"""
ConfigManager 测试

验证运行配置的加载、保存、验证以及环境变量覆盖。
"""

import pytest
from pydantic import ValidationError

from surface_immersions.config_manager import ConfigManager, RunConfig, Tolerances


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "surface-immersions.yaml"
    path.write_text(
        "output_format: json\n"
        "seed: 7\n"
        "jobs: 4\n"
        "log_level: DEBUG\n"
        "tolerances:\n"
        "  sample_cap: 512\n"
        "  angle_integrality: 0.1\n",
        encoding="utf-8",
    )
    return str(path)


class TestConfigManager:
    """ConfigManager 基本功能"""

    def test_load_config(self, config_file):
        config = ConfigManager(config_file).load_config()
        assert config.output_format == "json"
        assert config.seed == 7
        assert config.jobs == 4
        assert config.log_level == "DEBUG"
        assert config.log_file is None
        assert config.tolerances.sample_cap == 512
        assert config.tolerances.angle_integrality == 0.1
        assert config.tolerances.motion_residual == 1e-9
        assert config.tolerances.conjugator_bound is None

    def test_default_path(self):
        assert ConfigManager().config_path == "surface-immersions.yaml"

    def test_missing_file(self, tmp_path):
        manager = ConfigManager(str(tmp_path / "missing.yaml"))
        with pytest.raises(FileNotFoundError, match="Configuration file not found"):
            manager.load_config()

    def test_invalid_yaml(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("seed: [1, 2\n", encoding="utf-8")
        with pytest.raises(ValueError, match="Invalid YAML format"):
            ConfigManager(str(path)).load_config()

    def test_not_a_mapping(self, tmp_path):
        path = tmp_path / "list.yaml"
        path.write_text("- 1\n- 2\n", encoding="utf-8")
        with pytest.raises(ValueError, match="mapping"):
            ConfigManager(str(path)).load_config()

    def test_empty_file_uses_defaults(self, tmp_path):
        path = tmp_path / "empty.yaml"
        path.write_text("", encoding="utf-8")
        config = ConfigManager(str(path)).load_config()
        assert config.output_format == "text"
        assert config.tolerances.sample_cap == 4096

    def test_invalid_tolerance(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("tolerances:\n  sample_cap: 2\n", encoding="utf-8")
        with pytest.raises(ValueError, match="Failed to load configuration"):
            ConfigManager(str(path)).load_config()

    def test_validation_failure(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("jobs: 0\noutput_format: pdf\n", encoding="utf-8")
        with pytest.raises(ValueError, match="Configuration validation failed"):
            ConfigManager(str(path)).load_config()

    def test_current_before_load(self, config_file):
        with pytest.raises(RuntimeError, match="No configuration loaded"):
            ConfigManager(config_file).current

    def test_current_after_load(self, config_file):
        manager = ConfigManager(config_file)
        config = manager.load_config()
        assert manager.current is config

    def test_save_and_load(self, tmp_path):
        path = tmp_path / "nested" / "config.yaml"
        manager = ConfigManager(str(path))
        config = RunConfig(seed=3, jobs=2, tolerances=Tolerances(sample_cap=64))
        manager.save_config(config)
        loaded = ConfigManager(str(path)).load_config()
        assert loaded.seed == 3
        assert loaded.jobs == 2
        assert loaded.tolerances == config.tolerances

    def test_save_invalid(self, tmp_path):
        manager = ConfigManager(str(tmp_path / "config.yaml"))
        with pytest.raises(ValueError, match="jobs must be positive"):
            manager.save_config(RunConfig(jobs=0))
        assert not (tmp_path / "config.yaml").exists()


class TestValidation:
    """validate_config"""

    def setup_method(self):
        self.manager = ConfigManager("unused.yaml")

    def test_default_is_valid(self):
        assert self.manager.validate_config(RunConfig()) == []

    @pytest.mark.parametrize(
        "kwargs, message",
        [
            ({"output_format": "pdf"}, "output_format must be one of"),
            ({"jobs": 0}, "jobs must be positive"),
            ({"seed": -1}, "seed must be non-negative"),
            ({"log_level": "LOUD"}, "log_level must be"),
        ],
    )
    def test_errors(self, kwargs, message):
        errors = self.manager.validate_config(RunConfig(**kwargs))
        assert len(errors) == 1
        assert message in errors[0]

    def test_lowercase_log_level(self):
        assert self.manager.validate_config(RunConfig(log_level="warn")) == []

    def test_wrong_type(self):
        assert self.manager.validate_config({"seed": 1}) == [
            "config must be a RunConfig instance"
        ]


class TestTolerances:
    """容差与环境变量"""

    def test_defaults(self):
        t = Tolerances()
        assert t.motion_residual == 1e-9
        assert t.angle_integrality == 0.05
        assert t.sample_cap == 4096
        assert t.conjugator_bound is None

    def test_bounds(self):
        with pytest.raises(ValidationError):
            Tolerances(angle_integrality=0.5)
        with pytest.raises(ValidationError):
            Tolerances(motion_residual=0)

    def test_frozen(self):
        with pytest.raises(ValidationError):
            Tolerances().sample_cap = 8

    def test_environment(self, monkeypatch):
        monkeypatch.setenv("SURFACE_IMMERSIONS_CONJUGATOR_BOUND", "6")
        assert Tolerances().conjugator_bound == 6

    def test_environment_overrides_file(self, config_file, monkeypatch):
        monkeypatch.setenv("SURFACE_IMMERSIONS_SAMPLE_CAP", "128")
        config = ConfigManager(config_file).load_config()
        assert config.tolerances.sample_cap == 128
        assert config.tolerances.angle_integrality == 0.1
