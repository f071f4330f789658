"""
Tests for project setup and structure.
"""

import sys
from pathlib import Path

import yaml


def test_python_version():
    """Test that Python version is 3.11 or higher."""
    assert sys.version_info >= (3, 11), "Python 3.11+ is required"


def test_package_imports():
    """Test that the main package can be imported."""
    import surface_immersions

    assert surface_immersions.__version__ == "0.1.0"
    assert callable(surface_immersions.decide_circle)
    assert callable(surface_immersions.decide_graph)


def test_cli_module_exists():
    """Test that CLI module exists and can be imported."""
    from surface_immersions import cli

    assert hasattr(cli, "main")


def test_project_structure():
    """Test that basic project structure exists."""
    project_root = Path(__file__).parent.parent
    package = project_root / "src" / "surface_immersions"

    assert (project_root / "pyproject.toml").exists()
    assert (project_root / "README.md").exists()
    assert (project_root / "requirements.txt").exists()
    assert (project_root / "surface-immersions.yaml.example").exists()

    assert (package / "__init__.py").exists()
    assert (package / "cli.py").exists()
    assert (package / "templates" / "diagram.svg.j2").exists()

    assert (project_root / "tests" / "__init__.py").exists()
    assert (project_root / "tests" / "conftest.py").exists()


def test_config_example_is_valid_yaml():
    """Test that the example config file is valid YAML with known sections."""
    project_root = Path(__file__).parent.parent
    with open(project_root / "surface-immersions.yaml.example", "r", encoding="utf-8") as f:
        config = yaml.safe_load(f)

    assert config["output_format"] == "text"
    assert "tolerances" in config
    assert config["tolerances"]["sample_cap"] == 4096
