"""
测试日志配置模块

验证日志级别、文件轮转、控制台输出以及动态调整级别。
"""

import logging
import logging.handlers
import re
import sys

import pytest

from surface_immersions.logging_config import (
    DEFAULT_BACKUP_COUNT,
    DEFAULT_MAX_BYTES,
    get_logger,
    set_log_level,
    setup_logging,
    shutdown_logging,
)


def _flush(logger):
    for handler in logger.handlers:
        handler.flush()


class TestLoggingConfig:
    """测试日志配置功能"""

    def test_setup_logging_creates_log_file(self, tmp_path):
        log_file = tmp_path / "run.log"
        logger = setup_logging(log_file=str(log_file), log_level="INFO")
        assert logger is not None
        assert log_file.exists()
        shutdown_logging()

    def test_console_only_by_default(self):
        """不指定日志文件时只有一个写到 stderr 的处理器"""
        logger = setup_logging(log_level="INFO")
        assert len(logger.handlers) == 1
        handler = logger.handlers[0]
        assert isinstance(handler, logging.StreamHandler)
        assert handler.stream is sys.stderr
        shutdown_logging()

    @pytest.mark.parametrize(
        "level,expected",
        [
            ("DEBUG", logging.DEBUG),
            ("info", logging.INFO),
            ("WARN", logging.WARNING),
            ("ERROR", logging.ERROR),
        ],
    )
    def test_levels(self, tmp_path, level, expected):
        logger = setup_logging(log_file=str(tmp_path / "run.log"), log_level=level)
        assert logger.level == expected
        shutdown_logging()

    def test_setup_logging_invalid_level(self, tmp_path):
        with pytest.raises(ValueError, match="Invalid log level"):
            setup_logging(log_file=str(tmp_path / "run.log"), log_level="LOUD")

    def test_setup_logging_creates_directory(self, tmp_path):
        log_file = tmp_path / "logs" / "nested" / "run.log"
        setup_logging(log_file=str(log_file), log_level="INFO")
        assert log_file.exists()
        shutdown_logging()

    def test_log_level_filtering(self, tmp_path):
        log_file = tmp_path / "run.log"
        logger = setup_logging(log_file=str(log_file), log_level="INFO")
        logger.debug("crossing detail")
        logger.info("verdict yes")
        logger.warning("move redrawn")
        _flush(logger)

        content = log_file.read_text(encoding="utf-8")
        assert "crossing detail" not in content
        assert "verdict yes" in content
        assert "move redrawn" in content
        shutdown_logging()

    def test_named_logger_writes_module_name(self, tmp_path):
        log_file = tmp_path / "run.log"
        setup_logging(log_file=str(log_file), log_level="INFO")
        module_logger = get_logger("surface_immersions.classify")
        module_logger.info("Invariants computed")
        _flush(logging.getLogger())

        content = log_file.read_text(encoding="utf-8")
        assert "surface_immersions.classify" in content
        assert "Invariants computed" in content
        shutdown_logging()

    def test_set_log_level_dynamically(self, tmp_path):
        log_file = tmp_path / "run.log"
        logger = setup_logging(log_file=str(log_file), log_level="INFO")
        logger.debug("before change")
        set_log_level("DEBUG")
        logger.debug("after change")
        _flush(logger)

        content = log_file.read_text(encoding="utf-8")
        assert "before change" not in content
        assert "after change" in content
        shutdown_logging()

    def test_set_log_level_invalid(self, tmp_path):
        setup_logging(log_file=str(tmp_path / "run.log"), log_level="INFO")
        with pytest.raises(ValueError, match="Invalid log level"):
            set_log_level("INVALID")
        shutdown_logging()

    def test_default_format_has_timestamp(self, tmp_path):
        log_file = tmp_path / "run.log"
        logger = setup_logging(log_file=str(log_file), log_level="INFO")
        logger.info("Test message")
        _flush(logger)

        content = log_file.read_text(encoding="utf-8")
        assert "INFO" in content
        assert re.search(r"\d{4}-\d{2}-\d{2} \d{2}:\d{2}:\d{2}", content)
        shutdown_logging()

    def test_custom_log_format(self, tmp_path):
        log_file = tmp_path / "run.log"
        logger = setup_logging(
            log_file=str(log_file), log_level="INFO", log_format="%(levelname)s - %(message)s"
        )
        logger.info("Custom format test")
        _flush(logger)
        assert "INFO - Custom format test" in log_file.read_text(encoding="utf-8")
        shutdown_logging()

    def test_rotating_file_handler_configuration(self, tmp_path):
        logger = setup_logging(
            log_file=str(tmp_path / "run.log"), log_level="INFO", max_bytes=1024, backup_count=5
        )
        handlers = [
            h for h in logger.handlers if isinstance(h, logging.handlers.RotatingFileHandler)
        ]
        assert len(handlers) == 1
        assert handlers[0].maxBytes == 1024
        assert handlers[0].backupCount == 5
        shutdown_logging()

    def test_defaults(self):
        assert DEFAULT_MAX_BYTES == 10 * 1024 * 1024
        assert DEFAULT_BACKUP_COUNT == 3

    def test_reconfiguring_replaces_handlers(self, tmp_path):
        first = setup_logging(log_file=str(tmp_path / "a.log"), log_level="INFO")
        count = len(first.handlers)
        second = setup_logging(log_file=str(tmp_path / "b.log"), log_level="DEBUG")
        assert len(second.handlers) == count
        shutdown_logging()

    def test_logging_with_unicode(self, tmp_path):
        log_file = tmp_path / "run.log"
        logger = setup_logging(log_file=str(log_file), log_level="INFO")
        logger.info("Möbius 带上的核心曲线")
        _flush(logger)
        assert "Möbius 带上的核心曲线" in log_file.read_text(encoding="utf-8")
        shutdown_logging()
