"""
日志配置模块

配置 Python logging：控制台输出到 stderr，可选带轮转的日志文件。
"""

import logging
import logging.handlers
import os
import sys
from typing import Optional


DEFAULT_LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DEFAULT_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

DEFAULT_MAX_BYTES = 10 * 1024 * 1024  # 10MB
DEFAULT_BACKUP_COUNT = 3

LEVEL_MAP = {
    "DEBUG": logging.DEBUG,
    "INFO": logging.INFO,
    "WARN": logging.WARNING,
    "WARNING": logging.WARNING,
    "ERROR": logging.ERROR,
    "CRITICAL": logging.CRITICAL,
}


def _resolve_level(level: str) -> int:
    if level.upper() not in LEVEL_MAP:
        raise ValueError(f"Invalid log level: {level}. Must be one of {list(LEVEL_MAP.keys())}")
    return LEVEL_MAP[level.upper()]


def setup_logging(
    log_file: Optional[str] = None,
    log_level: str = "INFO",
    max_bytes: int = DEFAULT_MAX_BYTES,
    backup_count: int = DEFAULT_BACKUP_COUNT,
    log_format: Optional[str] = None,
    date_format: Optional[str] = None,
) -> logging.Logger:
    """
    配置应用程序的日志系统

    Args:
        log_file: 日志文件路径；为 None 时只输出到控制台
        log_level: 日志级别 (DEBUG, INFO, WARN, ERROR)
        max_bytes: 日志文件最大大小（字节），超过后轮转
        backup_count: 保留的备份日志文件数量
        log_format: 自定义日志格式
        date_format: 自定义日期格式

    Returns:
        logging.Logger: 配置好的根日志记录器

    Raises:
        ValueError: 日志级别无效
        IOError: 无法创建日志目录或文件
    """
    level = _resolve_level(log_level)

    root_logger = logging.getLogger()
    root_logger.setLevel(level)
    root_logger.handlers.clear()

    formatter = logging.Formatter(
        fmt=log_format or DEFAULT_LOG_FORMAT, datefmt=date_format or DEFAULT_DATE_FORMAT
    )

    if log_file:
        log_dir = os.path.dirname(log_file)
        if log_dir:
            try:
                os.makedirs(log_dir, exist_ok=True)
            except Exception as e:
                raise IOError(f"Failed to create log directory {log_dir}: {e}")
        try:
            file_handler = logging.handlers.RotatingFileHandler(
                filename=log_file, maxBytes=max_bytes, backupCount=backup_count, encoding="utf-8"
            )
        except Exception as e:
            raise IOError(f"Failed to create log file handler for {log_file}: {e}")
        file_handler.setLevel(level)
        file_handler.setFormatter(formatter)
        root_logger.addHandler(file_handler)

    # 结果输出在 stdout，日志只走 stderr
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)
    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)

    root_logger.debug(f"Logging system initialized: level={log_level}, file={log_file}")
    return root_logger


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(name)


def set_log_level(level: str) -> None:
    """
    动态设置日志级别

    Raises:
        ValueError: 日志级别无效
    """
    new_level = _resolve_level(level)
    root_logger = logging.getLogger()
    root_logger.setLevel(new_level)
    for handler in root_logger.handlers:
        handler.setLevel(new_level)
    root_logger.debug(f"Log level changed to {level}")


def shutdown_logging() -> None:
    """关闭日志系统，刷新并关闭所有处理器"""
    logging.shutdown()
