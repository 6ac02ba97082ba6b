"""
主控台與日誌
"""

import logging
from typing import IO, Optional

from rich.console import Console
from rich.logging import RichHandler

# 固定寬度，讓表格輸出在不同終端機上逐位元組一致
TABLE_WIDTH = 140


def setup_logging(level: str = "WARNING") -> None:
    """設置日誌（輸出到 stderr）"""
    handler = RichHandler(
        console=Console(stderr=True),
        show_time=False,
        show_path=False,
        markup=False,
    )
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format="%(name)s: %(message)s",
        handlers=[handler],
        force=True,
    )


def make_console(stream: Optional[IO[str]] = None) -> Console:
    """建立資料輸出用的 Console"""
    return Console(
        file=stream,
        width=TABLE_WIDTH,
        highlight=False,
        soft_wrap=False,
        emoji=False,
    )
